#include "kstar/indices.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace kstar {

namespace {

using Int = std::int64_t;
using Wide = __int128;

Int choose2(Int x) { return x * (x - 1) / 2; }

std::vector<int> dense(std::span<const int> labels, int& count) {
  std::map<int, int> ids;
  for (int l : labels) ids.emplace(l, 0);
  int next = 0;
  for (auto& [l, id] : ids) id = next++;
  count = next;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = ids[labels[i]];
  return out;
}

}  // namespace

ContingencyTable contingency(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw ParameterError("labelings differ in length");
  int ka = 0, kb = 0;
  const auto da = dense(a, ka);
  const auto db = dense(b, kb);
  Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic> c = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>::Zero(ka, kb);
  for (std::size_t i = 0; i < da.size(); ++i) ++c(da[i], db[i]);
  return contingency_from_counts(c);
}

ContingencyTable contingency(const Partition& a, const Partition& b) {
  return contingency(std::span<const int>(a.labels()), std::span<const int>(b.labels()));
}

ContingencyTable contingency_from_counts(const Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>& counts) {
  if ((counts.array() < 0).any()) throw DataError("negative contingency count");
  ContingencyTable t;
  t.counts = counts;
  t.row_sums.resize(static_cast<std::size_t>(counts.rows()));
  t.col_sums.resize(static_cast<std::size_t>(counts.cols()));
  for (Eigen::Index i = 0; i < counts.rows(); ++i) t.row_sums[static_cast<std::size_t>(i)] = counts.row(i).sum();
  for (Eigen::Index j = 0; j < counts.cols(); ++j) t.col_sums[static_cast<std::size_t>(j)] = counts.col(j).sum();
  t.n = counts.sum();
  return t;
}

PairCounts pair_counts(const ContingencyTable& t) {
  Int a = 0, rows = 0, cols = 0;
  for (Eigen::Index i = 0; i < t.counts.rows(); ++i)
    for (Eigen::Index j = 0; j < t.counts.cols(); ++j) a += choose2(t.counts(i, j));
  for (Int s : t.row_sums) rows += choose2(s);
  for (Int s : t.col_sums) cols += choose2(s);
  PairCounts p;
  p.a = a;
  p.b = rows - a;
  p.c = cols - a;
  p.d = choose2(t.n) - a - p.b - p.c;
  return p;
}

double rand_index(const ContingencyTable& t) {
  if (t.n < 2) throw DataError("Rand index needs at least 2 items");
  const PairCounts p = pair_counts(t);
  return static_cast<double>(p.a + p.d) / static_cast<double>(choose2(t.n));
}

double adjusted_rand(const ContingencyTable& t, Warnings* warnings) {
  if (t.n < 2) throw DataError("adjusted Rand index needs at least 2 items");
  const PairCounts p = pair_counts(t);
  const Int sum_ij = p.a;
  const Int sum_i = p.a + p.b;
  const Int sum_j = p.a + p.c;
  const Int total = choose2(t.n);
  // ARI = (total*sum_ij - sum_i*sum_j) / (total*(sum_i+sum_j)/2 - sum_i*sum_j),
  // evaluated exactly in 128-bit integers (numerator and denominator scaled by 2).
  const Wide num = 2 * (static_cast<Wide>(total) * sum_ij - static_cast<Wide>(sum_i) * sum_j);
  const Wide den = static_cast<Wide>(total) * (sum_i + sum_j) - 2 * static_cast<Wide>(sum_i) * sum_j;
  if (den == 0) {
    warn(warnings, "adjusted Rand index undefined (zero denominator), reported as 0");
    return 0.0;
  }
  return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

double fowlkes_mallows(const ContingencyTable& t) {
  Int tt = 0, u = 0, v = 0;
  for (Eigen::Index i = 0; i < t.counts.rows(); ++i)
    for (Eigen::Index j = 0; j < t.counts.cols(); ++j) tt += t.counts(i, j) * t.counts(i, j);
  for (Int s : t.row_sums) u += s * s;
  for (Int s : t.col_sums) v += s * s;
  tt -= t.n;
  u -= t.n;
  v -= t.n;
  if (u == 0 || v == 0) throw NumericalError("Fowlkes-Mallows index undefined: a partition has no co-clustered pair");
  return static_cast<double>(tt) / std::sqrt(static_cast<double>(u) * static_cast<double>(v));
}

double f_index(const ContingencyTable& t, double beta) {
  if (t.n < 1) throw DataError("F-index needs at least 1 item");
  const double b2 = beta * beta;
  double f = 0.0;
  for (Eigen::Index i = 0; i < t.counts.rows(); ++i) {
    const double ni = static_cast<double>(t.row_sums[static_cast<std::size_t>(i)]);
    if (ni == 0) continue;
    double best = 0.0;
    for (Eigen::Index j = 0; j < t.counts.cols(); ++j) {
      const double nij = static_cast<double>(t.counts(i, j));
      if (nij == 0) continue;
      const double prec = nij / static_cast<double>(t.col_sums[static_cast<std::size_t>(j)]);
      const double rec = nij / ni;
      best = std::max(best, (b2 + 1.0) * prec * rec / (b2 * prec + rec));
    }
    f += ni / static_cast<double>(t.n) * best;
  }
  return f;
}

ExternalIndex parse_external_index(const std::string& name) {
  if (name == "ari" || name == "adjusted_rand") return ExternalIndex::AdjustedRand;
  if (name == "rand") return ExternalIndex::Rand;
  if (name == "fm" || name == "fowlkes_mallows") return ExternalIndex::FowlkesMallows;
  if (name == "f" || name == "f_index") return ExternalIndex::FIndex;
  throw ParameterError("unknown external index '" + name + "'");
}

std::string to_string(ExternalIndex e) {
  switch (e) {
    case ExternalIndex::AdjustedRand:
      return "ari";
    case ExternalIndex::Rand:
      return "rand";
    case ExternalIndex::FowlkesMallows:
      return "fm";
    case ExternalIndex::FIndex:
      return "f";
  }
  return "?";
}

double external_index(ExternalIndex e, const ContingencyTable& t, Warnings* warnings) {
  switch (e) {
    case ExternalIndex::AdjustedRand:
      return adjusted_rand(t, warnings);
    case ExternalIndex::Rand:
      return rand_index(t);
    case ExternalIndex::FowlkesMallows:
      return fowlkes_mallows(t);
    case ExternalIndex::FIndex:
      return f_index(t);
  }
  return 0.0;
}

}  // namespace kstar
