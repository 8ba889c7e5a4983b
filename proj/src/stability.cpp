#include "kstar/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

namespace kstar {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool needs_distances(const Clusterer& c) {
  if (c.is_hierarchical()) return true;
  if (const auto* k = std::get_if<KMeansSpec>(&c.spec())) return k->from_hier;
  if (const auto* n = std::get_if<NmfSpec>(&c.spec())) return n->from_hier;
  return false;
}

// Input data plus full distance matrix (when the clusterer uses one), so
// that row subsets slice distances instead of recomputing them.
struct Source {
  const Matrix& x;
  std::optional<Matrix> own;
  const Matrix* dist = nullptr;

  Source(const ClusterInput& in, const Clusterer& c) : x(in.x), dist(in.dist) {
    if (!dist && needs_distances(c)) {
      own = euclidean_distances(x);
      dist = &*own;
    }
  }

  Partition cluster(const Clusterer& c, const std::vector<int>& rows, int k, std::uint64_t seed) const {
    const Matrix sx = select_rows(x, rows);
    if (dist) {
      const Matrix sd = submatrix(*dist, rows);
      return c.cluster({sx, &sd}, k, seed);
    }
    return c.cluster({sx}, k, seed);
  }

  std::vector<Partition> cluster_range(const Clusterer& c, const std::vector<int>& rows, int kmin, int kmax,
                                       std::uint64_t seed) const {
    const Matrix sx = select_rows(x, rows);
    if (dist) {
      const Matrix sd = submatrix(*dist, rows);
      return c.cluster_range({sx, &sd}, kmin, kmax, seed);
    }
    return c.cluster_range({sx}, kmin, kmax, seed);
  }

  Partition cluster_all(const Clusterer& c, int k, std::uint64_t seed) const { return c.cluster({x, dist}, k, seed); }
};

void check_range(int kmin, int kmax, int H, Eigen::Index n) {
  if (kmin < 2 || kmax < kmin) throw ParameterError("k range must satisfy 2 <= kmin <= kmax");
  if (H < 1) throw ParameterError("H must be >= 1");
  if (kmax > n) throw ParameterError("kmax exceeds the number of items");
}

void check_fraction(double f, const char* what) {
  if (!(f > 0.0 && f < 1.0)) throw ParameterError(std::string(what) + " must lie in (0, 1)");
}

double median(std::vector<double> v) {
  v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return std::isnan(x); }), v.end());
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  int c = 0;
  for (double x : v)
    if (!std::isnan(x)) {
      s += x;
      ++c;
    }
  return c ? s / c : kNaN;
}

}  // namespace

Classifier::Classifier(const Matrix& x, const Partition& p) : centroids_(centroids(x, p)), trained_(true) {}

std::vector<int> Classifier::predict(const Matrix& x) const {
  if (!trained_) throw ParameterError("classifier is not trained");
  std::vector<int> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    int best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < centroids_.rows(); ++j) {
      const double d = (x.row(i) - centroids_.row(j)).squaredNorm();
      if (d < bd) {
        bd = d;
        best = static_cast<int>(j);
      }
    }
    out[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

Split split_rows(int n, double alpha, std::uint64_t seed) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ParameterError("split fraction must lie in [0, 1)");
  Split s;
  if (alpha == 0.0) {
    s.learning.resize(static_cast<std::size_t>(n));
    std::iota(s.learning.begin(), s.learning.end(), 0);
    return s;
  }
  const int nt = static_cast<int>(std::ceil(alpha * n - 1e-9));
  Rng rng(seed);
  s.training = rng.sample_without_replacement(n, nt);
  std::sort(s.training.begin(), s.training.end());
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  for (int t : s.training) in[static_cast<std::size_t>(t)] = 1;
  for (int i = 0; i < n; ++i)
    if (!in[static_cast<std::size_t>(i)]) s.learning.push_back(i);
  return s;
}

void ConsensusState::add_sample(std::span<const int> rows) {
  for (std::size_t a = 0; a < rows.size(); ++a) {
    const int r = rows[a];
    ++i(r, r);
    for (std::size_t b = a + 1; b < rows.size(); ++b) ++i(rows[b], r);
  }
}

void ConsensusState::add_clustering(std::span<const int> rows, std::span<const int> labels) {
  if (rows.size() != labels.size()) throw ParameterError("rows and labels differ in length");
  int kk = 0;
  for (int l : labels) kk = std::max(kk, l + 1);
  std::vector<std::vector<int>> groups(static_cast<std::size_t>(kk));
  for (std::size_t p = 0; p < rows.size(); ++p) groups[static_cast<std::size_t>(labels[p])].push_back(rows[p]);
  for (const auto& g : groups)
    for (std::size_t a = 0; a < g.size(); ++a) {
      ++m(g[a], g[a]);
      for (std::size_t b = a + 1; b < g.size(); ++b) ++m(g[b], g[a]);
    }
}

void ConsensusState::symmetrize() {
  m.triangularView<Eigen::StrictlyUpper>() = m.transpose();
  i.triangularView<Eigen::StrictlyUpper>() = i.transpose();
}

Matrix consensus_matrix(const ConsensusState& s) {
  const Eigen::Index n = s.m.rows();
  Matrix c(n, n);
  for (Eigen::Index b = 0; b < n; ++b)
    for (Eigen::Index a = 0; a < n; ++a) {
      if (a == b)
        c(a, b) = 1.0;
      else
        c(a, b) = s.i(a, b) > 0 ? static_cast<double>(s.m(a, b)) / s.i(a, b) : kNaN;
    }
  return c;
}

Matrix consensus_to_distance(const ConsensusState& s, Warnings* warnings) {
  Matrix d = consensus_matrix(s);
  long undefined = 0;
  for (Eigen::Index b = 0; b < d.cols(); ++b)
    for (Eigen::Index a = 0; a < d.rows(); ++a) {
      if (std::isnan(d(a, b))) {
        d(a, b) = 1.0;
        if (a < b) ++undefined;
      } else {
        d(a, b) = a == b ? 0.0 : 1.0 - d(a, b);
      }
    }
  if (undefined > 0)
    warn(warnings, std::to_string(undefined) + " pair(s) never sampled together, distance set to 1");
  return d;
}

double consensus_area(const ConsensusState& s, Warnings* warnings) {
  const Eigen::Index n = s.m.rows();
  std::vector<double> x;
  x.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  long undefined = 0;
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a + 1; b < n; ++b) {
      if (s.i(b, a) > 0)
        x.push_back(static_cast<double>(s.m(b, a)) / s.i(b, a));
      else
        ++undefined;
    }
  if (undefined > 0)
    warn(warnings, "k = " + std::to_string(s.k) + ": " + std::to_string(undefined) +
                       " undefined consensus entries excluded from the CDF");
  if (x.empty()) return 0.0;
  std::sort(x.begin(), x.end());
  const double N = static_cast<double>(x.size());
  double area = 0.0;
  // Exact area under the step CDF: on [x_{i-1}, x_i) it equals CDF(x_{i-1}),
  // which is i / N when x_i > x_{i-1}.
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i] == x[i - 1]) continue;
    area += (x[i] - x[i - 1]) * (static_cast<double>(i) / N);
  }
  return area;
}

Prediction consensus_predict(const CurveSeries& area, double tau) {
  Prediction p;
  p.measure = "consensus";
  p.rule = "delta_stabilization";
  p.parameters["tau"] = tau;
  const std::size_t K = area.size();
  if (K == 0) throw ParameterError("empty area curve");
  // inc[i]: relative change of A from k_{i-1} to k_i.
  std::vector<double> inc(K, 0.0);
  for (std::size_t i = 1; i < K; ++i) {
    const double prev = area.value[i - 1];
    const double diff = area.value[i] - prev;
    inc[i] = prev > 0.0 ? diff / prev : (diff > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  }
  for (std::size_t i = 0; i < K; ++i) {
    if (i > 0 && inc[i] < 0.0) continue;
    bool stable = true;
    for (std::size_t j = i + 1; j < K && stable; ++j) stable = std::abs(inc[j]) <= tau;
    if (stable) {
      p.k_star = area.k[i];
      p.evidence.k = area.k;
      p.evidence.value = inc;
      return p;
    }
  }
  p.k_star = area.k.back();
  return p;
}

ConsensusResult consensus_summarize(std::vector<ConsensusState> states, int kmin, double tau, const std::string& name) {
  ConsensusResult r;
  Warnings w;
  const std::size_t K = states.size();
  for (std::size_t i = 0; i < K; ++i) {
    r.area.k.push_back(kmin + static_cast<int>(i));
    r.area.value.push_back(consensus_area(states[i], &w));
  }
  // Delta as displayed: A(kmin) at kmin, else (A(k+1) - A(k)) / A(k); the
  // last k has no successor and is omitted. Delta' uses the running maximum.
  std::vector<double> aprime(K);
  for (std::size_t i = 0; i < K; ++i) aprime[i] = i ? std::max(aprime[i - 1], r.area.value[i]) : r.area.value[i];
  auto rel = [](double next, double cur) {
    return cur > 0.0 ? (next - cur) / cur : (next > cur ? std::numeric_limits<double>::infinity() : 0.0);
  };
  for (std::size_t i = 0; i < K; ++i) {
    if (i > 0 && i + 1 >= K) break;
    r.delta.k.push_back(r.area.k[i]);
    r.delta_prime.k.push_back(r.area.k[i]);
    r.delta.value.push_back(i == 0 ? r.area.value[0] : rel(r.area.value[i + 1], r.area.value[i]));
    r.delta_prime.value.push_back(i == 0 ? aprime[0] : rel(aprime[i + 1], aprime[i]));
  }
  r.prediction = consensus_predict(r.area, tau);
  r.prediction.measure = name;
  r.prediction.warnings = std::move(w);
  r.states = std::move(states);
  return r;
}

ConsensusResult consensus_run(const ClusterInput& in, const Clusterer& c, const ConsensusOptions& opt,
                              std::uint64_t seed) {
  const int n = static_cast<int>(in.x.rows());
  check_range(opt.kmin, opt.kmax, opt.H, n);
  check_fraction(opt.p, "subsampling fraction p");
  const Source src(in, c);
  std::vector<ConsensusState> states;
  for (int k = opt.kmin; k <= opt.kmax; ++k) {
    ConsensusState s(n, k);
    for (int h = 0; h < opt.H; ++h) {
      const std::uint64_t it = opt.shared_samples ? seeds::fast_iteration(seed, h) : seeds::iteration(seed, k, h);
      const auto rows = subsample_rows(n, opt.p, seeds::dgp(it, 1));
      const Partition p = src.cluster(c, rows, k, seeds::cluster(it, 0));
      s.add_sample(rows);
      s.add_clustering(rows, p.labels());
    }
    s.symmetrize();
    states.push_back(std::move(s));
  }
  ConsensusResult r = consensus_summarize(std::move(states), opt.kmin, opt.tau, "consensus");
  r.prediction.parameters["H"] = opt.H;
  r.prediction.parameters["p"] = opt.p;
  return r;
}

ConsensusResult fc_run(const ClusterInput& in, const Clusterer& c, const ConsensusOptions& opt, std::uint64_t seed) {
  const int n = static_cast<int>(in.x.rows());
  check_range(opt.kmin, opt.kmax, opt.H, n);
  check_fraction(opt.p, "subsampling fraction p");
  const Source src(in, c);
  std::vector<ConsensusState> states;
  for (int k = opt.kmin; k <= opt.kmax; ++k) states.emplace_back(n, k);
  ConsensusState sampled(n, 0);
  for (int h = 0; h < opt.H; ++h) {
    const std::uint64_t it = seeds::fast_iteration(seed, h);
    const auto rows = subsample_rows(n, opt.p, seeds::dgp(it, 1));
    const auto parts = src.cluster_range(c, rows, opt.kmin, opt.kmax, seeds::cluster(it, 0));
    sampled.add_sample(rows);
    for (std::size_t i = 0; i < parts.size(); ++i) states[i].add_clustering(rows, parts[i].labels());
  }
  for (auto& s : states) {
    s.i = sampled.i;
    s.symmetrize();
  }
  ConsensusResult r = consensus_summarize(std::move(states), opt.kmin, opt.tau, "fc");
  r.prediction.parameters["H"] = opt.H;
  r.prediction.parameters["p"] = opt.p;
  return r;
}

double mecca(int l, const Clusterer& c, const Matrix& x, const std::function<double(const Matrix&, const Partition&)>& t,
             int k, NullModel null_model, std::uint64_t seed) {
  if (l < 1) throw ParameterError("MECCA needs l >= 1");
  const double observed = t(x, c.cluster({x}, k, seeds::base_cluster(seed, 0)));
  int larger = 0;
  for (int i = 0; i < l; ++i) {
    const Matrix z = null_dataset(x, null_model, seeds::reference(seed, i));
    if (t(z, c.cluster({z}, k, seeds::reference_run(seed, i))) > observed) ++larger;
  }
  return static_cast<double>(larger) / l;
}

namespace {

// One Clest/Roth round on the rows of src; returns (predicted, clustered)
// labels on the learning part.
std::pair<std::vector<int>, Partition> train_and_cluster(const Source& src, const Clusterer& c, int k, double alpha,
                                                         std::uint64_t it) {
  const int n = static_cast<int>(src.x.rows());
  const Split sp = split_rows(n, alpha, seeds::split(it, 0));
  if (static_cast<int>(sp.training.size()) < k || static_cast<int>(sp.learning.size()) < k)
    throw ParameterError("split leaves fewer than k = " + std::to_string(k) + " items on one side");
  const Partition train_labels = src.cluster(c, sp.training, k, seeds::train(it, 0));
  const Classifier cls(select_rows(src.x, sp.training), train_labels);
  auto predicted = cls.predict(select_rows(src.x, sp.learning));
  Partition clustered = src.cluster(c, sp.learning, k, seeds::cluster(it, 1));
  return {std::move(predicted), std::move(clustered)};
}

}  // namespace

double replicating_analysis(const Matrix& x, const Clusterer& c, int k, double alpha, ExternalIndex index,
                            std::uint64_t seed) {
  const Source src({x}, c);
  auto [pred, clus] = train_and_cluster(src, c, k, alpha, seed);
  return external_index(index, contingency(pred, clus.labels()));
}

double me_similarity(std::span<const int> rows1, std::span<const int> labels1, std::span<const int> rows2,
                     std::span<const int> labels2, ExternalIndex index, Warnings* warnings) {
  std::vector<int> a, b;
  std::size_t i = 0, j = 0;
  while (i < rows1.size() && j < rows2.size()) {
    if (rows1[i] < rows2[j]) {
      ++i;
    } else if (rows2[j] < rows1[i]) {
      ++j;
    } else {
      a.push_back(labels1[i++]);
      b.push_back(labels2[j++]);
    }
  }
  if (a.size() < 2) {
    warn(warnings, "subsamples share fewer than 2 items, round skipped");
    return kNaN;
  }
  return external_index(index, contingency(a, b), warnings);
}

MeResult me_summarize(std::vector<std::vector<double>> values, const MeOptions& opt) {
  MeResult r;
  r.bin_low = opt.index == ExternalIndex::AdjustedRand ? -1.0 : 0.0;
  r.bin_high = 1.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::vector<int> hist(static_cast<std::size_t>(opt.bins), 0);
    int above = 0, valid = 0;
    for (double v : values[i]) {
      if (std::isnan(v)) continue;
      ++valid;
      if (v > opt.threshold) ++above;
      int bin = static_cast<int>(std::floor((v - r.bin_low) / (r.bin_high - r.bin_low) * opt.bins));
      ++hist[static_cast<std::size_t>(std::clamp(bin, 0, opt.bins - 1))];
    }
    r.histograms.push_back(std::move(hist));
    r.stable_fraction.k.push_back(opt.kmin + static_cast<int>(i));
    r.stable_fraction.value.push_back(valid ? static_cast<double>(above) / valid : 0.0);
  }
  r.prediction.measure = "me";
  r.prediction.rule = "threshold_fraction";
  r.prediction.parameters["threshold"] = opt.threshold;
  r.prediction.parameters["fraction"] = opt.fraction;
  r.prediction.parameters["H"] = opt.H;
  r.prediction.parameters["beta"] = opt.beta;
  r.prediction.evidence = r.stable_fraction;
  const auto& f = r.stable_fraction.value;
  r.prediction.k_star = kNoStructure;
  bool found = false;
  for (std::size_t i = 0; i + 1 < f.size(); ++i)
    if (f[i] >= opt.fraction && f[i + 1] < opt.fraction) {
      r.prediction.k_star = r.stable_fraction.k[i];
      found = true;
      break;
    }
  if (!found) r.prediction.warnings.push_back("no k where the stable fraction drops below the cutoff");
  r.values = std::move(values);
  return r;
}

MeResult me_run(const ClusterInput& in, const Clusterer& c, const MeOptions& opt, std::uint64_t seed) {
  const int n = static_cast<int>(in.x.rows());
  check_range(opt.kmin, opt.kmax, opt.H, n);
  check_fraction(opt.beta, "subsampling fraction beta");
  if (opt.bins < 1) throw ParameterError("ME needs at least one histogram bin");
  const Source src(in, c);
  std::vector<std::vector<double>> values;
  for (int k = opt.kmin; k <= opt.kmax; ++k) {
    std::vector<double> v;
    for (int h = 0; h < opt.H; ++h) {
      const std::uint64_t it = seeds::iteration(seed, k, h);
      const auto r1 = subsample_rows(n, opt.beta, seeds::dgp(it, 1));
      const auto r2 = subsample_rows(n, opt.beta, seeds::dgp(it, 2));
      const Partition p1 = src.cluster(c, r1, k, seeds::cluster(it, 0));
      const Partition p2 = src.cluster(c, r2, k, seeds::cluster(it, 1));
      v.push_back(me_similarity(r1, p1.labels(), r2, p2.labels(), opt.index));
    }
    values.push_back(std::move(v));
  }
  return me_summarize(std::move(values), opt);
}

std::vector<std::vector<double>> clest_statistic(const ClusterInput& in, const Clusterer& c, const ClestOptions& opt,
                                                 std::uint64_t seed) {
  const Source src(in, c);
  std::vector<std::vector<double>> values;
  for (int k = opt.kmin; k <= opt.kmax; ++k) {
    std::vector<double> v;
    for (int h = 0; h < opt.H; ++h) {
      auto [pred, clus] = train_and_cluster(src, c, k, opt.alpha, seeds::iteration(seed, k, h));
      v.push_back(external_index(opt.index, contingency(pred, clus.labels())));
    }
    values.push_back(std::move(v));
  }
  return values;
}

ClestResult clest_summarize(std::vector<std::vector<double>> observed,
                            const std::vector<std::vector<std::vector<double>>>& reference, const ClestOptions& opt) {
  ClestResult r;
  const int B0 = static_cast<int>(reference.size());
  std::vector<int> candidates;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const int k = opt.kmin + static_cast<int>(i);
    const double t = median(observed[i]);
    double t0 = 0.0;
    int ge = 0;
    for (const auto& ref : reference) {
      const double tb = median(ref[i]);
      t0 += tb;
      if (tb >= t) ++ge;
    }
    t0 = B0 ? t0 / B0 : 0.0;
    const double p = B0 ? static_cast<double>(ge) / B0 : 1.0;
    const double d = t - t0;
    for (auto* curve : {&r.observed, &r.reference, &r.p_value, &r.d}) curve->k.push_back(k);
    r.observed.value.push_back(t);
    r.reference.value.push_back(t0);
    r.p_value.value.push_back(p);
    r.d.value.push_back(d);
    if (p <= opt.p_max && d >= opt.d_min) candidates.push_back(static_cast<int>(i));
  }
  Prediction& pr = r.prediction;
  pr.measure = "clest";
  pr.rule = "max_d_over_significant";
  pr.parameters["H"] = opt.H;
  pr.parameters["B0"] = B0;
  pr.parameters["alpha"] = opt.alpha;
  pr.parameters["p_max"] = opt.p_max;
  pr.parameters["d_min"] = opt.d_min;
  pr.evidence = r.d;
  pr.k_star = kNoStructure;
  double best = -std::numeric_limits<double>::infinity();
  for (int i : candidates)
    if (r.d.value[static_cast<std::size_t>(i)] > best) {
      best = r.d.value[static_cast<std::size_t>(i)];
      pr.k_star = r.d.k[static_cast<std::size_t>(i)];
    }
  r.values = std::move(observed);
  return r;
}

ClestResult clest_run(const ClusterInput& in, const Clusterer& c, const ClestOptions& opt, std::uint64_t seed) {
  check_range(opt.kmin, opt.kmax, opt.H, in.x.rows());
  check_fraction(opt.alpha, "split fraction alpha");
  if (opt.B0 < 1) throw ParameterError("Clest needs B0 >= 1");
  auto observed = clest_statistic(in, c, opt, seed);
  std::vector<std::vector<std::vector<double>>> reference;
  for (int b = 0; b < opt.B0; ++b) {
    const Matrix z = null_dataset(in.x, opt.null_model, seeds::reference(seed, b));
    reference.push_back(clest_statistic({z}, c, opt, seeds::reference_run(seed, b)));
  }
  return clest_summarize(std::move(observed), reference, opt);
}

double levine_domany_agreement(const Partition& base, std::span<const int> rows, std::span<const int> labels) {
  long pairs = 0, agree = 0;
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = a + 1; b < rows.size(); ++b) {
      if (base[static_cast<std::size_t>(rows[a])] != base[static_cast<std::size_t>(rows[b])]) continue;
      ++pairs;
      if (labels[a] == labels[b]) ++agree;
    }
  return pairs ? static_cast<double>(agree) / pairs : kNaN;
}

LevineDomanyResult levine_domany_summarize(std::vector<std::vector<double>> values, int kmin) {
  LevineDomanyResult r;
  for (std::size_t i = 0; i < values.size(); ++i) {
    double m = mean(values[i]);
    if (std::isnan(m)) {
      m = 0.0;
      r.prediction.warnings.push_back("k = " + std::to_string(kmin + static_cast<int>(i)) + ": no eligible pairs");
    }
    r.figure.k.push_back(kmin + static_cast<int>(i));
    r.figure.value.push_back(m);
  }
  const auto& v = r.figure.value;
  const std::size_t K = v.size();
  std::size_t g = 0;
  for (std::size_t i = 1; i < K; ++i)
    if (v[i] > v[g]) g = i;
  std::size_t first = K - 1;
  for (std::size_t i = 0; i < K; ++i)
    if ((i == 0 || v[i] >= v[i - 1]) && (i + 1 == K || v[i] > v[i + 1])) {
      first = i;
      break;
    }
  r.first_local_max = r.figure.k[first];
  r.prediction.measure = "levine_domany";
  r.prediction.rule = "global_max";
  r.prediction.k_star = r.figure.k[g];
  r.prediction.parameters["first_local_max"] = r.first_local_max;
  r.prediction.evidence = r.figure;
  r.values = std::move(values);
  return r;
}

LevineDomanyResult levine_domany_run(const ClusterInput& in, const Clusterer& c, const LevineDomanyOptions& opt,
                                     std::uint64_t seed) {
  const int n = static_cast<int>(in.x.rows());
  check_range(opt.kmin, opt.kmax, opt.H, n);
  check_fraction(opt.beta, "subsampling fraction beta");
  const Source src(in, c);
  std::vector<std::vector<double>> values;
  for (int k = opt.kmin; k <= opt.kmax; ++k) {
    const Partition base = src.cluster_all(c, k, seeds::base_cluster(seed, 0));
    std::vector<double> v;
    for (int h = 0; h < opt.H; ++h) {
      const std::uint64_t it = seeds::iteration(seed, k, h);
      const auto rows = subsample_rows(n, opt.beta, seeds::dgp(it, 1));
      const Partition p = src.cluster(c, rows, k, seeds::cluster(it, 1));
      v.push_back(levine_domany_agreement(base, rows, p.labels()));
    }
    values.push_back(std::move(v));
  }
  auto r = levine_domany_summarize(std::move(values), opt.kmin);
  r.prediction.parameters["H"] = opt.H;
  r.prediction.parameters["beta"] = opt.beta;
  return r;
}

double roth_instability(std::span<const int> predicted, std::span<const int> clustered, int k) {
  if (k < 2) throw ParameterError("Roth instability needs k >= 2");
  int kc = 0;
  for (int l : clustered) kc = std::max(kc, l + 1);
  const Matching m = max_overlap_matching(predicted, k, clustered, std::max(kc, 1));
  const double miss = 1.0 - static_cast<double>(m.overlap) / static_cast<double>(predicted.size());
  return miss / (1.0 - 1.0 / k);
}

RothResult roth_summarize(std::vector<std::vector<double>> values, int kmin) {
  RothResult r;
  for (std::size_t i = 0; i < values.size(); ++i) {
    r.instability.k.push_back(kmin + static_cast<int>(i));
    r.instability.value.push_back(mean(values[i]));
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < r.instability.size(); ++i)
    if (r.instability.value[i] < r.instability.value[best]) best = i;
  r.prediction.measure = "roth";
  r.prediction.rule = "argmin";
  r.prediction.k_star = r.instability.k[best];
  r.prediction.evidence = r.instability;
  r.values = std::move(values);
  return r;
}

RothResult roth_run(const ClusterInput& in, const Clusterer& c, const RothOptions& opt, std::uint64_t seed) {
  check_range(opt.kmin, opt.kmax, opt.H, in.x.rows());
  check_fraction(opt.alpha, "split fraction alpha");
  const Source src(in, c);
  std::vector<std::vector<double>> values;
  for (int k = opt.kmin; k <= opt.kmax; ++k) {
    std::vector<double> v;
    for (int h = 0; h < opt.H; ++h) {
      auto [pred, clus] = train_and_cluster(src, c, k, opt.alpha, seeds::iteration(seed, k, h));
      v.push_back(roth_instability(pred, clus.labels(), k));
    }
    values.push_back(std::move(v));
  }
  auto r = roth_summarize(std::move(values), opt.kmin);
  r.prediction.parameters["H"] = opt.H;
  r.prediction.parameters["alpha"] = opt.alpha;
  return r;
}

BagClust1Result bagclust1(const ClusterInput& in, const Clusterer& c, int k, int rounds, std::uint64_t seed) {
  const int n = static_cast<int>(in.x.rows());
  if (rounds < 1) throw ParameterError("BagClust1 needs at least one round");
  if (k < 1 || k > n) throw ParameterError("BagClust1 needs 1 <= k <= n");
  const Source src(in, c);
  const Partition base = src.cluster_all(c, k, seeds::base_cluster(seed, 0));
  BagClust1Result r;
  r.votes = IntMatrix::Zero(n, k);
  for (int h = 0; h < rounds; ++h) {
    const std::uint64_t it = seeds::iteration(seed, k, h);
    const auto rows = bootstrap_rows(n, seeds::dgp(it, 1));
    const Partition p = src.cluster(c, rows, k, seeds::cluster(it, 1));
    const auto ref = select_labels(base, rows);
    const Matching m = max_overlap_matching(ref, k, p.labels(), p.k());
    r.overlaps.push_back(m.overlap);
    for (std::size_t q = 0; q < rows.size(); ++q) ++r.votes(rows[q], m.map[static_cast<std::size_t>(p[q])]);
  }
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (r.votes.row(i).sum() == 0) {
      labels[static_cast<std::size_t>(i)] = base[static_cast<std::size_t>(i)];
      continue;
    }
    Eigen::Index best;
    r.votes.row(i).maxCoeff(&best);
    labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  std::vector<char> used(static_cast<std::size_t>(k), 0);
  for (int l : labels) used[static_cast<std::size_t>(l)] = 1;
  const bool all = std::all_of(used.begin(), used.end(), [](char u) { return u; });
  r.partition = all ? Partition(std::move(labels), k) : Partition::compact(labels);
  return r;
}

BagClust2Result bagclust2_finish(ConsensusState state, int k, Warnings* warnings) {
  BagClust2Result r;
  r.dissimilarity = consensus_to_distance(state, warnings);
  r.partition = hierarchical(r.dissimilarity, Linkage::Average, k);
  r.state = std::move(state);
  return r;
}

BagClust2Result bagclust2(const ClusterInput& in, const Clusterer& c, int k, int rounds, double beta,
                          std::uint64_t seed, Warnings* warnings) {
  const int n = static_cast<int>(in.x.rows());
  if (rounds < 1) throw ParameterError("BagClust2 needs at least one round");
  if (k < 1 || k > n) throw ParameterError("BagClust2 needs 1 <= k <= n");
  check_fraction(beta, "subsampling fraction beta");
  const Source src(in, c);
  ConsensusState s(n, k);
  for (int h = 0; h < rounds; ++h) {
    const std::uint64_t it = seeds::iteration(seed, k, h);
    const auto rows = subsample_rows(n, beta, seeds::dgp(it, 1));
    const Partition p = src.cluster(c, rows, k, seeds::cluster(it, 0));
    s.add_sample(rows);
    s.add_clustering(rows, p.labels());
  }
  s.symmetrize();
  return bagclust2_finish(std::move(s), k, warnings);
}

}  // namespace kstar
