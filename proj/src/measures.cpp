#include "kstar/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "kstar/seeds.hpp"

namespace kstar {

double CurveSeries::at(int kk) const {
  for (std::size_t i = 0; i < k.size(); ++i)
    if (k[i] == kk) return value[i];
  throw ParameterError("curve has no value at k = " + std::to_string(kk));
}

void CurveSeries::write_csv(std::ostream& out) const {
  out << (dispersion.empty() ? "k,value\n" : "k,value,dispersion\n");
  out.precision(17);
  for (std::size_t i = 0; i < k.size(); ++i) {
    out << k[i] << ',' << value[i];
    if (!dispersion.empty()) out << ',' << dispersion[i];
    out << '\n';
  }
}

namespace {

void check_kmax(Eigen::Index n, int kmax) {
  if (kmax < 1 || kmax > n)
    throw ParameterError("kmax must lie in [1, n], got " + std::to_string(kmax) + " for n = " + std::to_string(n));
}

void check_curve(const CurveSeries& c, std::size_t min_points, const char* what) {
  if (c.size() < min_points)
    throw ParameterError(std::string(what) + " needs at least " + std::to_string(min_points) + " curve points");
  for (std::size_t i = 1; i < c.size(); ++i)
    if (c.k[i] != c.k[i - 1] + 1) throw ParameterError(std::string(what) + " needs consecutive k values");
}

double adjusted_fom(const Matrix& x, Eigen::Index e, const Partition& p) {
  const double n = static_cast<double>(x.rows());
  std::vector<double> sum(static_cast<std::size_t>(p.k()), 0.0);
  const auto sizes = p.sizes();
  for (std::size_t i = 0; i < p.size(); ++i) sum[static_cast<std::size_t>(p[i])] += x(static_cast<Eigen::Index>(i), e);
  double ss = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double mean = sum[static_cast<std::size_t>(p[i])] / sizes[static_cast<std::size_t>(p[i])];
    const double r = x(static_cast<Eigen::Index>(i), e) - mean;
    ss += r * r;
  }
  return std::sqrt(ss / n) / std::sqrt((n - p.k()) / n);
}

Matrix drop_column(const Matrix& x, Eigen::Index e) {
  Matrix out(x.rows(), x.cols() - 1);
  out.leftCols(e) = x.leftCols(e);
  out.rightCols(x.cols() - 1 - e) = x.rightCols(x.cols() - 1 - e);
  return out;
}

void check_fom(const Matrix& x, int kmax) {
  if (x.cols() < 2) throw ParameterError("FOM needs at least 2 features");
  if (kmax < 1 || kmax >= x.rows())
    throw ParameterError("FOM needs 1 <= k < n, got k = " + std::to_string(kmax) + " for n = " + std::to_string(x.rows()));
}

// First interior local maximum of `seg`, or -1.
int first_local_max(const std::vector<double>& seg) {
  for (std::size_t i = 1; i + 1 < seg.size(); ++i)
    if (seg[i] >= seg[i - 1] && seg[i] > seg[i + 1]) return static_cast<int>(i);
  return -1;
}

Prediction geometric(const CurveSeries& curve, double offset, const char* measure) {
  check_curve(curve, 3, measure);
  const std::size_t n = curve.size();
  const double k0 = curve.k.front(), k1 = curve.k.back();
  const double v0 = curve.value.front(), v1 = curve.value.back();
  std::vector<double> seg(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double chord = v0 + (curve.k[i] - k0) / (k1 - k0) * (v1 - v0);
    seg[i] = chord - curve.value[i];
  }
  Prediction p;
  p.measure = measure;
  p.rule = "first_local_max_below_chord";
  p.parameters["offset"] = offset;
  p.evidence.k = curve.k;
  for (double s : seg) p.evidence.value.push_back(s + offset);
  const int i = first_local_max(seg);
  if (i < 0) {
    p.k_star = kNoStructure;
    p.warnings.push_back("segment lengths have no local maximum, no structure reported");
  } else {
    p.k_star = curve.k[static_cast<std::size_t>(i)];
  }
  return p;
}

}  // namespace

CurveSeries wcss_curve(const ClusterInput& in, const Clusterer& c, int kmax, std::uint64_t seed, Warnings* warnings) {
  check_kmax(in.x.rows(), kmax);
  const auto parts = c.cluster_range(in, 1, kmax, seed, warnings);
  CurveSeries out;
  for (int k = 1; k <= kmax; ++k) {
    out.k.push_back(k);
    out.value.push_back(wcss(in.x, parts[static_cast<std::size_t>(k - 1)]));
  }
  return out;
}

CurveSeries wcss_r_curve(const Matrix& x, int refresh, int kmax, int niter, std::uint64_t seed) {
  const auto path = wcss_r_path(x, refresh, kmax, niter, seed);
  CurveSeries out;
  for (int k = 1; k <= kmax; ++k) {
    out.k.push_back(k);
    out.value.push_back(wcss(x, path[static_cast<std::size_t>(k - 1)]));
  }
  return out;
}

CurveSeries log_curve(const CurveSeries& c) {
  CurveSeries out = c;
  for (double& v : out.value) {
    if (!(v > 0.0)) throw NumericalError("log of non-positive curve value");
    v = std::log(v);
  }
  return out;
}

Prediction kl_predict(const CurveSeries& w, int m) {
  check_curve(w, 4, "KL");
  if (w.k.front() != 1) throw ParameterError("KL needs a curve starting at k = 1");
  if (m < 1) throw ParameterError("KL needs m >= 1");
  const int kmax = w.k.back();
  const double e = 2.0 / m;
  std::vector<double> diff(static_cast<std::size_t>(kmax + 1), 0.0);
  for (int k = 2; k <= kmax; ++k)
    diff[static_cast<std::size_t>(k)] = std::pow(k - 1.0, e) * w.at(k - 1) - std::pow(static_cast<double>(k), e) * w.at(k);
  Prediction p;
  p.measure = "kl";
  p.rule = "argmax";
  p.parameters["m"] = m;
  bool all_zero = true;
  for (int k = 2; k <= kmax; ++k) all_zero = all_zero && diff[static_cast<std::size_t>(k)] == 0.0;
  double best = -1.0;
  for (int k = 2; k <= kmax - 1; ++k) {
    const double num = diff[static_cast<std::size_t>(k)];
    const double den = diff[static_cast<std::size_t>(k + 1)];
    double v;
    if (den == 0.0)
      v = num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    else
      v = std::abs(num / den);
    p.evidence.k.push_back(k);
    p.evidence.value.push_back(v);
    if (v > best) {
      best = v;
      p.k_star = k;
    }
  }
  if (all_zero) {
    p.k_star = kNoStructure;
    p.warnings.push_back("all DIFF values are zero, no structure reported");
  }
  return p;
}

Prediction knee_detect(const CurveSeries& curve, bool decreasing) {
  check_curve(curve, 3, "knee detection");
  const double sign = decreasing ? 1.0 : -1.0;
  Prediction p;
  p.measure = "knee";
  p.rule = "max_second_difference";
  double scale = 0.0;
  for (double v : curve.value) scale = std::max(scale, std::abs(v));
  double best = -std::numeric_limits<double>::infinity();
  double largest = 0.0;
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    const double d2 = sign * (curve.value[i - 1] - 2.0 * curve.value[i] + curve.value[i + 1]);
    p.evidence.k.push_back(curve.k[i]);
    p.evidence.value.push_back(d2);
    largest = std::max(largest, std::abs(d2));
    if (d2 > best) {
      best = d2;
      p.k_star = curve.k[i];
    }
  }
  if (largest <= 1e-9 * std::max(scale, 1e-300)) {
    p.low_confidence = true;
    p.warnings.push_back("curve is affine, knee is not identifiable");
  }
  return p;
}

double fom_value(const Matrix& x, const Clusterer& c, int k, std::uint64_t seed) {
  check_fom(x, k);
  double total = 0.0;
  for (Eigen::Index e = 0; e < x.cols(); ++e) {
    const Matrix rest = drop_column(x, e);
    const Partition p = c.cluster({rest}, k, derive_seed(seed, e));
    total += adjusted_fom(x, e, p);
  }
  return total;
}

CurveSeries fom_curve(const Matrix& x, const Clusterer& c, int kmax, std::uint64_t seed) {
  check_fom(x, kmax);
  CurveSeries out;
  for (int k = 1; k <= kmax; ++k) out.k.push_back(k);
  out.value.assign(static_cast<std::size_t>(kmax), 0.0);
  for (Eigen::Index e = 0; e < x.cols(); ++e) {
    const Matrix rest = drop_column(x, e);
    const auto parts = c.cluster_range({rest}, 1, kmax, derive_seed(seed, e));
    for (int k = 1; k <= kmax; ++k)
      out.value[static_cast<std::size_t>(k - 1)] += adjusted_fom(x, e, parts[static_cast<std::size_t>(k - 1)]);
  }
  return out;
}

CurveSeries fom_r_curve(const Matrix& x, int refresh, int kmax, int niter, std::uint64_t seed) {
  check_fom(x, kmax);
  CurveSeries out;
  for (int k = 1; k <= kmax; ++k) out.k.push_back(k);
  out.value.assign(static_cast<std::size_t>(kmax), 0.0);
  for (Eigen::Index e = 0; e < x.cols(); ++e) {
    const auto path = wcss_r_path(drop_column(x, e), refresh, kmax, niter, derive_seed(seed, e));
    for (int k = 1; k <= kmax; ++k)
      out.value[static_cast<std::size_t>(k - 1)] += adjusted_fom(x, e, path[static_cast<std::size_t>(k - 1)]);
  }
  return out;
}

namespace {

void check_gap(const ClusterInput& in, const GapOptions& opt) {
  if (opt.l < 1 || opt.steps < 1) throw ParameterError("Gap needs l >= 1 and steps >= 1");
  check_kmax(in.x.rows(), opt.kmax);
  if (opt.kmax < 2) throw ParameterError("Gap needs kmax >= 2");
}

}  // namespace

Prediction gap_predict(const ClusterInput& in, const Clusterer& c, const GapOptions& opt, std::uint64_t seed) {
  check_gap(in, opt);
  Warnings w;
  auto log_wcss = [&](const ClusterInput& data, std::uint64_t run) {
    const auto parts = c.cluster_range(data, 1, opt.kmax, seeds::base_cluster(run, 0), &w);
    std::vector<double> out;
    for (const auto& p : parts) {
      const double v = wcss(data.x, p);
      out.push_back(v > 0.0 ? std::log(v) : std::numeric_limits<double>::quiet_NaN());
    }
    return out;
  };
  std::vector<GapStep> steps;
  for (int step = 0; step < opt.steps; ++step) {
    const std::uint64_t s = seeds::gap_step(seed, step);
    GapStep g;
    g.observed = log_wcss(in, seeds::gap_observed(s));
    for (int b = 0; b < opt.l; ++b) {
      const Matrix z = null_dataset(in.x, opt.null_model, seeds::gap_reference(s, b));
      g.reference.push_back(log_wcss({z}, seeds::gap_reference_run(s, b)));
    }
    steps.push_back(std::move(g));
  }
  Prediction p = gap_summarize(steps, opt);
  p.warnings.insert(p.warnings.begin(), w.begin(), w.end());
  return p;
}

Prediction gap_summarize(const std::vector<GapStep>& steps, const GapOptions& opt) {
  const int kmax = opt.kmax;
  const std::size_t K = static_cast<std::size_t>(kmax);
  Prediction p;
  p.measure = "gap";
  p.rule = "first_k_within_one_sd";
  p.parameters["l"] = opt.l;
  p.parameters["steps"] = opt.steps;
  p.parameters["kmax"] = kmax;
  std::vector<double> gap_sum(K, 0.0), s_sum(K, 0.0);
  std::vector<int> gap_count(K, 0);
  std::vector<int> votes(K + 1, 0);
  for (std::size_t step = 0; step < steps.size(); ++step) {
    const GapStep& g = steps[step];
    const double l = static_cast<double>(g.reference.size());
    std::vector<double> gap(K), s(K);
    std::vector<char> ok(K, 1);
    for (std::size_t i = 0; i < K; ++i) {
      double mean = 0.0;
      for (const auto& r : g.reference) mean += r[i];
      mean /= l;
      double var = 0.0;
      for (const auto& r : g.reference) var += (r[i] - mean) * (r[i] - mean);
      var /= l;
      gap[i] = mean - g.observed[i];
      s[i] = std::sqrt(1.0 + 1.0 / l) * std::sqrt(var);
      if (!std::isfinite(gap[i]) || !std::isfinite(s[i])) {
        ok[i] = 0;
        if (step == 0) p.warnings.push_back("WCSS is zero at k = " + std::to_string(i + 1) + ", k excluded");
        continue;
      }
      gap_sum[i] += gap[i];
      s_sum[i] += s[i];
      ++gap_count[i];
    }
    int pick = -1;
    for (std::size_t i = 0; i < K && pick < 0; ++i) {
      if (!ok[i]) continue;
      std::size_t j = i + 1;
      while (j < K && !ok[j]) ++j;
      if (j >= K) break;
      if (gap[i] >= gap[j] - s[j]) pick = static_cast<int>(i) + 1;
    }
    if (pick < 0) {
      pick = kmax;
      p.warnings.push_back("step " + std::to_string(step) + ": no k satisfied the Gap rule, kmax reported");
    }
    ++votes[static_cast<std::size_t>(pick)];
  }
  p.k_star = static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
  for (std::size_t i = 0; i < K; ++i) {
    if (gap_count[i] == 0) continue;
    p.evidence.k.push_back(static_cast<int>(i) + 1);
    p.evidence.value.push_back(gap_sum[i] / gap_count[i]);
    p.evidence.dispersion.push_back(s_sum[i] / gap_count[i]);
  }
  return p;
}

Prediction g_gap_predict(const CurveSeries& log_wcss, double offset) { return geometric(log_wcss, offset, "g_gap"); }

Prediction g_fom_predict(const CurveSeries& fom) { return geometric(fom, 0.0, "g_fom"); }

Prediction diff_fom_predict(const CurveSeries& fom, int m) {
  check_curve(fom, 2, "DIFF-FOM");
  if (m < 1) throw ParameterError("DIFF-FOM needs m >= 1");
  const int kmax = fom.k.back();
  if (kmax < 3 || fom.k.front() > 2) throw ParameterError("DIFF-FOM needs a curve covering k = 2..kmax with kmax >= 3");
  const double e = 2.0 / m;
  Prediction p;
  p.measure = "diff_fom";
  p.rule = "argmax";
  p.parameters["m"] = m;
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 3; k <= kmax; ++k) {
    const double d = std::pow(k - 1.0, e) * fom.at(k - 1) - std::pow(static_cast<double>(k), e) * fom.at(k);
    p.evidence.k.push_back(k);
    p.evidence.value.push_back(d);
    if (d > best) {
      best = d;
      p.k_star = k;
    }
  }
  return p;
}

}  // namespace kstar
