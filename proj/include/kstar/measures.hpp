#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "kstar/clusterer.hpp"
#include "kstar/datagen.hpp"

namespace kstar {

struct CurveSeries {
  std::vector<int> k;
  std::vector<double> value;
  std::vector<double> dispersion;  // empty or same length as value

  std::size_t size() const { return k.size(); }
  // Value at cluster count kk; throws ParameterError if absent.
  double at(int kk) const;
  // CSV with header k,value[,dispersion].
  void write_csv(std::ostream& out) const;
};

inline constexpr int kNoStructure = 1;

struct Prediction {
  std::string measure;
  std::string rule;
  int k_star = kNoStructure;
  CurveSeries evidence;
  bool low_confidence = false;
  std::map<std::string, double> parameters;
  Warnings warnings;
};

// WCSS(k) for k = 1..kmax.
CurveSeries wcss_curve(const ClusterInput& in, const Clusterer& c, int kmax, std::uint64_t seed,
                       Warnings* warnings = nullptr);
CurveSeries wcss_r_curve(const Matrix& x, int refresh, int kmax, int niter, std::uint64_t seed);

CurveSeries log_curve(const CurveSeries& c);

// DIFF(k) = (k-1)^(2/m) W(k-1) - k^(2/m) W(k), KL(k) = |DIFF(k) / DIFF(k+1)|,
// k* = argmax over [2, kmax-1]. The curve must start at k = 1.
Prediction kl_predict(const CurveSeries& wcss, int m);

// Second-difference knee, ties to the smallest k. For increasing curves set
// decreasing = false. Flags low confidence when the curve is affine.
Prediction knee_detect(const CurveSeries& curve, bool decreasing = true);

// Adjusted figure of merit summed over left-out columns. Needs k < n.
double fom_value(const Matrix& x, const Clusterer& c, int k, std::uint64_t seed);
CurveSeries fom_curve(const Matrix& x, const Clusterer& c, int kmax, std::uint64_t seed);
CurveSeries fom_r_curve(const Matrix& x, int refresh, int kmax, int niter, std::uint64_t seed);

struct GapOptions {
  NullModel null_model = NullModel::PoissonBox;
  int l = 10;
  int steps = 20;
  int kmax = 10;
};

// Gap(k) = mean null log WCSS - log WCSS, s(k) = sqrt(1 + 1/l) sd. Each step
// picks the first k with Gap(k) >= Gap(k+1) - s(k+1); the answer is the most
// frequent pick. Evidence holds the step-averaged Gap and s.
Prediction gap_predict(const ClusterInput& in, const Clusterer& c, const GapOptions& opt, std::uint64_t seed);

// log WCSS (k = 1..kmax, NaN where WCSS is 0) of the data and of the l
// reference datasets of one step.
struct GapStep {
  std::vector<double> observed;
  std::vector<std::vector<double>> reference;
};
Prediction gap_summarize(const std::vector<GapStep>& steps, const GapOptions& opt);

// Geometric rule: distance of the curve below the chord joining its end
// points; k* is the first local maximum. The offset shifts only the
// emitted segment lengths.
Prediction g_gap_predict(const CurveSeries& log_wcss, double offset = 0.0);
Prediction g_fom_predict(const CurveSeries& fom);

// DIFF on the FOM curve, k* = argmax over [3, kmax].
Prediction diff_fom_predict(const CurveSeries& fom, int m);

}  // namespace kstar
