#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "kstar/clusterer.hpp"
#include "kstar/datagen.hpp"
#include "kstar/indices.hpp"
#include "kstar/matching.hpp"
#include "kstar/measures.hpp"
#include "kstar/seeds.hpp"

namespace kstar {


using IntMatrix = Eigen::MatrixXi;

// Nearest-centroid rule (diagonal linear discriminant with a common
// per-feature variance).
class Classifier {
 public:
  Classifier() = default;
  Classifier(const Matrix& x, const Partition& p);
  bool trained() const { return trained_; }
  int k() const { return static_cast<int>(centroids_.rows()); }
  // Ties go to the lowest class.
  std::vector<int> predict(const Matrix& x) const;

 private:
  Matrix centroids_;
  bool trained_ = false;
};

// Positions 0..n-1 split into ceil(alpha n) training and the rest learning,
// both sorted. alpha = 0 keeps everything in the learning set.
struct Split {
  std::vector<int> training;
  std::vector<int> learning;
};
Split split_rows(int n, double alpha, std::uint64_t seed);

// Co-clustering (M) and co-sampling (I) counts. Only the upper triangle and
// diagonal are written during accumulation; call symmetrize() when done.
struct ConsensusState {
  int k = 0;
  IntMatrix m;
  IntMatrix i;

  ConsensusState() = default;
  ConsensusState(int n, int k) : k(k), m(IntMatrix::Zero(n, n)), i(IntMatrix::Zero(n, n)) {}
  // rows: sorted distinct item ids; labels: cluster of each row.
  void add_sample(std::span<const int> rows);
  void add_clustering(std::span<const int> rows, std::span<const int> labels);
  void symmetrize();
};

// M / I where I > 0; NaN off the diagonal where I = 0; diagonal 1.
Matrix consensus_matrix(const ConsensusState& s);
// 1 - consensus; undefined entries become 1 with a warning.
Matrix consensus_to_distance(const ConsensusState& s, Warnings* warnings = nullptr);
// Area under the empirical CDF of the defined upper-triangle entries,
// sum_{i>=2} (x_i - x_{i-1}) CDF(x_{i-1}) over the sorted entries. A 0/1
// matrix gives the fraction of zero entries.
double consensus_area(const ConsensusState& s, Warnings* warnings = nullptr);

struct ConsensusOptions {
  int kmin = 2;
  int kmax = 30;
  int H = 250;
  double p = 0.8;
  double tau = 0.05;
  // Draw one subsample per round for all k (the FC schedule) instead of one
  // per (k, round).
  bool shared_samples = false;
};

struct ConsensusResult {
  std::vector<ConsensusState> states;  // kmin..kmax
  CurveSeries area;
  CurveSeries delta;
  CurveSeries delta_prime;
  Prediction prediction;
};

ConsensusResult consensus_run(const ClusterInput& in, const Clusterer& c, const ConsensusOptions& opt,
                              std::uint64_t seed);
// Rounds outside, k inside: one clustering pass (one tree for hierarchical
// methods) per round.
ConsensusResult fc_run(const ClusterInput& in, const Clusterer& c, const ConsensusOptions& opt, std::uint64_t seed);
// A, delta, delta' and the stabilization rule from finished states.
ConsensusResult consensus_summarize(std::vector<ConsensusState> states, int kmin, double tau, const std::string& name);
// Smallest k whose relative area increments from k on stay within tau.
Prediction consensus_predict(const CurveSeries& area, double tau);

// Fraction of reference datasets whose statistic strictly exceeds the
// statistic of the clustering of x at k.
double mecca(int l, const Clusterer& c, const Matrix& x, const std::function<double(const Matrix&, const Partition&)>& t,
             int k, NullModel null_model, std::uint64_t seed);

// One Clest round: external index between the classifier trained on the
// training part and the clusterer, both applied to the learning part.
double replicating_analysis(const Matrix& x, const Clusterer& c, int k, double alpha, ExternalIndex index,
                            std::uint64_t seed);

struct MeOptions {
  int kmin = 2;
  int kmax = 10;
  int H = 100;
  double beta = 0.8;
  ExternalIndex index = ExternalIndex::AdjustedRand;
  double threshold = 0.9;
  double fraction = 0.8;
  int bins = 20;
};

struct MeResult {
  std::vector<std::vector<double>> values;   // per k, H index values
  std::vector<std::vector<int>> histograms;  // per k, counts over bins
  double bin_low = 0.0;
  double bin_high = 1.0;
  CurveSeries stable_fraction;  // fraction of values above the threshold
  Prediction prediction;
};

MeResult me_run(const ClusterInput& in, const Clusterer& c, const MeOptions& opt, std::uint64_t seed);
MeResult me_summarize(std::vector<std::vector<double>> values, const MeOptions& opt);
// Index between two clusterings restricted to their common rows; NaN when
// fewer than two rows are shared.
double me_similarity(std::span<const int> rows1, std::span<const int> labels1, std::span<const int> rows2,
                     std::span<const int> labels2, ExternalIndex index, Warnings* warnings = nullptr);

struct ClestOptions {
  int kmin = 2;
  int kmax = 10;
  int H = 20;
  int B0 = 20;
  double alpha = 0.34;  // training fraction; the learning set keeps 66%
  ExternalIndex index = ExternalIndex::AdjustedRand;
  NullModel null_model = NullModel::PoissonBox;
  double p_max = 0.05;
  double d_min = 0.05;
};

struct ClestResult {
  std::vector<std::vector<double>> values;  // observed, per k
  CurveSeries observed;   // t_k
  CurveSeries reference;  // t_k^0
  CurveSeries p_value;
  CurveSeries d;
  Prediction prediction;
};

ClestResult clest_run(const ClusterInput& in, const Clusterer& c, const ClestOptions& opt, std::uint64_t seed);
// Per k, the H replicating-analysis values on x.
std::vector<std::vector<double>> clest_statistic(const ClusterInput& in, const Clusterer& c, const ClestOptions& opt,
                                                 std::uint64_t seed);
ClestResult clest_summarize(std::vector<std::vector<double>> observed,
                            const std::vector<std::vector<std::vector<double>>>& reference, const ClestOptions& opt);

struct LevineDomanyOptions {
  int kmin = 2;
  int kmax = 10;
  int H = 100;
  double beta = 0.8;
};

struct LevineDomanyResult {
  std::vector<std::vector<double>> values;  // per k, per round agreement
  CurveSeries figure;                       // R^k
  int first_local_max = kNoStructure;
  Prediction prediction;                    // global maximum
};

LevineDomanyResult levine_domany_run(const ClusterInput& in, const Clusterer& c, const LevineDomanyOptions& opt,
                                     std::uint64_t seed);
LevineDomanyResult levine_domany_summarize(std::vector<std::vector<double>> values, int kmin);
// Fraction of pairs co-clustered in base and co-sampled in rows that are
// also co-clustered in labels; NaN if there is no such pair.
double levine_domany_agreement(const Partition& base, std::span<const int> rows, std::span<const int> labels);

struct RothOptions {
  int kmin = 2;
  int kmax = 10;
  int H = 20;
  double alpha = 0.5;
};

struct RothResult {
  std::vector<std::vector<double>> values;
  CurveSeries instability;
  Prediction prediction;  // argmin
};

RothResult roth_run(const ClusterInput& in, const Clusterer& c, const RothOptions& opt, std::uint64_t seed);
RothResult roth_summarize(std::vector<std::vector<double>> values, int kmin);
// 1 - overlap / n after optimal relabeling, divided by 1 - 1/k.
double roth_instability(std::span<const int> predicted, std::span<const int> clustered, int k);

struct BagClust1Result {
  Partition partition;
  std::vector<std::int64_t> overlaps;  // per round
  IntMatrix votes;                     // n x k
};

BagClust1Result bagclust1(const ClusterInput& in, const Clusterer& c, int k, int rounds, std::uint64_t seed);

struct BagClust2Result {
  Matrix dissimilarity;
  Partition partition;
  ConsensusState state;
};

BagClust2Result bagclust2(const ClusterInput& in, const Clusterer& c, int k, int rounds, double beta,
                          std::uint64_t seed, Warnings* warnings = nullptr);
BagClust2Result bagclust2_finish(ConsensusState state, int k, Warnings* warnings = nullptr);

}  // namespace kstar
