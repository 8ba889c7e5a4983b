#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "kstar/stability.hpp"

namespace kstar {

// A procedure of the wiring. A classifier is trained on a training set
// labelled by `clusterer`; otherwise `clusterer` partitions learning sets.
struct Procedure {
  Clusterer clusterer;
  bool classifier = false;
};

// dataset 0 is the input itself, 1..l the generated ones.
struct Edge {
  int dataset;
  int procedure;
};

struct LearningSet {
  Matrix data;
  std::vector<int> rows;  // original item of every row
  bool row_subset = true;
};

struct IterationView {
  int k = 0;
  int h = 0;
  std::vector<LearningSet> learning;
  std::vector<LearningSet> training;
  // One labeling per cluster edge, over that edge's learning set.
  std::vector<std::vector<int>> outputs;
};

struct StatisticRecord {
  std::vector<double> values;
  std::vector<std::vector<int>> rows;
  std::vector<std::vector<int>> labels;
};

struct Wiring {
  int l = 0;
  DgpSpec dgp;
  bool use_original = false;
  double alpha = 0.0;
  std::vector<Procedure> procedures;
  std::vector<Edge> train;
  std::vector<Edge> cluster;
  std::function<StatisticRecord(const IterationView&)> collect;

  // Throws ParameterError on edges that reference missing datasets or
  // procedures, or classifiers without training.
  void validate() const;
};

// The while-loop of the paradigm for one k: H rounds of generation,
// splitting, training, clustering and collection.
std::vector<StatisticRecord> run_stability_statistic(const ClusterInput& in, const Wiring& w, int k, int H,
                                                     std::uint64_t seed);

// Rounds outside, k inside: the data of a round are generated once and
// clustered at every k. Result indexed [k - kmin][round].
std::vector<std::vector<StatisticRecord>> run_fast_stability_statistic(const ClusterInput& in, const Wiring& w,
                                                                       int kmin, int kmax, int H, std::uint64_t seed);

// The instances expressed through the engine. Each returns the same result
// as its native counterpart for the same seed.
Wiring me_wiring(const Clusterer& c, const MeOptions& opt);
Wiring consensus_wiring(const Clusterer& c, double p);
Wiring clest_wiring(const Clusterer& c, double alpha, ExternalIndex index);
Wiring levine_domany_wiring(const Clusterer& c, double beta);
Wiring roth_wiring(const Clusterer& c, double alpha);
Wiring bagclust1_wiring(const Clusterer& c, int k);
Wiring bagclust2_wiring(const Clusterer& c, double beta);
Wiring gap_wiring(const Clusterer& c);

MeResult me_run_paradigm(const ClusterInput& in, const Clusterer& c, const MeOptions& opt, std::uint64_t seed);
ConsensusResult consensus_run_paradigm(const ClusterInput& in, const Clusterer& c, const ConsensusOptions& opt,
                                       std::uint64_t seed);
ConsensusResult fc_run_paradigm(const ClusterInput& in, const Clusterer& c, const ConsensusOptions& opt,
                                std::uint64_t seed);
ClestResult clest_run_paradigm(const ClusterInput& in, const Clusterer& c, const ClestOptions& opt, std::uint64_t seed);
LevineDomanyResult levine_domany_run_paradigm(const ClusterInput& in, const Clusterer& c,
                                              const LevineDomanyOptions& opt, std::uint64_t seed);
RothResult roth_run_paradigm(const ClusterInput& in, const Clusterer& c, const RothOptions& opt, std::uint64_t seed);
BagClust1Result bagclust1_paradigm(const ClusterInput& in, const Clusterer& c, int k, int rounds, std::uint64_t seed);
BagClust2Result bagclust2_paradigm(const ClusterInput& in, const Clusterer& c, int k, int rounds, double beta,
                                   std::uint64_t seed, Warnings* warnings = nullptr);
Prediction gap_predict_paradigm(const ClusterInput& in, const Clusterer& c, const GapOptions& opt, std::uint64_t seed);

}  // namespace kstar
