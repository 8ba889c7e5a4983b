#include <set>

#include "doctest.h"
#include "kstar/paradigm.hpp"
#include "kstar/synthetic.hpp"
#include "support.hpp"

using namespace kstar;
using namespace testsupport;

namespace {

CurveSeries area_curve(std::vector<double> v, int k0 = 2) {
  CurveSeries c;
  for (std::size_t i = 0; i < v.size(); ++i) c.k.push_back(k0 + static_cast<int>(i));
  c.value = std::move(v);
  return c;
}

// State whose consensus matrix is the 0/1 co-membership of labels.
ConsensusState perfect_state(const std::vector<int>& labels, int k) {
  const int n = static_cast<int>(labels.size());
  ConsensusState s(n, k);
  std::vector<int> rows(static_cast<std::size_t>(n));
  std::iota(rows.begin(), rows.end(), 0);
  s.add_sample(rows);
  s.add_clustering(rows, labels);
  s.symmetrize();
  return s;
}

}  // namespace

TEST_CASE("split_rows") {
  const Split all = split_rows(7, 0.0, 1);
  CHECK(all.training.empty());
  CHECK(all.learning == std::vector<int>{0, 1, 2, 3, 4, 5, 6});
  const Split s = split_rows(30, 0.34, 4);
  CHECK(s.training.size() == 11);
  CHECK(s.learning.size() == 19);
  std::set<int> u(s.training.begin(), s.training.end());
  u.insert(s.learning.begin(), s.learning.end());
  CHECK(u.size() == 30);
  CHECK(std::is_sorted(s.training.begin(), s.training.end()));
  CHECK_THROWS_AS(split_rows(10, 1.0, 1), ParameterError);
}

TEST_CASE("nearest-centroid classifier") {
  const LabeledData d = clouds(3, 10, 10.0, 2);
  const Classifier c(d.data.values, d.labels);
  CHECK(c.k() == 3);
  CHECK(c.predict(d.data.values) == d.labels.labels());
  // Equidistant point goes to the lowest class.
  Matrix x(2, 1), q(1, 1);
  x << 0, 2;
  q << 1;
  CHECK(Classifier(x, Partition({0, 1}, 2)).predict(q) == std::vector<int>{0});
  CHECK_THROWS_AS(Classifier().predict(q), ParameterError);
}

TEST_CASE("consensus state counts") {
  ConsensusState s(4, 2);
  const std::vector<int> r1 = {0, 1, 3}, l1 = {0, 0, 1};
  const std::vector<int> r2 = {1, 2, 3}, l2 = {1, 0, 1};
  s.add_sample(r1);
  s.add_clustering(r1, l1);
  s.add_sample(r2);
  s.add_clustering(r2, l2);
  s.symmetrize();
  CHECK(s.i(1, 3) == 2);
  CHECK(s.i(3, 1) == 2);
  CHECK(s.m(1, 3) == 1);
  CHECK(s.m(0, 1) == 1);
  CHECK(s.i(0, 2) == 0);
  CHECK(s.i(1, 1) == 2);
  const Matrix c = consensus_matrix(s);
  CHECK(c(1, 3) == 0.5);
  CHECK(c(0, 0) == 1.0);
  CHECK(std::isnan(c(0, 2)));
  Warnings w;
  const Matrix d = consensus_to_distance(s, &w);
  CHECK(d(0, 2) == 1.0);
  CHECK(d(1, 3) == 0.5);
  CHECK(d(2, 2) == 0.0);
  CHECK(w.size() == 1);
  CHECK_THROWS_AS(s.add_clustering(r1, std::vector<int>{0}), ParameterError);
}

TEST_CASE("consensus area closed forms") {
  // Perfect 0/1 matrix: the area equals the fraction of between-cluster pairs.
  for (const auto& [labels, k] : std::vector<std::pair<std::vector<int>, int>>{
           {{0, 0, 0, 1, 1, 1}, 2}, {{0, 0, 1, 1, 2, 2, 2, 2}, 3}, {{0, 0, 1, 2}, 3}}) {
    const ConsensusState s = perfect_state(labels, k);
    const PairCounts p = enumerate_pairs(labels, labels);
    const double between = 1.0 - static_cast<double>(p.a) / static_cast<double>(p.total());
    CHECK(consensus_area(s) == doctest::Approx(between).epsilon(1e-15));
  }
  // All entries equal: the CDF jumps once, area 0.
  CHECK(consensus_area(perfect_state({0, 0, 0}, 1)) == 0.0);
  CHECK(consensus_area(perfect_state({0, 1, 2}, 3)) == 0.0);
  // Explicit values {0.25, 0.5, 1}: (0.25)(1/3) + (0.5)(2/3) = 5/12.
  ConsensusState s(3, 2);
  s.i.setConstant(4);
  s.m << 4, 0, 0,  //
      1, 4, 0,     //
      2, 4, 4;
  s.symmetrize();
  CHECK(consensus_area(s) == doctest::Approx(5.0 / 12.0));
  // Undefined entries are dropped with a warning: {0, 1} remain.
  ConsensusState u(3, 2);
  u.i << 1, 0, 0, 1, 1, 0, 0, 1, 1;
  u.m << 1, 0, 0, 1, 1, 0, 0, 0, 1;
  u.symmetrize();
  Warnings w;
  CHECK(consensus_area(u, &w) == 0.5);
  CHECK(w.size() == 1);
}

TEST_CASE("consensus prediction rule") {
  // Area rises until k = 4 and then stays flat.
  CHECK(consensus_predict(area_curve({0.3, 0.5, 0.66, 0.67, 0.67, 0.68}), 0.05).k_star == 4);
  // Already flat from kmin.
  CHECK(consensus_predict(area_curve({0.5, 0.51, 0.52}), 0.05).k_star == 2);
  // A late jump beyond tau moves k* to it.
  CHECK(consensus_predict(area_curve({0.5, 0.51, 0.7, 0.71}), 0.05).k_star == 4);
  // A drop cannot be the stabilization point.
  CHECK(consensus_predict(area_curve({0.5, 0.8, 0.79, 0.79}), 0.05).k_star == 3);
  // Never stable: kmax.
  CHECK(consensus_predict(area_curve({0.1, 0.2, 0.4, 0.8}), 0.05).k_star == 5);
  CHECK_THROWS_AS(consensus_predict(CurveSeries{}, 0.05), ParameterError);
}

TEST_CASE("consensus summary curves") {
  std::vector<ConsensusState> states;
  states.push_back(perfect_state({0, 0, 0, 1, 1, 1}, 2));
  states.push_back(perfect_state({0, 0, 1, 1, 2, 2}, 3));
  states.push_back(perfect_state({0, 0, 1, 1, 2, 2}, 4));
  const ConsensusResult r = consensus_summarize(std::move(states), 2, 0.05, "consensus");
  REQUIRE(r.area.size() == 3);
  CHECK(r.area.value[0] == doctest::Approx(9.0 / 15.0));
  CHECK(r.area.value[1] == doctest::Approx(12.0 / 15.0));
  REQUIRE(r.delta.size() == 2);
  CHECK(r.delta.value[0] == r.area.value[0]);
  CHECK(r.delta.value[1] == doctest::Approx(0.0));
  CHECK(r.delta_prime.value[1] == doctest::Approx(0.0));
  CHECK(r.prediction.k_star == 3);
  CHECK(r.prediction.measure == "consensus");
}

TEST_CASE("consensus and FC on Gaussian3") {
  const LabeledData d = gen_gaussian3(2);
  ConsensusOptions o;
  o.kmax = 8;
  o.H = 30;
  const Clusterer c = Clusterer::parse("hier-a");
  const ConsensusResult cr = consensus_run({d.data.values}, c, o, 5);
  const ConsensusResult fr = fc_run({d.data.values}, c, o, 5);
  CHECK(cr.prediction.k_star == 3);
  CHECK(fr.prediction.k_star == 3);
  CHECK(cr.states.size() == 7);
  CHECK(cr.area.at(3) == doctest::Approx(1.0 - 3 * (20.0 * 19 / 2) / (60.0 * 59 / 2)));
  // Shared subsamples reproduce FC exactly.
  o.shared_samples = true;
  CHECK(same(consensus_run({d.data.values}, c, o, 5), fr));
  o.kmax = 61;
  CHECK_THROWS_AS(consensus_run({d.data.values}, c, o, 5), ParameterError);
  o.kmax = 8;
  o.p = 1.0;
  CHECK_THROWS_AS(fc_run({d.data.values}, c, o, 5), ParameterError);
}

TEST_CASE("ME similarity and summary") {
  const std::vector<int> r1 = {0, 1, 2, 3}, l1 = {0, 0, 1, 1};
  const std::vector<int> r2 = {1, 2, 3, 4}, l2 = {1, 0, 0, 1};
  // Common rows 1, 2, 3 with labels (0,1,1) and (1,0,0): identical partitions.
  CHECK(me_similarity(r1, l1, r2, l2, ExternalIndex::Rand) == 1.0);
  Warnings w;
  CHECK(std::isnan(me_similarity(std::vector<int>{0, 1}, l1, std::vector<int>{1, 5}, l2, ExternalIndex::Rand, &w)));
  CHECK(w.size() == 1);
  MeOptions o;
  o.kmin = 2;
  o.fraction = 0.5;
  o.threshold = 0.9;
  const MeResult r = me_summarize({{1.0, 0.95, 0.2}, {1.0, 1.0, std::nan("")}, {0.1, 0.3, 0.95}}, o);
  CHECK(r.stable_fraction.value[0] == doctest::Approx(2.0 / 3));
  CHECK(r.stable_fraction.value[1] == 1.0);
  CHECK(r.prediction.k_star == 3);
  CHECK(r.histograms[0][19] == 2);
  CHECK(r.histograms[0][12] == 1);  // ARI bins span [-1, 1]
  const MeResult none = me_summarize({{0.1}, {0.2}}, o);
  CHECK(none.prediction.k_star == kNoStructure);
  CHECK_FALSE(none.prediction.warnings.empty());
}

TEST_CASE("ME on separated clouds") {
  const LabeledData d = clouds(3, 15, 12.0, 1);
  MeOptions o;
  o.kmax = 6;
  o.H = 20;
  const MeResult r = me_run({d.data.values}, Clusterer::parse("hier-a"), o, 9);
  CHECK(r.prediction.k_star == 3);
  CHECK(r.values.size() == 5);
}

TEST_CASE("Clest summary rule") {
  ClestOptions o;
  o.kmin = 2;
  // k = 2 and 3 significant, k = 3 with the larger d; k = 4 not significant.
  const std::vector<std::vector<double>> obs = {{0.8, 0.8, 0.8}, {0.9, 0.9, 0.9}, {0.5, 0.5, 0.5}};
  std::vector<std::vector<std::vector<double>>> ref;
  for (int b = 0; b < 20; ++b) ref.push_back({{0.1, 0.1, 0.1}, {0.1, 0.1, 0.1}, {0.6, 0.6, 0.6}});
  const ClestResult r = clest_summarize(obs, ref, o);
  CHECK(r.d.value[0] == doctest::Approx(0.7));
  CHECK(r.p_value.value[0] == 0.0);
  CHECK(r.p_value.value[2] == 1.0);
  CHECK(r.prediction.k_star == 3);
  const ClestResult none = clest_summarize({{0.1}, {0.1}}, {{{0.5}, {0.5}}}, o);
  CHECK(none.prediction.k_star == kNoStructure);
}

TEST_CASE("Clest on separated clouds") {
  const LabeledData d = clouds(3, 20, 12.0, 2);
  ClestOptions o;
  o.kmax = 5;
  o.H = 5;
  o.B0 = 5;
  const Clusterer c = Clusterer::parse("hier-a");
  CHECK(clest_run({d.data.values}, c, o, 4).prediction.k_star == 3);
  CHECK(replicating_analysis(d.data.values, c, 3, 0.34, ExternalIndex::AdjustedRand, 1) == 1.0);
  o.B0 = 0;
  CHECK_THROWS_AS(clest_run({d.data.values}, c, o, 4), ParameterError);
}

TEST_CASE("Levine-Domany agreement and summary") {
  const Partition base({0, 0, 0, 1, 1}, 2);
  // Sampled rows 0, 1, 2, 3: base pairs (0,1), (0,2), (1,2); labels split 2 off.
  CHECK(levine_domany_agreement(base, std::vector<int>{0, 1, 2, 3}, std::vector<int>{0, 0, 1, 1}) ==
        doctest::Approx(1.0 / 3));
  CHECK(std::isnan(levine_domany_agreement(base, std::vector<int>{0, 3}, std::vector<int>{0, 0})));
  // Global maximum at k = 5, first local maximum at k = 3.
  const LevineDomanyResult r = levine_domany_summarize({{0.5}, {0.9}, {0.6}, {0.95}, {0.4}}, 2);
  CHECK(r.prediction.k_star == 5);
  CHECK(r.first_local_max == 3);
  const LevineDomanyResult nan = levine_domany_summarize({{std::nan("")}, {0.5}}, 2);
  CHECK(nan.figure.value[0] == 0.0);
  CHECK(nan.prediction.warnings.size() == 1);
}

TEST_CASE("Roth instability") {
  CHECK(roth_instability(std::vector<int>{0, 0, 1, 1}, std::vector<int>{1, 1, 0, 0}, 2) == 0.0);
  // One of four mismatched at k = 2: (1/4) / (1/2).
  CHECK(roth_instability(std::vector<int>{0, 0, 1, 1}, std::vector<int>{0, 0, 0, 1}, 2) == 0.5);
  CHECK_THROWS_AS(roth_instability(std::vector<int>{0}, std::vector<int>{0}, 1), ParameterError);
  const RothResult r = roth_summarize({{0.3, 0.5}, {0.1, 0.1}, {0.2, 0.3}}, 2);
  CHECK(r.prediction.k_star == 3);
  CHECK(r.instability.value[0] == doctest::Approx(0.4));
  const LabeledData d = clouds(3, 15, 12.0, 7);
  RothOptions o;
  o.kmax = 6;
  o.H = 5;
  CHECK(roth_run({d.data.values}, Clusterer::parse("hier-a"), o, 3).prediction.k_star == 3);
}

TEST_CASE("MECCA") {
  const LabeledData d = clouds(2, 20, 12.0, 3);
  const Clusterer c = Clusterer::parse("hier-a");
  // Between-cluster share of the total sum of squares: large for real structure.
  auto t = [](const Matrix& x, const Partition& p) { return 1.0 - wcss(x, p) / wcss(x, Partition::trivial(static_cast<std::size_t>(x.rows()))); };
  CHECK(mecca(10, c, d.data.values, t, 2, NullModel::PoissonBox, 1) == 0.0);
  CHECK_THROWS_AS(mecca(0, c, d.data.values, t, 2, NullModel::PoissonBox, 1), ParameterError);
}

TEST_CASE("bagging") {
  const LabeledData d = clouds(3, 12, 12.0, 5);
  const Clusterer c = Clusterer::parse("kmeans-r");
  const BagClust1Result b1 = bagclust1({d.data.values}, c, 3, 10, 2);
  CHECK(adjusted_rand(contingency(b1.partition, d.labels)) == 1.0);
  CHECK(b1.overlaps.size() == 10);
  CHECK(b1.votes.rows() == 36);
  Warnings w;
  const BagClust2Result b2 = bagclust2({d.data.values}, c, 3, 10, 0.8, 2, &w);
  CHECK(adjusted_rand(contingency(b2.partition, d.labels)) == 1.0);
  CHECK(b2.dissimilarity.diagonal().isZero());
  CHECK_THROWS_AS(bagclust1({d.data.values}, c, 3, 0, 2), ParameterError);
  CHECK_THROWS_AS(bagclust2({d.data.values}, c, 40, 3, 0.8, 2), ParameterError);
}

TEST_CASE("wiring validation") {
  const Clusterer c = Clusterer::parse("hier-a");
  CHECK_NOTHROW(consensus_wiring(c, 0.8).validate());
  CHECK_NOTHROW(clest_wiring(c, 0.34, ExternalIndex::AdjustedRand).validate());
  Wiring w = me_wiring(c, MeOptions{});
  w.cluster.push_back({w.l + 1, 0});
  CHECK_THROWS_AS(w.validate(), ParameterError);
  Wiring bad = roth_wiring(c, 0.5);
  bad.cluster.push_back({0, 7});
  CHECK_THROWS_AS(bad.validate(), ParameterError);
}

TEST_CASE("paradigm wiring reproduces every native instance") {
  for (std::uint64_t seed : {3u, 4u})
    for (const auto& [name, ok] : paradigm_equivalence(seed)) CHECK_MESSAGE(ok, name << " seed " << seed);
}
