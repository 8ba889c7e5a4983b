#pragma once
// Shared test helpers: brute-force oracles, toy data, bitwise comparisons of
// native and paradigm results, and the oracle / monotonicity suites used by
// both the unit tests and the acceptance binary.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "kstar/clusterer.hpp"
#include "kstar/clustering.hpp"
#include "kstar/indices.hpp"
#include "kstar/matching.hpp"
#include "kstar/measures.hpp"
#include "kstar/nmf.hpp"
#include "kstar/paradigm.hpp"
#include "kstar/rng.hpp"
#include "kstar/stability.hpp"
#include "kstar/stirling.hpp"

namespace testsupport {

using namespace kstar;

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string& msg) {
    if (ok) detail = msg;
    ok = false;
  }
};

// ---- toy data ----

// nc isotropic 2-d clouds of `per` points, centers spaced `gap` apart on a line.
inline LabeledData clouds(int nc, int per, double gap, std::uint64_t seed, double sd = 1.0) {
  Rng r(seed);
  Matrix x(nc * per, 2);
  std::vector<int> lab(static_cast<std::size_t>(nc * per));
  for (int c = 0; c < nc; ++c)
    for (int i = 0; i < per; ++i) {
      x(c * per + i, 0) = r.normal(gap * c, sd);
      x(c * per + i, 1) = r.normal(0.0, sd);
      lab[static_cast<std::size_t>(c * per + i)] = c;
    }
  return {DataMatrix(x), Partition(lab, nc)};
}

inline Matrix uniform_matrix(int n, int m, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
  Rng r(seed);
  Matrix x(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) x(i, j) = r.uniform(lo, hi);
  return x;
}

inline std::vector<int> random_labels(int n, int k, Rng& r) {
  std::vector<int> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = static_cast<int>(r.below(static_cast<std::size_t>(k)));
  return v;
}

// ---- oracles ----

// Pair counts by enumerating all i < j.
inline PairCounts enumerate_pairs(const std::vector<int>& a, const std::vector<int>& b) {
  PairCounts p;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const bool sa = a[i] == a[j], sb = b[i] == b[j];
      if (sa && sb) ++p.a;
      else if (sa) ++p.b;
      else if (sb) ++p.c;
      else ++p.d;
    }
  return p;
}

// WCSS via sum over within-cluster pairs of squared distances / (2 |C|).
inline double wcss_pairwise(const Matrix& x, const Partition& p) {
  double total = 0.0;
  for (const auto& mem : p.members()) {
    double s = 0.0;
    for (int i : mem)
      for (int j : mem) s += (x.row(i) - x.row(j)).squaredNorm();
    if (!mem.empty()) total += s / (2.0 * static_cast<double>(mem.size()));
  }
  return total;
}

// Relabel by order of first appearance.
inline std::vector<int> canonical(const std::vector<int>& v) {
  std::vector<int> map, out;
  std::vector<int> seen;
  for (int x : v) {
    auto it = std::find(seen.begin(), seen.end(), x);
    if (it == seen.end()) {
      seen.push_back(x);
      out.push_back(static_cast<int>(seen.size()) - 1);
    } else {
      out.push_back(static_cast<int>(it - seen.begin()));
    }
  }
  return out;
}

// Single-linkage k-partition as connected components of the minimum
// spanning tree with its k-1 heaviest edges removed (Prim).
inline std::vector<int> mst_components(const Matrix& d, int k) {
  const int n = static_cast<int>(d.rows());
  struct E {
    int u, v;
    double w;
  };
  std::vector<E> tree;
  std::vector<bool> in(static_cast<std::size_t>(n), false);
  std::vector<double> best(static_cast<std::size_t>(n), INFINITY);
  std::vector<int> from(static_cast<std::size_t>(n), -1);
  best[0] = 0.0;
  for (int it = 0; it < n; ++it) {
    int u = -1;
    for (int i = 0; i < n; ++i)
      if (!in[i] && (u < 0 || best[i] < best[u])) u = i;
    in[u] = true;
    if (from[u] >= 0) tree.push_back({from[u], u, best[u]});
    for (int v = 0; v < n; ++v)
      if (!in[v] && d(u, v) < best[v]) {
        best[v] = d(u, v);
        from[v] = u;
      }
  }
  std::sort(tree.begin(), tree.end(), [](const E& a, const E& b) { return a.w < b.w; });
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (std::size_t e = 0; e + static_cast<std::size_t>(k - 1) < tree.size(); ++e)
    parent[find(tree[e].u)] = find(tree[e].v);
  std::vector<int> roots(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) roots[i] = find(i);
  return canonical(roots);
}

// Best total overlap over all injective label maps, by permutation search.
inline std::int64_t factorial_matching(const std::vector<int>& a, int ka, const std::vector<int>& b, int kb) {
  const int k = std::max(ka, kb);
  std::vector<std::vector<std::int64_t>> c(static_cast<std::size_t>(k), std::vector<std::int64_t>(k, 0));
  for (std::size_t i = 0; i < a.size(); ++i) ++c[a[i]][b[i]];
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  std::int64_t best = -1;
  do {
    std::int64_t s = 0;
    for (int i = 0; i < k; ++i) s += c[i][perm[i]];
    best = std::max(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Number of partitions of n labelled items into exactly k blocks, counted by
// enumerating restricted growth strings.
inline std::uint64_t enumerate_partitions(int n, int k) {
  std::uint64_t count = 0;
  std::vector<int> s(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int i, int mx) {
    if (i == n) {
      if (mx + 1 == k) ++count;
      return;
    }
    for (int v = 0; v <= mx + 1 && v < k; ++v) {
      s[i] = v;
      rec(i + 1, std::max(mx, v));
    }
  };
  if (n == 0) return k == 0 ? 1 : 0;
  rec(1, 0);
  return count;
}

// ---- bitwise comparisons ----

inline bool same_double(double a, double b) {
  return (std::isnan(a) && std::isnan(b)) || a == b;
}

inline bool same(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_double(a[i], b[i])) return false;
  return true;
}

inline bool same(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same(a[i], b[i])) return false;
  return true;
}

inline bool same(const CurveSeries& a, const CurveSeries& b) {
  return a.k == b.k && same(a.value, b.value) && same(a.dispersion, b.dispersion);
}

inline bool same(const Prediction& a, const Prediction& b) {
  return a.k_star == b.k_star && same(a.evidence, b.evidence) && a.low_confidence == b.low_confidence;
}

inline bool same(const ConsensusResult& a, const ConsensusResult& b) {
  if (a.states.size() != b.states.size()) return false;
  for (std::size_t i = 0; i < a.states.size(); ++i)
    if (a.states[i].m != b.states[i].m || a.states[i].i != b.states[i].i) return false;
  return same(a.area, b.area) && same(a.delta, b.delta) && same(a.delta_prime, b.delta_prime) &&
         same(a.prediction, b.prediction);
}

inline bool same(const MeResult& a, const MeResult& b) {
  return same(a.values, b.values) && a.histograms == b.histograms && same(a.stable_fraction, b.stable_fraction) &&
         same(a.prediction, b.prediction);
}

inline bool same(const ClestResult& a, const ClestResult& b) {
  return same(a.values, b.values) && same(a.observed, b.observed) && same(a.reference, b.reference) &&
         same(a.p_value, b.p_value) && same(a.d, b.d) && same(a.prediction, b.prediction);
}

inline bool same(const LevineDomanyResult& a, const LevineDomanyResult& b) {
  return same(a.values, b.values) && same(a.figure, b.figure) && a.first_local_max == b.first_local_max &&
         same(a.prediction, b.prediction);
}

inline bool same(const RothResult& a, const RothResult& b) {
  return same(a.values, b.values) && same(a.instability, b.instability) && same(a.prediction, b.prediction);
}

inline bool same(const BagClust1Result& a, const BagClust1Result& b) {
  return a.partition == b.partition && a.overlaps == b.overlaps && a.votes == b.votes;
}

inline bool same(const BagClust2Result& a, const BagClust2Result& b) {
  if (a.dissimilarity.rows() != b.dissimilarity.rows() || a.dissimilarity.cols() != b.dissimilarity.cols())
    return false;
  for (Eigen::Index i = 0; i < a.dissimilarity.size(); ++i)
    if (!same_double(a.dissimilarity.data()[i], b.dissimilarity.data()[i])) return false;
  return a.partition == b.partition && a.state.m == b.state.m && a.state.i == b.state.i;
}

// ---- suites ----

// Native instance vs run_stability_statistic wiring on an n = 30 toy set.
inline std::vector<std::pair<std::string, bool>> paradigm_equivalence(std::uint64_t seed) {
  const LabeledData toy = clouds(3, 10, 5.0, seed);
  const Matrix& x = toy.data.values;
  std::vector<std::pair<std::string, bool>> out;
  for (const char* name : {"hier-a", "kmeans-r"}) {
    const Clusterer c = Clusterer::parse(name);
    const std::string tag = std::string(" [") + name + "]";
    {
      MeOptions o;
      o.kmax = 6;
      o.H = 15;
      out.emplace_back("ME" + tag, same(me_run({x}, c, o, seed), me_run_paradigm({x}, c, o, seed)));
    }
    {
      ClestOptions o;
      o.kmax = 5;
      o.H = 4;
      o.B0 = 3;
      out.emplace_back("Clest" + tag, same(clest_run({x}, c, o, seed), clest_run_paradigm({x}, c, o, seed)));
    }
    {
      ConsensusOptions o;
      o.kmax = 8;
      o.H = 15;
      out.emplace_back("Consensus" + tag,
                       same(consensus_run({x}, c, o, seed), consensus_run_paradigm({x}, c, o, seed)));
      out.emplace_back("FC" + tag, same(fc_run({x}, c, o, seed), fc_run_paradigm({x}, c, o, seed)));
    }
    {
      LevineDomanyOptions o;
      o.kmax = 6;
      o.H = 15;
      out.emplace_back("Levine-Domany" + tag,
                       same(levine_domany_run({x}, c, o, seed), levine_domany_run_paradigm({x}, c, o, seed)));
    }
    {
      RothOptions o;
      o.kmax = 6;
      o.H = 8;
      out.emplace_back("Roth" + tag, same(roth_run({x}, c, o, seed), roth_run_paradigm({x}, c, o, seed)));
    }
    out.emplace_back("BagClust1" + tag,
                     same(bagclust1({x}, c, 3, 12, seed), bagclust1_paradigm({x}, c, 3, 12, seed)));
    out.emplace_back("BagClust2" + tag,
                     same(bagclust2({x}, c, 3, 12, 0.8, seed), bagclust2_paradigm({x}, c, 3, 12, 0.8, seed)));
  }
  return out;
}

inline Outcome oracle_pair_counts(int trials, std::uint64_t seed) {
  Outcome o;
  Rng r(seed);
  for (int t = 0; t < trials; ++t) {
    const int n = 2 + static_cast<int>(r.below(9));
    const int ka = 1 + static_cast<int>(r.below(4)), kb = 1 + static_cast<int>(r.below(4));
    const auto a = random_labels(n, ka, r), b = random_labels(n, kb, r);
    const PairCounts got = pair_counts(contingency(a, b));
    const PairCounts want = enumerate_pairs(a, b);
    if (got.a != want.a || got.b != want.b || got.c != want.c || got.d != want.d) {
      o.fail("pair counts differ at trial " + std::to_string(t));
      continue;
    }
    const double N = static_cast<double>(want.total());
    const double rand = (want.a + want.d) / N;
    if (std::abs(rand_index(contingency(a, b)) - rand) > 1e-15) o.fail("Rand differs at trial " + std::to_string(t));
  }
  return o;
}

inline Outcome oracle_wcss(int trials, std::uint64_t seed) {
  Outcome o;
  Rng r(seed);
  for (int t = 0; t < trials; ++t) {
    const int n = 3 + static_cast<int>(r.below(30)), m = 1 + static_cast<int>(r.below(6));
    const int k = 1 + static_cast<int>(r.below(static_cast<std::size_t>(std::min(n, 5))));
    const Matrix x = uniform_matrix(n, m, r.next(), -5.0, 5.0);
    const Partition p = Partition::compact(random_labels(n, k, r));
    const double got = wcss(x, p), want = wcss_pairwise(x, p);
    if (std::abs(got - want) > 1e-9 * std::max(1.0, std::abs(want)))
      o.fail("WCSS identity broken at trial " + std::to_string(t));
  }
  return o;
}

inline Outcome oracle_single_linkage(int trials, std::uint64_t seed) {
  Outcome o;
  Rng r(seed);
  for (int t = 0; t < trials; ++t) {
    const int n = 2 + static_cast<int>(r.below(11));
    const Matrix d = euclidean_distances(uniform_matrix(n, 3, r.next()));
    for (int k = 1; k <= n; ++k) {
      const Partition p = hierarchical(d, Linkage::Single, k);
      if (canonical(p.labels()) != mst_components(d, k))
        o.fail("single linkage != MST components (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
    }
  }
  return o;
}

inline Outcome oracle_matching(int trials, std::uint64_t seed) {
  Outcome o;
  Rng r(seed);
  for (int t = 0; t < trials; ++t) {
    const int n = 1 + static_cast<int>(r.below(25));
    const int ka = 1 + static_cast<int>(r.below(4)), kb = 1 + static_cast<int>(r.below(4));
    const auto a = random_labels(n, ka, r), b = random_labels(n, kb, r);
    const Matching m = max_overlap_matching(a, ka, b, kb);
    const std::int64_t want = factorial_matching(a, ka, b, kb);
    std::int64_t check = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (m.map[b[i]] == a[i]) ++check;
    if (m.overlap != want || check != want) o.fail("matching not optimal at trial " + std::to_string(t));
  }
  return o;
}

inline Outcome oracle_stirling() {
  Outcome o;
  for (int n = 0; n <= 8; ++n)
    for (int k = 0; k <= n; ++k)
      if (stirling_partition_count(n, k) != enumerate_partitions(n, k))
        o.fail("S(" + std::to_string(n) + "," + std::to_string(k) + ") mismatch");
  return o;
}

inline bool non_increasing(const std::vector<double>& t, double rel) {
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i] > t[i - 1] + rel * std::abs(t[i - 1])) return false;
  return true;
}

inline Outcome monotone_nmf(NmfVariant v, int trials, std::uint64_t seed) {
  Outcome o;
  Rng r(seed);
  for (int t = 0; t < trials; ++t) {
    const int m = 6 + static_cast<int>(r.below(12)), n = 6 + static_cast<int>(r.below(20));
    const int rank = 1 + static_cast<int>(r.below(4));
    const Matrix vm = uniform_matrix(m, n, r.next());
    StopRule stop;
    stop.max_iterations = 300;
    const NmfResult res = nmf(vm, rank, v, stop, r.next());
    if (!non_increasing(res.objective_trace, 1e-9))
      o.fail(to_string(v) + " objective increased at trial " + std::to_string(t));
  }
  return o;
}

inline Outcome monotone_kmeans(int trials, std::uint64_t seed) {
  Outcome o;
  Rng r(seed);
  for (int t = 0; t < trials; ++t) {
    const int n = 10 + static_cast<int>(r.below(60));
    const int k = 2 + static_cast<int>(r.below(6));
    const Matrix x = uniform_matrix(n, 3, r.next());
    const KMeansResult km = kmeans(x, k, 100, r.next());
    if (!non_increasing(km.objective_trace, 0.0)) o.fail("K-means objective increased at trial " + std::to_string(t));
  }
  return o;
}

inline Outcome monotone_wcss_r(int trials, std::uint64_t seed) {
  Outcome o;
  Rng r(seed);
  for (int t = 0; t < trials; ++t) {
    const int n = 15 + static_cast<int>(r.below(40));
    const Matrix x = uniform_matrix(n, 2, r.next());
    const CurveSeries c = wcss_r_curve(x, 0, std::min(n, 10), 100, r.next());
    for (std::size_t i = 1; i < c.size(); ++i)
      if (c.value[i - 1] < c.value[i]) o.fail("WCSS-R merge path decreased at trial " + std::to_string(t));
  }
  return o;
}

inline Outcome g_gap_offset_invariance(int trials, std::uint64_t seed) {
  Outcome o;
  Rng r(seed);
  for (int t = 0; t < trials; ++t) {
    const int n = 20 + static_cast<int>(r.below(40));
    const LabeledData d = clouds(1 + static_cast<int>(r.below(4)), n / 4 + 2, 6.0, r.next());
    const CurveSeries lw = log_curve(wcss_curve({d.data.values}, Clusterer::parse("kmeans-r"),
                                            std::min<int>(10, static_cast<int>(d.data.values.rows()) - 1), r.next()));
    const int base = g_gap_predict(lw, 0.0).k_star;
    for (double a : {-1e6, -37.5, -1.0, 0.25, 3.0, 1e3, 1e9})
      if (g_gap_predict(lw, a).k_star != base) o.fail("G-Gap changed with offset at trial " + std::to_string(t));
  }
  return o;
}

}  // namespace testsupport
