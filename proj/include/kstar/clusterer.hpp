#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "kstar/clustering.hpp"
#include "kstar/nmf.hpp"

namespace kstar {

struct HierSpec {
  Linkage linkage = Linkage::Average;
};

struct KMeansSpec {
  // Random rows, or the cut of a hierarchical tree with `linkage`.
  bool from_hier = false;
  Linkage linkage = Linkage::Average;
  int niter = 100;
};

struct NmfSpec {
  NmfVariant variant = NmfVariant::Multiplicative;
  StopRule stop;
  bool from_hier = false;
  Linkage linkage = Linkage::Average;
  bool shift = false;
};

// K-means at the top of the range, then centroid merges downwards with a
// K-means refresh whenever refresh > 0 and k % refresh == 0.
struct WcssRefreshSpec {
  int refresh = 0;
  int niter = 100;
};

// Data handed to a clusterer. `dist`, when set, holds the Euclidean
// distances between the rows of `x` and saves recomputing them.
struct ClusterInput {
  const Matrix& x;
  const Matrix* dist = nullptr;
};

class Clusterer {
 public:
  using Spec = std::variant<HierSpec, KMeansSpec, NmfSpec, WcssRefreshSpec>;

  Clusterer(Spec spec = HierSpec{}) : spec_(std::move(spec)) {}

  // hier-a|c|s, kmeans-r, kmeans-a|c|s, nmf-r, nmf-a|c|s, nmf-lin-r, nmf-als-r,
  // nmf-lin-a, nmf-als-a, ..., wcss-r<R>.
  static Clusterer parse(const std::string& name);
  std::string name() const;
  const Spec& spec() const { return spec_; }
  bool is_hierarchical() const { return std::holds_alternative<HierSpec>(spec_); }
  // Result does not depend on the seed.
  bool deterministic() const { return is_hierarchical(); }

  // k = 1 gives the trivial partition. The random stream is
  // derive_seed(seed, k), so the same seed can be shared across k.
  Partition cluster(const ClusterInput& in, int k, std::uint64_t seed, Warnings* warnings = nullptr) const;

  // Partitions for k = kmin..kmax. Equal to calling cluster() for every k,
  // except that hierarchical methods build one tree and WCSS-R walks one
  // merge path from kmax downwards.
  std::vector<Partition> cluster_range(const ClusterInput& in, int kmin, int kmax, std::uint64_t seed,
                                       Warnings* warnings = nullptr) const;

 private:
  Spec spec_;
};

// Partitions of the WCSS-R path for k = 1..kmax (index k - 1).
std::vector<Partition> wcss_r_path(const Matrix& x, int refresh, int kmax, int niter, std::uint64_t seed);

}  // namespace kstar
