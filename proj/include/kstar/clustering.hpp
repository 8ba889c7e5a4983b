#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "kstar/data.hpp"

namespace kstar {

enum class Linkage { Average, Complete, Single };

// One agglomeration step. Nodes 0..n-1 are leaves, node n+t is created by
// merge t. left < right.
struct Merge {
  int left;
  int right;
  double height;
  int size;
};

struct Dendrogram {
  int n = 0;
  std::vector<Merge> merges;  // n - 1 entries unless built with stop_at > 1
};

// Symmetric n x n matrix of Euclidean distances between rows.
Matrix euclidean_distances(const Matrix& x);

// dist restricted to `rows` (both axes, duplicates allowed).
Matrix submatrix(const Matrix& dist, const std::vector<int>& rows);

// Agglomerative clustering of a distance matrix. Among equal distances the
// lowest (row, column) pair of active cluster slots merges first. Average
// linkage uses the Lance-Williams update. Stops once `stop_at` clusters
// remain.
Dendrogram build_dendrogram(const Matrix& dist, Linkage linkage, int stop_at = 1);

// Partition with k clusters, labels by order of first appearance.
Partition cut_dendrogram(const Dendrogram& d, int k);

Partition hierarchical(const Matrix& dist, Linkage linkage, int k);

// CSV with header left,right,height,size.
void write_dendrogram(std::ostream& out, const Dendrogram& d);

// k x m matrix of cluster means.
Matrix centroids(const Matrix& x, const Partition& p);

// Within-cluster sum of squared distances to the cluster means.
double wcss(const Matrix& x, const Partition& p);

struct KMeansResult {
  Partition partition;
  Matrix centroids;
  std::vector<double> objective_trace;  // WCSS of every assignment visited
  int iterations = 0;
  bool converged = false;
};

// Lloyd iteration from k distinct random rows as centroids. Ties go to the
// lowest cluster index; an emptied cluster receives the point farthest from
// its own centroid. Stops when the assignment repeats or after niter steps.
KMeansResult kmeans(const Matrix& x, int k, int niter, std::uint64_t seed);

// Lloyd iteration started from the centroids of `init`.
KMeansResult kmeans(const Matrix& x, const Partition& init, int niter);

// Merges the two clusters whose centroids are closest (ties to the lowest
// pair). The higher label is removed and labels above it shift down by one.
Partition merge_min_centroid(const Matrix& x, const Partition& p);

}  // namespace kstar
