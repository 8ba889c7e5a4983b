#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kstar/data.hpp"

namespace kstar {

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// Maximum-weight perfect assignment on a square matrix; result[row] = column.
std::vector<int> hungarian_max(const CountMatrix& weight);

struct Matching {
  // Label of the first partition matched to each label of the second. When
  // the second has more clusters, unmatched ones get fresh labels >= k_a.
  std::vector<int> map;
  std::int64_t overlap = 0;
};

// Relabels b onto a maximizing the number of items with equal labels. The
// smaller side is padded with empty clusters.
Matching max_overlap_matching(std::span<const int> a, int ka, std::span<const int> b, int kb);
Matching max_overlap_matching(const Partition& a, const Partition& b);

}  // namespace kstar
