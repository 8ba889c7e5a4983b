#pragma once

#include <cstdint>

namespace kstar {

// Largest n accepted by stirling_partition_count.
inline constexpr int kStirlingMaxN = 25;

// Number of partitions of n items into exactly k non-empty clusters, from
// the alternating sum (1/k!) sum_i (-1)^(k-i) C(k,i) i^n in 128-bit integers.
// Returns 0 for k > n. Throws NumericalError for n > kStirlingMaxN and
// ParameterError for negative arguments.
std::uint64_t stirling_partition_count(int n, int k);

}  // namespace kstar
