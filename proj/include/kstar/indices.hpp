#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "kstar/data.hpp"

namespace kstar {

// Cross tabulation of two labelings of the same items. Labels need not be
// contiguous; empty rows and columns are dropped.
struct ContingencyTable {
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts;
  std::vector<std::int64_t> row_sums;
  std::vector<std::int64_t> col_sums;
  std::int64_t n = 0;
};

ContingencyTable contingency(std::span<const int> a, std::span<const int> b);
ContingencyTable contingency(const Partition& a, const Partition& b);
ContingencyTable contingency_from_counts(const Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>& counts);

// Pairs together in both (a), only in the first (b), only in the second
// (c), in neither (d).
struct PairCounts {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;
  std::int64_t d = 0;
  std::int64_t total() const { return a + b + c + d; }
};

PairCounts pair_counts(const ContingencyTable& t);

double rand_index(const ContingencyTable& t);
// 0 with a warning when the expected-index denominator vanishes.
double adjusted_rand(const ContingencyTable& t, Warnings* warnings = nullptr);
// Throws NumericalError when either partition has only singleton pairs.
double fowlkes_mallows(const ContingencyTable& t);
// Asymmetric: rows are the reference classes.
double f_index(const ContingencyTable& t, double beta = 1.0);

enum class ExternalIndex { AdjustedRand, Rand, FowlkesMallows, FIndex };

ExternalIndex parse_external_index(const std::string& name);
std::string to_string(ExternalIndex e);
double external_index(ExternalIndex e, const ContingencyTable& t, Warnings* warnings = nullptr);

}  // namespace kstar
