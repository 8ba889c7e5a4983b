#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kstar/data.hpp"

namespace kstar {

enum class NmfVariant { Multiplicative, LinModified, Als };

NmfVariant parse_nmf_variant(const std::string& name);
std::string to_string(NmfVariant v);

struct StopRule {
  int max_iterations = 2000;
  // Stop when the objective changed by less than this fraction over the
  // last `patience` iterations.
  double relative_tolerance = 1e-6;
  int patience = 10;
};

struct NmfResult {
  Matrix w;  // m x r
  Matrix h;  // r x n
  std::vector<double> objective_trace;  // initial value, then one per iteration
  int iterations = 0;
  bool converged = false;
};

inline constexpr double kNmfDelta = 1e-12;
inline constexpr double kNmfEpsilon = 1e-9;
inline constexpr double kAlsRidge = 1e-10;

// f = 1/2 ||V - WH||_F^2, directly and through the trace expansion.
double nmf_objective(const Matrix& v, const Matrix& w, const Matrix& h);
double nmf_objective_trace(const Matrix& v, const Matrix& w, const Matrix& h);

// V is features x items and must be non-negative; 1 <= r < min(m, n).
// W and H start uniform on [0, 1).
NmfResult nmf(const Matrix& v, int r, NmfVariant variant, const StopRule& stop, std::uint64_t seed);
NmfResult nmf(const Matrix& v, Matrix w, Matrix h, NmfVariant variant, const StopRule& stop);

// W columns are the cluster means of V; H is the cluster indicator with
// off-cluster entries 0.05 so that multiplicative updates can still move items.
std::pair<Matrix, Matrix> nmf_init_from_partition(const Matrix& v, const Partition& p);

// Item i goes to argmax_j H(j, i), ties to the lowest j. An empty cluster j
// takes the item with the largest H(j, i) among clusters of size >= 2.
Partition nmf_cluster(const Matrix& h, Warnings* warnings = nullptr);

// Clusters the rows of an items x features matrix. Negative entries are a
// DataError unless `shift` is set, in which case the global minimum is
// subtracted first.
Partition nmf_partition(const Matrix& x, int k, NmfVariant variant, const StopRule& stop, std::uint64_t seed,
                        bool shift = false, const Partition* init = nullptr, Warnings* warnings = nullptr);

}  // namespace kstar
