#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "kstar/errors.hpp"

namespace kstar {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// n items (rows) by m features (columns).
struct DataMatrix {
  Matrix values;
  std::vector<std::string> row_ids;
  std::vector<std::string> col_ids;

  DataMatrix() = default;
  // Generates ids "r0".."r{n-1}" and "f0".."f{m-1}" and validates.
  explicit DataMatrix(Matrix v);
  DataMatrix(Matrix v, std::vector<std::string> rows, std::vector<std::string> cols);

  Eigen::Index n() const { return values.rows(); }
  Eigen::Index m() const { return values.cols(); }

  // Throws DataError unless n >= 2, m >= 1, entries finite, row ids unique.
  void validate() const;
};

// Assignment of n items to k non-empty clusters labelled 0..k-1.
class Partition {
 public:
  Partition() = default;
  // Throws DataError if a label is outside [0, k) or a cluster is empty.
  Partition(std::vector<int> labels, int k);

  // Relabels arbitrary integer labels to 0..k'-1 by order of first appearance.
  static Partition compact(const std::vector<int>& labels);
  // All items in one cluster.
  static Partition trivial(std::size_t n) { return Partition(std::vector<int>(n, 0), n ? 1 : 0); }

  int k() const { return k_; }
  std::size_t size() const { return labels_.size(); }
  int operator[](std::size_t i) const { return labels_[i]; }
  const std::vector<int>& labels() const { return labels_; }
  std::vector<int> sizes() const;
  std::vector<std::vector<int>> members() const;

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.k_ == b.k_ && a.labels_ == b.labels_;
  }

 private:
  std::vector<int> labels_;
  int k_ = 0;
};

// Generator-assigned class labels; same invariant as Partition.
using GoldStandard = Partition;

struct LabeledData {
  DataMatrix data;
  GoldStandard labels;
};

// Each row to mean 0 and sample sd 1 (denominator m - 1). Constant rows
// become all zeros and are reported through `warnings`.
Matrix standardize_rows(const Matrix& x, Warnings* warnings = nullptr);

// Rows of `x` listed in `rows`, in that order (duplicates allowed).
Matrix select_rows(const Matrix& x, const std::vector<int>& rows);

// Labels of `p` at `rows`.
std::vector<int> select_labels(const Partition& p, const std::vector<int>& rows);

}  // namespace kstar
