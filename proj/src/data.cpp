#include "kstar/data.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace kstar {

namespace {

std::vector<std::string> make_ids(const char* prefix, Eigen::Index n) {
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) ids.push_back(prefix + std::to_string(i));
  return ids;
}

}  // namespace

DataMatrix::DataMatrix(Matrix v)
    : values(std::move(v)), row_ids(make_ids("r", values.rows())), col_ids(make_ids("f", values.cols())) {
  validate();
}

DataMatrix::DataMatrix(Matrix v, std::vector<std::string> rows, std::vector<std::string> cols)
    : values(std::move(v)), row_ids(std::move(rows)), col_ids(std::move(cols)) {
  validate();
}

void DataMatrix::validate() const {
  if (values.rows() < 2) throw DataError("data matrix needs at least 2 rows, got " + std::to_string(values.rows()));
  if (values.cols() < 1) throw DataError("data matrix needs at least 1 column");
  if (static_cast<Eigen::Index>(row_ids.size()) != values.rows())
    throw DataError("row id count does not match row count");
  if (static_cast<Eigen::Index>(col_ids.size()) != values.cols())
    throw DataError("column id count does not match column count");
  for (Eigen::Index i = 0; i < values.rows(); ++i)
    for (Eigen::Index j = 0; j < values.cols(); ++j)
      if (!std::isfinite(values(i, j)))
        throw DataError("non-finite value at row " + std::to_string(i + 1) + ", column " + std::to_string(j + 1));
  std::unordered_set<std::string> seen;
  for (const auto& id : row_ids)
    if (!seen.insert(id).second) throw DataError("duplicate row id '" + id + "'");
}

Partition::Partition(std::vector<int> labels, int k) : labels_(std::move(labels)), k_(k) {
  if (k < 0) throw DataError("negative cluster count");
  if (labels_.empty() && k != 0) throw DataError("empty partition with k > 0");
  std::vector<int> count(static_cast<std::size_t>(k), 0);
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    int l = labels_[i];
    if (l < 0 || l >= k)
      throw DataError("label " + std::to_string(l) + " of item " + std::to_string(i) + " outside [0, " +
                      std::to_string(k) + ")");
    ++count[static_cast<std::size_t>(l)];
  }
  for (int c = 0; c < k; ++c)
    if (count[static_cast<std::size_t>(c)] == 0) throw DataError("cluster " + std::to_string(c) + " is empty");
}

Partition Partition::compact(const std::vector<int>& labels) {
  std::unordered_map<int, int> map;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = map.try_emplace(labels[i], static_cast<int>(map.size()));
    out[i] = it->second;
  }
  return Partition(std::move(out), static_cast<int>(map.size()));
}

std::vector<int> Partition::sizes() const {
  std::vector<int> s(static_cast<std::size_t>(k_), 0);
  for (int l : labels_) ++s[static_cast<std::size_t>(l)];
  return s;
}

std::vector<std::vector<int>> Partition::members() const {
  std::vector<std::vector<int>> m(static_cast<std::size_t>(k_));
  for (std::size_t i = 0; i < labels_.size(); ++i) m[static_cast<std::size_t>(labels_[i])].push_back(static_cast<int>(i));
  return m;
}

Matrix standardize_rows(const Matrix& x, Warnings* warnings) {
  Matrix out(x.rows(), x.cols());
  const double m = static_cast<double>(x.cols());
  int constant = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double mean = x.row(i).mean();
    double ss = (x.row(i).array() - mean).square().sum();
    double sd = x.cols() > 1 ? std::sqrt(ss / (m - 1.0)) : 0.0;
    if (sd == 0.0 || !std::isfinite(sd)) {
      out.row(i).setZero();
      ++constant;
    } else {
      out.row(i) = (x.row(i).array() - mean) / sd;
    }
  }
  if (constant > 0) warn(warnings, std::to_string(constant) + " constant row(s) standardized to zeros");
  return out;
}

Matrix select_rows(const Matrix& x, const std::vector<int>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(rows[i]);
  return out;
}

std::vector<int> select_labels(const Partition& p, const std::vector<int>& rows) {
  std::vector<int> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = p[static_cast<std::size_t>(rows[i])];
  return out;
}

}  // namespace kstar
