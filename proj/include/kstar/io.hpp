#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "kstar/data.hpp"

namespace kstar {

struct LoadOptions {
  bool has_header = false;
  // First column holds row ids instead of values.
  bool has_row_ids = false;
  // 0-based column (after the id column, if any) holding class labels.
  std::optional<int> label_column;
};

struct LoadedMatrix {
  DataMatrix data;
  std::optional<GoldStandard> labels;
};

// Delimiter is a tab if the first non-empty line contains one, else a comma.
// Errors name the 1-based file line and column of the offending cell.
LoadedMatrix load_matrix(std::istream& in, const LoadOptions& opt = {});
LoadedMatrix load_matrix(const std::string& path, const LoadOptions& opt = {});

// Comma-separated, header "id,<col ids>", values printed with 17 digits.
void write_matrix(std::ostream& out, const DataMatrix& d);
void write_matrix(const std::string& path, const DataMatrix& d);

// One integer label per line.
void write_partition(std::ostream& out, const Partition& p);
void write_partition(const std::string& path, const Partition& p);
Partition read_partition(std::istream& in);
Partition read_partition(const std::string& path);

// Comma-separated matrix without ids (W, H factors and similar).
void write_plain_matrix(std::ostream& out, const Matrix& x);

}  // namespace kstar
