#include "kstar/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>

namespace kstar {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, delim)) out.push_back(trim(cell));
  if (!line.empty() && line.back() == delim) out.emplace_back();
  return out;
}

bool parse_double(const std::string& s, double& v) {
  if (s.empty()) return false;
  const char* b = s.data();
  const char* e = b + s.size();
  if (*b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  return ec == std::errc() && p == e;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open '" + path + "'");
  return f;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ParameterError("cannot write '" + path + "'");
  return f;
}

}  // namespace

LoadedMatrix load_matrix(std::istream& in, const LoadOptions& opt) {
  std::vector<std::pair<long, std::string>> lines;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!trim(line).empty()) lines.emplace_back(lineno, line);
  }
  if (lines.empty()) throw DataError("data matrix needs at least 2 rows, got 0");
  const char delim = lines.front().second.find('\t') != std::string::npos ? '\t' : ',';

  std::vector<std::string> col_ids;
  std::size_t first = 0;
  std::size_t width = 0;
  if (opt.has_header) {
    col_ids = split(lines.front().second, delim);
    width = col_ids.size();
    first = 1;
  }

  const std::size_t skip = opt.has_row_ids ? 1 : 0;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> row_ids;
  std::vector<std::string> raw_labels;
  for (std::size_t r = first; r < lines.size(); ++r) {
    auto [ln, text] = lines[r];
    auto cells = split(text, delim);
    if (width == 0) width = cells.size();
    if (cells.size() != width)
      throw ParseError("row " + std::to_string(ln) + " has " + std::to_string(cells.size()) + " fields, expected " +
                           std::to_string(width),
                       ln, 0);
    if (cells.size() <= skip) throw ParseError("row " + std::to_string(ln) + " has no value columns", ln, 0);
    row_ids.push_back(opt.has_row_ids ? cells[0] : "r" + std::to_string(rows.size()));
    std::vector<double> values;
    for (std::size_t c = skip; c < cells.size(); ++c) {
      const int vcol = static_cast<int>(c - skip);
      if (opt.label_column && *opt.label_column == vcol) {
        raw_labels.push_back(cells[c]);
        continue;
      }
      double v;
      if (!parse_double(cells[c], v))
        throw ParseError("cannot parse '" + cells[c] + "' at row " + std::to_string(ln) + ", column " +
                             std::to_string(c + 1),
                         ln, static_cast<long>(c + 1));
      if (!std::isfinite(v))
        throw DataError("non-finite value at row " + std::to_string(ln) + ", column " + std::to_string(c + 1));
      values.push_back(v);
    }
    rows.push_back(std::move(values));
  }
  if (opt.label_column && (*opt.label_column < 0 || static_cast<std::size_t>(*opt.label_column) + skip >= width))
    throw ParameterError("label column " + std::to_string(*opt.label_column) + " out of range");
  if (rows.size() < 2) throw DataError("data matrix needs at least 2 rows, got " + std::to_string(rows.size()));

  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index m = static_cast<Eigen::Index>(rows.front().size());
  Matrix x(n, m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j) x(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];

  std::vector<std::string> cols;
  if (opt.has_header) {
    for (std::size_t c = skip; c < col_ids.size(); ++c)
      if (!(opt.label_column && *opt.label_column == static_cast<int>(c - skip))) cols.push_back(col_ids[c]);
  } else {
    for (Eigen::Index j = 0; j < m; ++j) cols.push_back("f" + std::to_string(j));
  }

  LoadedMatrix out{DataMatrix(std::move(x), std::move(row_ids), std::move(cols)), std::nullopt};
  if (opt.label_column) {
    std::unordered_map<std::string, int> ids;
    std::vector<int> labels;
    for (const auto& s : raw_labels) labels.push_back(ids.try_emplace(s, static_cast<int>(ids.size())).first->second);
    out.labels = Partition::compact(labels);
  }
  return out;
}

LoadedMatrix load_matrix(const std::string& path, const LoadOptions& opt) {
  auto f = open_in(path);
  return load_matrix(f, opt);
}

void write_matrix(std::ostream& out, const DataMatrix& d) {
  out << "id";
  for (const auto& c : d.col_ids) out << ',' << c;
  out << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    out << d.row_ids[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < d.m(); ++j) out << ',' << d.values(i, j);
    out << '\n';
  }
}

void write_matrix(const std::string& path, const DataMatrix& d) {
  auto f = open_out(path);
  write_matrix(f, d);
}

void write_partition(std::ostream& out, const Partition& p) {
  for (int l : p.labels()) out << l << '\n';
}

void write_partition(const std::string& path, const Partition& p) {
  auto f = open_out(path);
  write_partition(f, p);
}

Partition read_partition(std::istream& in) {
  std::vector<int> labels;
  std::string line;
  long ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    std::string t = trim(line);
    if (t.empty()) continue;
    int v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size() || v < 0)
      throw ParseError("cannot parse label '" + t + "' at row " + std::to_string(ln), ln, 1);
    labels.push_back(v);
  }
  int k = 0;
  for (int l : labels) k = std::max(k, l + 1);
  return Partition(std::move(labels), k);
}

Partition read_partition(const std::string& path) {
  auto f = open_in(path);
  return read_partition(f);
}

void write_plain_matrix(std::ostream& out, const Matrix& x) {
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) out << (j ? "," : "") << x(i, j);
    out << '\n';
  }
}

}  // namespace kstar
