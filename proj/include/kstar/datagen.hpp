#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kstar/data.hpp"

namespace kstar {

enum class NullModel { Permutational, PoissonBox, PoissonPc, Unimodal };

NullModel parse_null_model(const std::string& name);
std::string to_string(NullModel m);

// Reference dataset with the shape of x and no cluster structure:
//  Permutational  each column permuted independently
//  PoissonBox     each feature uniform over its observed [min, max]
//  PoissonPc      box-uniform in the principal axes of the centred data
//  Unimodal       each feature normal with its observed mean and sd
Matrix null_dataset(const Matrix& x, NullModel model, std::uint64_t seed);

// ceil(beta * n) distinct rows, sorted increasing. beta in (0, 1].
std::vector<int> subsample_rows(int n, double beta, std::uint64_t seed);
// ceil(beta * |c|) rows from every cluster c, merged and sorted.
std::vector<int> stratified_subsample_rows(const Partition& strata, double beta, std::uint64_t seed);
// n rows drawn with replacement, sorted.
std::vector<int> bootstrap_rows(int n, std::uint64_t seed);

// Adds N(0, s2) noise where s2 is the median of the per-row sample variances.
Matrix noise_inject(const Matrix& x, std::uint64_t seed);

// Target dimension ceil(4 (eps^2/2 - eps^3/3)^-1 ln n). eps in (0, 1).
int jl_dimension(int n, double eps);

struct Projection {
  Matrix data;
  Matrix basis;  // m x m', Gaussian entries scaled by 1/sqrt(m')
  bool identity = false;
};

// Gaussian random projection to jl_dimension(n, eps) features. When that is
// not below m the data are returned unchanged with a warning.
Projection random_project(const Matrix& x, double eps, std::uint64_t seed, Warnings* warnings = nullptr);

struct DgpSpec {
  enum class Kind { Subsample, StratifiedSubsample, Bootstrap, Noise, Projection, Null };
  Kind kind = Kind::Subsample;
  double beta = 0.8;
  double eps = 0.5;
  NullModel null_model = NullModel::PoissonBox;
  std::optional<Partition> strata;

  static DgpSpec subsample(double beta) {
    DgpSpec s;
    s.beta = beta;
    return s;
  }
  static DgpSpec bootstrap() { return of(Kind::Bootstrap); }
  static DgpSpec noise() { return of(Kind::Noise); }
  static DgpSpec projection(double eps) {
    DgpSpec s = of(Kind::Projection);
    s.eps = eps;
    return s;
  }
  static DgpSpec null(NullModel m) {
    DgpSpec s = of(Kind::Null);
    s.null_model = m;
    return s;
  }
  static DgpSpec of(Kind k) {
    DgpSpec s;
    s.kind = k;
    return s;
  }
};

struct DgpResult {
  Matrix data;
  // Original item of every output row.
  std::vector<int> kept_rows;
  // True when the output rows are copies of input rows.
  bool row_subset = false;
};

DgpResult apply_dgp(const Matrix& x, const DgpSpec& spec, std::uint64_t seed, Warnings* warnings = nullptr);

}  // namespace kstar
