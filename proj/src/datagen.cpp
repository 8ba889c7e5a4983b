#include "kstar/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kstar/rng.hpp"

namespace kstar {

NullModel parse_null_model(const std::string& name) {
  if (name == "permutational" || name == "perm") return NullModel::Permutational;
  if (name == "poisson_box" || name == "box") return NullModel::PoissonBox;
  if (name == "poisson_pc" || name == "pc") return NullModel::PoissonPc;
  if (name == "unimodal") return NullModel::Unimodal;
  throw ParameterError("unknown null model '" + name + "'");
}

std::string to_string(NullModel m) {
  switch (m) {
    case NullModel::Permutational:
      return "permutational";
    case NullModel::PoissonBox:
      return "poisson_box";
    case NullModel::PoissonPc:
      return "poisson_pc";
    case NullModel::Unimodal:
      return "unimodal";
  }
  return "?";
}

namespace {

Matrix box_uniform(const Matrix& x, Rng& rng) {
  Matrix z(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double lo = x.col(j).minCoeff();
    const double hi = x.col(j).maxCoeff();
    for (Eigen::Index i = 0; i < x.rows(); ++i) z(i, j) = lo == hi ? lo : rng.uniform(lo, hi);
  }
  return z;
}

int ceil_fraction(double beta, int n) {
  return static_cast<int>(std::ceil(beta * n - 1e-9));
}

void check_beta(double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw ParameterError("subsampling fraction must lie in (0, 1]");
}

}  // namespace

Matrix null_dataset(const Matrix& x, NullModel model, std::uint64_t seed) {
  Rng rng(seed);
  switch (model) {
    case NullModel::Permutational: {
      Matrix z = x;
      std::vector<double> col(static_cast<std::size_t>(x.rows()));
      for (Eigen::Index j = 0; j < x.cols(); ++j) {
        for (Eigen::Index i = 0; i < x.rows(); ++i) col[static_cast<std::size_t>(i)] = x(i, j);
        rng.shuffle(col);
        for (Eigen::Index i = 0; i < x.rows(); ++i) z(i, j) = col[static_cast<std::size_t>(i)];
      }
      return z;
    }
    case NullModel::PoissonBox:
      return box_uniform(x, rng);
    case NullModel::PoissonPc: {
      const Eigen::RowVectorXd mean = x.colwise().mean();
      const Matrix xc = x.rowwise() - mean;
      Eigen::BDCSVD<Matrix> svd(xc, Eigen::ComputeThinV);
      const Matrix& v = svd.matrixV();
      const Matrix z = box_uniform(xc * v, rng) * v.transpose();
      return z.rowwise() + mean;
    }
    case NullModel::Unimodal: {
      Matrix z(x.rows(), x.cols());
      const double n = static_cast<double>(x.rows());
      for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double mean = x.col(j).mean();
        const double sd = x.rows() > 1 ? std::sqrt((x.col(j).array() - mean).square().sum() / (n - 1.0)) : 0.0;
        for (Eigen::Index i = 0; i < x.rows(); ++i) z(i, j) = sd == 0.0 ? x(0, j) : rng.normal(mean, sd);
      }
      return z;
    }
  }
  return x;
}

std::vector<int> subsample_rows(int n, double beta, std::uint64_t seed) {
  check_beta(beta);
  Rng rng(seed);
  auto rows = rng.sample_without_replacement(n, std::max(1, ceil_fraction(beta, n)));
  std::sort(rows.begin(), rows.end());
  return rows;
}

std::vector<int> stratified_subsample_rows(const Partition& strata, double beta, std::uint64_t seed) {
  check_beta(beta);
  Rng rng(seed);
  std::vector<int> rows;
  for (const auto& members : strata.members()) {
    const int take = std::max(1, ceil_fraction(beta, static_cast<int>(members.size())));
    for (int i : rng.sample_without_replacement(static_cast<int>(members.size()), take))
      rows.push_back(members[static_cast<std::size_t>(i)]);
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

std::vector<int> bootstrap_rows(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> rows(static_cast<std::size_t>(n));
  for (auto& r : rows) r = static_cast<int>(rng.below(static_cast<std::size_t>(n)));
  std::sort(rows.begin(), rows.end());
  return rows;
}

Matrix noise_inject(const Matrix& x, std::uint64_t seed) {
  std::vector<double> var(static_cast<std::size_t>(x.rows()), 0.0);
  if (x.cols() > 1)
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double mean = x.row(i).mean();
      var[static_cast<std::size_t>(i)] =
          (x.row(i).array() - mean).square().sum() / static_cast<double>(x.cols() - 1);
    }
  std::sort(var.begin(), var.end());
  const std::size_t h = var.size() / 2;
  const double med = var.size() % 2 ? var[h] : 0.5 * (var[h - 1] + var[h]);
  const double sd = std::sqrt(med);
  Rng rng(seed);
  Matrix z = x;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) z(i, j) += rng.normal(0.0, sd);
  return z;
}

int jl_dimension(int n, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("projection epsilon must lie in (0, 1)");
  if (n < 2) throw ParameterError("projection needs n >= 2");
  return static_cast<int>(std::ceil(4.0 / (eps * eps / 2.0 - eps * eps * eps / 3.0) * std::log(n)));
}

Projection random_project(const Matrix& x, double eps, std::uint64_t seed, Warnings* warnings) {
  const int target = jl_dimension(static_cast<int>(x.rows()), eps);
  Projection p;
  if (target >= x.cols()) {
    warn(warnings, "projection dimension " + std::to_string(target) + " is not below m = " +
                       std::to_string(x.cols()) + ", data left unprojected");
    p.data = x;
    p.basis = Matrix::Identity(x.cols(), x.cols());
    p.identity = true;
    return p;
  }
  Rng rng(seed);
  p.basis.resize(x.cols(), target);
  for (Eigen::Index j = 0; j < target; ++j)
    for (Eigen::Index i = 0; i < x.cols(); ++i) p.basis(i, j) = rng.normal();
  p.basis /= std::sqrt(static_cast<double>(target));
  p.data = x * p.basis;
  return p;
}

DgpResult apply_dgp(const Matrix& x, const DgpSpec& spec, std::uint64_t seed, Warnings* warnings) {
  const int n = static_cast<int>(x.rows());
  DgpResult r;
  switch (spec.kind) {
    case DgpSpec::Kind::Subsample:
      r.kept_rows = subsample_rows(n, spec.beta, seed);
      break;
    case DgpSpec::Kind::StratifiedSubsample:
      if (!spec.strata) throw ParameterError("stratified subsampling needs a partition");
      r.kept_rows = stratified_subsample_rows(*spec.strata, spec.beta, seed);
      break;
    case DgpSpec::Kind::Bootstrap:
      r.kept_rows = bootstrap_rows(n, seed);
      break;
    default:
      break;
  }
  if (!r.kept_rows.empty()) {
    r.data = select_rows(x, r.kept_rows);
    r.row_subset = true;
    return r;
  }
  r.kept_rows.resize(static_cast<std::size_t>(n));
  std::iota(r.kept_rows.begin(), r.kept_rows.end(), 0);
  switch (spec.kind) {
    case DgpSpec::Kind::Noise:
      r.data = noise_inject(x, seed);
      break;
    case DgpSpec::Kind::Projection:
      r.data = random_project(x, spec.eps, seed, warnings).data;
      break;
    default:
      r.data = null_dataset(x, spec.null_model, seed);
      break;
  }
  return r;
}

}  // namespace kstar
