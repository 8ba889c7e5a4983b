#include "kstar/nmf.hpp"

#include <algorithm>
#include <cmath>

#include "kstar/rng.hpp"

namespace kstar {

NmfVariant parse_nmf_variant(const std::string& name) {
  if (name == "multiplicative" || name == "mu" || name == "lee_seung") return NmfVariant::Multiplicative;
  if (name == "lin" || name == "lin_modified") return NmfVariant::LinModified;
  if (name == "als") return NmfVariant::Als;
  throw ParameterError("unknown NMF variant '" + name + "'");
}

std::string to_string(NmfVariant v) {
  switch (v) {
    case NmfVariant::Multiplicative:
      return "multiplicative";
    case NmfVariant::LinModified:
      return "lin";
    case NmfVariant::Als:
      return "als";
  }
  return "?";
}

double nmf_objective(const Matrix& v, const Matrix& w, const Matrix& h) {
  return 0.5 * (v - w * h).squaredNorm();
}

double nmf_objective_trace(const Matrix& v, const Matrix& w, const Matrix& h) {
  const double vv = v.squaredNorm();
  const double cross = (w.transpose() * v).cwiseProduct(h).sum();
  const double quad = (w.transpose() * w).cwiseProduct(h * h.transpose()).sum();
  return 0.5 * (vv - 2.0 * cross + quad);
}

namespace {

void step_multiplicative(const Matrix& v, Matrix& w, Matrix& h) {
  const Matrix wt = w.transpose();
  h = (h.array() * (wt * v).array() / ((wt * w * h).array() + kNmfDelta)).matrix();
  const Matrix ht = h.transpose();
  w = (w.array() * (v * ht).array() / ((w * (h * ht)).array() + kNmfDelta)).matrix();
}

void step_lin(const Matrix& v, Matrix& w, Matrix& h) {
  {
    const Matrix wtw = w.transpose() * w;
    const Matrix grad = wtw * h - w.transpose() * v;
    Matrix bar = h;
    for (Eigen::Index i = 0; i < h.size(); ++i)
      if (grad(i) < 0.0) bar(i) = std::max(h(i), kNmfEpsilon);
    const Matrix den = (wtw * bar).array() + kNmfDelta;
    h = h - bar.cwiseQuotient(den).cwiseProduct(grad);
  }
  {
    const Matrix hht = h * h.transpose();
    const Matrix grad = w * hht - v * h.transpose();
    Matrix bar = w;
    for (Eigen::Index i = 0; i < w.size(); ++i)
      if (grad(i) < 0.0) bar(i) = std::max(w(i), kNmfEpsilon);
    const Matrix den = (bar * hht).array() + kNmfDelta;
    w = w - bar.cwiseQuotient(den).cwiseProduct(grad);
  }
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    const double s = w.col(j).sum();
    if (s > 0.0) {
      w.col(j) /= s;
      h.row(j) *= s;
    }
  }
}

Matrix solve_spd(const Matrix& a, const Matrix& b) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() == Eigen::Success) {
    Matrix x = llt.solve(b);
    if (x.allFinite()) return x;
  }
  const Matrix ridge = a + kAlsRidge * Matrix::Identity(a.rows(), a.cols());
  Matrix x = ridge.ldlt().solve(b);
  if (!x.allFinite()) throw NumericalError("ALS normal equations are singular");
  return x;
}

void step_als(const Matrix& v, Matrix& w, Matrix& h) {
  h = solve_spd(w.transpose() * w, w.transpose() * v).cwiseMax(0.0);
  w = solve_spd(h * h.transpose(), h * v.transpose()).transpose().cwiseMax(0.0);
}

void check_input(const Matrix& v, int r) {
  if ((v.array() < 0.0).any()) throw DataError("NMF needs non-negative data");
  if (r < 1 || r >= std::min(v.rows(), v.cols()))
    throw ParameterError("NMF rank must satisfy 1 <= r < min(m, n), got r = " + std::to_string(r));
}

}  // namespace

NmfResult nmf(const Matrix& v, Matrix w, Matrix h, NmfVariant variant, const StopRule& stop) {
  if (w.rows() != v.rows() || h.cols() != v.cols() || w.cols() != h.rows())
    throw ParameterError("NMF factor shapes do not match V");
  check_input(v, static_cast<int>(w.cols()));
  if ((w.array() < 0.0).any() || (h.array() < 0.0).any()) throw DataError("NMF factors must be non-negative");
  if (stop.max_iterations < 0 || stop.patience < 1) throw ParameterError("invalid NMF stop rule");

  NmfResult r;
  r.objective_trace.push_back(nmf_objective(v, w, h));
  for (int it = 0; it < stop.max_iterations; ++it) {
    switch (variant) {
      case NmfVariant::Multiplicative:
        step_multiplicative(v, w, h);
        break;
      case NmfVariant::LinModified:
        step_lin(v, w, h);
        break;
      case NmfVariant::Als:
        step_als(v, w, h);
        break;
    }
    const double f = nmf_objective(v, w, h);
    if (!std::isfinite(f)) throw NumericalError("NMF objective diverged");
    r.objective_trace.push_back(f);
    ++r.iterations;
    const std::size_t t = r.objective_trace.size() - 1;
    if (f == 0.0) {
      r.converged = true;
      break;
    }
    if (t >= static_cast<std::size_t>(stop.patience)) {
      const double prev = r.objective_trace[t - static_cast<std::size_t>(stop.patience)];
      if (std::abs(prev - f) <= stop.relative_tolerance * std::max(std::abs(prev), 1e-300)) {
        r.converged = true;
        break;
      }
    }
  }
  r.w = std::move(w);
  r.h = std::move(h);
  return r;
}

NmfResult nmf(const Matrix& v, int r, NmfVariant variant, const StopRule& stop, std::uint64_t seed) {
  check_input(v, r);
  Rng rng(seed);
  Matrix w(v.rows(), r), h(r, v.cols());
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = rng.uniform();
  for (Eigen::Index i = 0; i < h.size(); ++i) h(i) = rng.uniform();
  return nmf(v, std::move(w), std::move(h), variant, stop);
}

std::pair<Matrix, Matrix> nmf_init_from_partition(const Matrix& v, const Partition& p) {
  if (static_cast<Eigen::Index>(p.size()) != v.cols()) throw ParameterError("partition size does not match V");
  Matrix w = Matrix::Zero(v.rows(), p.k());
  Matrix h = Matrix::Constant(p.k(), v.cols(), 0.05);
  const auto sizes = p.sizes();
  for (std::size_t i = 0; i < p.size(); ++i) {
    w.col(p[i]) += v.col(static_cast<Eigen::Index>(i)) / sizes[static_cast<std::size_t>(p[i])];
    h(p[i], static_cast<Eigen::Index>(i)) = 1.0;
  }
  return {w, h};
}

Partition nmf_cluster(const Matrix& h, Warnings* warnings) {
  const int k = static_cast<int>(h.rows());
  const Eigen::Index n = h.cols();
  if (k > n) throw ParameterError("more metagenes than items");
  std::vector<int> labels(static_cast<std::size_t>(n));
  std::vector<int> count(static_cast<std::size_t>(k), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    int best = 0;
    for (int j = 1; j < k; ++j)
      if (h(j, i) > h(best, i)) best = j;
    labels[static_cast<std::size_t>(i)] = best;
    ++count[static_cast<std::size_t>(best)];
  }
  for (int j = 0; j < k; ++j) {
    if (count[static_cast<std::size_t>(j)] > 0) continue;
    Eigen::Index pick = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (count[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] < 2) continue;
      if (pick < 0 || h(j, i) > h(j, pick)) pick = i;
    }
    --count[static_cast<std::size_t>(labels[static_cast<std::size_t>(pick)])];
    labels[static_cast<std::size_t>(pick)] = j;
    ++count[static_cast<std::size_t>(j)];
    warn(warnings, "NMF cluster " + std::to_string(j) + " was empty, item " + std::to_string(pick) + " moved into it");
  }
  return Partition(std::move(labels), k);
}

Partition nmf_partition(const Matrix& x, int k, NmfVariant variant, const StopRule& stop, std::uint64_t seed,
                        bool shift, const Partition* init, Warnings* warnings) {
  Matrix v = x.transpose();
  const double lo = v.minCoeff();
  if (lo < 0.0) {
    if (!shift) throw DataError("NMF needs non-negative data (minimum " + std::to_string(lo) + ")");
    v.array() -= lo;
  }
  NmfResult r;
  if (init) {
    auto [w, h] = nmf_init_from_partition(v, *init);
    r = nmf(v, std::move(w), std::move(h), variant, stop);
  } else {
    r = nmf(v, k, variant, stop, seed);
  }
  return nmf_cluster(r.h, warnings);
}

}  // namespace kstar
