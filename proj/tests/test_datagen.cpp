#include <set>

#include "doctest.h"
#include "kstar/datagen.hpp"
#include "support.hpp"

using namespace kstar;
using namespace testsupport;

TEST_CASE("permutational null keeps every column's values") {
  const Matrix x = uniform_matrix(15, 4, 1);
  const Matrix z = null_dataset(x, NullModel::Permutational, 3);
  for (int j = 0; j < 4; ++j) {
    std::vector<double> a(x.col(j).data(), x.col(j).data() + 15), b(z.col(j).data(), z.col(j).data() + 15);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
  CHECK(z != x);
}

TEST_CASE("box null stays inside the feature ranges") {
  const Matrix x = uniform_matrix(50, 3, 2, -4.0, 7.0);
  const Matrix z = null_dataset(x, NullModel::PoissonBox, 5);
  for (int j = 0; j < 3; ++j) {
    CHECK(z.col(j).minCoeff() >= x.col(j).minCoeff());
    CHECK(z.col(j).maxCoeff() <= x.col(j).maxCoeff());
  }
}

TEST_CASE("principal-component null stays in the rotated box") {
  // Points along a diagonal line: the PC box is thin across it.
  Rng r(4);
  Matrix x(80, 2);
  for (int i = 0; i < 80; ++i) {
    const double t = r.uniform(-5, 5), e = r.uniform(-0.1, 0.1);
    x(i, 0) = t + e;
    x(i, 1) = t - e;
  }
  const Matrix z = null_dataset(x, NullModel::PoissonPc, 9);
  for (int i = 0; i < 80; ++i) CHECK(std::abs(z(i, 0) - z(i, 1)) < 0.5);
}

TEST_CASE("unimodal null matches column means and spreads") {
  const LabeledData d = clouds(2, 200, 6.0, 3);
  const Matrix& x = d.data.values;
  const Matrix z = null_dataset(x, NullModel::Unimodal, 1);
  for (int j = 0; j < 2; ++j) CHECK(std::abs(z.col(j).mean() - x.col(j).mean()) < 0.4);
  CHECK_THROWS_AS(parse_null_model("uniform"), ParameterError);
  for (auto m : {NullModel::Permutational, NullModel::PoissonBox, NullModel::PoissonPc, NullModel::Unimodal})
    CHECK(parse_null_model(to_string(m)) == m);
}

TEST_CASE("null datasets are reproducible per seed") {
  const Matrix x = uniform_matrix(20, 3, 8);
  for (auto m : {NullModel::Permutational, NullModel::PoissonBox, NullModel::PoissonPc, NullModel::Unimodal}) {
    CHECK(null_dataset(x, m, 4) == null_dataset(x, m, 4));
    CHECK(null_dataset(x, m, 4) != null_dataset(x, m, 5));
  }
}

TEST_CASE("subsampling sizes and uniqueness") {
  for (int n : {5, 10, 29, 100})
    for (double beta : {0.1, 0.5, 0.8, 1.0}) {
      const auto rows = subsample_rows(n, beta, 11);
      CHECK(rows.size() == static_cast<std::size_t>(std::max(1, static_cast<int>(std::ceil(beta * n - 1e-9)))));
      CHECK(std::is_sorted(rows.begin(), rows.end()));
      CHECK(std::set<int>(rows.begin(), rows.end()).size() == rows.size());
      CHECK(rows.back() < n);
    }
  CHECK(subsample_rows(10, 0.8, 3).size() == 8);
  CHECK_THROWS_AS(subsample_rows(10, 0.0, 1), ParameterError);
  CHECK_THROWS_AS(subsample_rows(10, 1.5, 1), ParameterError);
}

TEST_CASE("stratified subsampling keeps every stratum") {
  const Partition strata({0, 0, 0, 0, 1, 1, 2, 2, 2, 2, 2, 2}, 3);
  const auto rows = stratified_subsample_rows(strata, 0.5, 7);
  std::vector<int> per(3, 0);
  for (int r : rows) ++per[static_cast<std::size_t>(strata[static_cast<std::size_t>(r)])];
  CHECK(per == std::vector<int>{2, 1, 3});
}

TEST_CASE("bootstrap draws n rows with replacement") {
  const auto rows = bootstrap_rows(50, 3);
  CHECK(rows.size() == 50);
  CHECK(std::is_sorted(rows.begin(), rows.end()));
  CHECK(std::set<int>(rows.begin(), rows.end()).size() < 50);
}

TEST_CASE("noise injection uses the median row variance") {
  Rng r(1);
  Matrix x(41, 400);
  for (int i = 0; i < 41; ++i)
    for (int j = 0; j < 400; ++j) x(i, j) = r.normal(0.0, 1.0 + i * 0.05);  // median sd 2
  const Matrix z = noise_inject(x, 2);
  const Matrix e = z - x;
  const double var = e.array().square().mean();
  // Median row variance is near 4 (sd 1 + 20 * 0.05).
  CHECK(var == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("random projection") {
  CHECK(jl_dimension(100, 0.5) == 222);
  CHECK_THROWS_AS(jl_dimension(100, 1.0), ParameterError);
  const Matrix x = uniform_matrix(10, 2000, 3);
  const Projection p = random_project(x, 0.5, 4);
  CHECK_FALSE(p.identity);
  CHECK(p.data.cols() == jl_dimension(10, 0.5));
  // Distances are roughly preserved.
  const Matrix d0 = euclidean_distances(x), d1 = euclidean_distances(p.data);
  for (int i = 0; i < 10; ++i)
    for (int j = i + 1; j < 10; ++j) CHECK(std::abs(d1(i, j) / d0(i, j) - 1.0) < 0.5);
  Warnings w;
  const Projection id = random_project(uniform_matrix(10, 5, 1), 0.5, 4, &w);
  CHECK(id.identity);
  CHECK(w.size() == 1);
}

TEST_CASE("apply_dgp dispatch") {
  const Matrix x = uniform_matrix(20, 3, 5);
  const DgpResult s = apply_dgp(x, DgpSpec::subsample(0.5), 1);
  CHECK(s.row_subset);
  CHECK(s.data.rows() == 10);
  for (std::size_t i = 0; i < s.kept_rows.size(); ++i)
    CHECK(s.data.row(static_cast<Eigen::Index>(i)) == x.row(s.kept_rows[i]));
  const DgpResult b = apply_dgp(x, DgpSpec::bootstrap(), 1);
  CHECK(b.data.rows() == 20);
  CHECK(b.row_subset);
  const DgpResult n = apply_dgp(x, DgpSpec::null(NullModel::PoissonBox), 1);
  CHECK_FALSE(n.row_subset);
  CHECK(n.data == null_dataset(x, NullModel::PoissonBox, 1));
  CHECK(apply_dgp(x, DgpSpec::noise(), 1).data == noise_inject(x, 1));
  DgpSpec st = DgpSpec::of(DgpSpec::Kind::StratifiedSubsample);
  CHECK_THROWS_AS(apply_dgp(x, st, 1), ParameterError);
}
