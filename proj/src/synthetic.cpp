#include "kstar/synthetic.hpp"

#include "kstar/rng.hpp"

namespace kstar {

LabeledData gen_gaussian3(std::uint64_t seed) {
  constexpr int n = 60, m = 600, per = 20, markers = 200;
  Rng rng(seed);
  Matrix x(n, m);
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) {
    const int c = i / per;
    labels[static_cast<std::size_t>(i)] = c;
    for (int j = 0; j < m; ++j) x(i, j) = rng.normal(j / markers == c ? 3.0 : 1.0, 1.0);
  }
  return {DataMatrix(std::move(x)), Partition(std::move(labels), 3)};
}

LabeledData gen_gaussian5(double lambda, std::uint64_t seed) {
  if (!(lambda > 0.0)) throw ParameterError("gaussian5 needs lambda > 0");
  constexpr int per = 50, classes = 5;
  const double cx[classes] = {0.0, lambda, 0.0, lambda, lambda / 2};
  const double cy[classes] = {0.0, 0.0, lambda, lambda, lambda / 2};
  Rng rng(seed);
  Matrix x(per * classes, 2);
  std::vector<int> labels(per * classes);
  for (int i = 0; i < per * classes; ++i) {
    const int c = i / per;
    labels[static_cast<std::size_t>(i)] = c;
    x(i, 0) = rng.normal(cx[c], 1.0);
    x(i, 1) = rng.normal(cy[c], 1.0);
  }
  return {DataMatrix(std::move(x)), Partition(std::move(labels), classes)};
}

LabeledData gen_simulated6(std::uint64_t seed) {
  constexpr int classes = 6, markers = 50, noise = 300;
  const int sizes[classes] = {8, 12, 10, 15, 5, 10};
  int n = 0;
  for (int s : sizes) n += s;
  const int m = classes * markers + noise;
  Rng rng(seed);
  Matrix x(n, m);
  std::vector<int> labels;
  for (int c = 0; c < classes; ++c)
    for (int s = 0; s < sizes[c]; ++s) labels.push_back(c);
  for (int i = 0; i < n; ++i) {
    const int c = labels[static_cast<std::size_t>(i)];
    for (int j = 0; j < m; ++j) {
      const int owner = j < classes * markers ? j / markers : -1;
      if (owner == c)
        x(i, j) = rng.normal(5.0 - 0.5 * c, 0.4 + 0.1 * c);
      else
        x(i, j) = rng.normal();
    }
  }
  return {DataMatrix(std::move(x)), Partition(std::move(labels), classes)};
}

}  // namespace kstar
