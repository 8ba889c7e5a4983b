#include "kstar/matching.hpp"

#include <algorithm>
#include <limits>

namespace kstar {

std::vector<int> hungarian_max(const CountMatrix& weight) {
  const int n = static_cast<int>(weight.rows());
  if (weight.cols() != n) throw ParameterError("assignment matrix must be square");
  using I = std::int64_t;
  const I inf = std::numeric_limits<I>::max() / 4;
  // Minimum-cost form on -weight, 1-based potentials.
  std::vector<I> u(static_cast<std::size_t>(n + 1), 0), v(static_cast<std::size_t>(n + 1), 0);
  std::vector<int> p(static_cast<std::size_t>(n + 1), 0), way(static_cast<std::size_t>(n + 1), 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<I> minv(static_cast<std::size_t>(n + 1), inf);
    std::vector<char> used(static_cast<std::size_t>(n + 1), 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      I delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const I cur = -weight(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> out(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) out[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  return out;
}

Matching max_overlap_matching(std::span<const int> a, int ka, std::span<const int> b, int kb) {
  if (a.size() != b.size()) throw ParameterError("labelings differ in length");
  const int K = std::max(ka, kb);
  CountMatrix w = CountMatrix::Zero(K, K);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0 || a[i] >= ka || b[i] < 0 || b[i] >= kb) throw ParameterError("label out of range in matching");
    ++w(a[i], b[i]);
  }
  const auto rows = hungarian_max(w);
  Matching m;
  m.map.assign(static_cast<std::size_t>(kb), -1);
  for (int r = 0; r < K; ++r) {
    const int c = rows[static_cast<std::size_t>(r)];
    if (c < kb) m.map[static_cast<std::size_t>(c)] = r;
    m.overlap += w(r, c);
  }
  return m;
}

Matching max_overlap_matching(const Partition& a, const Partition& b) {
  return max_overlap_matching(a.labels(), a.k(), b.labels(), b.k());
}

}  // namespace kstar
