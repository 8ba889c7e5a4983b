#include "kstar/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "kstar/rng.hpp"

namespace kstar {

Matrix euclidean_distances(const Matrix& x) {
  const Eigen::Index n = x.rows();
  Matrix d = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = (x.row(i) - x.row(j)).norm();
      d(i, j) = v;
      d(j, i) = v;
    }
  return d;
}

Matrix submatrix(const Matrix& dist, const std::vector<int>& rows) {
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  Matrix out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index cj = rows[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < n; ++i) out(i, j) = dist(rows[static_cast<std::size_t>(i)], cj);
  }
  return out;
}

Dendrogram build_dendrogram(const Matrix& dist, Linkage linkage, int stop_at) {
  const int n = static_cast<int>(dist.rows());
  if (dist.cols() != n) throw ParameterError("distance matrix must be square");
  if (n < 1) throw ParameterError("empty distance matrix");
  stop_at = std::clamp(stop_at, 1, n);

  // Working copy, only the upper triangle (i < j) is read.
  Matrix d = dist;
  std::vector<int> node(static_cast<std::size_t>(n));
  std::vector<int> size(static_cast<std::size_t>(n), 1);
  std::vector<char> active(static_cast<std::size_t>(n), 1);
  std::iota(node.begin(), node.end(), 0);

  // nn[i]: lowest j > i at the minimal distance from i.
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<int> nn(static_cast<std::size_t>(n), -1);
  std::vector<double> nd(static_cast<std::size_t>(n), inf);
  auto rescan = [&](int i) {
    int best = -1;
    double bd = inf;
    for (int j = i + 1; j < n; ++j)
      if (active[static_cast<std::size_t>(j)] && d(i, j) < bd) {
        bd = d(i, j);
        best = j;
      }
    nn[static_cast<std::size_t>(i)] = best;
    nd[static_cast<std::size_t>(i)] = bd;
  };
  for (int i = 0; i < n; ++i) rescan(i);

  Dendrogram out;
  out.n = n;
  out.merges.reserve(static_cast<std::size_t>(n - stop_at));
  for (int step = 0; step < n - stop_at; ++step) {
    int a = -1;
    double best = inf;
    for (int i = 0; i < n; ++i)
      if (active[static_cast<std::size_t>(i)] && nn[static_cast<std::size_t>(i)] >= 0 &&
          nd[static_cast<std::size_t>(i)] < best) {
        best = nd[static_cast<std::size_t>(i)];
        a = i;
      }
    if (a < 0) {
      // Only infinite distances left; merge the two lowest active slots.
      a = static_cast<int>(std::find(active.begin(), active.end(), 1) - active.begin());
      best = inf;
      nn[static_cast<std::size_t>(a)] =
          static_cast<int>(std::find(active.begin() + a + 1, active.end(), 1) - active.begin());
    }
    const int b = nn[static_cast<std::size_t>(a)];
    const int sa = size[static_cast<std::size_t>(a)], sb = size[static_cast<std::size_t>(b)];

    out.merges.push_back({std::min(node[static_cast<std::size_t>(a)], node[static_cast<std::size_t>(b)]),
                          std::max(node[static_cast<std::size_t>(a)], node[static_cast<std::size_t>(b)]), best,
                          sa + sb});

    active[static_cast<std::size_t>(b)] = 0;
    for (int c = 0; c < n; ++c) {
      if (!active[static_cast<std::size_t>(c)] || c == a) continue;
      const double dac = c < a ? d(c, a) : d(a, c);
      const double dbc = c < b ? d(c, b) : d(b, c);
      double v;
      switch (linkage) {
        case Linkage::Single:
          v = std::min(dac, dbc);
          break;
        case Linkage::Complete:
          v = std::max(dac, dbc);
          break;
        default:
          v = (sa * dac + sb * dbc) / (sa + sb);
          break;
      }
      if (c < a)
        d(c, a) = v;
      else
        d(a, c) = v;
    }
    node[static_cast<std::size_t>(a)] = n + step;
    size[static_cast<std::size_t>(a)] = sa + sb;

    rescan(a);
    for (int i = 0; i < a; ++i) {
      if (!active[static_cast<std::size_t>(i)]) continue;
      const int t = nn[static_cast<std::size_t>(i)];
      if (t == a || t == b) {
        rescan(i);
      } else {
        const double v = d(i, a);
        if (v < nd[static_cast<std::size_t>(i)] || (v == nd[static_cast<std::size_t>(i)] && a < t)) {
          nn[static_cast<std::size_t>(i)] = a;
          nd[static_cast<std::size_t>(i)] = v;
        }
      }
    }
    for (int i = a + 1; i < b; ++i)
      if (active[static_cast<std::size_t>(i)] && nn[static_cast<std::size_t>(i)] == b) rescan(i);
  }
  return out;
}

Partition cut_dendrogram(const Dendrogram& d, int k) {
  const int n = d.n;
  const int built = static_cast<int>(d.merges.size());
  if (k < 1 || k > n) throw ParameterError("cut needs 1 <= k <= n, got k = " + std::to_string(k));
  if (n - k > built) throw ParameterError("dendrogram was not built down to " + std::to_string(k) + " clusters");
  std::vector<int> parent(static_cast<std::size_t>(2 * n), 0);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (int t = 0; t < n - k; ++t) {
    const Merge& m = d.merges[static_cast<std::size_t>(t)];
    parent[static_cast<std::size_t>(find(m.left))] = n + t;
    parent[static_cast<std::size_t>(find(m.right))] = n + t;
  }
  std::vector<int> roots(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) roots[static_cast<std::size_t>(i)] = find(i);
  return Partition::compact(roots);
}

Partition hierarchical(const Matrix& dist, Linkage linkage, int k) {
  if (k < 1 || k > dist.rows()) throw ParameterError("hierarchical needs 1 <= k <= n, got k = " + std::to_string(k));
  return cut_dendrogram(build_dendrogram(dist, linkage, k), k);
}

void write_dendrogram(std::ostream& out, const Dendrogram& d) {
  out << "left,right,height,size\n";
  out.precision(17);
  for (const auto& m : d.merges) out << m.left << ',' << m.right << ',' << m.height << ',' << m.size << '\n';
}

Matrix centroids(const Matrix& x, const Partition& p) {
  Matrix c = Matrix::Zero(p.k(), x.cols());
  std::vector<int> count(static_cast<std::size_t>(p.k()), 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    c.row(p[i]) += x.row(static_cast<Eigen::Index>(i));
    ++count[static_cast<std::size_t>(p[i])];
  }
  for (int j = 0; j < p.k(); ++j) c.row(j) /= count[static_cast<std::size_t>(j)];
  return c;
}

double wcss(const Matrix& x, const Partition& p) {
  if (static_cast<Eigen::Index>(p.size()) != x.rows()) throw ParameterError("partition size does not match data");
  const Matrix c = centroids(x, p);
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += (x.row(static_cast<Eigen::Index>(i)) - c.row(p[i])).squaredNorm();
  return s;
}

namespace {

// Nearest-centroid labels, ties to the lowest index.
std::vector<int> assign(const Matrix& x, const Matrix& c) {
  std::vector<int> a(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    int best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < c.rows(); ++j) {
      const double v = (x.row(i) - c.row(j)).squaredNorm();
      if (v < bd) {
        bd = v;
        best = static_cast<int>(j);
      }
    }
    a[static_cast<std::size_t>(i)] = best;
  }
  return a;
}

// Refills every empty cluster with the point farthest from its centroid
// among clusters that keep at least one member.
void repair_empty(const Matrix& x, const Matrix& c, std::vector<int>& a, int k) {
  std::vector<int> count(static_cast<std::size_t>(k), 0);
  for (int l : a) ++count[static_cast<std::size_t>(l)];
  for (int j = 0; j < k; ++j) {
    if (count[static_cast<std::size_t>(j)] > 0) continue;
    int far = -1;
    double fd = -1.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (count[static_cast<std::size_t>(a[i])] < 2) continue;
      const double v = (x.row(static_cast<Eigen::Index>(i)) - c.row(a[i])).squaredNorm();
      if (v > fd) {
        fd = v;
        far = static_cast<int>(i);
      }
    }
    --count[static_cast<std::size_t>(a[static_cast<std::size_t>(far)])];
    a[static_cast<std::size_t>(far)] = j;
    ++count[static_cast<std::size_t>(j)];
  }
}

KMeansResult lloyd(const Matrix& x, std::vector<int> a, int k, int niter) {
  KMeansResult r;
  Partition p(a, k);
  r.objective_trace.push_back(wcss(x, p));
  Matrix c = centroids(x, p);
  for (int step = 0; step < niter; ++step) {
    std::vector<int> next = assign(x, c);
    repair_empty(x, c, next, k);
    ++r.iterations;
    if (next == a) {
      r.converged = true;
      break;
    }
    a = std::move(next);
    p = Partition(a, k);
    r.objective_trace.push_back(wcss(x, p));
    c = centroids(x, p);
  }
  r.partition = std::move(p);
  r.centroids = std::move(c);
  return r;
}

void check_k(const Matrix& x, int k) {
  if (k < 1 || k > x.rows())
    throw ParameterError("k-means needs 1 <= k <= n, got k = " + std::to_string(k) + ", n = " +
                         std::to_string(x.rows()));
}

}  // namespace

KMeansResult kmeans(const Matrix& x, int k, int niter, std::uint64_t seed) {
  check_k(x, k);
  if (niter < 1) throw ParameterError("k-means needs niter >= 1");
  Rng rng(seed);
  const auto rows = rng.sample_without_replacement(static_cast<int>(x.rows()), k);
  const Matrix c = select_rows(x, rows);
  std::vector<int> a = assign(x, c);
  repair_empty(x, c, a, k);
  return lloyd(x, std::move(a), k, niter);
}

KMeansResult kmeans(const Matrix& x, const Partition& init, int niter) {
  check_k(x, init.k());
  if (static_cast<Eigen::Index>(init.size()) != x.rows()) throw ParameterError("initial partition size mismatch");
  if (niter < 1) throw ParameterError("k-means needs niter >= 1");
  return lloyd(x, init.labels(), init.k(), niter);
}

Partition merge_min_centroid(const Matrix& x, const Partition& p) {
  if (p.k() < 2) throw ParameterError("merge needs at least 2 clusters");
  const Matrix c = centroids(x, p);
  int ba = 0, bb = 1;
  double bd = std::numeric_limits<double>::infinity();
  for (int a = 0; a < p.k(); ++a)
    for (int b = a + 1; b < p.k(); ++b) {
      const double v = (c.row(a) - c.row(b)).squaredNorm();
      if (v < bd) {
        bd = v;
        ba = a;
        bb = b;
      }
    }
  std::vector<int> labels = p.labels();
  for (int& l : labels) {
    if (l == bb)
      l = ba;
    else if (l > bb)
      --l;
  }
  return Partition(std::move(labels), p.k() - 1);
}

}  // namespace kstar
