#include "kstar/clusterer.hpp"

#include <algorithm>

#include "kstar/rng.hpp"

namespace kstar {

namespace {

Linkage parse_linkage(char c) {
  switch (c) {
    case 'a':
      return Linkage::Average;
    case 'c':
      return Linkage::Complete;
    case 's':
      return Linkage::Single;
    default:
      throw ParameterError(std::string("unknown linkage '") + c + "'");
  }
}

char linkage_char(Linkage l) {
  switch (l) {
    case Linkage::Average:
      return 'a';
    case Linkage::Complete:
      return 'c';
    case Linkage::Single:
      return 's';
  }
  return '?';
}

struct Visitor {
  const ClusterInput& in;
  int k;
  std::uint64_t seed;
  Warnings* warnings;

  Matrix distances() const { return in.dist ? *in.dist : euclidean_distances(in.x); }

  Partition operator()(const HierSpec& s) const { return hierarchical(distances(), s.linkage, k); }

  Partition operator()(const KMeansSpec& s) const {
    if (s.from_hier) return kmeans(in.x, hierarchical(distances(), s.linkage, k), s.niter).partition;
    return kmeans(in.x, k, s.niter, derive_seed(seed, k)).partition;
  }

  Partition operator()(const NmfSpec& s) const {
    if (s.from_hier) {
      const Partition init = hierarchical(distances(), s.linkage, k);
      return nmf_partition(in.x, k, s.variant, s.stop, derive_seed(seed, k), s.shift, &init, warnings);
    }
    return nmf_partition(in.x, k, s.variant, s.stop, derive_seed(seed, k), s.shift, nullptr, warnings);
  }

  Partition operator()(const WcssRefreshSpec& s) const { return kmeans(in.x, k, s.niter, derive_seed(seed, k)).partition; }
};

}  // namespace

Clusterer Clusterer::parse(const std::string& name) {
  auto suffix = [&](const std::string& prefix, char& c) {
    if (name.size() == prefix.size() + 1 && name.compare(0, prefix.size(), prefix) == 0) {
      c = name.back();
      return true;
    }
    return false;
  };
  char c;
  if (suffix("hier-", c)) return Clusterer(HierSpec{parse_linkage(c)});
  if (name == "kmeans-r") return Clusterer(KMeansSpec{});
  if (suffix("kmeans-", c)) return Clusterer(KMeansSpec{true, parse_linkage(c)});
  for (auto [prefix, variant] : {std::pair{"nmf-lin-", NmfVariant::LinModified},
                                  std::pair{"nmf-als-", NmfVariant::Als},
                                  std::pair{"nmf-", NmfVariant::Multiplicative}}) {
    if (suffix(prefix, c)) {
      NmfSpec s;
      s.variant = variant;
      if (c != 'r') {
        s.from_hier = true;
        s.linkage = parse_linkage(c);
      }
      return Clusterer(s);
    }
  }
  if (name.rfind("wcss-r", 0) == 0 && name.size() > 6) {
    const std::string digits = name.substr(6);
    if (std::all_of(digits.begin(), digits.end(), ::isdigit)) return Clusterer(WcssRefreshSpec{std::stoi(digits)});
  }
  throw ParameterError("unknown clusterer '" + name + "'");
}

std::string Clusterer::name() const {
  struct {
    std::string operator()(const HierSpec& s) const { return std::string("hier-") + linkage_char(s.linkage); }
    std::string operator()(const KMeansSpec& s) const {
      return s.from_hier ? std::string("kmeans-") + linkage_char(s.linkage) : "kmeans-r";
    }
    std::string operator()(const NmfSpec& s) const {
      std::string v = s.variant == NmfVariant::LinModified ? "nmf-lin-" : s.variant == NmfVariant::Als ? "nmf-als-" : "nmf-";
      return v + (s.from_hier ? linkage_char(s.linkage) : 'r');
    }
    std::string operator()(const WcssRefreshSpec& s) const { return "wcss-r" + std::to_string(s.refresh); }
  } v;
  return std::visit(v, spec_);
}

Partition Clusterer::cluster(const ClusterInput& in, int k, std::uint64_t seed, Warnings* warnings) const {
  const Eigen::Index n = in.x.rows();
  if (k < 1 || k > n)
    throw ParameterError("cannot form " + std::to_string(k) + " clusters from " + std::to_string(n) + " items");
  if (k == 1) return Partition::trivial(static_cast<std::size_t>(n));
  return std::visit(Visitor{in, k, seed, warnings}, spec_);
}

std::vector<Partition> Clusterer::cluster_range(const ClusterInput& in, int kmin, int kmax, std::uint64_t seed,
                                                 Warnings* warnings) const {
  const Eigen::Index n = in.x.rows();
  if (kmin < 1 || kmax < kmin || kmax > n)
    throw ParameterError("invalid cluster range [" + std::to_string(kmin) + ", " + std::to_string(kmax) + "] for " +
                         std::to_string(n) + " items");
  std::vector<Partition> out;
  if (const auto* h = std::get_if<HierSpec>(&spec_)) {
    const Dendrogram d = build_dendrogram(in.dist ? *in.dist : euclidean_distances(in.x), h->linkage, kmin);
    for (int k = kmin; k <= kmax; ++k) out.push_back(cut_dendrogram(d, k));
    return out;
  }
  if (const auto* km = std::get_if<KMeansSpec>(&spec_); km && km->from_hier) {
    const Dendrogram d = build_dendrogram(in.dist ? *in.dist : euclidean_distances(in.x), km->linkage, kmin);
    for (int k = kmin; k <= kmax; ++k)
      out.push_back(k == 1 ? Partition::trivial(static_cast<std::size_t>(n))
                           : kmeans(in.x, cut_dendrogram(d, k), km->niter).partition);
    return out;
  }
  if (const auto* w = std::get_if<WcssRefreshSpec>(&spec_)) {
    auto path = wcss_r_path(in.x, w->refresh, kmax, w->niter, seed);
    return std::vector<Partition>(path.begin() + (kmin - 1), path.end());
  }
  for (int k = kmin; k <= kmax; ++k) out.push_back(cluster(in, k, seed, warnings));
  return out;
}

std::vector<Partition> wcss_r_path(const Matrix& x, int refresh, int kmax, int niter, std::uint64_t seed) {
  if (refresh < 0) throw ParameterError("refresh period must be >= 0");
  if (kmax < 1 || kmax > x.rows()) throw ParameterError("invalid kmax for WCSS-R path");
  std::vector<Partition> path(static_cast<std::size_t>(kmax));
  Partition p = kmax == 1 ? Partition::trivial(static_cast<std::size_t>(x.rows()))
                          : kmeans(x, kmax, niter, derive_seed(seed, kmax)).partition;
  path[static_cast<std::size_t>(kmax - 1)] = p;
  for (int k = kmax - 1; k >= 1; --k) {
    p = merge_min_centroid(x, p);
    if (refresh > 0 && k % refresh == 0 && k > 1) p = kmeans(x, p, niter).partition;
    path[static_cast<std::size_t>(k - 1)] = p;
  }
  return path;
}

}  // namespace kstar
