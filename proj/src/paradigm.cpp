#include "kstar/paradigm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

namespace kstar {

namespace {

bool uses_distances(const Wiring& w) {
  for (const auto& p : w.procedures) {
    const auto& s = p.clusterer.spec();
    if (std::holds_alternative<HierSpec>(s)) return true;
    if (const auto* k = std::get_if<KMeansSpec>(&s); k && k->from_hier) return true;
    if (const auto* n = std::get_if<NmfSpec>(&s); n && n->from_hier) return true;
  }
  return false;
}

LearningSet take(const LearningSet& d, const std::vector<int>& pos) {
  LearningSet out;
  out.data = select_rows(d.data, pos);
  out.rows.resize(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) out.rows[i] = d.rows[static_cast<std::size_t>(pos[i])];
  out.row_subset = d.row_subset;
  return out;
}

struct Engine {
  const ClusterInput& in;
  const Wiring& w;
  std::uint64_t seed;
  std::optional<Matrix> own;
  const Matrix* dist = nullptr;

  Engine(const ClusterInput& in, const Wiring& w, std::uint64_t seed) : in(in), w(w), seed(seed), dist(in.dist) {
    w.validate();
    if (!dist && uses_distances(w)) {
      own = euclidean_distances(in.x);
      dist = &*own;
    }
  }

  // Steps 1 and 2: generated datasets and their training/learning split.
  void prepare(IterationView& v, std::uint64_t it) const {
    const int n = static_cast<int>(in.x.rows());
    const std::size_t count = static_cast<std::size_t>(w.l + 1);
    std::vector<LearningSet> data(count);
    if (w.use_original) {
      data[0].data = in.x;
      data[0].rows.resize(static_cast<std::size_t>(n));
      std::iota(data[0].rows.begin(), data[0].rows.end(), 0);
    }
    for (int j = 1; j <= w.l; ++j) {
      DgpResult g = apply_dgp(in.x, w.dgp, seeds::dgp(it, j));
      data[static_cast<std::size_t>(j)] = {std::move(g.data), std::move(g.kept_rows), g.row_subset};
    }
    v.learning.assign(count, {});
    v.training.assign(count, {});
    for (int j = w.use_original ? 0 : 1; j <= w.l; ++j) {
      const LearningSet& d = data[static_cast<std::size_t>(j)];
      const Split sp = split_rows(static_cast<int>(d.data.rows()), w.alpha, seeds::split(it, j));
      v.learning[static_cast<std::size_t>(j)] = take(d, sp.learning);
      v.training[static_cast<std::size_t>(j)] = take(d, sp.training);
    }
  }

  std::vector<Partition> run_clusterer(const Clusterer& c, const LearningSet& d, int kmin, int kmax,
                                       std::uint64_t s) const {
    if (dist && d.row_subset) {
      const Matrix sd = submatrix(*dist, d.rows);
      return c.cluster_range({d.data, &sd}, kmin, kmax, s);
    }
    return c.cluster_range({d.data}, kmin, kmax, s);
  }

  // Steps 3 and 4 for k = kmin..kmax; outputs[k - kmin][edge].
  std::vector<std::vector<std::vector<int>>> procedures(const IterationView& v, int kmin, int kmax,
                                                        std::uint64_t it) const {
    const std::size_t K = static_cast<std::size_t>(kmax - kmin + 1);
    std::vector<std::vector<Classifier>> trained(K, std::vector<Classifier>(w.procedures.size()));
    for (std::size_t e = 0; e < w.train.size(); ++e) {
      const Edge& ed = w.train[e];
      const LearningSet& d = v.training[static_cast<std::size_t>(ed.dataset)];
      const auto& proc = w.procedures[static_cast<std::size_t>(ed.procedure)];
      if (static_cast<int>(d.data.rows()) < kmax)
        throw ParameterError("split leaves fewer than k = " + std::to_string(kmax) + " items on one side");
      const auto labels = run_clusterer(proc.clusterer, d, kmin, kmax, seeds::train(it, static_cast<int>(e)));
      for (std::size_t i = 0; i < K; ++i) trained[i][static_cast<std::size_t>(ed.procedure)] = Classifier(d.data, labels[i]);
    }
    std::vector<std::vector<std::vector<int>>> out(K, std::vector<std::vector<int>>(w.cluster.size()));
    for (std::size_t e = 0; e < w.cluster.size(); ++e) {
      const Edge& ed = w.cluster[e];
      const LearningSet& d = v.learning[static_cast<std::size_t>(ed.dataset)];
      const auto& proc = w.procedures[static_cast<std::size_t>(ed.procedure)];
      if (proc.classifier) {
        for (std::size_t i = 0; i < K; ++i) out[i][e] = trained[i][static_cast<std::size_t>(ed.procedure)].predict(d.data);
        continue;
      }
      if (static_cast<int>(d.data.rows()) < kmax && w.alpha > 0.0)
        throw ParameterError("split leaves fewer than k = " + std::to_string(kmax) + " items on one side");
      const std::uint64_t s = ed.dataset == 0 && w.alpha == 0.0 ? seeds::base_cluster(seed, static_cast<int>(e))
                                                                 : seeds::cluster(it, static_cast<int>(e));
      const auto parts = run_clusterer(proc.clusterer, d, kmin, kmax, s);
      for (std::size_t i = 0; i < K; ++i) out[i][e] = parts[i].labels();
    }
    return out;
  }
};

}  // namespace

void Wiring::validate() const {
  if (l < 0) throw ParameterError("wiring needs l >= 0");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ParameterError("wiring split fraction must lie in [0, 1)");
  if (!collect) throw ParameterError("wiring has no statistic collector");
  std::vector<char> has_training(procedures.size(), 0);
  auto check = [&](const Edge& e) {
    if (e.procedure < 0 || e.procedure >= static_cast<int>(procedures.size()))
      throw ParameterError("wiring edge references procedure " + std::to_string(e.procedure) + " but only " +
                           std::to_string(procedures.size()) + " are listed");
    if (e.dataset < (use_original ? 0 : 1) || e.dataset > l)
      throw ParameterError("wiring edge references missing dataset " + std::to_string(e.dataset));
  };
  for (const auto& e : train) {
    check(e);
    if (alpha == 0.0) throw ParameterError("training edges need alpha > 0");
    if (!procedures[static_cast<std::size_t>(e.procedure)].classifier)
      throw ParameterError("training edge targets a procedure that is not a classifier");
    has_training[static_cast<std::size_t>(e.procedure)] = 1;
  }
  for (const auto& e : cluster) {
    check(e);
    if (procedures[static_cast<std::size_t>(e.procedure)].classifier &&
        !has_training[static_cast<std::size_t>(e.procedure)])
      throw ParameterError("classifier is used before it is trained");
  }
}

std::vector<StatisticRecord> run_stability_statistic(const ClusterInput& in, const Wiring& w, int k, int H,
                                                     std::uint64_t seed) {
  if (H < 1) throw ParameterError("H must be >= 1");
  if (k < 1 || k > in.x.rows()) throw ParameterError("k out of range");
  const Engine eng(in, w, seed);
  std::vector<StatisticRecord> s;
  for (int h = 0; h < H; ++h) {
    const std::uint64_t it = seeds::iteration(seed, k, h);
    IterationView v;
    v.k = k;
    v.h = h;
    eng.prepare(v, it);
    v.outputs = std::move(eng.procedures(v, k, k, it)[0]);
    s.push_back(w.collect(v));
  }
  return s;
}

std::vector<std::vector<StatisticRecord>> run_fast_stability_statistic(const ClusterInput& in, const Wiring& w,
                                                                       int kmin, int kmax, int H, std::uint64_t seed) {
  if (H < 1) throw ParameterError("H must be >= 1");
  if (kmin < 1 || kmax < kmin || kmax > in.x.rows()) throw ParameterError("k range out of bounds");
  const Engine eng(in, w, seed);
  std::vector<std::vector<StatisticRecord>> s(static_cast<std::size_t>(kmax - kmin + 1));
  for (int h = 0; h < H; ++h) {
    const std::uint64_t it = seeds::fast_iteration(seed, h);
    IterationView v;
    v.h = h;
    eng.prepare(v, it);
    auto outs = eng.procedures(v, kmin, kmax, it);
    for (int k = kmin; k <= kmax; ++k) {
      v.k = k;
      v.outputs = std::move(outs[static_cast<std::size_t>(k - kmin)]);
      s[static_cast<std::size_t>(k - kmin)].push_back(w.collect(v));
    }
  }
  return s;
}

Wiring me_wiring(const Clusterer& c, const MeOptions& opt) {
  Wiring w;
  w.l = 2;
  w.dgp = DgpSpec::subsample(opt.beta);
  w.procedures = {{c}};
  w.cluster = {{1, 0}, {2, 0}};
  const ExternalIndex index = opt.index;
  w.collect = [index](const IterationView& v) {
    StatisticRecord r;
    r.values.push_back(me_similarity(v.learning[1].rows, v.outputs[0], v.learning[2].rows, v.outputs[1], index));
    return r;
  };
  return w;
}

Wiring consensus_wiring(const Clusterer& c, double p) {
  Wiring w;
  w.l = 1;
  w.dgp = DgpSpec::subsample(p);
  w.procedures = {{c}};
  w.cluster = {{1, 0}};
  w.collect = [](const IterationView& v) {
    StatisticRecord r;
    r.rows.push_back(v.learning[1].rows);
    r.labels.push_back(v.outputs[0]);
    return r;
  };
  return w;
}

Wiring clest_wiring(const Clusterer& c, double alpha, ExternalIndex index) {
  Wiring w;
  w.use_original = true;
  w.alpha = alpha;
  w.procedures = {{c, false}, {c, true}};
  w.train = {{0, 1}};
  w.cluster = {{0, 1}, {0, 0}};
  w.collect = [index](const IterationView& v) {
    StatisticRecord r;
    r.values.push_back(external_index(index, contingency(v.outputs[0], v.outputs[1])));
    return r;
  };
  return w;
}

Wiring levine_domany_wiring(const Clusterer& c, double beta) {
  Wiring w;
  w.l = 1;
  w.use_original = true;
  w.dgp = DgpSpec::subsample(beta);
  w.procedures = {{c}};
  w.cluster = {{0, 0}, {1, 0}};
  w.collect = [](const IterationView& v) {
    StatisticRecord r;
    const Partition base(v.outputs[0], v.k);
    r.values.push_back(levine_domany_agreement(base, v.learning[1].rows, v.outputs[1]));
    return r;
  };
  return w;
}

Wiring roth_wiring(const Clusterer& c, double alpha) {
  Wiring w = clest_wiring(c, alpha, ExternalIndex::AdjustedRand);
  w.collect = [](const IterationView& v) {
    StatisticRecord r;
    r.values.push_back(roth_instability(v.outputs[0], v.outputs[1], v.k));
    return r;
  };
  return w;
}

Wiring bagclust1_wiring(const Clusterer& c, int k) {
  Wiring w;
  w.l = 1;
  w.use_original = true;
  w.dgp = DgpSpec::bootstrap();
  w.procedures = {{c}};
  w.cluster = {{0, 0}, {1, 0}};
  w.collect = [k](const IterationView& v) {
    StatisticRecord r;
    const auto& rows = v.learning[1].rows;
    std::vector<int> ref(rows.size());
    for (std::size_t q = 0; q < rows.size(); ++q) ref[q] = v.outputs[0][static_cast<std::size_t>(rows[q])];
    int kb = 0;
    for (int l : v.outputs[1]) kb = std::max(kb, l + 1);
    const Matching m = max_overlap_matching(ref, k, v.outputs[1], kb);
    std::vector<int> relabeled(rows.size());
    for (std::size_t q = 0; q < rows.size(); ++q) relabeled[q] = m.map[static_cast<std::size_t>(v.outputs[1][q])];
    r.values.push_back(static_cast<double>(m.overlap));
    r.rows.push_back(rows);
    r.labels.push_back(std::move(relabeled));
    r.labels.push_back(v.outputs[0]);
    return r;
  };
  return w;
}

Wiring bagclust2_wiring(const Clusterer& c, double beta) { return consensus_wiring(c, beta); }

Wiring gap_wiring(const Clusterer& c) {
  Wiring w;
  w.use_original = true;
  w.procedures = {{c}};
  w.cluster = {{0, 0}};
  w.collect = [](const IterationView& v) {
    StatisticRecord r;
    const double x = wcss(v.learning[0].data, Partition(v.outputs[0], v.k));
    r.values.push_back(x > 0.0 ? std::log(x) : std::numeric_limits<double>::quiet_NaN());
    return r;
  };
  return w;
}

namespace {

std::vector<double> first_values(const std::vector<StatisticRecord>& s) {
  std::vector<double> v;
  for (const auto& r : s) v.push_back(r.values.at(0));
  return v;
}

void check_stability_range(int kmin, int kmax, int H, Eigen::Index n) {
  if (kmin < 2 || kmax < kmin) throw ParameterError("k range must satisfy 2 <= kmin <= kmax");
  if (H < 1) throw ParameterError("H must be >= 1");
  if (kmax > n) throw ParameterError("kmax exceeds the number of items");
}

}  // namespace

MeResult me_run_paradigm(const ClusterInput& in, const Clusterer& c, const MeOptions& opt, std::uint64_t seed) {
  check_stability_range(opt.kmin, opt.kmax, opt.H, in.x.rows());
  const Wiring w = me_wiring(c, opt);
  std::vector<std::vector<double>> values;
  for (int k = opt.kmin; k <= opt.kmax; ++k) values.push_back(first_values(run_stability_statistic(in, w, k, opt.H, seed)));
  return me_summarize(std::move(values), opt);
}

namespace {

ConsensusState accumulate(const std::vector<StatisticRecord>& s, int n, int k) {
  ConsensusState st(n, k);
  for (const auto& r : s) {
    st.add_sample(r.rows[0]);
    st.add_clustering(r.rows[0], r.labels[0]);
  }
  st.symmetrize();
  return st;
}

}  // namespace

ConsensusResult consensus_run_paradigm(const ClusterInput& in, const Clusterer& c, const ConsensusOptions& opt,
                                       std::uint64_t seed) {
  check_stability_range(opt.kmin, opt.kmax, opt.H, in.x.rows());
  const Wiring w = consensus_wiring(c, opt.p);
  const int n = static_cast<int>(in.x.rows());
  std::vector<ConsensusState> states;
  if (opt.shared_samples) {
    const auto all = run_fast_stability_statistic(in, w, opt.kmin, opt.kmax, opt.H, seed);
    for (int k = opt.kmin; k <= opt.kmax; ++k) states.push_back(accumulate(all[static_cast<std::size_t>(k - opt.kmin)], n, k));
  } else {
    for (int k = opt.kmin; k <= opt.kmax; ++k) states.push_back(accumulate(run_stability_statistic(in, w, k, opt.H, seed), n, k));
  }
  ConsensusResult r = consensus_summarize(std::move(states), opt.kmin, opt.tau, "consensus");
  r.prediction.parameters["H"] = opt.H;
  r.prediction.parameters["p"] = opt.p;
  return r;
}

ConsensusResult fc_run_paradigm(const ClusterInput& in, const Clusterer& c, const ConsensusOptions& opt,
                                std::uint64_t seed) {
  check_stability_range(opt.kmin, opt.kmax, opt.H, in.x.rows());
  const Wiring w = consensus_wiring(c, opt.p);
  const int n = static_cast<int>(in.x.rows());
  const auto all = run_fast_stability_statistic(in, w, opt.kmin, opt.kmax, opt.H, seed);
  std::vector<ConsensusState> states;
  for (int k = opt.kmin; k <= opt.kmax; ++k) states.push_back(accumulate(all[static_cast<std::size_t>(k - opt.kmin)], n, k));
  ConsensusResult r = consensus_summarize(std::move(states), opt.kmin, opt.tau, "fc");
  r.prediction.parameters["H"] = opt.H;
  r.prediction.parameters["p"] = opt.p;
  return r;
}

ClestResult clest_run_paradigm(const ClusterInput& in, const Clusterer& c, const ClestOptions& opt,
                               std::uint64_t seed) {
  check_stability_range(opt.kmin, opt.kmax, opt.H, in.x.rows());
  if (opt.B0 < 1) throw ParameterError("Clest needs B0 >= 1");
  const Wiring w = clest_wiring(c, opt.alpha, opt.index);
  auto statistic = [&](const ClusterInput& data, std::uint64_t s) {
    std::vector<std::vector<double>> values;
    for (int k = opt.kmin; k <= opt.kmax; ++k) values.push_back(first_values(run_stability_statistic(data, w, k, opt.H, s)));
    return values;
  };
  auto observed = statistic(in, seed);
  std::vector<std::vector<std::vector<double>>> reference;
  for (int b = 0; b < opt.B0; ++b) {
    const Matrix z = null_dataset(in.x, opt.null_model, seeds::reference(seed, b));
    reference.push_back(statistic({z}, seeds::reference_run(seed, b)));
  }
  return clest_summarize(std::move(observed), reference, opt);
}

LevineDomanyResult levine_domany_run_paradigm(const ClusterInput& in, const Clusterer& c,
                                              const LevineDomanyOptions& opt, std::uint64_t seed) {
  check_stability_range(opt.kmin, opt.kmax, opt.H, in.x.rows());
  const Wiring w = levine_domany_wiring(c, opt.beta);
  std::vector<std::vector<double>> values;
  for (int k = opt.kmin; k <= opt.kmax; ++k) values.push_back(first_values(run_stability_statistic(in, w, k, opt.H, seed)));
  auto r = levine_domany_summarize(std::move(values), opt.kmin);
  r.prediction.parameters["H"] = opt.H;
  r.prediction.parameters["beta"] = opt.beta;
  return r;
}

RothResult roth_run_paradigm(const ClusterInput& in, const Clusterer& c, const RothOptions& opt, std::uint64_t seed) {
  check_stability_range(opt.kmin, opt.kmax, opt.H, in.x.rows());
  const Wiring w = roth_wiring(c, opt.alpha);
  std::vector<std::vector<double>> values;
  for (int k = opt.kmin; k <= opt.kmax; ++k) values.push_back(first_values(run_stability_statistic(in, w, k, opt.H, seed)));
  auto r = roth_summarize(std::move(values), opt.kmin);
  r.prediction.parameters["H"] = opt.H;
  r.prediction.parameters["alpha"] = opt.alpha;
  return r;
}

BagClust1Result bagclust1_paradigm(const ClusterInput& in, const Clusterer& c, int k, int rounds, std::uint64_t seed) {
  if (rounds < 1) throw ParameterError("BagClust1 needs at least one round");
  const int n = static_cast<int>(in.x.rows());
  const auto s = run_stability_statistic(in, bagclust1_wiring(c, k), k, rounds, seed);
  BagClust1Result r;
  r.votes = IntMatrix::Zero(n, k);
  for (const auto& rec : s) {
    r.overlaps.push_back(static_cast<std::int64_t>(rec.values[0]));
    for (std::size_t q = 0; q < rec.rows[0].size(); ++q) ++r.votes(rec.rows[0][q], rec.labels[0][q]);
  }
  const auto& base = s.front().labels[1];
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (r.votes.row(i).sum() == 0) {
      labels[static_cast<std::size_t>(i)] = base[static_cast<std::size_t>(i)];
      continue;
    }
    Eigen::Index best;
    r.votes.row(i).maxCoeff(&best);
    labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  std::vector<char> used(static_cast<std::size_t>(k), 0);
  for (int l : labels) used[static_cast<std::size_t>(l)] = 1;
  const bool all = std::all_of(used.begin(), used.end(), [](char u) { return u; });
  r.partition = all ? Partition(std::move(labels), k) : Partition::compact(labels);
  return r;
}

BagClust2Result bagclust2_paradigm(const ClusterInput& in, const Clusterer& c, int k, int rounds, double beta,
                                   std::uint64_t seed, Warnings* warnings) {
  if (rounds < 1) throw ParameterError("BagClust2 needs at least one round");
  const auto s = run_stability_statistic(in, bagclust2_wiring(c, beta), k, rounds, seed);
  return bagclust2_finish(accumulate(s, static_cast<int>(in.x.rows()), k), k, warnings);
}

Prediction gap_predict_paradigm(const ClusterInput& in, const Clusterer& c, const GapOptions& opt, std::uint64_t seed) {
  if (opt.l < 1 || opt.steps < 1) throw ParameterError("Gap needs l >= 1 and steps >= 1");
  if (opt.kmax < 2 || opt.kmax > in.x.rows()) throw ParameterError("Gap needs 2 <= kmax <= n");
  const Wiring w = gap_wiring(c);
  auto curve = [&](const ClusterInput& data, std::uint64_t s) {
    std::vector<double> out;
    for (int k = 1; k <= opt.kmax; ++k) out.push_back(run_stability_statistic(data, w, k, 1, s)[0].values[0]);
    return out;
  };
  std::vector<GapStep> steps;
  for (int step = 0; step < opt.steps; ++step) {
    const std::uint64_t s = seeds::gap_step(seed, step);
    GapStep g;
    g.observed = curve(in, seeds::gap_observed(s));
    for (int b = 0; b < opt.l; ++b) {
      const Matrix z = null_dataset(in.x, opt.null_model, seeds::gap_reference(s, b));
      g.reference.push_back(curve({z}, seeds::gap_reference_run(s, b)));
    }
    steps.push_back(std::move(g));
  }
  return gap_summarize(steps, opt);
}

}  // namespace kstar
