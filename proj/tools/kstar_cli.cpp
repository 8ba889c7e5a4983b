#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "kstar/bench.hpp"
#include "kstar/clustering.hpp"
#include "kstar/io.hpp"
#include "kstar/synthetic.hpp"

using namespace kstar;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MatrixArgs {
  std::string path;
  bool header = true;
  bool row_ids = true;
  int label_column = -1;

  void add(CLI::App* app) {
    app->add_option("--matrix", path, "Data matrix (CSV or TSV), one row per item")->required();
    app->add_flag("--header,!--no-header", header, "First line holds column ids");
    app->add_flag("--row-ids,!--no-row-ids", row_ids, "First column holds row ids");
    app->add_option("--label-column", label_column, "0-based column holding class labels (removed from the data)");
  }

  LoadedMatrix load() const {
    LoadOptions o;
    o.has_header = header;
    o.has_row_ids = row_ids;
    if (label_column >= 0) o.label_column = label_column;
    return load_matrix(path, o);
  }
};

void add_settings(CLI::App* app, MeasureSettings& s, std::string& null_model, std::string& index) {
  app->add_option("--kmin", s.kmin, "Smallest k")->capture_default_str();
  app->add_option("--kmax", s.kmax, "Largest k")->capture_default_str();
  app->add_option("--H", s.H, "Consensus/FC rounds")->capture_default_str();
  app->add_option("--p", s.p, "Consensus/FC subsample fraction")->capture_default_str();
  app->add_option("--tau", s.tau, "Consensus stabilization threshold")->capture_default_str();
  app->add_option("--gap-steps", s.gap_steps, "Gap repetitions")->capture_default_str();
  app->add_option("--gap-l", s.gap_l, "Gap reference datasets per repetition")->capture_default_str();
  app->add_option("--null-model", null_model, "permutational|poisson_box|poisson_pc|unimodal")->capture_default_str();
  app->add_option("--clest-H", s.clest_H, "Clest rounds")->capture_default_str();
  app->add_option("--clest-B0", s.clest_B0, "Clest reference datasets")->capture_default_str();
  app->add_option("--clest-alpha", s.clest_alpha, "Clest training fraction")->capture_default_str();
  app->add_option("--me-H", s.me_H, "ME rounds")->capture_default_str();
  app->add_option("--beta", s.beta, "ME/Levine-Domany subsample fraction")->capture_default_str();
  app->add_option("--ld-H", s.ld_H, "Levine-Domany rounds")->capture_default_str();
  app->add_option("--roth-H", s.roth_H, "Roth rounds")->capture_default_str();
  app->add_option("--roth-alpha", s.roth_alpha, "Roth training fraction")->capture_default_str();
  app->add_option("--index", index, "ari|rand|fm|f")->capture_default_str();
}

json curve_json(const CurveSeries& c) {
  json j;
  j["k"] = c.k;
  j["value"] = c.value;
  if (!c.dispersion.empty()) j["dispersion"] = c.dispersion;
  return j;
}

json prediction_json(const Prediction& p) {
  json j;
  j["measure"] = p.measure;
  j["rule"] = p.rule;
  j["k_star"] = p.k_star;
  j["low_confidence"] = p.low_confidence;
  j["parameters"] = p.parameters;
  j["warnings"] = p.warnings;
  j["evidence"] = curve_json(p.evidence);
  return j;
}

// Measures that read one curve and therefore accept the WCSS-R path.
const std::set<std::string> kCurveMeasures = {"wcss", "kl", "g-gap", "fom", "g-fom", "diff-fom"};

void check_combination(const std::string& measure, const Clusterer& c) {
  const auto& names = measure_names();
  if (std::find(names.begin(), names.end(), measure) == names.end()) {
    std::string valid;
    for (const auto& n : names) valid += (valid.empty() ? "" : ", ") + n;
    throw UsageError("unknown measure '" + measure + "'; valid measures: " + valid);
  }
  if (std::holds_alternative<WcssRefreshSpec>(c.spec()) && !kCurveMeasures.count(measure))
    throw UsageError("clusterer '" + c.name() + "' defines a merge path and only combines with wcss, kl, g-gap, "
                     "fom, g-fom, diff-fom; use hier-*, kmeans-* or nmf-* with '" + measure + "'");
}

int run_generate(const std::string& name, std::uint64_t seed, double lambda, std::string out, std::string labels) {
  LabeledData d;
  if (name == "gaussian3")
    d = gen_gaussian3(seed);
  else if (name == "gaussian5")
    d = gen_gaussian5(lambda, seed);
  else if (name == "simulated6")
    d = gen_simulated6(seed);
  else
    throw UsageError("unknown dataset '" + name + "'; valid: gaussian3, gaussian5, simulated6");
  if (out.empty()) out = name + ".csv";
  if (labels.empty()) labels = name + ".labels";
  write_matrix(out, d.data);
  write_partition(labels, d.labels);
  return 0;
}

int run_cluster(const MatrixArgs& m, const std::string& clusterer, int k, std::uint64_t seed, const std::string& out,
                const std::string& dendrogram) {
  const Clusterer c = Clusterer::parse(clusterer);
  const LoadedMatrix lm = m.load();
  Warnings w;
  const Partition p = c.cluster({lm.data.values}, k, seed, &w);
  if (out.empty())
    write_partition(std::cout, p);
  else
    write_partition(out, p);
  if (!dendrogram.empty()) {
    const auto* h = std::get_if<HierSpec>(&c.spec());
    if (!h) throw UsageError("--dendrogram needs a hierarchical clusterer");
    std::ofstream f(dendrogram);
    if (!f) throw DataError("cannot write '" + dendrogram + "'");
    write_dendrogram(f, build_dendrogram(euclidean_distances(lm.data.values), h->linkage));
  }
  for (const auto& s : w) std::cerr << "warning: " << s << '\n';
  return 0;
}

int run_indices(const std::string& a_path, const std::string& b_path) {
  const Partition a = read_partition(a_path), b = read_partition(b_path);
  const ContingencyTable t = contingency(a, b);
  json j;
  j["n"] = t.n;
  Warnings w;
  for (auto e : {ExternalIndex::Rand, ExternalIndex::AdjustedRand, ExternalIndex::FowlkesMallows, ExternalIndex::FIndex}) {
    try {
      j[to_string(e)] = external_index(e, t, &w);
    } catch (const NumericalError& err) {
      j[to_string(e)] = nullptr;
      w.push_back(to_string(e) + ": " + err.what());
    }
  }
  j["warnings"] = w;
  std::cout << j.dump(2) << '\n';
  return 0;
}

int run_validate(const MatrixArgs& m, const std::string& labels_path, const std::string& measure,
                 const std::string& clusterer, const MeasureSettings& s, std::uint64_t seed, const std::string& out,
                 bool external) {
  const Clusterer c = Clusterer::parse(clusterer);
  check_combination(measure, c);
  std::optional<Partition> gold;
  if (!labels_path.empty()) {
    if (!std::filesystem::exists(labels_path))
      throw UsageError("labels file '" + labels_path + "' does not exist");
    gold = read_partition(labels_path);
  }
  if (external && !gold && m.label_column < 0)
    throw UsageError("--external needs gold labels (--labels or --label-column)");
  LoadedMatrix lm = m.load();
  if (!gold && lm.labels) gold = *lm.labels;
  const Matrix& x = lm.data.values;
  if (gold && gold->size() != static_cast<std::size_t>(x.rows()))
    throw DataError("labels cover " + std::to_string(gold->size()) + " items, matrix has " +
                    std::to_string(x.rows()));

  const MeasureOutcome o = evaluate_measure(measure, x, c, s, seed);
  json j = prediction_json(o.prediction);
  j["clusterer"] = c.name();
  j["seed"] = seed;
  j["settings"] = settings_record(s);
  j["n"] = x.rows();
  j["m"] = x.cols();
  if (gold) j["gold_k"] = gold->k();
  std::optional<Partition> part = o.partition;
  if (external) {
    if (!part) part = c.cluster({x}, o.prediction.k_star, seed);
    const ContingencyTable t = contingency(*gold, *part);
    j["external"] = {{"index", to_string(s.index)}, {"value", external_index(s.index, t)}};
  }
  if (!out.empty()) {
    std::filesystem::create_directories(out);
    for (const auto& [name, curve] : o.curves) {
      std::ofstream f(std::filesystem::path(out) / (name + ".csv"));
      if (!f) throw DataError("cannot write into '" + out + "'");
      curve.write_csv(f);
    }
    if (part) write_partition((std::filesystem::path(out) / "partition.txt").string(), *part);
    std::ofstream(std::filesystem::path(out) / "prediction.json") << j.dump(2) << '\n';
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int run_bench(const std::string& config, const std::string& out) {
  SuiteConfig cfg;
  try {
    cfg = parse_suite_file(config);
  } catch (const Error& e) {
    // A broken config is a usage problem, not a data problem.
    throw UsageError(config + ": " + e.what());
  }
  const auto rows = run_suite(cfg);
  if (out.empty()) {
    write_report(std::cout, rows);
  } else {
    std::ofstream f(out);
    if (!f) throw DataError("cannot write '" + out + "'");
    write_report(f, rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Estimate the number of clusters in a dataset"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "Write a synthetic dataset and its labels");
  std::string gen_name, gen_out, gen_labels;
  std::uint64_t gen_seed = 1;
  double gen_lambda = 2.0;
  gen->add_option("dataset", gen_name, "gaussian3|gaussian5|simulated6")->required();
  gen->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
  gen->add_option("--lambda", gen_lambda, "Square side for gaussian5")->capture_default_str();
  gen->add_option("--out", gen_out, "Matrix CSV path (default <dataset>.csv)");
  gen->add_option("--labels", gen_labels, "Labels path (default <dataset>.labels)");

  auto* clu = app.add_subcommand("cluster", "Partition a matrix into k clusters");
  MatrixArgs clu_m;
  clu_m.add(clu);
  std::string clu_name = "hier-a", clu_out, clu_dendro;
  int clu_k = 2;
  std::uint64_t clu_seed = 1;
  clu->add_option("--clusterer", clu_name, "Clustering algorithm")->capture_default_str();
  clu->add_option("--k", clu_k, "Number of clusters")->required();
  clu->add_option("--seed", clu_seed, "Random seed")->capture_default_str();
  clu->add_option("--out", clu_out, "Labels file (default stdout)");
  clu->add_option("--dendrogram", clu_dendro, "Also write the full merge list (hierarchical only)");

  auto* ind = app.add_subcommand("indices", "External indices between two labelings");
  std::string ind_a, ind_b;
  ind->add_option("reference", ind_a, "Reference labels (rows of the table)")->required();
  ind->add_option("clustering", ind_b, "Clustering labels")->required();

  auto* val = app.add_subcommand("validate", "Run one measure and report its k*");
  MatrixArgs val_m;
  val_m.add(val);
  MeasureSettings val_s;
  std::string val_null = to_string(val_s.null_model), val_index = to_string(val_s.index);
  std::string val_labels, val_measure, val_clusterer = "hier-a", val_out;
  std::uint64_t val_seed = 1;
  bool val_external = false;
  val->add_option("--labels", val_labels, "Gold-standard labels, one per line");
  val->add_option("--measure", val_measure, "Measure name")->required();
  val->add_option("--clusterer", val_clusterer, "Clustering algorithm")->capture_default_str();
  val->add_option("--seed", val_seed, "Random seed")->capture_default_str();
  val->add_option("--out", val_out, "Directory for curve CSVs, partition and prediction.json");
  val->add_flag("--external", val_external, "Score the partition at k* against the gold labels");
  add_settings(val, val_s, val_null, val_index);

  auto* ben = app.add_subcommand("bench", "Run a suite config and write the report CSV");
  std::string ben_config, ben_out;
  ben->add_option("config", ben_config, "Suite config file")->required();
  ben->add_option("--out", ben_out, "Report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) return run_generate(gen_name, gen_seed, gen_lambda, gen_out, gen_labels);
    if (*clu) return run_cluster(clu_m, clu_name, clu_k, clu_seed, clu_out, clu_dendro);
    if (*ind) return run_indices(ind_a, ind_b);
    if (*val) {
      val_s.null_model = parse_null_model(val_null);
      val_s.index = parse_external_index(val_index);
      return run_validate(val_m, val_labels, val_measure, val_clusterer, val_s, val_seed, val_out, val_external);
    }
    if (*ben) return run_bench(ben_config, ben_out);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 3;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 4;
  }
  return 2;
}
