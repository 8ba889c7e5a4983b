#include "kstar/bench.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include "kstar/synthetic.hpp"

namespace kstar {

const std::vector<std::string>& measure_names() {
  static const std::vector<std::string> names = {"wcss", "kl",        "gap", "g-gap", "fom",   "g-fom", "diff-fom",
                                                 "consensus", "fc", "me",  "clest", "ld",    "roth"};
  return names;
}

namespace {

const WcssRefreshSpec* refresh_spec(const Clusterer& c) { return std::get_if<WcssRefreshSpec>(&c.spec()); }

int fom_kmax(const Matrix& x, int kmax) { return std::min<int>(kmax, static_cast<int>(x.rows()) - 1); }

}  // namespace

MeasureOutcome evaluate_measure(const std::string& measure, const Matrix& x, const Clusterer& c,
                                const MeasureSettings& s, std::uint64_t seed) {
  const int n = static_cast<int>(x.rows());
  const int m = static_cast<int>(x.cols());
  const int kmax = std::min(s.kmax, n);
  MeasureOutcome out;
  auto wcss_of = [&]() {
    if (const auto* r = refresh_spec(c)) return wcss_r_curve(x, r->refresh, kmax, r->niter, seed);
    return wcss_curve({x}, c, kmax, seed);
  };
  auto fom_of = [&]() {
    const int kf = fom_kmax(x, kmax);
    if (const auto* r = refresh_spec(c)) return fom_r_curve(x, r->refresh, kf, r->niter, seed);
    return fom_curve(x, c, kf, seed);
  };
  if (measure == "wcss") {
    out.curves["wcss"] = wcss_of();
    out.prediction = knee_detect(out.curves["wcss"]);
    out.prediction.measure = "wcss";
  } else if (measure == "kl") {
    out.curves["wcss"] = wcss_of();
    out.prediction = kl_predict(out.curves["wcss"], m);
  } else if (measure == "gap") {
    GapOptions g;
    g.null_model = s.null_model;
    g.l = s.gap_l;
    g.steps = s.gap_steps;
    g.kmax = kmax;
    out.prediction = gap_predict({x}, c, g, seed);
    out.curves["gap"] = out.prediction.evidence;
  } else if (measure == "g-gap") {
    out.curves["wcss"] = wcss_of();
    out.prediction = g_gap_predict(log_curve(out.curves["wcss"]));
  } else if (measure == "fom") {
    out.curves["fom"] = fom_of();
    out.prediction = knee_detect(out.curves["fom"]);
    out.prediction.measure = "fom";
  } else if (measure == "g-fom") {
    out.curves["fom"] = fom_of();
    out.prediction = g_fom_predict(out.curves["fom"]);
  } else if (measure == "diff-fom") {
    out.curves["fom"] = fom_of();
    out.prediction = diff_fom_predict(out.curves["fom"], m);
  } else if (measure == "consensus" || measure == "fc") {
    ConsensusOptions o;
    o.kmin = s.kmin;
    o.kmax = kmax;
    o.H = s.H;
    o.p = s.p;
    o.tau = s.tau;
    ConsensusResult r = measure == "fc" ? fc_run({x}, c, o, seed) : consensus_run({x}, c, o, seed);
    out.curves["area"] = r.area;
    out.curves["delta"] = r.delta;
    out.curves["delta_prime"] = r.delta_prime;
    out.prediction = r.prediction;
    const int ks = r.prediction.k_star;
    if (ks >= o.kmin && ks <= o.kmax) {
      const Matrix d = consensus_to_distance(r.states[static_cast<std::size_t>(ks - o.kmin)], &out.prediction.warnings);
      out.partition = hierarchical(d, Linkage::Average, ks);
    }
  } else if (measure == "me") {
    MeOptions o;
    o.kmin = s.kmin;
    o.kmax = kmax;
    o.H = s.me_H;
    o.beta = s.beta;
    o.index = s.index;
    MeResult r = me_run({x}, c, o, seed);
    out.curves["stable_fraction"] = r.stable_fraction;
    out.prediction = r.prediction;
  } else if (measure == "clest") {
    ClestOptions o;
    o.kmin = s.kmin;
    o.kmax = kmax;
    o.H = s.clest_H;
    o.B0 = s.clest_B0;
    o.alpha = s.clest_alpha;
    o.index = s.index;
    o.null_model = s.null_model;
    ClestResult r = clest_run({x}, c, o, seed);
    out.curves["observed"] = r.observed;
    out.curves["reference"] = r.reference;
    out.curves["p_value"] = r.p_value;
    out.curves["d"] = r.d;
    out.prediction = r.prediction;
  } else if (measure == "ld") {
    LevineDomanyOptions o;
    o.kmin = s.kmin;
    o.kmax = kmax;
    o.H = s.ld_H;
    o.beta = s.beta;
    LevineDomanyResult r = levine_domany_run({x}, c, o, seed);
    out.curves["agreement"] = r.figure;
    out.prediction = r.prediction;
  } else if (measure == "roth") {
    RothOptions o;
    o.kmin = s.kmin;
    o.kmax = kmax;
    o.H = s.roth_H;
    o.alpha = s.roth_alpha;
    RothResult r = roth_run({x}, c, o, seed);
    out.curves["instability"] = r.instability;
    out.prediction = r.prediction;
  } else {
    throw ParameterError("unknown measure '" + measure + "'");
  }
  out.prediction.parameters["kmax"] = kmax;
  return out;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
  std::istringstream ss(v);
  T out;
  if (!(ss >> out) || !(ss >> std::ws).eof()) throw ParameterError("invalid value '" + v + "' for '" + key + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParameterError("invalid boolean '" + v + "' for '" + key + "'");
}

}  // namespace

void apply_setting(MeasureSettings& s, const std::string& key, const std::string& v) {
  if (key == "kmin") s.kmin = parse_number<int>(key, v);
  else if (key == "kmax") s.kmax = parse_number<int>(key, v);
  else if (key == "H") s.H = parse_number<int>(key, v);
  else if (key == "p") s.p = parse_number<double>(key, v);
  else if (key == "tau") s.tau = parse_number<double>(key, v);
  else if (key == "gap_steps") s.gap_steps = parse_number<int>(key, v);
  else if (key == "gap_l") s.gap_l = parse_number<int>(key, v);
  else if (key == "null_model") s.null_model = parse_null_model(v);
  else if (key == "clest_H") s.clest_H = parse_number<int>(key, v);
  else if (key == "clest_B0") s.clest_B0 = parse_number<int>(key, v);
  else if (key == "clest_alpha") s.clest_alpha = parse_number<double>(key, v);
  else if (key == "me_H") s.me_H = parse_number<int>(key, v);
  else if (key == "beta") s.beta = parse_number<double>(key, v);
  else if (key == "ld_H") s.ld_H = parse_number<int>(key, v);
  else if (key == "roth_H") s.roth_H = parse_number<int>(key, v);
  else if (key == "roth_alpha") s.roth_alpha = parse_number<double>(key, v);
  else if (key == "index") s.index = parse_external_index(v);
  else throw ParameterError("unknown setting '" + key + "'");
}

std::string settings_record(const MeasureSettings& s) {
  std::ostringstream o;
  o.precision(17);
  o << "kmin=" << s.kmin << ";kmax=" << s.kmax << ";H=" << s.H << ";p=" << s.p << ";tau=" << s.tau
    << ";gap_steps=" << s.gap_steps << ";gap_l=" << s.gap_l << ";null_model=" << to_string(s.null_model)
    << ";clest_H=" << s.clest_H << ";clest_B0=" << s.clest_B0 << ";clest_alpha=" << s.clest_alpha
    << ";me_H=" << s.me_H << ";beta=" << s.beta << ";ld_H=" << s.ld_H << ";roth_H=" << s.roth_H
    << ";roth_alpha=" << s.roth_alpha << ";index=" << to_string(s.index);
  return o.str();
}

SuiteConfig parse_suite(std::istream& in) {
  SuiteConfig cfg;
  std::string line;
  long ln = 0;
  enum class Section { None, Suite, Dataset, Measure, Clusterer } sec = Section::None;
  auto fail = [&](const std::string& msg) { throw ParseError("line " + std::to_string(ln) + ": " + msg, ln, 0); };
  while (std::getline(in, line)) {
    ++ln;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      std::istringstream ss(line.substr(1, line.size() - 2));
      std::string kind, name;
      ss >> kind >> name;
      if (kind == "suite") {
        sec = Section::Suite;
      } else if (name.empty()) {
        fail("section '" + kind + "' needs a name");
      } else if (kind == "dataset") {
        sec = Section::Dataset;
        cfg.datasets.push_back({});
        cfg.datasets.back().name = name;
      } else if (kind == "measure") {
        sec = Section::Measure;
        cfg.measures.push_back({name, name, {}});
      } else if (kind == "clusterer") {
        sec = Section::Clusterer;
        cfg.clusterers.emplace_back(name, name);
      } else {
        fail("unknown section '" + kind + "'");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    try {
      switch (sec) {
        case Section::None:
          fail("setting outside a section");
          break;
        case Section::Suite:
          if (key == "seed")
            cfg.seed = parse_number<std::uint64_t>(key, val);
          else
            apply_setting(cfg.settings, key, val);
          break;
        case Section::Dataset: {
          DatasetSpec& d = cfg.datasets.back();
          if (key == "source") d.source = val;
          else if (key == "lambda") d.lambda = parse_number<double>(key, val);
          else if (key == "seed") d.seed = parse_number<std::uint64_t>(key, val);
          else if (key == "path") d.path = val;
          else if (key == "header") d.load.has_header = parse_bool(key, val);
          else if (key == "row_ids") d.load.has_row_ids = parse_bool(key, val);
          else if (key == "label_column") d.load.label_column = parse_number<int>(key, val);
          else if (key == "labels") d.labels_path = val;
          else fail("unknown dataset key '" + key + "'");
          break;
        }
        case Section::Measure:
          if (key == "type")
            cfg.measures.back().type = val;
          else
            cfg.measures.back().params[key] = val;
          break;
        case Section::Clusterer:
          if (key == "name")
            cfg.clusterers.back().second = val;
          else
            fail("unknown clusterer key '" + key + "'");
          break;
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      fail(e.what());
    }
  }
  for (const auto& m : cfg.measures) {
    if (std::find(measure_names().begin(), measure_names().end(), m.type) == measure_names().end())
      throw ParseError("unknown measure type '" + m.type + "' in section '" + m.name + "'");
    MeasureSettings probe = cfg.settings;
    for (const auto& [k, v] : m.params) apply_setting(probe, k, v);
  }
  for (const auto& [label, name] : cfg.clusterers) Clusterer::parse(name);
  return cfg;
}

SuiteConfig parse_suite_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open '" + path + "'");
  return parse_suite(f);
}

LabeledData load_dataset(const DatasetSpec& d) {
  if (d.source == "gaussian3") return gen_gaussian3(d.seed);
  if (d.source == "gaussian5") return gen_gaussian5(d.lambda, d.seed);
  if (d.source == "simulated6") return gen_simulated6(d.seed);
  if (d.source == "file") {
    LoadedMatrix lm = load_matrix(d.path, d.load);
    LabeledData out{std::move(lm.data), {}};
    if (d.labels_path) {
      out.labels = read_partition(*d.labels_path);
    } else if (lm.labels) {
      out.labels = std::move(*lm.labels);
    }
    return out;
  }
  throw ParameterError("unknown dataset source '" + d.source + "'");
}

std::vector<BenchRow> run_suite(const SuiteConfig& cfg) {
  std::vector<BenchRow> rows;
  for (const auto& ds : cfg.datasets) {
    std::optional<LabeledData> data;
    std::string load_error;
    try {
      data = load_dataset(ds);
    } catch (const std::exception& e) {
      load_error = e.what();
    }
    for (const auto& ms : cfg.measures) {
      for (const auto& [label, name] : cfg.clusterers) {
        BenchRow row;
        row.dataset = ds.name;
        row.measure = ms.name;
        row.clusterer = label;
        row.seed = cfg.seed;
        if (!data) {
          row.status = "error";
          row.message = load_error;
          rows.push_back(row);
          continue;
        }
        row.gold_k = data->labels.k();
        try {
          MeasureSettings s = cfg.settings;
          for (const auto& [k, v] : ms.params) apply_setting(s, k, v);
          row.parameters = "measure=" + ms.type + ";clusterer=" + name + ";" + settings_record(s);
          const Clusterer c = Clusterer::parse(name);
          const auto t0 = std::chrono::steady_clock::now();
          const MeasureOutcome o = evaluate_measure(ms.type, data->data.values, c, s, cfg.seed);
          const auto t1 = std::chrono::steady_clock::now();
          row.milliseconds = std::chrono::duration<double, std::milli>(t1 - t0).count();
          row.k_star = o.prediction.k_star;
          row.status = "ok";
        } catch (const std::exception& e) {
          row.status = "error";
          row.message = e.what();
        }
        rows.push_back(row);
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return std::tie(a.dataset, a.measure, a.clusterer) < std::tie(b.dataset, b.measure, b.clusterer);
  });
  return rows;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

void write_report(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "dataset,measure,clusterer,k_star,gold_k,milliseconds,seed,parameters,status,message\n";
  for (const auto& r : rows) {
    out << csv_field(r.dataset) << ',' << csv_field(r.measure) << ',' << csv_field(r.clusterer) << ',';
    if (r.status == "ok") out << r.k_star;
    out << ',';
    if (r.gold_k > 0) out << r.gold_k;
    out << ',';
    if (r.status == "ok") out << r.milliseconds;
    out << ',' << r.seed << ',' << csv_field(r.parameters) << ',' << r.status << ',' << csv_field(r.message) << '\n';
  }
}

}  // namespace kstar
