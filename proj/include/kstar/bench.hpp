#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kstar/io.hpp"
#include "kstar/measures.hpp"
#include "kstar/stability.hpp"

namespace kstar {

// Parameters of every measure, with the command-line defaults.
struct MeasureSettings {
  int kmin = 2;
  int kmax = 30;
  int H = 250;           // Consensus / FC rounds
  double p = 0.8;        // Consensus / FC subsample fraction
  double tau = 0.05;
  int gap_steps = 20;
  int gap_l = 10;
  NullModel null_model = NullModel::PoissonBox;
  int clest_H = 20;
  int clest_B0 = 20;
  double clest_alpha = 0.34;
  int me_H = 100;
  double beta = 0.8;     // ME / Levine-Domany subsample fraction
  int ld_H = 100;
  int roth_H = 20;
  double roth_alpha = 0.5;
  ExternalIndex index = ExternalIndex::AdjustedRand;
};

struct MeasureOutcome {
  Prediction prediction;
  std::map<std::string, CurveSeries> curves;
  // Partition at k* for the measures that produce one (consensus, fc).
  std::optional<Partition> partition;
};

// Measures: wcss (knee), kl, gap, g-gap, fom (knee), g-fom, diff-fom,
// consensus, fc, me, clest, ld, roth.
const std::vector<std::string>& measure_names();
MeasureOutcome evaluate_measure(const std::string& measure, const Matrix& x, const Clusterer& c,
                                const MeasureSettings& s, std::uint64_t seed);

// Data set of a suite: a generator or a file.
struct DatasetSpec {
  std::string name;
  std::string source;  // gaussian3 | gaussian5 | simulated6 | file
  double lambda = 2.0;
  std::uint64_t seed = 1;
  std::string path;
  LoadOptions load;
  std::optional<std::string> labels_path;
};

struct MeasureSpec {
  std::string name;
  std::string type;
  std::map<std::string, std::string> params;
};

struct SuiteConfig {
  std::uint64_t seed = 1;
  MeasureSettings settings;
  std::vector<DatasetSpec> datasets;
  std::vector<MeasureSpec> measures;
  std::vector<std::pair<std::string, std::string>> clusterers;  // (label, clusterer name)
};

// INI-style text: "[suite]", "[dataset NAME]", "[measure NAME]",
// "[clusterer NAME]" sections of "key = value" lines; '#' starts a comment.
SuiteConfig parse_suite(std::istream& in);
SuiteConfig parse_suite_file(const std::string& path);

// Overrides settings from "key = value" pairs (same keys as in [suite]).
void apply_setting(MeasureSettings& s, const std::string& key, const std::string& value);
// Every setting as "key=value" joined by ';', readable by apply_setting.
std::string settings_record(const MeasureSettings& s);

LabeledData load_dataset(const DatasetSpec& d);

struct BenchRow {
  std::string dataset;
  std::string measure;
  std::string clusterer;
  int k_star = 0;
  int gold_k = 0;  // 0 when unknown
  double milliseconds = 0.0;
  std::uint64_t seed = 0;
  std::string parameters;  // settings_record plus the clusterer
  std::string status;      // ok | error
  std::string message;
};

// One row per (dataset, measure, clusterer) cell, sorted by those names.
// Failing cells become error rows; the run continues.
std::vector<BenchRow> run_suite(const SuiteConfig& cfg);
void write_report(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace kstar
