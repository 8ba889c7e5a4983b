#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "kstar/bench.hpp"
#include "kstar/synthetic.hpp"
#include "support.hpp"

using namespace kstar;
using namespace testsupport;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / ("kstar_bench_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(const std::string& args) {
  const fs::path out = scratch() / "stdout.txt", err = scratch() / "stderr.txt";
  const std::string cmd = std::string(KSTAR_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

SuiteConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_suite(in);
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::string write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST_CASE("suite config parsing") {
  const SuiteConfig cfg = parse(R"(# demo
[suite]
seed = 9
kmax = 12   # trailing comment
H = 40

[dataset g3]
source = gaussian3
seed = 2

[dataset g5]
source = gaussian5
lambda = 3

[measure cons]
type = consensus
p = 0.7

[measure gap]

[clusterer avg]
name = hier-a
)");
  CHECK(cfg.seed == 9);
  CHECK(cfg.settings.kmax == 12);
  CHECK(cfg.settings.H == 40);
  REQUIRE(cfg.datasets.size() == 2);
  CHECK(cfg.datasets[0].source == "gaussian3");
  CHECK(cfg.datasets[0].seed == 2);
  CHECK(cfg.datasets[1].lambda == 3.0);
  REQUIRE(cfg.measures.size() == 2);
  CHECK(cfg.measures[0].type == "consensus");
  CHECK(cfg.measures[0].params.at("p") == "0.7");
  CHECK(cfg.measures[1].type == "gap");
  REQUIRE(cfg.clusterers.size() == 1);
  CHECK(cfg.clusterers[0] == std::pair<std::string, std::string>{"avg", "hier-a"});
}

TEST_CASE("malformed configs report the line") {
  auto line_of = [](const std::string& text) -> long {
    try {
      parse(text);
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).rfind("line " + std::to_string(e.row) + ":", 0) == 0);
      return e.row;
    }
    return -1;
  };
  CHECK(line_of("[suite]\nkmax = 5\nbogus line\n") == 3);
  CHECK(line_of("kmax = 5\n") == 1);
  CHECK(line_of("[suite]\n\n[suite\n") == 3);
  CHECK(line_of("[suite]\nkmax = five\n") == 2);
  CHECK(line_of("[suite]\nwhat = 1\n") == 2);
  CHECK(line_of("[dataset d]\ncolour = red\n") == 2);
  CHECK(line_of("[table x]\n") == 1);
  CHECK(line_of("[measure]\n") == 1);
  CHECK_THROWS_AS(parse("[measure m]\ntype = magic\n"), ParseError);
  CHECK_THROWS_AS(parse("[measure m]\ntype = gap\nsteps = 3\n"), ParameterError);
  CHECK_THROWS_AS(parse("[clusterer c]\nname = hier-q\n"), ParameterError);
}

TEST_CASE("settings record round-trips through apply_setting") {
  MeasureSettings s;
  s.kmax = 7;
  s.p = 0.65;
  s.null_model = NullModel::Unimodal;
  s.index = ExternalIndex::FIndex;
  const std::string rec = settings_record(s);
  MeasureSettings back;
  std::istringstream in(rec);
  std::string item;
  while (std::getline(in, item, ';')) {
    const auto eq = item.find('=');
    apply_setting(back, item.substr(0, eq), item.substr(eq + 1));
  }
  CHECK(settings_record(back) == rec);
  CHECK(back.kmax == 7);
  CHECK(back.null_model == NullModel::Unimodal);
}

TEST_CASE("empty suite writes the header only") {
  const auto rows = run_suite(parse(""));
  CHECK(rows.empty());
  std::ostringstream os;
  write_report(os, rows);
  CHECK(os.str() == "dataset,measure,clusterer,k_star,gold_k,milliseconds,seed,parameters,status,message\n");
}

TEST_CASE("failing cells become error rows and the suite completes") {
  const std::string path = (scratch() / "two.csv").string();
  write_matrix(path, clouds(2, 15, 10.0, 1).data);
  const SuiteConfig cfg = parse("[suite]\nkmax = 6\n[dataset zeta]\nsource = file\npath = " + path +
                                "\nheader = true\nrow_ids = true\n"
                                "[dataset alpha]\nsource = file\npath = /nonexistent.csv\n"
                                "[measure w]\ntype = wcss\n"
                                "[clusterer nmf]\nname = nmf-r\n[clusterer avg]\nname = hier-a\n");
  const auto rows = run_suite(cfg);
  REQUIRE(rows.size() == 4);
  // Sorted by dataset, then measure, then clusterer.
  CHECK(rows[0].dataset == "alpha");
  CHECK(rows[0].status == "error");
  CHECK(rows[2].dataset == "zeta");
  CHECK(rows[2].clusterer == "avg");
  CHECK(rows[2].status == "ok");
  CHECK(rows[2].k_star == 2);
  CHECK(rows[2].milliseconds >= 0.0);
  CHECK(rows[2].seed == 1);
  CHECK(rows[2].parameters.find("clusterer=hier-a;kmin=2;kmax=6;") != std::string::npos);
  CHECK(rows[3].clusterer == "nmf");
  CHECK(rows[3].status == "error");
  CHECK(rows[3].message.find("negative") != std::string::npos);
  std::ostringstream os;
  write_report(os, rows);
  CHECK(count_lines(os.str()) == 5);
}

TEST_CASE("fc is faster than consensus for average linkage") {
  const SuiteConfig cfg = parse(
      "[suite]\nkmax = 10\nH = 40\n"
      "[dataset g3]\nsource = gaussian3\n[dataset g5]\nsource = gaussian5\n[dataset s6]\nsource = simulated6\n"
      "[measure consensus]\n[measure fc]\n[clusterer hier-a]\n");
  const auto rows = run_suite(cfg);
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 0; i < 6; i += 2) {
    REQUIRE(rows[i].measure == "consensus");
    REQUIRE(rows[i + 1].measure == "fc");
    CHECK(rows[i].status == "ok");
    CHECK(rows[i + 1].milliseconds < rows[i].milliseconds);
  }
  CHECK(rows[0].gold_k == 3);
  CHECK(rows[0].k_star == 3);
  CHECK(rows[1].k_star == 3);
}

TEST_CASE("evaluate_measure dispatch") {
  const LabeledData d = clouds(2, 15, 10.0, 4);
  MeasureSettings s;
  s.kmax = 6;
  s.H = 10;
  const Clusterer c = Clusterer::parse("hier-a");
  for (const auto& m : measure_names()) {
    if (m == "gap" || m == "clest") continue;
    const MeasureOutcome o = evaluate_measure(m, d.data.values, c, s, 3);
    CHECK_MESSAGE(!o.curves.empty(), m);
    CHECK_MESSAGE(o.prediction.k_star >= 1, m);
  }
  const MeasureOutcome cons = evaluate_measure("consensus", d.data.values, c, s, 3);
  REQUIRE(cons.partition);
  CHECK(cons.partition->k() == cons.prediction.k_star);
  CHECK_THROWS_AS(evaluate_measure("magic", d.data.values, c, s, 3), ParameterError);
}

TEST_CASE("cli generate") {
  const std::string m1 = (scratch() / "g3a.csv").string(), l1 = (scratch() / "g3a.labels").string();
  const std::string m2 = (scratch() / "g3b.csv").string(), l2 = (scratch() / "g3b.labels").string();
  CHECK(cli("generate gaussian3 --seed 7 --out " + m1 + " --labels " + l1).code == 0);
  CHECK(cli("generate gaussian3 --seed 7 --out " + m2 + " --labels " + l2).code == 0);
  CHECK(slurp(m1) == slurp(m2));
  CHECK(slurp(l1) == slurp(l2));
  LoadOptions o;
  o.has_header = true;
  o.has_row_ids = true;
  const LoadedMatrix lm = load_matrix(m1, o);
  CHECK(lm.data.values.rows() == 60);
  CHECK(lm.data.values.cols() == 600);
  CHECK(count_lines(slurp(l1)) == 60);
  CHECK(cli("generate gaussian5 --lambda 0 --out " + m2).code == 2);
  CHECK(cli("generate gaussian7").code == 2);
  CHECK(cli("generate").code == 2);
  CHECK(cli("").code == 2);
}

TEST_CASE("cli validate") {
  const std::string m = (scratch() / "g3.csv").string(), l = (scratch() / "g3.labels").string();
  REQUIRE(cli("generate gaussian3 --seed 3 --out " + m + " --labels " + l).code == 0);
  const fs::path dir = scratch() / "curves";
  const Run r = cli("validate --matrix " + m + " --labels " + l +
                    " --measure consensus --clusterer hier-a --H 40 --kmax 10 --external --out " + dir.string());
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["k_star"] == 3);
  CHECK(j["gold_k"] == 3);
  CHECK(j["external"]["value"] == 1.0);
  CHECK(fs::exists(dir / "area.csv"));
  CHECK(fs::exists(dir / "partition.txt"));
  CHECK(nlohmann::json::parse(slurp(dir / "prediction.json")) == j);
  // Rerun from the same parameters: identical report.
  const Run again = cli("validate --matrix " + m + " --labels " + l +
                        " --measure consensus --clusterer hier-a --H 40 --kmax 10 --external");
  CHECK(again.out == r.out);

  const std::string two = (scratch() / "two.csv").string();
  write_matrix(two, clouds(2, 20, 12.0, 5).data);
  const Run w = cli("validate --matrix " + two + " --measure wcss --kmax 8");
  REQUIRE(w.code == 0);
  CHECK(nlohmann::json::parse(w.out)["k_star"] == 2);

  CHECK(cli("validate --matrix " + two + " --measure wcss --external").code == 2);
  CHECK(cli("validate --matrix " + two + " --measure wcss --labels " + (scratch() / "none").string()).code == 2);
  const Run combo = cli("validate --matrix " + two + " --measure consensus --clusterer wcss-r1");
  CHECK(combo.code == 2);
  CHECK(combo.err.find("wcss, kl, g-gap") != std::string::npos);
  CHECK(cli("validate --matrix " + two + " --measure magic").code == 2);
  CHECK(cli("validate --matrix " + two + " --measure wcss --clusterer nmf-r").code == 3);
  CHECK(cli("validate --matrix " + write_file("bad.csv", "id,a\nr0,1\nr1,x\n") + " --measure wcss").code == 3);
  CHECK(cli("validate --matrix " + two + " --measure wcss --kmax 2").code == 2);
}

TEST_CASE("cli cluster and indices") {
  const std::string two = (scratch() / "two_c.csv").string();
  const LabeledData d = clouds(2, 10, 12.0, 6);
  write_matrix(two, d.data);
  const std::string labels = (scratch() / "two_c.labels").string();
  CHECK(cli("cluster --matrix " + two + " --clusterer kmeans-r --k 2 --seed 4 --out " + labels).code == 0);
  CHECK(adjusted_rand(contingency(read_partition(labels), d.labels)) == 1.0);
  const std::string dendro = (scratch() / "tree.csv").string();
  CHECK(cli("cluster --matrix " + two + " --k 2 --dendrogram " + dendro).code == 0);
  CHECK(count_lines(slurp(dendro)) == 20);
  CHECK(cli("cluster --matrix " + two + " --k 2 --clusterer kmeans-r --dendrogram " + dendro).code == 2);
  CHECK(cli("cluster --matrix " + two + " --k 50").code == 2);

  const std::string a = write_file("a.labels", "0\n0\n1\n1\n"), b = write_file("b.labels", "1\n1\n0\n0\n");
  const Run r = cli("indices " + a + " " + b);
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["ari"] == 1.0);
  CHECK(j["rand"] == 1.0);
  CHECK(j["n"] == 4);
}

TEST_CASE("cli bench") {
  const std::string good = write_file("suite.ini",
                                      "[suite]\nkmax = 6\n[dataset g]\nsource = gaussian3\n"
                                      "[measure w]\ntype = wcss\n[clusterer nmf]\nname = nmf-r\n"
                                      "[clusterer avg]\nname = hier-a\n");
  const Run r = cli("bench " + good);
  CHECK(r.code == 0);
  CHECK(count_lines(r.out) == 3);
  CHECK(r.out.find(",error,") != std::string::npos);
  const Run bad = cli("bench " + write_file("bad.ini", "[suite]\nkmax = 6\n\nnonsense\n"));
  CHECK(bad.code == 2);
  CHECK(bad.err.find("line 4") != std::string::npos);
  CHECK(cli("bench " + (scratch() / "missing.ini").string()).code == 2);
  const Run empty = cli("bench " + write_file("empty.ini", "# nothing\n"));
  CHECK(empty.code == 0);
  CHECK(count_lines(empty.out) == 1);
}
