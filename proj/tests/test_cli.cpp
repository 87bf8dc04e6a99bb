#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "tcone/io.hpp"

using namespace tcone;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("tcone_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Every regular file of `a` exists in `b` with identical bytes, and vice versa.
bool same_tree(const fs::path& a, const fs::path& b) {
  std::size_t na = 0, nb = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    ++na;
    const fs::path other = b / fs::relative(e.path(), a);
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) return false;
  }
  for (const auto& e : fs::recursive_directory_iterator(b))
    if (e.is_regular_file()) ++nb;
  return na == nb && na > 0;
}

int run_exe(const std::string& args) {
  const std::string cmd = std::string(TCONE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config merge rejects unknown keys and wrong types") {
  const Json defaults{{"a", 1}, {"b", "x"}, {"grid", {{"t", "0:1:3"}}}};
  CHECK(merge_config(defaults, Json{{"a", 2.5}})["a"] == 2.5);
  CHECK(merge_config(defaults, Json{{"grid", {{"t", "1,2"}}}})["grid"]["t"] == "1,2");
  CHECK_THROWS_AS(merge_config(defaults, Json{{"c", 1}}), ConfigError);
  CHECK_THROWS_AS(merge_config(defaults, Json{{"grid", {{"u", "1"}}}}), ConfigError);
  CHECK_THROWS_AS(merge_config(defaults, Json{{"b", 3}}), ConfigError);
  CHECK_THROWS_AS(merge_config(defaults, Json::array()), ConfigError);
}

TEST_CASE("axis specifications") {
  CHECK(parse_axis_spec("0:1:3") == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(parse_axis_spec("lin:0:1:3") == std::vector<double>{0.0, 0.5, 1.0});
  const auto lg = parse_axis_spec("log:1:100:3");
  CHECK(lg[1] == doctest::Approx(10.0));
  const auto tl = parse_axis_spec("tlog:0:1:2");
  CHECK(tl[0] == 1.0);
  CHECK(tl[1] == doctest::Approx(std::exp(1.0)));
  CHECK(parse_axis_spec("0.5,2,-1") == std::vector<double>{0.5, 2.0, -1.0});
  CHECK(parse_axis_spec("3") == std::vector<double>{3.0});
  for (const char* bad : {"", "a,b", "1,", "0:1", "0:1:0", "1:0:5", "0:1:2.5", "log:0:1:3", "cube:0:1:3"})
    CHECK_THROWS_AS(parse_axis_spec(bad), ConfigError);
  Json cfg{{"grid", {{"t", "1"}}}};
  apply_grid_override(cfg, "t=0:1:5");
  CHECK(cfg["grid"]["t"] == "0:1:5");
  CHECK_THROWS_AS(apply_grid_override(cfg, "s=1"), ConfigError);
  CHECK_THROWS_AS(apply_grid_override(cfg, "t"), ConfigError);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0, 123456789.123456789}) {
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(INFINITY) == "inf");
}

TEST_CASE("CSV tables carry metadata lines") {
  CsvTable t;
  t.add_meta("seed", "7");
  t.add_meta("note", "two\nlines");
  t.columns = {"x", "y"};
  t.add_row(std::vector<double>{1.0, 0.25});
  CHECK_THROWS_AS(t.add_row(std::vector<double>{1.0}), DomainError);
  CHECK(t.str() == "# seed: 7\n# note: two lines\nx,y\n1,0.25\n");
}

TEST_CASE("distance matrices persist with a digest header") {
  Eigen::MatrixXd D(3, 3);
  D << 0, 1.0 / 3, 0.5, 1.0 / 3, 0, 0.25, 0.5, 0.25, 0;
  const FiniteMetricSpace s = FiniteMetricSpace::from_matrix(D, "unit test");
  const fs::path dir = scratch("matrix");
  write_distance_matrix(dir / "m.csv", s);
  const std::string text = slurp(dir / "m.csv");
  CHECK(text.rfind("N=3,digest=" + hex64(fnv1a64("unit test")) + "\n", 0) == 0);
  const FiniteMetricSpace back = read_distance_matrix(dir / "m.csv");
  CHECK((back.D - D).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.provenance == "digest:" + hex64(fnv1a64("unit test")));

  std::ofstream(dir / "bad.csv") << "N=2,digest=00\n0,1\n";
  CHECK_THROWS_AS(read_distance_matrix(dir / "bad.csv"), ConfigError);
  std::ofstream(dir / "asym.csv") << "N=2,digest=00\n0,1\n2,0\n";
  CHECK_THROWS_AS(read_distance_matrix(dir / "asym.csv"), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("resolved configs apply seed and grid overrides") {
  for (const auto& name : cli::command_names()) {
    const Json d = cli::default_config(name);
    CHECK(d["command"] == name);
    CHECK(d.contains("seed"));
  }
  const Json c = cli::resolve_config("example2", std::nullopt, 42u, {"t=0.5,1"});
  CHECK(c["seed"] == 42u);
  CHECK(c["grid"]["t"] == "0.5,1");
  CHECK_THROWS_AS(cli::resolve_config("example2", std::nullopt, std::nullopt, {"u=1"}), ConfigError);
  CHECK_THROWS_AS(cli::default_config("nope"), ConfigError);

  const fs::path dir = scratch("resolve");
  fs::create_directories(dir);
  std::ofstream(dir / "other.json") << R"({"command": "gh"})";
  CHECK_THROWS_AS(cli::resolve_config("example2", dir / "other.json", std::nullopt, {}), ConfigError);
  std::ofstream(dir / "neg.json") << R"({"seed": -3})";
  CHECK_THROWS_AS(cli::resolve_config("example2", dir / "neg.json", std::nullopt, {}), ConfigError);
  std::ofstream(dir / "broken.json") << "{";
  CHECK_THROWS_AS(cli::resolve_config("example2", dir / "broken.json", std::nullopt, {}), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("runs replay byte-identically from the echoed config") {
  const fs::path dir = scratch("replay");
  std::ostringstream log;
  const Json cfg = cli::resolve_config("oracle-crosscheck", std::nullopt, 9u, {});
  Json small = cfg;
  small["draws"] = 5;
  CHECK(cli::run("oracle-crosscheck", small, dir / "a", log) == cli::kOk);
  const Json echo = cli::resolve_config("oracle-crosscheck", dir / "a" / "config.json", std::nullopt, {});
  CHECK(echo == small);
  CHECK(cli::run("oracle-crosscheck", echo, dir / "b", log) == cli::kOk);
  CHECK(same_tree(dir / "a", dir / "b"));
  CHECK(log.str().find("# config: ") != std::string::npos);

  const std::string csv = slurp(dir / "a" / "crosscheck.csv");
  CHECK(csv.rfind("# command: oracle-crosscheck\n# config: " + small.dump() + "\n", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("command exit codes") {
  const fs::path dir = scratch("codes");
  std::ostringstream log;
  Json search = cli::resolve_config("lemma-search", std::nullopt, std::nullopt, {"lnL=tlog:1:4:8", "delta=0:1:5"});
  search["search"]["F_steps"] = 0;
  CHECK(cli::run("lemma-search", search, dir / "s", log) == cli::kConfigError);
  search["search"]["F_steps"] = 2;
  search["search"]["F_start"] = 0.5;  // D F > 1 for both steps: no candidate
  CHECK(cli::run("lemma-search", search, dir / "s", log) == cli::kConfigError);

  Json verify = cli::resolve_config("lemma-verify", std::nullopt, std::nullopt, {"lnL=tlog:1:4:8", "delta=0:1:5"});
  verify["family"] = "stationary-round";
  verify["samples"] = 5;
  CHECK(cli::run("lemma-verify", verify, dir / "v", log) == cli::kOk);
  CHECK(fs::exists(dir / "v" / "plot_lemma.py"));
  CHECK(fs::exists(dir / "v" / "lemma_profile.csv"));
  verify["family"] = "torus";
  CHECK_THROWS_AS(cli::run("lemma-verify", verify, dir / "v", log), ConfigError);

  Json cob = cli::resolve_config("cobordism", std::nullopt, std::nullopt, {"b=0.1", "e0=0.2"});
  cob["s_nodes"] = 8;
  cob["r_nodes"] = 8;
  CHECK(cli::run("cobordism", cob, dir / "c", log) == cli::kCheckFailed);
  fs::remove_all(dir);
}

TEST_CASE("the executable maps errors to exit codes and replays") {
  const fs::path dir = scratch("exe");
  fs::create_directories(dir);
  std::ofstream(dir / "unknown.json") << R"({"draws": 3, "colour": "red"})";
  CHECK(run_exe(("oracle-crosscheck --config " + (dir / "unknown.json").string() + " --out " + (dir / "x").string())) ==
        cli::kConfigError);
  CHECK(run_exe("oracle-crosscheck --grid t=1 --out " + (dir / "x").string()) == cli::kConfigError);
  CHECK(run_exe("no-such-command") == cli::kConfigError);
  CHECK(run_exe("") == cli::kConfigError);

  std::ofstream(dir / "small.json") << R"({"draws": 3})";
  CHECK(run_exe("oracle-crosscheck --seed 5 --config " + (dir / "small.json").string() + " --out " +
            (dir / "a").string()) == cli::kOk);
  CHECK(run_exe("oracle-crosscheck --config " + (dir / "a" / "config.json").string() + " --out " + (dir / "b").string()) ==
        cli::kOk);
  CHECK(same_tree(dir / "a", dir / "b"));
  CHECK(slurp(dir / "a" / "config.json").find("\"seed\": 5") != std::string::npos);
  fs::remove_all(dir);
}
