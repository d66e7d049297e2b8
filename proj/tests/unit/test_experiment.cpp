#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "plbench/experiment.hpp"

using namespace plbench;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const char* kSpanPresetConfig = R"(
[problem]
preset = theorem2
n = 4
L = 1.0
mu = 0.1
delta = 1.0

[topology]
preset = complete:4

[solver]
name = gd,cgd,dgd-gt,drone
eta = 0.5
iterations = 60
K = 8
p = 0.5
b = 1

[run]
tau = 1.0
epsilon = 1e-8
seed = 9
)";

}  // namespace

TEST_CASE("config round-trips through serialize and parse") {
  const auto cfg = ConfigFile::parse(kSpanPresetConfig);
  const auto again = ConfigFile::parse(cfg.serialize());
  CHECK(cfg == again);
  const auto thrice = ConfigFile::parse(again.serialize());
  CHECK(again == thrice);
  CHECK(cfg.get_string("problem", "preset") == "theorem2");
  CHECK(cfg.get_double("solver", "eta", 0.0) == 0.5);
  CHECK(cfg.get_int("run", "seed", -1) == 9);
  CHECK(cfg.get_bool("run", "lyapunov", true));
}

TEST_CASE("config parser reports malformed lines") {
  CHECK_THROWS_AS(ConfigFile::parse("[problem\npreset = x\n"), config_error);
  CHECK_THROWS_AS(ConfigFile::parse("key = 1\n"), config_error);
  CHECK_THROWS_AS(ConfigFile::parse("[s]\nnokey\n"), config_error);
  const auto cfg = ConfigFile::parse("[s]\nk = \"quoted value\"  # comment\n");
  CHECK(cfg.get_string("s", "k") == "quoted value");
}

TEST_CASE("unknown presets and solvers are usage errors") {
  auto cfg = ConfigFile::parse(kSpanPresetConfig);
  cfg.set("problem", "preset", "no-such-thing");
  CHECK_THROWS_AS(make_problem(cfg), config_error);
  auto cfg2 = ConfigFile::parse(kSpanPresetConfig);
  cfg2.set("solver", "name", "sgd");
  CHECK_THROWS_AS(cmd_run(cfg2, "/tmp/plbench-test-unknown"), config_error);
}

TEST_CASE("cmd_run writes one deterministic CSV per solver") {
  const auto cfg = ConfigFile::parse(kSpanPresetConfig);
  const std::string dir1 = "/tmp/plbench-test-run/a";
  const std::string dir2 = "/tmp/plbench-test-run/b";
  std::filesystem::remove_all("/tmp/plbench-test-run");
  const auto out1 = cmd_run(cfg, dir1);
  const auto out2 = cmd_run(cfg, dir2);
  REQUIRE(out1.solvers.size() == 4);
  for (size_t s = 0; s < out1.solvers.size(); ++s) {
    const auto bytes1 = read_file(out1.solvers[s].csv_path);
    const auto bytes2 = read_file(out2.solvers[s].csv_path);
    CHECK(bytes1 == bytes2);
    CHECK(bytes1.rfind("iter,lfo_total,comm_rounds,time_units,gap,grad_norm,"
                       "consensus_err,U,V,C,Phi\n",
                       0) == 0);
  }
  // gd reaches the target on this strongly convex instance
  CHECK(out1.solvers[0].reached_at >= 0);
}

TEST_CASE("csv rows carry 17 significant digits and parse back") {
  const auto cfg = ConfigFile::parse(kSpanPresetConfig);
  const auto out = cmd_run(cfg, "/tmp/plbench-test-digits");
  const auto text = read_file(out.solvers[0].csv_path);
  // the known initial gap 1 must appear exactly
  CHECK(text.find("\n0,0,0,0,1,") != std::string::npos);
}

TEST_CASE("relative gap axis appears when the optimum is unknown") {
  const char* cfg_text = R"(
[problem]
preset = drivface-scale
m = 40
d = 12
n = 4
noise = 0.05

[solver]
name = gd
eta = 0.01
iterations = 5

[run]
seed = 3
)";
  const auto cfg = ConfigFile::parse(cfg_text);
  const auto out = cmd_run(cfg, "/tmp/plbench-test-relative");
  CHECK(out.summary.find("gap_axis=relative") != std::string::npos);
  const auto text = read_file(out.solvers[0].csv_path);
  // U,V,C,Phi columns are empty
  CHECK(text.find(",,,,") != std::string::npos);
}

TEST_CASE("spectral command reports the documented gaps") {
  CHECK(cmd_spectral("linear:2").gamma == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cmd_spectral("complete:3").gamma == doctest::Approx(1.0).epsilon(1e-12));
  const auto out = cmd_spectral("linear:32");
  CHECK(out.gamma == doctest::Approx(0.0024).epsilon(0.01));
  CHECK(out.report.all_pass());
  CHECK(out.text.find("gamma") != std::string::npos);
}

TEST_CASE("check-instance passes for the shipped presets") {
  for (const char* preset : {"theorem2", "ifo-hard", "dfo-hard"}) {
    ConfigFile cfg;
    cfg.set("problem", "preset", preset);
    if (std::string(preset) == "ifo-hard") cfg.set("problem", "n", "3");
    const auto out = cmd_check_instance(cfg);
    INFO(preset, ": ", out.text);
    CHECK(out.all_passed);
  }
}

TEST_CASE("plot renders a self-contained svg and rejects empty input") {
  const auto cfg = ConfigFile::parse(kSpanPresetConfig);
  const auto out = cmd_run(cfg, "/tmp/plbench-test-plot");
  const std::string svg_path = "/tmp/plbench-test-plot/curves.svg";
  std::vector<std::string> paths;
  for (const auto& s : out.solvers) paths.push_back(s.csv_path);
  cmd_plot(paths, "lfo_total", svg_path);
  const auto svg = read_file(svg_path);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("href") == std::string::npos);  // self-contained, no assets

  const std::string empty_csv = "/tmp/plbench-test-plot/empty.csv";
  {
    std::ofstream f(empty_csv);
    f << "iter,lfo_total,comm_rounds,time_units,gap,grad_norm,consensus_err,U,V,C,"
         "Phi\n";
  }
  const std::string bad_svg = "/tmp/plbench-test-plot/bad.svg";
  CHECK_THROWS_AS(cmd_plot({empty_csv}, "iter", bad_svg), config_error);
  CHECK_FALSE(std::filesystem::exists(bad_svg));

  CHECK_THROWS_AS(cmd_plot(paths, "gap", svg_path), config_error);
}

TEST_CASE("libsvm presets feed the runner end to end") {
  const std::string dir = "/tmp/plbench-test-libsvm";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const std::string data = dir + "/tiny.libsvm";
  {
    std::ofstream f(data);
    f << "1 1:0.5 3:1.0\n-1 2:1.0\n1 1:1.0 2:-0.5\n-1 3:0.25\n";
  }
  ConfigFile cfg;
  cfg.set("problem", "preset", "libsvm:" + data);
  cfg.set("problem", "loss", "logistic");
  cfg.set("problem", "n", "2");
  cfg.set("solver", "name", "gd");
  cfg.set("solver", "eta", "0.5");
  cfg.set("solver", "iterations", "20");
  const auto out = cmd_run(cfg, dir + "/out");
  CHECK(out.solvers.size() == 1);
  CHECK(out.summary.find("gap_axis=relative") != std::string::npos);
}

TEST_CASE("large synthetic presets skip the spectral PL estimate") {
  ConfigFile cfg;
  cfg.set("problem", "preset", "drivface-scale");
  const auto prob = make_problem(cfg);
  CHECK(prob.set.d == 921);
  CHECK(prob.set.smoothness.has_value());
  CHECK_FALSE(prob.set.pl_constant.has_value());
  CHECK_FALSE(prob.set.f_star.has_value());  // noisy labels
}

TEST_CASE("seed override changes stochastic runs but not the schema") {
  auto cfg = ConfigFile::parse(kSpanPresetConfig);
  cfg.set("solver", "name", "drone");
  cfg.set("solver", "p", "0.3");
  const auto a = cmd_run(cfg, "/tmp/plbench-test-seed/a", 1);
  const auto b = cmd_run(cfg, "/tmp/plbench-test-seed/b", 2);
  CHECK(read_file(a.solvers[0].csv_path) != read_file(b.solvers[0].csv_path));
}
