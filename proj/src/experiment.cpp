#include "plbench/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace plbench {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string strip_quotes(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text) {
  ConfigFile cfg;
  std::istringstream in(text);
  std::string line;
  std::string current;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error("config line " + std::to_string(line_no) +
                           ": unterminated section header");
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty())
        throw config_error("config line " + std::to_string(line_no) +
                           ": empty section name");
      cfg.sections_.emplace_back(current, Section{});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(line_no) +
                         ": expected key = value");
    if (current.empty())
      throw config_error("config line " + std::to_string(line_no) +
                         ": key outside any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = strip_quotes(trim(line.substr(eq + 1)));
    if (key.empty())
      throw config_error("config line " + std::to_string(line_no) + ": empty key");
    cfg.sections_.back().second.emplace_back(key, value);
  }
  return cfg;
}

std::string ConfigFile::serialize() const {
  std::ostringstream out;
  for (const auto& [name, entries] : sections_) {
    out << '[' << name << "]\n";
    for (const auto& [k, v] : entries) out << k << " = " << v << '\n';
    out << '\n';
  }
  return out.str();
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  for (const auto& [name, entries] : sections_) {
    if (name != section) continue;
    for (const auto& [k, v] : entries)
      if (k == key) return true;
  }
  return false;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   const std::string& fallback) const {
  for (const auto& [name, entries] : sections_) {
    if (name != section) continue;
    for (const auto& [k, v] : entries)
      if (k == key) return v;
  }
  return fallback;
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = get_string(section, key);
  try {
    return std::stod(v);
  } catch (...) {
    throw config_error("config value " + section + "." + key + " = '" + v +
                       "' is not a number");
  }
}

int ConfigFile::get_int(const std::string& section, const std::string& key,
                        int fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = get_string(section, key);
  try {
    return std::stoi(v);
  } catch (...) {
    throw config_error("config value " + section + "." + key + " = '" + v +
                       "' is not an integer");
  }
}

uint64_t ConfigFile::get_uint(const std::string& section, const std::string& key,
                              uint64_t fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = get_string(section, key);
  try {
    return std::stoull(v);
  } catch (...) {
    throw config_error("config value " + section + "." + key + " = '" + v +
                       "' is not an unsigned integer");
  }
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          bool fallback) const {
  if (!has(section, key)) return fallback;
  std::string v = get_string(section, key);
  std::transform(v.begin(), v.end(), v.begin(), ::tolower);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw config_error("config value " + section + "." + key + " = '" + v +
                     "' is not a boolean");
}

void ConfigFile::set(const std::string& section, const std::string& key,
                     const std::string& value) {
  for (auto& [name, entries] : sections_) {
    if (name != section) continue;
    for (auto& [k, v] : entries)
      if (k == key) {
        v = value;
        return;
      }
    entries.emplace_back(key, value);
    return;
  }
  sections_.emplace_back(section, Section{{key, value}});
}

namespace {

LocalObjectiveSet annotate_regression(LocalObjectiveSet set, const Dataset& ds, int n,
                                      Loss loss, double noise) {
  const double square_l = estimate_square_loss_smoothness(ds, n);
  if (loss == Loss::kSquare) {
    set.smoothness = square_l;
    // the Gram eigensolve is cubic in min(m, d); skip it for large data and
    // leave auto parameter selection to presets that declare constants
    if (std::min(ds.m, ds.d) <= 400) set.pl_constant = estimate_square_loss_pl(ds);
    if (noise == 0.0 && !ds.x_true.empty()) set.f_star = 0.0;
  } else {
    // logistic curvature is at most 1/8 of the square-loss curvature
    set.smoothness = square_l / 8.0;
  }
  return set;
}

}  // namespace

ProblemInstance make_problem(const ConfigFile& cfg) {
  const std::string preset = cfg.get_string("problem", "preset");
  if (preset.empty()) throw config_error("missing problem.preset");

  ProblemInstance prob;
  prob.name = preset;

  if (preset == "hard-decentralized") {
    const int n = cfg.get_int("problem", "n", 32);
    auto inst = experiment_instance(n);
    prob.set = std::move(inst.set);
    prob.chain = std::move(inst.chain);
    prob.split = make_network_split(Graph::path(n), {0}, inst.sigma);
    prob.x0.assign(prob.set.d, 0.0);
    return prob;
  }
  if (preset == "ifo-hard") {
    const int n = cfg.get_int("problem", "n", 4);
    const double mu = cfg.get_double("problem", "mu", 1.0);
    const double L =
        cfg.get_double("problem", "L", 2.0 * 37.0 * kChainA * std::sqrt(double(n)) * mu);
    const double delta = cfg.get_double("problem", "delta", 1.0);
    const double eps = cfg.get_double("problem", "eps", 0.004 * delta);
    prob.set = ifo_hard_instance(L, mu, n, delta, eps);
    const int block_len = std::stoi(prob.set.metadata.at("block_len"));
    const int blocks = std::stoi(prob.set.metadata.at("blocks"));
    prob.chain = make_chain_spec(block_len, blocks);
    prob.embed_block = block_len * blocks;
    prob.x0.assign(prob.set.d, 0.0);
    return prob;
  }
  if (preset == "theorem2") {
    const int n = cfg.get_int("problem", "n", 8);
    const double L = cfg.get_double("problem", "L", 1.0);
    const double mu = cfg.get_double("problem", "mu", L / 10.0);
    const double delta = cfg.get_double("problem", "delta", 1.0);
    prob.set = linear_span_instance(L, mu, n, delta);
    prob.span_params = ProblemInstance::SpanInstanceParams{L, mu, delta, n};
    prob.x0.assign(prob.set.d, 0.0);
    return prob;
  }
  if (preset == "dfo-hard") {
    const double mu = cfg.get_double("problem", "mu", 1.0);
    const double L = cfg.get_double("problem", "L", 2.0 * 194.0 * kChainA * mu);
    const double gamma = cfg.get_double("problem", "gamma", 0.1);
    const double delta = cfg.get_double("problem", "delta", 1.0);
    const double eps = cfg.get_double("problem", "eps", 0.009 * delta);
    auto inst = dfo_hard_instance(L, mu, gamma, delta, eps);
    prob.set = std::move(inst.set);
    prob.forced_mixing = std::move(inst.mixing);
    prob.forced_graph = inst.graph;
    prob.chain = std::move(inst.chain);
    prob.split = make_network_split(inst.graph,
                                    [&] {
                                      std::vector<int> c;
                                      const int n = inst.graph.size();
                                      const int c_count =
                                          inst.branch_m >= 3 ? (n + 31) / 32 : 1;
                                      for (int v = 0; v < c_count; ++v) c.push_back(v);
                                      return c;
                                    }(),
                                    inst.sigma);
    prob.x0.assign(prob.set.d, 0.0);
    return prob;
  }
  if (preset == "linreg-synth" || preset == "logreg-synth" ||
      preset == "drivface-scale") {
    const bool logistic = preset == "logreg-synth";
    const Loss loss = logistic ? Loss::kLogistic : Loss::kSquare;
    int m = cfg.get_int("problem", "m", 192);
    int d = cfg.get_int("problem", "d", 48);
    double noise = cfg.get_double("problem", "noise", 0.0);
    uint64_t dseed = cfg.get_uint("problem", "data_seed", 1234);
    if (preset == "drivface-scale") {
      m = cfg.get_int("problem", "m", 606);
      d = cfg.get_int("problem", "d", 921);
      noise = cfg.get_double("problem", "noise", 0.01);
      dseed = cfg.get_uint("problem", "data_seed", 606);
    }
    const int n = cfg.get_int("problem", "n", 8);
    const Dataset ds = synth_regression(m, d, noise, dseed, loss);
    prob.set = annotate_regression(partitioned_regression_set(ds, n, loss), ds, n,
                                   loss, logistic ? 1.0 : noise);
    prob.x0.assign(prob.set.d, 0.0);
    return prob;
  }
  if (preset.rfind("libsvm:", 0) == 0) {
    const std::string path = preset.substr(7);
    std::ifstream in(path);
    if (!in) throw config_error("cannot open LIBSVM file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const Loss loss = cfg.get_string("problem", "loss", "square") == "logistic"
                          ? Loss::kLogistic
                          : Loss::kSquare;
    const Dataset ds = parse_libsvm(buf.str(), cfg.get_int("problem", "dim", 0));
    const int n = cfg.get_int("problem", "n", 8);
    prob.set = annotate_regression(partitioned_regression_set(ds, n, loss), ds, n,
                                   loss, 1.0);
    prob.x0.assign(prob.set.d, 0.0);
    return prob;
  }
  throw config_error("unknown problem preset: " + preset);
}

namespace {

MixingMatrix resolve_topology(const ConfigFile& cfg, const ProblemInstance& prob,
                              Graph* graph_out) {
  if (prob.forced_mixing) {
    if (graph_out) *graph_out = *prob.forced_graph;
    return *prob.forced_mixing;
  }
  const std::string spec =
      cfg.get_string("topology", "preset", "linear:" + std::to_string(prob.set.n));
  Graph g = Graph::from_preset(spec);
  if (g.size() != prob.set.n)
    throw config_error("topology has " + std::to_string(g.size()) +
                       " nodes but the problem has " + std::to_string(prob.set.n) +
                       " agents");
  if (graph_out) *graph_out = g;
  return laplacian_mixing(g);
}

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!trim(cur).empty()) out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

}  // namespace

std::string run_record_csv(const RunRecord& rec, bool f_star_known) {
  std::ostringstream out;
  out << "iter,lfo_total,comm_rounds,time_units,gap,grad_norm,consensus_err,U,V,C,"
         "Phi\n";
  double min_so_far = std::numeric_limits<double>::infinity();
  for (const auto& row : rec.rows) {
    double gap;
    if (f_star_known) {
      gap = row.gap;
    } else {
      min_so_far = std::min(min_so_far, row.fvalue);
      gap = row.fvalue - min_so_far;
    }
    out << row.iter << ',' << row.lfo_total << ',' << row.comm_rounds << ','
        << fmt17(row.time_units) << ',' << fmt17(gap) << ',' << fmt17(row.grad_norm)
        << ',' << fmt17(row.consensus_err) << ',';
    auto lyap = [&](double v) { return std::isnan(v) ? std::string() : fmt17(v); };
    out << lyap(row.lyap_u) << ',' << lyap(row.lyap_v) << ',' << lyap(row.lyap_c)
        << ',' << lyap(row.lyap_phi) << '\n';
  }
  return out.str();
}

RunOutcome cmd_run(const ConfigFile& cfg, const std::string& out_dir,
                   std::optional<uint64_t> seed_override) {
  ProblemInstance prob = make_problem(cfg);
  Graph graph;
  const bool needs_mixing = [&] {
    for (const auto& name : split_csv_list(cfg.get_string("solver", "name", "gd")))
      if (name == "dgd-gt" || name == "dgd_gt" || name == "drone") return true;
    return false;
  }();
  MixingMatrix mixing;
  if (needs_mixing) mixing = resolve_topology(cfg, prob, &graph);

  const double tau = cfg.get_double("run", "tau", 1.0);
  const double epsilon = cfg.get_double("run", "epsilon", 1e-6);
  const uint64_t seed =
      seed_override ? *seed_override : cfg.get_uint("run", "seed", 0);
  const int iterations = cfg.get_int("solver", "iterations", 0);
  if (iterations <= 0) throw config_error("solver.iterations must be positive");
  const bool auto_params = cfg.get_bool("solver", "auto", false);
  const bool stop_at_eps =
      cfg.get_bool("run", "stop_at_epsilon", prob.set.f_star.has_value());

  RunOptions opt;
  opt.lyapunov = cfg.get_bool("run", "lyapunov", prob.set.f_star.has_value());
  if (stop_at_eps && prob.set.f_star) opt.stop_at_gap = epsilon;

  // automatic parameter selection needs declared constants and the measured gap
  std::optional<DefaultParamsResult> defaults;
  if (auto_params) {
    if (!prob.set.smoothness || !prob.set.pl_constant)
      throw config_error("solver.auto needs declared smoothness and PL constants");
    const double gamma = needs_mixing ? mixing.gap : 1.0;
    const double phi0 = cfg.get_double("solver", "phi0", 1.0);
    defaults = drone_default_params(prob.set.n, *prob.set.smoothness,
                                    *prob.set.pl_constant, gamma, phi0, epsilon);
  }

  double eta = cfg.get_double("solver", "eta", 0.0);
  if (eta <= 0.0) {
    if (defaults)
      eta = defaults->params.eta;
    else
      throw config_error("solver.eta is required (or set solver.auto = true)");
  }

  int gossip_rounds = cfg.get_int("solver", "K", 0);
  if (gossip_rounds <= 0 && needs_mixing)
    gossip_rounds = defaults ? defaults->params.gossip_rounds
                             : default_round_count(prob.set.n, mixing.gap);

  double p = cfg.get_double("solver", "p", 0.0);
  int b = cfg.get_int("solver", "b", 0);
  if (p <= 0.0 && defaults) p = defaults->params.restart_prob;
  if (b <= 0 && defaults) b = defaults->params.minibatch;

  std::filesystem::create_directories(out_dir);

  RunOutcome outcome;
  std::ostringstream summary;
  if (defaults && defaults->clamped) summary << "note: " << defaults->note << '\n';
  for (const auto& raw_name : split_csv_list(cfg.get_string("solver", "name", "gd"))) {
    std::string name = raw_name;
    if (name == "dgd_gt") name = "dgd-gt";

    OracleMeter meter(prob.set.n, tau);
    RunRecord rec;
    if (name == "gd") {
      rec = gd(prob.set, prob.x0, eta, iterations, meter, opt);
    } else if (name == "cgd") {
      rec = cgd(prob.set, prob.x0, eta, iterations, meter, opt);
    } else if (name == "dgd-gt") {
      rec = dgd_gt(prob.set, mixing, prob.x0, eta, gossip_rounds, iterations, meter,
                   seed, opt);
    } else if (name == "drone") {
      SolverParams params;
      params.eta = eta;
      params.iterations = iterations;
      params.gossip_rounds = gossip_rounds;
      params.restart_prob = p > 0.0 ? p : 0.5;
      params.minibatch = b > 0 ? b : 1;
      params.seed = seed;
      rec = drone(prob.set, mixing, prob.x0, params, meter, opt);
    } else {
      throw config_error("unknown solver: " + name);
    }

    SolverOutcome so;
    so.record = std::move(rec);
    for (size_t r = 0; r < so.record.rows.size(); ++r) {
      const auto& row = so.record.rows[r];
      if (prob.set.f_star && row.gap <= epsilon) {
        so.reached_at = row.iter;
        so.lfo_at_target = row.lfo_total;
        so.rounds_at_target = row.comm_rounds;
        so.time_at_target = row.time_units;
        break;
      }
    }

    so.csv_path = out_dir + "/" + name + ".csv";
    std::ofstream csv(so.csv_path, std::ios::binary);
    if (!csv) throw config_error("cannot write " + so.csv_path);
    csv << run_record_csv(so.record, prob.set.f_star.has_value());
    csv.close();

    summary << "solver=" << name << " rows=" << so.record.rows.size();
    if (name == "dgd-gt" || name == "drone")
      // two consensus calls per iteration, both metered
      summary << " rounds_per_iter=" << 2 * gossip_rounds;
    if (prob.set.f_star) {
      if (so.reached_at >= 0)
        summary << " reached_eps=1 iter=" << so.reached_at
                << " lfo=" << so.lfo_at_target << " rounds=" << so.rounds_at_target
                << " time=" << fmt17(so.time_at_target);
      else
        summary << " reached_eps=0";
    } else {
      summary << " gap_axis=relative";
    }
    summary << " csv=" << so.csv_path << '\n';
    outcome.solvers.push_back(std::move(so));
  }
  outcome.summary = summary.str();
  return outcome;
}

SpectralOutcome cmd_spectral(const std::string& topology_spec) {
  Graph g = [&] {
    if (topology_spec.rfind("file:", 0) == 0) {
      std::ifstream in(topology_spec.substr(5));
      if (!in) throw config_error("cannot open edge list: " + topology_spec.substr(5));
      std::stringstream buf;
      buf << in.rdbuf();
      return Graph::from_edge_list(buf.str());
    }
    return Graph::from_preset(topology_spec);
  }();
  const MixingMatrix w = laplacian_mixing(g);
  SpectralOutcome out;
  out.gamma = w.gap;
  out.lambda2 = w.lambda2;
  out.n = g.size();
  out.report = validate_mixing(w, g, 0.0);

  std::ostringstream os;
  os << "topology " << topology_spec << ": n=" << out.n << '\n';
  os << "lambda2 = " << fmt17(out.lambda2) << '\n';
  os << "gamma   = " << fmt17(out.gamma) << '\n';
  os << "symmetric/stochastic/spectrum: "
     << (out.report.symmetric_stochastic ? "pass" : "FAIL")
     << " (sym residual " << out.report.symmetry_residual << ", row-sum residual "
     << out.report.row_sum_residual << ", eigenvalues in ["
     << out.report.min_eigenvalue << ", " << out.report.max_eigenvalue << "])\n";
  os << "sparsity pattern matches graph: "
     << (out.report.pattern_matches_graph ? "pass" : "FAIL") << '\n';
  os << "measured gap covers declared gamma: "
     << (out.report.gap_at_least ? "pass" : "FAIL") << '\n';
  out.text = os.str();
  return out;
}

CheckOutcome cmd_check_instance(const ConfigFile& cfg) {
  ProblemInstance prob = make_problem(cfg);
  CheckOutcome out;
  CheckOptions opt;
  opt.seed = cfg.get_uint("check", "seed", 20240817);

  out.results.push_back(check_psi_boundaries(1.0));
  out.results.push_back(check_psi_boundaries(7.0 / 8.0));

  auto std_checks = standard_instance_checks(prob.set, opt);
  out.results.insert(out.results.end(), std_checks.begin(), std_checks.end());

  if (prob.chain) {
    out.results.push_back(check_zero_chain(*prob.chain, opt));
    if (prob.chain->block_len % 2 == 0)
      out.results.push_back(check_split_identity(*prob.chain, opt));

    // g(0) <= 3T
    CheckResult g0{"g-at-zero-bound", true, 0.0, {}};
    std::vector<double> zero(prob.chain->dim(), 0.0);
    const double v = g_value(*prob.chain, zero);
    g0.worst = v;
    g0.passed = v <= 3.0 * prob.chain->block_len;
    g0.detail = "g(0) = " + std::to_string(v) + " vs bound " +
                std::to_string(3.0 * prob.chain->block_len);
    out.results.push_back(g0);
  }
  if (prob.embed_block)
    out.results.push_back(check_zero_chain_blockwise(prob.set, *prob.embed_block, opt));
  if (prob.split && prob.chain)
    out.results.push_back(check_h_average_identity(*prob.split, *prob.chain, opt));
  if (prob.span_params) {
    const auto& sp = *prob.span_params;
    out.results.push_back(check_span_gap(sp.L, sp.mu, sp.n, sp.Delta));
  }

  std::ostringstream os;
  for (const auto& r : out.results) {
    os << (r.passed ? "pass" : "FAIL") << "  " << r.name << ": " << r.detail << '\n';
    out.all_passed = out.all_passed && r.passed;
  }
  os << (out.all_passed ? "all checks passed" : "some checks FAILED") << '\n';
  out.text = os.str();
  return out;
}

namespace {

struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string label;
};

CsvData read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open CSV: " + path);
  CsvData data;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        cells.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur += c;
      }
    }
    cells.push_back(cur);
    if (first) {
      data.header = cells;
      first = false;
    } else {
      data.rows.push_back(cells);
    }
  }
  data.label = std::filesystem::path(path).stem().string();
  return data;
}

}  // namespace

void cmd_plot(const std::vector<std::string>& csv_paths, const std::string& x_axis,
              const std::string& out_svg) {
  const std::vector<std::string> axes = {"iter", "lfo_total", "comm_rounds",
                                         "time_units"};
  if (std::find(axes.begin(), axes.end(), x_axis) == axes.end())
    throw config_error("x-axis must be one of iter, lfo_total, comm_rounds, time_units");
  if (csv_paths.empty()) throw config_error("plot needs at least one CSV");

  struct Series {
    std::string label;
    std::vector<std::pair<double, double>> pts;  // (x, log10 gap)
  };
  std::vector<Series> series;
  std::vector<std::string> schema;
  for (const auto& path : csv_paths) {
    const CsvData data = read_csv(path);
    if (schema.empty())
      schema = data.header;
    else if (schema != data.header)
      throw config_error("CSV schema mismatch: " + path);
    const auto xit = std::find(schema.begin(), schema.end(), x_axis);
    const auto git = std::find(schema.begin(), schema.end(), std::string("gap"));
    if (xit == schema.end() || git == schema.end())
      throw config_error("CSV lacks required columns: " + path);
    const size_t xi = xit - schema.begin(), gi = git - schema.begin();
    Series s;
    s.label = data.label;
    for (const auto& row : data.rows) {
      if (row.size() != schema.size()) throw config_error("ragged CSV row: " + path);
      if (row[gi].empty()) continue;
      const double x = std::stod(row[xi]);
      const double gap = std::stod(row[gi]);
      if (!(gap > 0.0) || !std::isfinite(gap) || !std::isfinite(x)) continue;
      s.pts.emplace_back(x, std::log10(gap));
    }
    if (!s.pts.empty()) series.push_back(std::move(s));
  }
  if (series.empty()) throw config_error("no plottable data in the given CSVs");

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (auto [x, y] : s.pts) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;

  const double width = 960, height = 600;
  const double ml = 80, mr = 30, mt = 30, mb = 60;
  auto sx = [&](double x) {
    return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr);
  };
  auto sy = [&](double y) {
    return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb);
  };
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b"};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height
      << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // horizontal gridlines at integer log10 levels
  for (int level = static_cast<int>(std::ceil(ymin));
       level <= static_cast<int>(std::floor(ymax)); ++level) {
    const double y = sy(level);
    svg << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << width - mr
        << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-size=\"12\" font-family=\"sans-serif\">1e"
        << level << "</text>\n";
  }
  // x ticks
  for (int k = 0; k <= 5; ++k) {
    const double x = xmin + (xmax - xmin) * k / 5.0;
    svg << "<line x1=\"" << sx(x) << "\" y1=\"" << height - mb << "\" x2=\"" << sx(x)
        << "\" y2=\"" << height - mb + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << sx(x) << "\" y=\"" << height - mb + 20
        << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">"
        << fmt17(std::round(x * 100.0) / 100.0).substr(0, 9) << "</text>\n";
  }
  svg << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
      << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
      << height - mb << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 15
      << "\" text-anchor=\"middle\" font-size=\"14\" font-family=\"sans-serif\">"
      << x_axis << "</text>\n";
  svg << "<text x=\"20\" y=\"" << (mt + height - mb) / 2
      << "\" text-anchor=\"middle\" font-size=\"14\" font-family=\"sans-serif\" "
         "transform=\"rotate(-90 20 "
      << (mt + height - mb) / 2 << ")\">gap</text>\n";

  for (size_t i = 0; i < series.size(); ++i) {
    svg << "<polyline fill=\"none\" stroke=\"" << colors[i % 6]
        << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : series[i].pts) svg << sx(x) << ',' << sy(y) << ' ';
    svg << "\"/>\n";
    svg << "<text x=\"" << width - mr - 10 << "\" y=\"" << mt + 18 * (i + 1)
        << "\" text-anchor=\"end\" font-size=\"13\" font-family=\"sans-serif\" "
           "fill=\""
        << colors[i % 6] << "\">" << series[i].label << "</text>\n";
  }
  svg << "</svg>\n";

  std::ofstream out(out_svg, std::ios::binary);
  if (!out) throw config_error("cannot write SVG: " + out_svg);
  out << svg.str();
}

}  // namespace plbench
