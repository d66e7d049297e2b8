#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "plbench/experiment.hpp"

namespace py = pybind11;
using namespace plbench;

namespace {

std::vector<double> as_vector(const py::sequence& seq) {
  std::vector<double> out;
  out.reserve(py::len(seq));
  for (auto item : seq) out.push_back(item.cast<double>());
  return out;
}

py::dict summarize_solver(const SolverOutcome& so) {
  py::dict d;
  d["solver"] = so.record.solver;
  d["csv"] = so.csv_path;
  d["rows"] = so.record.rows.size();
  d["reached_at"] = so.reached_at;
  d["lfo_at_target"] = so.lfo_at_target;
  d["rounds_at_target"] = so.rounds_at_target;
  d["time_at_target"] = so.time_at_target;
  d["final_gap"] = so.record.rows.back().gap;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "finite-sum PL optimization benchmark core";

  m.def("psi", &psi_value, py::arg("theta"), py::arg("x"));
  m.def("psi_grad", &psi_grad, py::arg("theta"), py::arg("x"));
  m.def("iota", &iota, py::arg("m"));
  m.def("default_round_count", &default_round_count, py::arg("n"), py::arg("gamma"));

  py::class_<ChainSpec>(m, "Chain")
      .def(py::init([](int block_len, int blocks) {
             return make_chain_spec(block_len, blocks);
           }),
           py::arg("block_len"), py::arg("blocks"))
      .def_property_readonly("dim", &ChainSpec::dim)
      .def_property_readonly("target",
                             [](const ChainSpec& s) { return s.target; })
      .def("value",
           [](const ChainSpec& s, const py::sequence& x) {
             return g_value(s, as_vector(x));
           })
      .def("grad",
           [](const ChainSpec& s, const py::sequence& x) {
             std::vector<double> out(s.dim());
             g_grad(s, as_vector(x), out);
             return out;
           })
      .def("q1", [](const ChainSpec& s, const py::sequence& x) {
        return q1_at(s, as_vector(x));
      })
      .def("q2", [](const ChainSpec& s, const py::sequence& x) {
        return q2_at(s, as_vector(x));
      })
      .def("r", [](const ChainSpec& s, const py::sequence& x) {
        return r_at(s, as_vector(x));
      });

  m.def("spectral", [](const std::string& topology) {
    const auto out = cmd_spectral(topology);
    py::dict d;
    d["gamma"] = out.gamma;
    d["lambda2"] = out.lambda2;
    d["n"] = out.n;
    d["all_pass"] = out.report.all_pass();
    d["text"] = out.text;
    return d;
  });

  m.def(
      "mixing_for_gap",
      [](double gamma, double tol) {
        const auto res = mixing_for_gap(gamma, tol);
        py::dict d;
        d["n"] = res.graph.size();
        d["gap"] = res.mixing.gap;
        d["lambda2"] = res.mixing.lambda2;
        d["weight_l"] = res.weight_l;
        return d;
      },
      py::arg("gamma"), py::arg("tol") = 1e-10);

  m.def("drone_default_params",
        [](int n, double L, double mu, double gamma, double phi0, double eps) {
          const auto res = drone_default_params(n, L, mu, gamma, phi0, eps);
          py::dict d;
          d["p"] = res.params.restart_prob;
          d["b"] = res.params.minibatch;
          d["eta"] = res.params.eta;
          d["K"] = res.params.gossip_rounds;
          d["T"] = res.params.iterations;
          d["clamped"] = res.clamped;
          d["note"] = res.note;
          return d;
        },
        py::arg("n"), py::arg("L"), py::arg("mu"), py::arg("gamma"),
        py::arg("phi0"), py::arg("eps"));

  m.def(
      "run_experiment",
      [](const std::string& config_text, const std::string& out_dir,
         py::object seed) {
        const auto cfg = ConfigFile::parse(config_text);
        std::optional<uint64_t> seed_override;
        if (!seed.is_none()) seed_override = seed.cast<uint64_t>();
        const auto outcome = cmd_run(cfg, out_dir, seed_override);
        py::list solvers;
        for (const auto& so : outcome.solvers) solvers.append(summarize_solver(so));
        py::dict d;
        d["summary"] = outcome.summary;
        d["solvers"] = solvers;
        return d;
      },
      py::arg("config_text"), py::arg("out_dir"), py::arg("seed") = py::none());

  m.def("check_instance", [](const std::string& config_text) {
    const auto outcome = cmd_check_instance(ConfigFile::parse(config_text));
    return py::make_tuple(outcome.all_passed, outcome.text);
  });

  m.def("plot",
        [](const std::vector<std::string>& csvs, const std::string& x_axis,
           const std::string& out_svg) { cmd_plot(csvs, x_axis, out_svg); },
        py::arg("csvs"), py::arg("x_axis"), py::arg("out_svg"));
}
