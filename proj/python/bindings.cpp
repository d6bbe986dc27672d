#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "imitodyn/commands.hpp"
#include "imitodyn/engine.hpp"
#include "imitodyn/error.hpp"
#include "imitodyn/game.hpp"
#include "imitodyn/graph.hpp"
#include "imitodyn/imitation.hpp"
#include "imitodyn/landscape.hpp"
#include "imitodyn/meanfield.hpp"

namespace py = pybind11;
using namespace imitodyn;

namespace {

py::array_t<double> to_array(const std::vector<double>& v, std::size_t rows, std::size_t cols) {
  py::array_t<double> a({rows, cols});
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

// times and shares of a stochastic path as numpy arrays
py::tuple path_arrays(const Trajectory& t) {
  py::array_t<double> times(std::vector<py::ssize_t>{static_cast<py::ssize_t>(t.size())});
  py::array_t<double> x({t.size(), t.num_actions()});
  auto tm = times.mutable_unchecked<1>();
  auto xm = x.mutable_unchecked<2>();
  for (std::size_t k = 0; k < t.size(); ++k) {
    tm(k) = t.time(k);
    for (std::size_t i = 0; i < t.num_actions(); ++i) xm(k, i) = t.share(k, i);
  }
  return py::make_tuple(times, x);
}

PopulationType as_type(const std::vector<std::int64_t>& counts) { return PopulationType(counts); }

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stochastic imitation dynamics on potential population games";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<NoPotential>(m, "NoPotential", PyExc_ValueError);
  py::register_exception<SimplexViolation>(m, "SimplexViolation", PyExc_RuntimeError);

  py::class_<Game, std::shared_ptr<Game>>(m, "Game")
      .def_property_readonly("num_actions", &Game::num_actions)
      .def_property_readonly("id", &Game::id)
      .def_property_readonly("has_potential", &Game::has_potential)
      .def("rewards", [](const Game& g, std::vector<double> x) { return g.rewards(x); })
      .def("potential", [](const Game& g, std::vector<double> x) { return g.potential(x); })
      .def("potential_gradient", [](const Game& g, std::vector<double> x) { return g.potential_gradient(x); });

  m.def("example4_game", [] { return std::make_shared<Game>(example4_game()); });
  m.def(
      "congestion_game",
      [](const std::vector<std::vector<double>>& polys) {
        std::vector<Polynomial> p;
        for (const auto& c : polys) p.emplace_back(c);
        return std::make_shared<Game>(make_congestion_game(std::move(p)));
      },
      py::arg("polynomials"), "r_i(x) = P_i(x_i); coefficients in ascending degree.");
  m.def("matrix_game", [](std::vector<std::vector<double>> A) { return std::make_shared<Game>(make_matrix_game(A)); });
  m.def(
      "check_potential_consistency",
      [](const Game& g, int samples, double tol) {
        auto r = check_potential_consistency(g, samples, tol);
        return py::dict(py::arg("max_violation") = r.max_violation, py::arg("pass") = r.pass);
      },
      py::arg("game"), py::arg("num_samples") = 100, py::arg("tol") = 1e-6);
  m.def("reward_bounds", [](const Game& g, int grid) {
    auto b = reward_bounds(g, grid);
    return py::make_tuple(b.lo, b.hi);
  }, py::arg("game"), py::arg("grid_resolution") = 1000);

  py::class_<ImitationRule, std::shared_ptr<ImitationRule>>(m, "ImitationRule")
      .def_property_readonly("num_actions", &ImitationRule::num_actions)
      .def_property_readonly("id", &ImitationRule::id)
      .def("copy_prob", [](const ImitationRule& r, std::size_t i, std::size_t j, std::vector<double> rewards) {
        return copy_prob(r, i, j, rewards);
      });
  m.def("arctan_rule", [](std::size_t m_, double K) { return std::make_shared<ImitationRule>(arctan_rule(m_, K)); },
        py::arg("m"), py::arg("K") = 1.0);
  m.def("arctan_rule_matrix", [](std::vector<std::vector<double>> K) {
    return std::make_shared<ImitationRule>(arctan_rule(std::move(K)));
  });
  m.def(
      "replicator_rule",
      [](std::size_t m_, double lo, double hi, double eps) {
        return std::make_shared<ImitationRule>(replicator_rule(m_, lo, hi, eps));
      },
      py::arg("m"), py::arg("lo"), py::arg("hi"), py::arg("eps_margin") = 1e-6);

  py::class_<Graph, std::shared_ptr<Graph>>(m, "Graph")
      .def_property_readonly("n", &Graph::n)
      .def_property_readonly("num_edges", &Graph::num_edges)
      .def("degree", &Graph::degree);
  m.def("complete_graph", [](std::size_t n) { return std::make_shared<Graph>(complete(n)); });
  m.def("erdos_renyi", [](std::size_t n, double p, std::uint64_t seed) {
    return std::make_shared<Graph>(erdos_renyi(n, p, seed));
  }, py::arg("n"), py::arg("p"), py::arg("seed"));
  m.def("square_lattice", [](std::size_t side, bool periodic) {
    return std::make_shared<Graph>(square_lattice(side, periodic));
  }, py::arg("side"), py::arg("periodic") = true);

  m.def(
      "transition_rates",
      [](const Game& g, const ImitationRule& r, std::vector<std::int64_t> counts, double lambda) {
        const auto mm = g.num_actions();
        return to_array(transition_rates(g, r, as_type(counts), lambda), mm, mm);
      },
      py::arg("game"), py::arg("rule"), py::arg("counts"), py::arg("lam") = 1.0);
  m.def(
      "drift_rates",
      [](const Game& g, const ImitationRule& r, std::vector<std::int64_t> counts, double lambda) {
        auto d = potential_drift_rates(g, r, as_type(counts), lambda);
        return py::make_tuple(d.q_plus, d.q_minus);
      },
      py::arg("game"), py::arg("rule"), py::arg("counts"), py::arg("lam") = 1.0);

  m.def(
      "simulate",
      [](std::shared_ptr<Game> g, std::shared_ptr<ImitationRule> r, std::vector<std::int64_t> counts, double horizon,
         std::uint64_t seed, double lambda, std::shared_ptr<Graph> graph, double record_stride) {
        SimConfig cfg;
        cfg.horizon = horizon;
        cfg.lambda = lambda;
        cfg.record_stride = record_stride;
        RunSpec spec{g, r, graph, as_type(counts), cfg};
        Trajectory t = [&] {
          py::gil_scoped_release release;
          return run_once(spec, seed);
        }();
        auto arrays = path_arrays(t);
        py::dict out;
        out["t"] = arrays[0];
        out["x"] = arrays[1];
        out["absorbed_at"] = t.absorbed_at ? py::cast(*t.absorbed_at) : py::none();
        out["absorbing_action"] = t.absorbing_action ? py::cast(*t.absorbing_action) : py::none();
        out["event_count"] = t.event_count;
        return out;
      },
      py::arg("game"), py::arg("rule"), py::arg("counts"), py::arg("horizon"), py::arg("seed"),
      py::arg("lam") = 1.0, py::arg("graph") = nullptr, py::arg("record_stride") = 0.1,
      "One run. With graph=None (or a complete graph) the exact type chain is used.");

  m.def("mean_field_rhs", [](const Game& g, const ImitationRule& r, std::vector<double> x, double lambda) {
    return mean_field_rhs(g, r, x, lambda);
  }, py::arg("game"), py::arg("rule"), py::arg("x"), py::arg("lam") = 1.0);
  m.def(
      "integrate",
      [](const Game& g, const ImitationRule& r, std::vector<double> x0, double T, double dt, double lambda) {
        OdeOptions o;
        o.lambda = lambda;
        auto t = integrate(g, r, SimplexPoint(std::move(x0), 1e-9), T, dt, o);
        std::vector<double> flat;
        for (std::size_t k = 0; k < t.size(); ++k) {
          auto s = t.state(k);
          flat.insert(flat.end(), s.begin(), s.end());
        }
        py::array_t<double> times(std::vector<py::ssize_t>{static_cast<py::ssize_t>(t.size())});
        std::copy(t.times().begin(), t.times().end(), times.mutable_data());
        return py::make_tuple(times, to_array(flat, t.size(), t.num_actions()));
      },
      py::arg("game"), py::arg("rule"), py::arg("x0"), py::arg("T"), py::arg("dt") = 0.01, py::arg("lam") = 1.0);
  m.def(
      "find_limit",
      [](const Game& g, const ImitationRule& r, std::vector<double> x0, double tol, double max_T) {
        auto l = find_limit(g, r, SimplexPoint(std::move(x0), 1e-9), tol, max_T);
        return py::dict(py::arg("point") = l.point.vec(), py::arg("converged") = l.converged,
                        py::arg("time") = l.time, py::arg("residual") = l.residual);
      },
      py::arg("game"), py::arg("rule"), py::arg("x0"), py::arg("tol") = 1e-8, py::arg("max_T") = 1e4);

  auto point_dicts = [](const Landscape& l) {
    py::list out;
    for (const auto& p : l.points)
      out.append(py::dict(py::arg("location") = p.location.vec(), py::arg("phi") = p.phi,
                          py::arg("cls") = to_string(p.cls), py::arg("is_ne") = p.is_ne,
                          py::arg("is_ess") = p.is_ess, py::arg("on_boundary") = p.on_boundary));
    return out;
  };
  m.def(
      "critical_points",
      [point_dicts](const Game& g, int grid, double refine_tol, int starts, double step_tol, std::uint64_t seed) {
        Landscape l;
        if (g.num_actions() == 2) {
          l = find_critical_points_2action(g, grid, refine_tol);
        } else {
          MultiStartOptions o;
          o.starts = starts;
          o.step_tol = step_tol;
          o.seed = seed;
          l = find_critical_points_multi(g, o);
        }
        return point_dicts(l);
      },
      py::arg("game"), py::arg("grid") = 1000, py::arg("refine_tol") = 1e-10, py::arg("starts") = 32,
      py::arg("step_tol") = 1e-6, py::arg("seed") = 0xC0FFEE,
      "Classified critical points of the potential (scanner for m = 2, multi-start otherwise).");

  auto command = [](int (*fn)(const CommandOptions&)) {
    return [fn](std::filesystem::path config, std::optional<std::filesystem::path> out,
                std::optional<std::uint64_t> seed, std::optional<std::size_t> runs) {
      CommandOptions o;
      o.config = std::move(config);
      o.out = std::move(out);
      o.seed = seed;
      o.runs = runs;
      py::gil_scoped_release release;
      return fn(o);
    };
  };
  for (auto [name, fn] : {std::pair{"cmd_simulate", &cmd_simulate}, std::pair{"cmd_ode", &cmd_ode},
                          std::pair{"cmd_landscape", &cmd_landscape},
                          std::pair{"cmd_metastability", &cmd_metastability},
                          std::pair{"cmd_compare", &cmd_compare}})
    m.def(name, command(fn), py::arg("config"), py::arg("out") = py::none(), py::arg("seed") = py::none(),
          py::arg("runs") = py::none());
}
