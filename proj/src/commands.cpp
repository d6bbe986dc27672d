#include "imitodyn/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "imitodyn/config.hpp"
#include "imitodyn/landscape.hpp"
#include "imitodyn/meanfield.hpp"
#include "imitodyn/output.hpp"

namespace imitodyn {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Context {
  ExperimentConfig cfg;
  fs::path out;
  std::ostream& log;
};

ExperimentConfig load(const CommandOptions& o) {
  auto cfg = load_config(o.config);
  if (o.seed) cfg.base_seed = *o.seed;
  if (o.runs) {
    if (*o.runs < 1) throw ConfigError("--runs must be >= 1");
    cfg.runs = *o.runs;
  }
  if (o.out) cfg.output_dir = *o.out;
  return cfg;
}

template <class Body>
int guarded(const CommandOptions& o, Body body) {
  try {
    auto cfg = load(o);
    Context ctx{std::move(cfg), fs::path(), *o.log};
    ctx.out = ctx.cfg.output_dir;
    return body(ctx);
  } catch (const ConfigError& e) {
    *o.err << o.config.string();
    if (e.line() > 0) *o.err << ':' << e.line();
    *o.err << ": error: " << e.message() << '\n';
    return 2;
  } catch (const std::exception& e) {
    *o.err << "error: " << e.what() << '\n';
    return 1;
  }
}

std::string run_name(std::size_t k, const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "run_%03zu.%s", k, ext);
  return buf;
}

void require_potential(const ExperimentConfig& cfg, const char* what) {
  if (!cfg.game->has_potential()) throw ConfigError(std::string(what) + " requires a potential");
}

Landscape landscape_for(const ExperimentConfig& cfg) {
  const auto& ls = cfg.analysis.landscape;
  if (cfg.game->num_actions() == 2) return find_critical_points_2action(*cfg.game, ls.grid, ls.refine_tol);
  MultiStartOptions mo;
  mo.starts = ls.starts;
  mo.step_tol = ls.step_tol;
  mo.seed = derive_seed(cfg.base_seed, 0x1A);
  return find_critical_points_multi(*cfg.game, mo);
}

json config_echo(const ExperimentConfig& cfg) {
  return json{{"config", cfg.source},
              {"game", cfg.game->id()},
              {"rule", cfg.rule->id()},
              {"topology", cfg.topology.type},
              {"base_seed", cfg.base_seed},
              {"runs", cfg.runs},
              {"lambda", cfg.sim.lambda},
              {"horizon", cfg.sim.horizon}};
}

bool nonincreasing(const std::vector<double>& v) {
  return std::is_sorted(v.rbegin(), v.rend());
}

} // namespace

int cmd_simulate(const CommandOptions& o) {
  return guarded(o, [](Context& ctx) {
    const auto& cfg = ctx.cfg;
    const std::size_t n = cfg.topology.nodes();
    const auto spec = cfg.run_spec(n);
    fs::create_directories(ctx.out);
    std::vector<json> summaries(cfg.runs);
    ensemble_for_each(spec, cfg.runs, cfg.base_seed, [&](std::size_t k, Trajectory&& t) {
      write_trajectory_csv(ctx.out / run_name(k, "csv"), t);
      summaries[k] = run_summary(t);
    });
    json summary = config_echo(cfg);
    summary["per_run"] = summaries;
    write_json(ctx.out / "summary.json", summary);
    ctx.log << "wrote " << cfg.runs << " trajectories to " << ctx.out.string() << '\n';
    return 0;
  });
}

int cmd_ode(const CommandOptions& o) {
  return guarded(o, [](Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto x0 = cfg.initial_point();
    const auto& ode = cfg.analysis.ode;
    OdeOptions opts;
    opts.lambda = cfg.sim.lambda;
    const double T = ode.T.value_or(cfg.sim.horizon);
    auto traj = integrate(*cfg.game, *cfg.rule, x0, T, ode.dt, opts);
    auto limit = find_limit(*cfg.game, *cfg.rule, x0, ode.tol, ode.max_T, ode.dt, opts);
    fs::create_directories(ctx.out);
    write_trajectory_csv(ctx.out / "ode.csv", traj);
    write_json(ctx.out / "limit.json", json{{"converged", limit.converged},
                                            {"point", limit.point.vec()},
                                            {"time", limit.time},
                                            {"residual", limit.residual},
                                            {"guard_activations", traj.guard_activations}});
    ctx.log << "limit " << (limit.converged ? "converged" : "not converged") << " at x_0 = "
            << format_double(limit.point[0]) << '\n';
    return 0;
  });
}

int cmd_landscape(const CommandOptions& o) {
  return guarded(o, [](Context& ctx) {
    require_potential(ctx.cfg, "landscape");
    auto land = landscape_for(ctx.cfg);
    auto ess = ess_set(land);
    json j = to_json(land);
    j["method"] = ctx.cfg.game->num_actions() == 2 ? "scan_2action" : "multi_start";
    json e = json::array();
    for (const auto& p : ess.points) e.push_back(to_json(p));
    j["ess"] = e;
    for (const auto& w : ess.warnings) j["warnings"].push_back(w);
    fs::create_directories(ctx.out);
    write_json(ctx.out / "landscape.json", j);
    ctx.log << land.points.size() << " critical points, " << ess.points.size() << " ESS\n";
    return 0;
  });
}

int cmd_metastability(const CommandOptions& o) {
  return guarded(o, [](Context& ctx) {
    const auto& cfg = ctx.cfg;
    require_potential(cfg, "metastability");
    for (auto n : cfg.sizes()) {
      const auto t = cfg.initial_type(n);
      if (support(t).size() != cfg.game->num_actions())
        throw ConfigError("initial condition must have full support and lie in the interior "
                          "(violated at n = " + std::to_string(n) + ")");
    }
    auto land = landscape_for(cfg);
    MetastabilityOptions mo;
    mo.gammas = cfg.analysis.gammas;
    mo.deltas = cfg.analysis.deltas;
    MetastabilityAnalyzer analyzer(land, *cfg.game, *cfg.rule, mo);

    json sweep = json::array();
    std::vector<double> ns, absorbed;
    std::vector<std::vector<std::vector<double>>> censored(
        land.points.size(), std::vector<std::vector<double>>(mo.deltas.size()));
    for (auto n : cfg.sizes()) {
      std::vector<RunMetrics> metrics(cfg.runs);
      ensemble_for_each(cfg.run_spec(n), cfg.runs, derive_seed(cfg.base_seed, n),
                        [&](std::size_t k, Trajectory&& t) { metrics[k] = analyzer.measure(t); });
      auto rep = analyzer.aggregate(std::move(metrics));
      ns.push_back(static_cast<double>(n));
      absorbed.push_back(rep.absorbed_fraction);
      for (std::size_t p = 0; p < land.points.size(); ++p)
        for (std::size_t d = 0; d < mo.deltas.size(); ++d)
          censored[p][d].push_back(rep.censored_fraction[p][d]);
      json entry = to_json(rep, mo);
      entry["n"] = n;
      sweep.push_back(entry);
      ctx.log << "n = " << n << ": absorbed fraction " << format_double(rep.absorbed_fraction) << '\n';
    }
    json trend{{"n", ns},
               {"absorbed_fraction", absorbed},
               {"absorbed_fraction_nonincreasing", nonincreasing(absorbed)}};
    json cens = json::array();
    bool ess_monotone = true;
    for (std::size_t p = 0; p < land.points.size(); ++p)
      for (std::size_t d = 0; d < mo.deltas.size(); ++d) {
        auto v = censored[p][d];
        const bool up = std::is_sorted(v.begin(), v.end());
        if (land.points[p].is_ess) ess_monotone = ess_monotone && up;
        cens.push_back(json{{"point", land.points[p].location.vec()},
                            {"is_ESS", land.points[p].is_ess},
                            {"delta", mo.deltas[d]},
                            {"censored_fraction", v},
                            {"nondecreasing", up}});
      }
    trend["exit_censoring"] = cens;
    trend["ess_censoring_nondecreasing"] = ess_monotone;
    trend["single_size"] = ns.size() < 2;
    json out = config_echo(cfg);
    out["landscape"] = to_json(land);
    out["sweep"] = sweep;
    out["trend"] = trend;
    fs::create_directories(ctx.out);
    write_json(ctx.out / "metastability.json", out);
    return 0;
  });
}

int cmd_compare(const CommandOptions& o) {
  return guarded(o, [](Context& ctx) {
    const auto& cfg = ctx.cfg;
    const double T = cfg.analysis.kurtz_T.value_or(cfg.sim.horizon);
    if (T > cfg.sim.horizon) throw ConfigError("kurtz_T exceeds the simulation horizon");
    OdeOptions opts;
    opts.lambda = cfg.sim.lambda;

    fs::create_directories(ctx.out);
    std::ofstream csv(ctx.out / "compare.csv", std::ios::binary);
    csv << "n,run,seed,deviation\n";
    json table = json::array();
    for (auto n : cfg.sizes()) {
      const auto spec = cfg.run_spec(n);
      auto ode = integrate(*cfg.game, *cfg.rule, spec.initial.point(), T, cfg.analysis.ode.dt, opts);
      std::vector<double> dev(cfg.runs);
      std::vector<std::uint64_t> seeds(cfg.runs);
      ensemble_for_each(spec, cfg.runs, derive_seed(cfg.base_seed, n), [&](std::size_t k, Trajectory&& t) {
        dev[k] = kurtz_deviation(t, ode, T);
        seeds[k] = t.meta.seed;
      });
      for (std::size_t k = 0; k < cfg.runs; ++k)
        csv << n << ',' << k << ',' << seeds[k] << ',' << format_double(dev[k]) << '\n';
      auto q = quantiles(dev);
      json row = to_json(q);
      row["n"] = n;
      table.push_back(row);
      ctx.log << "n = " << n << ": median deviation " << format_double(q.median) << '\n';
    }
    json out = config_echo(cfg);
    out["T"] = T;
    out["deviation_vs_n"] = table;
    write_json(ctx.out / "compare.json", out);
    return 0;
  });
}

} // namespace imitodyn
