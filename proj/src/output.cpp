#include "imitodyn/output.hpp"

#include <charconv>
#include <fstream>

#include "imitodyn/error.hpp"

namespace imitodyn {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

void header(std::ostream& out, std::size_t m) {
  out << 't';
  for (std::size_t i = 0; i < m; ++i) out << ",x_" << i;
  out << '\n';
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

} // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const std::size_t m = traj.num_actions();
  header(out, m);
  std::vector<double> x(m);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    traj.shares_into(k, x);
    out << format_double(traj.time(k));
    for (double v : x) out << ',' << format_double(v);
    out << '\n';
  }
}

void write_trajectory_csv(std::ostream& out, const OdeTrajectory& traj) {
  header(out, traj.num_actions());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out << format_double(traj.time(k));
    for (double v : traj.state(k)) out << ',' << format_double(v);
    out << '\n';
  }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  auto out = open_out(path);
  write_trajectory_csv(out, traj);
}

void write_trajectory_csv(const std::filesystem::path& path, const OdeTrajectory& traj) {
  auto out = open_out(path);
  write_trajectory_csv(out, traj);
}

json run_summary(const Trajectory& traj) {
  std::vector<double> final_state(traj.num_actions());
  traj.shares_into(traj.size() - 1, final_state);
  return json{
      {"seed", traj.meta.seed},
      {"n", traj.meta.n},
      {"absorbed_at", optional_number(traj.absorbed_at)},
      {"absorbing_action", traj.absorbing_action ? json(*traj.absorbing_action) : json(nullptr)},
      {"final_state", final_state},
      {"event_count", traj.event_count},
  };
}

json to_json(const CriticalPoint& p) {
  return json{
      {"location", p.location.vec()}, {"phi", p.phi},        {"class", to_string(p.cls)},
      {"is_NE", p.is_ne},             {"is_ESS", p.is_ess},   {"on_boundary", p.on_boundary},
      {"isolated", p.isolated},
  };
}

json to_json(const Landscape& l) {
  json pts = json::array();
  for (const auto& p : l.points) pts.push_back(to_json(p));
  return json{{"critical_points", pts}, {"non_isolated", l.non_isolated}, {"warnings", l.warnings}};
}

json to_json(const Quantiles& q) {
  return json{{"count", q.count}, {"q10", q.q10}, {"median", q.median}, {"q90", q.q90}};
}

json to_json(const MetastabilityReport& r, const MetastabilityOptions& opts) {
  json points = json::array();
  for (const auto& p : r.landscape.points) points.push_back(to_json(p));

  json per_run = json::array();
  for (const auto& run : r.runs) {
    json exits = json::array();
    for (const auto& per_point : run.exits) {
      json row = json::array();
      for (const auto& e : per_point)
        row.push_back(e ? json{{"entry", e->entry}, {"exit", e->exit}, {"duration", e->duration()}}
                        : json("censored"));
      exits.push_back(row);
    }
    per_run.push_back(json{
        {"seed", run.seed},
        {"tau", run.tau ? json(*run.tau) : json("censored")},
        {"end_time", run.end_time},
        {"time_near_ess", run.time_near_ess},
        {"exit_times", exits},
        {"drift_states", run.drift_states},
        {"drift_violations", run.drift_violations},
        {"min_drift_ratio", optional_number(run.min_drift_ratio)},
    });
  }

  json tg = json::array();
  for (const auto& q : r.time_near_ess) tg.push_back(to_json(q));
  json exits = json::array();
  for (std::size_t p = 0; p < r.exit_durations.size(); ++p) {
    json row = json::array();
    for (std::size_t d = 0; d < r.exit_durations[p].size(); ++d) {
      auto q = to_json(r.exit_durations[p][d]);
      q["censored_fraction"] = r.censored_fraction[p][d];
      row.push_back(q);
    }
    exits.push_back(row);
  }
  return json{
      {"critical_points", points},
      {"per_run", per_run},
      {"aggregates",
       {{"runs", r.runs.size()},
        {"absorbed_fraction", r.absorbed_fraction},
        {"tau", to_json(r.tau)},
        {"time_near_ess", tg},
        {"exit_durations", exits},
        {"drift_violations", r.drift_violations},
        {"observed_min_drift_ratio", optional_number(r.min_drift_ratio)}}},
      {"warnings", r.warnings},
      {"metadata",
       {{"gammas", opts.gammas},
        {"deltas", opts.deltas},
        {"gamma_norm", opts.gamma_norm == Norm::euclidean ? "euclidean" : "sup"},
        {"delta_norm", opts.delta_norm == Norm::sup ? "sup" : "euclidean"},
        {"drift_exclusion", opts.drift_exclusion},
        {"note", "time-near-ESS distances use the Euclidean norm by default; the drift ratio "
                 "is an observed minimum, not a certified margin"}}},
  };
}

void write_json(const std::filesystem::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

} // namespace imitodyn
