#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include <json.hpp>

#include "imitodyn/engine.hpp"
#include "imitodyn/landscape.hpp"
#include "imitodyn/meanfield.hpp"

namespace imitodyn {

/// Shortest round-trip decimal form of v.
std::string format_double(double v);

/// Header `t,x_0,...,x_{m-1}`, one row per recorded point.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void write_trajectory_csv(std::ostream& out, const OdeTrajectory& traj);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);
void write_trajectory_csv(const std::filesystem::path& path, const OdeTrajectory& traj);

/// { seed, n, absorbed_at|null, absorbing_action|null, final_state, event_count }
nlohmann::json run_summary(const Trajectory& traj);
nlohmann::json to_json(const CriticalPoint& p);
nlohmann::json to_json(const Landscape& l);
nlohmann::json to_json(const Quantiles& q);
/// { critical_points, per_run, aggregates, warnings, metadata }
nlohmann::json to_json(const MetastabilityReport& r, const MetastabilityOptions& opts);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

} // namespace imitodyn
