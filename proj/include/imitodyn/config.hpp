#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "imitodyn/engine.hpp"
#include "imitodyn/error.hpp"
#include "imitodyn/game.hpp"
#include "imitodyn/graph.hpp"
#include "imitodyn/imitation.hpp"

namespace imitodyn {

/// Invalid experiment config. `line` is 1-based, 0 when unknown.
class ConfigError : public InvalidArgument {
public:
  ConfigError(std::string message, std::size_t line = 0)
      : InvalidArgument(message), message_(std::move(message)), line_(line) {}
  std::size_t line() const { return line_; }
  const std::string& message() const { return message_; }

private:
  std::string message_;
  std::size_t line_;
};

struct TopologySpec {
  std::string type = "complete"; ///< complete | er | lattice | file
  std::size_t n = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::size_t side = 0;
  bool periodic = true;
  std::filesystem::path path;

  /// Node count for a sweep value (complete / er), or the fixed count otherwise.
  std::size_t nodes() const { return type == "lattice" ? side * side : n; }
  bool sweepable() const { return type == "complete" || type == "er"; }
};

struct OdeSpec {
  std::optional<double> T; ///< defaults to the simulation horizon
  double dt = 0.01;
  double tol = 1e-8;
  double max_T = 1e4;
};

struct LandscapeSpec {
  int grid = 1000;
  double refine_tol = 1e-10;
  int starts = 32;
  double step_tol = 1e-6;
};

struct AnalysisSpec {
  std::vector<double> gammas{0.05};
  std::vector<double> deltas{0.1};
  bool kurtz = true;
  std::optional<double> kurtz_T;
  std::vector<std::size_t> n_sweep;
  OdeSpec ode;
  LandscapeSpec landscape;
};

struct ExperimentConfig {
  std::string source = "<config>";
  std::shared_ptr<const Game> game;
  std::shared_ptr<const ImitationRule> rule;
  TopologySpec topology;
  std::optional<std::vector<double>> initial_x;
  std::optional<std::vector<std::int64_t>> initial_counts;
  SimConfig sim;
  std::size_t runs = 1;
  std::uint64_t base_seed = 0;
  AnalysisSpec analysis;
  std::filesystem::path output_dir = "out";

  /// Initial point on the continuous simplex (repaired within 1e-6).
  SimplexPoint initial_point() const;
  /// Initial type for population size n (rounded when given as shares).
  PopulationType initial_type(std::size_t n) const;
  /// Graph for population size n; nullptr selects the type-chain engine.
  std::shared_ptr<const Graph> graph(std::size_t n) const;
  RunSpec run_spec(std::size_t n) const;
  /// Sweep values, or the single configured size.
  std::vector<std::size_t> sizes() const;
};

/// Parses and cross-checks a config; throws ConfigError with a line anchor.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

Game game_from_json_text(const std::string& text);

} // namespace imitodyn
