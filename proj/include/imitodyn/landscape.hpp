#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "imitodyn/engine.hpp"
#include "imitodyn/game.hpp"
#include "imitodyn/simplex.hpp"

namespace imitodyn {

enum class CriticalClass { local_max, local_min, saddle_or_degenerate };

const char* to_string(CriticalClass c);

struct CriticalPoint {
  SimplexPoint location;
  double phi = 0.0;
  CriticalClass cls = CriticalClass::saddle_or_degenerate;
  bool is_ne = false;
  bool is_ess = false;
  bool on_boundary = false;
  bool isolated = true;
};

struct Landscape {
  std::vector<CriticalPoint> points;
  std::vector<std::string> warnings;
  /// Some critical set has positive length (e.g. a constant potential).
  bool non_isolated = false;
};

/// Two-action scanner on the reduced derivative g(s) = dPhi/dx_1 - dPhi/dx_2
/// along x = (s, 1 - s). Sign changes are bisected to refine_tol, tangential
/// zeros are found by minimizing |g|, and both vertices are always reported.
Landscape find_critical_points_2action(const Game& game, int grid = 1000,
                                       double refine_tol = 1e-10);

struct MultiStartOptions {
  int starts = 32;
  double step_tol = 1e-6;
  std::uint64_t seed = 0xC0FFEE;
  int max_iterations = 20000;
};

/// Multi-start projected-gradient ascent and descent on the simplex, each
/// followed by a Newton polish, plus Newton runs from every start so that
/// nondegenerate saddles are reached. Points are classified by the sign of
/// Phi(x + eps d) - Phi(x) over 2 m^2 feasible directions, eps = 10 step_tol.
Landscape find_critical_points_multi(const Game& game, const MultiStartOptions& opts = {});

/// Isolated local maxima that are NE. A vertex among them violates the
/// "pure types are not ESS" assumption and is kept with a warning.
Landscape ess_set(const Landscape& landscape);

/// NE test: every action in the support earns the maximal reward (within tol).
bool is_nash(const Game& game, const SimplexPoint& x, double tol = 1e-7);

enum class Norm { euclidean, sup };

/// Fraction of [0, t_end] the path spends within gamma of some target.
double time_near_set(const Trajectory& traj, const std::vector<SimplexPoint>& targets,
                     double gamma, Norm norm = Norm::euclidean);

struct ExitTime {
  double entry = 0.0; ///< first time within delta/2
  double exit = 0.0;  ///< first later time at distance >= delta
  double duration() const { return exit - entry; }
};

/// nullopt when the path never enters, or never leaves before its end.
std::optional<ExitTime> exit_time(const Trajectory& traj, const SimplexPoint& center,
                                  double delta, Norm norm = Norm::sup);

struct MetastabilityOptions {
  std::vector<double> gammas{0.05};
  std::vector<double> deltas{0.1};
  double drift_exclusion = 0.05;
  /// At most this many states per run enter the drift check.
  std::size_t drift_samples_per_run = 2000;
  Norm gamma_norm = Norm::euclidean;
  Norm delta_norm = Norm::sup;
};

struct RunMetrics {
  std::uint64_t seed = 0;
  std::optional<double> tau;
  double end_time = 0.0;
  std::vector<double> time_near_ess;                         ///< per gamma
  std::vector<std::vector<std::optional<ExitTime>>> exits;   ///< [point][delta]
  std::size_t drift_states = 0;
  std::size_t drift_violations = 0;
  std::optional<double> min_drift_ratio;
  bool full_support_start = true;
};

struct Quantiles {
  std::size_t count = 0;
  double q10 = 0.0, median = 0.0, q90 = 0.0;
};

Quantiles quantiles(std::vector<double> values);

struct MetastabilityReport {
  Landscape landscape;
  std::vector<RunMetrics> runs;
  double absorbed_fraction = 0.0;
  Quantiles tau;                                  ///< over absorbed runs
  std::vector<Quantiles> time_near_ess;           ///< per gamma
  std::vector<std::vector<Quantiles>> exit_durations; ///< [point][delta], uncensored
  std::vector<std::vector<double>> censored_fraction; ///< [point][delta]
  std::size_t drift_violations = 0;
  std::optional<double> min_drift_ratio;
  std::vector<std::string> warnings;
};

/// Per-run measurement and aggregation, split so ensembles can be streamed.
class MetastabilityAnalyzer {
public:
  MetastabilityAnalyzer(Landscape landscape, const Game& game, const ImitationRule& rule,
                        MetastabilityOptions opts = {});

  /// Pure; safe to call concurrently.
  RunMetrics measure(const Trajectory& traj) const;
  MetastabilityReport aggregate(std::vector<RunMetrics> runs) const;

  const std::vector<SimplexPoint>& ess_targets() const { return targets_; }
  const MetastabilityOptions& options() const { return opts_; }

private:
  Landscape landscape_;
  Landscape ess_;
  const Game& game_;
  const ImitationRule& rule_;
  MetastabilityOptions opts_;
  std::vector<SimplexPoint> targets_;
  std::vector<std::vector<double>> fixed_points_;
};

/// Per-run tau, time near the ESS set, exit times from every critical point
/// and drift-inequality checks, with quantiles across runs.
MetastabilityReport metastability_report(const std::vector<Trajectory>& runs,
                                         const Landscape& landscape, const Game& game,
                                         const ImitationRule& rule,
                                         const MetastabilityOptions& opts = {});

} // namespace imitodyn
