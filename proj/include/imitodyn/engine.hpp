#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "imitodyn/game.hpp"
#include "imitodyn/graph.hpp"
#include "imitodyn/imitation.hpp"
#include "imitodyn/simplex.hpp"

namespace imitodyn {

struct SimConfig {
  double lambda = 1.0;        ///< per-node clock rate
  double horizon = 100.0;     ///< maximal simulated time
  std::uint64_t seed = 0;
  double record_stride = 0.1; ///< sampling interval when not recording every jump
  bool stop_on_absorption = true;
  /// Record every jump. Default for the complete-graph engine; the network
  /// engine samples on record_stride unless this is set.
  std::optional<bool> record_jumps;
  /// Complete engine: after this many recorded jumps, fall back to the stride.
  std::size_t max_recorded_jumps = 10'000'000;

  void validate() const;
};

struct TrajectoryMeta {
  std::uint64_t seed = 0;
  std::int64_t n = 0;
  double lambda = 1.0;
  std::string rule_id;
  std::string game_id;
  std::string topology_id;
};

/// Piecewise-constant sample path: state k holds on [times[k], times[k+1]).
class Trajectory {
public:
  explicit Trajectory(std::size_t num_actions) : m_(num_actions) {}

  void push(double t, std::span<const std::int64_t> counts);

  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  std::size_t num_actions() const { return m_; }
  double time(std::size_t k) const { return times_[k]; }
  const std::vector<double>& times() const { return times_; }
  std::span<const std::int64_t> counts(std::size_t k) const {
    return {counts_.data() + k * m_, m_};
  }
  PopulationType state(std::size_t k) const;
  double share(std::size_t k, Action i) const {
    return static_cast<double>(counts_[k * m_ + i]) / static_cast<double>(meta.n);
  }
  void shares_into(std::size_t k, std::span<double> out) const;
  /// State holding at time t (the last record with time <= t).
  std::size_t index_at(double t) const;
  double end_time() const { return times_.back(); }

  std::optional<double> absorbed_at;
  std::optional<Action> absorbing_action;
  std::uint64_t event_count = 0; ///< state-changing jumps
  TrajectoryMeta meta;

private:
  std::size_t m_;
  std::vector<double> times_;
  std::vector<std::int64_t> counts_;
};

struct DriftRates {
  double q_plus = 0.0;
  double q_minus = 0.0;
};

/// Row-major m x m matrix of jump rates i -> j: n lambda x_i x_j f_ij(x).
std::vector<double> transition_rates(const Game& game, const ImitationRule& rule,
                                     const PopulationType& x, double lambda);

/// Exact Gillespie simulation of the type chain on the complete graph with
/// self-loops.
Trajectory simulate_complete(const Game& game, const ImitationRule& rule,
                             const PopulationType& x0, const SimConfig& cfg);

/// Per-node-clock simulation on an arbitrary graph. Rewards are the
/// population-game rewards of the current global type.
Trajectory simulate_network(const Graph& graph, const Game& game, const ImitationRule& rule,
                            Configuration y0, const SimConfig& cfg);

/// Rates at which the potential goes up (q_plus) or down (q_minus); pairs
/// with equal rewards count in neither.
DriftRates potential_drift_rates(const Game& game, const ImitationRule& rule,
                                 const PopulationType& x, double lambda);

/// Random configuration with exactly the given counts.
Configuration random_configuration(const PopulationType& x, Rng& rng);

/// Everything one run needs except its seed. A null graph selects the
/// type-chain engine.
struct RunSpec {
  std::shared_ptr<const Game> game;
  std::shared_ptr<const ImitationRule> rule;
  std::shared_ptr<const Graph> graph;
  PopulationType initial;
  SimConfig cfg;
};

/// One run with the given seed. Network runs draw their initial
/// configuration from a stream derived from the seed.
Trajectory run_once(const RunSpec& spec, std::uint64_t seed);

/// Worker count: IMITODYN_THREADS if set, else hardware concurrency.
std::size_t default_workers();

/// Runs the ensemble and hands each trajectory to `fn(index, trajectory)` on
/// the worker that produced it; `fn` must be safe to call concurrently for
/// distinct indices.
void ensemble_for_each(const RunSpec& spec, std::size_t num_runs, std::uint64_t base_seed,
                       const std::function<void(std::size_t, Trajectory&&)>& fn,
                       std::size_t workers = 0);

/// Independent runs seeded with derive_seed(base_seed, index); output order
/// follows run index regardless of scheduling.
std::vector<Trajectory> ensemble(const RunSpec& spec, std::size_t num_runs,
                                 std::uint64_t base_seed, std::size_t workers = 0);

} // namespace imitodyn
