#include "imitodyn/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>

#include "imitodyn/error.hpp"

namespace imitodyn {

void SimConfig::validate() const {
  if (!(lambda > 0.0 && std::isfinite(lambda))) throw InvalidArgument("lambda must be > 0");
  if (!(horizon > 0.0 && std::isfinite(horizon))) throw InvalidArgument("horizon must be > 0");
  if (!(record_stride > 0.0 && std::isfinite(record_stride)))
    throw InvalidArgument("record_stride must be > 0");
}

void Trajectory::push(double t, std::span<const std::int64_t> counts) {
  times_.push_back(t);
  counts_.insert(counts_.end(), counts.begin(), counts.end());
}

PopulationType Trajectory::state(std::size_t k) const {
  auto c = counts(k);
  return PopulationType(std::vector<std::int64_t>(c.begin(), c.end()));
}

void Trajectory::shares_into(std::size_t k, std::span<double> out) const {
  const double n = static_cast<double>(meta.n);
  for (std::size_t i = 0; i < m_; ++i) out[i] = static_cast<double>(counts_[k * m_ + i]) / n;
}

std::size_t Trajectory::index_at(double t) const {
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  return it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
}

namespace {

void check_compatible(const Game& game, const ImitationRule& rule, std::size_t m) {
  if (game.num_actions() != m || rule.num_actions() != m)
    throw InvalidArgument("game, rule and state disagree on the number of actions");
}

/// Emits stride samples strictly before `until`; the state is unchanged
/// between the previous event and `until`.
class StrideRecorder {
public:
  StrideRecorder(double stride, double t0) : stride_(stride) { reset(t0); }

  void reset(double t) { k_ = static_cast<std::uint64_t>(std::floor(t / stride_)) + 1; }

  void emit_before(double until, Trajectory& traj, std::span<const std::int64_t> counts) {
    for (double s = k_ * stride_; s < until; s = (++k_) * stride_)
      if (s > traj.end_time()) traj.push(s, counts);
  }

private:
  double stride_;
  std::uint64_t k_ = 1;
};

void finish(Trajectory& traj, std::span<const std::int64_t> counts, double t, bool absorbed,
            const SimConfig& cfg) {
  if (absorbed) {
    traj.absorbed_at = t;
    traj.absorbing_action = static_cast<Action>(
        std::max_element(counts.begin(), counts.end()) - counts.begin());
    if (traj.end_time() < t) traj.push(t, counts);
    if (!cfg.stop_on_absorption && cfg.horizon > t) traj.push(cfg.horizon, counts);
  } else if (traj.end_time() < cfg.horizon) {
    traj.push(cfg.horizon, counts);
  }
}

} // namespace

std::vector<double> transition_rates(const Game& game, const ImitationRule& rule,
                                     const PopulationType& x, double lambda) {
  const std::size_t m = x.num_actions();
  check_compatible(game, rule, m);
  auto shares = x.shares();
  auto r = game.rewards(shares);
  std::vector<double> rates(m * m, 0.0);
  const double scale = static_cast<double>(x.n()) * lambda;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j && x.count(i) > 0 && x.count(j) > 0)
        rates[i * m + j] = scale * shares[i] * shares[j] * rule.prob(i, j, r);
  return rates;
}

Trajectory simulate_complete(const Game& game, const ImitationRule& rule,
                             const PopulationType& x0, const SimConfig& cfg) {
  cfg.validate();
  const std::size_t m = x0.num_actions();
  check_compatible(game, rule, m);
  const std::int64_t n = x0.n();

  Trajectory traj(m);
  traj.meta = {cfg.seed, n, cfg.lambda, rule.id(), game.id(), "complete(" + std::to_string(n) + ")"};
  std::vector<std::int64_t> counts(x0.counts().begin(), x0.counts().end());
  traj.push(0.0, counts);
  if (x0.is_vertex()) {
    finish(traj, counts, 0.0, true, cfg);
    return traj;
  }

  Rng rng(cfg.seed);
  const bool every_jump = cfg.record_jumps.value_or(true);
  bool striding = !every_jump;
  StrideRecorder stride(cfg.record_stride, 0.0);
  std::size_t recorded = 0;

  const double nd = static_cast<double>(n);
  const double bound = nd * cfg.lambda;
  std::vector<double> x(m), r(m), rates(m * m);
  double t = 0.0;
  bool absorbed = false;
  for (;;) {
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) x[i] = static_cast<double>(counts[i]) / nd;
    game.rewards(x, r);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        double rate = 0.0;
        if (i != j && counts[i] > 0 && counts[j] > 0)
          rate = bound * x[i] * x[j] * rule.prob(i, j, r);
        rates[i * m + j] = rate;
        total += rate;
      }
    if (!(total <= bound * (1.0 + 1e-12)))
      throw std::logic_error("total jump rate exceeds n * lambda; copy probabilities must be < 1");
    if (!(total > 0.0))
      throw std::logic_error("non-absorbing state with zero jump rate; copy probabilities must be > 0");

    const double t_next = t + rng.exponential(total);
    if (t_next > cfg.horizon) break;
    if (striding) stride.emit_before(t_next, traj, counts);
    t = t_next;

    double u = rng.uniform() * total;
    std::size_t pick = m * m;
    for (std::size_t k = 0; k < m * m; ++k) {
      if (rates[k] <= 0.0) continue;
      pick = k;
      if (u < rates[k]) break;
      u -= rates[k];
    }
    --counts[pick / m];
    ++counts[pick % m];
    ++traj.event_count;

    if (counts[pick % m] == n) {
      absorbed = true;
      break;
    }
    if (!striding) {
      traj.push(t, counts);
      if (++recorded >= cfg.max_recorded_jumps) {
        striding = true;
        stride.reset(t);
      }
    }
  }
  if (striding) stride.emit_before(absorbed ? t : cfg.horizon, traj, counts);
  finish(traj, counts, t, absorbed, cfg);
  return traj;
}

Trajectory simulate_network(const Graph& graph, const Game& game, const ImitationRule& rule,
                            Configuration y0, const SimConfig& cfg) {
  cfg.validate();
  if (graph.n() != y0.n()) throw InvalidArgument("graph size and configuration length differ");
  const std::size_t m = y0.num_actions();
  check_compatible(game, rule, m);
  const std::size_t n = y0.n();
  const auto ni = static_cast<std::int64_t>(n);

  Trajectory traj(m);
  traj.meta = {cfg.seed, ni, cfg.lambda, rule.id(), game.id(), graph.id()};
  auto type = y0.type();
  std::vector<std::int64_t> counts(type.counts().begin(), type.counts().end());
  traj.push(0.0, counts);
  if (type.is_vertex()) {
    finish(traj, counts, 0.0, true, cfg);
    return traj;
  }

  Rng rng(cfg.seed);
  const bool every_jump = cfg.record_jumps.value_or(false);
  StrideRecorder stride(cfg.record_stride, 0.0);
  const double clock = static_cast<double>(n) * cfg.lambda;
  std::vector<double> x(m), r(m);
  bool stale = true;
  double t = 0.0;
  bool absorbed = false;
  for (;;) {
    const double t_next = t + rng.exponential(clock);
    if (t_next > cfg.horizon) break;
    t = t_next;
    const auto u = static_cast<std::size_t>(rng.below(n));
    const std::size_t v = graph.sample_neighbor(u, rng);
    const Action i = y0[u];
    const Action j = y0[v];
    if (i == j) continue;
    if (stale) {
      for (std::size_t a = 0; a < m; ++a) x[a] = static_cast<double>(counts[a]) / static_cast<double>(n);
      game.rewards(x, r);
      stale = false;
    }
    if (!(rng.uniform() < rule.prob(i, j, r))) continue;

    if (!every_jump) stride.emit_before(t, traj, counts);
    y0.set(u, j);
    --counts[i];
    ++counts[j];
    stale = true;
    ++traj.event_count;
    if (counts[j] == ni) {
      absorbed = true;
      break;
    }
    if (every_jump) traj.push(t, counts);
  }
  if (!every_jump) stride.emit_before(absorbed ? t : cfg.horizon, traj, counts);
  finish(traj, counts, t, absorbed, cfg);
  return traj;
}

DriftRates potential_drift_rates(const Game& game, const ImitationRule& rule,
                                 const PopulationType& x, double lambda) {
  if (!game.has_potential()) throw NoPotential();
  const std::size_t m = x.num_actions();
  check_compatible(game, rule, m);
  auto shares = x.shares();
  auto r = game.rewards(shares);
  const double scale = static_cast<double>(x.n()) * lambda;
  DriftRates q;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j || x.count(i) == 0 || x.count(j) == 0) continue;
      const double rate = scale * shares[i] * shares[j] * rule.prob(i, j, r);
      if (r[j] > r[i]) q.q_plus += rate;
      else if (r[j] < r[i]) q.q_minus += rate;
    }
  return q;
}

Configuration random_configuration(const PopulationType& x, Rng& rng) {
  std::vector<Action> actions;
  actions.reserve(static_cast<std::size_t>(x.n()));
  for (std::size_t i = 0; i < x.num_actions(); ++i) actions.insert(actions.end(), x.count(i), i);
  shuffle(actions, rng);
  return Configuration(std::move(actions), x.num_actions());
}

Trajectory run_once(const RunSpec& spec, std::uint64_t seed) {
  if (!spec.game || !spec.rule) throw InvalidArgument("run spec needs a game and a rule");
  SimConfig cfg = spec.cfg;
  cfg.seed = seed;
  if (spec.graph && spec.graph->n() != static_cast<std::size_t>(spec.initial.n()))
    throw InvalidArgument("graph size and initial type disagree");
  if (!spec.graph || spec.graph->is_complete())
    return simulate_complete(*spec.game, *spec.rule, spec.initial, cfg);
  Rng init_rng(derive_seed(seed, 0x1D));
  return simulate_network(*spec.graph, *spec.game, *spec.rule,
                          random_configuration(spec.initial, init_rng), cfg);
}

std::size_t default_workers() {
  if (const char* env = std::getenv("IMITODYN_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void ensemble_for_each(const RunSpec& spec, std::size_t num_runs, std::uint64_t base_seed,
                       const std::function<void(std::size_t, Trajectory&&)>& fn,
                       std::size_t workers) {
  if (num_runs < 1) throw InvalidArgument("ensemble needs num_runs >= 1");
  if (workers == 0) workers = default_workers();
  workers = std::min(workers, num_runs);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr failure;
  auto work = [&] {
    for (std::size_t k; !failed && (k = next++) < num_runs;) {
      try {
        fn(k, run_once(spec, derive_seed(base_seed, k)));
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<Trajectory> ensemble(const RunSpec& spec, std::size_t num_runs,
                                 std::uint64_t base_seed, std::size_t workers) {
  std::vector<std::optional<Trajectory>> slots(num_runs);
  ensemble_for_each(
      spec, num_runs, base_seed, [&](std::size_t k, Trajectory&& t) { slots[k] = std::move(t); },
      workers);
  std::vector<Trajectory> out;
  out.reserve(num_runs);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

} // namespace imitodyn
