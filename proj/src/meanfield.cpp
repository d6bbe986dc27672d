#include "imitodyn/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "imitodyn/error.hpp"

namespace imitodyn {

namespace {

class Rhs {
public:
  Rhs(const Game& game, const ImitationRule& rule, double lambda)
      : game_(game), rule_(rule), lambda_(lambda), m_(game.num_actions()), r_(m_), F_(m_ * m_) {
    if (rule.num_actions() != m_) throw InvalidArgument("rule and game disagree on m");
  }

  void operator()(std::span<const double> x, std::span<double> out) {
    game_.rewards(x, r_);
    rule_.matrix(r_, F_);
    for (std::size_t i = 0; i < m_; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < m_; ++j) acc += (F_[j * m_ + i] - F_[i * m_ + j]) * x[j];
      out[i] = lambda_ * x[i] * acc;
    }
  }

private:
  const Game& game_;
  const ImitationRule& rule_;
  double lambda_;
  std::size_t m_;
  std::vector<double> r_, F_;
};

double sup_norm(std::span<const double> v) {
  double s = 0.0;
  for (double e : v) s = std::max(s, std::abs(e));
  return s;
}

/// One RK4 step followed by the clip-and-renormalize guard.
class Stepper {
public:
  Stepper(const Game& game, const ImitationRule& rule, const OdeOptions& opts)
      : rhs_(game, rule, opts.lambda), opts_(opts), m_(game.num_actions()), k1_(m_), k2_(m_),
        k3_(m_), k4_(m_), tmp_(m_) {}

  void step(std::vector<double>& x, double h, double t) {
    rhs_(x, k1_);
    for (std::size_t i = 0; i < m_; ++i) tmp_[i] = x[i] + 0.5 * h * k1_[i];
    rhs_(tmp_, k2_);
    for (std::size_t i = 0; i < m_; ++i) tmp_[i] = x[i] + 0.5 * h * k2_[i];
    rhs_(tmp_, k3_);
    for (std::size_t i = 0; i < m_; ++i) tmp_[i] = x[i] + h * k3_[i];
    rhs_(tmp_, k4_);
    double sum = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      x[i] += h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
      sum += x[i];
    }
    const double lowest = *std::min_element(x.begin(), x.end());
    if (!std::isfinite(sum) || lowest < -1e-6 || std::abs(sum - 1.0) > 1e-6)
      throw SimplexViolation("ODE state left the simplex at t = " + std::to_string(t) +
                             " (min entry " + std::to_string(lowest) + ", sum " +
                             std::to_string(sum) + ")");
    if (lowest < 0.0) {
      if (++guard_ > opts_.max_guard_activations)
        throw SimplexViolation("simplex guard fired more than " +
                               std::to_string(opts_.max_guard_activations) + " times");
      sum = 0.0;
      for (auto& v : x) sum += (v = std::max(v, 0.0));
    }
    for (auto& v : x) v /= sum;
  }

  double residual(std::span<const double> x) {
    rhs_(x, k1_);
    return sup_norm(k1_);
  }

  std::size_t guard_activations() const { return guard_; }

private:
  Rhs rhs_;
  OdeOptions opts_;
  std::size_t m_;
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
  std::size_t guard_ = 0;
};

} // namespace

std::vector<double> mean_field_rhs(const Game& game, const ImitationRule& rule,
                                   std::span<const double> x, double lambda) {
  if (x.size() != game.num_actions()) throw InvalidArgument("state has the wrong length");
  Rhs rhs(game, rule, lambda);
  std::vector<double> out(x.size());
  rhs(x, out);
  return out;
}

void OdeTrajectory::push(double t, std::span<const double> x) {
  times_.push_back(t);
  states_.insert(states_.end(), x.begin(), x.end());
}

void OdeTrajectory::interpolate(double t, std::span<double> out) const {
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) {
    std::copy_n(states_.begin(), m_, out.begin());
    return;
  }
  const std::size_t k = static_cast<std::size_t>(it - times_.begin()) - 1;
  if (k + 1 >= times_.size()) {
    std::copy_n(states_.begin() + static_cast<std::ptrdiff_t>(k * m_), m_, out.begin());
    return;
  }
  const double w = (t - times_[k]) / (times_[k + 1] - times_[k]);
  for (std::size_t i = 0; i < m_; ++i)
    out[i] = (1.0 - w) * states_[k * m_ + i] + w * states_[(k + 1) * m_ + i];
}

OdeTrajectory integrate(const Game& game, const ImitationRule& rule, const SimplexPoint& x0,
                        double T, double dt, const OdeOptions& opts) {
  if (!(dt > 0.0) || !(T > 0.0)) throw InvalidArgument("integrate needs dt > 0 and T > 0");
  if (x0.size() != game.num_actions()) throw InvalidArgument("initial point has the wrong length");
  Stepper stepper(game, rule, opts);
  OdeTrajectory traj(x0.size());
  std::vector<double> x = x0.vec();
  traj.push(0.0, x);
  const auto steps = static_cast<std::uint64_t>(std::ceil(T / dt - 1e-9));
  double t = 0.0;
  for (std::uint64_t k = 1; k <= steps; ++k) {
    const double t_next = k == steps ? T : static_cast<double>(k) * dt;
    stepper.step(x, t_next - t, t);
    t = t_next;
    traj.push(t, x);
  }
  traj.guard_activations = stepper.guard_activations();
  if (stepper.residual(x) < 1e-8) traj.converged_to = SimplexPoint(x, 1e-9);
  return traj;
}

LimitResult find_limit(const Game& game, const ImitationRule& rule, const SimplexPoint& x0,
                       double tol, double max_T, double dt, const OdeOptions& opts) {
  if (!(tol > 0.0)) throw InvalidArgument("find_limit needs tol > 0");
  if (!(dt > 0.0) || !(max_T > 0.0)) throw InvalidArgument("find_limit needs dt, max_T > 0");
  Stepper stepper(game, rule, opts);
  std::vector<double> x = x0.vec();
  double t = 0.0;
  double res = stepper.residual(x);
  for (std::uint64_t k = 1; res >= tol && t < max_T; ++k) {
    const double t_next = std::min(max_T, static_cast<double>(k) * dt);
    stepper.step(x, t_next - t, t);
    t = t_next;
    res = stepper.residual(x);
  }
  return {SimplexPoint(x, 1e-9), res < tol, t, res};
}

double kurtz_deviation(const Trajectory& stoch, const OdeTrajectory& ode, double T) {
  if (stoch.empty() || ode.size() == 0) throw InvalidArgument("empty trajectory");
  if (stoch.num_actions() != ode.num_actions())
    throw InvalidArgument("trajectories disagree on the number of actions");
  const bool stoch_covers = stoch.end_time() >= T || stoch.absorbed_at.has_value();
  if (!stoch_covers || ode.end_time() < T - 1e-9)
    throw InvalidArgument("trajectories do not cover [0, " + std::to_string(T) + "]");

  const std::size_t m = ode.num_actions();
  std::vector<double> X(m), Xprev(m), x(m);
  double sup = 0.0;
  auto compare = [&](double t, std::span<const double> state) {
    ode.interpolate(t, x);
    sup = std::max(sup, distance_inf(state, x));
  };
  // Stochastic jump times, with left limits.
  for (std::size_t k = 0; k < stoch.size() && stoch.time(k) <= T; ++k) {
    stoch.shares_into(k, X);
    compare(stoch.time(k), X);
    if (k > 0) compare(stoch.time(k), Xprev);
    Xprev = X;
  }
  // ODE grid, against the stochastic state holding there.
  for (std::size_t k = 0; k < ode.size() && ode.time(k) <= T; ++k) {
    stoch.shares_into(stoch.index_at(ode.time(k)), X);
    compare(ode.time(k), X);
  }
  stoch.shares_into(stoch.index_at(T), X);
  compare(T, X);
  return sup;
}

} // namespace imitodyn
