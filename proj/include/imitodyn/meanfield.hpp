#pragma once

#include <optional>
#include <span>
#include <vector>

#include "imitodyn/engine.hpp"
#include "imitodyn/game.hpp"
#include "imitodyn/imitation.hpp"

namespace imitodyn {

/// lambda diag(x) (F^T - F) x.
std::vector<double> mean_field_rhs(const Game& game, const ImitationRule& rule,
                                   std::span<const double> x, double lambda);

class OdeTrajectory {
public:
  explicit OdeTrajectory(std::size_t m) : m_(m) {}

  void push(double t, std::span<const double> x);
  std::size_t size() const { return times_.size(); }
  std::size_t num_actions() const { return m_; }
  double time(std::size_t k) const { return times_[k]; }
  const std::vector<double>& times() const { return times_; }
  std::span<const double> state(std::size_t k) const { return {states_.data() + k * m_, m_}; }
  double end_time() const { return times_.back(); }
  /// Linear interpolation between records.
  void interpolate(double t, std::span<double> out) const;

  std::optional<SimplexPoint> converged_to;
  std::size_t guard_activations = 0;

private:
  std::size_t m_;
  std::vector<double> times_;
  std::vector<double> states_;
};

struct OdeOptions {
  double lambda = 1.0;
  std::size_t max_guard_activations = 1000;
};

/// Fixed-step RK4 on [0, T], recording every step.
OdeTrajectory integrate(const Game& game, const ImitationRule& rule, const SimplexPoint& x0,
                        double T, double dt, const OdeOptions& opts = {});

struct LimitResult {
  SimplexPoint point;
  bool converged = false;
  double time = 0.0;
  double residual = 0.0; ///< sup-norm of the right-hand side at `point`
};

/// Integrates until the sup-norm of the right-hand side drops below tol or
/// max_T is reached.
LimitResult find_limit(const Game& game, const ImitationRule& rule, const SimplexPoint& x0,
                       double tol = 1e-8, double max_T = 1e4, double dt = 0.01,
                       const OdeOptions& opts = {});

/// sup_{t <= T} |X(t) - x(t)|_inf with X piecewise constant and x linear
/// between records. Left limits at jump times are included.
double kurtz_deviation(const Trajectory& stoch, const OdeTrajectory& ode, double T);

} // namespace imitodyn
