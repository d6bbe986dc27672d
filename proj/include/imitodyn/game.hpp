#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "imitodyn/polynomial.hpp"
#include "imitodyn/simplex.hpp"

namespace imitodyn {

/// Writes r(x) into `out` (length m).
using RewardFn = std::function<void(std::span<const double> x, std::span<double> out)>;
using PotentialFn = std::function<double(std::span<const double> x)>;
/// Writes the gradient of the potential at x into `out`.
using GradientFn = std::function<void(std::span<const double> x, std::span<double> out)>;

/// A single-population game: reward vector as a function of the type, with an
/// optional potential. Immutable once built; evaluators must be pure.
class Game {
public:
  Game(ActionSet actions, RewardFn rewards, std::string id = "custom");

  Game& with_potential(PotentialFn potential, GradientFn gradient = {});

  std::size_t num_actions() const { return actions_.size(); }
  const ActionSet& actions() const { return actions_; }
  const std::string& id() const { return id_; }

  void rewards(std::span<const double> x, std::span<double> out) const { rewards_(x, out); }
  std::vector<double> rewards(std::span<const double> x) const;

  bool has_potential() const { return static_cast<bool>(potential_); }
  bool has_analytic_gradient() const { return static_cast<bool>(gradient_); }

  /// Throws NoPotential when absent.
  double potential(std::span<const double> x) const;
  /// Analytic gradient when attached, else central differences (h = 1e-6)
  /// with near-boundary points pulled 1e-5 inward first.
  void potential_gradient(std::span<const double> x, std::span<double> out) const;
  std::vector<double> potential_gradient(std::span<const double> x) const;

private:
  ActionSet actions_;
  RewardFn rewards_;
  PotentialFn potential_;
  GradientFn gradient_;
  std::string id_;
};

/// r_i(x) = P_i(x_i), potential sum_i Psi_i(x_i) with Psi_i' = P_i, Psi_i(0) = 0.
Game make_congestion_game(std::vector<Polynomial> reward_polys, std::string id = "congestion");

/// r(x) = A x. A symmetric A yields the potential x^T A x / 2; otherwise the
/// game has no potential.
Game make_matrix_game(std::vector<std::vector<double>> A, std::string id = "matrix");

/// Two-action quartic reference game: r_1 = 9 - (4x_1-3)(4x_1-1)^2, r_2 = 9,
/// potential -16x_1^4 + 80/3 x_1^3 - 14x_1^2 + 3x_1 + 9.
Game example4_game();

struct PotentialCheck {
  double max_violation = 0.0;
  bool pass = false;
};

/// Samples uniform interior points and checks
/// r_j - r_i == dPhi/dx_j - dPhi/dx_i for all pairs.
PotentialCheck check_potential_consistency(const Game& game, int num_samples, double tol,
                                           std::uint64_t seed = 0x5eed);

struct RewardBounds {
  double lo;
  double hi;
};

/// Min/max reward over a simplex grid of resolution `grid_resolution`,
/// widened by 1% of the magnitude (plus 1e-9) on each side.
RewardBounds reward_bounds(const Game& game, int grid_resolution);

/// Calls `visit` with every point of {x : x_i in {0, 1/N, ..., 1}, sum x = 1}.
void for_each_grid_point(std::size_t m, int resolution,
                         const std::function<void(std::span<const double>)>& visit);

} // namespace imitodyn
