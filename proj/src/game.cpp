#include "imitodyn/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "imitodyn/error.hpp"
#include "imitodyn/rng.hpp"

namespace imitodyn {

namespace {

constexpr double kFdStep = 1e-6;
constexpr double kBoundaryShift = 1e-5;

} // namespace

Game::Game(ActionSet actions, RewardFn rewards, std::string id)
    : actions_(actions), rewards_(std::move(rewards)), id_(std::move(id)) {
  if (!rewards_) throw InvalidArgument("game needs a reward evaluator");
}

Game& Game::with_potential(PotentialFn potential, GradientFn gradient) {
  potential_ = std::move(potential);
  gradient_ = std::move(gradient);
  return *this;
}

std::vector<double> Game::rewards(std::span<const double> x) const {
  std::vector<double> r(num_actions());
  rewards_(x, r);
  return r;
}

double Game::potential(std::span<const double> x) const {
  if (!potential_) throw NoPotential();
  return potential_(x);
}

void Game::potential_gradient(std::span<const double> x, std::span<double> out) const {
  if (gradient_) {
    gradient_(x, out);
    return;
  }
  if (!potential_) throw NoPotential();
  const std::size_t m = x.size();
  std::vector<double> base(x.begin(), x.end());
  if (*std::min_element(base.begin(), base.end()) < kBoundaryShift) {
    const double keep = 1.0 - static_cast<double>(m) * kBoundaryShift;
    for (auto& v : base) v = keep * v + kBoundaryShift;
  }
  std::vector<double> probe = base;
  for (std::size_t i = 0; i < m; ++i) {
    probe[i] = base[i] + kFdStep;
    const double up = potential_(probe);
    probe[i] = base[i] - kFdStep;
    const double down = potential_(probe);
    probe[i] = base[i];
    out[i] = (up - down) / (2.0 * kFdStep);
  }
}

std::vector<double> Game::potential_gradient(std::span<const double> x) const {
  std::vector<double> g(x.size());
  potential_gradient(x, g);
  return g;
}

Game make_congestion_game(std::vector<Polynomial> reward_polys, std::string id) {
  if (reward_polys.empty()) throw InvalidArgument("congestion game needs reward polynomials");
  ActionSet actions(reward_polys.size());
  std::vector<Polynomial> anti;
  anti.reserve(reward_polys.size());
  for (const auto& p : reward_polys) anti.push_back(p.antiderivative());

  auto rewards = [polys = reward_polys](std::span<const double> x, std::span<double> out) {
    for (std::size_t i = 0; i < polys.size(); ++i) out[i] = polys[i](x[i]);
  };
  auto potential = [anti](std::span<const double> x) {
    double phi = 0.0;
    for (std::size_t i = 0; i < anti.size(); ++i) phi += anti[i](x[i]);
    return phi;
  };
  Game game(actions, rewards, std::move(id));
  game.with_potential(potential, rewards);
  return game;
}

Game make_matrix_game(std::vector<std::vector<double>> A, std::string id) {
  const std::size_t m = A.size();
  ActionSet actions(m);
  bool symmetric = true;
  for (const auto& row : A)
    if (row.size() != m) throw InvalidArgument("matrix game needs a square matrix");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (!std::isfinite(A[i][j])) throw InvalidArgument("matrix game entry is not finite");
      if (A[i][j] != A[j][i]) symmetric = false;
    }
  auto rewards = [A](std::span<const double> x, std::span<double> out) {
    for (std::size_t i = 0; i < A.size(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < A.size(); ++j) s += A[i][j] * x[j];
      out[i] = s;
    }
  };
  Game game(actions, rewards, std::move(id));
  if (symmetric) {
    game.with_potential(
        [A](std::span<const double> x) {
          double phi = 0.0;
          for (std::size_t i = 0; i < A.size(); ++i)
            for (std::size_t j = 0; j < A.size(); ++j) phi += 0.5 * x[i] * A[i][j] * x[j];
          return phi;
        },
        rewards);
  }
  return game;
}

Game example4_game() {
  // r_1 = 9 - (4s-3)(4s-1)^2 expanded.
  Polynomial r1({12.0, -28.0, 80.0, -64.0});
  Polynomial r2({9.0});
  ActionSet actions(2);
  auto rewards = [r1, r2](std::span<const double> x, std::span<double> out) {
    out[0] = r1(x[0]);
    out[1] = r2(x[1]);
  };
  Game game(actions, rewards, "example4");
  game.with_potential(
      [](std::span<const double> x) {
        const double s = x[0];
        return (((-16.0 * s + 80.0 / 3.0) * s - 14.0) * s + 3.0) * s + 9.0;
      },
      [](std::span<const double> x, std::span<double> out) {
        const double s = x[0];
        out[0] = ((-64.0 * s + 80.0) * s - 28.0) * s + 3.0;
        out[1] = 0.0;
      });
  return game;
}

PotentialCheck check_potential_consistency(const Game& game, int num_samples, double tol,
                                           std::uint64_t seed) {
  if (!game.has_potential()) throw NoPotential();
  if (num_samples < 1) throw InvalidArgument("num_samples must be >= 1");
  const std::size_t m = game.num_actions();
  Rng rng(seed);
  std::vector<double> r(m), g(m);
  PotentialCheck report;
  for (int s = 0; s < num_samples; ++s) {
    auto x = uniform_simplex(rng, m);
    game.rewards(x, r);
    game.potential_gradient(x, g);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) {
        double v = std::abs((r[j] - r[i]) - (g[j] - g[i]));
        if (!std::isfinite(v)) v = std::numeric_limits<double>::infinity();
        report.max_violation = std::max(report.max_violation, v);
      }
  }
  report.pass = report.max_violation < tol;
  return report;
}

void for_each_grid_point(std::size_t m, int resolution,
                         const std::function<void(std::span<const double>)>& visit) {
  if (resolution < 1) throw InvalidArgument("grid resolution must be positive");
  std::vector<int> k(m, 0);
  std::vector<double> x(m);
  const double N = resolution;
  // Enumerate compositions of `resolution` into m parts.
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i + 1 == m) {
      k[i] = left;
      for (std::size_t a = 0; a < m; ++a) x[a] = k[a] / N;
      visit(x);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      k[i] = v;
      self(self, i + 1, left - v);
    }
  };
  rec(rec, 0, resolution);
}

RewardBounds reward_bounds(const Game& game, int grid_resolution) {
  if (grid_resolution < 2) throw InvalidArgument("reward_bounds needs grid_resolution >= 2");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::vector<double> r(game.num_actions());
  for_each_grid_point(game.num_actions(), grid_resolution, [&](std::span<const double> x) {
    game.rewards(x, r);
    for (double v : r) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  });
  return {lo - 0.01 * std::abs(lo) - 1e-9, hi + 0.01 * std::abs(hi) + 1e-9};
}

} // namespace imitodyn
