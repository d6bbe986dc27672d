#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace imitodyn {

using Action = std::size_t;

/// Finite action set {0, ..., m-1}, m >= 2.
class ActionSet {
public:
  explicit ActionSet(std::size_t m);
  std::size_t size() const { return m_; }
  bool contains(Action a) const { return a < m_; }

private:
  std::size_t m_;
};

/// A point of the continuous simplex: non-negative entries summing to one.
class SimplexPoint {
public:
  /// Validates entries >= 0 and |sum - 1| <= tol.
  explicit SimplexPoint(std::vector<double> x, double tol = 1e-12);

  /// Accepts a vector within `tol` of the simplex (small negatives included)
  /// and projects it back by clipping and renormalizing.
  static SimplexPoint repaired(std::vector<double> x, double tol);
  static SimplexPoint vertex(std::size_t m, Action i);
  static SimplexPoint barycenter(std::size_t m);

  std::size_t size() const { return x_.size(); }
  double operator[](std::size_t i) const { return x_[i]; }
  std::span<const double> values() const { return x_; }
  const std::vector<double>& vec() const { return x_; }

private:
  std::vector<double> x_;
};

/// Type of a population of n players: integer counts per action, so that
/// membership in the grid {0, 1/n, ..., 1} is exact.
class PopulationType {
public:
  PopulationType(std::vector<std::int64_t> counts);

  /// Nearest grid type to a simplex point (largest-remainder rounding, so the
  /// counts always sum to n).
  static PopulationType nearest(const SimplexPoint& x, std::int64_t n);

  std::size_t num_actions() const { return counts_.size(); }
  std::int64_t n() const { return n_; }
  std::int64_t count(Action i) const { return counts_[i]; }
  std::span<const std::int64_t> counts() const { return counts_; }
  double share(Action i) const { return static_cast<double>(counts_[i]) / static_cast<double>(n_); }

  std::vector<double> shares() const;
  void shares_into(std::span<double> out) const;
  SimplexPoint point() const { return SimplexPoint(shares(), 1e-9); }

  /// One player switches from action `from` to action `to`.
  void move(Action from, Action to);

  bool is_vertex() const;
  /// The single action played when is_vertex(); undefined otherwise.
  Action vertex_action() const;

  friend bool operator==(const PopulationType&, const PopulationType&) = default;

private:
  std::vector<std::int64_t> counts_;
  std::int64_t n_ = 0;
};

/// Per-player action labels.
class Configuration {
public:
  Configuration(std::vector<Action> actions, std::size_t m);

  std::size_t n() const { return actions_.size(); }
  std::size_t num_actions() const { return m_; }
  Action operator[](std::size_t u) const { return actions_[u]; }
  void set(std::size_t u, Action a) { actions_[u] = a; }
  std::span<const Action> actions() const { return actions_; }

  PopulationType type() const;

private:
  std::vector<Action> actions_;
  std::size_t m_;
};

std::vector<Action> support(const SimplexPoint& x);
std::vector<Action> support(const PopulationType& x);

/// True iff every nonzero entry of x exceeds eps. Zero entries are exempt.
bool is_interior(const SimplexPoint& x, double eps);

double distance_inf(std::span<const double> a, std::span<const double> b);
double distance_l2(std::span<const double> a, std::span<const double> b);

} // namespace imitodyn
