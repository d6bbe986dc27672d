#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "imitodyn/game.hpp"

namespace imitodyn {

/// f_ij = 1/2 + atan(K_ij (r_j - r_i)) / pi.
struct ArctanKind {
  std::vector<std::vector<double>> K;
};

/// f_ij = eps + (1 - 2 eps) (r_j - lo) / (hi - lo), clamped to [eps, 1 - eps].
struct ReplicatorKind {
  double lo;
  double hi;
  double eps_margin;

  double slope() const { return (1.0 - 2.0 * eps_margin) / (hi - lo); }
  bool clamps(double r) const { return r < lo || r > hi; }
};

/// (i, j, rewards) -> probability; assumed Lipschitz, not verified.
struct CustomKind {
  std::function<double(std::size_t, std::size_t, std::span<const double>)> f;
};

/// Copying probabilities f_ij of the imitation dynamics.
class ImitationRule {
public:
  using Kind = std::variant<ArctanKind, ReplicatorKind, CustomKind>;

  ImitationRule(Kind kind, std::size_t num_actions, std::string id);

  std::size_t num_actions() const { return m_; }
  const std::string& id() const { return id_; }
  const Kind& kind() const { return kind_; }

  /// Unchecked hot-path evaluation for i != j.
  double prob(std::size_t i, std::size_t j, std::span<const double> rewards) const;

  /// Fills F (row-major m x m) with F_ij = f_ij, diagonal 1.
  void matrix(std::span<const double> rewards, std::span<double> F) const;

private:
  Kind kind_;
  std::size_t m_;
  std::string id_;
};

ImitationRule arctan_rule(std::vector<std::vector<double>> K);
/// All K_ij equal to k.
ImitationRule arctan_rule(std::size_t m, double k);
ImitationRule replicator_rule(std::size_t m, double lo, double hi, double eps_margin);
ImitationRule custom_rule(std::size_t m,
                          std::function<double(std::size_t, std::size_t, std::span<const double>)> f,
                          std::string id = "custom");

/// Checked f_ij: labels validated, f_ii == 1.
double copy_prob(const ImitationRule& rule, std::size_t i, std::size_t j,
                 std::span<const double> rewards);

struct SignViolation {
  std::vector<double> x;
  std::size_t i = 0;
  std::size_t j = 0;
  double gap = 0.0; ///< |f_ij - f_ji| at the offending pair
};

struct SignReport {
  std::size_t violations = 0;
  std::optional<SignViolation> worst;
  /// Samples where a replicator rule clamped at least one probability.
  std::size_t clamped_samples = 0;
};

/// Checks sgn(f_ij - f_ji) == sgn(r_j - r_i) at uniform interior samples; pairs
/// with equal rewards need |f_ij - f_ji| < 1e-12.
SignReport verify_sign_condition(const ImitationRule& rule, const Game& game, int num_samples,
                                 std::uint64_t seed = 0x51);

} // namespace imitodyn
