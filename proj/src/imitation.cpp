#include "imitodyn/imitation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "imitodyn/error.hpp"
#include "imitodyn/rng.hpp"

namespace imitodyn {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

int sign(double v) { return (v > 0.0) - (v < 0.0); }

} // namespace

ImitationRule::ImitationRule(Kind kind, std::size_t num_actions, std::string id)
    : kind_(std::move(kind)), m_(num_actions), id_(std::move(id)) {
  ActionSet check(num_actions);
}

double ImitationRule::prob(std::size_t i, std::size_t j, std::span<const double> r) const {
  return std::visit(
      overloaded{
          [&](const ArctanKind& k) {
            return 0.5 + std::atan(k.K[i][j] * (r[j] - r[i])) * std::numbers::inv_pi;
          },
          [&](const ReplicatorKind& k) {
            const double f = k.eps_margin + k.slope() * (r[j] - k.lo);
            return std::clamp(f, k.eps_margin, 1.0 - k.eps_margin);
          },
          [&](const CustomKind& k) { return k.f(i, j, r); },
      },
      kind_);
}

void ImitationRule::matrix(std::span<const double> rewards, std::span<double> F) const {
  for (std::size_t i = 0; i < m_; ++i)
    for (std::size_t j = 0; j < m_; ++j) F[i * m_ + j] = i == j ? 1.0 : prob(i, j, rewards);
}

ImitationRule arctan_rule(std::vector<std::vector<double>> K) {
  const std::size_t m = K.size();
  for (const auto& row : K) {
    if (row.size() != m) throw InvalidArgument("arctan rule needs a square K");
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j && !(K[i][j] > 0.0 && std::isfinite(K[i][j])))
        throw InvalidArgument("arctan rule needs K_ij > 0");
  return ImitationRule(ArctanKind{std::move(K)}, m, "arctan");
}

ImitationRule arctan_rule(std::size_t m, double k) {
  return arctan_rule(std::vector<std::vector<double>>(m, std::vector<double>(m, k)));
}

ImitationRule replicator_rule(std::size_t m, double lo, double hi, double eps_margin) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw InvalidArgument("replicator rule needs R_lo < R_hi");
  if (!(eps_margin >= 0.0 && eps_margin < 0.5))
    throw InvalidArgument("replicator rule needs 0 <= eps_margin < 1/2");
  return ImitationRule(ReplicatorKind{lo, hi, eps_margin}, m, "replicator");
}

ImitationRule custom_rule(std::size_t m,
                          std::function<double(std::size_t, std::size_t, std::span<const double>)> f,
                          std::string id) {
  if (!f) throw InvalidArgument("custom rule needs an evaluator");
  return ImitationRule(CustomKind{std::move(f)}, m, std::move(id));
}

double copy_prob(const ImitationRule& rule, std::size_t i, std::size_t j,
                 std::span<const double> rewards) {
  const std::size_t m = rule.num_actions();
  if (i >= m || j >= m) throw InvalidArgument("action label out of range");
  if (rewards.size() != m) throw InvalidArgument("reward vector has the wrong length");
  if (i == j) return 1.0;
  return rule.prob(i, j, rewards);
}

SignReport verify_sign_condition(const ImitationRule& rule, const Game& game, int num_samples,
                                 std::uint64_t seed) {
  if (num_samples < 1) throw InvalidArgument("num_samples must be >= 1");
  const std::size_t m = game.num_actions();
  if (rule.num_actions() != m) throw InvalidArgument("rule and game disagree on m");
  const auto* rep = std::get_if<ReplicatorKind>(&rule.kind());
  Rng rng(seed);
  std::vector<double> r(m);
  SignReport report;
  for (int s = 0; s < num_samples; ++s) {
    auto x = uniform_simplex(rng, m);
    game.rewards(x, r);
    if (rep && std::any_of(r.begin(), r.end(), [&](double v) { return rep->clamps(v); }))
      ++report.clamped_samples;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        if (i == j) continue;
        const double df = rule.prob(i, j, r) - rule.prob(j, i, r);
        const double dr = r[j] - r[i];
        const bool ok = dr == 0.0 ? std::abs(df) < 1e-12 : sign(df) == sign(dr);
        if (ok) continue;
        ++report.violations;
        if (!report.worst || std::abs(df) > report.worst->gap)
          report.worst = SignViolation{x, i, j, std::abs(df)};
      }
  }
  return report;
}

} // namespace imitodyn
