#include "imitodyn/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "imitodyn/error.hpp"

namespace imitodyn {

ActionSet::ActionSet(std::size_t m) : m_(m) {
  if (m < 2) throw InvalidArgument("action set needs m >= 2, got " + std::to_string(m));
}

SimplexPoint::SimplexPoint(std::vector<double> x, double tol) : x_(std::move(x)) {
  if (x_.size() < 2) throw InvalidArgument("simplex point needs at least 2 entries");
  double sum = 0.0;
  for (double v : x_) {
    if (!std::isfinite(v) || v < 0.0)
      throw InvalidArgument("simplex point has a negative or non-finite entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > tol)
    throw InvalidArgument("simplex point entries sum to " + std::to_string(sum));
}

SimplexPoint SimplexPoint::repaired(std::vector<double> x, double tol) {
  double sum = 0.0;
  for (double v : x) {
    if (!std::isfinite(v) || v < -tol)
      throw InvalidArgument("point is off the simplex by more than " + std::to_string(tol));
    sum += v;
  }
  if (std::abs(sum - 1.0) > tol)
    throw InvalidArgument("point entries sum to " + std::to_string(sum) + ", off the simplex");
  sum = 0.0;
  for (double& v : x) {
    v = std::max(v, 0.0);
    sum += v;
  }
  for (double& v : x) v /= sum;
  return SimplexPoint(std::move(x), 1e-12);
}

SimplexPoint SimplexPoint::vertex(std::size_t m, Action i) {
  std::vector<double> x(m, 0.0);
  x.at(i) = 1.0;
  return SimplexPoint(std::move(x));
}

SimplexPoint SimplexPoint::barycenter(std::size_t m) {
  return SimplexPoint(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

PopulationType::PopulationType(std::vector<std::int64_t> counts) : counts_(std::move(counts)) {
  if (counts_.size() < 2) throw InvalidArgument("population type needs at least 2 actions");
  for (auto c : counts_) {
    if (c < 0) throw InvalidArgument("population type has a negative count");
    n_ += c;
  }
  if (n_ <= 0) throw InvalidArgument("population type needs n >= 1");
}

PopulationType PopulationType::nearest(const SimplexPoint& x, std::int64_t n) {
  if (n < 1) throw InvalidArgument("population size must be positive");
  const std::size_t m = x.size();
  std::vector<std::int64_t> counts(m);
  std::vector<std::pair<double, std::size_t>> rem(m);
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < m; ++i) {
    double exact = x[i] * static_cast<double>(n);
    counts[i] = static_cast<std::int64_t>(std::floor(exact));
    rem[i] = {exact - static_cast<double>(counts[i]), i};
    assigned += counts[i];
  }
  // Largest remainder first; ties go to the lower label.
  std::stable_sort(rem.begin(), rem.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++counts[rem[k % m].second];
  return PopulationType(std::move(counts));
}

std::vector<double> PopulationType::shares() const {
  std::vector<double> x(counts_.size());
  shares_into(x);
  return x;
}

void PopulationType::shares_into(std::span<double> out) const {
  const double n = static_cast<double>(n_);
  for (std::size_t i = 0; i < counts_.size(); ++i) out[i] = static_cast<double>(counts_[i]) / n;
}

void PopulationType::move(Action from, Action to) {
  if (from >= counts_.size() || to >= counts_.size())
    throw InvalidArgument("action label out of range");
  if (counts_[from] == 0) throw InvalidArgument("no player plays the source action");
  --counts_[from];
  ++counts_[to];
}

bool PopulationType::is_vertex() const {
  return std::any_of(counts_.begin(), counts_.end(), [&](auto c) { return c == n_; });
}

Action PopulationType::vertex_action() const {
  return static_cast<Action>(std::max_element(counts_.begin(), counts_.end()) - counts_.begin());
}

Configuration::Configuration(std::vector<Action> actions, std::size_t m)
    : actions_(std::move(actions)), m_(m) {
  ActionSet check(m);
  if (actions_.empty()) throw InvalidArgument("configuration is empty");
  for (auto a : actions_)
    if (!check.contains(a)) throw InvalidArgument("configuration label out of range");
}

PopulationType Configuration::type() const {
  std::vector<std::int64_t> counts(m_, 0);
  for (auto a : actions_) ++counts[a];
  return PopulationType(std::move(counts));
}

std::vector<Action> support(const SimplexPoint& x) {
  std::vector<Action> s;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > 0.0) s.push_back(i);
  return s;
}

std::vector<Action> support(const PopulationType& x) {
  std::vector<Action> s;
  for (std::size_t i = 0; i < x.num_actions(); ++i)
    if (x.count(i) > 0) s.push_back(i);
  return s;
}

bool is_interior(const SimplexPoint& x, double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("is_interior needs eps > 0");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > 0.0 && x[i] <= eps) return false;
  return true;
}

double distance_inf(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double distance_l2(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(d);
}

} // namespace imitodyn
