#include "imitodyn/polynomial.hpp"

#include <cmath>

#include "imitodyn/error.hpp"

namespace imitodyn {

Polynomial::Polynomial(std::vector<double> coefficients) : c_(std::move(coefficients)) {
  for (double v : c_)
    if (!std::isfinite(v)) throw InvalidArgument("polynomial coefficient is not finite");
}

double Polynomial::operator()(double s) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return Polynomial({0.0});
  std::vector<double> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const {
  std::vector<double> a(c_.size() + 1, 0.0);
  for (std::size_t k = 0; k < c_.size(); ++k) a[k + 1] = c_[k] / static_cast<double>(k + 1);
  return Polynomial(std::move(a));
}

} // namespace imitodyn
