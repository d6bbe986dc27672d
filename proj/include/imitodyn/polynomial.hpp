#pragma once

#include <vector>

namespace imitodyn {

/// Real polynomial with coefficients in ascending degree.
class Polynomial {
public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coefficients);

  double operator()(double s) const;
  Polynomial derivative() const;
  /// Antiderivative with zero constant term.
  Polynomial antiderivative() const;

  const std::vector<double>& coefficients() const { return c_; }
  std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }

private:
  std::vector<double> c_;
};

} // namespace imitodyn
