#pragma once

// Reference computations used only by tests. None of these call into the
// library, so they can serve as independent checks of it.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using Poly = std::vector<double>; // ascending degree

inline Poly mul(const Poly& a, const Poly& b) {
  Poly c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

inline Poly add(Poly a, const Poly& b, double scale = 1.0) {
  if (a.size() < b.size()) a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += scale * b[i];
  return a;
}

inline Poly diff(const Poly& a) {
  Poly d;
  for (std::size_t k = 1; k < a.size(); ++k) d.push_back(static_cast<double>(k) * a[k]);
  return d;
}

inline double eval(const Poly& p, double s) {
  double v = 0.0, pw = 1.0;
  for (double c : p) {
    v += c * pw;
    pw *= s;
  }
  return v;
}

/// Synthetic division by (s - root); returns quotient, remainder in `rem`.
inline Poly divide_root(const Poly& p, double root, double& rem) {
  const std::size_t d = p.size() - 1;
  Poly q(d, 0.0);
  double carry = 0.0;
  for (std::size_t k = d + 1; k-- > 0;) {
    const double v = p[k] + carry;
    if (k == 0) {
      rem = v;
      break;
    }
    q[k - 1] = v;
    carry = v * root;
  }
  return q;
}

// Quartic reference game built from its factored reward: r_1 = 9 - (4s-3)(4s-1)^2.
inline Poly example4_r1() {
  const Poly a{-3.0, 4.0}, b{-1.0, 4.0};
  return add(Poly{9.0}, mul(a, mul(b, b)), -1.0);
}

// Phi(s) = int_0^s r_1 + int_0^{1-s} 9 = int_0^s (r_1 - 9) + 9.
inline Poly example4_phi() {
  Poly g = add(example4_r1(), Poly{9.0}, -1.0);
  Poly phi{9.0};
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (phi.size() < k + 2) phi.resize(k + 2, 0.0);
    phi[k + 1] += g[k] / static_cast<double>(k + 1);
  }
  return phi;
}

inline double arctan_f(double K, double dr) { return 0.5 + std::atan(K * dr) / std::numbers::pi; }

/// Dense simplex grid for m = 3: calls fn(x0, x1, x2) on every grid point.
inline void grid3(int N, const std::function<void(double, double, double)>& fn) {
  for (int a = 0; a <= N; ++a)
    for (int b = 0; a + b <= N; ++b)
      fn(double(a) / N, double(b) / N, double(N - a - b) / N);
}

} // namespace oracle
