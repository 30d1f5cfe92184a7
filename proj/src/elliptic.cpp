#include <array>
#include <cmath>

#include "sqz/analytic.hpp"
#include "sqz/errors.hpp"

namespace sqz {

// Descending Landen / AGM scheme. The angles phi_n of the descent give both the
// amplitude am(u) = phi_0 and the Jacobi zeta Z = sum_{n>=1} c_n sin phi_n, so
// E(u|m) = u E(m)/K(m) + Z with E/K = 1 - sum 2^{n-1} c_n^2.
EllipticPoint jacobi_elliptic(double u, double m) {
  if (!(m >= 0.0 && m <= 1.0)) throw InvalidArgument("elliptic parameter m must lie in [0, 1]");
  EllipticPoint p;
  p.u = u;
  p.m = m;
  if (m == 0.0) {
    p.sn = std::sin(u);
    p.cn = std::cos(u);
    p.dn = 1.0;
    p.epsilon = u;
    return p;
  }
  if (m == 1.0) {
    p.sn = std::tanh(u);
    p.cn = p.dn = 1.0 / std::cosh(u);
    p.epsilon = std::tanh(u);
    return p;
  }
  constexpr int kMax = 64;
  std::array<double, kMax + 1> a{}, c{}, phi{};
  a[0] = 1.0;
  c[0] = std::sqrt(m);
  double b = std::sqrt(1.0 - m);
  int n = 0;
  while (std::abs(c[n]) > 1e-15 && n < kMax) {
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
  }
  phi[n] = std::ldexp(a[n] * u, n);
  for (int k = n; k > 0; --k) phi[k - 1] = 0.5 * (phi[k] + std::asin(c[k] / a[k] * std::sin(phi[k])));
  p.sn = std::sin(phi[0]);
  p.cn = std::cos(phi[0]);
  p.dn = n > 0 ? p.cn / std::cos(phi[1] - phi[0]) : std::sqrt(1.0 - m * p.sn * p.sn);
  double ek = 0.0, zeta = 0.0;
  for (int k = 0; k <= n; ++k) ek += std::ldexp(c[k] * c[k], k);
  for (int k = 1; k <= n; ++k) zeta += c[k] * std::sin(phi[k]);
  p.epsilon = u * (1.0 - 0.5 * ek) + zeta;
  return p;
}

}  // namespace sqz
