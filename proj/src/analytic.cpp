#include <cmath>
#include <string>

#include "sqz/analytic.hpp"
#include "sqz/errors.hpp"

namespace sqz {

TwoAtomAmplitudes two_atom_amplitudes(int n, double gt) {
  const double k = 2.0 * n + 3.0;
  const double w = std::sqrt(2.0 * k) * gt;
  const double c = std::cos(w), s = std::sin(w);
  TwoAtomAmplitudes out;
  out.p = ((n + 1.0) * c + n + 2.0) / k;
  out.q = cplx(0.0, -std::sqrt((n + 1.0) / k) * s);
  out.r = std::sqrt((n + 1.0) * (n + 2.0)) / k * (c - 1.0);
  return out;
}

JointState two_atom_state(double alpha, double gt, int n_cut) {
  if (n_cut < 2) throw InvalidArgument("two-atom state needs n_cut >= 2");
  const double mean = alpha * alpha;
  // terms with n + 2 > n_cut are dropped
  const double tail = poisson_tail(mean, n_cut - 2);
  if (tail >= 1e-12)
    throw TruncationError("two-atom state: cut " + std::to_string(n_cut) + " leaves tail " + std::to_string(tail));
  SpinFockBasis b;
  b.atoms = 2;
  b.photon_cut = n_cut;
  JointState psi{b, CVec::Zero(b.dim())};
  for (int n = 0; n + 2 <= n_cut; ++n) {
    double cn;
    if (mean == 0.0)
      cn = n == 0 ? 1.0 : 0.0;
    else
      cn = std::exp(0.5 * (-mean + 2.0 * n * std::log(std::abs(alpha)) - std::lgamma(n + 1.0)));
    if (alpha < 0 && n % 2) cn = -cn;
    const TwoAtomAmplitudes t = two_atom_amplitudes(n, gt);
    psi.amp[b.index(n, 0)] += cn * t.p;
    psi.amp[b.index(n + 1, 1)] += cn * t.q;
    psi.amp[b.index(n + 2, 2)] += cn * t.r;
  }
  psi.amp /= psi.amp.norm();
  return psi;
}

TwoAtomApprox two_atom_approx(double nbar, double gt) {
  const double r = std::sqrt(nbar);
  const double s1 = std::sin(r * gt), s2 = std::sin(2.0 * r * gt), s4 = std::sin(4.0 * r * gt);
  const double c2 = std::cos(2.0 * r * gt);
  const double g2 = gt * gt;
  TwoAtomApprox a;
  a.var_sx = 0.5 - std::pow(s1, 4) / (2.0 * nbar) + gt / (2.0 * r) * s2;
  a.sy = -std::exp(-g2 / 2.0) * s2 - gt / r * (0.75 - 2.5 * s1 * s1) + (s2 + s4) / (8.0 * nbar);
  a.sz = std::exp(-g2 / 2.0) * c2 - 5.0 * gt / (4.0 * r) * s2 + s2 * s2 / (4.0 * nbar);
  a.factor = std::exp(g2 / 2.0) - s1 * s1 / nbar + 3.0 * s2 * s2 / (8.0 * nbar) + 3.0 * gt / (2.0 * r) * s2;
  a.validity.limit = 3.0 / r;
  a.validity.within = gt <= a.validity.limit;
  return a;
}

namespace {

void pendulum_args(int atoms, double alpha, double gt, double& u, double& m) {
  if (atoms < 1) throw InvalidArgument("pendulum solution needs N >= 1");
  if (!(alpha >= 0.0)) throw InvalidArgument("pendulum solution needs real alpha >= 0");
  u = gt * std::sqrt(atoms + alpha * alpha);
  m = atoms / (atoms + alpha * alpha);
}

}  // namespace

PendulumMeans pendulum_means(int atoms, double alpha, double gt) {
  PendulumMeans out;
  pendulum_args(atoms, alpha, gt, out.u, out.m);
  const EllipticPoint e = jacobi_elliptic(out.u, out.m);
  const double sd = e.sn / e.dn, cd = e.cn / e.dn, nd = 1.0 / e.dn;
  out.sy = -atoms * std::sqrt(1.0 - out.m) * sd * cd;
  out.sz = 0.5 * atoms * (2.0 * cd * cd - 1.0);
  out.a1 = alpha * nd;
  out.error_scale = std::exp(gt * std::sqrt(double(atoms))) / atoms;
  return out;
}

PendulumFluctuations pendulum_fluctuations(int atoms, double alpha, double gt) {
  PendulumFluctuations out;
  pendulum_args(atoms, alpha, gt, out.u, out.m);
  const EllipticPoint e = jacobi_elliptic(out.u, out.m);
  const double m = out.m, E = e.epsilon, dn2 = e.dn * e.dn;
  out.var_a2 = (1.0 + m * E * E) / (4.0 * dn2);
  const double sc = e.sn * e.cn / dn2;
  const double inner = m * sc * E + e.dn;
  out.var_sx = 0.25 * atoms * (m * sc * sc + inner * inner);
  out.error_scale = std::exp(gt * std::sqrt(double(atoms))) / atoms;
  return out;
}

SmallAngleRadiation small_angle_radiation(double sz0, double stilt0, double var_s0, double gt) {
  if (!(sz0 < 0.0)) throw PreconditionViolation("small-angle radiation needs <Sz>_0 < 0");
  const double az = -sz0;
  SmallAngleRadiation r;
  r.omega = std::sqrt(2.0 * az);
  const double s = std::sin(r.omega * gt), c = std::cos(r.omega * gt);
  r.amplitude = stilt0 / r.omega * s;
  r.spin = stilt0 * c;
  r.var_a = 0.25 * c * c + var_s0 / (2.0 * az) * s * s;
  r.var_s = var_s0 * c * c + 0.5 * az * s * s;
  r.first_min_gt = M_PI / (2.0 * r.omega);
  r.min_var_a = var_s0 / (2.0 * az);
  r.max_amplitude = stilt0 / r.omega;
  r.small_tilt = std::atan2(std::abs(stilt0), az) <= 0.5;
  return r;
}

}  // namespace sqz
