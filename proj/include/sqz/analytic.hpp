#pragma once

#include <vector>

#include "sqz/spinfock.hpp"

namespace sqz {

struct EllipticPoint {
  double u = 0.0, m = 0.0;
  double sn = 0.0, cn = 1.0, dn = 1.0;
  double epsilon = 0.0;  // E(u|m) = int_0^u dn^2
};

EllipticPoint jacobi_elliptic(double u, double m);

struct TwoAtomAmplitudes {
  cplx p, q, r;
};

// Coefficients for photon number n at time gt (rotating frame).
TwoAtomAmplitudes two_atom_amplitudes(int n, double gt);
// sum_n c_n [p_n |n,M=1> + q_n |n+1,M=0> + r_n |n+2,M=-1>] on the basis N=2, n_max = n_cut.
JointState two_atom_state(double alpha, double gt, int n_cut);

struct ValidityWindow {
  double limit = 0.0;  // gt beyond which the approximation is not trusted
  bool within = true;
};

struct TwoAtomApprox {
  double var_sx, sy, sz, factor;
  ValidityWindow validity;  // warns beyond 3/sqrt(nbar)
};

TwoAtomApprox two_atom_approx(double nbar, double gt);

struct PendulumMeans {
  double sy, sz, a1;
  double u, m;
  double error_scale;  // e^{gt sqrt N}/N
};

struct PendulumFluctuations {
  double var_a2, var_sx;
  double u, m;
  double error_scale;
};

PendulumMeans pendulum_means(int atoms, double alpha, double gt);
PendulumFluctuations pendulum_fluctuations(int atoms, double alpha, double gt);

struct SmallAngleRadiation {
  double amplitude;  // <a_phi>
  double spin;       // <S_{-phi-pi/2}>
  double var_a;      // Var a_psi
  double var_s;      // Var S_{-psi-pi/2}
  double omega;      // sqrt(2|Sz0|)
  double first_min_gt;
  double min_var_a;
  double max_amplitude;
  bool small_tilt;  // false once the initial tilt exceeds 0.5 rad
};

// Sz0 < 0 required. stilt0 = <S_{-phi-pi/2}>_0, var_s0 = Var S_{-psi-pi/2} at t = 0.
SmallAngleRadiation small_angle_radiation(double sz0, double stilt0, double var_s0, double gt);

}  // namespace sqz
