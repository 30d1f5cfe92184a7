#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "sqz/spinfock.hpp"

namespace sqz {

struct SpinMoments {
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  // symmetrized second moments <{S_i, S_j}>/2
  Eigen::Matrix3d second = Eigen::Matrix3d::Zero();

  Eigen::Matrix3d covariance() const { return second - mean * mean.transpose(); }
  double length() const { return mean.norm(); }
};

struct FieldMoments {
  cplx a = 0.0;
  cplx a2 = 0.0;
  double n = 0.0;
  double n2 = 0.0;
};

// Spin densities are in slot order j = S - M.
SpinMoments spin_moments(const CMat& rho_a);
SpinMoments spin_moments(const JointState& psi);
FieldMoments field_moments(const CMat& rho_f);
FieldMoments field_moments(const JointState& psi);

Eigen::Vector3d mean_spin(const CMat& rho_a);
Eigen::Vector3d mean_spin(const JointState& psi);

struct TangentVariances {
  // angle from m toward n x m of the minimal-variance direction
  double chi = 0.0;
  double var_min = 0.0;
  double var_max = 0.0;
  Eigen::Vector3d n, m, t;
};

TangentVariances tangent_variances(const SpinMoments& s);
TangentVariances tangent_variances(const CMat& rho_a);
double squeezing_factor(const SpinMoments& s);
double squeezing_factor(const CMat& rho_a);

struct QuadratureStats {
  cplx mean = 0.0;
  cplx delta_a2 = 0.0;   // <a^2> - <a>^2
  double delta_n = 0.0;  // <n> - |<a>|^2
  double var_min = 0.25, var_max = 0.25, phi_min = 0.0;

  double mean_quadrature(double phi) const;
  double variance(double phi) const;
};

QuadratureStats quadrature_stats(const FieldMoments& f);
QuadratureStats quadrature_stats(const CMat& rho_f);

struct PhotonStats {
  double mean = 0.0;
  double variance = 0.0;
  std::optional<double> fano;
};

PhotonStats photon_stats(const FieldMoments& f);
PhotonStats photon_stats(const CMat& rho_f);

struct PhaseVariance {
  double value = 0.0;
  // rough bound on the neglected part of the double sum above the cut
  double remainder_bound = 0.0;
};

PhaseVariance pegg_barnett_variance(const CMat& rho_f);
PhaseVariance pegg_barnett_variance(const CVec& field_state);

bool vanishing_symmetry_check(const CMat& rho_f, const CMat& rho_a);

double purity(const CMat& rho);

struct ObservableRecord {
  double gt = 0.0;
  Eigen::Vector3d spin_mean = Eigen::Vector3d::Zero();
  double spin_length = 0.0;
  double var_sx = 0.0;
  double var_tangent_min = 0.0, var_tangent_max = 0.0, chi_min = 0.0;
  double squeezing_factor = 0.0;
  cplx a = 0.0;
  double var_a1 = 0.25, var_a2 = 0.25, var_a_min = 0.25, var_a_max = 0.25, phi_min = 0.0;
  double n_mean = 0.0, n_var = 0.0;
  double fano = 0.0;  // NaN when <n> = 0
  double phase_variance = 0.0, phase_ratio = 0.0;  // NaN unless requested
  double purity_field = 0.0, purity_atoms = 0.0;   // NaN unless available
};

ObservableRecord make_record(double gt, const SpinMoments& s, const FieldMoments& f);

// Column names of the record CSV, in write order.
const std::vector<std::string>& record_columns();
std::vector<double> record_row(const ObservableRecord& r);

struct UncertaintyCheck {
  double field_product_margin;  // Var a_phi Var a_phi+pi/2 - 1/16, minimized over phi
  double spin_margin;           // Var_min Var_max - |<S>|^2/4
};
UncertaintyCheck uncertainty_margins(const SpinMoments& s, const FieldMoments& f);

}  // namespace sqz
