#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <optional>
#include <utility>

namespace sqz {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

// Joint space {n} x {|S,M>}, S = N/2. Spin slot j = S - M, so j = 0 is the fully
// excited state. Joint index = n (2S+1) + j.
struct SpinFockBasis {
  int atoms = 1;
  int photon_cut = 0;

  double total_spin() const { return 0.5 * atoms; }
  int spin_dim() const { return atoms + 1; }
  int field_dim() const { return photon_cut + 1; }
  std::size_t dim() const { return std::size_t(field_dim()) * std::size_t(spin_dim()); }
  std::size_t index(int n, int j) const { return std::size_t(n) * std::size_t(spin_dim()) + std::size_t(j); }
  std::pair<int, int> decode(std::size_t i) const {
    return {int(i / std::size_t(spin_dim())), int(i % std::size_t(spin_dim()))};
  }
  double spin_m(int j) const { return total_spin() - j; }

  bool operator==(const SpinFockBasis&) const = default;
};

enum class Factor { field, spin };

struct JointState {
  SpinFockBasis basis;
  CVec amp;
};

struct JointDensity {
  SpinFockBasis basis;
  CMat rho;
};

enum class Sparsity { diagonal, tridiagonal, dense };

struct OperatorMatrix {
  CMat mat;
  Sparsity structure = Sparsity::dense;
};

struct SpinMatrices {
  OperatorMatrix sx, sy, sz, sp, sm;
};

struct FieldMatrices {
  OperatorMatrix a, ad, n;
};

struct CouplingConfig {
  double g = 1.0;
};

int default_photon_cut(int atoms, double alpha);
SpinFockBasis build_basis(int atoms, double alpha_hint, std::optional<int> n_max_override = std::nullopt);

// Smallest cut with Poisson tail sum_{n>cut} |c_n|^2 below tol.
int coherent_cut(double mean_photons, double tol = 1e-12);
double poisson_tail(double mean_photons, int cut);

CVec coherent_field_state(cplx alpha, int photon_cut);
CVec fock_state(int n, int photon_cut);
// Spin vector in slot order j = S - M.
CVec css_state(int atoms, double theta, double phi);
CVec dicke_state(int atoms, int j);

SpinMatrices spin_matrices(int atoms);
FieldMatrices field_matrices(int photon_cut);
// S+S- diagonal in slot order, i.e. (S+M)(S-M+1)
RVec lowering_weights(int atoms);
// <S,M+1|S+|S,M> for slot j (M = S-j); zero at j = 0
RVec raising_element(int atoms);

JointState product_state(const SpinFockBasis& basis, const CVec& field, const CVec& spin);
JointDensity density_of(const JointState& psi);

CMat partial_trace(const JointDensity& rho, Factor keep);
CMat reduced_density(const JointState& psi, Factor keep);

// Op on one factor, identity on the other; dense joint matrix, small bases only.
OperatorMatrix embed(const OperatorMatrix& op, Factor where, const SpinFockBasis& basis);

cplx expectation(const OperatorMatrix& op, const JointState& psi);
cplx expectation(const OperatorMatrix& op, const JointDensity& rho);
cplx expectation(const OperatorMatrix& op, Factor where, const JointState& psi);
cplx expectation(const OperatorMatrix& op, Factor where, const JointDensity& rho);

bool has_structure(const CMat& m, Sparsity s, double tol = 0.0);

}  // namespace sqz
