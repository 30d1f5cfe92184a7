#pragma once

#include <memory>
#include <vector>

#include "sqz/observables.hpp"
#include "sqz/spinfock.hpp"

namespace sqz {

// One conserved-excitation block, E = n + S + M. Member p has photon number
// n_first + p; its joint index is (n_first + p)(2S+2) + N - E.
struct Block {
  int excitation = 0;
  int n_first = 0;
  int size = 0;
  RVec coupling;  // size-1 off-diagonal elements
  RVec freq;      // eigenvalues, ascending
  RMat modes;     // eigenvectors as columns
};

class BlockHamiltonian {
 public:
  BlockHamiltonian(const SpinFockBasis& basis, double g = 1.0);

  // Shared instance keyed by (N, n_max, g).
  static std::shared_ptr<const BlockHamiltonian> cached(const SpinFockBasis& basis, double g = 1.0);

  const SpinFockBasis& basis() const { return basis_; }
  double coupling() const { return g_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const Block& block(int excitation) const { return blocks_.at(excitation); }
  std::size_t joint_index(const Block& b, int p) const {
    return std::size_t(b.n_first + p) * std::size_t(basis_.spin_dim() + 1) + std::size_t(basis_.atoms - b.excitation);
  }

  // Largest |HV - V Lambda| over all blocks.
  double max_residual() const;
  // Dense joint-space matrix for small bases.
  CMat dense() const;

 private:
  SpinFockBasis basis_;
  double g_;
  std::vector<Block> blocks_;
};

JointState evolve_unitary(const JointState& psi, const BlockHamiltonian& H, double gt);

// Repeated evaluation of one initial state at many times.
class PureTrajectory {
 public:
  PureTrajectory(std::shared_ptr<const BlockHamiltonian> H, const JointState& psi0);
  void at(double gt, CVec& out) const;
  JointState at(double gt) const;
  const SpinFockBasis& basis() const { return H_->basis(); }

 private:
  std::shared_ptr<const BlockHamiltonian> H_;
  std::vector<int> active_;
  std::vector<CVec> proj_;
};

struct RotationSpec {
  enum class Kind { transverse, z };
  Kind kind = Kind::transverse;
  double axis_azimuth = 0.0;  // phi_c: axis (cos phi_c, -sin phi_c, 0)
  double angle = 0.0;

  static RotationSpec transverse(double phi_c, double angle) { return {Kind::transverse, phi_c, angle}; }
  static RotationSpec about_z(double angle) { return {Kind::z, 0.0, angle}; }
};

// exp(-i angle (Sx cos phi_c - Sy sin phi_c)) or exp(-i angle Sz) in slot order.
CMat rotation_matrix(int atoms, const RotationSpec& r);
// Rotation by angle about an arbitrary unit axis u, exp(-i angle u.S).
CMat rotation_about(int atoms, const Eigen::Vector3d& axis, double angle);

CVec rotate_spin(const CVec& spin, const RotationSpec& r);
CMat rotate_spin(const CMat& rho_a, const RotationSpec& r);
JointState rotate_spin(const JointState& psi, const RotationSpec& r);
JointDensity rotate_spin(const JointDensity& rho, const RotationSpec& r);

// Unitary that (1) turns the mean spin to -z about an axis in the xy plane,
// (2) turns about z so the minimal-variance tangent direction at the pole sits at
// squeeze_azimuth from +x, (3) tilts by target_tilt about +x. The mean then points
// along (0, sin tilt, -cos tilt); squeeze_azimuth 0 squeezes the azimuthal
// direction, pi/2 the polar one.
CMat alignment_unitary(const CMat& rho_a, double target_tilt, double squeeze_azimuth);
CMat align_and_tilt(const CMat& rho_a, double target_tilt, double squeeze_azimuth);
CVec align_and_tilt(const CVec& spin, double target_tilt, double squeeze_azimuth);
JointState align_and_tilt(const JointState& psi, double target_tilt, double squeeze_azimuth);

// Apply a spin-factor unitary to a joint state or density.
JointState apply_spin_unitary(const JointState& psi, const CMat& U);
JointDensity apply_spin_unitary(const JointDensity& rho, const CMat& U);

// Emission of initially unexcited cavity: evolves |0><0| (x) rho_A exactly using
// only the blocks reachable from the vacuum. w_k is the evolved |0, k excitations>.
class EmissionPropagator {
 public:
  explicit EmissionPropagator(int atoms, double g = 1.0);

  struct Frame {
    double gt = 0.0;
    std::vector<CVec> w;  // w[k][n], n = 0..k, the spin keeps k - n excitations
  };

  int atoms() const { return atoms_; }
  Frame at(double gt) const;
  // Reduced field density, size (N+1).
  CMat field_density(const Frame& f, const CMat& rho_a) const;
  // Reduced spin density in slot order.
  CMat spin_density(const Frame& f, const CMat& rho_a) const;

 private:
  int atoms_;
  std::shared_ptr<const BlockHamiltonian> H_;
};

}  // namespace sqz
