#include "sqz/dynamics.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "sqz/errors.hpp"
#include "sqz/kernels.hpp"

namespace sqz {

BlockHamiltonian::BlockHamiltonian(const SpinFockBasis& basis, double g) : basis_(basis), g_(g) {
  if (!(g > 0.0)) throw InvalidArgument("coupling g must be positive");
  const int N = basis.atoms, nmax = basis.photon_cut;
  blocks_.resize(std::size_t(nmax + N + 1));
  for (int E = 0; E <= nmax + N; ++E) {
    Block& b = blocks_[E];
    b.excitation = E;
    b.n_first = std::max(0, E - N);
    b.size = std::min(E, nmax) - b.n_first + 1;
    b.coupling.resize(std::max(0, b.size - 1));
    for (int p = 0; p + 1 < b.size; ++p) {
      const int n = b.n_first + p, k = E - n;
      b.coupling[p] = g * std::sqrt(n + 1.0) * std::sqrt(double(k) * double(N - k + 1));
    }
    if (b.size == 1) {
      b.freq = RVec::Zero(1);
      b.modes = RMat::Identity(1, 1);
      continue;
    }
    Eigen::SelfAdjointEigenSolver<RMat> es;
    es.computeFromTridiagonal(RVec::Zero(b.size), b.coupling, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw ConvergenceError("tridiagonal eigensolver failed on block " + std::to_string(E));
    b.freq = es.eigenvalues();
    b.modes = es.eigenvectors();
  }
}

std::shared_ptr<const BlockHamiltonian> BlockHamiltonian::cached(const SpinFockBasis& basis, double g) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, double>, std::shared_ptr<const BlockHamiltonian>> cache;
  const auto key = std::make_tuple(basis.atoms, basis.photon_cut, g);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto h = std::make_shared<const BlockHamiltonian>(basis, g);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, h).first->second;
}

double BlockHamiltonian::max_residual() const {
  double worst = 0.0;
  for (const Block& b : blocks_) {
    RMat T = RMat::Zero(b.size, b.size);
    for (int p = 0; p + 1 < b.size; ++p) T(p, p + 1) = T(p + 1, p) = b.coupling[p];
    const RMat r = T * b.modes - b.modes * b.freq.asDiagonal();
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  return worst;
}

CMat BlockHamiltonian::dense() const {
  const std::size_t dim = basis_.dim();
  CMat H = CMat::Zero(dim, dim);
  for (const Block& b : blocks_)
    for (int p = 0; p + 1 < b.size; ++p) {
      const std::size_t i = joint_index(b, p), j = joint_index(b, p + 1);
      H(i, j) = H(j, i) = b.coupling[p];
    }
  return H;
}

namespace {

void check_basis(const JointState& psi, const SpinFockBasis& b) {
  if (!(psi.basis == b) || std::size_t(psi.amp.size()) != b.dim())
    throw DimensionMismatch("state basis does not match the Hamiltonian basis");
}

}  // namespace

JointState evolve_unitary(const JointState& psi, const BlockHamiltonian& H, double gt) {
  check_basis(psi, H.basis());
  JointState out{psi.basis, CVec(psi.amp.size())};
  CVec x, y;
  for (const Block& b : H.blocks()) {
    x.resize(b.size);
    y.resize(b.size);
    for (int p = 0; p < b.size; ++p) x[p] = psi.amp[H.joint_index(b, p)];
    kernels::gemv_t(b.size, b.size, b.modes.data(), b.size, x.data(), y.data());
    for (int q = 0; q < b.size; ++q) y[q] *= std::polar(1.0, -b.freq[q] * gt);
    kernels::gemv(b.size, b.size, b.modes.data(), b.size, y.data(), x.data());
    for (int p = 0; p < b.size; ++p) out.amp[H.joint_index(b, p)] = x[p];
  }
  return out;
}

PureTrajectory::PureTrajectory(std::shared_ptr<const BlockHamiltonian> H, const JointState& psi0) : H_(std::move(H)) {
  check_basis(psi0, H_->basis());
  const auto& blocks = H_->blocks();
  proj_.resize(blocks.size());
  CVec x;
  for (std::size_t e = 0; e < blocks.size(); ++e) {
    const Block& b = blocks[e];
    x.resize(b.size);
    double mass = 0.0;
    for (int p = 0; p < b.size; ++p) {
      x[p] = psi0.amp[H_->joint_index(b, p)];
      mass += std::norm(x[p]);
    }
    // blocks holding less than 1e-32 of the norm are below double resolution
    if (mass < 1e-32) continue;
    proj_[e].resize(b.size);
    kernels::gemv_t(b.size, b.size, b.modes.data(), b.size, x.data(), proj_[e].data());
    active_.push_back(int(e));
  }
}

void PureTrajectory::at(double gt, CVec& out) const {
  out.setZero(H_->basis().dim());
  CVec y, x;
  for (int e : active_) {
    const Block& b = H_->blocks()[e];
    y.resize(b.size);
    x.resize(b.size);
    for (int q = 0; q < b.size; ++q) y[q] = proj_[e][q] * std::polar(1.0, -b.freq[q] * gt);
    kernels::gemv(b.size, b.size, b.modes.data(), b.size, y.data(), x.data());
    for (int p = 0; p < b.size; ++p) out[H_->joint_index(b, p)] = x[p];
  }
}

JointState PureTrajectory::at(double gt) const {
  JointState s{H_->basis(), CVec()};
  at(gt, s.amp);
  return s;
}

namespace {

// exp(-i angle G) for Hermitian G whose spectrum is {-S, ..., S}
CMat exp_spin_generator(const CMat& G, double angle) {
  Eigen::SelfAdjointEigenSolver<CMat> es(G);
  const int d = int(G.rows());
  CVec ph(d);
  for (int q = 0; q < d; ++q) {
    // snap to the exact half-integer ladder so 2 pi rotations are exact
    const double m = std::round(2.0 * es.eigenvalues()[q]) / 2.0;
    ph[q] = std::polar(1.0, -angle * m);
  }
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

CMat z_phase(int atoms, double angle) {
  CMat Z = CMat::Zero(atoms + 1, atoms + 1);
  for (int j = 0; j <= atoms; ++j) Z(j, j) = std::polar(1.0, -angle * (0.5 * atoms - j));
  return Z;
}

}  // namespace

CMat rotation_matrix(int atoms, const RotationSpec& r) {
  if (!std::isfinite(r.angle) || !std::isfinite(r.axis_azimuth)) throw InvalidArgument("rotation angle must be finite");
  if (r.kind == RotationSpec::Kind::z) return z_phase(atoms, r.angle);
  const SpinMatrices s = spin_matrices(atoms);
  const CMat rx = exp_spin_generator(s.sx.mat, r.angle);
  // G = e^{i phi_c Sz} Sx e^{-i phi_c Sz}
  return z_phase(atoms, -r.axis_azimuth) * rx * z_phase(atoms, r.axis_azimuth);
}

CMat rotation_about(int atoms, const Eigen::Vector3d& axis, double angle) {
  const SpinMatrices s = spin_matrices(atoms);
  const Eigen::Vector3d u = axis.normalized();
  const CMat G = u.x() * s.sx.mat + u.y() * s.sy.mat + u.z() * s.sz.mat;
  return exp_spin_generator(G, angle);
}

CVec rotate_spin(const CVec& spin, const RotationSpec& r) { return rotation_matrix(int(spin.size()) - 1, r) * spin; }

CMat rotate_spin(const CMat& rho_a, const RotationSpec& r) {
  const CMat U = rotation_matrix(int(rho_a.rows()) - 1, r);
  return U * rho_a * U.adjoint();
}

JointState apply_spin_unitary(const JointState& psi, const CMat& U) {
  const auto& b = psi.basis;
  if (U.rows() != b.spin_dim()) throw DimensionMismatch("spin unitary size does not match basis");
  JointState out{b, CVec(psi.amp.size())};
  using RowMajorC = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMajorC> in(psi.amp.data(), b.field_dim(), b.spin_dim());
  Eigen::Map<RowMajorC> o(out.amp.data(), b.field_dim(), b.spin_dim());
  o.noalias() = in * U.transpose();
  return out;
}

JointDensity apply_spin_unitary(const JointDensity& rho, const CMat& U) {
  const auto& b = rho.basis;
  if (U.rows() != b.spin_dim()) throw DimensionMismatch("spin unitary size does not match basis");
  const int F = b.field_dim(), D = b.spin_dim();
  JointDensity out{b, CMat(rho.rho.rows(), rho.rho.cols())};
  for (int n = 0; n < F; ++n)
    for (int m = 0; m < F; ++m)
      out.rho.block(b.index(n, 0), b.index(m, 0), D, D) = U * rho.rho.block(b.index(n, 0), b.index(m, 0), D, D) * U.adjoint();
  return out;
}

JointState rotate_spin(const JointState& psi, const RotationSpec& r) {
  return apply_spin_unitary(psi, rotation_matrix(psi.basis.atoms, r));
}

JointDensity rotate_spin(const JointDensity& rho, const RotationSpec& r) {
  return apply_spin_unitary(rho, rotation_matrix(rho.basis.atoms, r));
}

CMat alignment_unitary(const CMat& rho_a, double target_tilt, double squeeze_azimuth) {
  const int N = int(rho_a.rows()) - 1;
  const SpinMoments s = spin_moments(rho_a);
  const double len = s.length();
  if (!(len > 1e-9)) throw DegenerateInput("align_and_tilt: mean spin vector has zero length");
  const Eigen::Vector3d n = s.mean / len;

  CMat U1;
  const Eigen::Vector3d k(-n.y(), n.x(), 0.0);
  if (k.norm() < 1e-12) {
    U1 = n.z() < 0 ? CMat::Identity(N + 1, N + 1) : rotation_matrix(N, RotationSpec::transverse(0.0, M_PI));
  } else {
    const Eigen::Vector3d kh = k.normalized();
    const double angle = std::acos(std::clamp(-n.z(), -1.0, 1.0));
    U1 = rotation_matrix(N, RotationSpec::transverse(std::atan2(-kh.y(), kh.x()), angle));
  }

  const CMat at_pole = U1 * rho_a * U1.adjoint();
  const Eigen::Matrix3d C = spin_moments(at_pole).covariance();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(C.topLeftCorner<2, 2>());
  const Eigen::Vector2d v = es.eigenvectors().col(0);
  const double beta = std::atan2(v.y(), v.x());

  const CMat U2 = rotation_matrix(N, RotationSpec::about_z(squeeze_azimuth - beta));
  const CMat U3 = rotation_matrix(N, RotationSpec::transverse(0.0, target_tilt));
  return U3 * U2 * U1;
}

CMat align_and_tilt(const CMat& rho_a, double target_tilt, double squeeze_azimuth) {
  const CMat U = alignment_unitary(rho_a, target_tilt, squeeze_azimuth);
  return U * rho_a * U.adjoint();
}

CVec align_and_tilt(const CVec& spin, double target_tilt, double squeeze_azimuth) {
  const CMat rho = spin * spin.adjoint();
  return alignment_unitary(rho, target_tilt, squeeze_azimuth) * spin;
}

JointState align_and_tilt(const JointState& psi, double target_tilt, double squeeze_azimuth) {
  const CMat rho_a = reduced_density(psi, Factor::spin);
  return apply_spin_unitary(psi, alignment_unitary(rho_a, target_tilt, squeeze_azimuth));
}

}  // namespace sqz
