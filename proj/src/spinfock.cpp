#include "sqz/spinfock.hpp"

#include <cmath>
#include <string>

#include "sqz/errors.hpp"

namespace sqz {

int default_photon_cut(int atoms, double alpha) {
  return int(std::ceil(alpha * alpha + 10.0 * alpha + 20.0)) + atoms;
}

SpinFockBasis build_basis(int atoms, double alpha_hint, std::optional<int> n_max_override) {
  if (atoms < 1) throw InvalidArgument("atom count must be positive, got " + std::to_string(atoms));
  if (!(alpha_hint >= 0.0)) throw InvalidArgument("alpha hint must be nonnegative");
  if (n_max_override && *n_max_override < 0)
    throw InvalidArgument("photon cut override must be >= 0, got " + std::to_string(*n_max_override));
  SpinFockBasis b;
  b.atoms = atoms;
  b.photon_cut = n_max_override ? *n_max_override : default_photon_cut(atoms, alpha_hint);
  return b;
}

namespace {

// log of |c_n|^2 for the Poisson weights
double log_poisson(double mean, int n) {
  if (mean == 0.0) return n == 0 ? 0.0 : -INFINITY;
  return -mean + n * std::log(mean) - std::lgamma(n + 1.0);
}

}  // namespace

double poisson_tail(double mean, int cut) {
  if (mean == 0.0) return 0.0;
  // sum from cut+1 upward until terms are negligible against the running sum
  double sum = 0.0;
  for (int n = cut + 1;; ++n) {
    const double t = std::exp(log_poisson(mean, n));
    sum += t;
    if (n > mean && t < 1e-20 * std::max(sum, 1e-300)) break;
    if (n > cut + 100000) break;
  }
  return sum;
}

int coherent_cut(double mean, double tol) {
  int cut = int(std::floor(mean));
  while (poisson_tail(mean, cut) >= tol) ++cut;
  return cut;
}

CVec coherent_field_state(cplx alpha, int photon_cut) {
  if (photon_cut < 0) throw InvalidArgument("photon cut must be >= 0");
  const double mean = std::norm(alpha);
  const double tail = poisson_tail(mean, photon_cut);
  if (tail >= 1e-12)
    throw TruncationError("coherent state |alpha|^2=" + std::to_string(mean) + " needs a cut above " +
                          std::to_string(photon_cut) + " (tail " + std::to_string(tail) + ")");
  CVec c = CVec::Zero(photon_cut + 1);
  const double th = std::arg(alpha);
  for (int n = 0; n <= photon_cut; ++n) {
    if (mean == 0.0) {
      c[n] = n == 0 ? 1.0 : 0.0;
      continue;
    }
    const double mag = std::exp(0.5 * log_poisson(mean, n));
    c[n] = std::polar(mag, n * th);
  }
  c /= c.norm();
  return c;
}

CVec fock_state(int n, int photon_cut) {
  if (n < 0 || n > photon_cut) throw InvalidArgument("Fock level outside the cut");
  CVec c = CVec::Zero(photon_cut + 1);
  c[n] = 1.0;
  return c;
}

CVec css_state(int atoms, double theta, double phi) {
  if (!(theta >= 0.0 && theta <= M_PI)) throw InvalidArgument("css theta must lie in [0, pi]");
  const int d = atoms + 1;
  CVec c(d);
  const double s = std::sin(0.5 * theta), co = std::cos(0.5 * theta);
  for (int j = 0; j < d; ++j) {
    const double logb = std::lgamma(atoms + 1.0) - std::lgamma(j + 1.0) - std::lgamma(atoms - j + 1.0);
    const double mag = std::exp(0.5 * logb) * std::pow(s, j) * std::pow(co, atoms - j);
    c[j] = std::polar(mag, j * phi);
  }
  return c;
}

CVec dicke_state(int atoms, int j) {
  if (j < 0 || j > atoms) throw InvalidArgument("Dicke slot outside [0, N]");
  CVec c = CVec::Zero(atoms + 1);
  c[j] = 1.0;
  return c;
}

RVec raising_element(int atoms) {
  // S+|S,M> = sqrt((S-M)(S+M+1)) |S,M+1>; slot j -> j-1 with S-M = j
  RVec r = RVec::Zero(atoms + 1);
  for (int j = 1; j <= atoms; ++j) r[j] = std::sqrt(double(j) * double(atoms - j + 1));
  return r;
}

RVec lowering_weights(int atoms) {
  RVec w(atoms + 1);
  for (int j = 0; j <= atoms; ++j) w[j] = double(atoms - j) * double(j + 1);
  return w;
}

SpinMatrices spin_matrices(int atoms) {
  const int d = atoms + 1;
  const double S = 0.5 * atoms;
  const RVec up = raising_element(atoms);
  CMat sp = CMat::Zero(d, d), sz = CMat::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    sz(j, j) = S - j;
    if (j > 0) sp(j - 1, j) = up[j];
  }
  CMat sm = sp.adjoint();
  const cplx i(0.0, 1.0);
  SpinMatrices out;
  out.sp = {sp, Sparsity::tridiagonal};
  out.sm = {sm, Sparsity::tridiagonal};
  out.sz = {sz, Sparsity::diagonal};
  out.sx = {0.5 * (sp + sm), Sparsity::tridiagonal};
  out.sy = {(sp - sm) / (2.0 * i), Sparsity::tridiagonal};
  return out;
}

FieldMatrices field_matrices(int photon_cut) {
  const int d = photon_cut + 1;
  CMat a = CMat::Zero(d, d), n = CMat::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    n(k, k) = k;
    if (k > 0) a(k - 1, k) = std::sqrt(double(k));
  }
  FieldMatrices out;
  out.a = {a, Sparsity::tridiagonal};
  out.ad = {a.adjoint(), Sparsity::tridiagonal};
  out.n = {n, Sparsity::diagonal};
  return out;
}

JointState product_state(const SpinFockBasis& basis, const CVec& field, const CVec& spin) {
  if (field.size() != basis.field_dim() || spin.size() != basis.spin_dim())
    throw DimensionMismatch("product_state: factor sizes " + std::to_string(field.size()) + "x" +
                            std::to_string(spin.size()) + " do not match the basis");
  JointState psi{basis, CVec(basis.dim())};
  for (int n = 0; n < basis.field_dim(); ++n)
    for (int j = 0; j < basis.spin_dim(); ++j) psi.amp[basis.index(n, j)] = field[n] * spin[j];
  return psi;
}

JointDensity density_of(const JointState& psi) { return {psi.basis, psi.amp * psi.amp.adjoint()}; }

namespace {

using RowMajorC = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajorC> as_grid(const JointState& psi) {
  return {psi.amp.data(), psi.basis.field_dim(), psi.basis.spin_dim()};
}

}  // namespace

CMat reduced_density(const JointState& psi, Factor keep) {
  if (std::size_t(psi.amp.size()) != psi.basis.dim()) throw DimensionMismatch("state size does not match basis");
  auto g = as_grid(psi);
  if (keep == Factor::field) return g * g.adjoint();
  return g.transpose() * g.conjugate();
}

CMat partial_trace(const JointDensity& rho, Factor keep) {
  const auto& b = rho.basis;
  if (std::size_t(rho.rho.rows()) != b.dim() || std::size_t(rho.rho.cols()) != b.dim())
    throw DimensionMismatch("density size does not match basis");
  const int F = b.field_dim(), D = b.spin_dim();
  if (keep == Factor::field) {
    CMat out = CMat::Zero(F, F);
    for (int n = 0; n < F; ++n)
      for (int m = 0; m < F; ++m) {
        cplx s = 0.0;
        for (int j = 0; j < D; ++j) s += rho.rho(b.index(n, j), b.index(m, j));
        out(n, m) = s;
      }
    return out;
  }
  CMat out = CMat::Zero(D, D);
  for (int n = 0; n < F; ++n) out += rho.rho.block(b.index(n, 0), b.index(n, 0), D, D);
  return out;
}

OperatorMatrix embed(const OperatorMatrix& op, Factor where, const SpinFockBasis& b) {
  const int F = b.field_dim(), D = b.spin_dim();
  const std::size_t dim = b.dim();
  CMat out = CMat::Zero(dim, dim);
  if (where == Factor::field) {
    if (op.mat.rows() != F) throw DimensionMismatch("field operator size does not match basis");
    for (int n = 0; n < F; ++n)
      for (int m = 0; m < F; ++m)
        if (op.mat(n, m) != 0.0)
          for (int j = 0; j < D; ++j) out(b.index(n, j), b.index(m, j)) = op.mat(n, m);
  } else {
    if (op.mat.rows() != D) throw DimensionMismatch("spin operator size does not match basis");
    for (int n = 0; n < F; ++n) out.block(b.index(n, 0), b.index(n, 0), D, D) = op.mat;
  }
  return {out, Sparsity::dense};
}

cplx expectation(const OperatorMatrix& op, const JointState& psi) {
  if (std::size_t(op.mat.rows()) != psi.basis.dim() || op.mat.rows() != psi.amp.size())
    throw DimensionMismatch("operator size does not match state");
  return psi.amp.dot(op.mat * psi.amp);
}

cplx expectation(const OperatorMatrix& op, const JointDensity& rho) {
  if (op.mat.rows() != rho.rho.rows()) throw DimensionMismatch("operator size does not match density");
  return (op.mat * rho.rho).trace();
}

cplx expectation(const OperatorMatrix& op, Factor where, const JointState& psi) {
  const CMat r = reduced_density(psi, where);
  if (op.mat.rows() != r.rows()) throw DimensionMismatch("factor operator size does not match basis");
  return (op.mat * r).trace();
}

cplx expectation(const OperatorMatrix& op, Factor where, const JointDensity& rho) {
  const CMat r = partial_trace(rho, where);
  if (op.mat.rows() != r.rows()) throw DimensionMismatch("factor operator size does not match basis");
  return (op.mat * r).trace();
}

bool has_structure(const CMat& m, Sparsity s, double tol) {
  if (s == Sparsity::dense) return true;
  const int band = s == Sparsity::diagonal ? 0 : 1;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (std::abs(i - j) > band && std::abs(m(i, j)) > tol) return false;
  return true;
}

}  // namespace sqz
