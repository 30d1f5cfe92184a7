#include "sqz/observables.hpp"

#include <cmath>
#include <limits>

#include "sqz/errors.hpp"

namespace sqz {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// band_k[j] = rho_A(j, j-k) for k = 0, 1, 2
struct SpinBands {
  CVec b0, b1, b2;
};

SpinMoments from_bands(int atoms, const SpinBands& b) {
  const double S = 0.5 * atoms;
  const RVec up = raising_element(atoms);
  double z1 = 0.0, z2 = 0.0;
  cplx p1 = 0.0, p2 = 0.0, q1 = 0.0;
  for (int j = 0; j <= atoms; ++j) {
    const double m = S - j;
    const double pj = b.b0[j].real();
    z1 += m * pj;
    z2 += m * m * pj;
    if (j >= 1) {
      p1 += up[j] * b.b1[j];
      q1 += (m + 1.0) * up[j] * b.b1[j];
    }
    if (j >= 2) p2 += up[j] * up[j - 1] * b.b2[j];
  }
  const double cas = S * (S + 1.0);
  SpinMoments s;
  s.mean = {p1.real(), p1.imag(), z1};
  const cplx zp = 2.0 * q1 - p1;
  Eigen::Matrix3d& M = s.second;
  M(0, 0) = 0.5 * (p2.real() + cas - z2);
  M(1, 1) = 0.5 * (-p2.real() + cas - z2);
  M(2, 2) = z2;
  M(0, 1) = M(1, 0) = 0.5 * p2.imag();
  M(0, 2) = M(2, 0) = 0.5 * zp.real();
  M(1, 2) = M(2, 1) = 0.5 * zp.imag();
  return s;
}

int atoms_of(const CMat& rho_a) {
  if (rho_a.rows() < 2 || rho_a.rows() != rho_a.cols()) throw DimensionMismatch("spin density must be square, size >= 2");
  return int(rho_a.rows()) - 1;
}

}  // namespace

SpinMoments spin_moments(const CMat& rho_a) {
  const int N = atoms_of(rho_a);
  SpinBands b{CVec::Zero(N + 1), CVec::Zero(N + 1), CVec::Zero(N + 1)};
  for (int j = 0; j <= N; ++j) {
    b.b0[j] = rho_a(j, j);
    if (j >= 1) b.b1[j] = rho_a(j, j - 1);
    if (j >= 2) b.b2[j] = rho_a(j, j - 2);
  }
  return from_bands(N, b);
}

SpinMoments spin_moments(const JointState& psi) {
  const auto& B = psi.basis;
  const int N = B.atoms, D = B.spin_dim();
  SpinBands b{CVec::Zero(D), CVec::Zero(D), CVec::Zero(D)};
  const cplx* p = psi.amp.data();
  for (int n = 0; n < B.field_dim(); ++n) {
    const cplx* row = p + B.index(n, 0);
    for (int j = 0; j < D; ++j) {
      const cplx v = row[j];
      b.b0[j] += std::norm(v);
      if (j >= 1) b.b1[j] += v * std::conj(row[j - 1]);
      if (j >= 2) b.b2[j] += v * std::conj(row[j - 2]);
    }
  }
  return from_bands(N, b);
}

FieldMoments field_moments(const CMat& rho_f) {
  FieldMoments f;
  const int F = int(rho_f.rows());
  for (int n = 0; n < F; ++n) {
    const double p = rho_f(n, n).real();
    f.n += n * p;
    f.n2 += double(n) * n * p;
    if (n + 1 < F) f.a += std::sqrt(n + 1.0) * rho_f(n + 1, n);
    if (n + 2 < F) f.a2 += std::sqrt((n + 1.0) * (n + 2.0)) * rho_f(n + 2, n);
  }
  return f;
}

FieldMoments field_moments(const JointState& psi) {
  const auto& B = psi.basis;
  const int F = B.field_dim(), D = B.spin_dim();
  const cplx* p = psi.amp.data();
  FieldMoments f;
  for (int n = 0; n < F; ++n) {
    const cplx* r0 = p + B.index(n, 0);
    double pn = 0.0;
    for (int j = 0; j < D; ++j) pn += std::norm(r0[j]);
    f.n += n * pn;
    f.n2 += double(n) * n * pn;
    if (n + 1 < F) {
      const cplx* r1 = p + B.index(n + 1, 0);
      cplx s = 0.0;
      for (int j = 0; j < D; ++j) s += r1[j] * std::conj(r0[j]);
      f.a += std::sqrt(n + 1.0) * s;
    }
    if (n + 2 < F) {
      const cplx* r2 = p + B.index(n + 2, 0);
      cplx s = 0.0;
      for (int j = 0; j < D; ++j) s += r2[j] * std::conj(r0[j]);
      f.a2 += std::sqrt((n + 1.0) * (n + 2.0)) * s;
    }
  }
  return f;
}

Eigen::Vector3d mean_spin(const CMat& rho_a) { return spin_moments(rho_a).mean; }
Eigen::Vector3d mean_spin(const JointState& psi) { return spin_moments(psi).mean; }

TangentVariances tangent_variances(const SpinMoments& s) {
  const double len = s.length();
  if (!(len > 1e-9)) throw DegenerateInput("mean spin vector has zero length");
  TangentVariances tv;
  tv.n = s.mean / len;
  Eigen::Vector3d m = tv.n.cross(Eigen::Vector3d::UnitZ());
  if (m.norm() < 1e-12)
    m = Eigen::Vector3d::UnitX();
  else
    m.normalize();
  tv.m = m;
  tv.t = tv.n.cross(m);
  const Eigen::Matrix3d C = s.covariance();
  Eigen::Matrix2d c2;
  c2(0, 0) = m.dot(C * m);
  c2(1, 1) = tv.t.dot(C * tv.t);
  c2(0, 1) = c2(1, 0) = m.dot(C * tv.t);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(c2);
  tv.var_min = es.eigenvalues()[0];
  tv.var_max = es.eigenvalues()[1];
  const Eigen::Vector2d v = es.eigenvectors().col(0);
  double chi = std::atan2(v[1], v[0]);
  if (chi > M_PI / 2) chi -= M_PI;
  if (chi <= -M_PI / 2) chi += M_PI;
  tv.chi = chi;
  return tv;
}

TangentVariances tangent_variances(const CMat& rho_a) { return tangent_variances(spin_moments(rho_a)); }

double squeezing_factor(const SpinMoments& s) { return 2.0 * tangent_variances(s).var_min / s.length(); }
double squeezing_factor(const CMat& rho_a) { return squeezing_factor(spin_moments(rho_a)); }

double QuadratureStats::mean_quadrature(double phi) const { return (mean * std::polar(1.0, -phi)).real(); }

double QuadratureStats::variance(double phi) const {
  return 0.25 * (1.0 + 2.0 * delta_n + 2.0 * (delta_a2 * std::polar(1.0, -2.0 * phi)).real());
}

QuadratureStats quadrature_stats(const FieldMoments& f) {
  QuadratureStats q;
  q.mean = f.a;
  q.delta_a2 = f.a2 - f.a * f.a;
  q.delta_n = f.n - std::norm(f.a);
  const double r = std::abs(q.delta_a2);
  q.var_min = 0.25 * (1.0 + 2.0 * q.delta_n - 2.0 * r);
  q.var_max = 0.25 * (1.0 + 2.0 * q.delta_n + 2.0 * r);
  double phi = 0.5 * (std::arg(q.delta_a2) + M_PI);
  if (phi >= M_PI) phi -= M_PI;
  q.phi_min = phi;
  return q;
}

QuadratureStats quadrature_stats(const CMat& rho_f) { return quadrature_stats(field_moments(rho_f)); }

PhotonStats photon_stats(const FieldMoments& f) {
  PhotonStats p;
  p.mean = f.n;
  p.variance = f.n2 - f.n * f.n;
  if (f.n > 1e-14) p.fano = p.variance / f.n;
  return p;
}

PhotonStats photon_stats(const CMat& rho_f) { return photon_stats(field_moments(rho_f)); }

namespace {

template <class Offdiag>
PhaseVariance pb_sum(int F, cplx mean_a, double top_population, Offdiag rho_low) {
  // rotate so <a> is real positive: rho_{n+d,n} -> rho_{n+d,n} e^{i d xi}
  const double xi = std::abs(mean_a) > 1e-9 ? -std::arg(mean_a) : 0.0;
  double acc = 0.0;
  for (int d = 1; d < F; ++d) {
    cplx s = 0.0;
    for (int n = 0; n + d < F; ++n) s += rho_low(n + d, n);
    const double w = (d % 2 ? -1.0 : 1.0) / (double(d) * d);
    acc += w * (s * std::polar(1.0, d * xi)).real();
  }
  PhaseVariance out;
  out.value = M_PI * M_PI / 3.0 + 4.0 * acc;
  out.remainder_bound = 2.0 * M_PI * M_PI / 3.0 * std::sqrt(std::max(top_population, 0.0));
  return out;
}

}  // namespace

PhaseVariance pegg_barnett_variance(const CMat& rho_f) {
  const int F = int(rho_f.rows());
  const FieldMoments f = field_moments(rho_f);
  return pb_sum(F, f.a, rho_f(F - 1, F - 1).real(), [&](int i, int j) { return rho_f(i, j); });
}

PhaseVariance pegg_barnett_variance(const CVec& c) {
  const int F = int(c.size());
  cplx a = 0.0;
  for (int n = 0; n + 1 < F; ++n) a += std::sqrt(n + 1.0) * c[n + 1] * std::conj(c[n]);
  return pb_sum(F, a, std::norm(c[F - 1]), [&](int i, int j) { return c[i] * std::conj(c[j]); });
}

bool vanishing_symmetry_check(const CMat& rho_f, const CMat& rho_a) {
  if (rho_f.imag().cwiseAbs().maxCoeff() >= 1e-12) return false;
  for (int i = 0; i < rho_a.rows(); ++i)
    for (int j = 0; j < rho_a.cols(); ++j)
      if ((i - j) % 2 != 0 && 2.0 * std::abs(rho_a(i, j)) >= 1e-12) return false;
  return true;
}

double purity(const CMat& rho) { return rho.cwiseAbs2().sum(); }

ObservableRecord make_record(double gt, const SpinMoments& s, const FieldMoments& f) {
  ObservableRecord r;
  r.gt = gt;
  r.spin_mean = s.mean;
  r.spin_length = s.length();
  r.var_sx = s.covariance()(0, 0);
  if (r.spin_length > 1e-9) {
    const TangentVariances tv = tangent_variances(s);
    r.var_tangent_min = tv.var_min;
    r.var_tangent_max = tv.var_max;
    r.chi_min = tv.chi;
    r.squeezing_factor = 2.0 * tv.var_min / r.spin_length;
  } else {
    r.var_tangent_min = r.var_tangent_max = r.chi_min = r.squeezing_factor = kNaN;
  }
  const QuadratureStats q = quadrature_stats(f);
  r.a = f.a;
  r.var_a1 = q.variance(0.0);
  r.var_a2 = q.variance(M_PI / 2);
  r.var_a_min = q.var_min;
  r.var_a_max = q.var_max;
  r.phi_min = q.phi_min;
  const PhotonStats p = photon_stats(f);
  r.n_mean = p.mean;
  r.n_var = p.variance;
  r.fano = p.fano ? *p.fano : kNaN;
  r.phase_variance = r.phase_ratio = kNaN;
  r.purity_field = r.purity_atoms = kNaN;
  return r;
}

const std::vector<std::string>& record_columns() {
  static const std::vector<std::string> cols{
      "gt",          "sx",         "sy",        "sz",          "spin_length",    "var_sx",
      "var_tan_min", "var_tan_max", "chi_min",  "squeezing",   "re_a",           "im_a",
      "var_a1",      "var_a2",      "var_a_min", "var_a_max",  "phi_min",        "n_mean",
      "n_var",       "fano",        "phase_var", "phase_ratio", "purity_field",  "purity_atoms"};
  return cols;
}

std::vector<double> record_row(const ObservableRecord& r) {
  return {r.gt,          r.spin_mean.x(),   r.spin_mean.y(), r.spin_mean.z(),   r.spin_length,
          r.var_sx,      r.var_tangent_min, r.var_tangent_max, r.chi_min,       r.squeezing_factor,
          r.a.real(),    r.a.imag(),        r.var_a1,        r.var_a2,          r.var_a_min,
          r.var_a_max,   r.phi_min,         r.n_mean,        r.n_var,           r.fano,
          r.phase_variance, r.phase_ratio,  r.purity_field,  r.purity_atoms};
}

UncertaintyCheck uncertainty_margins(const SpinMoments& s, const FieldMoments& f) {
  const QuadratureStats q = quadrature_stats(f);
  UncertaintyCheck u;
  u.field_product_margin = q.var_min * q.var_max - 1.0 / 16.0;
  const double len = s.length();
  if (len > 1e-9) {
    const TangentVariances tv = tangent_variances(s);
    u.spin_margin = tv.var_min * tv.var_max - len * len / 4.0;
  } else {
    u.spin_margin = 0.0;
  }
  return u;
}

}  // namespace sqz
