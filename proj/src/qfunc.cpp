#include "sqz/qfunc.hpp"

#include <cmath>

#include "sqz/errors.hpp"

namespace sqz {

namespace {

// rho = L L^dagger with L restricted to the nonnegative part of the spectrum.
CMat density_factor(const CMat& rho) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (rho + rho.adjoint()));
  const RVec& w = es.eigenvalues();
  const double cut = 1e-15 * std::max(w.maxCoeff(), 0.0);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < w.size(); ++k)
    if (w[k] > cut) keep.push_back(k);
  CMat L(rho.rows(), Eigen::Index(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) L.col(Eigen::Index(c)) = es.eigenvectors().col(keep[c]) * std::sqrt(w[keep[c]]);
  return L;
}

double trapezoid_weight(int i, int n, double h) { return (i == 0 || i == n - 1) ? 0.5 * h : h; }

}  // namespace

double QGrid::integral() const {
  const double h1 = first.points > 1 ? (first.hi - first.lo) / (first.points - 1) : 0.0;
  const double h2 = second.points > 1 ? (second.hi - second.lo) / (second.points - 1) : 0.0;
  double s = 0.0;
  for (int i = 0; i < first.points; ++i) {
    double w1 = trapezoid_weight(i, first.points, h1);
    if (kind == Kind::spin) w1 *= std::sin(first.at(i));
    for (int k = 0; k < second.points; ++k) s += w1 * trapezoid_weight(k, second.points, h2) * value(i, k);
  }
  return s;
}

QGrid qfunc_field(const CMat& rho_f, const FieldGridSpec& spec) {
  if (spec.points < 2 || !(spec.half_width > 0.0)) throw InvalidArgument("qfunc_field: empty grid");
  QGrid q;
  q.kind = QGrid::Kind::field;
  q.first = {"re_alpha", spec.center.real() - spec.half_width, spec.center.real() + spec.half_width, spec.points};
  q.second = {"im_alpha", spec.center.imag() - spec.half_width, spec.center.imag() + spec.half_width, spec.points};
  q.values.assign(std::size_t(spec.points) * spec.points, 0.0);
  const CMat L = density_factor(rho_f);
  const Eigen::Index F = rho_f.rows();
  CMat V(F, spec.points);
  for (int i = 0; i < spec.points; ++i) {
    const double x = q.first.at(i);
    for (int k = 0; k < spec.points; ++k) {
      const cplx a(x, q.second.at(k));
      cplx c = std::exp(-0.5 * std::norm(a));
      for (Eigen::Index n = 0; n < F; ++n) {
        V(n, k) = c;
        c *= a / std::sqrt(double(n + 1));
      }
    }
    // <alpha|rho|alpha> = |L^dagger |alpha>|^2
    const CMat Y = L.adjoint() * V;
    for (int k = 0; k < spec.points; ++k)
      q.values[std::size_t(i) * spec.points + k] = Y.col(k).squaredNorm() / M_PI;
  }
  return q;
}

QGrid qfunc_spin(const CMat& rho_a, const SpinGridSpec& spec) {
  if (spec.theta_points < 2 || spec.phi_points < 2) throw InvalidArgument("qfunc_spin: empty grid");
  const int N = int(rho_a.rows()) - 1;
  QGrid q;
  q.kind = QGrid::Kind::spin;
  q.first = {"theta", 0.0, M_PI, spec.theta_points};
  q.second = {"phi", 0.0, 2.0 * M_PI, spec.phi_points};
  q.values.assign(std::size_t(spec.theta_points) * spec.phi_points, 0.0);
  const CMat L = density_factor(rho_a);
  RVec binom(N + 1);
  for (int j = 0; j <= N; ++j)
    binom[j] = std::exp(0.5 * (std::lgamma(N + 1.0) - std::lgamma(j + 1.0) - std::lgamma(N - j + 1.0)));
  const double norm = (N + 1.0) / (4.0 * M_PI);
  CMat V(N + 1, spec.phi_points);
  RVec mag(N + 1);
  for (int i = 0; i < spec.theta_points; ++i) {
    const double th = q.first.at(i);
    const double s = std::sin(0.5 * th), c = std::cos(0.5 * th);
    for (int j = 0; j <= N; ++j) mag[j] = binom[j] * std::pow(s, j) * std::pow(c, N - j);
    for (int k = 0; k < spec.phi_points; ++k) {
      const double ph = q.second.at(k);
      for (int j = 0; j <= N; ++j) V(j, k) = mag[j] * std::polar(1.0, j * ph);
    }
    const CMat Y = L.adjoint() * V;
    for (int k = 0; k < spec.phi_points; ++k)
      q.values[std::size_t(i) * spec.phi_points + k] = norm * Y.col(k).squaredNorm();
  }
  return q;
}

}  // namespace sqz
