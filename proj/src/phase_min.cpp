#include "sqz/phase_min.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <sstream>

#include "sqz/errors.hpp"
#include "sqz/observables.hpp"

namespace sqz {

RMat phase_coupling_matrix(int photon_cut) {
  const int F = photon_cut + 1;
  RMat A = RMat::Zero(F, F);
  for (int n = 0; n < F; ++n)
    for (int m = 0; m < F; ++m) {
      if (n == m) continue;
      const int d = n - m;
      A(n, m) = (d % 2 ? -1.0 : 1.0) / double(d * d);
    }
  return A;
}

RVec phase_trial_state(const RMat& A, double beta, double* eigenvalue) {
  RMat M = 2.0 * A;
  for (Eigen::Index n = 0; n < M.rows(); ++n) M(n, n) += beta * double(n);
  Eigen::SelfAdjointEigenSolver<RMat> es(M);
  RVec c = es.eigenvectors().col(0);
  if (c.sum() < 0.0) c = -c;
  if (eigenvalue) *eigenvalue = es.eigenvalues()[0];
  return c;
}

namespace {

double mean_number(const RVec& c) {
  double s = 0.0;
  for (Eigen::Index n = 0; n < c.size(); ++n) s += double(n) * c[n] * c[n];
  return s;
}

}  // namespace

int default_phase_cut(double nbar) { return int(std::ceil(4.0 * nbar)) + 40; }

PhaseMinProblem min_phase_state(double nbar, int photon_cut) {
  if (!(nbar >= 0.0) || nbar > photon_cut) throw InvalidArgument("min_phase_state needs 0 <= nbar <= n_max");
  PhaseMinProblem p;
  p.nbar = nbar;
  p.photon_cut = photon_cut;
  const RMat A = phase_coupling_matrix(photon_cut);
  if (nbar == 0.0) {
    p.c = RVec::Zero(photon_cut + 1);
    p.c[0] = 1.0;
    p.variance = M_PI * M_PI / 3.0;
    return p;
  }

  auto mean_at = [&](double beta) { return mean_number(phase_trial_state(A, beta)); };

  // <n> decreases with beta; locate a bracket by doubling.
  std::ostringstream scan;
  double lo = 0.0, hi = 1.0;
  double n_lo = mean_at(lo);
  scan << "beta=" << lo << " <n>=" << n_lo << "; ";
  if (n_lo < nbar) {
    hi = 0.0;
    lo = -1.0;
    for (int it = 0; it < 60; ++it) {
      n_lo = mean_at(lo);
      scan << "beta=" << lo << " <n>=" << n_lo << "; ";
      if (n_lo >= nbar) break;
      lo *= 2.0;
    }
    if (n_lo < nbar) throw OptimizationFailure("min_phase_state: no beta bracket (" + scan.str() + ")");
  } else {
    double n_hi = mean_at(hi);
    scan << "beta=" << hi << " <n>=" << n_hi << "; ";
    for (int it = 0; it < 60 && n_hi > nbar; ++it) {
      lo = hi;
      hi *= 2.0;
      n_hi = mean_at(hi);
      scan << "beta=" << hi << " <n>=" << n_hi << "; ";
    }
    if (n_hi > nbar) throw OptimizationFailure("min_phase_state: no beta bracket (" + scan.str() + ")");
  }

  double prev = mean_at(lo);
  for (int k = 1; k <= 8; ++k) {
    const double v = mean_at(lo + (hi - lo) * k / 8.0);
    if (v > prev + 1e-12) throw OptimizationFailure("min_phase_state: <n> not monotone in beta on the bracket");
    prev = v;
  }

  // TOMS 748 on <n>(beta) - nbar; a few tens of eigensolves instead of a bisection
  std::uintmax_t iters = 200;
  const auto root = boost::math::tools::toms748_solve([&](double b) { return mean_at(b) - nbar; }, lo, hi,
                                                      boost::math::tools::eps_tolerance<double>(50), iters);
  const double b_lo = mean_at(root.first) - nbar, b_hi = mean_at(root.second) - nbar;
  p.beta = std::abs(b_lo) <= std::abs(b_hi) ? root.first : root.second;

  double mu = 0.0;
  p.c = phase_trial_state(A, p.beta, &mu);
  p.lambda = -mu;
  RMat M = 2.0 * A;
  for (Eigen::Index n = 0; n < M.rows(); ++n) M(n, n) += p.beta * double(n);
  p.eigen_residual = (M * p.c - mu * p.c).norm();
  p.norm_error = std::abs(p.c.squaredNorm() - 1.0);
  p.mean_error = std::abs(mean_number(p.c) - nbar);
  p.stationarity = std::sqrt(4.0 * p.eigen_residual * p.eigen_residual + p.norm_error * p.norm_error +
                             p.mean_error * p.mean_error);
  p.variance = M_PI * M_PI / 3.0 + 2.0 * p.c.dot(A * p.c);
  p.tail = p.c.tail(photon_cut - photon_cut / 2).squaredNorm();
  return p;
}

PhaseMinProblem converged_phase_state(double nbar, double tail_tol, int max_cut) {
  int cut = std::max(default_phase_cut(nbar), 2);
  PhaseMinProblem p = min_phase_state(nbar, cut);
  while (p.tail >= tail_tol) {
    if (2 * cut > max_cut)
      throw TruncationError("min_phase_state: tail " + std::to_string(p.tail) + " at cut " + std::to_string(cut) +
                            " and the next doubling exceeds " + std::to_string(max_cut));
    cut *= 2;
    p = min_phase_state(nbar, cut);
  }
  return p;
}

double coherent_phase_baseline(double nbar) {
  if (!(nbar >= 0.0)) throw InvalidArgument("coherent_phase_baseline needs nbar >= 0");
  const int cut = std::max(coherent_cut(nbar), 1);
  return pegg_barnett_variance(coherent_field_state(cplx(std::sqrt(nbar), 0.0), cut)).value;
}

}  // namespace sqz
