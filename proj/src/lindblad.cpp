#include "sqz/lindblad.hpp"

#include <cmath>
#include <string>

#include "sqz/errors.hpp"
#include "sqz/kernels.hpp"

namespace sqz {

double default_dt(const SpinFockBasis& b) {
  return 0.1 / std::sqrt(double(std::max(b.photon_cut, 1)) * double(b.atoms));
}

MasterEquation::MasterEquation(const BlockHamiltonian& H, DissipationParams params)
    : basis_(H.basis()), params_(params) {
  if (params.gamma_f < 0.0 || params.gamma_a < 0.0) throw InvalidArgument("decay rates must be nonnegative");
  const auto& b = basis_;
  const std::size_t dim = b.dim();
  const int N = b.atoms, D = b.spin_dim();
  shift_ = std::size_t(D + 1);
  up_ = RVec::Zero(dim);
  a_ = RVec::Zero(dim);
  b_ = RVec::Zero(dim);
  decay_ = RVec::Zero(dim);
  const RVec raise = raising_element(N);
  const RVec sps = lowering_weights(N);
  const double g = H.coupling();
  for (std::size_t i = 0; i < dim; ++i) {
    const auto [n, j] = b.decode(i);
    const int k = N - j;
    if (n < b.photon_cut && j < N) up_[i] = g * std::sqrt(n + 1.0) * std::sqrt(double(k) * double(N - k + 1));
    if (n < b.photon_cut) a_[i] = std::sqrt(n + 1.0);
    b_[i] = raise[j];
    decay_[i] = 0.5 * params.gamma_f * n + 0.5 * params.gamma_a * sps[j];
  }
}

void MasterEquation::rhs(const CMat& rho, CMat& out) const {
  const std::size_t dim = basis_.dim(), s = shift_, D = std::size_t(basis_.spin_dim());
  out.resize(dim, dim);
  CVec t(dim);
  const cplx minus_i(0.0, -1.0);
  const double gf = params_.gamma_f, ga = params_.gamma_a;
  for (std::size_t l = 0; l < dim; ++l) {
    const cplx* col = rho.data() + l * dim;
    cplx* o = out.data() + l * dim;
    t.setZero();
    // H rho
    if (dim > s) {
      kernels::weighted_axpy(dim - s, 1.0, up_.data(), col + s, t.data());
      kernels::weighted_axpy(dim - s, 1.0, up_.data(), col, t.data() + s);
    }
    // - rho H
    if (l + s < dim && up_[l] != 0.0) kernels::axpy_real(dim, -up_[l], rho.data() + (l + s) * dim, t.data());
    if (l >= s && up_[l - s] != 0.0) kernels::axpy_real(dim, -up_[l - s], rho.data() + (l - s) * dim, t.data());
    for (std::size_t i = 0; i < dim; ++i) o[i] = 0.0;
    kernels::axpy(dim, minus_i, t.data(), o);
    // -(c_i + c_l) rho
    kernels::weighted_axpy(dim, -1.0, decay_.data(), col, o);
    kernels::axpy_real(dim, -decay_[l], col, o);
    // gamma_f a rho a+
    if (gf > 0.0 && a_[l] != 0.0 && l + D < dim)
      kernels::weighted_axpy(dim - D, gf * a_[l], a_.data(), rho.data() + (l + D) * dim + D, o);
    // gamma_a S- rho S+
    if (ga > 0.0 && b_[l] != 0.0 && l >= 1)
      kernels::weighted_axpy(dim - 1, ga * b_[l], b_.data() + 1, rho.data() + (l - 1) * dim, o + 1);
  }
}

void MasterEquation::rk4_step(CMat& rho, double dt) const {
  const std::size_t n = std::size_t(rho.size());
  rhs(rho, k1_);
  tmp_ = rho;
  kernels::axpy_real(n, 0.5 * dt, k1_.data(), tmp_.data());
  rhs(tmp_, k2_);
  tmp_ = rho;
  kernels::axpy_real(n, 0.5 * dt, k2_.data(), tmp_.data());
  rhs(tmp_, k3_);
  tmp_ = rho;
  kernels::axpy_real(n, dt, k3_.data(), tmp_.data());
  rhs(tmp_, k4_);
  kernels::axpy_real(n, dt / 6.0, k1_.data(), rho.data());
  kernels::axpy_real(n, dt / 3.0, k2_.data(), rho.data());
  kernels::axpy_real(n, dt / 3.0, k3_.data(), rho.data());
  kernels::axpy_real(n, dt / 6.0, k4_.data(), rho.data());
}

CMat lindblad_rhs(const JointDensity& rho, const BlockHamiltonian& H, DissipationParams params) {
  if (!(rho.basis == H.basis()) || std::size_t(rho.rho.rows()) != H.basis().dim())
    throw DimensionMismatch("density basis does not match the Hamiltonian basis");
  MasterEquation me(H, params);
  CMat out;
  me.rhs(rho.rho, out);
  return out;
}

MasterSample sample_of(double gt, const JointDensity& rho) {
  return {gt, spin_moments(partial_trace(rho, Factor::spin)), field_moments(partial_trace(rho, Factor::field))};
}

namespace {

std::vector<double> tracked(const MasterSample& s) {
  const auto& m = s.spin;
  const auto& f = s.field;
  return {m.mean.x(),     m.mean.y(),     m.mean.z(),    m.second(0, 0), m.second(1, 1), m.second(2, 2),
          m.second(0, 1), m.second(0, 2), m.second(1, 2), f.a.real(),    f.a.imag(),     f.a2.real(),
          f.a2.imag(),    f.n,            f.n2};
}

struct Pass {
  JointDensity final;
  std::vector<MasterSample> samples;
  double trace_drift = 0.0;
};

Pass run_pass(const MasterEquation& me, const JointDensity& rho0, int n_samples, int steps_per_sample, double dt,
              double sample_dt, const SampleStop& stop, long max_steps) {
  Pass p;
  p.final = rho0;
  const double tr0 = rho0.rho.trace().real();
  p.samples.push_back(sample_of(0.0, rho0));
  if (stop && stop(p.samples)) return p;
  long steps = 0;
  for (int k = 1; k <= n_samples; ++k) {
    for (int s = 0; s < steps_per_sample; ++s) me.rk4_step(p.final.rho, dt);
    steps += steps_per_sample;
    if (steps > max_steps) throw ConvergenceError("master equation exceeded max_steps");
    p.samples.push_back(sample_of(k * sample_dt, p.final));
    p.trace_drift = std::max(p.trace_drift, std::abs(p.final.rho.trace().real() - tr0));
    if (stop && stop(p.samples)) break;
  }
  return p;
}

}  // namespace

MasterRun evolve_master(const JointDensity& rho0, const BlockHamiltonian& H, DissipationParams params, double gt_final,
                        double sample_dt, const IntegratorConfig& cfg, const SampleStop& stop) {
  if (!(rho0.basis == H.basis())) throw DimensionMismatch("density basis does not match the Hamiltonian basis");
  if (!(gt_final > 0.0) || !(sample_dt > 0.0)) throw InvalidArgument("time window and sample step must be positive");
  const MasterEquation me(H, params);
  double dt = cfg.dt > 0.0 ? cfg.dt : default_dt(H.basis());
  int per = std::max(1, int(std::ceil(sample_dt / dt - 1e-9)));
  dt = sample_dt / per;
  int n_samples = int(std::llround(gt_final / sample_dt));

  Pass coarse = run_pass(me, rho0, n_samples, per, dt, sample_dt, stop, cfg.max_steps);
  n_samples = int(coarse.samples.size()) - 1;
  MasterRun run;
  run.halvings = 0;
  auto min_eigenvalue = [&](const JointDensity& r) {
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (r.rho + r.rho.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
  };
  auto halve = [&] {
    if (2L * per * n_samples > cfg.max_steps)
      throw ConvergenceError("master equation: halving gate not met (change " + std::to_string(run.gate_change) +
                             ", min eigenvalue " + std::to_string(run.min_eigenvalue) + ")");
    Pass fine = run_pass(me, rho0, n_samples, 2 * per, 0.5 * dt, sample_dt, nullptr, cfg.max_steps);
    double change = 0.0;
    for (std::size_t k = 0; k < coarse.samples.size(); ++k) {
      const auto a = tracked(coarse.samples[k]), b = tracked(fine.samples[k]);
      for (std::size_t q = 0; q < a.size(); ++q) change = std::max(change, std::abs(a[q] - b[q]));
    }
    coarse = std::move(fine);
    per *= 2;
    dt *= 0.5;
    ++run.halvings;
    return change;
  };
  if (cfg.gate) {
    run.gate_change = halve();
    while (run.gate_change >= cfg.tolerance) run.gate_change = halve();
  }
  if (cfg.check_positivity) {
    run.min_eigenvalue = min_eigenvalue(coarse.final);
    // RK4 is not positivity preserving; with the gate on, refine until it holds
    while (cfg.gate && run.min_eigenvalue < -1e-8) {
      run.gate_change = halve();
      run.min_eigenvalue = min_eigenvalue(coarse.final);
    }
  }
  run.final = std::move(coarse.final);
  run.samples = std::move(coarse.samples);
  run.dt = dt;
  run.trace_drift = coarse.trace_drift;
  run.hermiticity = (run.final.rho - run.final.rho.adjoint()).cwiseAbs().maxCoeff();
  if (run.trace_drift > 1e-8)
    throw ConvergenceError("master equation: trace drift " + std::to_string(run.trace_drift));
  if (run.min_eigenvalue < -1e-8)
    throw ConvergenceError("master equation: negative eigenvalue " + std::to_string(run.min_eigenvalue));
  return run;
}

}  // namespace sqz
