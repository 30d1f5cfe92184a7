#pragma once

#include <functional>
#include <vector>

#include "sqz/dynamics.hpp"
#include "sqz/observables.hpp"

namespace sqz {

struct DissipationParams {
  double gamma_f = 0.0;
  double gamma_a = 0.0;
  bool lossless() const { return gamma_f == 0.0 && gamma_a == 0.0; }
};

struct IntegratorConfig {
  double dt = 0.0;  // 0 selects default_dt(basis)
  double tolerance = 1e-6;
  long max_steps = 2'000'000;
  bool gate = true;
  bool check_positivity = true;
};

double default_dt(const SpinFockBasis& basis);

// Dense right-hand side of the master equation. Columns are processed with the
// shared kernels; every term is a shifted, weighted copy of one column.
class MasterEquation {
 public:
  MasterEquation(const BlockHamiltonian& H, DissipationParams params);
  const SpinFockBasis& basis() const { return basis_; }
  void rhs(const CMat& rho, CMat& out) const;
  void rk4_step(CMat& rho, double dt) const;

 private:
  SpinFockBasis basis_;
  DissipationParams params_;
  std::size_t shift_;  // joint-index stride of a S- coupling
  RVec up_, a_, b_, decay_;
  mutable CMat k1_, k2_, k3_, k4_, tmp_;
};

CMat lindblad_rhs(const JointDensity& rho, const BlockHamiltonian& H, DissipationParams params);

struct MasterSample {
  double gt;
  SpinMoments spin;
  FieldMoments field;
};

struct MasterRun {
  JointDensity final;
  std::vector<MasterSample> samples;
  double dt = 0.0;
  int halvings = 0;
  double gate_change = 0.0;  // largest observable change at the last halving
  double trace_drift = 0.0;
  double hermiticity = 0.0;
  double min_eigenvalue = 0.0;
};

// Stop predicate sees each sample; returning true ends the run there. With the gate
// on, the horizon found by the first pass is reused by the refined passes.
using SampleStop = std::function<bool(const std::vector<MasterSample>&)>;

MasterRun evolve_master(const JointDensity& rho0, const BlockHamiltonian& H, DissipationParams params,
                        double gt_final, double sample_dt, const IntegratorConfig& cfg = {},
                        const SampleStop& stop = nullptr);

MasterSample sample_of(double gt, const JointDensity& rho);

}  // namespace sqz
