#pragma once

#include <vector>

#include "sqz/spinfock.hpp"

namespace sqz {

// Minimum Pegg-Barnett variance over real number-basis amplitudes with a fixed mean
// photon number.
struct PhaseMinProblem {
  double nbar = 0.0;
  int photon_cut = 0;
  double lambda = 0.0;  // multiplier of the norm constraint
  double beta = 0.0;    // multiplier of the mean-number constraint
  RVec c;
  double variance = 0.0;
  double eigen_residual = 0.0;  // |M c - mu c|
  double stationarity = 0.0;    // norm of the Lagrangian gradient
  double norm_error = 0.0;
  double mean_error = 0.0;
  double tail = 0.0;  // sum of c_n^2 over n > cut/2
};

// A_nm = (-1)^(n-m)/(n-m)^2 off the diagonal.
RMat phase_coupling_matrix(int photon_cut);

// Lowest eigenvector of 2A + beta diag(n), with positive amplitudes.
RVec phase_trial_state(const RMat& A, double beta, double* eigenvalue = nullptr);

PhaseMinProblem min_phase_state(double nbar, int photon_cut);
// Starting cut; cheap and accurate to about 1e-8 in the variance.
int default_phase_cut(double nbar);

// Doubles the cut from default_phase_cut until the tail mass drops below tail_tol.
PhaseMinProblem converged_phase_state(double nbar, double tail_tol = 1e-12, int max_cut = 4096);

double coherent_phase_baseline(double nbar);

}  // namespace sqz
