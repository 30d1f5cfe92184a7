#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sqz/dynamics.hpp"
#include "sqz/lindblad.hpp"
#include "sqz/observables.hpp"
#include "sqz/qfunc.hpp"

namespace sqz {

// ---- preparation ----------------------------------------------------------

struct PrepConfig {
  int atoms = 10;
  double alpha = 3.3;
  double gt_end = 1.0;
  int samples = 200;
  std::optional<int> photon_cut;
  DissipationParams diss;
  IntegratorConfig integ;
};

struct PreparedState {
  SpinFockBasis basis;
  std::optional<JointState> pure;     // lossless runs
  std::optional<JointDensity> mixed;  // dissipative runs
  CMat rho_a, rho_f;
  std::vector<ObservableRecord> records;
  int halvings = 0;  // integrator gate, dissipative runs only
  double dt = 0.0;
};

// Photon cut used for dissipative preparation: the coherent tail plus N.
int dissipative_photon_cut(int atoms, double alpha);

PreparedState prepare_sas(const PrepConfig& cfg);

// ---- optimal amplitude ----------------------------------------------------

struct AlphaSearch {
  double lo = 1.0, hi = 12.0, step = 0.1;
  double xtol = 1e-3;
  int gt_samples = 2000;
  double window_u = 8.0;  // gt window in units of 1/sqrt(N + alpha^2)
};

struct FirstMinimum {
  double gt = 0.0;
  double factor = 0.0;
  bool found = false;
};

// First local minimum in gt of the squeezing factor, lossless.
FirstMinimum first_squeezing_minimum(const std::shared_ptr<const BlockHamiltonian>& H, double alpha,
                                     int gt_samples = 2000, double window_u = 8.0);

struct AlphaOptimum {
  int atoms = 0;
  double alpha = 0.0, gt = 0.0, factor = 0.0;
  bool at_edge = false;
  std::vector<double> scan_alpha, scan_gt, scan_factor;
};

AlphaOptimum optimize_alpha(int atoms, const AlphaSearch& search = {}, int threads = 0);

struct ScalingResult {
  std::vector<AlphaOptimum> points;
  double factor_slope = 0.0, factor_intercept = 0.0;
  double alpha_slope = 0.0, alpha_intercept = 0.0;
};

ScalingResult scaling_study(const std::vector<int>& atom_counts, const AlphaSearch& search = {}, int threads = 0);

// ---- radiation ------------------------------------------------------------

struct RadiationConfig {
  double gt_end = 0.5;
  int samples = 500;
  DissipationParams diss;
  IntegratorConfig integ;
  bool phase = true;
  bool purity = true;
};

// Fills a record from reduced densities; phase and purity on request.
ObservableRecord record_from(double gt, const CMat& rho_f, const CMat& rho_a, bool phase, bool purity);

// Emission from |0><0| (x) rho_a.
std::vector<ObservableRecord> radiate(const CMat& rho_a, const RadiationConfig& cfg);

// Lossless radiation with a shared propagator and frames (one frame per sample).
std::vector<ObservableRecord> radiate_frames(const EmissionPropagator& P,
                                             const std::vector<EmissionPropagator::Frame>& frames,
                                             const CMat& rho_a, bool phase, bool purity);
std::vector<EmissionPropagator::Frame> emission_frames(const EmissionPropagator& P, double gt_end, int samples);

// Index of the first local maximum of <n>, or the last sample.
std::size_t first_emission_end(const std::vector<ObservableRecord>& rad);

// ---- tailor-made radiation ------------------------------------------------

enum class AtomInput { cas, sas };

struct TailorConfig {
  int atoms = 100;
  AtomInput input = AtomInput::sas;
  double alpha = 6.8;
  double prep_gt = 0.19;
  int prep_samples = 100;
  std::optional<int> photon_cut;
  double tilt = 0.25 * M_PI;
  double squeeze_azimuth = 0.0;
  double rad_gt_end = 0.5;
  int rad_samples = 500;
  std::optional<double> snapshot_gt;  // default: first minimum of min_phi Var a_phi
  bool qgrids = true;
  FieldGridSpec field_grid;
  SpinGridSpec spin_grid;
  DissipationParams diss;
  IntegratorConfig integ;
};

struct TailorResult {
  std::vector<ObservableRecord> prep, rad;
  CMat rho_a;  // aligned and tilted input of the radiation stage
  std::optional<QGrid> spin_q, field_q;
  double snapshot_gt = 0.0;
  ObservableRecord snapshot;
};

// The atomic input before alignment: the prepared SAS or |S,S>.
CMat prepared_atoms(const TailorConfig& cfg, std::vector<ObservableRecord>* prep_records = nullptr);

TailorResult tailor_pipeline(const TailorConfig& cfg);

// ---- available ranges -----------------------------------------------------

struct FamilyConfig {
  int atoms = 100;
  AtomInput input = AtomInput::sas;
  double alpha = 6.8, prep_gt = 0.19;
  std::optional<int> photon_cut;
  double squeeze_azimuth = 0.5 * M_PI;
  double tilt_step = M_PI / 30.0;
  double tilt_max = M_PI;
  double gt_end = 1.0;
  int samples = 400;
  bool phase = false;
};

struct Trajectory {
  double tilt = 0.0;
  std::vector<ObservableRecord> records;
  std::size_t emission_end = 0;  // last index of the first emission period
};

struct Family {
  FamilyConfig cfg;
  std::vector<Trajectory> members;
};

Family radiate_family(const FamilyConfig& cfg, const CMat& rho_a, int threads = 0);
Family radiate_family(const FamilyConfig& cfg, int threads = 0);

using Metric = std::function<double(const ObservableRecord&)>;

struct EnvelopePoint {
  double n_lo = 0.0, n_hi = 0.0;
  double n_at = 0.0;  // <n> at the minimizing sample
  double value = 0.0;
  double tilt = 0.0;
  double gt = 0.0;
};

// Per bin of <n>, the minimum metric over every member's first emission period.
std::vector<EnvelopePoint> envelope(const Family& f, const Metric& metric, double bin_width = 1.0);

double fano_metric(const ObservableRecord& r);
double phase_ratio_metric(const ObservableRecord& r);

// ---- dissipation ----------------------------------------------------------

struct ContourConfig {
  int atoms = 10;
  std::vector<double> gamma_f, gamma_a;
  double alpha_lo = 2.0, alpha_hi = 5.0;
  double alpha_xtol = 1e-3;
  double prep_window = 1.2;
  double sample_dt = 0.005;
  double search_dt = 0.005;  // fixed step of the ungated alpha search
  double rad_window = 2.0;
  IntegratorConfig integ;
};

std::vector<double> log_grid(double lo, double hi, int points);
ContourConfig default_contour_config();

struct ContourPoint {
  double gamma_f = 0.0, gamma_a = 0.0;
  double alpha = 0.0, prep_gt = 0.0, min_factor = 0.0;
  double rad_gt = 0.0, min_var_a = 0.0;
  int halvings = 0;
};

// One (gamma_f, gamma_a) point: alpha re-optimized, then radiation with the same rates.
ContourPoint dissipation_point(const ContourConfig& cfg, DissipationParams diss);
std::vector<ContourPoint> dissipation_contours(const ContourConfig& cfg, int threads = 0);

}  // namespace sqz
