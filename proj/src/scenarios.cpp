#include "sqz/scenarios.hpp"

#include <cmath>
#include <limits>

#include "sqz/errors.hpp"
#include "sqz/phase_min.hpp"
#include "sqz/search.hpp"

namespace sqz {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

JointState initial_prep_state(const SpinFockBasis& b, double alpha) {
  return product_state(b, coherent_field_state(cplx(alpha, 0.0), b.photon_cut), dicke_state(b.atoms, 0));
}

}  // namespace

ObservableRecord record_from(double gt, const CMat& rho_f, const CMat& rho_a, bool phase, bool with_purity) {
  ObservableRecord r = make_record(gt, spin_moments(rho_a), field_moments(rho_f));
  if (with_purity) {
    r.purity_field = purity(rho_f);
    r.purity_atoms = purity(rho_a);
  }
  if (phase) {
    r.phase_variance = pegg_barnett_variance(rho_f).value;
    r.phase_ratio = r.phase_variance / coherent_phase_baseline(std::max(r.n_mean, 0.0));
  }
  return r;
}

int dissipative_photon_cut(int atoms, double alpha) { return coherent_cut(alpha * alpha) + atoms; }

PreparedState prepare_sas(const PrepConfig& cfg) {
  if (!(cfg.gt_end > 0.0) || cfg.samples < 1) throw InvalidArgument("preparation window must be positive");
  PreparedState out;
  if (cfg.diss.lossless()) {
    out.basis = build_basis(cfg.atoms, cfg.alpha, cfg.photon_cut);
    auto H = BlockHamiltonian::cached(out.basis);
    PureTrajectory tr(H, initial_prep_state(out.basis, cfg.alpha));
    for (int k = 0; k <= cfg.samples; ++k) {
      const double gt = cfg.gt_end * k / cfg.samples;
      JointState psi = tr.at(gt);
      const CMat ra = reduced_density(psi, Factor::spin), rf = reduced_density(psi, Factor::field);
      out.records.push_back(record_from(gt, rf, ra, false, true));
      if (k == cfg.samples) {
        out.rho_a = ra;
        out.rho_f = rf;
        out.pure = std::move(psi);
      }
    }
    return out;
  }
  out.basis = build_basis(cfg.atoms, cfg.alpha,
                          cfg.photon_cut ? cfg.photon_cut : std::optional<int>(dissipative_photon_cut(cfg.atoms, cfg.alpha)));
  auto H = BlockHamiltonian::cached(out.basis);
  const JointDensity rho0 = density_of(initial_prep_state(out.basis, cfg.alpha));
  MasterRun run = evolve_master(rho0, *H, cfg.diss, cfg.gt_end, cfg.gt_end / cfg.samples, cfg.integ);
  for (const auto& s : run.samples) out.records.push_back(make_record(s.gt, s.spin, s.field));
  out.rho_a = partial_trace(run.final, Factor::spin);
  out.rho_f = partial_trace(run.final, Factor::field);
  out.records.back().purity_atoms = purity(out.rho_a);
  out.records.back().purity_field = purity(out.rho_f);
  out.halvings = run.halvings;
  out.dt = run.dt;
  out.mixed = std::move(run.final);
  return out;
}

FirstMinimum first_squeezing_minimum(const std::shared_ptr<const BlockHamiltonian>& H, double alpha, int gt_samples,
                                     double window_u) {
  const SpinFockBasis& b = H->basis();
  PureTrajectory tr(H, initial_prep_state(b, alpha));
  CVec psi;
  auto factor_at = [&](double gt) {
    tr.at(gt, psi);
    return squeezing_factor(spin_moments(JointState{b, psi}));
  };
  double window = window_u / std::sqrt(b.atoms + alpha * alpha);
  FirstMinimum out;
  std::vector<double> v;
  // a second, longer window if the first holds no minimum
  for (int attempt = 0; attempt < 2 && !out.found; ++attempt, window *= 2.0) {
    v.clear();
    const double h = window / gt_samples;
    for (int k = 0; k <= gt_samples; ++k) {
      v.push_back(factor_at(h * k));
      if (auto i = first_local_min(v)) {
        const Minimum m = refine_minimum(factor_at, h * (double(*i) - 1.0), h * (double(*i) + 1.0), 1e-9);
        out.gt = m.x;
        out.factor = std::min(m.value, v[*i]);
        if (m.value > v[*i]) out.gt = h * double(*i);
        out.found = true;
        break;
      }
    }
  }
  if (!out.found) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i] < v[k]) k = i;
    out.gt = 0.5 * window / gt_samples * double(k);
    out.factor = v[k];
  }
  return out;
}

AlphaOptimum optimize_alpha(int atoms, const AlphaSearch& s, int threads) {
  if (!(s.hi > s.lo) || !(s.step > 0.0) || s.lo < 0.0) throw InvalidArgument("alpha grid must be nonempty");
  // one basis for the whole grid so the block decomposition is shared
  const SpinFockBasis b = build_basis(atoms, s.hi);
  auto H = BlockHamiltonian::cached(b);
  const int K = int(std::floor((s.hi - s.lo) / s.step + 1e-9));
  AlphaOptimum out;
  out.atoms = atoms;
  out.scan_alpha.resize(K + 1);
  out.scan_gt.resize(K + 1);
  out.scan_factor.resize(K + 1);
  std::vector<char> found(K + 1);
  parallel_for(std::size_t(K + 1), threads, [&](std::size_t k) {
    const double a = s.lo + s.step * double(k);
    const FirstMinimum m = first_squeezing_minimum(H, a, s.gt_samples, s.window_u);
    out.scan_alpha[k] = a;
    out.scan_gt[k] = m.gt;
    out.scan_factor[k] = m.factor;
    found[k] = m.found;
  });
  int best = -1;
  for (int k = 0; k <= K; ++k)
    if (found[k] && (best < 0 || out.scan_factor[k] < out.scan_factor[best])) best = k;
  if (best < 0) throw OptimizationFailure("optimize_alpha: no squeezing minimum on the alpha grid");
  out.at_edge = best == 0 || best == K;
  out.alpha = out.scan_alpha[best];
  out.gt = out.scan_gt[best];
  out.factor = out.scan_factor[best];
  if (!out.at_edge) {
    auto f = [&](double a) { return first_squeezing_minimum(H, a, s.gt_samples, s.window_u).factor; };
    const Minimum m = refine_minimum(f, out.scan_alpha[best - 1], out.scan_alpha[best + 1], s.xtol);
    if (m.value < out.factor) {
      const FirstMinimum fm = first_squeezing_minimum(H, m.x, s.gt_samples, s.window_u);
      out.alpha = m.x;
      out.gt = fm.gt;
      out.factor = fm.factor;
    }
  }
  return out;
}

ScalingResult scaling_study(const std::vector<int>& atom_counts, const AlphaSearch& search, int threads) {
  if (atom_counts.size() < 2) throw InvalidArgument("scaling study needs at least two atom counts");
  ScalingResult r;
  std::vector<double> ln, lf, la;
  for (int N : atom_counts) {
    r.points.push_back(optimize_alpha(N, search, threads));
    ln.push_back(std::log(double(N)));
    lf.push_back(std::log(r.points.back().factor));
    la.push_back(std::log(r.points.back().alpha));
  }
  std::tie(r.factor_slope, r.factor_intercept) = linear_fit(ln, lf);
  std::tie(r.alpha_slope, r.alpha_intercept) = linear_fit(ln, la);
  return r;
}

std::vector<EmissionPropagator::Frame> emission_frames(const EmissionPropagator& P, double gt_end, int samples) {
  std::vector<EmissionPropagator::Frame> frames;
  frames.reserve(samples + 1);
  for (int k = 0; k <= samples; ++k) frames.push_back(P.at(gt_end * k / samples));
  return frames;
}

std::vector<ObservableRecord> radiate_frames(const EmissionPropagator& P,
                                             const std::vector<EmissionPropagator::Frame>& frames,
                                             const CMat& rho_a, bool phase, bool with_purity) {
  if (rho_a.rows() != P.atoms() + 1) throw DimensionMismatch("spin density does not match the propagator");
  std::vector<ObservableRecord> out;
  out.reserve(frames.size());
  for (const auto& f : frames)
    out.push_back(record_from(f.gt, P.field_density(f, rho_a), P.spin_density(f, rho_a), phase, with_purity));
  return out;
}

std::vector<ObservableRecord> radiate(const CMat& rho_a, const RadiationConfig& cfg) {
  if (!(cfg.gt_end > 0.0) || cfg.samples < 1) throw InvalidArgument("radiation window must be positive");
  const int N = int(rho_a.rows()) - 1;
  if (N < 1 || rho_a.cols() != rho_a.rows()) throw DimensionMismatch("spin density must be square with N >= 1");
  if (cfg.diss.lossless()) {
    const EmissionPropagator P(N);
    std::vector<ObservableRecord> out;
    for (int k = 0; k <= cfg.samples; ++k) {
      const auto f = P.at(cfg.gt_end * k / cfg.samples);
      out.push_back(record_from(f.gt, P.field_density(f, rho_a), P.spin_density(f, rho_a), cfg.phase, cfg.purity));
    }
    return out;
  }
  // no photons beyond N can be emitted from the vacuum
  SpinFockBasis b;
  b.atoms = N;
  b.photon_cut = N;
  auto H = BlockHamiltonian::cached(b);
  JointDensity rho0{b, CMat::Zero(b.dim(), b.dim())};
  rho0.rho.topLeftCorner(N + 1, N + 1) = rho_a;
  const MasterRun run = evolve_master(rho0, *H, cfg.diss, cfg.gt_end, cfg.gt_end / cfg.samples, cfg.integ);
  std::vector<ObservableRecord> out;
  for (const auto& s : run.samples) out.push_back(make_record(s.gt, s.spin, s.field));
  if (cfg.purity) {
    out.back().purity_field = purity(partial_trace(run.final, Factor::field));
    out.back().purity_atoms = purity(partial_trace(run.final, Factor::spin));
  }
  if (cfg.phase) {
    const CMat rf = partial_trace(run.final, Factor::field);
    out.back().phase_variance = pegg_barnett_variance(rf).value;
    out.back().phase_ratio = out.back().phase_variance / coherent_phase_baseline(out.back().n_mean);
  }
  return out;
}

std::size_t first_emission_end(const std::vector<ObservableRecord>& rad) {
  if (rad.empty()) return 0;
  std::vector<double> n;
  n.reserve(rad.size());
  for (const auto& r : rad) n.push_back(r.n_mean);
  const auto i = first_local_max(n);
  return i ? *i : rad.size() - 1;
}

CMat prepared_atoms(const TailorConfig& cfg, std::vector<ObservableRecord>* prep_records) {
  if (cfg.input == AtomInput::cas) {
    const CVec s = dicke_state(cfg.atoms, 0);
    CMat ra = s * s.adjoint();
    if (prep_records) {
      CMat vac = CMat::Zero(1, 1);
      vac(0, 0) = 1.0;
      prep_records->assign(1, record_from(0.0, vac, ra, false, true));
    }
    return ra;
  }
  PrepConfig p;
  p.atoms = cfg.atoms;
  p.alpha = cfg.alpha;
  p.gt_end = cfg.prep_gt;
  p.samples = cfg.prep_samples;
  p.photon_cut = cfg.photon_cut;
  p.diss = cfg.diss;
  p.integ = cfg.integ;
  PreparedState st = prepare_sas(p);
  if (prep_records) *prep_records = std::move(st.records);
  return st.rho_a;
}

TailorResult tailor_pipeline(const TailorConfig& cfg) {
  if (!(cfg.rad_gt_end > 0.0) || cfg.rad_samples < 2) throw InvalidArgument("radiation window must be positive");
  TailorResult out;
  const CMat ra0 = prepared_atoms(cfg, &out.prep);
  out.rho_a = align_and_tilt(ra0, cfg.tilt, cfg.squeeze_azimuth);
  if (cfg.qgrids) out.spin_q = qfunc_spin(out.rho_a, cfg.spin_grid);

  if (!cfg.diss.lossless()) {
    RadiationConfig rc;
    rc.gt_end = cfg.rad_gt_end;
    rc.samples = cfg.rad_samples;
    rc.diss = cfg.diss;
    rc.integ = cfg.integ;
    out.rad = radiate(out.rho_a, rc);
    std::vector<double> v;
    for (const auto& r : out.rad) v.push_back(r.var_a_min);
    std::size_t k = first_local_min(v).value_or(std::size_t(std::min_element(v.begin(), v.end()) - v.begin()));
    if (cfg.snapshot_gt)
      k = std::size_t(std::llround(*cfg.snapshot_gt / cfg.rad_gt_end * cfg.rad_samples));
    k = std::min(k, out.rad.size() - 1);
    out.snapshot_gt = out.rad[k].gt;
    out.snapshot = out.rad[k];
    return out;
  }

  const EmissionPropagator P(cfg.atoms);
  const auto frames = emission_frames(P, cfg.rad_gt_end, cfg.rad_samples);
  out.rad = radiate_frames(P, frames, out.rho_a, true, true);
  if (cfg.snapshot_gt) {
    out.snapshot_gt = *cfg.snapshot_gt;
  } else {
    std::vector<double> v;
    for (const auto& r : out.rad) v.push_back(r.var_a_min);
    if (const auto i = first_local_min(v)) {
      const double h = cfg.rad_gt_end / cfg.rad_samples;
      auto f = [&](double gt) { return quadrature_stats(P.field_density(P.at(gt), out.rho_a)).var_min; };
      out.snapshot_gt = refine_minimum(f, h * (double(*i) - 1.0), h * (double(*i) + 1.0), 1e-9).x;
    } else {
      out.snapshot_gt = out.rad[std::size_t(std::min_element(v.begin(), v.end()) - v.begin())].gt;
    }
  }
  const auto frame = P.at(out.snapshot_gt);
  const CMat rf = P.field_density(frame, out.rho_a);
  out.snapshot = record_from(out.snapshot_gt, rf, P.spin_density(frame, out.rho_a), true, true);
  if (cfg.qgrids) {
    FieldGridSpec fs = cfg.field_grid;
    fs.center = out.snapshot.a;
    out.field_q = qfunc_field(rf, fs);
  }
  return out;
}

}  // namespace sqz
