// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// An optional argument runs only the criteria whose id contains it.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "sqz/analytic.hpp"
#include "sqz/lindblad.hpp"
#include "sqz/phase_min.hpp"
#include "sqz/scenarios.hpp"
#include "sqz/search.hpp"

using namespace sqz;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [miss]");
  }
};

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

JointState start(const SpinFockBasis& b, double alpha) {
  return product_state(b, coherent_field_state(cplx(alpha, 0.0), b.photon_cut), dicke_state(b.atoms, 0));
}

// ---- two-atom oracle ------------------------------------------------------

void two_atom_oracle(Verdict& v) {
  const double alpha = 10.0;
  const int cut = default_photon_cut(2, alpha);
  const SpinFockBasis b = build_basis(2, alpha, cut);
  BlockHamiltonian H(b);
  const JointState psi0 = start(b, alpha);
  double err = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double gt = k / 199.0;
    err = std::max(err, (evolve_unitary(psi0, H, gt).amp - two_atom_state(alpha, gt, cut).amp).cwiseAbs().maxCoeff());
  }
  v.require(err < 1e-10, "max amplitude error " + fmt(err) + " < 1e-10");
}

// ---- two-atom squeezing ---------------------------------------------------

void two_atom_squeezing(Verdict& v) {
  const double alpha = 10.0;
  const SpinFockBasis b = build_basis(2, alpha);
  PureTrajectory tr(BlockHamiltonian::cached(b), start(b, alpha));
  const int samples = 2000;
  std::vector<double> gt(samples + 1), factor(samples + 1);
  double approx_dev = 0.0;
  for (int k = 0; k <= samples; ++k) {
    gt[k] = 2.0 * k / samples;
    const SpinMoments s = spin_moments(tr.at(gt[k]));
    const double var_sx = s.covariance()(0, 0);
    factor[k] = 2.0 * var_sx / s.length();
    if (gt[k] <= 0.3 + 1e-12) {
      const TwoAtomApprox a = two_atom_approx(alpha * alpha, gt[k]);
      approx_dev = std::max({approx_dev, std::abs(a.var_sx - var_sx), std::abs(a.sy - s.mean.y()),
                             std::abs(a.sz - s.mean.z()), std::abs(a.factor - factor[k])});
    }
  }
  const auto first = first_local_min(factor);
  v.require(first.has_value(), "first minimum found");
  if (!first) return;
  const double fmin = factor[*first], tmin = gt[*first];
  v.require(fmin < 1.0 && tmin > 0.15 && tmin < 0.25,
            "first minimum " + fmt(fmin) + " at gt " + fmt(tmin) + " (below 1, gt in [0.15, 0.25])");
  v.require(approx_dev < 0.05, "approximations within " + fmt(approx_dev) + " < 0.05 for gt <= 0.3");
  double later = 1e300;
  for (std::size_t k = *first + 1; k < factor.size(); ++k) later = std::min(later, factor[k]);
  v.require(later >= fmin, "lowest later value " + fmt(later) + " >= first minimum");
}

// ---- pendulum approximation -----------------------------------------------

// Deviations are measured relative to the largest magnitude of each numerical
// curve over gt in [0, 0.35]; a pointwise ratio is undefined where <Sz> crosses zero.
void pendulum_approximation(Verdict& v) {
  const int N = 100;
  const double alpha = 10.0, S = 0.5 * N;
  const SpinFockBasis b = build_basis(N, alpha);
  PureTrajectory tr(BlockHamiltonian::cached(b), start(b, alpha));
  const int samples = 350;
  std::vector<std::array<double, 3>> num(samples + 1), ana(samples + 1);
  std::vector<double> gt(samples + 1);
  for (int k = 0; k <= samples; ++k) {
    gt[k] = 0.001 * k;
    const JointState psi = tr.at(gt[k]);
    const SpinMoments s = spin_moments(psi);
    const QuadratureStats q = quadrature_stats(field_moments(psi));
    num[k] = {s.mean.z(), 2.0 * s.covariance()(0, 0) / S, q.variance(0.5 * M_PI)};
    const PendulumMeans pm = pendulum_means(N, alpha, gt[k]);
    const PendulumFluctuations pf = pendulum_fluctuations(N, alpha, gt[k]);
    ana[k] = {pm.sz, 2.0 * pf.var_sx / S, pf.var_a2};
  }
  const char* names[3] = {"Sz", "2VarSx/S", "VarA2"};
  double early = 0.0, late = 0.0;
  std::string early_worst, late_best;
  for (int q = 0; q < 3; ++q) {
    double scale = 0.0;
    for (const auto& n : num) scale = std::max(scale, std::abs(n[q]));
    double e = 0.0, l = 0.0;
    for (int k = 0; k <= samples; ++k) {
      const double d = std::abs(ana[k][q] - num[k][q]) / scale;
      if (gt[k] <= 0.25 + 1e-12) e = std::max(e, d);
      if (gt[k] >= 0.28 - 1e-12) l = std::max(l, d);
    }
    v.detail << (q ? ", " : "deviations ") << names[q] << " " << fmt(e, 3) << "/" << fmt(l, 3);
    if (e > early) early = e, early_worst = names[q];
    if (l > late) late = l, late_best = names[q];
  }
  v.require(early < 0.05, "largest gt<=0.25 deviation " + fmt(early, 3) + " (" + early_worst + ") < 0.05");
  v.require(late > 0.10, "largest gt in [0.28,0.35] deviation " + fmt(late, 3) + " (" + late_best + ") > 0.10");
}

// ---- ten-atom preparation -------------------------------------------------

void ten_atom_preparation(Verdict& v) {
  PrepConfig c;
  c.atoms = 10;
  c.alpha = 3.3;
  c.gt_end = 2.0;
  c.samples = 400;
  const PreparedState st = prepare_sas(c);
  double fmin = 1e300, fano = 1e300, sx = 0.0, a2 = 0.0;
  for (const auto& r : st.records) {
    fmin = std::min(fmin, r.squeezing_factor);
    fano = std::min(fano, r.fano);
    sx = std::max(sx, std::abs(r.spin_mean.x()));
    a2 = std::max(a2, std::abs(r.a.imag()));
  }
  v.require(fmin < 1.0, "min squeezing factor " + fmt(fmin));
  v.require(fano < 1.0, "min Fano " + fmt(fano));
  v.require(sx < 1e-10 && a2 < 1e-10, "max |<Sx>| " + fmt(sx, 2) + ", max |<a2>| " + fmt(a2, 2) + " < 1e-10");
}

// ---- scaling with N -------------------------------------------------------

void scaling_with_n(Verdict& v) {
  const ScalingResult r = scaling_study({8, 12, 16, 24, 32, 48, 64, 100});
  for (const auto& p : r.points) {
    v.detail << "N=" << p.atoms << ":" << fmt(p.alpha, 3) << "/" << fmt(p.factor, 3) << " ";
    if (p.at_edge) v.require(false, "N=" + std::to_string(p.atoms) + " optimum at the grid edge");
  }
  v.require(std::abs(r.factor_slope + 0.25) <= 0.05, "factor slope " + fmt(r.factor_slope, 3) + " in -0.25 +- 0.05");
  v.require(std::abs(r.alpha_slope - 0.29) <= 0.05, "alpha slope " + fmt(r.alpha_slope, 3) + " in 0.29 +- 0.05");
  const AlphaOptimum ten = optimize_alpha(10);
  v.require(ten.alpha >= 3.0 && ten.alpha <= 3.6, "N=10 optimum alpha " + fmt(ten.alpha) + " in [3.0, 3.6]");
}

// ---- small-angle radiation ------------------------------------------------

void small_angle_radiation_check(Verdict& v) {
  PrepConfig c;
  c.atoms = 100;
  c.alpha = 10.0;
  c.gt_end = 0.14;
  c.samples = 14;
  const PreparedState st = prepare_sas(c);
  const SpinMoments s0 = spin_moments(st.rho_a);
  const double tilt = std::atan2(std::hypot(s0.mean.x(), s0.mean.y()), -s0.mean.z());
  v.require(std::abs(tilt - 0.258) <= 0.005, "tilt " + fmt(tilt) + " = 0.258 +- 0.005");

  RadiationConfig rc;
  rc.gt_end = 0.5;
  rc.samples = 500;
  rc.phase = false;
  const auto rad = radiate(st.rho_a, rc);
  std::vector<double> var_a2;
  for (const auto& r : rad) var_a2.push_back(r.var_a2);
  const auto first = first_local_min(var_a2);
  v.require(first.has_value(), "Var a2 has a first minimum");
  if (!first) return;
  v.require(var_a2[*first] < 0.25, "first minimum of Var a2 " + fmt(var_a2[*first]) + " < 1/4");

  // a_1 is driven by S_{-pi/2} = -Sy, Var a_2 by S_{-pi} = -Sx.
  const double stilt = -s0.mean.y(), var_s = s0.covariance()(0, 0);
  const double predicted = small_angle_radiation(s0.mean.z(), stilt, var_s, 0.0).first_min_gt;
  const double t_num = rad[*first].gt;
  v.require(std::abs(t_num - predicted) <= 0.1 * predicted,
            "first minimum at gt " + fmt(t_num) + " vs pi/(2 sqrt(2|Sz0|)) = " + fmt(predicted));

  double amp_scale = 0.0;
  for (std::size_t k = 0; k <= *first; ++k) amp_scale = std::max(amp_scale, std::abs(rad[k].a.real()));
  double dev_var = 0.0, dev_amp = 0.0;
  for (std::size_t k = 0; k <= *first; ++k) {
    const SmallAngleRadiation a = small_angle_radiation(s0.mean.z(), stilt, var_s, rad[k].gt);
    dev_var = std::max(dev_var, std::abs(a.var_a - rad[k].var_a2) / rad[k].var_a2);
    dev_amp = std::max(dev_amp, std::abs(a.amplitude - rad[k].a.real()) / amp_scale);
  }
  v.require(dev_var <= 0.10 && dev_amp <= 0.10, "small-angle deviation through the first minimum: Var a2 " +
                                                    fmt(dev_var, 3) + ", <a1> " + fmt(dev_amp, 3) + " <= 0.10");
}

// ---- tailored radiation ---------------------------------------------------

struct PeriodStats {
  double min_fano = 1e300, min_phase = 1e300, phase_n = 0.0;
};

PeriodStats first_period(const std::vector<ObservableRecord>& rad) {
  PeriodStats p;
  const std::size_t end = first_emission_end(rad);
  for (std::size_t k = 0; k <= end; ++k) {
    if (std::isfinite(rad[k].fano)) p.min_fano = std::min(p.min_fano, rad[k].fano);
    if (std::isfinite(rad[k].phase_ratio) && rad[k].phase_ratio < p.min_phase) {
      p.min_phase = rad[k].phase_ratio;
      p.phase_n = rad[k].n_mean;
    }
  }
  return p;
}

TailorConfig tailor_config(AtomInput input, double azimuth) {
  TailorConfig c;
  c.input = input;
  c.squeeze_azimuth = azimuth;
  c.qgrids = false;
  return c;
}

void tailored_radiation(Verdict& v) {
  const TailorResult cas = tailor_pipeline(tailor_config(AtomInput::cas, 0.0));
  const PeriodStats pc = first_period(cas.rad);
  v.require(std::abs(pc.min_fano - 0.81) <= 0.03, "CAS min Fano " + fmt(pc.min_fano) + " = 0.81 +- 0.03");

  const TailorResult phase_sas = tailor_pipeline(tailor_config(AtomInput::sas, 0.0));
  v.require(phase_sas.snapshot.phase_ratio < 1.0,
            "SAS azimuth 0 phase ratio " + fmt(phase_sas.snapshot.phase_ratio) + " < 1 at snapshot gt " +
                fmt(phase_sas.snapshot_gt));

  const TailorResult number_sas = tailor_pipeline(tailor_config(AtomInput::sas, 0.5 * M_PI));
  const PeriodStats pn = first_period(number_sas.rad);
  v.require(pn.min_fano < pc.min_fano, "SAS azimuth pi/2 min Fano " + fmt(pn.min_fano) + " < CAS");

  double worst = 1e300, worst_n = 0.0, worst_az = 0.0;
  for (int k = 0; k <= 4; ++k) {
    const PeriodStats p = first_period(tailor_pipeline(tailor_config(AtomInput::cas, k * M_PI / 8)).rad);
    if (p.min_phase < worst) worst = p.min_phase, worst_n = p.phase_n, worst_az = k * M_PI / 8;
  }
  v.require(worst >= 1.0 - 1e-3, "CAS lowest phase ratio over azimuths " + fmt(worst, 6) + " at <n> " +
                                     fmt(worst_n) + ", azimuth " + fmt(worst_az) + " (need >= 0.999)");
}

// ---- emission envelopes ---------------------------------------------------

void emission_envelopes(Verdict& v) {
  const AlphaOptimum o50 = optimize_alpha(50);
  v.detail << "N=50 SAS alpha " << fmt(o50.alpha) << " gt " << fmt(o50.gt);
  struct Key {
    int atoms;
    AtomInput input;
    double azimuth;
  };
  const std::vector<Key> keys{{50, AtomInput::cas, 0.0},        {50, AtomInput::sas, 0.5 * M_PI},
                              {50, AtomInput::sas, 0.0},        {100, AtomInput::cas, 0.0},
                              {100, AtomInput::sas, 0.5 * M_PI}, {100, AtomInput::sas, 0.0}};
  std::vector<Family> fam;
  bool truncated = false;
  for (const Key& k : keys) {
    FamilyConfig c;
    c.atoms = k.atoms;
    c.input = k.input;
    c.squeeze_azimuth = k.azimuth;
    c.alpha = k.atoms == 50 ? o50.alpha : 6.8;
    c.prep_gt = k.atoms == 50 ? o50.gt : 0.19;
    c.tilt_step = M_PI / 120;
    c.gt_end = k.atoms == 50 ? 0.7 : 0.5;
    c.samples = k.atoms == 50 ? 700 : 500;
    c.phase = true;
    fam.push_back(radiate_family(c));
    for (const auto& m : fam.back().members)
      if (m.tilt > 0.0 && m.emission_end + 1 == m.records.size()) truncated = true;
  }
  v.require(!truncated, "every tilted member completes its first emission period in the window");

  auto fano = [&](int i) { return envelope(fam[i], fano_metric); };
  auto below = [](const std::vector<EnvelopePoint>& lo, const std::vector<EnvelopePoint>& hi, double n_max,
                  int& shared, std::string& where) {
    std::map<long, double> h;
    for (const auto& p : hi) h[std::lround(p.n_lo)] = p.value;
    shared = 0;
    for (const auto& p : lo) {
      if (p.n_hi > n_max + 1e-9) continue;
      const auto it = h.find(std::lround(p.n_lo));
      if (it == h.end()) continue;
      ++shared;
      if (p.value > it->second) {
        where = "bin " + fmt(p.n_lo) + ": " + fmt(p.value) + " > " + fmt(it->second);
        return false;
      }
    }
    return shared > 0;
  };
  for (int n = 0; n < 2; ++n) {
    int shared = 0;
    std::string where;
    const bool ok = below(fano(3 * n + 1), fano(3 * n), 1e300, shared, where);
    v.require(ok, "N=" + std::to_string(n ? 100 : 50) + " SAS Fano envelope below CAS over " +
                      std::to_string(shared) + " bins" + (where.empty() ? "" : " (" + where + ")"));
  }
  {
    int shared = 0;
    std::string where;
    const bool ok = below(fano(1), fano(4), 36.0, shared, where);
    v.require(ok, "N=50 SAS Fano envelope below N=100 for <n> < 36 over " + std::to_string(shared) + " bins" +
                      (where.empty() ? "" : " (" + where + ")"));
  }
  int checked = 0, violations = 0;
  double closest = 1e300;
  for (const auto& f : fam)
    for (const auto& p : envelope(f, phase_ratio_metric)) {
      const double bound = min_phase_state(p.n_at, default_phase_cut(p.n_at)).variance /
                           coherent_phase_baseline(p.n_at);
      ++checked;
      closest = std::min(closest, p.value - bound);
      if (p.value < bound) ++violations;
    }
  v.require(violations == 0, "phase envelopes above the minimum-phase bound in " + std::to_string(checked - violations) +
                                 "/" + std::to_string(checked) + " bins (closest margin " + fmt(closest) + ")");
}

// ---- dissipation grid -----------------------------------------------------

void dissipation_grid(Verdict& v) {
  const ContourConfig cc = default_contour_config();
  const ContourPoint ref = dissipation_point(cc, {0.0, 0.0});
  const std::vector<ContourPoint> grid = dissipation_contours(cc);
  const std::size_t nf = cc.gamma_f.size(), na = cc.gamma_a.size();
  auto at = [&](std::size_t i, std::size_t j) -> const ContourPoint& { return grid[i * na + j]; };
  const ContourPoint& weak = at(0, 0);
  const double df = std::abs(weak.min_factor - ref.min_factor) / ref.min_factor;
  const double dv = std::abs(weak.min_var_a - ref.min_var_a) / ref.min_var_a;
  v.require(df <= 0.01 && dv <= 0.01, "(1e-3, 1e-3) vs lossless: factor " + fmt(weak.min_factor) + " vs " +
                                          fmt(ref.min_factor) + ", Var " + fmt(weak.min_var_a) + " vs " +
                                          fmt(ref.min_var_a) + " (within 1%)");
  int drops = 0;
  std::string first_drop;
  auto check = [&](const ContourPoint& a, const ContourPoint& b) {
    for (auto [x, y, name] : {std::tuple{a.min_factor, b.min_factor, "factor"},
                              std::tuple{a.min_var_a, b.min_var_a, "Var"}})
      if (y < x) {
        if (drops++ == 0)
          first_drop = std::string(name) + " drops from " + fmt(x, 6) + " at (" + fmt(a.gamma_f) + ", " +
                       fmt(a.gamma_a) + ") to " + fmt(y, 6) + " at (" + fmt(b.gamma_f) + ", " + fmt(b.gamma_a) + ")";
      }
  };
  for (std::size_t i = 0; i < nf; ++i)
    for (std::size_t j = 0; j < na; ++j) {
      if (i + 1 < nf) check(at(i, j), at(i + 1, j));
      if (j + 1 < na) check(at(i, j), at(i, j + 1));
    }
  v.require(drops == 0, "grid non-decreasing along both axes (" + std::to_string(drops) + " drops" +
                            (first_drop.empty() ? "" : "; " + first_drop) + ")");
  const ContourPoint& strong = at(nf - 1, na - 1);
  v.detail << "; corner (0.1, 0.1): factor " << fmt(strong.min_factor) << ", Var " << fmt(strong.min_var_a);
}

// ---- property suites --------------------------------------------------------

void properties(Verdict& v) {
  {
    const int N = 10;
    const SpinFockBasis b = build_basis(N, 3.3);
    PureTrajectory tr(BlockHamiltonian::cached(b), start(b, 3.3));
    const double e0 = 3.3 * 3.3 + 0.5 * N, cas = 0.25 * N * (N + 2);
    double d_exc = 0.0, d_norm = 0.0, d_cas = 0.0, margin = 1e300;
    for (int k = 0; k <= 100; ++k) {
      const JointState psi = tr.at(0.02 * k);
      const SpinMoments s = spin_moments(psi);
      const FieldMoments f = field_moments(psi);
      d_exc = std::max(d_exc, std::abs(f.n + s.mean.z() - e0));
      d_norm = std::max(d_norm, std::abs(psi.amp.norm() - 1.0));
      d_cas = std::max(d_cas, std::abs(s.second.trace() - cas));
      const UncertaintyCheck u = uncertainty_margins(s, f);
      margin = std::min({margin, u.field_product_margin, u.spin_margin});
    }
    v.require(d_exc < 1e-9 && d_norm < 1e-12 && d_cas < 1e-9,
              "conservation drift: excitations " + fmt(d_exc, 2) + ", norm " + fmt(d_norm, 2) + ", Casimir " +
                  fmt(d_cas, 2));
    // dissipative trajectory too
    const SpinFockBasis bd = build_basis(4, 1.5, coherent_cut(2.25) + 4);
    BlockHamiltonian Hd(bd);
    const MasterRun run = evolve_master(density_of(start(bd, 1.5)), Hd, {0.05, 0.05}, 1.0, 0.05);
    for (const auto& smp : run.samples) {
      const UncertaintyCheck u = uncertainty_margins(smp.spin, smp.field);
      margin = std::min({margin, u.field_product_margin, u.spin_margin});
    }
    v.require(margin >= -1e-10, "uncertainty margins >= " + fmt(margin, 2) + " (bound -1e-10)");
    v.require(run.trace_drift < 1e-8, "master trace drift " + fmt(run.trace_drift, 2));
  }
  {
    double worst = 0.0, worst_fd = 0.0;
    for (double m : {0.1, 0.5, 0.9})
      for (double u : {0.3, 1.2, 2.5}) {
        const EllipticPoint p = jacobi_elliptic(u, m);
        worst = std::max({worst, std::abs(p.sn * p.sn + p.cn * p.cn - 1.0),
                          std::abs(p.dn * p.dn + m * p.sn * p.sn - 1.0)});
        const double h = 1e-5;
        const double fd = (jacobi_elliptic(u + h, m).epsilon - jacobi_elliptic(u - h, m).epsilon) / (2 * h);
        worst_fd = std::max(worst_fd, std::abs(fd - p.dn * p.dn));
      }
    v.require(worst < 1e-13 && worst_fd < 1e-8,
              "elliptic identities " + fmt(worst, 2) + ", dE/du - dn^2 " + fmt(worst_fd, 2));
  }
  {
    const SpinFockBasis b = build_basis(2, 1.0, coherent_cut(1.0) + 2);
    BlockHamiltonian H(b);
    MasterEquation me(H, {0.2, 0.1});
    const CMat rho0 = density_of(start(b, 1.0)).rho;
    const double T = 0.8;
    auto integrate = [&](int steps) {
      CMat rho = rho0;
      for (int k = 0; k < steps; ++k) me.rk4_step(rho, T / steps);
      return rho;
    };
    const CMat ref = integrate(2560);
    std::vector<double> lx, ly;
    for (int steps : {10, 20, 40, 80}) {
      lx.push_back(std::log(T / steps));
      ly.push_back(std::log((integrate(steps) - ref).norm()));
    }
    const double slope = linear_fit(lx, ly).first;
    v.require(std::abs(slope - 4.0) <= 0.3, "RK4 order fit " + fmt(slope, 3) + " in 4 +- 0.3");
  }
  {
    double worst = 0.0;
    for (int n : {0, 1, 5, 20}) worst = std::max(worst, std::abs(pegg_barnett_variance(fock_state(n, 30)).value -
                                                              M_PI * M_PI / 3.0));
    v.require(worst < 1e-13, "Pegg-Barnett of Fock states off pi^2/3 by " + fmt(worst, 2));
  }
  {
    double stat = 0.0;
    bool below = true;
    for (double nbar : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
      const PhaseMinProblem p = min_phase_state(nbar, default_phase_cut(nbar));
      stat = std::max(stat, p.stationarity);
      below = below && p.variance <= coherent_phase_baseline(nbar);
    }
    v.require(stat < 1e-8, "min-phase stationarity " + fmt(stat, 2) + " < 1e-8");
    v.require(below, "min-phase variance <= coherent baseline");
  }
}

struct Criterion {
  std::string id;
  double budget_s;
  std::function<void(Verdict&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::string filter = argc > 1 ? argv[1] : "";
  const std::vector<Criterion> all{
      {"two-atom-oracle", 1.0, two_atom_oracle},
      {"two-atom-squeezing", 10.0, two_atom_squeezing},
      {"pendulum-approximation", 60.0, pendulum_approximation},
      {"ten-atom-preparation", 30.0, ten_atom_preparation},
      {"scaling-exponents", 1800.0, scaling_with_n},
      {"small-angle-radiation", 60.0, small_angle_radiation_check},
      {"tailored-radiation", 1200.0, tailored_radiation},
      {"emission-envelopes", 3600.0, emission_envelopes},
      {"dissipation-grid", 3600.0, dissipation_grid},
      {"property-suites", 600.0, properties},
  };
  int failed = 0, ran = 0;
  for (const auto& c : all) {
    if (!filter.empty() && c.id.find(filter) == std::string::npos) continue;
    ++ran;
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.require(s < c.budget_s, "runtime " + fmt(s, 3) + " s < " + fmt(c.budget_s) + " s");
    if (!v.pass) ++failed;
    std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", c.id.c_str(), v.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", ran - failed, ran);
  return failed ? 1 : 0;
}
