#include <algorithm>
#include <cmath>
#include <map>

#include "sqz/errors.hpp"
#include "sqz/scenarios.hpp"
#include "sqz/search.hpp"

namespace sqz {

Family radiate_family(const FamilyConfig& cfg, const CMat& rho_a, int threads) {
  if (!(cfg.tilt_step > 0.0) || cfg.tilt_max < 0.0) throw InvalidArgument("tilt grid must be nonempty");
  if (!(cfg.gt_end > 0.0) || cfg.samples < 2) throw InvalidArgument("radiation window must be positive");
  Family fam;
  fam.cfg = cfg;
  const int K = int(std::floor(cfg.tilt_max / cfg.tilt_step + 1e-9));
  fam.members.resize(K + 1);
  const EmissionPropagator P(cfg.atoms);
  const auto frames = emission_frames(P, cfg.gt_end, cfg.samples);
  parallel_for(std::size_t(K + 1), threads, [&](std::size_t k) {
    Trajectory& t = fam.members[k];
    t.tilt = cfg.tilt_step * double(k);
    const CMat ra = align_and_tilt(rho_a, t.tilt, cfg.squeeze_azimuth);
    t.records = radiate_frames(P, frames, ra, cfg.phase, false);
    t.emission_end = first_emission_end(t.records);
  });
  return fam;
}

Family radiate_family(const FamilyConfig& cfg, int threads) {
  TailorConfig t;
  t.atoms = cfg.atoms;
  t.input = cfg.input;
  t.alpha = cfg.alpha;
  t.prep_gt = cfg.prep_gt;
  t.prep_samples = 1;
  t.photon_cut = cfg.photon_cut;
  return radiate_family(cfg, prepared_atoms(t), threads);
}

std::vector<EnvelopePoint> envelope(const Family& f, const Metric& metric, double bin_width) {
  if (!(bin_width > 0.0)) throw InvalidArgument("envelope bin width must be positive");
  std::map<long, EnvelopePoint> bins;
  for (const auto& t : f.members)
    for (std::size_t i = 0; i <= t.emission_end && i < t.records.size(); ++i) {
      const ObservableRecord& r = t.records[i];
      const double v = metric(r);
      if (!std::isfinite(v)) continue;
      const long b = long(std::floor(r.n_mean / bin_width));
      auto it = bins.find(b);
      if (it == bins.end() || v < it->second.value) {
        EnvelopePoint p;
        p.n_lo = b * bin_width;
        p.n_hi = (b + 1) * bin_width;
        p.n_at = r.n_mean;
        p.value = v;
        p.tilt = t.tilt;
        p.gt = r.gt;
        bins[b] = p;
      }
    }
  std::vector<EnvelopePoint> out;
  for (const auto& [b, p] : bins) out.push_back(p);
  return out;
}

double fano_metric(const ObservableRecord& r) { return r.fano; }
double phase_ratio_metric(const ObservableRecord& r) { return r.phase_ratio; }

std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi >= lo) || points < 1) throw InvalidArgument("log grid needs 0 < lo <= hi and points >= 1");
  std::vector<double> g(points);
  for (int k = 0; k < points; ++k)
    g[k] = points == 1 ? lo : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * k / (points - 1));
  return g;
}

ContourConfig default_contour_config() {
  ContourConfig c;
  c.gamma_f = log_grid(1e-3, 1e-1, 6);
  c.gamma_a = log_grid(1e-3, 1e-1, 6);
  c.alpha_lo = 2.5;
  c.alpha_hi = 4.5;
  return c;
}

namespace {

JointDensity prep_density(int atoms, double alpha, std::shared_ptr<const BlockHamiltonian>& H) {
  SpinFockBasis b;
  b.atoms = atoms;
  b.photon_cut = dissipative_photon_cut(atoms, alpha);
  H = BlockHamiltonian::cached(b);
  return density_of(product_state(b, coherent_field_state(cplx(alpha, 0.0), b.photon_cut), dicke_state(atoms, 0)));
}

// Stops at the first local minimum of the sampled values.
SampleStop stop_at_first_min(std::function<double(const MasterSample&)> value) {
  return [value](const std::vector<MasterSample>& s) {
    if (s.size() < 3) return false;
    const double a = value(s[s.size() - 3]), b = value(s[s.size() - 2]), c = value(s.back());
    return b <= a && b < c;
  };
}

Minimum sampled_minimum(const std::vector<MasterSample>& s, const std::function<double(const MasterSample&)>& value) {
  std::vector<double> v;
  for (const auto& x : s) v.push_back(value(x));
  if (const auto i = first_local_min(v)) {
    const double h = s[1].gt - s[0].gt;
    return parabolic_vertex(s[*i].gt, h, v[*i - 1], v[*i], v[*i + 1]);
  }
  const auto k = std::size_t(std::min_element(v.begin(), v.end()) - v.begin());
  return {s[k].gt, v[k]};
}

double sample_factor(const MasterSample& s) { return squeezing_factor(s.spin); }
double sample_var_a(const MasterSample& s) { return quadrature_stats(s.field).var_min; }

}  // namespace

ContourPoint dissipation_point(const ContourConfig& cfg, DissipationParams diss) {
  ContourPoint out;
  out.gamma_f = diss.gamma_f;
  out.gamma_a = diss.gamma_a;
  IntegratorConfig search = cfg.integ;
  search.gate = false;
  search.dt = cfg.search_dt;
  search.check_positivity = false;

  auto prep_min = [&](double alpha) {
    std::shared_ptr<const BlockHamiltonian> H;
    const JointDensity rho0 = prep_density(cfg.atoms, alpha, H);
    const MasterRun run =
        evolve_master(rho0, *H, diss, cfg.prep_window, cfg.sample_dt, search, stop_at_first_min(sample_factor));
    return sampled_minimum(run.samples, sample_factor);
  };
  const Minimum best = refine_minimum([&](double a) { return prep_min(a).value; }, cfg.alpha_lo, cfg.alpha_hi,
                                      cfg.alpha_xtol);
  out.alpha = best.x;
  const Minimum at = prep_min(out.alpha);

  // gated run to the located minimum
  std::shared_ptr<const BlockHamiltonian> H;
  const JointDensity rho0 = prep_density(cfg.atoms, out.alpha, H);
  const int n = std::max(1, int(std::ceil(at.x / cfg.sample_dt)));
  const MasterRun prep = evolve_master(rho0, *H, diss, at.x, at.x / n, cfg.integ);
  out.prep_gt = at.x;
  out.min_factor = squeezing_factor(prep.samples.back().spin);
  out.halvings = prep.halvings;

  // radiation with the same rates; the cavity starts empty
  SpinFockBasis rb;
  rb.atoms = cfg.atoms;
  rb.photon_cut = cfg.atoms;
  auto HR = BlockHamiltonian::cached(rb);
  JointDensity r0{rb, CMat::Zero(rb.dim(), rb.dim())};
  r0.rho.topLeftCorner(cfg.atoms + 1, cfg.atoms + 1) = partial_trace(prep.final, Factor::spin);
  const MasterRun coarse =
      evolve_master(r0, *HR, diss, cfg.rad_window, cfg.sample_dt, search, stop_at_first_min(sample_var_a));
  const double horizon = coarse.samples.back().gt;
  const MasterRun rad = evolve_master(r0, *HR, diss, horizon, cfg.sample_dt, cfg.integ);
  const Minimum rm = sampled_minimum(rad.samples, sample_var_a);
  out.rad_gt = rm.x;
  out.min_var_a = rm.value;
  out.halvings = std::max(out.halvings, rad.halvings);
  return out;
}

std::vector<ContourPoint> dissipation_contours(const ContourConfig& cfg, int threads) {
  if (cfg.gamma_f.empty() || cfg.gamma_a.empty()) throw InvalidArgument("dissipation grids must be nonempty");
  const std::size_t nf = cfg.gamma_f.size(), na = cfg.gamma_a.size();
  std::vector<ContourPoint> out(nf * na);
  parallel_for(nf * na, threads, [&](std::size_t k) {
    out[k] = dissipation_point(cfg, {cfg.gamma_f[k / na], cfg.gamma_a[k % na]});
  });
  return out;
}

}  // namespace sqz
