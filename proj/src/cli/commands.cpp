#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>

#include "sqz/analytic.hpp"
#include "sqz/cli.hpp"
#include "sqz/phase_min.hpp"
#include "sqz/scenarios.hpp"
#include "sqz/search.hpp"

namespace sqz::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::optional<int> cut_of(const Config& c) {
  const int v = c.integer("photon_cut");
  return v >= 0 ? std::optional<int>(v) : std::nullopt;
}

DissipationParams diss_of(const Config& c) { return {c.real("gamma_f"), c.real("gamma_a")}; }

IntegratorConfig integ_of(const Config& c) {
  IntegratorConfig i;
  i.dt = c.real("dt");
  i.tolerance = c.real("tolerance");
  i.gate = c.flag("gate");
  return i;
}

AtomInput input_of(const Config& c) {
  const std::string v = c.text("input");
  if (v == "sas") return AtomInput::sas;
  if (v == "cas") return AtomInput::cas;
  throw ParseError("key 'input' expects sas or cas, got '" + v + "'");
}

AlphaSearch search_of(const Config& c) {
  AlphaSearch s;
  s.lo = c.real("alpha_lo");
  s.hi = c.real("alpha_hi");
  s.step = c.real("alpha_step");
  s.xtol = c.real("alpha_xtol");
  s.gt_samples = c.integer("gt_samples");
  s.window_u = c.real("window_u");
  return s;
}

PrepConfig prep_of(const Config& c) {
  PrepConfig p;
  p.atoms = c.integer("atoms");
  p.alpha = c.real("alpha");
  p.gt_end = c.real("prep_gt");
  p.samples = c.integer("prep_samples");
  p.photon_cut = cut_of(c);
  p.diss = diss_of(c);
  p.integ = integ_of(c);
  return p;
}

TailorConfig tailor_of(const Config& c) {
  TailorConfig t;
  t.atoms = c.integer("atoms");
  t.input = input_of(c);
  t.alpha = c.real("alpha");
  t.prep_gt = c.real("prep_gt");
  t.prep_samples = c.integer("prep_samples");
  t.photon_cut = cut_of(c);
  t.tilt = c.real("tilt");
  t.squeeze_azimuth = c.real("squeeze_azimuth");
  t.rad_gt_end = c.real("rad_gt");
  t.rad_samples = c.integer("rad_samples");
  if (c.real("snapshot_gt") >= 0.0) t.snapshot_gt = c.real("snapshot_gt");
  t.qgrids = c.flag("qgrids");
  t.field_grid.points = c.integer("field_points");
  t.field_grid.half_width = c.real("field_half_width");
  t.spin_grid.theta_points = c.integer("theta_points");
  t.spin_grid.phi_points = c.integer("phi_points");
  t.diss = diss_of(c);
  t.integ = integ_of(c);
  return t;
}

Table records_table(const std::vector<ObservableRecord>& recs) {
  Table t;
  t.columns = record_columns();
  for (const auto& r : recs) t.rows.push_back(record_row(r));
  return t;
}

Table qgrid_table(const QGrid& q) {
  Table t;
  t.columns = {q.first.name, q.second.name, "q"};
  for (int i = 0; i < q.first.points; ++i)
    for (int k = 0; k < q.second.points; ++k) t.rows.push_back({q.first.at(i), q.second.at(k), q.value(i, k)});
  return t;
}

void cmd_prepare(const Config& c, Writer& w) { w.write("prep_records", records_table(prepare_sas(prep_of(c)).records)); }

void cmd_radiate(const Config& c, Writer& w) {
  TailorConfig t = tailor_of(c);
  t.qgrids = false;
  const TailorResult r = tailor_pipeline(t);
  w.write("prep_records", records_table(r.prep));
  w.write("radiation_records", records_table(r.rad));
}

void cmd_tailor(const Config& c, Writer& w) {
  TailorConfig t = tailor_of(c);
  t.qgrids = true;
  const TailorResult r = tailor_pipeline(t);
  w.write("prep_records", records_table(r.prep));
  w.write("spin_qgrid", qgrid_table(*r.spin_q));
  w.write("field_qgrid", qgrid_table(*r.field_q));
  w.write("radiation_records", records_table(r.rad));
  std::cerr << "snapshot gt " << format_real(r.snapshot_gt) << "\n";
}

void cmd_optimize(const Config& c, Writer& w) {
  const AlphaOptimum o = optimize_alpha(c.integer("atoms"), search_of(c));
  if (o.at_edge) std::cerr << "warning: optimum at the edge of the alpha grid\n";
  Table scan{{"alpha", "gt", "factor"}, {}};
  for (std::size_t k = 0; k < o.scan_alpha.size(); ++k)
    scan.rows.push_back({o.scan_alpha[k], o.scan_gt[k], o.scan_factor[k]});
  w.write("alpha_scan", scan);
  w.write("alpha_optimum",
          Table{{"atoms", "alpha", "gt", "factor", "at_edge"}, {{double(o.atoms), o.alpha, o.gt, o.factor, double(o.at_edge)}}});
}

void cmd_scaling(const Config& c, Writer& w) {
  const ScalingResult r = scaling_study(c.integers("atoms_list"), search_of(c));
  Table pts{{"atoms", "alpha", "gt", "factor", "at_edge"}, {}};
  for (const auto& o : r.points) {
    pts.rows.push_back({double(o.atoms), o.alpha, o.gt, o.factor, double(o.at_edge)});
    if (o.at_edge) std::cerr << "warning: N=" << o.atoms << " optimum at the edge of the alpha grid\n";
  }
  w.write("scaling", pts);
  w.write("scaling_fit", Table{{"factor_slope", "factor_intercept", "alpha_slope", "alpha_intercept"},
                               {{r.factor_slope, r.factor_intercept, r.alpha_slope, r.alpha_intercept}}});
}

void cmd_ranges(const Config& c, Writer& w) {
  const std::vector<int> atoms = c.integers("atoms_list");
  const std::vector<double> sa = c.reals("sas_alpha"), sg = c.reals("sas_prep_gt");
  if (!sa.empty() && (sa.size() != atoms.size() || sg.size() != atoms.size()))
    throw ParseError("sas_alpha and sas_prep_gt must match atoms_list in length");
  std::vector<std::string> cols{"atoms", "input", "azimuth", "tilt", "in_first_period"};
  for (const auto& col : record_columns()) cols.push_back(col);
  Table traj{cols, {}};
  Table env{{"atoms", "input", "azimuth", "metric", "n_lo", "n_hi", "n_at", "value", "tilt", "gt", "bound"}, {}};
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    double alpha, gt;
    if (!sa.empty()) {
      alpha = sa[i];
      gt = sg[i];
    } else {
      const AlphaOptimum o = optimize_alpha(atoms[i], search_of(c));
      alpha = o.alpha;
      gt = o.gt;
    }
    struct Kind {
      AtomInput input;
      double azimuth;
    };
    for (const Kind k : {Kind{AtomInput::cas, 0.0}, Kind{AtomInput::sas, 0.5 * M_PI}, Kind{AtomInput::sas, 0.0}}) {
      FamilyConfig f;
      f.atoms = atoms[i];
      f.input = k.input;
      f.alpha = alpha;
      f.prep_gt = gt;
      f.squeeze_azimuth = k.azimuth;
      f.tilt_step = c.real("tilt_step");
      f.tilt_max = c.real("tilt_max");
      f.gt_end = c.real("range_gt");
      f.samples = c.integer("range_samples");
      f.phase = c.flag("phase");
      const Family fam = radiate_family(f);
      const double in = k.input == AtomInput::sas ? 1.0 : 0.0;
      for (const auto& m : fam.members)
        for (std::size_t s = 0; s < m.records.size(); ++s) {
          std::vector<double> row{double(f.atoms), in, k.azimuth, m.tilt, double(s <= m.emission_end)};
          for (double v : record_row(m.records[s])) row.push_back(v);
          traj.rows.push_back(std::move(row));
        }
      for (int metric = 0; metric < (f.phase ? 2 : 1); ++metric)
        for (const auto& p : envelope(fam, metric ? Metric(phase_ratio_metric) : Metric(fano_metric), c.real("bin_width"))) {
          double bound = kNaN;
          if (metric) {
            const int cut = std::max(default_phase_cut(p.n_at), int(std::ceil(p.n_at)));
            bound = min_phase_state(p.n_at, cut).variance / coherent_phase_baseline(p.n_at);
          }
          env.rows.push_back({double(f.atoms), in, k.azimuth, double(metric), p.n_lo, p.n_hi, p.n_at, p.value, p.tilt,
                              p.gt, bound});
        }
    }
  }
  w.write("ranges_trajectories", traj);
  w.write("ranges_envelopes", env);
}

ContourConfig contour_of(const Config& c) {
  ContourConfig cc;
  cc.atoms = c.integer("atoms");
  cc.gamma_f = log_grid(c.real("gamma_f_lo"), c.real("gamma_f_hi"), c.integer("gamma_f_points"));
  cc.gamma_a = log_grid(c.real("gamma_a_lo"), c.real("gamma_a_hi"), c.integer("gamma_a_points"));
  cc.alpha_lo = c.real("contour_alpha_lo");
  cc.alpha_hi = c.real("contour_alpha_hi");
  cc.alpha_xtol = c.real("alpha_xtol");
  cc.prep_window = c.real("prep_window");
  cc.rad_window = c.real("rad_window");
  cc.sample_dt = c.real("sample_dt");
  cc.search_dt = c.real("search_dt");
  cc.integ = integ_of(c);
  return cc;
}

Table contour_table(const std::vector<ContourPoint>& pts) {
  Table t{{"gamma_f", "gamma_a", "alpha", "prep_gt", "min_factor", "rad_gt", "min_var_a", "halvings"}, {}};
  for (const auto& p : pts)
    t.rows.push_back({p.gamma_f, p.gamma_a, p.alpha, p.prep_gt, p.min_factor, p.rad_gt, p.min_var_a, double(p.halvings)});
  return t;
}

void cmd_contours(const Config& c, Writer& w) {
  const ContourConfig cc = contour_of(c);
  w.write("contours_reference", contour_table({dissipation_point(cc, {0.0, 0.0})}));
  w.write("contours", contour_table(dissipation_contours(cc)));
}

void cmd_phase_min(const Config& c, Writer& w) {
  Table t{{"nbar", "photon_cut", "beta", "lambda", "variance", "coherent", "ratio", "stationarity", "eigen_residual",
           "tail"},
          {}};
  Table coef{{"nbar", "n", "c"}, {}};
  for (double nbar : c.reals("nbar_list")) {
    const int given = c.integer("phase_cut");
    const PhaseMinProblem p = given >= 0 ? min_phase_state(nbar, given) : converged_phase_state(nbar);
    const int cut = p.photon_cut;
    const double coh = coherent_phase_baseline(nbar);
    t.rows.push_back({nbar, double(cut), p.beta, p.lambda, p.variance, coh, p.variance / coh, p.stationarity,
                      p.eigen_residual, p.tail});
    for (Eigen::Index n = 0; n < p.c.size(); ++n) coef.rows.push_back({nbar, double(n), p.c[n]});
  }
  w.write("phase_min", t);
  w.write("phase_min_coeffs", coef);
}

void cmd_qfunc(const Config& c, Writer& w) {
  const PreparedState st = prepare_sas(prep_of(c));
  SpinGridSpec ss;
  ss.theta_points = c.integer("theta_points");
  ss.phi_points = c.integer("phi_points");
  FieldGridSpec fs;
  fs.points = c.integer("field_points");
  fs.half_width = c.real("field_half_width");
  fs.center = field_moments(st.rho_f).a;
  w.write("spin_qgrid", qgrid_table(qfunc_spin(st.rho_a, ss)));
  w.write("field_qgrid", qgrid_table(qfunc_field(st.rho_f, fs)));
}

void cmd_two_atom(const Config& c, Writer& w) {
  const double alpha = c.real("alpha"), window = c.real("prep_gt");
  const int samples = c.integer("prep_samples");
  const SpinFockBasis b = build_basis(2, alpha, cut_of(c));
  PureTrajectory tr(BlockHamiltonian::cached(b),
                    product_state(b, coherent_field_state(cplx(alpha, 0.0), b.photon_cut), dicke_state(2, 0)));
  Table t{{"gt", "factor", "factor_approx", "var_sx", "var_sx_approx", "sy", "sy_approx", "sz", "sz_approx",
           "within_validity", "oracle_error"},
          {}};
  for (int k = 0; k <= samples; ++k) {
    const double gt = window * k / samples;
    const JointState psi = tr.at(gt);
    const SpinMoments s = spin_moments(psi);
    const TwoAtomApprox a = two_atom_approx(alpha * alpha, gt);
    const double err = (psi.amp - two_atom_state(alpha, gt, b.photon_cut).amp).cwiseAbs().maxCoeff();
    t.rows.push_back({gt, squeezing_factor(s), a.factor, s.covariance()(0, 0), a.var_sx, s.mean.y(), a.sy, s.mean.z(),
                      a.sz, double(a.validity.within), err});
  }
  w.write("two_atom", t);
}

void cmd_pendulum(const Config& c, Writer& w) {
  const int N = c.integer("atoms");
  const double alpha = c.real("alpha"), window = c.real("prep_gt");
  const int samples = c.integer("prep_samples");
  const SpinFockBasis b = build_basis(N, alpha, cut_of(c));
  PureTrajectory tr(BlockHamiltonian::cached(b),
                    product_state(b, coherent_field_state(cplx(alpha, 0.0), b.photon_cut), dicke_state(N, 0)));
  Table t{{"gt", "u", "sz", "sz_pendulum", "sy", "sy_pendulum", "a1", "a1_pendulum", "var_sx", "var_sx_pendulum",
           "var_a2", "var_a2_pendulum", "error_scale"},
          {}};
  for (int k = 0; k <= samples; ++k) {
    const double gt = window * k / samples;
    const JointState psi = tr.at(gt);
    const SpinMoments s = spin_moments(psi);
    const FieldMoments f = field_moments(psi);
    const PendulumMeans pm = pendulum_means(N, alpha, gt);
    const PendulumFluctuations pf = pendulum_fluctuations(N, alpha, gt);
    t.rows.push_back({gt, pm.u, s.mean.z(), pm.sz, s.mean.y(), pm.sy, f.a.real(), pm.a1, s.covariance()(0, 0),
                      pf.var_sx, quadrature_stats(f).variance(0.5 * M_PI), pf.var_a2, pm.error_scale});
  }
  w.write("pendulum", t);
}

using Handler = void (*)(const Config&, Writer&);

Handler handler_of(const std::string& command) {
  if (command == "prepare") return cmd_prepare;
  if (command == "radiate") return cmd_radiate;
  if (command == "tailor") return cmd_tailor;
  if (command == "optimize-alpha") return cmd_optimize;
  if (command == "scaling") return cmd_scaling;
  if (command == "ranges") return cmd_ranges;
  if (command == "contours") return cmd_contours;
  if (command == "phase-min") return cmd_phase_min;
  if (command == "qfunc") return cmd_qfunc;
  if (command == "two-atom") return cmd_two_atom;
  if (command == "pendulum") return cmd_pendulum;
  return nullptr;
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"prepare", "radiate",   "tailor", "optimize-alpha", "scaling",  "ranges",
                                          "contours", "phase-min", "qfunc",  "two-atom",       "pendulum", "validate"};
  return c;
}

std::vector<std::string> validate(const Config& c) {
  std::vector<std::string> out;
  auto error = [&](const std::string& m) { out.push_back("error: " + m); };
  auto warn = [&](const std::string& m) { out.push_back("warning: " + m); };
  const int N = c.integer("atoms");
  const double alpha = c.real("alpha");
  if (N < 1) error("atoms must be positive");
  if (alpha < 0.0) error("alpha must be nonnegative");
  if (c.real("gamma_f") < 0.0) error("gamma_f must be nonnegative");
  if (c.real("gamma_a") < 0.0) error("gamma_a must be nonnegative");
  for (const char* k : {"prep_gt", "rad_gt", "range_gt", "prep_window", "rad_window", "sample_dt"})
    if (!(c.real(k) > 0.0)) error(std::string(k) + " must be positive");
  for (const char* k : {"prep_samples", "rad_samples", "range_samples", "gt_samples"})
    if (c.integer(k) < 1) error(std::string(k) + " must be at least 1");
  if (!(c.real("alpha_hi") > c.real("alpha_lo")) || !(c.real("alpha_step") > 0.0)) error("alpha grid is empty");
  if (!(c.real("tilt_step") > 0.0)) error("tilt grid is empty");
  if (c.integers("atoms_list").empty()) error("atoms_list is empty");
  if (c.reals("nbar_list").empty()) error("nbar_list is empty");
  for (const char* k : {"gamma_f_lo", "gamma_a_lo"})
    if (!(c.real(k) > 0.0)) error(std::string(k) + " must be positive for a log grid");
  if (c.integer("gamma_f_points") < 1 || c.integer("gamma_a_points") < 1) error("dissipation grid is empty");
  const std::string in = c.text("input");
  if (in != "sas" && in != "cas") error("input must be sas or cas");
  if (!out.empty()) return out;

  const bool dissipative = c.real("gamma_f") > 0.0 || c.real("gamma_a") > 0.0;
  int cut = c.integer("photon_cut");
  if (cut < 0) cut = dissipative ? dissipative_photon_cut(N, alpha) : default_photon_cut(N, alpha);
  const double tail = poisson_tail(alpha * alpha, cut);
  if (tail >= 1e-12) error("photon cut " + std::to_string(cut) + " leaves coherent tail " + format_real(tail));
  const double dim = double(cut + 1) * double(N + 1);
  std::ostringstream d;
  d << "estimated dimension " << (cut + 1) << "*" << (N + 1) << " = " << std::llround(dim);
  out.push_back(d.str());
  const double budget = 2.0 * 1024 * 1024 * 1024;
  if (dissipative) {
    // rho, four stages, a scratch copy and the rhs output
    const double bytes = 7.0 * dim * dim * 16.0;
    std::ostringstream m;
    m << "dense density memory " << format_real(bytes / (1024.0 * 1024.0)) << " MiB";
    out.push_back(m.str());
    if (bytes > budget)
      warn("dense rho dimension " + std::to_string(std::llround(dim)) + " squared exceeds the desk-scale budget");
    const double work = dim * dim * c.real("prep_gt") * std::sqrt(double(cut) * N) * 10.0;
    out.push_back(std::string("runtime class: ") + (work < 1e10 ? "seconds" : work < 1e12 ? "minutes" : "hours"));
  } else {
    const double work = double(N + 1) * double(N + 1) * double(cut + 1) * c.integer("prep_samples");
    out.push_back(std::string("runtime class: ") + (work < 1e9 ? "seconds" : work < 1e11 ? "minutes" : "hours"));
  }
  bool clean = true;
  for (const auto& l : out)
    if (l.rfind("warning", 0) == 0 || l.rfind("error", 0) == 0) clean = false;
  if (clean) out.insert(out.begin(), "ok");
  return out;
}

int run(const std::string& command, const std::string& config_path, const std::string& out_dir, int threads,
        const std::string& format) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Config cfg = config_path.empty() ? Config::parse("") : Config::load(config_path);
    if (command == "validate") {
      for (const auto& line : validate(cfg)) std::cout << line << "\n";
      return kOk;
    }
    const Handler h = handler_of(command);
    if (!h) throw ParseError("unknown command '" + command + "'");
    if (threads > 0) set_default_threads(threads);
    Writer w(out_dir, format);
    h(cfg, w);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(w, command, cfg, wall, default_threads());
    return kOk;
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kParseError;
  } catch (const TruncationError& e) {
    std::cerr << "truncation error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kScenarioError;
  }
}

}  // namespace sqz::cli
