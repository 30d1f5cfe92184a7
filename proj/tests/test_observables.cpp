#include <doctest.h>

#include "sqz/dynamics.hpp"
#include "sqz/observables.hpp"

using namespace sqz;

namespace {

JointState squeezed_sample(int N, double alpha, double gt) {
  const SpinFockBasis b = build_basis(N, alpha);
  const JointState psi0 =
      product_state(b, coherent_field_state(cplx(alpha, 0.0), b.photon_cut), dicke_state(N, 0));
  return evolve_unitary(psi0, BlockHamiltonian(b), gt);
}

}  // namespace

TEST_CASE("Pegg-Barnett variance of Fock states is pi^2/3") {
  for (int cut : {1, 8, 40})
    for (int n : {0, 1, cut / 2, cut}) {
      CAPTURE(n);
      CHECK(std::abs(pegg_barnett_variance(fock_state(n, cut)).value - M_PI * M_PI / 3.0) < 1e-12);
    }
}

TEST_CASE("coherent field statistics") {
  const cplx alpha(2.0, 1.0);
  const CVec c = coherent_field_state(alpha, coherent_cut(std::norm(alpha)));
  const CMat rho = c * c.adjoint();
  const QuadratureStats q = quadrature_stats(rho);
  CHECK(q.var_min == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(q.var_max == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(q.mean_quadrature(0.0) == doctest::Approx(alpha.real()).epsilon(1e-9));
  const PhotonStats p = photon_stats(rho);
  CHECK(p.mean == doctest::Approx(5.0).epsilon(1e-9));
  REQUIRE(p.fano);
  CHECK(*p.fano == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_FALSE(photon_stats(CMat(fock_state(0, 3) * fock_state(0, 3).adjoint())).fano);
}

TEST_CASE("tangent variances equal the extremes of a direct angular scan") {
  const int N = 10;
  const JointState psi = squeezed_sample(N, 3.3, 0.5);
  const CMat rho_a = reduced_density(psi, Factor::spin);
  const TangentVariances tv = tangent_variances(rho_a);
  const SpinMatrices s = spin_matrices(N);
  double lo = 1e300, hi = -1e300;
  for (int k = 0; k < 32 * 100; ++k) {
    const double chi = M_PI * k / (32 * 100);
    const Eigen::Vector3d u = std::cos(chi) * tv.m + std::sin(chi) * tv.t;
    const CMat op = u.x() * s.sx.mat + u.y() * s.sy.mat + u.z() * s.sz.mat;
    const double mean = (rho_a * op).trace().real();
    const double var = (rho_a * op * op).trace().real() - mean * mean;
    lo = std::min(lo, var);
    hi = std::max(hi, var);
  }
  CHECK(tv.var_min == doctest::Approx(lo).epsilon(1e-5));
  CHECK(tv.var_max == doctest::Approx(hi).epsilon(1e-5));
  CHECK(squeezing_factor(rho_a) == doctest::Approx(2.0 * tv.var_min / mean_spin(rho_a).norm()).epsilon(1e-12));
  CHECK(squeezing_factor(rho_a) < 1.0);
}

TEST_CASE("uncertainty relations hold along a trajectory") {
  for (double gt : {0.0, 0.2, 0.5, 1.0, 3.0}) {
    const JointState psi = squeezed_sample(6, 2.0, gt);
    const UncertaintyCheck u = uncertainty_margins(spin_moments(psi), field_moments(psi));
    CHECK(u.field_product_margin > -1e-10);
    CHECK(u.spin_margin > -1e-10);
  }
}

TEST_CASE("record rows follow the column list") {
  const JointState psi = squeezed_sample(4, 1.5, 0.3);
  const ObservableRecord r = make_record(0.3, spin_moments(psi), field_moments(psi));
  CHECK(record_row(r).size() == record_columns().size());
  CHECK(record_columns().front() == "gt");
}

TEST_CASE("symmetric initial states keep Sx and a2 at zero") {
  const int N = 10;
  const SpinFockBasis b = build_basis(N, 3.3);
  const CVec top = dicke_state(N, 0);
  const CVec field = coherent_field_state(cplx(3.3, 0.0), b.photon_cut);
  CHECK(vanishing_symmetry_check(field * field.adjoint(), top * top.adjoint()));
  const CVec fock = fock_state(3, 5);
  CHECK(vanishing_symmetry_check(fock * fock.adjoint(), top * top.adjoint()));
  const CVec imag = coherent_field_state(cplx(0.0, 1.0), 30);
  CHECK_FALSE(vanishing_symmetry_check(imag * imag.adjoint(), top * top.adjoint()));
  const CVec tilted = css_state(N, 0.4, 0.0);
  CHECK_FALSE(vanishing_symmetry_check(field * field.adjoint(), tilted * tilted.adjoint()));

  const JointState psi0 = product_state(b, field, top);
  PureTrajectory tr(BlockHamiltonian::cached(b), psi0);
  for (double gt : {0.1, 0.6, 2.0, 5.0}) {
    const JointState psi = tr.at(gt);
    CHECK(std::abs(spin_moments(psi).mean.x()) < 1e-10);
    CHECK(std::abs(field_moments(psi).a.imag()) < 1e-10);
  }
}
