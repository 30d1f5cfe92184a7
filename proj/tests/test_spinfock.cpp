#include <doctest.h>

#include <cmath>

#include "sqz/errors.hpp"
#include "sqz/spinfock.hpp"

using namespace sqz;

TEST_CASE("truncation rule and coherent tails") {
  CHECK(default_photon_cut(10, 3.3) == int(std::ceil(3.3 * 3.3 + 33.0 + 20.0)) + 10);
  CHECK(default_photon_cut(2, 0.0) == 22);
  for (double alpha : {0.5, 3.3, 10.0}) {
    const int cut = default_photon_cut(1, alpha);
    CHECK(poisson_tail(alpha * alpha, cut) < 1e-12);
    CHECK(coherent_cut(alpha * alpha) <= cut);
    CHECK(poisson_tail(alpha * alpha, coherent_cut(alpha * alpha)) < 1e-12);
  }
  CHECK_THROWS_AS(coherent_field_state(cplx(10.0, 0.0), 60), TruncationError);
  CHECK_THROWS_AS(build_basis(0, 1.0), InvalidArgument);
}

TEST_CASE("basis indexing") {
  const SpinFockBasis b = build_basis(4, 1.0, 7);
  CHECK(b.dim() == 40);
  CHECK(b.index(3, 2) == 17);
  CHECK(b.spin_m(0) == doctest::Approx(2.0));
  CHECK(b.spin_m(4) == doctest::Approx(-2.0));
}

TEST_CASE("coherent state moments") {
  const cplx alpha(1.2, -0.7);
  const CVec c = coherent_field_state(alpha, coherent_cut(std::norm(alpha)));
  CHECK(c.norm() == doctest::Approx(1.0).epsilon(1e-12));
  const FieldMatrices f = field_matrices(int(c.size()) - 1);
  CHECK(std::abs(c.dot(f.a.mat * c) - alpha) < 1e-10);
  CHECK(c.dot(f.n.mat * c).real() == doctest::Approx(std::norm(alpha)).epsilon(1e-10));
}

TEST_CASE("spin matrices satisfy the angular momentum algebra") {
  for (int N : {1, 2, 5}) {
    const SpinMatrices s = spin_matrices(N);
    const cplx I(0.0, 1.0);
    const CMat& x = s.sx.mat;
    const CMat& y = s.sy.mat;
    const CMat& z = s.sz.mat;
    CHECK((x * y - y * x - I * z).norm() < 1e-12);
    CHECK((y * z - z * y - I * x).norm() < 1e-12);
    const double S = 0.5 * N;
    const CMat cas = x * x + y * y + z * z;
    CHECK((cas - S * (S + 1) * CMat::Identity(N + 1, N + 1)).norm() < 1e-12);
    CHECK((s.sp.mat - (x + I * y)).norm() < 1e-12);
    const CVec top = dicke_state(N, 0);
    CHECK(top.dot(z * top).real() == doctest::Approx(S));
  }
}

TEST_CASE("css points along its Bloch direction") {
  const int N = 6;
  const double theta = 1.1, phi = 0.4;
  const CVec c = css_state(N, theta, phi);
  CHECK(c.norm() == doctest::Approx(1.0).epsilon(1e-12));
  const SpinMatrices s = spin_matrices(N);
  const Eigen::Vector3d m(c.dot(s.sx.mat * c).real(), c.dot(s.sy.mat * c).real(), c.dot(s.sz.mat * c).real());
  CHECK(m.norm() == doctest::Approx(0.5 * N).epsilon(1e-12));
  CHECK(css_state(N, 0.0, 0.0).isApprox(dicke_state(N, 0)));
}

TEST_CASE("partial traces of a product state return the factors") {
  const SpinFockBasis b = build_basis(3, 0.8, 12);
  const CVec f = coherent_field_state(cplx(0.8, 0.2), 12);
  const CVec s = css_state(3, 0.7, 1.3);
  const JointState psi = product_state(b, f, s);
  CHECK((reduced_density(psi, Factor::field) - f * f.adjoint()).norm() < 1e-12);
  CHECK((reduced_density(psi, Factor::spin) - s * s.adjoint()).norm() < 1e-12);
  const JointDensity rho = density_of(psi);
  CHECK((partial_trace(rho, Factor::spin) - s * s.adjoint()).norm() < 1e-12);
  const SpinMatrices sm = spin_matrices(3);
  CHECK(std::abs(expectation(sm.sz, Factor::spin, psi) - s.dot(sm.sz.mat * s)) < 1e-12);
  CHECK(std::abs(expectation(sm.sz, Factor::spin, rho) - s.dot(sm.sz.mat * s)) < 1e-12);
  CHECK_THROWS_AS(product_state(b, f, dicke_state(4, 0)), DimensionMismatch);
}
