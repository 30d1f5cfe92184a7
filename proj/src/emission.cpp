#include <cmath>

#include "sqz/dynamics.hpp"
#include "sqz/errors.hpp"
#include "sqz/kernels.hpp"

namespace sqz {

EmissionPropagator::EmissionPropagator(int atoms, double g) : atoms_(atoms) {
  SpinFockBasis b;
  b.atoms = atoms;
  b.photon_cut = atoms;  // the vacuum can gain at most N photons
  H_ = BlockHamiltonian::cached(b, g);
}

EmissionPropagator::Frame EmissionPropagator::at(double gt) const {
  Frame f;
  f.gt = gt;
  f.w.resize(atoms_ + 1);
  CVec c;
  for (int k = 0; k <= atoms_; ++k) {
    const Block& b = H_->block(k);
    c.resize(b.size);
    for (int q = 0; q < b.size; ++q) c[q] = b.modes(0, q) * std::polar(1.0, -b.freq[q] * gt);
    f.w[k].resize(b.size);
    kernels::gemv(b.size, b.size, b.modes.data(), b.size, c.data(), f.w[k].data());
  }
  return f;
}

CMat EmissionPropagator::field_density(const Frame& f, const CMat& rho_a) const {
  const int N = atoms_;
  if (rho_a.rows() != N + 1) throw DimensionMismatch("spin density size does not match the propagator");
  // rho in excitation labels: r(k1, k2) = rho_a(N - k1, N - k2)
  CMat out = CMat::Zero(N + 1, N + 1);
  for (int n = 0; n <= N; ++n)
    for (int m = 0; m <= n; ++m) {
      cplx s = 0.0;
      for (int K = 0; n + K <= N; ++K)
        s += rho_a(N - n - K, N - m - K) * f.w[n + K][n] * std::conj(f.w[m + K][m]);
      out(n, m) = s;
      out(m, n) = std::conj(s);
    }
  return out;
}

CMat EmissionPropagator::spin_density(const Frame& f, const CMat& rho_a) const {
  const int N = atoms_;
  if (rho_a.rows() != N + 1) throw DimensionMismatch("spin density size does not match the propagator");
  CMat out = CMat::Zero(N + 1, N + 1);
  for (int K = 0; K <= N; ++K)
    for (int L = 0; L <= K; ++L) {
      cplx s = 0.0;
      for (int n = 0; n + K <= N; ++n) s += rho_a(N - n - K, N - n - L) * f.w[n + K][n] * std::conj(f.w[n + L][n]);
      out(N - K, N - L) = s;
      out(N - L, N - K) = std::conj(s);
    }
  return out;
}

}  // namespace sqz
