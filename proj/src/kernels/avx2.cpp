#include <immintrin.h>

#include "sqz/kernels.hpp"

namespace sqz::kernels {
namespace {

// (w0, w0, w1, w1) from two consecutive reals
inline __m256d spread2(const double* w) {
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(w)), 0x50);
}

inline double* dp(cplx* p) { return reinterpret_cast<double*>(p); }
inline const double* dp(const cplx* p) { return reinterpret_cast<const double*>(p); }

void axpy_real(std::size_t n, double a, const cplx* x, cplx* y) {
  const __m256d va = _mm256_set1_pd(a);
  const double* xs = dp(x);
  double* ys = dp(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d yv = _mm256_loadu_pd(ys + 2 * i);
    yv = _mm256_fmadd_pd(va, _mm256_loadu_pd(xs + 2 * i), yv);
    _mm256_storeu_pd(ys + 2 * i, yv);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void gemv(std::size_t rows, std::size_t cols, const double* v, std::size_t ld, const cplx* x, cplx* y) {
  double* ys = dp(y);
  std::size_t i = 0;
  // four output rows per pass keep the accumulators in registers
  for (; i + 4 <= rows; i += 4) {
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    for (std::size_t j = 0; j < cols; ++j) {
      const __m256d xv = _mm256_broadcast_pd(reinterpret_cast<const __m128d*>(x + j));
      const double* col = v + j * ld + i;
      acc0 = _mm256_fmadd_pd(spread2(col), xv, acc0);
      acc1 = _mm256_fmadd_pd(spread2(col + 2), xv, acc1);
    }
    _mm256_storeu_pd(ys + 2 * i, acc0);
    _mm256_storeu_pd(ys + 2 * i + 4, acc1);
  }
  for (; i < rows; ++i) {
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      re += v[j * ld + i] * x[j].real();
      im += v[j * ld + i] * x[j].imag();
    }
    y[i] = cplx(re, im);
  }
}

void gemv_t(std::size_t rows, std::size_t cols, const double* v, std::size_t ld, const cplx* x, cplx* y) {
  const double* xs = dp(x);
  for (std::size_t j = 0; j < cols; ++j) {
    const double* col = v + j * ld;
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= rows; i += 4) {
      acc0 = _mm256_fmadd_pd(spread2(col + i), _mm256_loadu_pd(xs + 2 * i), acc0);
      acc1 = _mm256_fmadd_pd(spread2(col + i + 2), _mm256_loadu_pd(xs + 2 * i + 4), acc1);
    }
    acc0 = _mm256_add_pd(acc0, acc1);
    __m128d s = _mm_add_pd(_mm256_castpd256_pd128(acc0), _mm256_extractf128_pd(acc0, 1));
    double re = _mm_cvtsd_f64(s), im = _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
    for (; i < rows; ++i) {
      re += col[i] * x[i].real();
      im += col[i] * x[i].imag();
    }
    y[j] = cplx(re, im);
  }
}

void axpy(std::size_t n, cplx a, const cplx* x, cplx* y) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  const double* xs = dp(x);
  double* ys = dp(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xs + 2 * i);
    const __m256d xsw = _mm256_permute_pd(xv, 0x5);
    // (ar xr - ai xi, ar xi + ai xr)
    const __m256d prod = _mm256_fmaddsub_pd(ar, xv, _mm256_mul_pd(ai, xsw));
    _mm256_storeu_pd(ys + 2 * i, _mm256_add_pd(_mm256_loadu_pd(ys + 2 * i), prod));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void weighted_axpy(std::size_t n, double a, const double* w, const cplx* x, cplx* y) {
  const __m256d va = _mm256_set1_pd(a);
  const double* xs = dp(x);
  double* ys = dp(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d wv = _mm256_mul_pd(va, spread2(w + i));
    __m256d yv = _mm256_loadu_pd(ys + 2 * i);
    yv = _mm256_fmadd_pd(wv, _mm256_loadu_pd(xs + 2 * i), yv);
    _mm256_storeu_pd(ys + 2 * i, yv);
  }
  for (; i < n; ++i) y[i] += (a * w[i]) * x[i];
}

cplx dotc(std::size_t n, const cplx* x, const cplx* y) {
  const double* xs = dp(x);
  const double* ys = dp(y);
  __m256d same = _mm256_setzero_pd(), cross = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xs + 2 * i);
    const __m256d yv = _mm256_loadu_pd(ys + 2 * i);
    same = _mm256_fmadd_pd(xv, yv, same);
    cross = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0x5), cross);
  }
  alignas(32) double s[4], c[4];
  _mm256_store_pd(s, same);
  _mm256_store_pd(c, cross);
  double re = s[0] + s[1] + s[2] + s[3];
  double im = c[0] - c[1] + c[2] - c[3];
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

const Table table{"avx2", gemv, gemv_t, axpy_real, axpy, weighted_axpy, dotc};

}  // namespace

const Table* avx2_table_impl() { return &table; }

}  // namespace sqz::kernels
