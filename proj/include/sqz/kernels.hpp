#pragma once

#include <complex>
#include <cstddef>

// Inner loops shared by block evolution and the master-equation right-hand side.
// Complex arrays are interleaved (re, im) as std::complex<double> guarantees.
namespace sqz::kernels {

using cplx = std::complex<double>;

struct Table {
  const char* name;
  // y = V x, V real column-major rows x cols with leading dimension ld
  void (*gemv)(std::size_t rows, std::size_t cols, const double* v, std::size_t ld, const cplx* x, cplx* y);
  // y = V^T x
  void (*gemv_t)(std::size_t rows, std::size_t cols, const double* v, std::size_t ld, const cplx* x, cplx* y);
  // y += a x, a real
  void (*axpy_real)(std::size_t n, double a, const cplx* x, cplx* y);
  // y += a x, a complex
  void (*axpy)(std::size_t n, cplx a, const cplx* x, cplx* y);
  // y[i] += a w[i] x[i]
  void (*weighted_axpy)(std::size_t n, double a, const double* w, const cplx* x, cplx* y);
  // sum conj(x[i]) y[i]
  cplx (*dotc)(std::size_t n, const cplx* x, const cplx* y);
};

const Table& scalar_table();
// nullptr when the AVX2 translation unit is absent or the CPU lacks avx2/fma
const Table* avx2_table();

// Selected once: AVX2 when available unless SQZ_KERNELS=scalar.
const Table& active();
// Tests only. Returns false if the requested table is unavailable.
bool select(const char* name);

inline void gemv(std::size_t rows, std::size_t cols, const double* v, std::size_t ld, const cplx* x, cplx* y) {
  active().gemv(rows, cols, v, ld, x, y);
}
inline void gemv_t(std::size_t rows, std::size_t cols, const double* v, std::size_t ld, const cplx* x, cplx* y) {
  active().gemv_t(rows, cols, v, ld, x, y);
}
inline void axpy_real(std::size_t n, double a, const cplx* x, cplx* y) { active().axpy_real(n, a, x, y); }
inline void axpy(std::size_t n, cplx a, const cplx* x, cplx* y) { active().axpy(n, a, x, y); }
inline void weighted_axpy(std::size_t n, double a, const double* w, const cplx* x, cplx* y) {
  active().weighted_axpy(n, a, w, x, y);
}
inline cplx dotc(std::size_t n, const cplx* x, const cplx* y) { return active().dotc(n, x, y); }

}  // namespace sqz::kernels
