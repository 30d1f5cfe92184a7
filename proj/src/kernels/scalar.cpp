#include "sqz/kernels.hpp"

namespace sqz::kernels {
namespace {

void gemv(std::size_t rows, std::size_t cols, const double* v, std::size_t ld, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < rows; ++i) y[i] = 0.0;
  for (std::size_t j = 0; j < cols; ++j) {
    const double* col = v + j * ld;
    const double xr = x[j].real(), xi = x[j].imag();
    for (std::size_t i = 0; i < rows; ++i) y[i] += cplx(col[i] * xr, col[i] * xi);
  }
}

void gemv_t(std::size_t rows, std::size_t cols, const double* v, std::size_t ld, const cplx* x, cplx* y) {
  for (std::size_t j = 0; j < cols; ++j) {
    const double* col = v + j * ld;
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      re += col[i] * x[i].real();
      im += col[i] * x[i].imag();
    }
    y[j] = cplx(re, im);
  }
}

void axpy_real(std::size_t n, double a, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void axpy(std::size_t n, cplx a, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void weighted_axpy(std::size_t n, double a, const double* w, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += (a * w[i]) * x[i];
}

cplx dotc(std::size_t n, const cplx* x, const cplx* y) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

const Table table{"scalar", gemv, gemv_t, axpy_real, axpy, weighted_axpy, dotc};

}  // namespace

const Table& scalar_table() { return table; }

}  // namespace sqz::kernels
