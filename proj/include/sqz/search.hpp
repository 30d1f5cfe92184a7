#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace sqz {

// Index i with v[i-1] >= v[i] < v[i+1]; the first strict rise after a descent.
std::optional<std::size_t> first_local_min(const std::vector<double>& v);
std::optional<std::size_t> first_local_max(const std::vector<double>& v);

struct Minimum {
  double x = 0.0;
  double value = 0.0;
};

// Brent (golden section with parabolic steps) on [lo, hi] to absolute x tolerance.
Minimum refine_minimum(const std::function<double(double)>& f, double lo, double hi, double xtol = 1e-6);

// Vertex of the parabola through three equally spaced samples, clamped to the bracket.
Minimum parabolic_vertex(double x0, double h, double f_m, double f_0, double f_p);

// Least-squares slope and intercept of y against x.
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// Runs body(i) for i in [0, n) on up to `threads` workers. Results must be written
// to index-addressed storage so aggregation order never depends on scheduling.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

int default_threads();
void set_default_threads(int threads);

}  // namespace sqz
