#include "sqz/search.hpp"

#include <atomic>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "sqz/errors.hpp"

namespace sqz {

std::optional<std::size_t> first_local_min(const std::vector<double>& v) {
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    if (v[i] <= v[i - 1] && v[i] < v[i + 1]) return i;
  return std::nullopt;
}

std::optional<std::size_t> first_local_max(const std::vector<double>& v) {
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    if (v[i] >= v[i - 1] && v[i] > v[i + 1]) return i;
  return std::nullopt;
}

Minimum refine_minimum(const std::function<double(double)>& f, double lo, double hi, double xtol) {
  if (!(hi > lo)) throw InvalidArgument("refine_minimum: empty bracket");
  // bits such that 2^{1-bits} relative precision meets xtol on the bracket scale
  const double scale = std::max({std::abs(lo), std::abs(hi), 1e-300});
  int bits = int(std::ceil(1.0 - std::log2(std::max(xtol / scale, 1e-15))));
  bits = std::clamp(bits, 8, 26);
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::brent_find_minima(f, lo, hi, bits, iters);
  return {r.first, r.second};
}

Minimum parabolic_vertex(double x0, double h, double fm, double f0, double fp) {
  const double denom = fm - 2.0 * f0 + fp;
  if (!(denom > 0.0)) return {x0, f0};
  double s = 0.5 * (fm - fp) / denom;
  s = std::clamp(s, -1.0, 1.0);
  const double val = f0 + 0.5 * s * (fp - fm) + 0.5 * s * s * denom;
  return {x0 + s * h, std::min(val, f0)};
}

std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope, (sy - slope * sx) / n};
}

namespace {
std::atomic<int> g_threads{0};
}

int default_threads() {
  const int t = g_threads.load();
  if (t > 0) return t;
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_default_threads(int threads) { g_threads.store(std::max(0, threads)); }

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  if (threads <= 0) threads = default_threads();
  const std::size_t workers = std::min<std::size_t>(std::size_t(threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace sqz
