#include "hamlink/common.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace hamlink {

namespace {
std::atomic<int> g_threads{1};
}

int worker_threads() { return g_threads.load(); }

void set_worker_threads(int n) { g_threads.store(n < 1 ? 1 : n); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  int nw = worker_threads();
  if (nw <= 1 || n < 2 * static_cast<std::size_t>(nw)) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nw);
  std::size_t chunk = (n + nw - 1) / nw;
  for (int w = 0; w < nw; ++w) {
    std::size_t lo = w * chunk;
    std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::vector<double> logspace(double lo, double hi, int n) {
  if (n < 1 || lo <= 0.0 || hi <= 0.0)
    throw std::invalid_argument("logspace: need n >= 1 and positive bounds");
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  double la = std::log(lo), lb = std::log(hi);
  for (int i = 0; i < n; ++i)
    out[i] = std::exp(la + (lb - la) * i / (n - 1));
  return out;
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("linspace: need n >= 1");
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  return out;
}

Vec gaussian_vector(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = gauss(rng);
  return v;
}

Vec unit_direction(std::mt19937_64& rng, int dim) {
  Vec v = gaussian_vector(rng, dim);
  double n = v.norm();
  while (n < 1e-12) {
    v = gaussian_vector(rng, dim);
    n = v.norm();
  }
  return v / n;
}

}  // namespace hamlink
