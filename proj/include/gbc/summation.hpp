#pragma once

// Compensated summation and a deterministic parallel map.  Quadrature
// reductions always sum per-node values in index order, so results do not
// depend on the worker count.

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace gbc {

// Neumaier variant of Kahan summation.
inline double compensated_sum(std::span<const double> xs) {
  double s = 0.0, c = 0.0;
  for (double x : xs) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  return s + c;
}

class CompensatedAccumulator {
 public:
  void add(double x) {
    const double t = s_ + x;
    if (std::abs(s_) >= std::abs(x))
      c_ += (s_ - t) + x;
    else
      c_ += (x - t) + s_;
    s_ = t;
  }
  double total() const { return s_ + c_; }

 private:
  double s_ = 0.0, c_ = 0.0;
};

// Evaluates fn(i) for i in [0, count) into a vector, splitting the range
// over `threads` workers.  Each slot is written exactly once, so the result
// is identical for any thread count.
inline std::vector<double> parallel_map(std::size_t count, int threads,
                                        const std::function<double(std::size_t)>& fn) {
  std::vector<double> out(count);
  if (threads <= 1 || count < 64) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  const int nw = std::min<std::size_t>(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(nw);
  const std::size_t chunk = (count + nw - 1) / nw;
  for (int w = 0; w < nw; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) out[i] = fn(i);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace gbc
