#include <functional>
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gbc/tensor.hpp"

using namespace gbc;

namespace {

// ---------------------------------------------------------------------------
// Independent oracles.  These deliberately use the naive formulations.

// Leibniz determinant of the p x p matrix M[r][c] = delta^{upper_r}_{lower_c}.
double delta_by_determinant(const std::vector<int>& upper, const std::vector<int>& lower) {
  const int p = static_cast<int>(upper.size());
  std::vector<int> perm(p);
  for (int i = 0; i < p; ++i) perm[i] = i;
  double det = 0.0;
  // iterate permutations with parity
  std::vector<int> c(p, 0);
  int sign = 1;
  auto term = [&]() {
    double t = sign;
    for (int r = 0; r < p; ++r) t *= (upper[r] == lower[perm[r]]) ? 1.0 : 0.0;
    return t;
  };
  det += term();
  int i = 0;
  while (i < p) {
    if (c[i] < i) {
      if (i % 2 == 0)
        std::swap(perm[0], perm[i]);
      else
        std::swap(perm[c[i]], perm[i]);
      sign = -sign;
      det += term();
      ++c[i];
      i = 0;
    } else {
      c[i] = 0;
      ++i;
    }
  }
  return det;
}

void enumerate_tuples(int n, int len, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> t(len, 0);
  while (true) {
    fn(t);
    int i = len - 1;
    while (i >= 0 && t[i] == n - 1) t[i--] = 0;
    if (i < 0) return;
    ++t[i];
  }
}

// Naive permutation sum for L_(q): all index tuples, generalized_delta per term.
double brute_gauss_bonnet(const DenseTensor& rm, int q) {
  const int n = rm.dim();
  const int p = 2 * q;
  double total = 0.0;
  enumerate_tuples(n, p, [&](const std::vector<int>& a) {
    enumerate_tuples(n, p, [&](const std::vector<int>& b) {
      const double d = generalized_delta(std::span<const int>(a), std::span<const int>(b));
      if (d == 0.0) return;
      double prod = d;
      for (int s = 0; s < q; ++s)
        prod *= rm(a[2 * s], a[2 * s + 1], b[2 * s], b[2 * s + 1]);
      total += prod;
    });
  });
  return total / std::pow(2.0, q);
}

DenseTensor brute_p_tensor(const DenseTensor& rm, const DenseTensor& ginv, int q) {
  const int n = rm.dim();
  const int p = 2 * q;
  DenseTensor w(n, 4);
  enumerate_tuples(n, p - 2, [&](const std::vector<int>& a) {
    enumerate_tuples(n, p, [&](const std::vector<int>& b) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          std::vector<int> up = a;
          up.push_back(i);
          up.push_back(j);
          const double d =
              generalized_delta(std::span<const int>(up), std::span<const int>(b));
          if (d == 0.0) continue;
          double prod = d;
          for (int s = 0; s < q - 1; ++s)
            prod *= rm(a[2 * s], a[2 * s + 1], b[2 * s], b[2 * s + 1]);
          w(i, j, b[p - 2], b[p - 1]) += prod;
        }
    });
  });
  DenseTensor out(n, 4);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int e = 0; e < n; ++e)
            for (int f = 0; f < n; ++f) s += w(i, j, e, f) * ginv(e, k) * ginv(f, l);
          out(i, j, k, l) = s / std::pow(2.0, q);
        }
  return out;
}

DenseTensor brute_lovelock(const DenseTensor& rm, const DenseTensor& g, int q) {
  const int n = rm.dim();
  const int p = 2 * q;
  DenseTensor gmix(n, 2);
  enumerate_tuples(n, p, [&](const std::vector<int>& b) {
    enumerate_tuples(n, p, [&](const std::vector<int>& a) {
      double prod = 1.0;
      for (int s = 0; s < q; ++s)
        prod *= rm(b[2 * s], b[2 * s + 1], a[2 * s], a[2 * s + 1]);
      if (prod == 0.0) return;
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
          std::vector<int> up = {k}, lo = {j};
          up.insert(up.end(), b.begin(), b.end());
          lo.insert(lo.end(), a.begin(), a.end());
          const double d =
              generalized_delta(std::span<const int>(up), std::span<const int>(lo));
          if (d != 0.0) gmix(k, j) += d * prod;
        }
    });
  });
  DenseTensor out(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += g(i, k) * gmix(k, j);
      out(i, j) = -s / std::pow(2.0, q + 1);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Random inputs with the required symmetries.

DenseTensor random_spd_metric(int n, std::mt19937& rng) {
  std::normal_distribution<double> nd(0.0, 0.15);
  DenseTensor g(n, 2, Symmetry::symmetric2);
  std::vector<double> a(n * n);
  for (auto& x : a) x = nd(rng);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = (i == j) ? 1.0 : 0.0;
      for (int k = 0; k < n; ++k) s += a[i * n + k] * a[j * n + k];
      g(i, j) = s;
    }
  return g;
}

DenseTensor invert_metric(const DenseTensor& g) {
  // Gauss-Jordan; n <= 8
  const int n = g.dim();
  std::vector<double> m(n * 2 * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m[i * 2 * n + j] = g(i, j);
    m[i * 2 * n + n + i] = 1.0;
  }
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m[r * 2 * n + col]) > std::abs(m[piv * 2 * n + col])) piv = r;
    for (int j = 0; j < 2 * n; ++j) std::swap(m[piv * 2 * n + j], m[col * 2 * n + j]);
    const double d = m[col * 2 * n + col];
    for (int j = 0; j < 2 * n; ++j) m[col * 2 * n + j] /= d;
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = m[r * 2 * n + col];
      for (int j = 0; j < 2 * n; ++j) m[r * 2 * n + j] -= f * m[col * 2 * n + j];
    }
  }
  DenseTensor inv(n, 2, Symmetry::symmetric2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = 0.5 * (m[i * 2 * n + n + j] + m[j * 2 * n + n + i]);
  return inv;
}

// Random tensor with all riemann-4 symmetries (pair antisymmetry + exchange).
DenseTensor random_riemann_low(int n, std::mt19937& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  DenseTensor t(n, 4);
  for (auto& x : t.components()) x = nd(rng);
  DenseTensor r(n, 4, Symmetry::riemann4);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double a = 0.25 * (t(i, j, k, l) - t(j, i, k, l) - t(i, j, l, k) + t(j, i, l, k));
          const double b = 0.25 * (t(k, l, i, j) - t(l, k, i, j) - t(k, l, j, i) + t(l, k, j, i));
          r(i, j, k, l) = 0.5 * (a + b);
        }
  return r;
}

DenseTensor mixed_from_low(const DenseTensor& rlow, const DenseTensor& ginv) {
  return raise_slot(raise_slot(rlow, ginv, 2), ginv, 3);
}

double rel_diff(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

}  // namespace

TEST_CASE("generalized_delta basic values") {
  CHECK(generalized_delta(MultiIndex{1, 2}, MultiIndex{1, 2}) == 1.0);
  CHECK(generalized_delta(MultiIndex{1, 2}, MultiIndex{2, 1}) == -1.0);
  CHECK(generalized_delta(MultiIndex{1, 1}, MultiIndex{1, 2}) == 0.0);
  CHECK(generalized_delta(MultiIndex{0, 1, 2}, MultiIndex{1, 2, 0}) == 1.0);
  CHECK(generalized_delta(MultiIndex{0, 1, 2}, MultiIndex{1, 0, 2}) == -1.0);
  CHECK(generalized_delta(MultiIndex{0, 1}, MultiIndex{0, 2}) == 0.0);
  CHECK_THROWS_AS(generalized_delta(MultiIndex{0, 1}, MultiIndex{0}), std::invalid_argument);
}

TEST_CASE("generalized_delta agrees with determinant brute force, n=3,4 exhaustive") {
  for (int n : {3, 4}) {
    for (int p = 1; p <= n; ++p) {
      enumerate_tuples(n, p, [&](const std::vector<int>& up) {
        enumerate_tuples(n, p, [&](const std::vector<int>& lo) {
          const double got =
              generalized_delta(std::span<const int>(up), std::span<const int>(lo));
          const double want = delta_by_determinant(up, lo);
          CHECK(got == want);
        });
      });
    }
  }
}

TEST_CASE("generalized_delta antisymmetry and self-contraction") {
  std::mt19937 rng(11);
  const int n = 6;
  for (int trial = 0; trial < 200; ++trial) {
    const int p = 2 + static_cast<int>(rng() % 4);
    std::vector<int> up(p), lo(p);
    for (auto& x : up) x = static_cast<int>(rng() % n);
    for (auto& x : lo) x = static_cast<int>(rng() % n);
    const double base =
        generalized_delta(std::span<const int>(up), std::span<const int>(lo));
    int i = static_cast<int>(rng() % p), j = static_cast<int>(rng() % p);
    if (i == j) continue;
    auto up2 = up;
    std::swap(up2[i], up2[j]);
    const double swapped =
        generalized_delta(std::span<const int>(up2), std::span<const int>(lo));
    if (up[i] == up[j])
      CHECK(swapped == base);
    else
      CHECK(swapped == -base);
  }
  // delta(u, u) = 1 for repetition-free u
  CHECK(generalized_delta(MultiIndex{3, 0, 5, 2}, MultiIndex{3, 0, 5, 2}) == 1.0);
  // full self-contraction over repetition-free tuples counts n!/(n-p)!
  for (int p = 1; p <= 3; ++p) {
    double count = 0.0;
    enumerate_tuples(n, p, [&](const std::vector<int>& t) {
      count += generalized_delta(std::span<const int>(t), std::span<const int>(t));
    });
    double expect = 1.0;
    for (int k = 0; k < p; ++k) expect *= (n - k);
    CHECK(count == expect);
  }
}

TEST_CASE("gauss_bonnet_curvature: flat input vanishes, q=0 is 1, domain errors") {
  DenseTensor zero(5, 4, Symmetry::riemann4);
  CHECK(gauss_bonnet_curvature(zero, 1) == 0.0);
  CHECK(gauss_bonnet_curvature(zero, 2) == 0.0);
  CHECK(gauss_bonnet_curvature(zero, 0) == 1.0);
  DenseTensor zero4(4, 4, Symmetry::riemann4);
  CHECK_THROWS_AS(gauss_bonnet_curvature(zero4, 2), std::domain_error);
  CHECK_THROWS_AS(gauss_bonnet_curvature(zero, 3), std::domain_error);
}

TEST_CASE("L_(1) equals the direct Ricci-trace contraction") {
  std::mt19937 rng(23);
  for (int n : {3, 4, 5}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto g = random_spd_metric(n, rng);
      const auto ginv = invert_metric(g);
      const auto rlow = random_riemann_low(n, rng);
      const auto rmix = mixed_from_low(rlow, ginv);
      // oracle: Sc = g^{ik} g^{jl} R_ijkl
      double sc = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
              sc += ginv(i, k) * ginv(j, l) * rlow(i, j, k, l);
      const double l1 = gauss_bonnet_curvature(rmix, 1);
      CHECK(rel_diff(l1, sc) < 1e-12);
    }
  }
}

TEST_CASE("constant-curvature L_(q): engine, brute force, and closed form agree") {
  // sphere-like point: R_ijkl = K (g_ik g_jl - g_il g_jk);
  // closed form L_(q) = K^q n! / (n-2q)!
  std::mt19937 rng(31);
  const int n = 5;
  const double r = 1.7;
  const double K = 1.0 / (r * r);
  const auto g = random_spd_metric(n, rng);
  const auto ginv = invert_metric(g);
  DenseTensor rlow(n, 4, Symmetry::riemann4);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          rlow(i, j, k, l) = K * (g(i, k) * g(j, l) - g(i, l) * g(j, k));
  const auto rmix = mixed_from_low(rlow, ginv);

  const double l1 = gauss_bonnet_curvature(rmix, 1);
  CHECK(rel_diff(l1, K * n * (n - 1)) < 1e-11);

  const double l2 = gauss_bonnet_curvature(rmix, 2);
  double closed = K * K;
  closed *= n * (n - 1) * (n - 2) * (n - 3);  // n!/(n-4)!
  CHECK(rel_diff(l2, closed) < 1e-11);
  CHECK(rel_diff(l2, brute_gauss_bonnet(rmix, 2)) < 1e-12);
}

TEST_CASE("contraction engine matches brute-force permutation sum") {
  std::mt19937 rng(41);
  for (int n : {3, 4, 5}) {
    for (int q : {1, 2}) {
      if (2 * q >= n) continue;
      const auto g = random_spd_metric(n, rng);
      const auto ginv = invert_metric(g);
      const auto rmix = mixed_from_low(random_riemann_low(n, rng), ginv);

      CHECK(rel_diff(gauss_bonnet_curvature(rmix, q), brute_gauss_bonnet(rmix, q)) < 1e-12);

      const auto p_fast = p_tensor(rmix, ginv, q);
      const auto p_slow = brute_p_tensor(rmix, ginv, q);
      double worst = 0.0;
      for (size_t idx = 0; idx < p_fast.components().size(); ++idx)
        worst = std::max(worst,
                         std::abs(p_fast.components()[idx] - p_slow.components()[idx]));
      CHECK(worst < 1e-12 * std::max(1.0, p_slow.max_abs()));

      const auto g_fast = lovelock_tensor(rmix, g, q);
      const auto g_slow = brute_lovelock(rmix, g, q);
      worst = 0.0;
      for (size_t idx = 0; idx < g_fast.components().size(); ++idx)
        worst = std::max(worst,
                         std::abs(g_fast.components()[idx] - g_slow.components()[idx]));
      CHECK(worst < 1e-11 * std::max(1.0, g_slow.max_abs()));
    }
  }
}

TEST_CASE("P_(1) closed form and P:R = L") {
  std::mt19937 rng(53);
  const int n = 4;
  const auto g = random_spd_metric(n, rng);
  const auto ginv = invert_metric(g);
  const auto rlow = random_riemann_low(n, rng);
  const auto rmix = mixed_from_low(rlow, ginv);

  const auto p1 = p_tensor(rmix, ginv, 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double want = 0.5 * (ginv(i, k) * ginv(j, l) - ginv(i, l) * ginv(j, k));
          CHECK(std::abs(p1(i, j, k, l) - want) < 1e-12);
        }

  // full contraction reproduces L_(q) (n=5 exercises q=2)
  std::mt19937 rng5(57);
  const int n5 = 5;
  const auto g5 = random_spd_metric(n5, rng5);
  const auto ginv5 = invert_metric(g5);
  const auto rlow5 = random_riemann_low(n5, rng5);
  const auto rmix5 = mixed_from_low(rlow5, ginv5);
  for (int q : {1, 2}) {
    const auto pq = p_tensor(rmix5, ginv5, q);
    double contracted = 0.0;
    for (int i = 0; i < n5; ++i)
      for (int j = 0; j < n5; ++j)
        for (int k = 0; k < n5; ++k)
          for (int l = 0; l < n5; ++l) contracted += pq(i, j, k, l) * rlow5(i, j, k, l);
    CHECK(rel_diff(contracted, gauss_bonnet_curvature(rmix5, q)) < 1e-10);
  }

  // flat input with q = 2 has a Riemann factor in every term
  DenseTensor zero(n5, 4, Symmetry::riemann4);
  const auto pflat = p_tensor(zero, ginv5, 2);
  CHECK(pflat.max_abs() == 0.0);
}

TEST_CASE("Lovelock tensor: Einstein oracle, trace identity, symmetry, q=0") {
  std::mt19937 rng(67);
  for (int n : {3, 5}) {
    const auto g = random_spd_metric(n, rng);
    const auto ginv = invert_metric(g);
    const auto rlow = random_riemann_low(n, rng);
    const auto rmix = mixed_from_low(rlow, ginv);

    // oracle: Ric - (1/2) Sc g by direct contraction
    DenseTensor ric(n, 2, Symmetry::symmetric2);
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
          for (int k = 0; k < n; ++k) s += ginv(i, k) * rlow(i, j, k, l);
        ric(j, l) = s;
      }
    double sc = 0.0;
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) sc += ginv(j, l) * ric(j, l);

    const auto g1 = lovelock_tensor(rmix, g, 1);
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        worst = std::max(worst, std::abs(g1(i, j) - (ric(i, j) - 0.5 * sc * g(i, j))));
    CHECK(worst < 1e-11 * std::max(1.0, g1.max_abs()));

    for (int q = 1; 2 * q < n; ++q) {
      const auto gq = lovelock_tensor(rmix, g, q);
      CHECK(symmetric2_violation(gq) == 0.0);
      double tr = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) tr += ginv(i, j) * gq(i, j);
      const double lq = gauss_bonnet_curvature(rmix, q);
      CHECK(rel_diff(tr, -0.5 * (n - 2 * q) * lq) < 1e-10);
    }

    // degenerate order: G_(0) = -(1/2) g, consistent with the trace formula
    const auto g0 = lovelock_tensor(rmix, g, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) CHECK(g0(i, j) == -0.5 * g(i, j));

    // flat input
    DenseTensor zero(n, 4, Symmetry::riemann4);
    for (int q = 1; 2 * q < n; ++q)
      CHECK(lovelock_tensor(zero, g, q).max_abs() == 0.0);
  }
}

TEST_CASE("p_tensor output carries riemann-4 symmetries on randomized inputs") {
  std::mt19937 rng(71);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 5;
    const auto g = random_spd_metric(n, rng);
    const auto ginv = invert_metric(g);
    const auto rmix = mixed_from_low(random_riemann_low(n, rng), ginv);
    for (int q : {1, 2}) {
      const auto pq = p_tensor(rmix, ginv, q);
      CHECK(riemann4_violation(pq) < 1e-10 * std::max(1.0, pq.max_abs()));
    }
  }
}

TEST_CASE("DenseTensor invariants") {
  CHECK_THROWS_AS(DenseTensor::from_components(2, 2, {1.0, 2.0, 3.0}, Symmetry::none),
                  std::invalid_argument);
  CHECK_THROWS_AS(DenseTensor::from_components(2, 2, {1.0, 2.0, 3.0, 4.0},
                                               Symmetry::symmetric2),
                  std::invalid_argument);
  const auto ok = DenseTensor::from_components(2, 2, {1.0, 2.0, 2.0, 4.0},
                                               Symmetry::symmetric2);
  CHECK(ok(0, 1) == 2.0);
}
