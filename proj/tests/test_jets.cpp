#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gbc/jets.hpp"

using namespace gbc;

namespace {

// test function with nontrivial mixed derivatives
template <class T>
T scalar_field(const std::vector<T>& x) {
  T r2 = x[0] * x[0];
  for (size_t i = 1; i < x.size(); ++i) r2 = r2 + x[i] * x[i];
  return pow(r2 + 0.7, -0.75) + exp(x[0] * 0.3) * sin(x[1]) + log(r2) * 0.25;
}

double scalar_field_d(const std::vector<double>& x) { return scalar_field<double>(x); }

}  // namespace

TEST_CASE("Jet2 gradient and Hessian match central finite differences") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> u(0.6, 1.8);
  const int n = 3;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x(n);
    for (auto& xi : x) xi = u(rng);

    auto vars = Jet2<double>::seed(x);
    const auto j = scalar_field(vars);

    CHECK(j.v == doctest::Approx(scalar_field_d(x)).epsilon(1e-14));

    const double h = 1e-5;
    for (int k = 0; k < n; ++k) {
      auto xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      const double fd = (scalar_field_d(xp) - scalar_field_d(xm)) / (2 * h);
      CHECK(j.g[k] == doctest::Approx(fd).epsilon(1e-8));
    }
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        auto xpp = x, xpm = x, xmp = x, xmm = x;
        xpp[k] += h; xpp[l] += h;
        xpm[k] += h; xpm[l] -= h;
        xmp[k] -= h; xmp[l] += h;
        xmm[k] -= h; xmm[l] -= h;
        const double fd = (scalar_field_d(xpp) - scalar_field_d(xpm) -
                           scalar_field_d(xmp) + scalar_field_d(xmm)) /
                          (4 * h * h);
        CHECK(j.h[k * n + l] == doctest::Approx(fd).epsilon(5e-5));
      }
  }
}

TEST_CASE("Jet2 over Dual yields third derivatives") {
  const int n = 2;
  std::vector<double> x = {1.3, 0.8};
  // d/dx0 of the Hessian entry (0,1) of f
  const int dir = 0;
  std::vector<Dual> xd(n);
  for (int i = 0; i < n; ++i) xd[i] = Dual(x[i], i == dir ? 1.0 : 0.0);
  auto vars = Jet2<Dual>::seed(xd);
  const auto j = scalar_field(vars);

  const double h = 1e-5;
  auto hess01 = [&](std::vector<double> pt) {
    auto v = Jet2<double>::seed(pt);
    return scalar_field(v).h[0 * n + 1];
  };
  auto xp = x, xm = x;
  xp[dir] += h;
  xm[dir] -= h;
  const double fd = (hess01(xp) - hess01(xm)) / (2 * h);
  CHECK(j.h[0 * n + 1].b == doctest::Approx(fd).epsilon(1e-7));
  // and the value/gradient Dual parts line up with plain derivatives
  auto plain = scalar_field(Jet2<double>::seed(x));
  CHECK(j.v.a == doctest::Approx(plain.v).epsilon(1e-14));
  CHECK(j.v.b == doctest::Approx(plain.g[dir]).epsilon(1e-12));
  CHECK(j.g[1].b == doctest::Approx(plain.h[dir * n + 1]).epsilon(1e-12));
}

TEST_CASE("Taylor3 matches analytic derivatives of a composite") {
  // f(r) = (r^2 + 2)^{-1/4} * exp(r/3)
  auto f = [](auto r) {
    return pow(r * r + 2.0, -0.25) * exp(r * (1.0 / 3.0));
  };
  const double r0 = 1.7;
  const auto t = f(Taylor3::var(r0));

  const double h = 1e-4;
  auto fd = [&](int order) {
    auto g = [&](double r) { return f(Taylor3(r)).v; };
    switch (order) {
      case 1: return (g(r0 + h) - g(r0 - h)) / (2 * h);
      case 2: return (g(r0 + h) - 2 * g(r0) + g(r0 - h)) / (h * h);
      default:
        return (g(r0 + 2 * h) - 2 * g(r0 + h) + 2 * g(r0 - h) - g(r0 - 2 * h)) /
               (2 * h * h * h);
    }
  };
  CHECK(t.d1 == doctest::Approx(fd(1)).epsilon(1e-7));
  CHECK(t.d2 == doctest::Approx(fd(2)).epsilon(1e-5));
  CHECK(t.d3 == doctest::Approx(fd(3)).epsilon(1e-3));
}

TEST_CASE("division and sqrt round-trip") {
  std::vector<double> x = {0.9, 1.4, 2.2};
  auto vars = Jet2<double>::seed(x);
  auto a = sqrt(vars[0] * vars[1] + vars[2]);
  auto b = a * a - (vars[0] * vars[1] + vars[2]);
  CHECK(std::abs(b.v) < 1e-14);
  for (auto gi : b.g) CHECK(std::abs(gi) < 1e-13);
  for (auto hij : b.h) CHECK(std::abs(hij) < 1e-13);

  auto c = (vars[0] / vars[1]) * vars[1] - vars[0];
  CHECK(std::abs(c.v) < 1e-14);
  for (auto gi : c.g) CHECK(std::abs(gi) < 1e-13);
}
