#pragma once

// Forward-mode differentiation scalars used by the model evaluators.
//
//   Dual    : one-directional first-order dual number a + b*eps.
//   Jet2<S> : multivariate second-order jet (value, gradient, Hessian)
//             over scalar S.  With S = Dual, one evaluation per seed
//             direction yields third derivatives.
//   Taylor3 : univariate third-order jet, used by radial profiles where
//             closed-form models depend on r = |x| only.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace gbc {

struct Dual {
  double a = 0.0;  // value
  double b = 0.0;  // derivative along the seeded direction

  Dual() = default;
  Dual(double value) : a(value) {}
  Dual(double value, double deriv) : a(value), b(deriv) {}
};

inline Dual operator+(Dual x, Dual y) { return {x.a + y.a, x.b + y.b}; }
inline Dual operator-(Dual x, Dual y) { return {x.a - y.a, x.b - y.b}; }
inline Dual operator-(Dual x) { return {-x.a, -x.b}; }
inline Dual operator*(Dual x, Dual y) { return {x.a * y.a, x.a * y.b + x.b * y.a}; }
inline Dual operator/(Dual x, Dual y) {
  const double inv = 1.0 / y.a;
  const double v = x.a * inv;
  return {v, (x.b - v * y.b) * inv};
}
inline Dual operator+(Dual x, double c) { return {x.a + c, x.b}; }
inline Dual operator+(double c, Dual x) { return x + c; }
inline Dual operator-(Dual x, double c) { return {x.a - c, x.b}; }
inline Dual operator-(double c, Dual x) { return {c - x.a, -x.b}; }
inline Dual operator*(Dual x, double c) { return {x.a * c, x.b * c}; }
inline Dual operator*(double c, Dual x) { return x * c; }
inline Dual operator/(Dual x, double c) { return {x.a / c, x.b / c}; }
inline Dual operator/(double c, Dual x) { return Dual(c) / x; }

inline Dual sqrt(Dual x) {
  const double s = std::sqrt(x.a);
  return {s, 0.5 * x.b / s};
}
inline Dual exp(Dual x) {
  const double e = std::exp(x.a);
  return {e, e * x.b};
}
inline Dual log(Dual x) { return {std::log(x.a), x.b / x.a}; }
inline Dual pow(Dual x, double p) {
  const double v = std::pow(x.a, p);
  return {v, p * std::pow(x.a, p - 1.0) * x.b};
}
inline Dual sin(Dual x) { return {std::sin(x.a), std::cos(x.a) * x.b}; }
inline Dual cos(Dual x) { return {std::cos(x.a), -std::sin(x.a) * x.b}; }
inline double value_of(double x) { return x; }
inline double value_of(Dual x) { return x.a; }

// Multivariate second-order jet in n variables over scalar S.
template <class S>
struct Jet2 {
  S v{};
  std::vector<S> g;  // n
  std::vector<S> h;  // n*n, symmetric, row-major

  Jet2() = default;
  explicit Jet2(int n) : g(n, S{}), h(static_cast<size_t>(n) * n, S{}) {}
  Jet2(int n, S value) : v(value), g(n, S{}), h(static_cast<size_t>(n) * n, S{}) {}

  int vars() const { return static_cast<int>(g.size()); }

  // Seed the full coordinate vector: variable i carries gradient e_i.
  static std::vector<Jet2<S>> seed(const std::vector<S>& x) {
    const int n = static_cast<int>(x.size());
    std::vector<Jet2<S>> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
      Jet2<S> j(n, x[i]);
      j.g[i] = S(1.0);
      out.push_back(std::move(j));
    }
    return out;
  }
};

namespace detail {
template <class S>
void check_same(const Jet2<S>& x, const Jet2<S>& y) {
  if (x.vars() != y.vars()) throw std::invalid_argument("Jet2: variable count mismatch");
}
}  // namespace detail

template <class S>
Jet2<S> operator+(const Jet2<S>& x, const Jet2<S>& y) {
  detail::check_same(x, y);
  Jet2<S> r(x.vars());
  r.v = x.v + y.v;
  for (size_t i = 0; i < x.g.size(); ++i) r.g[i] = x.g[i] + y.g[i];
  for (size_t i = 0; i < x.h.size(); ++i) r.h[i] = x.h[i] + y.h[i];
  return r;
}

template <class S>
Jet2<S> operator-(const Jet2<S>& x, const Jet2<S>& y) {
  detail::check_same(x, y);
  Jet2<S> r(x.vars());
  r.v = x.v - y.v;
  for (size_t i = 0; i < x.g.size(); ++i) r.g[i] = x.g[i] - y.g[i];
  for (size_t i = 0; i < x.h.size(); ++i) r.h[i] = x.h[i] - y.h[i];
  return r;
}

template <class S>
Jet2<S> operator-(const Jet2<S>& x) {
  Jet2<S> r(x.vars());
  r.v = -x.v;
  for (size_t i = 0; i < x.g.size(); ++i) r.g[i] = -x.g[i];
  for (size_t i = 0; i < x.h.size(); ++i) r.h[i] = -x.h[i];
  return r;
}

template <class S>
Jet2<S> operator*(const Jet2<S>& x, const Jet2<S>& y) {
  detail::check_same(x, y);
  const int n = x.vars();
  Jet2<S> r(n);
  r.v = x.v * y.v;
  for (int i = 0; i < n; ++i) r.g[i] = x.v * y.g[i] + y.v * x.g[i];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      r.h[i * n + j] = x.v * y.h[i * n + j] + y.v * x.h[i * n + j] +
                       x.g[i] * y.g[j] + x.g[j] * y.g[i];
  return r;
}

// f(u) given f, f', f'' at u.v
template <class S>
Jet2<S> jet_chain(const Jet2<S>& u, S f0, S f1, S f2) {
  const int n = u.vars();
  Jet2<S> r(n);
  r.v = f0;
  for (int i = 0; i < n; ++i) r.g[i] = f1 * u.g[i];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      r.h[i * n + j] = f1 * u.h[i * n + j] + f2 * u.g[i] * u.g[j];
  return r;
}

template <class S>
Jet2<S> inv(const Jet2<S>& x) {
  const S w = S(1.0) / x.v;
  return jet_chain(x, w, -w * w, S(2.0) * w * w * w);
}

template <class S>
Jet2<S> operator/(const Jet2<S>& x, const Jet2<S>& y) { return x * inv(y); }

template <class S> Jet2<S> operator+(const Jet2<S>& x, double c) { Jet2<S> r = x; r.v = r.v + c; return r; }
template <class S> Jet2<S> operator+(double c, const Jet2<S>& x) { return x + c; }
template <class S> Jet2<S> operator-(const Jet2<S>& x, double c) { return x + (-c); }
template <class S> Jet2<S> operator-(double c, const Jet2<S>& x) { return (-x) + c; }
template <class S>
Jet2<S> operator*(const Jet2<S>& x, double c) {
  Jet2<S> r(x.vars());
  r.v = x.v * c;
  for (size_t i = 0; i < x.g.size(); ++i) r.g[i] = x.g[i] * c;
  for (size_t i = 0; i < x.h.size(); ++i) r.h[i] = x.h[i] * c;
  return r;
}
template <class S> Jet2<S> operator*(double c, const Jet2<S>& x) { return x * c; }
template <class S> Jet2<S> operator/(const Jet2<S>& x, double c) { return x * (1.0 / c); }
template <class S> Jet2<S> operator/(double c, const Jet2<S>& x) { return inv(x) * c; }

template <class S>
Jet2<S> sqrt(const Jet2<S>& x) {
  using std::sqrt;
  const S s = sqrt(x.v);
  const S f1 = S(0.5) / s;
  return jet_chain(x, s, f1, S(-0.5) * f1 / x.v);
}
template <class S>
Jet2<S> exp(const Jet2<S>& x) {
  using std::exp;
  const S e = exp(x.v);
  return jet_chain(x, e, e, e);
}
template <class S>
Jet2<S> log(const Jet2<S>& x) {
  using std::log;
  const S w = S(1.0) / x.v;
  return jet_chain(x, log(x.v), w, -w * w);
}
template <class S>
Jet2<S> pow(const Jet2<S>& x, double p) {
  using std::pow;
  const S f0 = pow(x.v, p);
  const S f1 = pow(x.v, p - 1.0) * p;
  const S f2 = pow(x.v, p - 2.0) * (p * (p - 1.0));
  return jet_chain(x, f0, f1, f2);
}
template <class S>
Jet2<S> sin(const Jet2<S>& x) {
  using std::cos; using std::sin;
  return jet_chain(x, sin(x.v), cos(x.v), -sin(x.v));
}
template <class S>
Jet2<S> cos(const Jet2<S>& x) {
  using std::cos; using std::sin;
  return jet_chain(x, cos(x.v), -sin(x.v), -cos(x.v));
}

// Univariate third-order jet: value and first three derivatives.
struct Taylor3 {
  double v = 0, d1 = 0, d2 = 0, d3 = 0;

  Taylor3() = default;
  Taylor3(double value) : v(value) {}
  static Taylor3 var(double r) { return Taylor3{r, 1.0, 0.0, 0.0}; }
  Taylor3(double v_, double d1_, double d2_, double d3_) : v(v_), d1(d1_), d2(d2_), d3(d3_) {}
};

inline Taylor3 operator+(const Taylor3& x, const Taylor3& y) {
  return {x.v + y.v, x.d1 + y.d1, x.d2 + y.d2, x.d3 + y.d3};
}
inline Taylor3 operator-(const Taylor3& x, const Taylor3& y) {
  return {x.v - y.v, x.d1 - y.d1, x.d2 - y.d2, x.d3 - y.d3};
}
inline Taylor3 operator-(const Taylor3& x) { return {-x.v, -x.d1, -x.d2, -x.d3}; }
inline Taylor3 operator*(const Taylor3& x, const Taylor3& y) {
  return {x.v * y.v,
          x.d1 * y.v + x.v * y.d1,
          x.d2 * y.v + 2.0 * x.d1 * y.d1 + x.v * y.d2,
          x.d3 * y.v + 3.0 * x.d2 * y.d1 + 3.0 * x.d1 * y.d2 + x.v * y.d3};
}

// f(u) by Faa di Bruno given derivatives of f at u.v
inline Taylor3 taylor_chain(const Taylor3& u, double f0, double f1, double f2, double f3) {
  return {f0,
          f1 * u.d1,
          f2 * u.d1 * u.d1 + f1 * u.d2,
          f3 * u.d1 * u.d1 * u.d1 + 3.0 * f2 * u.d1 * u.d2 + f1 * u.d3};
}

inline Taylor3 inv(const Taylor3& x) {
  const double w = 1.0 / x.v;
  return taylor_chain(x, w, -w * w, 2.0 * w * w * w, -6.0 * w * w * w * w);
}
inline Taylor3 operator/(const Taylor3& x, const Taylor3& y) { return x * inv(y); }
inline Taylor3 operator+(const Taylor3& x, double c) { return {x.v + c, x.d1, x.d2, x.d3}; }
inline Taylor3 operator+(double c, const Taylor3& x) { return x + c; }
inline Taylor3 operator-(const Taylor3& x, double c) { return x + (-c); }
inline Taylor3 operator-(double c, const Taylor3& x) { return (-x) + c; }
inline Taylor3 operator*(const Taylor3& x, double c) { return {x.v * c, x.d1 * c, x.d2 * c, x.d3 * c}; }
inline Taylor3 operator*(double c, const Taylor3& x) { return x * c; }
inline Taylor3 operator/(const Taylor3& x, double c) { return x * (1.0 / c); }
inline Taylor3 operator/(double c, const Taylor3& x) { return inv(x) * c; }

inline Taylor3 sqrt(const Taylor3& x) {
  const double s = std::sqrt(x.v);
  return taylor_chain(x, s, 0.5 / s, -0.25 / (s * x.v), 0.375 / (s * x.v * x.v));
}
inline Taylor3 exp(const Taylor3& x) {
  const double e = std::exp(x.v);
  return taylor_chain(x, e, e, e, e);
}
inline Taylor3 log(const Taylor3& x) {
  const double w = 1.0 / x.v;
  return taylor_chain(x, std::log(x.v), w, -w * w, 2.0 * w * w * w);
}
inline Taylor3 pow(const Taylor3& x, double p) {
  const double f0 = std::pow(x.v, p);
  const double f1 = p * std::pow(x.v, p - 1.0);
  const double f2 = p * (p - 1.0) * std::pow(x.v, p - 2.0);
  const double f3 = p * (p - 1.0) * (p - 2.0) * std::pow(x.v, p - 3.0);
  return taylor_chain(x, f0, f1, f2, f3);
}

}  // namespace gbc
