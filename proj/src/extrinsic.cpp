#include "gbc/extrinsic.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gbc {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool next_combination(std::vector<int>& c, int n) {
  const int k = static_cast<int>(c.size());
  for (int i = k - 1; i >= 0; --i) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::vector<int> first_combination(int k) {
  std::vector<int> c(k);
  std::iota(c.begin(), c.end(), 0);
  return c;
}

double factorial(int p) {
  double f = 1.0;
  for (int i = 2; i <= p; ++i) f *= i;
  return f;
}

}  // namespace

ExtrinsicPoint extrinsic_at(const ImmersionModel& model, std::span<const double> point) {
  const int n = model.dim;
  const int d = model.ambient;
  if (static_cast<int>(point.size()) != n)
    throw std::invalid_argument("extrinsic_at: point dimension mismatch");
  if (radius_of(point) < model.rho_min)
    throw model_error("extrinsic_at: point outside chart domain of " + model.name);

  const ImmersionJet jet = model.eval2(point);

  ExtrinsicPoint ep;
  ep.point.assign(point.begin(), point.end());
  ep.dim = n;
  ep.ambient = d;
  ep.position = jet.psi;
  ep.tangent = jet.dpsi;

  // induced metric = Gram matrix of dpsi
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int a = 0; a < d; ++a) s += jet.dP(i, a) * jet.dP(j, a);
      g(i, j) = s;
    }
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success)
    throw model_error("extrinsic_at: rank-deficient differential for " + model.name);
  const Eigen::MatrixXd gi = g.inverse();

  ep.induced_metric = DenseTensor(n, 2, Symmetry::symmetric2);
  ep.metric_inverse = DenseTensor(n, 2, Symmetry::symmetric2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ep.induced_metric(i, j) = g(i, j);
      ep.metric_inverse(i, j) = 0.5 * (gi(i, j) + gi(j, i));
    }

  // B = ddpsi minus its tangential projection
  ep.second_ff.assign(static_cast<size_t>(n) * n * d, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // t_k = <ddpsi_ij, dpsi_k>
      std::vector<double> t(n, 0.0);
      for (int k = 0; k < n; ++k)
        for (int a = 0; a < d; ++a) t[k] += jet.ddP(i, j, a) * jet.dP(k, a);
      for (int a = 0; a < d; ++a) {
        double proj = 0.0;
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) proj += ep.metric_inverse(k, l) * t[k] * jet.dP(l, a);
        ep.second_ff[(i * n + j) * d + a] = jet.ddP(i, j, a) - proj;
      }
    }

  // orthogonality of B to the tangent space (roundoff-scale by construction)
  double bmax = 0.0, tmax = 0.0, viol = 0.0;
  for (double v : ep.second_ff) bmax = std::max(bmax, std::abs(v));
  for (double v : ep.tangent) tmax = std::max(tmax, std::abs(v));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int a = 0; a < d; ++a) s += ep.B(i, j, a) * jet.dP(k, a);
        viol = std::max(viol, std::abs(s));
      }
  if (viol > 1e-10 * std::max(1.0, bmax * tmax))
    throw model_error("extrinsic_at: second fundamental form not normal-valued");

  // Normal frame: project ambient basis vectors off the tangent space,
  // pivot on the largest residual, with a re-orthogonalization pass.
  const int codim = d - n;
  ep.normal_frame.assign(static_cast<size_t>(codim) * d, 0.0);
  std::vector<std::vector<double>> chosen;
  std::vector<bool> used(d, false);
  auto project_off = [&](std::vector<double>& v) {
    // tangential part via g^{kl} <v, dpsi_k> dpsi_l
    std::vector<double> t(n, 0.0);
    for (int k = 0; k < n; ++k)
      for (int a = 0; a < d; ++a) t[k] += v[a] * jet.dP(k, a);
    for (int a = 0; a < d; ++a) {
      double proj = 0.0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) proj += ep.metric_inverse(k, l) * t[k] * jet.dP(l, a);
      v[a] -= proj;
    }
    for (const auto& u : chosen) {
      double dot = 0.0;
      for (int a = 0; a < d; ++a) dot += v[a] * u[a];
      for (int a = 0; a < d; ++a) v[a] -= dot * u[a];
    }
  };
  for (int mu = 0; mu < codim; ++mu) {
    double best_norm = -1.0;
    int best_basis = -1;
    std::vector<double> best;
    for (int b = 0; b < d; ++b) {
      if (used[b]) continue;
      std::vector<double> v(d, 0.0);
      v[b] = 1.0;
      project_off(v);
      double norm2 = 0.0;
      for (double x : v) norm2 += x * x;
      if (norm2 > best_norm) {
        best_norm = norm2;
        best = v;
        best_basis = b;
      }
    }
    used[best_basis] = true;
    project_off(best);  // re-orthogonalization pass
    double norm = 0.0;
    for (double x : best) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-12)
      throw model_error("extrinsic_at: degenerate normal space for " + model.name);
    for (double& x : best) x /= norm;
    chosen.push_back(best);
  }
  // codimension-1 orientation: positive last ambient component
  if (codim == 1 && !chosen.empty()) {
    double pick = chosen[0][d - 1];
    if (std::abs(pick) < 1e-12) {
      for (int a = d - 1; a >= 0; --a)
        if (std::abs(chosen[0][a]) > 1e-12) {
          pick = chosen[0][a];
          break;
        }
    }
    if (pick < 0.0)
      for (double& x : chosen[0]) x = -x;
  }
  for (int mu = 0; mu < codim; ++mu)
    for (int a = 0; a < d; ++a) ep.normal_frame[mu * d + a] = chosen[mu][a];

  // cached pairings
  ep.bb_low.assign(static_cast<size_t>(n) * n * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int a = 0; a < d; ++a) s += ep.B(i, j, a) * ep.B(k, l, a);
          ep.bb_low[((i * n + j) * n + k) * n + l] = s;
        }
  ep.b_mixed.assign(static_cast<size_t>(n) * n * d, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < d; ++a) {
        double s = 0.0;
        for (int e = 0; e < n; ++e) s += ep.metric_inverse(i, e) * ep.B(e, j, a);
        ep.b_mixed[(i * n + j) * d + a] = s;
      }
  ep.bb_mixed.assign(static_cast<size_t>(n) * n * n * n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int e = 0; e < n; ++e) {
          double s = 0.0;
          for (int al = 0; al < d; ++al) s += ep.Bm(a, b, al) * ep.Bm(c, e, al);
          ep.bb_mixed[((a * n + b) * n + c) * n + e] = s;
        }
  return ep;
}

MeanCurvatureSet mean_curvatures(const ExtrinsicPoint& ep, int p) {
  const int n = ep.dim;
  const int d = ep.ambient;
  require(p >= 0 && p <= n + 1, "mean_curvatures: p out of range 0..n+1");

  MeanCurvatureSet out;
  out.order = p;
  out.odd = (p % 2 == 1);
  if (p == 0) {
    out.value_even = 1.0;
    return out;
  }
  if (out.odd) out.value_odd.assign(d, 0.0);
  if (p == n + 1) return out;  // S_(n+1) = 0 by convention (and by arity)

  const auto& tab = detail::perm_table(p);
  const size_t nperm = tab.perms.size();
  std::vector<int> a(p), b(p);

  if (!out.odd) {
    double total = 0.0;
    std::vector<int> combo = first_combination(p);
    do {
      for (size_t ri = 0; ri < nperm; ++ri) {
        const auto& rho = tab.perms[ri];
        for (int t = 0; t < p; ++t) a[t] = combo[rho[t]];
        const int srho = tab.signs[ri];
        for (size_t pi = 0; pi < nperm; ++pi) {
          const auto& prm = tab.perms[pi];
          for (int t = 0; t < p; ++t) b[t] = combo[prm[t]];
          double prod = static_cast<double>(srho * tab.signs[pi]);
          for (int s = 0; s < p / 2 && prod != 0.0; ++s)
            prod *= ep.M(a[2 * s], b[2 * s], a[2 * s + 1], b[2 * s + 1]);
          total += prod;
        }
      }
    } while (next_combination(combo, n));
    out.value_even = total / factorial(p);
    return out;
  }

  // odd p: accumulate the scalar coefficient of the trailing B^{a_p}_{b_p}
  DenseTensor coeff(n, 2);
  std::vector<int> combo = first_combination(p);
  do {
    for (size_t ri = 0; ri < nperm; ++ri) {
      const auto& rho = tab.perms[ri];
      for (int t = 0; t < p; ++t) a[t] = combo[rho[t]];
      const int srho = tab.signs[ri];
      for (size_t pi = 0; pi < nperm; ++pi) {
        const auto& prm = tab.perms[pi];
        for (int t = 0; t < p; ++t) b[t] = combo[prm[t]];
        double prod = static_cast<double>(srho * tab.signs[pi]);
        for (int s = 0; s < (p - 1) / 2 && prod != 0.0; ++s)
          prod *= ep.M(a[2 * s], b[2 * s], a[2 * s + 1], b[2 * s + 1]);
        if (prod != 0.0) coeff(a[p - 1], b[p - 1]) += prod;
      }
    }
  } while (next_combination(combo, n));
  const double norm = factorial(p);
  for (int e = 0; e < n; ++e)
    for (int f = 0; f < n; ++f) {
      const double c = coeff(e, f);
      if (c == 0.0) continue;
      for (int al = 0; al < d; ++al) out.value_odd[al] += c * ep.Bm(e, f, al) / norm;
    }
  return out;
}

MeanCurvatureSet newton_transformation(const ExtrinsicPoint& ep, int p) {
  const int n = ep.dim;
  const int d = ep.ambient;
  require(p >= 0 && p <= n + 1, "newton_transformation: p out of range 0..n+1");

  MeanCurvatureSet out;
  out.order = p;
  out.odd = (p % 2 == 1);
  if (out.odd)
    out.newton_odd.assign(static_cast<size_t>(n) * n * d, 0.0);
  else
    out.newton_even = DenseTensor(n, 2, Symmetry::symmetric2);

  if (p == 0) {
    out.newton_even = ep.induced_metric;
    return out;
  }
  if (p + 1 > n) return out;  // T_(p) = 0 for p >= n by antisymmetry

  const auto& tab = detail::perm_table(p);
  const size_t nperm = tab.perms.size();
  std::vector<int> a(p), b(p), apool(p), bpool(p);

  // tmix[k][j] (even) or tmix4[k][j][e][f] (odd, trailing B slot factored out)
  DenseTensor tmix(n, 2);
  std::vector<double> tmix4;
  if (out.odd) tmix4.assign(static_cast<size_t>(n) * n * n * n, 0.0);

  std::vector<int> combo = first_combination(p + 1);
  do {
    for (int ku = 0; ku <= p; ++ku) {
      const int k = combo[ku];
      for (int t = 0, w = 0; t <= p; ++t)
        if (t != ku) bpool[w++] = combo[t];
      for (int ju = 0; ju <= p; ++ju) {
        const int j = combo[ju];
        for (int t = 0, w = 0; t <= p; ++t)
          if (t != ju) apool[w++] = combo[t];
        const double base = ((ku + ju) % 2 == 0) ? 1.0 : -1.0;
        for (size_t ri = 0; ri < nperm; ++ri) {
          const auto& rho = tab.perms[ri];
          for (int t = 0; t < p; ++t) b[t] = bpool[rho[t]];
          const int srho = tab.signs[ri];
          for (size_t pi = 0; pi < nperm; ++pi) {
            const auto& prm = tab.perms[pi];
            for (int t = 0; t < p; ++t) a[t] = apool[prm[t]];
            double prod = base * srho * tab.signs[pi];
            const int pairs = out.odd ? (p - 1) / 2 : p / 2;
            for (int s = 0; s < pairs && prod != 0.0; ++s)
              prod *= ep.M(a[2 * s], b[2 * s], a[2 * s + 1], b[2 * s + 1]);
            if (prod == 0.0) continue;
            if (out.odd)
              tmix4[((k * n + j) * n + a[p - 1]) * n + b[p - 1]] += prod;
            else
              tmix(k, j) += prod;
          }
        }
      }
    }
  } while (next_combination(combo, n));

  const double norm = factorial(p);
  if (!out.odd) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += ep.induced_metric(i, k) * tmix(k, j);
        out.newton_even(i, j) = s / norm;
      }
    validate_symmetry(out.newton_even);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double avg = 0.5 * (out.newton_even(i, j) + out.newton_even(j, i));
        out.newton_even(i, j) = avg;
        out.newton_even(j, i) = avg;
      }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int e = 0; e < n; ++e)
          for (int f = 0; f < n; ++f) {
            double c = 0.0;
            for (int k = 0; k < n; ++k)
              c += ep.induced_metric(i, k) * tmix4[((k * n + j) * n + e) * n + f];
            if (c == 0.0) continue;
            for (int al = 0; al < d; ++al)
              out.newton_odd[(i * n + j) * d + al] += c * ep.Bm(e, f, al) / norm;
          }
  }
  return out;
}

double gauss_relation_residual(const ImmersionModel& model, std::span<const double> point,
                               int q, const CurvatureOptions& opts) {
  const int n = model.dim;
  if (2 * q >= n) throw std::domain_error("gauss_relation_residual: requires 2q < dim");
  const ExtrinsicPoint ep = extrinsic_at(model, point);
  const MeanCurvatureSet t2q = newton_transformation(ep, 2 * q);

  const MetricModel induced = induced_metric_model(model);
  const CurvaturePoint cp = curvature_at(induced, point, q, opts);

  double fac = 1.0;
  for (int i = 2; i <= 2 * q; ++i) fac *= i;
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      worst = std::max(worst,
                       std::abs(cp.lovelock_q(i, j) + 0.5 * fac * t2q.newton_even(i, j)));
  return worst;
}

double divergence_identity_residual(const ImmersionModel& model,
                                    std::span<const double> point, int q, double h) {
  const int n = model.dim;
  if (2 * q >= n)
    throw std::domain_error("divergence_identity_residual: requires 2q < dim");
  if (h <= 0.0) throw std::domain_error("divergence_identity_residual: h must be positive");
  if (model.rho_min > 0.0 && radius_of(point) - 2.0 * h < model.rho_min)
    throw std::domain_error("divergence_identity_residual: step exceeds chart margin");

  const MetricModel induced = induced_metric_model(model);

  // one-form iota_Y G_(q) with Y = grad of psi*rhobar^2 / 2 (tangential part
  // of the ambient position field)
  auto omega = [&](std::span<const double> x) {
    const ImmersionJet jet = model.eval2(x);
    const CurvaturePoint cp = curvature_at(induced, x, q);
    const int dd = model.ambient;
    std::vector<double> df(n, 0.0);  // d_j f = <psi, dpsi_j>
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < dd; ++a) df[j] += jet.P(a) * jet.dP(j, a);
    std::vector<double> y(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) y[i] += cp.metric_inverse(i, j) * df[j];
    std::vector<double> w(n, 0.0);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) w[j] += y[i] * cp.lovelock_q(i, j);
    return w;
  };

  const double lhs = divergence_one_form(induced, omega, point, h);

  const ExtrinsicPoint ep = extrinsic_at(model, point);
  const MeanCurvatureSet s2q = mean_curvatures(ep, 2 * q);
  const MeanCurvatureSet s2q1 = mean_curvatures(ep, 2 * q + 1);
  double pairing = 0.0;
  for (int a = 0; a < model.ambient; ++a) pairing += s2q1.value_odd[a] * ep.position[a];

  double fac = 1.0;
  for (int i = 2; i <= 2 * q; ++i) fac *= i;
  const double rhs =
      -0.5 * fac * ((n - 2 * q) * s2q.value_even + (2 * q + 1) * pairing);
  return std::abs(lhs - rhs);
}

double pohozaev_schoen_residual(const Tensor2FieldFn& K, const VectorFieldFn& V,
                                const MetricModel& model, std::span<const double> point,
                                double h) {
  const int n = model.dim;
  if (h <= 0.0) throw std::domain_error("pohozaev_schoen_residual: h must be positive");
  if (model.rho_min > 0.0 && radius_of(point) - 2.0 * h < model.rho_min)
    throw std::domain_error("pohozaev_schoen_residual: step exceeds chart margin");

  auto omega = [&](std::span<const double> x) {
    const DenseTensor k = K(x);
    const std::vector<double> v = V(x);
    std::vector<double> w(n, 0.0);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) w[j] += v[i] * k(i, j);
    return w;
  };
  const double lhs = divergence_one_form(model, omega, point, h);

  const std::vector<double> divk = divergence_tensor2(model, K, point, h);
  const std::vector<double> v0 = V(point);
  double mid = 0.0;
  for (int j = 0; j < n; ++j) mid += v0[j] * divk[j];

  const DenseTensor lie = lie_derivative_metric(model, V, point, h);
  const ConnectionPoint cp = connection_at(model, point);
  const DenseTensor k0 = K(point);
  double pairing = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          pairing += cp.metric_inverse(i, k) * cp.metric_inverse(j, l) * k0(i, j) * lie(k, l);

  return std::abs(lhs - mid - 0.5 * pairing);
}

MetricModel induced_metric_model(const ImmersionModel& model) {
  MetricModel m;
  m.name = model.name + "-induced";
  m.dim = model.dim;
  m.rho_min = model.rho_min;
  m.decay_order = model.decay_order;
  const auto eval3 = model.eval3;
  const int n = model.dim;
  const int d = model.ambient;
  m.eval = [eval3, n, d](std::span<const double> pt) {
    const ImmersionJet jet = eval3(pt);
    MetricJet out(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int a = 0; a < d; ++a) s += jet.dP(i, a) * jet.dP(j, a);
        out.G(i, j) = s;
        for (int k = 0; k < n; ++k) {
          double s1 = 0.0;
          for (int a = 0; a < d; ++a)
            s1 += jet.ddP(i, k, a) * jet.dP(j, a) + jet.dP(i, a) * jet.ddP(j, k, a);
          out.dG(i, j, k) = s1;
          for (int l = 0; l < n; ++l) {
            double s2 = 0.0;
            for (int a = 0; a < d; ++a)
              s2 += jet.dddP(i, k, l, a) * jet.dP(j, a) + jet.ddP(i, k, a) * jet.ddP(j, l, a) +
                    jet.ddP(i, l, a) * jet.ddP(j, k, a) + jet.dP(i, a) * jet.dddP(j, k, l, a);
            out.ddG(i, j, k, l) = s2;
          }
        }
      }
    return out;
  };
  return m;
}

}  // namespace gbc
