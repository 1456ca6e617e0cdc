#include "gbc/intrinsic.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace gbc {

namespace {

Eigen::MatrixXd to_eigen(const std::vector<double>& g, int n) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g[i * n + j];
  return m;
}

// least-squares slope of y against x
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t m = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < m; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = m * sxx - sx * sx;
  return (m * sxy - sx * sy) / denom;
}

std::vector<std::vector<double>> direction_set(int n) {
  std::vector<std::vector<double>> dirs;
  for (int i = 0; i < n; ++i) {
    std::vector<double> d(n, 0.0);
    d[i] = 1.0;
    dirs.push_back(d);
    d[i] = -1.0;
    dirs.push_back(d);
  }
  std::mt19937 rng(951);
  std::normal_distribution<double> nd;
  for (int k = 0; k < 8; ++k) {
    std::vector<double> d(n);
    double norm = 0.0;
    for (auto& x : d) {
      x = nd(rng);
      norm += x * x;
    }
    norm = std::sqrt(norm);
    for (auto& x : d) x /= norm;
    dirs.push_back(d);
  }
  return dirs;
}

}  // namespace

double radius_of(std::span<const double> point) {
  double s = 0.0;
  for (double x : point) s += x * x;
  return std::sqrt(s);
}

ConnectionPoint connection_at(const MetricModel& model, std::span<const double> point) {
  const int n = model.dim;
  const MetricJet jet = model.eval(point);
  const Eigen::MatrixXd gm = to_eigen(jet.g, n);
  Eigen::LLT<Eigen::MatrixXd> llt(gm);
  if (llt.info() != Eigen::Success)
    throw model_error("connection_at: metric not positive definite for " + model.name);
  const Eigen::MatrixXd gi = gm.inverse();

  ConnectionPoint cp;
  cp.metric = DenseTensor(n, 2, Symmetry::symmetric2);
  cp.metric_inverse = DenseTensor(n, 2, Symmetry::symmetric2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cp.metric(i, j) = jet.G(i, j);
      cp.metric_inverse(i, j) = 0.5 * (gi(i, j) + gi(j, i));
    }
  cp.christoffel = DenseTensor(n, 3);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int m = 0; m < n; ++m)
          s += cp.metric_inverse(k, m) *
               (jet.dG(m, j, i) + jet.dG(m, i, j) - jet.dG(i, j, m));
        cp.christoffel(k, i, j) = 0.5 * s;
      }
  return cp;
}

CurvaturePoint curvature_at(const MetricModel& model, std::span<const double> point, int q,
                            const CurvatureOptions& opts) {
  const int n = model.dim;
  if (static_cast<int>(point.size()) != n)
    throw std::invalid_argument("curvature_at: point dimension mismatch");
  if (q < 0 || (q > 0 && 2 * q >= n))
    throw std::domain_error("curvature_at: requires 2q < dim");
  if (radius_of(point) < model.rho_min)
    throw model_error("curvature_at: point outside chart domain of " + model.name);

  const MetricJet jet = model.eval(point);

  // positive definiteness, checked lazily at the evaluated point
  const Eigen::MatrixXd gm = to_eigen(jet.g, n);
  Eigen::LLT<Eigen::MatrixXd> llt(gm);
  if (llt.info() != Eigen::Success)
    throw model_error("curvature_at: metric not positive definite for " + model.name);
  const Eigen::MatrixXd gi = gm.inverse();

  CurvaturePoint cp;
  cp.point.assign(point.begin(), point.end());
  cp.q = q;
  cp.metric = DenseTensor(n, 2, Symmetry::symmetric2);
  cp.metric_inverse = DenseTensor(n, 2, Symmetry::symmetric2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cp.metric(i, j) = jet.G(i, j);
      cp.metric_inverse(i, j) = 0.5 * (gi(i, j) + gi(j, i));
    }

  // Gamma^k_ij = (1/2) g^{km} (d_i g_mj + d_j g_mi - d_m g_ij)
  cp.christoffel = DenseTensor(n, 3);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int m = 0; m < n; ++m)
          s += cp.metric_inverse(k, m) *
               (jet.dG(m, j, i) + jet.dG(m, i, j) - jet.dG(i, j, m));
        cp.christoffel(k, i, j) = 0.5 * s;
      }

  // d_l g^{km} = -g^{ka} g^{mb} d_l g_ab
  DenseTensor dginv(n, 3);  // (k,m,l)
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m)
      for (int l = 0; l < n; ++l) {
        double s = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            s += cp.metric_inverse(k, a) * cp.metric_inverse(m, b) * jet.dG(a, b, l);
        dginv(k, m, l) = -s;
      }

  // d_l Gamma^k_ij
  DenseTensor dgamma(n, 4);  // (k,i,j,l)
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) {
            s += dginv(k, m, l) * (jet.dG(m, j, i) + jet.dG(m, i, j) - jet.dG(i, j, m));
            s += cp.metric_inverse(k, m) *
                 (jet.ddG(m, j, i, l) + jet.ddG(m, i, j, l) - jet.ddG(i, j, m, l));
          }
          dgamma(k, i, j, l) = 0.5 * s;
        }

  // R^m_{ijl} = d_i Gamma^m_jl - d_j Gamma^m_il + Gamma^m_ia Gamma^a_jl
  //             - Gamma^m_ja Gamma^a_il
  DenseTensor rup(n, 4);  // (m,i,j,l)
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          double s = dgamma(m, j, l, i) - dgamma(m, i, l, j);
          for (int a = 0; a < n; ++a)
            s += cp.christoffel(m, i, a) * cp.christoffel(a, j, l) -
                 cp.christoffel(m, j, a) * cp.christoffel(a, i, l);
          rup(m, i, j, l) = s;
        }

  // R_ijkl = g_im R^m_{klj}; constant curvature K gives K (g_ik g_jl - g_il g_jk)
  const double flip = opts.flip_riemann_sign ? -1.0 : 1.0;
  cp.riemann_low = DenseTensor(n, 4, Symmetry::riemann4);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) s += cp.metric(i, m) * rup(m, k, l, j);
          cp.riemann_low(i, j, k, l) = flip * s;
        }

  cp.riemann_mixed = raise_slot(raise_slot(cp.riemann_low, cp.metric_inverse, 2),
                                cp.metric_inverse, 3);

  cp.ricci = DenseTensor(n, 2, Symmetry::symmetric2);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) s += cp.metric_inverse(i, k) * cp.riemann_low(i, j, k, l);
      cp.ricci(j, l) = s;
    }
  for (int j = 0; j < n; ++j)
    for (int l = j + 1; l < n; ++l) {
      const double avg = 0.5 * (cp.ricci(j, l) + cp.ricci(l, j));
      cp.ricci(j, l) = avg;
      cp.ricci(l, j) = avg;
    }

  cp.scalar = 0.0;
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) cp.scalar += cp.metric_inverse(j, l) * cp.ricci(j, l);

  cp.einstein = DenseTensor(n, 2, Symmetry::symmetric2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      cp.einstein(i, j) = cp.ricci(i, j) - 0.5 * cp.scalar * cp.metric(i, j);

  cp.lovelock_q = lovelock_tensor(cp.riemann_mixed, cp.metric, q);
  cp.gauss_bonnet_q = gauss_bonnet_curvature(cp.riemann_mixed, q);
  return cp;
}

IdentityReport ae_decay_check(const MetricModel& model, std::span<const double> radii) {
  const int n = model.dim;
  const double tau = model.decay_order;
  IdentityReport rep;
  rep.identity = "ae-decay";
  rep.radii.assign(radii.begin(), radii.end());

  const auto dirs = direction_set(n);
  std::vector<double> ind0, ind1, ind2;
  for (double rho : radii) {
    double m0 = 0, m1 = 0, m2 = 0;
    for (const auto& d : dirs) {
      std::vector<double> x(n);
      for (int i = 0; i < n; ++i) x[i] = rho * d[i];
      const MetricJet jet = model.eval(x);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          m0 = std::max(m0, std::abs(jet.G(i, j) - (i == j ? 1.0 : 0.0)));
          for (int k = 0; k < n; ++k) {
            m1 = std::max(m1, std::abs(jet.dG(i, j, k)));
            for (int l = 0; l < n; ++l) m2 = std::max(m2, std::abs(jet.ddG(i, j, k, l)));
          }
        }
    }
    ind0.push_back(std::pow(rho, tau) * m0);
    ind1.push_back(std::pow(rho, tau + 1.0) * m1);
    ind2.push_back(std::pow(rho, tau + 2.0) * m2);
  }
  rep.series["metric"] = ind0;
  rep.series["first_deriv"] = ind1;
  rep.series["second_deriv"] = ind2;

  auto judge = [&](const char* label, const std::vector<double>& ind) {
    double peak = 0.0;
    for (double v : ind) peak = std::max(peak, v);
    if (peak < 1e-12) {
      rep.add(std::string(label) + " growth slope", 0.0, 0.1);
      return;
    }
    std::vector<double> lx, ly;
    for (size_t i = 0; i < ind.size(); ++i) {
      lx.push_back(std::log(rep.radii[i]));
      ly.push_back(std::log(std::max(ind[i], 1e-300)));
    }
    rep.add(std::string(label) + " growth slope", std::max(ls_slope(lx, ly), 0.0), 0.1);
  };
  judge("metric", ind0);
  judge("first_deriv", ind1);
  judge("second_deriv", ind2);
  rep.note = "boundedness judged by fitted constant over a finite ladder";
  return rep;
}

double lovelock_divergence_residual(const MetricModel& model, std::span<const double> point,
                                    int q, double h) {
  const int n = model.dim;
  if (h <= 0.0) throw std::domain_error("lovelock_divergence_residual: h must be positive");
  if (model.rho_min > 0.0 && radius_of(point) - 2.0 * h < model.rho_min)
    throw std::domain_error("lovelock_divergence_residual: step too large for chart margin");

  const CurvaturePoint cp = curvature_at(model, point, q);
  auto g_field = [&](std::span<const double> x) {
    return curvature_at(model, x, q).lovelock_q;
  };

  // dG[k](i,j) = d_k G_(q)ij by central differences
  std::vector<DenseTensor> dG;
  for (int k = 0; k < n; ++k) {
    std::vector<double> xp(point.begin(), point.end()), xm(point.begin(), point.end());
    xp[k] += h;
    xm[k] -= h;
    const DenseTensor gp = g_field(xp);
    const DenseTensor gmm = g_field(xm);
    DenseTensor d(n, 2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d(i, j) = (gp(i, j) - gmm(i, j)) / (2.0 * h);
    dG.push_back(std::move(d));
  }

  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    double div = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        double t = dG[k](i, j);
        for (int l = 0; l < n; ++l)
          t -= cp.christoffel(l, k, i) * cp.lovelock_q(l, j) +
               cp.christoffel(l, k, j) * cp.lovelock_q(i, l);
        div += cp.metric_inverse(i, k) * t;
      }
    worst = std::max(worst, std::abs(div));
  }
  return worst;
}

double divergence_one_form(const MetricModel& model,
                           const std::function<std::vector<double>(std::span<const double>)>& omega,
                           std::span<const double> point, double h) {
  const int n = model.dim;
  const ConnectionPoint cp = connection_at(model, point);
  const std::vector<double> w0 = omega(point);
  double div = 0.0;
  for (int i = 0; i < n; ++i) {
    std::vector<double> xp(point.begin(), point.end()), xm(point.begin(), point.end());
    xp[i] += h;
    xm[i] -= h;
    const std::vector<double> wp = omega(xp);
    const std::vector<double> wm = omega(xm);
    for (int j = 0; j < n; ++j) {
      double t = (wp[j] - wm[j]) / (2.0 * h);
      for (int k = 0; k < n; ++k) t -= cp.christoffel(k, i, j) * w0[k];
      div += cp.metric_inverse(i, j) * t;
    }
  }
  return div;
}

std::vector<double> divergence_tensor2(const MetricModel& model, const Tensor2FieldFn& K,
                                       std::span<const double> point, double h) {
  const int n = model.dim;
  const ConnectionPoint cp = connection_at(model, point);
  const DenseTensor k0 = K(point);

  std::vector<DenseTensor> dK;
  for (int i = 0; i < n; ++i) {
    std::vector<double> xp(point.begin(), point.end()), xm(point.begin(), point.end());
    xp[i] += h;
    xm[i] -= h;
    const DenseTensor kp = K(xp);
    const DenseTensor km = K(xm);
    DenseTensor d(n, 2);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) d(a, b) = (kp(a, b) - km(a, b)) / (2.0 * h);
    dK.push_back(std::move(d));
  }

  std::vector<double> out(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        double t = dK[i](k, j);
        for (int l = 0; l < n; ++l)
          t -= cp.christoffel(l, i, k) * k0(l, j) + cp.christoffel(l, i, j) * k0(k, l);
        s += cp.metric_inverse(i, k) * t;
      }
    out[j] = s;
  }
  return out;
}

DenseTensor lie_derivative_metric(const MetricModel& model, const VectorFieldFn& V,
                                  std::span<const double> point, double h) {
  const int n = model.dim;
  const MetricJet jet = model.eval(point);
  const std::vector<double> v0 = V(point);

  // d_i V^k by central differences
  DenseTensor dV(n, 2);  // (i,k)
  for (int i = 0; i < n; ++i) {
    std::vector<double> xp(point.begin(), point.end()), xm(point.begin(), point.end());
    xp[i] += h;
    xm[i] -= h;
    const std::vector<double> vp = V(xp);
    const std::vector<double> vm = V(xm);
    for (int k = 0; k < n; ++k) dV(i, k) = (vp[k] - vm[k]) / (2.0 * h);
  }

  DenseTensor out(n, 2, Symmetry::symmetric2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        s += v0[k] * jet.dG(i, j, k);
        s += jet.G(k, j) * dV(i, k) + jet.G(i, k) * dV(j, k);
      }
      out(i, j) = s;
    }
  return out;
}

}  // namespace gbc
