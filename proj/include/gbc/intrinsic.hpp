#pragma once

// Metric-derived curvature at chart points.  Models supply analytic metric
// components with first and second partials; by default these come from
// second-order jet evaluation of a closed-form metric, optionally from a
// hand-coded derivative callback.

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gbc/jets.hpp"
#include "gbc/report.hpp"
#include "gbc/tensor.hpp"

namespace gbc {

struct model_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// g_ij, g_ij,k and g_ij,kl at one point.
struct MetricJet {
  int dim = 0;
  std::vector<double> g;    // n*n
  std::vector<double> dg;   // n*n*n,   (i,j,k) = partial_k g_ij
  std::vector<double> ddg;  // n*n*n*n, (i,j,k,l) = partial_k partial_l g_ij

  explicit MetricJet(int n = 0)
      : dim(n),
        g(static_cast<size_t>(n) * n, 0.0),
        dg(static_cast<size_t>(n) * n * n, 0.0),
        ddg(static_cast<size_t>(n) * n * n * n, 0.0) {}

  double& G(int i, int j) { return g[i * dim + j]; }
  double G(int i, int j) const { return g[i * dim + j]; }
  double& dG(int i, int j, int k) { return dg[(i * dim + j) * dim + k]; }
  double dG(int i, int j, int k) const { return dg[(i * dim + j) * dim + k]; }
  double& ddG(int i, int j, int k, int l) { return ddg[((i * dim + j) * dim + k) * dim + l]; }
  double ddG(int i, int j, int k, int l) const {
    return ddg[((i * dim + j) * dim + k) * dim + l];
  }
};

struct MetricModel {
  std::string name;
  int dim = 0;
  double rho_min = 0.0;     // chart domain {|x| >= rho_min}
  double decay_order = 1.0; // claimed tau
  std::function<MetricJet(std::span<const double>)> eval;
};

struct CurvaturePoint {
  std::vector<double> point;
  int q = 1;
  DenseTensor metric;          // symmetric-2
  DenseTensor metric_inverse;  // symmetric-2
  DenseTensor christoffel;     // rank 3, (k,i,j) = Gamma^k_ij
  DenseTensor riemann_low;     // riemann-4, layout with Ric_jl = g^{ik} R_ijkl
  DenseTensor riemann_mixed;   // R_{ab}^{cd}
  DenseTensor ricci;           // symmetric-2
  DenseTensor einstein;        // symmetric-2
  DenseTensor lovelock_q;      // symmetric-2
  double scalar = 0.0;
  double gauss_bonnet_q = 0.0;
};

struct CurvatureOptions {
  // Negates the Riemann tensor before anything downstream is derived.
  // Debug-only: drives the wrong-sign negative control.
  bool flip_riemann_sign = false;
};

CurvaturePoint curvature_at(const MetricModel& model, std::span<const double> point, int q,
                            const CurvatureOptions& opts = {});

// Metric, inverse and Christoffel symbols only (no curvature).
struct ConnectionPoint {
  DenseTensor metric;
  DenseTensor metric_inverse;
  DenseTensor christoffel;  // (k,i,j)
};
ConnectionPoint connection_at(const MetricModel& model, std::span<const double> point);

// Decay indicators rho^tau |g - delta|, rho^{tau+1} |dg|, rho^{tau+2} |ddg|
// maximized over a deterministic direction set, reported per radius; passes
// when each indicator stays bounded across the ladder (fitted log-log slope
// <= 0.1, or identically negligible).
IdentityReport ae_decay_check(const MetricModel& model, std::span<const double> radii);

// max_j |nabla^i G_(q)ij| with the outer derivative by central differences of
// step h.  The curvature-scale floor is O(h^2); refuses steps that leave the
// chart.
double lovelock_divergence_residual(const MetricModel& model, std::span<const double> point,
                                    int q, double h);

// Field calculus used by the residual checkers (derivatives of the supplied
// fields by central differences, Christoffels analytic from the model).
using ScalarFieldFn = std::function<double(std::span<const double>)>;
using VectorFieldFn = std::function<std::vector<double>(std::span<const double>)>;
using Tensor2FieldFn = std::function<DenseTensor(std::span<const double>)>;

// div_g of a covariant vector field omega: g^{ij} (d_i omega_j - Gamma^k_ij omega_k)
double divergence_one_form(const MetricModel& model,
                           const std::function<std::vector<double>(std::span<const double>)>& omega,
                           std::span<const double> point, double h);

// (div_g K)_j = g^{ik} (d_i K_kj - Gamma^l_ik K_lj - Gamma^l_ij K_kl)
std::vector<double> divergence_tensor2(const MetricModel& model, const Tensor2FieldFn& K,
                                       std::span<const double> point, double h);

// (L_V g)_ij = V^k d_k g_ij + g_kj d_i V^k + g_ik d_j V^k
DenseTensor lie_derivative_metric(const MetricModel& model, const VectorFieldFn& V,
                                  std::span<const double> point, double h);

// Builds a MetricModel from a closed-form symmetric matrix functor evaluated
// with second-order jets.  F maps n jet coordinates to n*n row-major entries.
template <class F>
MetricModel metric_model_from_functor(std::string name, int n, double rho_min, double tau,
                                      F f) {
  MetricModel m;
  m.name = std::move(name);
  m.dim = n;
  m.rho_min = rho_min;
  m.decay_order = tau;
  m.eval = [n, f](std::span<const double> pt) {
    std::vector<double> x(pt.begin(), pt.end());
    auto vars = Jet2<double>::seed(x);
    const std::vector<Jet2<double>> entries = f(vars);
    MetricJet out(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const auto& e = entries[i * n + j];
        out.G(i, j) = e.v;
        for (int k = 0; k < n; ++k) {
          out.dG(i, j, k) = e.g[k];
          for (int l = 0; l < n; ++l) out.ddG(i, j, k, l) = e.h[k * n + l];
        }
      }
    return out;
  };
  return m;
}

double radius_of(std::span<const double> point);

}  // namespace gbc
