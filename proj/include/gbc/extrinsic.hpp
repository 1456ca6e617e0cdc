#pragma once

// Induced metrics, second fundamental forms, higher-order mean curvatures
// S_(p) and Newton transformations T_(p) for immersions into Euclidean
// space.  Odd-order quantities are ambient vectors and stay in ambient
// coordinates throughout.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gbc/intrinsic.hpp"
#include "gbc/tensor.hpp"

namespace gbc {

struct ImmersionJet {
  int dim = 0;      // n
  int ambient = 0;  // d
  std::vector<double> psi;     // d
  std::vector<double> dpsi;    // n*d,     (i, alpha)
  std::vector<double> ddpsi;   // n*n*d,   (i, j, alpha), symmetric in ij
  std::vector<double> dddpsi;  // n*n*n*d, (i, j, k, alpha); only via eval3

  ImmersionJet() = default;
  ImmersionJet(int n, int d, bool third)
      : dim(n),
        ambient(d),
        psi(d, 0.0),
        dpsi(static_cast<size_t>(n) * d, 0.0),
        ddpsi(static_cast<size_t>(n) * n * d, 0.0),
        dddpsi(third ? static_cast<size_t>(n) * n * n * d : 0, 0.0) {}

  double& P(int a) { return psi[a]; }
  double P(int a) const { return psi[a]; }
  double& dP(int i, int a) { return dpsi[i * ambient + a]; }
  double dP(int i, int a) const { return dpsi[i * ambient + a]; }
  double& ddP(int i, int j, int a) { return ddpsi[(i * dim + j) * ambient + a]; }
  double ddP(int i, int j, int a) const { return ddpsi[(i * dim + j) * ambient + a]; }
  double& dddP(int i, int j, int k, int a) {
    return dddpsi[((i * dim + j) * dim + k) * ambient + a];
  }
  double dddP(int i, int j, int k, int a) const {
    return dddpsi[((i * dim + j) * dim + k) * ambient + a];
  }
};

struct ImmersionModel {
  std::string name;
  int dim = 0;
  int ambient = 0;
  double rho_min = 0.0;      // 0 for entire graphs
  double decay_order = 1.0;  // claimed tau of the induced metric
  std::function<ImmersionJet(std::span<const double>)> eval2;
  std::function<ImmersionJet(std::span<const double>)> eval3;
};

struct ExtrinsicPoint {
  std::vector<double> point;
  int dim = 0;
  int ambient = 0;
  DenseTensor induced_metric;        // symmetric-2
  DenseTensor metric_inverse;        // symmetric-2
  std::vector<double> second_ff;     // n*n*d: B_ij^alpha
  std::vector<double> normal_frame;  // (d-n)*d, orthonormal rows
  std::vector<double> position;      // psi(x)
  std::vector<double> tangent;       // n*d: dpsi rows

  // pairings computed once and reused across all p
  std::vector<double> bb_low;    // n^4: <B_ij, B_kl>
  std::vector<double> b_mixed;   // n*n*d: (B^a_b)^alpha = g^{ae} B_eb^alpha
  std::vector<double> bb_mixed;  // n^4: <B^a_b, B^c_d> indexed (a,b,c,d)

  double B(int i, int j, int a) const { return second_ff[(i * dim + j) * ambient + a]; }
  double Bm(int i, int j, int a) const { return b_mixed[(i * dim + j) * ambient + a]; }
  double BBlow(int i, int j, int k, int l) const {
    return bb_low[((i * dim + j) * dim + k) * dim + l];
  }
  double M(int a, int b, int c, int d) const {
    return bb_mixed[((a * dim + b) * dim + c) * dim + d];
  }
  double normal(int mu, int a) const { return normal_frame[mu * ambient + a]; }
};

ExtrinsicPoint extrinsic_at(const ImmersionModel& model, std::span<const double> point);

struct MeanCurvatureSet {
  int order = 0;
  bool odd = false;
  double value_even = 0.0;
  std::vector<double> value_odd;   // ambient vector when order is odd
  DenseTensor newton_even;         // symmetric-2 when order is even
  std::vector<double> newton_odd;  // n*n*d when order is odd
};

// S_(p).  S_(0) = 1, S_(n+1) = 0; even p scalar, odd p ambient vector.
MeanCurvatureSet mean_curvatures(const ExtrinsicPoint& ep, int p);

// T_(p).  T_(0) = g; vanishes identically for p >= n (accepted up to n+1
// so the vanishing itself can be exercised).
MeanCurvatureSet newton_transformation(const ExtrinsicPoint& ep, int p);

// max componentwise |G_(q) + ((2q)!/2) T_(2q)|: the Lovelock tensor of the
// induced metric against the Newton transformation, two independent
// pipelines.
double gauss_relation_residual(const ImmersionModel& model, std::span<const double> point,
                               int q, const CurvatureOptions& opts = {});

// |div_g(iota_Y G_(q)) + ((2q)!/2) [(n-2q) S_2q + (2q+1) <S_{2q+1}, Zbar>]|
// with Y the tangential part of the ambient position field; O(h^2).
double divergence_identity_residual(const ImmersionModel& model,
                                    std::span<const double> point, int q, double h);

// |div_g(iota_V K) - iota_V(div_g K) - (1/2) g(K, L_V g)|; O(h^2).
double pohozaev_schoen_residual(const Tensor2FieldFn& K, const VectorFieldFn& V,
                                const MetricModel& model, std::span<const double> point,
                                double h);

// MetricModel backed by third-order jets of the immersion map.
MetricModel induced_metric_model(const ImmersionModel& model);

// Builds an ImmersionModel from a closed-form chart map evaluated with
// second-order jets (plus dual-seeded passes for third derivatives).  F is a
// generic functor mapping n coordinates of any jet scalar type to d ambient
// components.
template <class F>
ImmersionModel immersion_from_functor(std::string name, int n, int d, double rho_min,
                                      double tau, F f) {
  ImmersionModel m;
  m.name = std::move(name);
  m.dim = n;
  m.ambient = d;
  m.rho_min = rho_min;
  m.decay_order = tau;
  m.eval2 = [n, d, f](std::span<const double> pt) {
    std::vector<double> x(pt.begin(), pt.end());
    auto vars = Jet2<double>::seed(x);
    const auto out = f(vars);
    ImmersionJet jet(n, d, false);
    for (int a = 0; a < d; ++a) {
      jet.P(a) = out[a].v;
      for (int i = 0; i < n; ++i) {
        jet.dP(i, a) = out[a].g[i];
        for (int j = 0; j < n; ++j) jet.ddP(i, j, a) = out[a].h[i * n + j];
      }
    }
    return jet;
  };
  m.eval3 = [n, d, f](std::span<const double> pt) {
    ImmersionJet jet(n, d, true);
    for (int k = 0; k < n; ++k) {
      std::vector<Dual> xd(n);
      for (int i = 0; i < n; ++i) xd[i] = Dual(pt[i], i == k ? 1.0 : 0.0);
      auto vars = Jet2<Dual>::seed(xd);
      const auto out = f(vars);
      for (int a = 0; a < d; ++a) {
        if (k == 0) {
          jet.P(a) = out[a].v.a;
          for (int i = 0; i < n; ++i) {
            jet.dP(i, a) = out[a].g[i].a;
            for (int j = 0; j < n; ++j) jet.ddP(i, j, a) = out[a].h[i * n + j].a;
          }
        }
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) jet.dddP(i, j, k, a) = out[a].h[i * n + j].b;
      }
    }
    return jet;
  };
  return m;
}

}  // namespace gbc
