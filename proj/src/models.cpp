#include "gbc/models.hpp"

#include <algorithm>
#include <cmath>

namespace gbc {

namespace {

double get_param(const ModelSpec& spec, const std::string& key, double fallback) {
  auto it = spec.params.find(key);
  return it == spec.params.end() ? fallback : it->second;
}

// radial unit vector and (delta_ij - r_i r_j)/rho data shared by assemblies
struct RadialFrame {
  double rho = 0.0;
  std::vector<double> rhat;
};

RadialFrame radial_frame(std::span<const double> x) {
  RadialFrame f;
  f.rho = radius_of(x);
  f.rhat.assign(x.size(), 0.0);
  if (f.rho > 1e-12)
    for (size_t i = 0; i < x.size(); ++i) f.rhat[i] = x[i] / f.rho;
  return f;
}

}  // namespace

MetricModel conformal_metric_model(std::string name, int n, double rho_min, double tau,
                                   ProfileFn phi) {
  MetricModel m;
  m.name = std::move(name);
  m.dim = n;
  m.rho_min = rho_min;
  m.decay_order = tau;
  m.eval = [n, phi](std::span<const double> x) {
    const RadialFrame f = radial_frame(x);
    const Taylor3 p = phi(Taylor3::var(f.rho));
    MetricJet out(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double del = (i == j) ? 1.0 : 0.0;
        out.G(i, j) = p.v * del;
        for (int k = 0; k < n; ++k) {
          out.dG(i, j, k) = p.d1 * f.rhat[k] * del;
          for (int l = 0; l < n; ++l) {
            const double pkl = ((k == l ? 1.0 : 0.0) - f.rhat[k] * f.rhat[l]) / f.rho;
            out.ddG(i, j, k, l) =
                (p.d2 * f.rhat[k] * f.rhat[l] + p.d1 * pkl) * del;
          }
        }
      }
    return out;
  };
  return m;
}

ImmersionModel graph_immersion_model(std::string name, int n, std::vector<ProfileFn> profiles,
                                     double rho_min, double tau) {
  const int codim = static_cast<int>(profiles.size());
  const int d = n + codim;
  ImmersionModel m;
  m.name = std::move(name);
  m.dim = n;
  m.ambient = d;
  m.rho_min = rho_min;
  m.decay_order = tau;

  // Radial chain rule.  With A = u'/rho and B = (u'' - A)/rho (both finite
  // for smooth even profiles):
  //   d_i u   = u' r_i
  //   d_ij u  = (u'' - A) r_i r_j + A delta_ij
  //   d_ijk u = u''' r_i r_j r_k
  //             + B [(d_ij - r_i r_j) r_k + (d_ik - r_i r_k) r_j + (d_jk - r_j r_k) r_i]
  auto fill = [n, d, codim, profiles](std::span<const double> x, bool third) {
    ImmersionJet jet(n, d, third);
    const RadialFrame f = radial_frame(x);
    for (int i = 0; i < n; ++i) {
      jet.P(i) = x[i];
      jet.dP(i, i) = 1.0;
    }
    for (int c = 0; c < codim; ++c) {
      const int al = n + c;
      const Taylor3 u = profiles[c](Taylor3::var(f.rho));
      const double tiny = 1e-12;
      const double A = f.rho > tiny ? u.d1 / f.rho : u.d2;
      const double B = f.rho > tiny ? (u.d2 - A) / f.rho : 0.0;
      jet.P(al) = u.v;
      for (int i = 0; i < n; ++i) {
        jet.dP(i, al) = u.d1 * f.rhat[i];
        for (int j = 0; j < n; ++j) {
          const double dij = (i == j) ? 1.0 : 0.0;
          jet.ddP(i, j, al) = (u.d2 - A) * f.rhat[i] * f.rhat[j] + A * dij;
          if (!third) continue;
          for (int k = 0; k < n; ++k) {
            const double dik = (i == k) ? 1.0 : 0.0;
            const double djk = (j == k) ? 1.0 : 0.0;
            const double qij = dij - f.rhat[i] * f.rhat[j];
            const double qik = dik - f.rhat[i] * f.rhat[k];
            const double qjk = djk - f.rhat[j] * f.rhat[k];
            jet.dddP(i, j, k, al) =
                u.d3 * f.rhat[i] * f.rhat[j] * f.rhat[k] +
                B * (qij * f.rhat[k] + qik * f.rhat[j] + qjk * f.rhat[i]);
          }
        }
      }
    }
    return jet;
  };
  m.eval2 = [fill](std::span<const double> x) { return fill(x, false); };
  m.eval3 = [fill](std::span<const double> x) { return fill(x, true); };
  return m;
}

MetricModel transformed_chart(const MetricModel& base, const std::vector<double>& rotation,
                              const std::vector<double>& shift) {
  const int n = base.dim;
  if (static_cast<int>(rotation.size()) != n * n ||
      static_cast<int>(shift.size()) != n)
    throw std::invalid_argument("transformed_chart: bad rotation/shift size");

  double shift_norm = 0.0;
  for (double s : shift) shift_norm += s * s;
  shift_norm = std::sqrt(shift_norm);

  MetricModel m;
  m.name = base.name + "-chart2";
  m.dim = n;
  m.rho_min = base.rho_min + shift_norm;
  m.decay_order = base.decay_order;
  const auto base_eval = base.eval;
  m.eval = [n, rotation, shift, base_eval](std::span<const double> xp) {
    std::vector<double> y(n, 0.0);
    for (int p = 0; p < n; ++p) {
      y[p] = shift[p];
      for (int i = 0; i < n; ++i) y[p] += rotation[p * n + i] * xp[i];
    }
    const MetricJet src = base_eval(y);
    MetricJet out(n);
    auto R = [&](int p, int i) { return rotation[p * n + i]; };
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double g = 0.0;
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q) g += R(p, i) * R(q, j) * src.G(p, q);
        out.G(i, j) = g;
        for (int k = 0; k < n; ++k) {
          double dg = 0.0;
          for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q)
              for (int r = 0; r < n; ++r)
                dg += R(p, i) * R(q, j) * R(r, k) * src.dG(p, q, r);
          out.dG(i, j, k) = dg;
          for (int l = 0; l < n; ++l) {
            double ddg = 0.0;
            for (int p = 0; p < n; ++p)
              for (int q = 0; q < n; ++q)
                for (int r = 0; r < n; ++r)
                  for (int s = 0; s < n; ++s)
                    ddg += R(p, i) * R(q, j) * R(r, k) * R(s, l) * src.ddG(p, q, r, s);
            out.ddG(i, j, k, l) = ddg;
          }
        }
      }
    return out;
  };
  return m;
}

double schwarzschild_graph_amplitude(int n, double mass) {
  if (n == 4) return std::sqrt(2.0 * mass);
  return 2.0 * std::sqrt(2.0 * mass) / (4.0 - n);
}

namespace {

MetricModel build_flat(const ModelSpec& spec) {
  const int n = spec.dim;
  MetricModel m;
  m.name = spec.name;
  m.dim = n;
  m.rho_min = spec.rho_min;
  m.decay_order = get_param(spec, "tau", 1.0);
  m.eval = [n](std::span<const double>) {
    MetricJet j(n);
    for (int i = 0; i < n; ++i) j.G(i, i) = 1.0;
    return j;
  };
  return m;
}

void validate_schwarzschild(const ModelSpec& spec, double mass) {
  const int n = spec.dim;
  if (n < 3) throw spec_error(spec.name + ": requires n >= 3");
  if (mass != 0.0) {
    const double horizon = std::pow(std::abs(mass) / 2.0, 1.0 / (n - 2));
    if (spec.rho_min <= horizon)
      throw spec_error(spec.name + ": rho_min must exceed (|m|/2)^{1/(n-2)}");
  }
}

ProfileFn schwarzschild_conformal_factor(int n, double mass) {
  const double expo = 4.0 / (n - 2.0);
  return [n, mass, expo](const Taylor3& rho) {
    const Taylor3 u = 1.0 + pow(rho, 2.0 - n) * (mass / 2.0);
    return pow(u, expo);
  };
}

MetricModel build_schwarzschild(const ModelSpec& spec) {
  const double mass = get_param(spec, "mass", 1.0);
  validate_schwarzschild(spec, mass);
  return conformal_metric_model(spec.name, spec.dim, spec.rho_min,
                                static_cast<double>(spec.dim - 2),
                                schwarzschild_conformal_factor(spec.dim, mass));
}

MetricModel build_schwarzschild_rotated(const ModelSpec& spec) {
  const double mass = get_param(spec, "mass", 1.0);
  validate_schwarzschild(spec, mass);
  const int n = spec.dim;
  MetricModel base = conformal_metric_model(
      spec.name + "-base", n, spec.rho_min, static_cast<double>(n - 2),
      schwarzschild_conformal_factor(n, mass));

  // fixed rotation: product of Givens rotations in the (0,1) and (1,2) planes
  std::vector<double> rot(n * n, 0.0);
  for (int i = 0; i < n; ++i) rot[i * n + i] = 1.0;
  auto apply_givens = [&](int a, int b, double th) {
    std::vector<double> g(n * n, 0.0);
    for (int i = 0; i < n; ++i) g[i * n + i] = 1.0;
    g[a * n + a] = std::cos(th);
    g[b * n + b] = std::cos(th);
    g[a * n + b] = -std::sin(th);
    g[b * n + a] = std::sin(th);
    std::vector<double> out(n * n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) out[i * n + j] += g[i * n + k] * rot[k * n + j];
    rot = out;
  };
  apply_givens(0, 1, 0.35);
  if (n >= 3) apply_givens(1, 2, -0.6);
  std::vector<double> shift(n, 0.0);
  shift[0] = 0.4;
  shift[n - 1] = -0.3;
  MetricModel out = transformed_chart(base, rot, shift);
  out.name = spec.name;
  return out;
}

MetricModel build_conformal(const ModelSpec& spec) {
  const int n = spec.dim;
  const double amp = get_param(spec, "amplitude", 1.0);
  const double beta = get_param(spec, "beta", 0.5);
  const double tau = get_param(spec, "tau", beta);
  const double expo = 4.0 / (n - 2.0);
  ProfileFn phi = [amp, beta, expo](const Taylor3& rho) {
    const Taylor3 u = 1.0 + pow(rho, -beta) * amp;
    return pow(u, expo);
  };
  return conformal_metric_model(spec.name, n, spec.rho_min, tau, phi);
}

ImmersionModel build_schwarzschild_graph(const ModelSpec& spec) {
  const int n = spec.dim;
  const double mass = get_param(spec, "mass", 1.0);
  const double sigma = get_param(spec, "sigma", 1.0);
  if (mass <= 0.0)
    throw spec_error(spec.name + ": rotational graph requires positive mass");
  const double s2 = sigma * sigma;
  ProfileFn u;
  if (n == 4) {
    const double c = schwarzschild_graph_amplitude(n, mass);
    u = [c, s2](const Taylor3& r) { return log_offset_profile(r, c, s2); };
  } else {
    const double c = schwarzschild_graph_amplitude(n, mass);
    const double beta = (4.0 - n) / 4.0;
    u = [c, beta, s2](const Taylor3& r) { return power_offset_profile(r, c, beta, s2); };
  }
  return graph_immersion_model(spec.name, n, {u}, 0.0, static_cast<double>(n - 2));
}

ImmersionModel build_bump_graph(const ModelSpec& spec) {
  const int n = spec.dim;
  const double amp = get_param(spec, "amplitude", 1.0);
  const double support = get_param(spec, "support", 5.0);
  ProfileFn u = [amp, support](const Taylor3& r) {
    if (r.v >= support * (1.0 - 1e-6)) return Taylor3(0.0);
    const Taylor3 t = 1.0 - (r / support) * (r / support);
    return exp(-1.0 / t) * amp;
  };
  return graph_immersion_model(spec.name, n, {u}, 0.0, get_param(spec, "tau", 1.0));
}

ImmersionModel build_codim2_graph(const ModelSpec& spec) {
  const int n = spec.dim;
  const double mass = get_param(spec, "mass", 1.0);
  const double l1 = get_param(spec, "lambda1", 0.8);
  const double l2 = get_param(spec, "lambda2", -0.6);
  const double s1 = get_param(spec, "sigma1", 1.0);
  const double s2 = get_param(spec, "sigma2", 2.0);
  if (mass <= 0.0) throw spec_error(spec.name + ": requires positive mass");
  if (n == 4) throw spec_error(spec.name + ": n = 4 not supported (log profile)");
  const double c = schwarzschild_graph_amplitude(n, mass);
  const double beta = (4.0 - n) / 4.0;
  ProfileFn u1 = [=](const Taylor3& r) {
    return power_offset_profile(r, l1 * c, beta, s1 * s1);
  };
  ProfileFn u2 = [=](const Taylor3& r) {
    return power_offset_profile(r, l2 * c, beta, s2 * s2);
  };
  return graph_immersion_model(spec.name, n, {u1, u2}, 0.0,
                               static_cast<double>(n - 2));
}

ImmersionModel build_tilted_graph(const ModelSpec& spec) {
  const int n = spec.dim;
  const double slope = get_param(spec, "slope", 0.1);
  ProfileFn u = [slope](const Taylor3& r) { return slope_profile(r, slope, 1.0); };
  return graph_immersion_model(spec.name, n, {u}, 0.0, get_param(spec, "tau", 1.0));
}

}  // namespace

MetricModel make_metric_model(const ModelSpec& spec) {
  if (spec.kind != ModelKind::metric)
    throw spec_error(spec.name + ": not a metric model");
  if (spec.family == "flat") return build_flat(spec);
  if (spec.family == "schwarzschild") return build_schwarzschild(spec);
  if (spec.family == "schwarzschild-rotated") return build_schwarzschild_rotated(spec);
  if (spec.family == "conformal") return build_conformal(spec);
  throw spec_error(spec.name + ": unknown metric family '" + spec.family + "'");
}

ImmersionModel make_immersion_model(const ModelSpec& spec) {
  if (spec.kind != ModelKind::immersion)
    throw spec_error(spec.name + ": not an immersion model");
  ImmersionModel m;
  if (spec.family == "schwarzschild-graph")
    m = build_schwarzschild_graph(spec);
  else if (spec.family == "bump-graph")
    m = build_bump_graph(spec);
  else if (spec.family == "codim2-graph")
    m = build_codim2_graph(spec);
  else if (spec.family == "tilted-graph")
    m = build_tilted_graph(spec);
  else
    throw spec_error(spec.name + ": unknown immersion family '" + spec.family + "'");
  if (spec.ambient > 0 && m.ambient != spec.ambient)
    throw spec_error(spec.name + ": ambient dimension mismatch");
  return m;
}

std::variant<MetricModel, ImmersionModel> make_model(const ModelSpec& spec) {
  if (spec.kind == ModelKind::metric) return make_metric_model(spec);
  return make_immersion_model(spec);
}

IdentityReport ae_immersion_check(const ImmersionModel& model, double tau,
                                  std::span<const double> radii) {
  const int n = model.dim;

  MetricModel induced = induced_metric_model(model);
  induced.decay_order = tau;
  IdentityReport rep = ae_decay_check(induced, radii);
  rep.identity = "ae-immersion";

  // condition (ii): rho^{tau-1} |d_i(psi*rhobar^2 - rho^2)| bounded
  std::vector<std::vector<double>> dirs;
  for (int i = 0; i < n; ++i) {
    std::vector<double> e(n, 0.0);
    e[i] = 1.0;
    dirs.push_back(e);
  }
  std::vector<double> diag(n, 1.0 / std::sqrt(static_cast<double>(n)));
  dirs.push_back(diag);

  std::vector<double> ind;
  for (double rho : radii) {
    double worst = 0.0;
    for (const auto& dvec : dirs) {
      std::vector<double> x(n);
      for (int i = 0; i < n; ++i) x[i] = rho * dvec[i];
      const ImmersionJet jet = model.eval2(x);
      for (int i = 0; i < n; ++i) {
        double di = 0.0;  // d_i |psi|^2 = 2 <psi, dpsi_i>
        for (int a = 0; a < model.ambient; ++a) di += 2.0 * jet.P(a) * jet.dP(i, a);
        di -= 2.0 * x[i];  // minus d_i rho^2
        worst = std::max(worst, std::abs(di));
      }
    }
    ind.push_back(std::pow(rho, tau - 1.0) * worst);
  }
  rep.series["position_gradient"] = ind;

  double peak = 0.0;
  for (double v : ind) peak = std::max(peak, v);
  if (peak < 1e-12) {
    rep.add("position_gradient growth slope", 0.0, 0.1);
  } else {
    std::vector<double> lx, ly;
    for (size_t i = 0; i < ind.size(); ++i) {
      lx.push_back(std::log(radii[i]));
      ly.push_back(std::log(std::max(ind[i], 1e-300)));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(lx.size());
    for (size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    rep.add("position_gradient growth slope", std::max(slope, 0.0), 0.1);
  }
  return rep;
}

std::vector<ModelSpec> builtin_zoo() {
  std::vector<ModelSpec> zoo;

  auto metric = [&](std::string name, std::string family, int n, double rho_min,
                    std::map<std::string, double> params, std::string doc,
                    std::optional<double> mass, bool negative) {
    ModelSpec s;
    s.name = std::move(name);
    s.family = std::move(family);
    s.kind = ModelKind::metric;
    s.dim = n;
    s.rho_min = rho_min;
    s.params = std::move(params);
    s.doc = std::move(doc);
    s.expected_mass = mass;
    s.negative_control = negative;
    zoo.push_back(std::move(s));
  };
  auto immersion = [&](std::string name, std::string family, int n, int d,
                       std::map<std::string, double> params, std::string doc,
                       std::optional<double> mass, bool eligible, bool negative) {
    ModelSpec s;
    s.name = std::move(name);
    s.family = std::move(family);
    s.kind = ModelKind::immersion;
    s.dim = n;
    s.ambient = d;
    s.rho_min = 0.0;
    s.params = std::move(params);
    s.doc = std::move(doc);
    s.expected_mass = mass;
    s.theorem_eligible = eligible;
    s.negative_control = negative;
    zoo.push_back(std::move(s));
  };

  metric("flat-n3", "flat", 3, 0.0, {{"tau", 1.0}}, "flat space; every mass is 0 exactly",
         0.0, false);
  metric("flat-n5", "flat", 5, 0.0, {{"tau", 1.0}}, "flat space; every mass is 0 exactly",
         0.0, false);
  metric("schwarzschild-n3", "schwarzschild", 3, 2.0, {{"mass", 1.0}},
         "isotropic Schwarzschild; ADM mass equals the mass parameter "
         "(analytic flux expansion)",
         1.0, false);
  metric("schwarzschild-n4", "schwarzschild", 4, 2.0, {{"mass", 1.0}},
         "isotropic Schwarzschild; ADM mass equals the mass parameter", 1.0, false);
  metric("schwarzschild-n5", "schwarzschild", 5, 2.0, {{"mass", 2.0}},
         "isotropic Schwarzschild; ADM mass equals the mass parameter", 2.0, false);
  metric("schwarzschild-rotated-n3", "schwarzschild-rotated", 3, 3.5, {{"mass", 1.0}},
         "rotated/translated chart of schwarzschild-n3; same mass empirically", 1.0,
         false);
  metric("schwarzschild-negative-n3", "schwarzschild", 3, 2.0, {{"mass", -0.5}},
         "negative-parameter variant; ADM mass equals the (negative) parameter", -0.5,
         false);
  metric("conformal-n5", "conformal", 5, 2.0,
         {{"amplitude", 1.0}, {"beta", 0.5}, {"tau", 0.5}},
         "conformally flat with u = 1 + rho^{-1/2}; order-2 GBC mass finite "
         "(regression baseline), ADM not defined at this decay",
         std::nullopt, false);
  metric("conformal-slow-n5", "conformal", 5, 2.0,
         {{"amplitude", 1.0}, {"beta", 0.3}, {"tau", 1.0}},
         "decay 0.3 tested against claimed tau = 1; ae_decay_check must fail",
         std::nullopt, true);

  immersion("schwarzschild-graph-n3", "schwarzschild-graph", 3, 4,
            {{"mass", 1.0}, {"sigma", 1.0}},
            "entire rotational graph with Schwarzschild slope asymptotics; "
            "flux mass equals the mass parameter in the limit",
            1.0, true, false);
  immersion("schwarzschild-graph-n5", "schwarzschild-graph", 5, 6,
            {{"mass", 1.0}, {"sigma", 1.0}},
            "entire rotational graph with Schwarzschild slope asymptotics", 1.0, true,
            false);
  immersion("bump-graph-n3", "bump-graph", 3, 4,
            {{"amplitude", 1.0}, {"support", 5.0}, {"tau", 1.0}},
            "compactly supported bump; metric is exactly flat outside the support, "
            "mass 0 with zero extrapolation error",
            0.0, true, false);
  immersion("codim2-graph-n5", "codim2-graph", 5, 7,
            {{"mass", 1.0},
             {"lambda1", 0.8},
             {"lambda2", -0.6},
             {"sigma1", 1.0},
             {"sigma2", 2.0}},
            "codimension-2 decaying graph with split Schwarzschild-type profiles; "
            "flux mass equals mass * (lambda1^2 + lambda2^2) in the limit",
            1.0, true, false);
  immersion("tilted-graph-n3", "tilted-graph", 3, 4, {{"slope", 0.1}, {"tau", 1.0}},
            "non-decaying slope; ae_immersion_check must fail both conditions",
            std::nullopt, false, true);
  return zoo;
}

const ModelSpec& zoo_spec(const std::string& name) {
  static const std::vector<ModelSpec> zoo = builtin_zoo();
  for (const auto& s : zoo)
    if (s.name == name) return s;
  throw spec_error("unknown zoo model '" + name + "'");
}

}  // namespace gbc
