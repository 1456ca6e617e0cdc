#pragma once

// The model zoo: analytic metric and immersion models with known or
// cross-checkable masses, plus the AE-immersion checker.
//
// Radial models evaluate their profile functions in univariate third-order
// jets and assemble chart derivatives by the chain rule; generic models go
// through multivariate jets.  Graph profiles additionally exist as templated
// closed forms so tests can cross-check the two derivative paths.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gbc/extrinsic.hpp"
#include "gbc/intrinsic.hpp"

namespace gbc {

struct spec_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ModelKind { metric, immersion };

struct ModelSpec {
  std::string name;    // unique zoo key, e.g. "schwarzschild-n3"
  std::string family;  // constructor dispatch, e.g. "schwarzschild"
  ModelKind kind = ModelKind::metric;
  int dim = 3;
  int ambient = 0;  // immersions only
  double rho_min = 0.0;
  std::map<std::string, double> params;
  std::string doc;  // expected mass or behavior, with provenance
  std::optional<double> expected_mass;
  bool theorem_eligible = false;
  bool negative_control = false;
};

// Default-parameterized zoo instances.
std::vector<ModelSpec> builtin_zoo();
const ModelSpec& zoo_spec(const std::string& name);

std::variant<MetricModel, ImmersionModel> make_model(const ModelSpec& spec);
MetricModel make_metric_model(const ModelSpec& spec);
ImmersionModel make_immersion_model(const ModelSpec& spec);

// Condition (i): decay of the induced metric at the claimed order; condition
// (ii): rho^{tau-1} |d(psi* rhobar^2 - rho^2)| bounded across the ladder.
IdentityReport ae_immersion_check(const ImmersionModel& model, double tau,
                                  std::span<const double> radii);

// --- building blocks -------------------------------------------------------

using ProfileFn = std::function<Taylor3(const Taylor3&)>;

// Conformally flat metric g = phi(rho) delta assembled radially.
MetricModel conformal_metric_model(std::string name, int n, double rho_min, double tau,
                                   ProfileFn phi);

// Rotational graph psi(x) = (x, u_1(|x|), ..., u_c(|x|)); entire when
// rho_min = 0 (profiles must be smooth even functions of |x| then).
ImmersionModel graph_immersion_model(std::string name, int n, std::vector<ProfileFn> profiles,
                                     double rho_min, double tau);

// Chart transform x -> R x + a of a metric model (two-coordinate-system
// variant used for the empirical invariance check).
MetricModel transformed_chart(const MetricModel& base, const std::vector<double>& rotation,
                              const std::vector<double>& shift);

// Closed-form profile formulas shared by the jet path and the hand-coded
// derivative path.
template <class T>
T power_offset_profile(const T& r, double c, double beta, double sigma2) {
  return pow(r * r + sigma2, beta) * c;
}
template <class T>
T log_offset_profile(const T& r, double c, double sigma2) {
  return log(r * r + sigma2) * (0.5 * c);
}
template <class T>
T slope_profile(const T& r, double a, double sigma2) {
  return sqrt(r * r + sigma2) * a;
}

// Amplitude of the Schwarzschild-type graph profile c (r^2 + sigma^2)^{(4-n)/4}
// whose flux mass is exactly `mass` in the limit; n = 4 uses the log form.
double schwarzschild_graph_amplitude(int n, double mass);

}  // namespace gbc
