#pragma once

#include <map>
#include <string>
#include <vector>

namespace gbc {

struct IdentityCheck {
  std::string label;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

// Residuals of a named identity at sample points or over a region.
struct IdentityReport {
  std::string identity;
  std::vector<IdentityCheck> checks;
  std::vector<double> radii;                          // for ladder-based checks
  std::map<std::string, std::vector<double>> series;  // indicator traces per radius
  bool pass = true;
  std::string note;

  void add(const std::string& label, double residual, double tolerance) {
    const bool ok = residual <= tolerance;
    checks.push_back({label, residual, tolerance, ok});
    pass = pass && ok;
  }
};

std::string to_json(const IdentityReport& r);

}  // namespace gbc
