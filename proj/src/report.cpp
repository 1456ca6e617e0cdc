#include "gbc/report.hpp"
#include <json.hpp>
#include <sstream>
namespace gbc {
std::string to_json(const IdentityReport& r) {
  nlohmann::json j;
  j["identity"] = r.identity;
  j["pass"] = r.pass;
  j["note"] = r.note;
  j["radii"] = r.radii;
  for (const auto& [k, v] : r.series) j["series"][k] = v;
  for (const auto& c : r.checks)
    j["checks"].push_back({{"label", c.label}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  return j.dump(2);
}
}  // namespace gbc
