#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "vortex/choreography.hpp"
#include "vortex/continuation.hpp"
#include "vortex/equilibria.hpp"

namespace vortex {

using Json = nlohmann::json;

Json to_json(const DomainSpec& domain);
DomainSpec domain_from_json(const Json& j);
Json to_json(const Configuration& config);
Configuration configuration_from_json(const Json& j);

Json to_json(const Equilibrium& eq);

// Full orbit document: enough to reload the orbit and continue from it.
Json to_json(const PeriodicOrbit& orbit);
PeriodicOrbit orbit_from_json(const Json& j);

struct ChoreographyExport {
  std::string label;
  ResonanceSpec spec;
  BranchPoint point;
  ChoreographyPaths paths;
  ChoreographyReport report;
  int winding = 0;
  std::optional<int> centroid_winding;
  double rotation_residual = 0.0;
};

ChoreographyExport make_export(const BranchPoint& point, int k, int l, int m, std::string label,
                               int samples_per_period = 256);
Json to_json(const ChoreographyExport& c);

// Branch table, one row per point with a fixed column order.
extern const std::vector<std::string> kBranchColumns;
void write_branch_csv(std::ostream& os, const Branch& branch);
std::string format_number(double v);

struct TableRow {
  std::string label;
  std::string n;          // "5" or "5+1"
  std::string ratio;      // "l:m"
  std::string parameter;  // "R=1.99442", "θ=0.65"; blank for the plane
  double T = 0.0;
  double T0 = 0.0;
  bool stable = false;
};

TableRow table_row(const Json& choreography_document);
// Header plus one ", "-separated line per row (label, n, l:m, parameter, T, T0, S/U).
std::string format_table(const std::vector<TableRow>& rows);

// Write text to `path` through a temporary file and a rename.
void write_file_atomic(const std::string& path, const std::string& text);
Json read_json_file(const std::string& path);

}  // namespace vortex
