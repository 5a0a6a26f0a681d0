#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vortex/io.hpp"
#include "vortex/schemes.hpp"

namespace vortex {

// Invalid scenario documents and command lines (exit code 1), as opposed to
// numerical failures (VortexError, exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SchemeKind { Equilibrium, ThreeStage, FixedRn, FixedResonance };
std::string to_string(SchemeKind s);

struct ModeSelector {
  std::optional<double> value;      // frequency of the mode
  std::optional<int> index;         // position among the distinct positive frequencies
  std::optional<double> perturbed;  // branch of the split at the perturbed kappa_n
};

struct LabelledRatio {
  int l = 0, m = 1;
  std::string label;
};

struct LabelledValue {
  double value = 0.0;
  std::string label;
};

struct Scenario {
  std::string name = "scenario";
  DomainSpec domain;
  int n = 5;
  SchemeKind scheme = SchemeKind::Equilibrium;
  std::vector<ModeSelector> modes;
  double kappa_perturbed = 1.2;
  double amplitude_target = 1e-2;
  bool degenerate = false;
  std::vector<LabelledRatio> resonances;
  int stage3_steps = 2000;
  std::optional<double> max_amplitude, rho_min, rho_max;
  double r_n = 0.2, R_stop = 1.0;  // fixed-rn
  // fixed-resonance: the seed is the first located resonance
  std::optional<double> target;
  std::string seed_label, end_label;
  std::vector<LabelledValue> waypoints;
  SchemeOptions numerics;
  int samples_per_period = 256;
};

// Strict reader: unknown keys, wrong types and incompatible combinations
// throw ConfigError naming the offending key.
Scenario parse_scenario(const Json& document);
Scenario load_scenario(const std::string& path, const std::vector<std::string>& overrides = {});

// "a.b.c=value": the value is read as JSON when it parses, else as a string.
void apply_override(Json& document, const std::string& assignment);

enum class Depth { Equilibrium, Branch, Resonance, Choreography };

struct RunOutput {
  std::map<std::string, std::string> files;  // relative path -> contents
  std::vector<std::string> summary;          // one line per produced item
};

// Runs every mode of the scenario (in parallel over `threads` workers) up to
// `depth`. Nothing is written; failures propagate as StageError/VortexError
// with the job named in the message.
RunOutput run_scenario(const Scenario& scenario, Depth depth, int threads = 1);

// Table rows from choreography documents; missing files throw ConfigError
// listing every missing path.
std::string table_report(const std::vector<std::string>& paths);

}  // namespace vortex
