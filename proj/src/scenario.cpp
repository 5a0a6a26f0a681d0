#include "vortex/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "vortex/svg.hpp"

namespace vortex {

std::string to_string(SchemeKind s) {
  switch (s) {
    case SchemeKind::Equilibrium: return "equilibrium";
    case SchemeKind::ThreeStage: return "three-stage";
    case SchemeKind::FixedRn: return "fixed-rn";
    case SchemeKind::FixedResonance: return "fixed-resonance";
  }
  return "?";
}

namespace {

// Object view that remembers which keys were read so leftovers can be
// reported as unknown.
class Reader {
 public:
  Reader(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j.is_object()) fail("expected an object");
  }

  bool has(const std::string& key) {
    used_.insert(key);
    return j_.contains(key);
  }

  const Json& raw(const std::string& key) {
    if (!has(key)) fail("missing key '" + key + "'");
    return j_.at(key);
  }

  double number(const std::string& key) {
    const Json& v = raw(key);
    if (!v.is_number()) fail("'" + key + "' must be a number");
    return v.get<double>();
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }
  std::optional<double> maybe_number(const std::string& key) {
    return has(key) ? std::optional<double>(number(key)) : std::nullopt;
  }

  int integer(const std::string& key) {
    const Json& v = raw(key);
    if (!v.is_number_integer()) fail("'" + key + "' must be an integer");
    return v.get<int>();
  }
  int integer(const std::string& key, int fallback) { return has(key) ? integer(key) : fallback; }

  std::string text(const std::string& key) {
    const Json& v = raw(key);
    if (!v.is_string()) fail("'" + key + "' must be a string");
    return v.get<std::string>();
  }
  std::string text(const std::string& key, const std::string& fallback) {
    return has(key) ? text(key) : fallback;
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const Json& v = j_.at(key);
    if (!v.is_boolean()) fail("'" + key + "' must be true or false");
    return v.get<bool>();
  }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!used_.count(key)) fail("unknown key '" + key + "'");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError((where_.empty() ? std::string("scenario") : where_) + ": " + what);
  }

 private:
  const Json& j_;
  std::string where_;
  std::set<std::string> used_;
};

SchemeKind scheme_from_string(const std::string& s, const Reader& r) {
  for (SchemeKind k : {SchemeKind::Equilibrium, SchemeKind::ThreeStage, SchemeKind::FixedRn,
                       SchemeKind::FixedResonance})
    if (to_string(k) == s) return k;
  r.fail("unknown scheme '" + s + "' (equilibrium, three-stage, fixed-rn, fixed-resonance)");
}

DomainSpec read_domain(const Json& j) {
  Reader r(j, "domain");
  const std::string kind = r.text("kind");
  DomainSpec d;
  if (kind == "plane") {
    d = DomainSpec::plane();
  } else if (kind == "disk") {
    const double R = r.number("R");
    if (!(R > 1.0)) r.fail("R must exceed the unit polygon radius 1");
    d = DomainSpec::disk(R);
  } else if (kind == "center") {
    d = DomainSpec::center(r.number("mu"));
  } else if (kind == "sphere") {
    const double theta = r.number("theta");
    if (!(theta > 0.0 && theta < 3.141592653589793)) r.fail("theta must lie in (0, pi)");
    const std::string chart = r.text("chart", "north");
    if (chart != "north" && chart != "south") r.fail("chart must be 'north' or 'south'");
    d = DomainSpec::sphere(theta, chart == "north" ? Chart::North : Chart::South);
  } else {
    r.fail("unknown kind '" + kind + "' (plane, disk, center, sphere)");
  }
  r.finish();
  return d;
}

ModeSelector read_mode(const Json& j, const std::string& where) {
  ModeSelector m;
  if (j.is_number()) {
    m.value = j.get<double>();
    return m;
  }
  Reader r(j, where);
  m.value = r.maybe_number("value");
  if (r.has("index")) m.index = r.integer("index");
  m.perturbed = r.maybe_number("perturbed");
  if (m.value.has_value() == m.index.has_value()) r.fail("give exactly one of 'value' and 'index'");
  if (m.index && *m.index < 0) r.fail("'index' must be non-negative");
  r.finish();
  return m;
}

LabelledRatio read_ratio(const Json& j, const std::string& where) {
  LabelledRatio out;
  const Json* pair = &j;
  std::optional<Reader> r;
  if (j.is_object()) {
    r.emplace(j, where);
    pair = &r->raw("ratio");
    out.label = r->text("label", "");
    r->finish();
  }
  if (!pair->is_array() || pair->size() != 2 || !(*pair)[0].is_number_integer() || !(*pair)[1].is_number_integer())
    throw ConfigError(where + ": a resonance is [l, m] with integers l and m");
  out.l = (*pair)[0].get<int>();
  out.m = (*pair)[1].get<int>();
  if (out.m <= 0 || std::gcd(out.l, out.m) != 1)
    throw ConfigError(where + ": " + std::to_string(out.l) + ":" + std::to_string(out.m) +
                      " is not a reduced ratio with m > 0");
  return out;
}

void read_numerics(const Json& j, Scenario& s) {
  Reader r(j, "numerics");
  SchemeOptions& o = s.numerics;
  o.intervals = r.integer("intervals", o.intervals);
  o.degree = r.integer("degree", o.degree);
  o.amplitude_step = r.number("amplitude_step", o.amplitude_step);
  o.initial_step = r.number("initial_step", o.initial_step);
  o.min_step = r.number("min_step", o.min_step);
  o.max_step = r.number("max_step", o.max_step);
  o.adapt_every = r.integer("adapt_every", o.adapt_every);
  o.max_steps = r.integer("max_steps", o.max_steps);
  o.polish_factor = r.integer("polish_factor", o.polish_factor);
  o.polish_degree = r.integer("polish_degree", o.polish_degree);
  s.samples_per_period = r.integer("samples_per_period", s.samples_per_period);
  r.finish();
  if (o.intervals < 4) r.fail("intervals must be at least 4");
  if (o.degree < 2 || o.degree > 8 || o.polish_degree < 2 || o.polish_degree > 8) r.fail("degrees must lie in 2..8");
  if (!(o.min_step > 0.0 && o.min_step <= o.initial_step && o.initial_step <= o.max_step))
    r.fail("need 0 < min_step <= initial_step <= max_step");
  if (!(o.amplitude_step > 0.0)) r.fail("amplitude_step must be positive");
  if (o.max_steps < 1 || o.adapt_every < 0 || o.polish_factor < 1) r.fail("step counts must be positive");
  if (s.samples_per_period < 16) r.fail("samples_per_period must be at least 16");
}

std::string ratio_text(int l, int m) { return std::to_string(l) + ":" + std::to_string(m); }

std::string file_label(const std::string& label, int l, int m) {
  std::string s = label.empty() ? std::to_string(l) + "_" + std::to_string(m) : label;
  for (char& c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  return s;
}

}  // namespace

void apply_override(Json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override '" + assignment + "' is not of the form key=value");
  const std::string key = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  Json* node = &doc;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("override key '" + key + "' has an empty component");
    if (!node->is_object()) throw ConfigError("override key '" + key + "' descends into a non-object");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = Json::object();
    start = dot + 1;
  }
}

Scenario parse_scenario(const Json& doc) {
  Reader r(doc, "");
  Scenario s;
  s.name = r.text("name", s.name);
  s.domain = read_domain(r.raw("domain"));
  s.n = r.integer("n", s.n);
  if (s.n < 2 || s.n > 12) r.fail("n must lie in 2..12");
  s.scheme = scheme_from_string(r.text("scheme"), r);

  if (r.has("mode") && r.has("modes")) r.fail("give 'mode' or 'modes', not both");
  if (r.has("mode")) s.modes.push_back(read_mode(r.raw("mode"), "mode"));
  if (r.has("modes")) {
    const Json& list = r.raw("modes");
    if (!list.is_array() || list.empty()) r.fail("'modes' must be a non-empty list");
    for (std::size_t i = 0; i < list.size(); ++i) s.modes.push_back(read_mode(list[i], "modes[" + std::to_string(i) + "]"));
  }

  if (r.has("perturbation")) {
    Reader p(r.raw("perturbation"), "perturbation");
    s.kappa_perturbed = p.number("kappa_n", s.kappa_perturbed);
    s.amplitude_target = p.number("amplitude", s.amplitude_target);
    p.finish();
    if (!(s.kappa_perturbed > 0.0) || s.kappa_perturbed == 1.0) p.fail("kappa_n must be positive and different from 1");
    if (!(s.amplitude_target > 0.0)) p.fail("amplitude must be positive");
  }
  s.degenerate = r.boolean("degenerate", false);

  if (r.has("resonances")) {
    const Json& list = r.raw("resonances");
    if (!list.is_array()) r.fail("'resonances' must be a list");
    for (std::size_t i = 0; i < list.size(); ++i)
      s.resonances.push_back(read_ratio(list[i], "resonances[" + std::to_string(i) + "]"));
  }

  if (r.has("stage3")) {
    Reader t(r.raw("stage3"), "stage3");
    s.stage3_steps = t.integer("max_steps", s.stage3_steps);
    s.rho_min = t.maybe_number("rho_min");
    s.rho_max = t.maybe_number("rho_max");
    s.max_amplitude = t.maybe_number("max_amplitude");
    t.finish();
    if (s.stage3_steps < 1) t.fail("max_steps must be positive");
  }

  if (r.has("fixed_rn")) {
    Reader f(r.raw("fixed_rn"), "fixed_rn");
    s.r_n = f.number("r_n", s.r_n);
    s.R_stop = f.number("R_stop", s.R_stop);
    f.finish();
    if (s.scheme != SchemeKind::FixedRn) f.fail("only valid with scheme fixed-rn");
    if (!(s.r_n >= 0.0 && s.r_n < 1.0)) f.fail("r_n must lie in [0, 1)");
  }

  if (r.has("fixed_resonance")) {
    Reader f(r.raw("fixed_resonance"), "fixed_resonance");
    s.target = f.number("target");
    s.seed_label = f.text("seed_label", "");
    s.end_label = f.text("end_label", "");
    if (f.has("waypoints")) {
      const Json& list = f.raw("waypoints");
      if (!list.is_array()) f.fail("'waypoints' must be a list");
      for (std::size_t i = 0; i < list.size(); ++i) {
        LabelledValue w;
        if (list[i].is_number()) {
          w.value = list[i].get<double>();
        } else {
          Reader wr(list[i], "fixed_resonance.waypoints[" + std::to_string(i) + "]");
          w.value = wr.number("value");
          w.label = wr.text("label", "");
          wr.finish();
        }
        s.waypoints.push_back(w);
      }
    }
    f.finish();
    if (s.scheme != SchemeKind::FixedResonance) f.fail("only valid with scheme fixed-resonance");
  }

  if (r.has("numerics")) read_numerics(r.raw("numerics"), s);
  r.finish();

  // cross-field rules
  const DomainKind kind = s.domain.kind;
  if (s.scheme == SchemeKind::FixedRn && kind != DomainKind::Disk) r.fail("scheme fixed-rn requires a disk domain");
  if (s.scheme == SchemeKind::FixedResonance && kind != DomainKind::CenterVortex && kind != DomainKind::Sphere)
    r.fail("scheme fixed-resonance requires a center or sphere domain");
  if (s.scheme != SchemeKind::Equilibrium && s.modes.empty()) r.fail("scheme " + to_string(s.scheme) + " needs 'mode' or 'modes'");
  if (s.scheme == SchemeKind::FixedResonance) {
    if (s.resonances.size() != 1) r.fail("fixed-resonance needs exactly one entry in 'resonances'");
    if (!s.target) r.fail("fixed-resonance needs fixed_resonance.target");
    if (s.modes.size() != 1) r.fail("fixed-resonance continues a single mode");
  }
  if (s.scheme == SchemeKind::FixedRn && s.R_stop >= s.domain.R) r.fail("fixed_rn.R_stop must be below the disk radius");
  return s;
}

Scenario load_scenario(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read scenario " + path);
  Json doc = Json::parse(f, nullptr, false, true);
  if (doc.is_discarded()) throw ConfigError(path + ": not a valid JSON document");
  for (const std::string& o : overrides) apply_override(doc, o);
  try {
    return parse_scenario(doc);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

namespace {

struct Located {
  int l = 0, m = 1;
  std::string label;
  BranchPoint point;
};

struct JobResult {
  SchemeResult scheme;
  std::vector<Located> located;
  Param x = Param::Amplitude;
  Ordinate y = Ordinate::Rho;
};

double resolve_mode(const Equilibrium& eq, const ModeSelector& sel) {
  if (sel.value) return *sel.value;
  const SpectrumClassification c = classify_spectrum(eq.eigenvalues());
  std::vector<double> f;
  for (const ImaginaryPair& p : c.imaginary)
    if (p.frequency > 1e-6) f.push_back(p.frequency);
  if (*sel.index >= static_cast<int>(f.size()))
    throw PreconditionError("mode index " + std::to_string(*sel.index) + " out of range: the equilibrium has " +
                            std::to_string(f.size()) + " distinct positive frequencies");
  return f[static_cast<std::size_t>(*sel.index)];
}

ThreeStageConfig three_stage_config(const Scenario& s, double mode, const ModeSelector& sel) {
  ThreeStageConfig c;
  c.n = s.n;
  c.mode = mode;
  c.kappa_perturbed = s.kappa_perturbed;
  c.perturbed_mode = sel.perturbed;
  c.amplitude_target = s.amplitude_target;
  for (const LabelledRatio& r : s.resonances) c.resonances.emplace_back(r.l, r.m);
  c.max_amplitude = s.max_amplitude;
  c.rho_min = s.rho_min;
  c.rho_max = s.rho_max;
  c.stage3_steps = s.stage3_steps;
  c.degenerate = s.degenerate;
  return c;
}

void require_all(const Scenario& s, const SchemeResult& r, const std::string& stage) {
  for (const LabelledRatio& want : s.resonances) {
    const bool found = std::any_of(r.resonances.begin(), r.resonances.end(),
                                   [&](const ResonantOrbit& o) { return o.l == want.l && o.m == want.m; });
    if (!found)
      throw StageError(stage, "resonance " + ratio_text(want.l, want.m) + " not located (" +
                                  r.final_branch().stop_message + ")");
  }
}

std::string label_for(const Scenario& s, int l, int m) {
  for (const LabelledRatio& r : s.resonances)
    if (r.l == l && r.m == m && !r.label.empty()) return r.label;
  return ratio_text(l, m);
}

JobResult run_job(const Scenario& s, const Equilibrium& eq, const ModeSelector& sel) {
  JobResult out;
  double mode = 0.0;
  try {
    mode = resolve_mode(eq, sel);
  } catch (const VortexError& e) {
    throw StageError("equilibrium", e.what());
  }
  switch (s.scheme) {
    case SchemeKind::Equilibrium: break;
    case SchemeKind::ThreeStage: {
      out.scheme = run_three_stage(s.domain, three_stage_config(s, mode, sel), s.numerics);
      require_all(s, out.scheme, "stage 3");
      for (const ResonantOrbit& r : out.scheme.resonances) out.located.push_back({r.l, r.m, label_for(s, r.l, r.m), r.point});
      break;
    }
    case SchemeKind::FixedRn: {
      FixedRnConfig c;
      c.n = s.n;
      c.mode = mode;
      c.r_n_target = s.r_n;
      c.R_stop = s.R_stop;
      for (const LabelledRatio& r : s.resonances) c.resonances.emplace_back(r.l, r.m);
      out.scheme = run_fixed_rn(s.domain, c, s.numerics);
      require_all(s, out.scheme, "stage 2");
      for (const ResonantOrbit& r : out.scheme.resonances) out.located.push_back({r.l, r.m, label_for(s, r.l, r.m), r.point});
      out.x = Param::DiskRadius;
      break;
    }
    case SchemeKind::FixedResonance: {
      const SchemeResult seed = run_three_stage(s.domain, three_stage_config(s, mode, sel), s.numerics);
      require_all(s, seed, "stage 3");
      const LabelledRatio& ratio = s.resonances.front();
      FixedResonanceConfig f;
      f.l = ratio.l;
      f.m = ratio.m;
      f.moving = *domain_param(s.domain.kind);
      f.target = *s.target;
      for (const LabelledValue& w : s.waypoints) f.waypoints.push_back(w.value);
      SchemeResult fr = run_fixed_resonance(seed.resonances.front().point.orbit, f, s.numerics);
      if (fr.final_branch().stop != StopReason::Target)
        throw StageError("fixed resonance", "target " + format_number(*s.target) + " not reached (" +
                                                fr.final_branch().stop_message + ")");
      out.scheme = seed;
      out.scheme.stages.push_back(fr.final_branch());
      out.scheme.waypoints = fr.waypoints;
      out.scheme.resonances = fr.resonances;
      // seed, waypoints in branch order, end point
      std::vector<std::string> labels{s.seed_label.empty() ? "seed" : s.seed_label};
      for (const Event& e : fr.waypoints) {
        std::string lab;
        for (const LabelledValue& w : s.waypoints)
          if (std::abs(w.value - e.value) < 1e-12) lab = w.label;
        labels.push_back(lab.empty() ? to_string(f.moving) + "=" + format_number(e.value) : lab);
      }
      labels.push_back(s.end_label.empty() ? "end" : s.end_label);
      for (std::size_t i = 0; i < fr.resonances.size(); ++i)
        out.located.push_back({f.l, f.m, labels[std::min(i, labels.size() - 1)], fr.resonances[i].point});
      out.x = f.moving;
      out.y = Ordinate::Period;
      break;
    }
  }
  return out;
}

Json orbit_document(const Located& o, int k) {
  Json mult = Json::array();
  for (const cplx& z : o.point.multipliers) mult.push_back(Json::array({z.real(), z.imag()}));
  return {{"label", o.label}, {"l", o.l},   {"m", o.m}, {"k", k}, {"max_floquet", o.point.max_floquet},
          {"stable", o.point.stable}, {"multipliers", mult}, {"orbit", to_json(o.point.orbit)}};
}

void emit(const Scenario& s, const JobResult& job, Depth depth, const std::string& dir, RunOutput& out) {
  const SchemeResult& r = job.scheme;
  for (std::size_t i = 0; i < r.stages.size(); ++i) {
    std::ostringstream csv;
    write_branch_csv(csv, r.stages[i]);
    out.files[dir + "branch/stage" + std::to_string(i + 1) + ".csv"] = csv.str();
  }
  std::vector<Marker> markers;
  for (const Located& o : job.located)
    markers.push_back({o.point.orbit.get(job.x), job.y == Ordinate::Rho ? o.point.rho : o.point.T, o.label});
  out.files[dir + "figures/bifurcation.svg"] =
      bifurcation_figure({r.final_branch()}, job.x, s.name + " (" + to_string(s.scheme) + ")", markers, job.y);
  out.summary.push_back(dir + "final branch: " + std::to_string(r.final_branch().points.size()) + " points, " +
                        r.final_branch().stop_message + ", symmetry index k = " + std::to_string(r.k));
  if (depth == Depth::Branch) return;

  std::vector<TableRow> rows;
  for (const Located& o : job.located) {
    const std::string name = file_label(o.label, o.l, o.m);
    out.files[dir + "orbits/" + name + ".json"] = orbit_document(o, r.k).dump(1) + "\n";
    char line[200];
    std::snprintf(line, sizeof line, "%s %s: T = %.6f, T0 = %.6f, max |multiplier| = %.6g, %s", o.label.c_str(),
                  ratio_text(o.l, o.m).c_str(), o.point.T, o.point.T0, o.point.max_floquet,
                  o.point.stable ? "stable" : "unstable");
    out.summary.push_back(dir + line);
    if (depth != Depth::Choreography) continue;
    const ChoreographyExport c = make_export(o.point, r.k, o.l, o.m, o.label, s.samples_per_period);
    const Json doc = to_json(c);
    out.files[dir + "choreographies/" + name + ".json"] = doc.dump(1) + "\n";
    out.files[dir + "figures/" + name + "-rotating.svg"] =
        orbit_figure(c.paths, false, o.label + "  " + ratio_text(o.l, o.m) + "  rotating frame");
    out.files[dir + "figures/" + name + "-inertial.svg"] =
        orbit_figure(c.paths, true, o.label + "  " + ratio_text(o.l, o.m) + "  inertial frame");
    rows.push_back(table_row(doc));
    std::snprintf(line, sizeof line, "  choreography residual %.2e, winding %d", c.report.residual, c.winding);
    out.summary.push_back(dir + line);
  }
  if (depth == Depth::Choreography) out.files[dir + "table.txt"] = format_table(rows);
}

}  // namespace

RunOutput run_scenario(const Scenario& s, Depth depth, int threads) {
  RunOutput out;
  Equilibrium eq;
  try {
    eq = solve_equilibrium(s.domain, domain_polygon(s.domain, s.n), 1.0);
  } catch (const VortexError& e) {
    throw StageError("equilibrium", e.what());
  }
  out.files["equilibrium.json"] = to_json(eq).dump(1) + "\n";
  {
    std::ostringstream line;
    line << "equilibrium: omega = " << eq.omega << ", T0 = " << rotating_period(s.domain, s.n) << ", frequencies";
    for (const ImaginaryPair& p : classify_spectrum(eq.eigenvalues()).imaginary)
      line << ' ' << p.frequency << (p.multiplicity > 1 ? " (x" + std::to_string(p.multiplicity) + ")" : "");
    out.summary.push_back(line.str());
  }
  if (depth == Depth::Equilibrium || s.scheme == SchemeKind::Equilibrium) return out;

  const std::size_t jobs = s.modes.size();
  std::vector<std::optional<JobResult>> results(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < jobs;) {
      try {
        results[i] = run_job(s, eq, s.modes[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(jobs)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (std::size_t i = 0; i < jobs; ++i) {
    if (!errors[i]) continue;
    const std::string prefix = jobs > 1 ? "mode " + std::to_string(i + 1) + ": " : "";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const StageError& e) {
      throw StageError(prefix + e.stage(), std::string(e.what()).substr(e.stage().size() + 2));
    } catch (const VortexError& e) {
      throw StageError(prefix + "scheme", e.what());
    }
  }
  for (std::size_t i = 0; i < jobs; ++i) {
    const std::string dir = jobs > 1 ? "mode" + std::to_string(i + 1) + "/" : "";
    emit(s, *results[i], depth, dir, out);
  }
  return out;
}

std::string table_report(const std::vector<std::string>& paths) {
  std::vector<std::string> missing;
  for (const std::string& p : paths)
    if (!std::filesystem::is_regular_file(p)) missing.push_back(p);
  if (!missing.empty()) {
    std::string msg = "missing inputs:";
    for (const std::string& p : missing) msg += " " + p;
    throw ConfigError(msg);
  }
  std::vector<TableRow> rows;
  for (const std::string& p : paths) {
    try {
      rows.push_back(table_row(read_json_file(p)));
    } catch (const VortexError& e) {
      throw ConfigError(e.what());
    } catch (const Json::exception& e) {
      throw ConfigError(p + ": not a choreography document (" + e.what() + ")");
    }
  }
  return format_table(rows);
}

}  // namespace vortex
