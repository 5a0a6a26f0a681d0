#include "vortex/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "vortex/errors.hpp"

namespace vortex {

namespace {

Json pair(double x, double y) { return Json::array({x, y}); }

Json complex_list(const std::vector<cplx>& v) {
  Json a = Json::array();
  for (const cplx& z : v) a.push_back(pair(z.real(), z.imag()));
  return a;
}

double number(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw PreconditionError(std::string("document field '") + key + "' is missing or not a number");
  return j.at(key).get<double>();
}

Chart chart_from_string(const std::string& s) {
  if (s == to_string(Chart::North)) return Chart::North;
  if (s == to_string(Chart::South)) return Chart::South;
  throw PreconditionError("unknown chart '" + s + "'");
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// six significant digits, trailing zeros kept
std::string sig6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.6g", v);
  return buf;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json to_json(const DomainSpec& d) {
  Json j{{"kind", to_string(d.kind)}};
  switch (d.kind) {
    case DomainKind::Plane: break;
    case DomainKind::Disk: j["R"] = d.R; break;
    case DomainKind::CenterVortex: j["mu"] = d.mu; break;
    case DomainKind::Sphere:
      j["theta"] = d.theta;
      j["chart"] = to_string(d.chart);
      break;
  }
  return j;
}

DomainSpec domain_from_json(const Json& j) {
  const DomainKind kind = domain_kind_from_string(j.at("kind").get<std::string>());
  DomainSpec d;
  switch (kind) {
    case DomainKind::Plane: d = DomainSpec::plane(); break;
    case DomainKind::Disk: d = DomainSpec::disk(number(j, "R")); break;
    case DomainKind::CenterVortex: d = DomainSpec::center(number(j, "mu")); break;
    case DomainKind::Sphere:
      d = DomainSpec::sphere(number(j, "theta"),
                             j.contains("chart") ? chart_from_string(j.at("chart").get<std::string>()) : Chart::North);
      break;
  }
  return d;
}

Json to_json(const Configuration& c) {
  Json pos = Json::array();
  for (const Point& p : c.positions) pos.push_back(pair(p.x, p.y));
  Json j{{"positions", pos}, {"circulations", c.circulations}};
  if (c.center) j["center"] = pair(c.center->x, c.center->y);
  return j;
}

Configuration configuration_from_json(const Json& j) {
  Configuration c;
  for (const Json& p : j.at("positions")) c.positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  if (j.contains("center")) c.center = Point{j["center"].at(0).get<double>(), j["center"].at(1).get<double>()};
  if (j.contains("circulations")) c.circulations = j["circulations"].get<std::vector<double>>();
  return c;
}

Json to_json(const Equilibrium& eq) {
  Json spec = Json::array();
  for (const Eigenpair& e : eq.spectrum) {
    Json v = Json::array();
    for (Eigen::Index i = 0; i < e.vector.size(); ++i) v.push_back(pair(e.vector[i].real(), e.vector[i].imag()));
    spec.push_back({{"value", pair(e.value.real(), e.value.imag())}, {"vector", v}});
  }
  return {{"domain", to_json(eq.domain)},
          {"n", eq.n()},
          {"config", to_json(eq.config)},
          {"omega", eq.omega},
          {"lambda1", eq.lambda1},
          {"kappa_n", eq.kappa_n},
          {"residual", eq.residual},
          {"spectrum", spec}};
}

Json to_json(const PeriodicOrbit& o) {
  Json nodes = Json::array();
  for (Eigen::Index c = 0; c < o.nodes.cols(); ++c) {
    Json col = Json::array();
    for (Eigen::Index r = 0; r < o.nodes.rows(); ++r) col.push_back(o.nodes(r, c));
    nodes.push_back(col);
  }
  return {{"domain", to_json(o.domain)},
          {"n", o.n},
          {"mesh", {{"boundaries", o.mesh.boundaries()}, {"degree", o.mesh.degree()}}},
          {"nodes", nodes},
          {"T", o.T},
          {"T0", o.T0()},
          {"rho", o.rho()},
          {"lambda1", o.lambda1},
          {"lambda2", o.lambda2},
          {"A", o.A},
          {"kappa_n", o.kappa_n},
          {"r_n", o.r_n},
          {"reference_config", to_json(o.reference_config)}};
}

PeriodicOrbit orbit_from_json(const Json& j) {
  PeriodicOrbit o;
  o.domain = domain_from_json(j.at("domain"));
  o.n = j.at("n").get<int>();
  o.mesh = Mesh(j.at("mesh").at("boundaries").get<std::vector<double>>(), j.at("mesh").at("degree").get<int>());
  const Json& nodes = j.at("nodes");
  if (static_cast<int>(nodes.size()) != o.mesh.node_count())
    throw PreconditionError("orbit document: node count does not match the mesh");
  o.nodes.resize(o.dim(), o.mesh.node_count());
  for (int c = 0; c < o.mesh.node_count(); ++c) {
    const Json& col = nodes.at(static_cast<std::size_t>(c));
    if (static_cast<int>(col.size()) != o.dim()) throw PreconditionError("orbit document: node dimension mismatch");
    for (int r = 0; r < o.dim(); ++r) o.nodes(r, c) = col.at(static_cast<std::size_t>(r)).get<double>();
  }
  o.T = number(j, "T");
  o.lambda1 = number(j, "lambda1");
  o.lambda2 = number(j, "lambda2");
  o.A = number(j, "A");
  o.kappa_n = number(j, "kappa_n");
  o.r_n = number(j, "r_n");
  o.reference_config = configuration_from_json(j.at("reference_config"));
  return o;
}

ChoreographyExport make_export(const BranchPoint& point, int k, int l, int m, std::string label, int spp) {
  ChoreographyExport c;
  c.label = std::move(label);
  c.spec = resonance_data(k, l, m, point.orbit.n);
  c.point = point;
  c.paths = reconstruct_inertial(point.orbit, c.spec, spp);
  c.report = verify_choreography(c.paths, c.spec);
  c.rotation_residual = rotation_symmetry_residual(c.paths, c.spec);
  const auto& qn = c.paths.paths.back();
  c.winding = winding_number(qn);
  try {
    c.centroid_winding = winding_number(qn, centroid(qn));
  } catch (const VortexError&) {
  }
  return c;
}

Json to_json(const ChoreographyExport& c) {
  const PeriodicOrbit& o = c.point.orbit;
  Json j{{"label", c.label},
         {"n", o.n},
         {"center_vortex", o.domain.has_center()},
         {"l", c.spec.l},
         {"m", c.spec.m},
         {"k", c.spec.k},
         {"k_tilde", c.spec.k_tilde},
         {"l_star", c.spec.l_star},
         {"d", c.spec.d},
         {"shift", c.spec.shift},
         {"domain", to_json(o.domain)},
         {"T", o.T},
         {"T0", o.T0()},
         {"rho", o.rho()},
         {"A", o.A},
         {"max_floquet", c.point.max_floquet},
         {"stable", c.point.stable},
         {"symmetry_residual", c.report.residual},
         {"closure", c.report.closure},
         {"winding", c.winding},
         {"rotation_residual", c.rotation_residual},
         {"times", c.paths.times}};
  if (auto p = domain_param(o.domain.kind)) j["parameter"] = {{"name", to_string(*p)}, {"value", o.get(*p)}};
  if (c.centroid_winding) j["centroid_winding"] = *c.centroid_winding;
  Json rot = Json::array(), in = Json::array();
  for (std::size_t v = 0; v < c.paths.paths.size(); ++v) {
    rot.push_back(complex_list(c.paths.rotating[v]));
    in.push_back(complex_list(c.paths.paths[v]));
  }
  j["rotating"] = rot;
  j["inertial"] = in;
  if (c.paths.center_path) {
    j["center_rotating"] = complex_list(*c.paths.center_rotating);
    j["center_inertial"] = complex_list(*c.paths.center_path);
  }
  if (c.paths.sphere_paths) {
    Json s = Json::array();
    for (const auto& path : *c.paths.sphere_paths) {
      Json a = Json::array();
      for (const Eigen::Vector3d& v : path) a.push_back(Json::array({v.x(), v.y(), v.z()}));
      s.push_back(a);
    }
    j["sphere"] = s;
  }
  j["orbit"] = to_json(o);
  return j;
}

const std::vector<std::string> kBranchColumns{"index", "arclength", "R",  "mu", "theta",
                                              "kappa_n", "r_n",    "T",  "T0", "rho",
                                              "A",     "lambda1", "lambda2", "maxFloquet", "stable"};

void write_branch_csv(std::ostream& os, const Branch& b) {
  for (std::size_t i = 0; i < kBranchColumns.size(); ++i) os << (i ? "," : "") << kBranchColumns[i];
  os << '\n';
  for (std::size_t i = 0; i < b.points.size(); ++i) {
    const BranchPoint& p = b.points[i];
    const DomainSpec& d = p.orbit.domain;
    auto only = [&](DomainKind k, double v) { return d.kind == k ? format_number(v) : std::string(); };
    os << i << ',' << format_number(p.arclength) << ',' << only(DomainKind::Disk, d.R) << ','
       << only(DomainKind::CenterVortex, d.mu) << ',' << only(DomainKind::Sphere, d.theta) << ','
       << format_number(p.orbit.kappa_n) << ',' << format_number(p.orbit.r_n) << ',' << format_number(p.T) << ','
       << format_number(p.T0) << ',' << format_number(p.rho) << ',' << format_number(p.A) << ','
       << format_number(p.orbit.lambda1) << ',' << format_number(p.orbit.lambda2) << ','
       << format_number(p.max_floquet) << ',' << (p.stable ? 1 : 0) << '\n';
  }
}

TableRow table_row(const Json& j) {
  TableRow r;
  r.label = j.value("label", std::string());
  r.n = std::to_string(j.at("n").get<int>()) + (j.value("center_vortex", false) ? "+1" : "");
  r.ratio = std::to_string(j.at("l").get<int>()) + ":" + std::to_string(j.at("m").get<int>());
  if (j.contains("parameter")) {
    const std::string name = j["parameter"].at("name").get<std::string>();
    const std::string symbol = name == "mu" ? "\u03bc" : name == "theta" ? "\u03b8" : name;
    r.parameter = symbol + "=" + fixed6(j["parameter"].at("value").get<double>());
  }
  r.T = j.at("T").get<double>();
  r.T0 = j.at("T0").get<double>();
  r.stable = j.at("stable").get<bool>();
  return r;
}

std::string format_table(const std::vector<TableRow>& rows) {
  std::ostringstream os;
  os << "label, n, l:m, parameter, T, T0, stability\n";
  for (const TableRow& r : rows)
    os << r.label << ", " << r.n << ", " << r.ratio << ", " << r.parameter << ", " << sig6(r.T) << ", "
       << sig6(r.T0) << ", " << (r.stable ? 'S' : 'U') << '\n';
  return os.str();
}

void write_file_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".part";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << text;
    if (!f) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

Json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw PreconditionError("cannot read " + path);
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw PreconditionError(path + ": " + e.what());
  }
}

}  // namespace vortex
