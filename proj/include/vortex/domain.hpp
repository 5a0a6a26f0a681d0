#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace vortex {

using cplx = std::complex<double>;

enum class DomainKind { Plane, Disk, CenterVortex, Sphere };

// Stereographic chart of the sphere. North: projection from the north pole
// (the south pole maps to the origin). South: the antipodal chart q -> 1/conj(q).
enum class Chart { North, South };

// Minimum pairwise distance (and disk boundary clearance) accepted anywhere.
inline constexpr double kCollisionGuard = 1e-6;

struct DomainSpec {
  DomainKind kind = DomainKind::Plane;
  double R = 0.0;      // disk radius (Disk)
  double mu = 0.0;     // central circulation (CenterVortex)
  double theta = 0.0;  // polygon colatitude (Sphere)
  Chart chart = Chart::North;

  static DomainSpec plane();
  static DomainSpec disk(double radius);
  static DomainSpec center(double circulation);
  static DomainSpec sphere(double colatitude, Chart chart = Chart::North);

  void validate() const;
  bool has_center() const { return kind == DomainKind::CenterVortex; }
  // Radius of the polygonal equilibrium in the active coordinates:
  // 1 for plane/disk/center, cot(theta/2) (North) or tan(theta/2) (South).
  double polygon_radius() const;
  std::string name() const;
};

std::string to_string(DomainKind kind);
DomainKind domain_kind_from_string(const std::string& s);
std::string to_string(Chart chart);

struct Point {
  double x = 0.0;
  double y = 0.0;

  cplx z() const { return {x, y}; }
  static Point from(cplx z) { return {z.real(), z.imag()}; }
};

// Positions u_1..u_n (the n-th vortex is the one used for phase and rotation
// conditions), the optional central vortex u_0, and ring circulations.
struct Configuration {
  std::vector<Point> positions;
  std::optional<Point> center;
  std::vector<double> circulations;

  int n() const { return static_cast<int>(positions.size()); }
  int dim() const { return 2 * n() + (center ? 2 : 0); }

  // Flat real layout [x_1, y_1, ..., x_n, y_n, (x_0, y_0)].
  Eigen::VectorXd state() const;
  static Configuration from_state(std::span<const double> state, int n,
                                  bool with_center,
                                  std::vector<double> circulations = {});
  double kappa(int j) const {
    return circulations.empty() ? 1.0 : circulations[static_cast<std::size_t>(j)];
  }
};

int state_dim(const DomainSpec& domain, int n);

// Throws DomainError for collisions (pairwise distance below the guard),
// vortices outside the disk, or a missing/unexpected central vortex.
void validate_configuration(const DomainSpec& domain, const Configuration& config);

// Same checks on a flat state; `where` is prefixed to the error message.
void validate_state(const DomainSpec& domain, int n, std::span<const double> state,
                    const std::string& where = {});

double min_pairwise_distance(int n, bool with_center, std::span<const double> state);

}  // namespace vortex
