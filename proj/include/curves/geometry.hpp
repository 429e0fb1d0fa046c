#pragma once

// Hyperbolic structures on the one-holed torus built from a pentagon with
// sides (l1, s, l3, t, l2), realized in the upper half-plane.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "curves/words.hpp"

namespace curves {

using Real = long double;
using Point = std::complex<Real>;

struct MetricParams {
  double l1 = 1.0;
  double l2 = 1.2;
  double l3 = 1.012;

  /// c = min(2 l1, 2 l2, l3).
  double inclusion_constant() const;
  std::string str() const;
  bool operator==(const MetricParams&) const = default;
};

/// The two metrics used throughout: (0.89, 0.889, 0.2149) and (1, 1.2, 1.012).
MetricParams metric_small();
MetricParams metric_unit();

/// Element of SL(2, R), identified with its negative.
struct Isometry {
  Real a = 1, b = 0, c = 0, d = 1;

  Real trace() const { return a + d; }
  Real det() const { return a * d - b * c; }
  Isometry inverse() const { return {d, -b, -c, a}; }
  Point apply(Point z) const { return (a * z + b) / (c * z + d); }
  /// Hyperbolic translation length, 2 arccosh(|tr| / 2); 0 when |tr| <= 2.
  Real translation_length() const;
};

Isometry operator*(const Isometry& x, const Isometry& y);
Isometry commutator(const Isometry& x, const Isometry& y);

/// Point of R u {oo}.
struct BoundaryPoint {
  Real x = 0;
  bool infinite = false;

  /// Position on the circle, 2 atan(x) in (-pi, pi), with oo at pi.
  Real angle() const;
  std::string str() const;
};

BoundaryPoint apply(const Isometry& g, const BoundaryPoint& p);

struct Axis {
  BoundaryPoint attracting;
  BoundaryPoint repelling;
};

/// Throws Error(not_hyperbolic) when |trace| <= 2.
Axis axis_endpoints(const Isometry& h);

Real distance(Point z, Point w);
/// Unique elliptic involution fixing z (Im z > 0).
Isometry rotation_pi(Point z);
/// Angle of the initial tangent of the geodesic from z to w (up is pi/2).
Real direction(Point z, Point w);
/// Point at hyperbolic distance `dist` from z along the geodesic toward w.
Point point_toward(Point z, Point w, Real dist);
Point midpoint(Point z, Point w);
/// Endpoints of the complete geodesic through two distinct points.
std::pair<BoundaryPoint, BoundaryPoint> line_through(Point z, Point w);
/// Feet of the common perpendicular of two ultraparallel lines, on the first
/// and on the second line. Empty when the lines meet or share an endpoint.
std::optional<std::pair<Point, Point>> common_perpendicular(std::pair<BoundaryPoint, BoundaryPoint> l1,
                                                            std::pair<BoundaryPoint, BoundaryPoint> l2);

// ---------------------------------------------------------------------------

struct Pentagon {
  Point G, V_a, W_a, W_b, V_b;
  Real s = 0, t = 0;
  Real phi = 0;
  int iterations = 0;
  Real residual = 0;

  /// |side - prescribed| for sides G V_a, V_a W_a, W_a W_b, W_b V_b, V_b G.
  Real max_side_residual(const MetricParams& p) const;
  /// |angle - pi/2| at V_a, W_a, W_b, V_b.
  Real max_angle_residual() const;
};

/// Side l3 runs from i to i e^{l3}; the pentagon lies to its right.
/// Throws Error(no_pentagon) or Error(non_convergence).
Pentagon solve_pentagon(const MetricParams& p);

enum class Placement { pentagon_vertices, octagon_midpoints };
std::string_view to_string(Placement p);

struct Representation {
  MetricParams params;
  Pentagon pentagon;
  Placement placement = Placement::pentagon_vertices;
  Isometry A, B;
  Point G, Y, O;
  double c = 0;
  Real commutator_trace = 0;
  /// Length of the boundary geodesic, the class of abAB.
  Real boundary_length = 0;
  /// The octagon-side midpoints, when that construction succeeded.
  std::optional<Point> Y_octagon, O_octagon;
  /// Both constructions produced the same Y and O (within 1e-9).
  bool placements_agree = false;
  std::string notes;
};

/// A = r_G r_Y, B = r_G r_O. Tries Y = V_a, O = V_b first and falls back to the
/// octagon midpoints if the proxies fail. Throws Error(invalid_metric).
Representation build_metric(const MetricParams& p);
/// Representation for a fixed placement, without validation.
Representation make_representation(const MetricParams& p, const Pentagon& pent, Placement placement);

struct ProxyReport {
  Real commutator_trace = 0;
  std::size_t inclusion_checked = 0;
  std::size_t inclusion_violations = 0;
  Real worst_margin = 0;  // min over checked classes of gl - c wl
  bool ok() const { return commutator_trace < -2 && inclusion_violations == 0; }
};

/// Commutator trace plus the inclusion inequality over primitive classes up to `max_len`.
ProxyReport check_proxies(const Representation& r, std::size_t max_len = 8);

/// Product of A^{+-1}, B^{+-1} along the letter codes.
Isometry holonomy(const Representation& r, std::string_view codes);
Isometry holonomy(const Representation& r, const CyclicWord& w);

/// 2 arccosh(|tr rho(w)| / 2). Throws Error(elliptic_or_parabolic).
Real geodesic_length(const Representation& r, const CyclicWord& w);
inline Real geodesic_length(const Representation& r, const ClassKey& k) { return geodesic_length(r, k.word()); }

/// Counts lifts of the geodesic crossing a fundamental segment of the axis of
/// rho(w), halved. Throws Error(non_primitive), Error(endpoint_collision).
std::uint64_t self_intersection_geometric(const Representation& r, const ClassKey& k);

/// JSON dump (matrices, points, c, boundary length), floats with 17 significant digits.
std::string to_json(const Representation& r);
std::string to_json(const MetricParams& p);
MetricParams metric_from_json(std::string_view text);

}  // namespace curves
