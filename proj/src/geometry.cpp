#include "curves/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "curves/intersect.hpp"

namespace curves {

namespace {
constexpr Real kPi = std::numbers::pi_v<Real>;

Isometry translate_up(Real d) { return {std::exp(d / 2), 0, 0, std::exp(-d / 2)}; }

// Rotation about i turning tangent vectors left by theta.
Isometry turn(Real theta) {
  const Real c = std::cos(theta / 2), s = std::sin(theta / 2);
  return {c, s, -s, c};
}

// Isometry taking i to z without rotating tangent vectors there.
Isometry move_to(Point z) {
  const Real r = std::sqrt(z.imag());
  return {r, z.real() / r, 0, 1 / r};
}

Point base_point() { return {0, 1}; }

Real angle_between(Point at, Point p, Point q) {
  Real d = std::fabs(direction(at, p) - direction(at, q));
  if (d > kPi) d = 2 * kPi - d;
  return d;
}

std::string num(Real x) { return fmt::format("{:.17g}", static_cast<double>(x)); }

Isometry normalize(Isometry m) {
  const Real det = m.det();
  const Real k = 1 / std::sqrt(det);
  return {m.a * k, m.b * k, m.c * k, m.d * k};
}

// Isometry taking the line (p, q) to the imaginary axis with p -> 0, q -> oo.
Isometry line_to_axis(const BoundaryPoint& p, const BoundaryPoint& q) {
  if (q.infinite) return {1, -p.x, 0, 1};
  if (p.infinite) return {0, -1, 1, -q.x};
  Isometry m{1, -p.x, 1, -q.x};  // (z - p) / (z - q), det p - q
  if (m.det() < 0) m = {-1, p.x, 1, -q.x};
  return normalize(m);
}
}  // namespace

double MetricParams::inclusion_constant() const { return std::min({2 * l1, 2 * l2, l3}); }

std::string MetricParams::str() const { return fmt::format("({}, {}, {})", l1, l2, l3); }

MetricParams metric_small() { return {0.89, 0.889, 0.2149}; }
MetricParams metric_unit() { return {1.0, 1.2, 1.012}; }

Real Isometry::translation_length() const {
  const Real t = std::fabs(trace()) / 2;
  return t <= 1 ? 0 : 2 * std::acosh(t);
}

Isometry operator*(const Isometry& x, const Isometry& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

Isometry commutator(const Isometry& x, const Isometry& y) { return x * y * x.inverse() * y.inverse(); }

Real BoundaryPoint::angle() const { return infinite ? kPi : 2 * std::atan(x); }

std::string BoundaryPoint::str() const { return infinite ? "inf" : num(x); }

BoundaryPoint apply(const Isometry& g, const BoundaryPoint& p) {
  if (p.infinite) {
    if (g.c == 0) return {0, true};
    return {g.a / g.c, false};
  }
  const Real den = g.c * p.x + g.d;
  if (den == 0) return {0, true};
  return {(g.a * p.x + g.b) / den, false};
}

Axis axis_endpoints(const Isometry& h) {
  const Real tr = h.trace();
  if (std::fabs(tr) <= 2) throw Error(ErrorCode::not_hyperbolic, fmt::format("|trace| = {} <= 2", num(std::fabs(tr))));
  // Fixed points solve c z^2 + (d - a) z - b = 0.
  const Real disc = std::sqrt(tr * tr - 4);
  const Real bq = h.d - h.a;
  auto attracting_at = [&](const BoundaryPoint& z) {
    if (z.infinite) return std::fabs(h.a) > std::fabs(h.d);
    return std::fabs(h.c * z.x + h.d) > 1;
  };
  BoundaryPoint z1, z2;
  if (h.c == 0) {
    z1 = {0, true};
    z2 = {h.b / (h.a - h.d), false};
  } else {
    const Real q = -(bq + (bq >= 0 ? disc : -disc)) / 2;
    z1 = {q / h.c, false};
    z2 = q == 0 ? BoundaryPoint{0, true} : BoundaryPoint{-h.b / q, false};
  }
  if (attracting_at(z1)) return {z1, z2};
  return {z2, z1};
}

Real distance(Point z, Point w) {
  return 2 * std::asinh(std::abs(z - w) / (2 * std::sqrt(z.imag() * w.imag())));
}

Isometry rotation_pi(Point z) {
  const Real x = z.real(), y = z.imag();
  return {x / y, -(x * x + y * y) / y, 1 / y, -x / y};
}

Real direction(Point z, Point w) { return std::arg(Point(0, 1) * (w - z) / (w - std::conj(z))); }

Point point_toward(Point z, Point w, Real dist) {
  const Isometry frame = move_to(z) * turn(direction(z, w) - kPi / 2);
  return (frame * translate_up(dist)).apply(base_point());
}

Point midpoint(Point z, Point w) { return point_toward(z, w, distance(z, w) / 2); }

std::pair<BoundaryPoint, BoundaryPoint> line_through(Point z, Point w) {
  const Real dx = z.real() - w.real();
  if (std::fabs(dx) <= 1e-15L * (1 + std::fabs(z.real()))) return {{z.real(), false}, {0, true}};
  const Real center = (std::norm(z) - std::norm(w)) / (2 * dx);
  const Real radius = std::abs(z - center);
  return {{center - radius, false}, {center + radius, false}};
}

std::optional<std::pair<Point, Point>> common_perpendicular(std::pair<BoundaryPoint, BoundaryPoint> l1,
                                                            std::pair<BoundaryPoint, BoundaryPoint> l2) {
  const Isometry m = line_to_axis(l1.first, l1.second);
  const BoundaryPoint p = apply(m, l2.first), q = apply(m, l2.second);
  if (p.infinite || q.infinite || p.x * q.x <= 0) return std::nullopt;
  // The perpendicular is the circle |z| = sqrt(pq).
  const Real r = std::sqrt(p.x * q.x);
  const Real center = (p.x + q.x) / 2, radius = std::fabs(q.x - p.x) / 2;
  // intersection of |z| = r with |z - center| = radius
  const Real x = (r * r - radius * radius + center * center) / (2 * center);
  const Point on2{x, std::sqrt(std::max<Real>(r * r - x * x, 0))};
  const Isometry back = m.inverse();
  return std::pair{back.apply(Point(0, r)), back.apply(on2)};
}

// ---------------------------------------------------------------------------

Real Pentagon::max_side_residual(const MetricParams& p) const {
  const Real want[5] = {p.l1, s, p.l3, t, p.l2};
  const Point v[6] = {G, V_a, W_a, W_b, V_b, G};
  Real worst = 0;
  for (int i = 0; i < 5; ++i) worst = std::max(worst, std::fabs(distance(v[i], v[i + 1]) - want[i]));
  return worst;
}

Real Pentagon::max_angle_residual() const {
  const Point v[7] = {V_b, G, V_a, W_a, W_b, V_b, G};
  Real worst = 0;
  for (int i = 2; i <= 5; ++i) worst = std::max(worst, std::fabs(angle_between(v[i], v[i - 1], v[i + 1]) - kPi / 2));
  return worst;
}

Pentagon solve_pentagon(const MetricParams& p) {
  if (!(p.l1 > 0 && p.l2 > 0 && p.l3 > 0))
    throw Error(ErrorCode::no_pentagon, "side lengths must be positive, got " + p.str());
  const Real l1 = p.l1, l2 = p.l2, l3 = p.l3;
  const Isometry right = turn(-kPi / 2), left = turn(kPi / 2);
  auto end_a = [&](Real s) { return (right * translate_up(s) * left * translate_up(l1)).apply(base_point()); };
  auto end_b = [&](Real t) {
    return (translate_up(l3) * right * translate_up(t) * right * translate_up(l2)).apply(base_point());
  };
  // displacement in units of the local hyperbolic scale
  auto residual = [&](Real s, Real t) {
    const Point x = end_a(s), y = end_b(t);
    return (x - y) / std::sqrt(x.imag() * y.imag());
  };

  // all-right pentagon: sinh s sinh l3 = cosh l2, sinh t sinh l3 = cosh l1
  Real s = std::asinh(std::cosh(l2) / std::sinh(l3));
  Real t = std::asinh(std::cosh(l1) / std::sinh(l3));
  Point f = residual(s, t);
  int it = 0;
  constexpr Real h = 1e-7L;
  // iterate past the 1e-11 acceptance level until the damped step stops helping
  for (; it < 200 && std::abs(f) >= 1e-17L; ++it) {
    const Point fs = (residual(s + h, t) - residual(s - h, t)) / (2 * h);
    const Point ft = (residual(s, t + h) - residual(s, t - h)) / (2 * h);
    const Real det = fs.real() * ft.imag() - ft.real() * fs.imag();
    if (det == 0) break;
    const Real ds = (f.real() * ft.imag() - ft.real() * f.imag()) / det;
    const Real dt = (fs.real() * f.imag() - f.real() * fs.imag()) / det;
    Real step = 1;
    Point g = residual(s - ds, t - dt);
    while (std::abs(g) >= std::abs(f) && step > 1e-6L) {
      step /= 2;
      g = residual(s - step * ds, t - step * dt);
    }
    if (std::abs(g) >= std::abs(f)) break;
    s -= step * ds;
    t -= step * dt;
    f = g;
  }
  if (std::abs(f) >= 1e-11L)
    throw Error(ErrorCode::non_convergence,
                fmt::format("pentagon {} residual {} after {} iterations", p.str(), num(std::abs(f)), it));

  Pentagon pent;
  pent.W_a = base_point();
  pent.W_b = translate_up(l3).apply(base_point());
  pent.V_a = (right * translate_up(s)).apply(base_point());
  pent.V_b = (translate_up(l3) * right * translate_up(t)).apply(base_point());
  pent.G = (end_a(s) + end_b(t)) / Real(2);
  pent.s = s;
  pent.t = t;
  pent.phi = angle_between(pent.G, pent.V_a, pent.V_b);
  pent.iterations = it;
  pent.residual = std::abs(f);
  if (!(s > 0 && t > 0 && pent.phi > 0 && pent.phi < kPi / 2 && pent.max_angle_residual() < 1e-9L))
    throw Error(ErrorCode::no_pentagon,
                fmt::format("no pentagon with acute angle for {} (s = {}, t = {}, phi = {})", p.str(), num(s), num(t),
                            num(pent.phi)));
  return pent;
}

std::string_view to_string(Placement p) {
  return p == Placement::pentagon_vertices ? "pentagon-vertices" : "octagon-midpoints";
}

namespace {
// Midpoints of the octagon sides perpendicular to the doubled l1 and l2 sides:
// the octagon is the pentagon together with its image under r_G.
std::optional<std::pair<Point, Point>> octagon_midpoints(const Pentagon& pent) {
  const Isometry rg = rotation_pi(pent.G);
  const auto side_a = line_through(pent.W_a, pent.V_a);
  const auto side_b = line_through(pent.W_b, pent.V_b);
  const auto image_a = line_through(rg.apply(pent.W_a), rg.apply(pent.V_a));
  const auto image_b = line_through(rg.apply(pent.W_b), rg.apply(pent.V_b));
  const auto perp_a = common_perpendicular(side_a, image_b);
  const auto perp_b = common_perpendicular(side_b, image_a);
  if (!perp_a || !perp_b) return std::nullopt;
  return std::pair{midpoint(pent.W_a, perp_a->first), midpoint(pent.W_b, perp_b->first)};
}
}  // namespace

Representation make_representation(const MetricParams& p, const Pentagon& pent, Placement placement) {
  Representation r;
  r.params = p;
  r.pentagon = pent;
  r.placement = placement;
  r.G = pent.G;
  if (auto oct = octagon_midpoints(pent)) {
    r.Y_octagon = oct->first;
    r.O_octagon = oct->second;
    r.placements_agree = std::abs(oct->first - pent.V_a) < 1e-9L && std::abs(oct->second - pent.V_b) < 1e-9L;
  }
  if (placement == Placement::pentagon_vertices) {
    r.Y = pent.V_a;
    r.O = pent.V_b;
  } else {
    if (!r.Y_octagon) throw Error(ErrorCode::invalid_metric, "octagon construction failed for " + p.str());
    r.Y = *r.Y_octagon;
    r.O = *r.O_octagon;
  }
  const Isometry rg = rotation_pi(r.G);
  r.A = rg * rotation_pi(r.Y);
  r.B = rg * rotation_pi(r.O);
  r.c = p.inclusion_constant();
  r.commutator_trace = commutator(r.A, r.B).trace();
  r.boundary_length = commutator(r.A, r.B).translation_length();
  return r;
}

ProxyReport check_proxies(const Representation& r, std::size_t max_len) {
  ProxyReport rep;
  rep.commutator_trace = r.commutator_trace;
  rep.worst_margin = std::numeric_limits<Real>::infinity();
  enumerate_classes(max_len, [&](const ClassKey& k) {
    if (!is_primitive(k)) return;
    const Isometry h = holonomy(r, k.word());
    const Real gl = h.translation_length();
    const Real margin = gl - r.c * static_cast<Real>(k.size());
    ++rep.inclusion_checked;
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (std::fabs(h.trace()) <= 2 || margin < -1e-9L) ++rep.inclusion_violations;
  });
  return rep;
}

Representation build_metric(const MetricParams& p) {
  const Pentagon pent = solve_pentagon(p);
  Representation primary = make_representation(p, pent, Placement::pentagon_vertices);
  const ProxyReport pr = check_proxies(primary);
  if (pr.ok()) {
    primary.notes = fmt::format("pentagon-vertex placement passes proxies (tr[A,B] = {}, {} classes checked)",
                                num(pr.commutator_trace), pr.inclusion_checked);
    return primary;
  }
  std::string why = fmt::format("pentagon-vertex placement fails proxies (tr[A,B] = {}, {} inclusion violations)",
                                num(pr.commutator_trace), pr.inclusion_violations);
  if (primary.Y_octagon) {
    Representation alt = make_representation(p, pent, Placement::octagon_midpoints);
    const ProxyReport ar = check_proxies(alt);
    if (ar.ok()) {
      alt.notes = why + "; octagon-midpoint placement used";
      return alt;
    }
    why += fmt::format("; octagon-midpoint placement fails too (tr[A,B] = {}, {} inclusion violations)",
                       num(ar.commutator_trace), ar.inclusion_violations);
  }
  throw Error(ErrorCode::invalid_metric, p.str() + ": " + why);
}

Isometry holonomy(const Representation& r, std::string_view codes) {
  const Isometry gens[4] = {r.A, r.A.inverse(), r.B, r.B.inverse()};
  Isometry m;
  for (char c : codes) m = m * gens[static_cast<unsigned char>(c)];
  return m;
}

Isometry holonomy(const Representation& r, const CyclicWord& w) { return holonomy(r, w.codes()); }

Real geodesic_length(const Representation& r, const CyclicWord& w) {
  const Isometry h = holonomy(r, w);
  if (std::fabs(h.trace()) <= 2)
    throw Error(ErrorCode::elliptic_or_parabolic,
                fmt::format("{} has |trace| = {} under {}", w.str(), num(std::fabs(h.trace())), r.params.str()));
  return h.translation_length();
}

std::uint64_t self_intersection_geometric(const Representation& r, const ClassKey& k) {
  if (!is_primitive(k)) throw Error(ErrorCode::non_primitive, k.str() + " is a proper power");
  const std::string& w = k.codes();
  const std::size_t n = w.size();
  const Isometry hw = holonomy(r, w);
  const Real gl = geodesic_length(r, k.word());
  const Axis ax = axis_endpoints(hw);

  // Frame where the axis of rho(w) is the imaginary axis, rho(w) scales by
  // e^{gl}, and the base point projects to height 1.
  Isometry norm = line_to_axis(ax.repelling, ax.attracting);
  const Real base_height = std::abs(norm.apply(base_point()));
  norm = Isometry{1 / std::sqrt(base_height), 0, 0, std::sqrt(base_height)} * norm;

  std::vector<Isometry> prefix(n);
  for (std::size_t i = 0; i < n; ++i) prefix[i] = holonomy(r, std::string_view(w).substr(0, i));

  const Real scale = std::exp(gl);
  std::vector<std::pair<Real, Real>> found;
  auto same = [](Real x, Real y) { return std::fabs(x - y) <= 1e-7L * std::max(std::fabs(x), std::fabs(y)); };
  // Angular gap between a lift endpoint and the axis endpoint 0 or oo, seen
  // from the frame centered on the lift; invariant under scaling along the axis.
  auto gap = [](const BoundaryPoint& p, const BoundaryPoint& q) {
    if (p.infinite || q.infinite || p.x == 0 || q.x == 0) return Real(0);
    const Real lo = std::min(std::fabs(p.x), std::fabs(q.x)), hi = std::max(std::fabs(p.x), std::fabs(q.x));
    return 2 * std::atan(std::sqrt(lo / hi));
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;  // the axis itself
      const Isometry g = norm * prefix[i] * prefix[j].inverse();
      const BoundaryPoint p = apply(g, ax.repelling), q = apply(g, ax.attracting);
      if (gap(p, q) < 1e-9L)
        throw Error(ErrorCode::endpoint_collision,
                    fmt::format("{}: lift endpoint within 1e-9 of the axis under {}", k.str(), r.params.str()));
      if (p.x * q.x >= 0) continue;
      Real lo = std::min(p.x, q.x), hi = std::max(p.x, q.x);
      // move the crossing height into [1, e^{gl})
      const Real m = std::floor(std::log(std::sqrt(-lo * hi)) / gl);
      const Real f = std::exp(-m * gl);
      lo *= f;
      hi *= f;
      bool dup = false;
      for (const auto& [x, y] : found)
        for (Real s : {Real(1), scale, 1 / scale})
          if (same(x * s, lo) && same(y * s, hi)) dup = true;
      if (!dup) found.emplace_back(lo, hi);
    }
  }
  if (found.size() % 2 != 0)
    throw Error(ErrorCode::endpoint_collision,
                fmt::format("{}: odd number of crossing lifts ({}) under {}", k.str(), found.size(), r.params.str()));
  return found.size() / 2;
}

std::string to_json(const MetricParams& p) {
  return fmt::format(R"({{"l1": {}, "l2": {}, "l3": {}}})", num(p.l1), num(p.l2), num(p.l3));
}

namespace {
std::string json_point(Point z) { return fmt::format("[{}, {}]", num(z.real()), num(z.imag())); }
std::string json_matrix(const Isometry& m) {
  return fmt::format("[[{}, {}], [{}, {}]]", num(m.a), num(m.b), num(m.c), num(m.d));
}
}  // namespace

std::string to_json(const Representation& r) {
  const Pentagon& p = r.pentagon;
  std::string out = "{\n";
  out += fmt::format("  \"params\": {},\n", to_json(r.params));
  out += fmt::format("  \"placement\": \"{}\",\n", to_string(r.placement));
  out += fmt::format("  \"A\": {},\n  \"B\": {},\n", json_matrix(r.A), json_matrix(r.B));
  out += fmt::format("  \"G\": {},\n  \"Y\": {},\n  \"O\": {},\n", json_point(r.G), json_point(r.Y), json_point(r.O));
  out += fmt::format("  \"c\": {},\n", num(r.c));
  out += fmt::format("  \"commutator_trace\": {},\n", num(r.commutator_trace));
  out += fmt::format("  \"boundary_length\": {},\n", num(r.boundary_length));
  out += fmt::format(
      "  \"pentagon\": {{\"G\": {}, \"V_a\": {}, \"W_a\": {}, \"W_b\": {}, \"V_b\": {}, \"s\": {}, \"t\": {}, \"phi\": "
      "{}}},\n",
      json_point(p.G), json_point(p.V_a), json_point(p.W_a), json_point(p.W_b), json_point(p.V_b), num(p.s), num(p.t),
      num(p.phi));
  if (r.Y_octagon)
    out += fmt::format("  \"octagon\": {{\"Y\": {}, \"O\": {}}},\n", json_point(*r.Y_octagon), json_point(*r.O_octagon));
  out += fmt::format("  \"placements_agree\": {}\n}}\n", r.placements_agree ? "true" : "false");
  return out;
}

MetricParams metric_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, std::string("metric JSON: ") + e.what());
  }
  if (j.contains("params")) j = j["params"];
  MetricParams p;
  for (auto [key, field] : {std::pair{"l1", &p.l1}, std::pair{"l2", &p.l2}, std::pair{"l3", &p.l3}}) {
    if (!j.contains(key) || !j[key].is_number())
      throw Error(ErrorCode::parse, std::string("metric JSON needs a number for \"") + key + "\"");
    *field = j[key].get<double>();
  }
  return p;
}

}  // namespace curves
