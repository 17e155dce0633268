#pragma once

// Convex bodies, caps, the chord function f_K(x, θ) and the cap coordinate
// system.
//
// Orientation convention: the directed line at angle θ points along
// (cos θ, sin θ). Its left normal ν = (-sin θ, cos θ) points into the hull,
// so a cap at angle θ is the part of K on the right of the line, i.e. where
// ν·q is smallest. Depth ℓ is measured along ν from the support line of K,
// so depth 0 is always the empty cap.

#include "hulllab/core.hpp"

#include <filesystem>
#include <span>
#include <string_view>

namespace hulllab {

class ConvexBody;
ConvexBody make_body(std::span<const Point> vertices);

/// Where a ray leaves the body.
struct RayExit {
  Point point;
  std::size_t edge = 0;  ///< exit edge runs vertices[edge] -> vertices[edge + 1]
  double edge_param = 0.0;
};

/// Immutable convex polygon with counterclockwise, strictly convex vertices.
class ConvexBody {
 public:
  const PointList& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  double area() const { return area_; }
  const Point& centroid() const { return centroid_; }

  /// Largest outward distance of p past any edge line (≤ 0 inside).
  double outside_distance(const Point& p) const;
  bool contains(const Point& p, double tol = 1e-12) const { return outside_distance(p) <= tol; }

  /// Support value min_{q∈K} normal·q.
  double support_min(const Point& normal) const;

  /// Exit point of the ray origin + s·dir, s ≥ 0. `origin` must lie in K.
  RayExit ray_exit(const Point& origin, const Point& dir) const;

 private:
  friend ConvexBody make_body(std::span<const Point> vertices);
  ConvexBody() = default;

  PointList vertices_;
  PointList normals_;  // unit outward edge normals
  std::vector<double> levels_;
  double area_ = 0.0;
  Point centroid_ = Point::Zero();
};

/// Validates, canonicalizes to counterclockwise order and drops collinear
/// vertices. Throws NonConvexInput or DegenerateInput.
ConvexBody make_body(std::span<const Point> vertices);
inline ConvexBody make_body(std::initializer_list<Point> vertices) {
  return make_body(std::span<const Point>(vertices.begin(), vertices.size()));
}

/// Homothety about the centroid to the requested area.
ConvexBody normalize_area(const ConvexBody& body, double target);

/// K ∩ H_θ with its cutting chord.
struct Cap {
  double theta = 0.0;
  double offset = 0.0;
  double area = 0.0;
  double chord = 0.0;
  Point chord_start = Point::Zero();  ///< the chord runs along +θ from start to end
  Point chord_end = Point::Zero();
  PointList cut_polygon;

  /// A point on the cutting line inside K (the chord midpoint).
  Point representative_point() const { return 0.5 * (chord_start + chord_end); }
};

/// Cap at depth t below the support line at angle θ. t is clamped to
/// [0, width(θ)].
Cap cap_at_offset(const ConvexBody& body, double theta, double t);

/// A_K(p, θ): area of the cap whose cutting line passes through p.
double cap_area(const ConvexBody& body, const Point& p, double theta);

/// Cap of prescribed area r, found by bisection on the offset.
Cap cap_at_area(const ConvexBody& body, double theta, double r);

/// f_K(x, θ): chord of the cap of area -log x; 0 once x ≤ exp(-Area(K)).
double f_of(const ConvexBody& body, double x, double theta);

/// The body projected along direction θ: chord length h(ℓ) at depth ℓ and its
/// integral A(ℓ). Exact for polygons (h piecewise linear, A piecewise
/// quadratic).
class HeightProfile {
 public:
  HeightProfile(const ConvexBody& body, double theta);

  double theta() const { return theta_; }
  double width() const { return depths_.back(); }
  double total_area() const { return cumulative_.back(); }

  double h(double depth) const;
  double cumulative(double depth) const;
  /// Right derivative of h.
  double slope(double depth) const;
  /// Depth at which the cap area equals r (r clamped to [0, total_area()]).
  double depth_at_area(double r) const;

  /// Tangential extent (along +θ) of the chord at this depth.
  std::pair<double, double> chord_extent(double depth) const;
  /// Absolute coordinate ν·q of the support line.
  double base() const { return base_; }
  /// Maps (depth, tangential coordinate) back to the plane.
  Point to_plane(double depth, double tangential) const;

  /// Breakpoint depths of the piecewise-linear h.
  const std::vector<double>& breakpoints() const { return depths_; }

 private:
  std::size_t piece(double depth) const;

  double theta_;
  Point along_;
  Point normal_;
  double base_ = 0.0;
  std::vector<double> depths_;
  std::vector<double> lo_;
  std::vector<double> hi_;
  std::vector<double> cumulative_;
};

inline HeightProfile height_profile(const ConvexBody& body, double theta) {
  return HeightProfile(body, theta);
}

struct MonotonicityReport {
  /// Largest increase of f(x)/√(-log x) as x decreases (≤ 0 when monotone).
  double max_violation = 0.0;
  /// Smallest value of h(ℓ)² - 2 h'(ℓ) A(ℓ) seen on the depth grid.
  double min_growth_margin = 0.0;
};

MonotonicityReport check_f_monotonicity(const ConvexBody& body, double theta,
                                        std::size_t grid_size);

struct CapCoordinates {
  double x = 1.0;  ///< exp(-A_K(p, θ))
  double y = 0.0;  ///< forward distance from p to ∂K along +θ, over the chord
};

CapCoordinates cap_coordinates(const ConvexBody& body, const Point& p, double theta);
/// Inverse of cap_coordinates at fixed θ.
Point point_from_cap_coordinates(const ConvexBody& body, const CapCoordinates& c, double theta);

/// Area of the union of all caps of area eps, approximated from below by
/// intersecting the cap complements over `angular_resolution` equally spaced
/// directions.
double wet_part_area(const ConvexBody& body, double eps, std::size_t angular_resolution);

/// Area(C(p, θ) ∪ C(q, ψ)).
double cap_union_area(const ConvexBody& body, const Point& p, double theta, const Point& q,
                      double psi);

/// "square", "triangle", "hexagon", "disk:<m>", "quadrant-proxy:<side>".
ConvexBody named_body(std::string_view name);
/// Plain-text body file: m, then m lines "x y".
ConvexBody read_body_file(const std::filesystem::path& path);
/// A named body if the name parses as one, otherwise a body file path.
ConvexBody load_body(std::string_view name_or_path);

}  // namespace hulllab
