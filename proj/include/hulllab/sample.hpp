#pragma once

// Random points for the two polygon models, their convex hulls, the
// functionals N and A, the tangent-vertex map W(θ) and angular
// decompositions of N and A.

#include "hulllab/body.hpp"
#include "hulllab/rng.hpp"

#include <cstdint>
#include <span>
#include <string_view>

namespace hulllab {

enum class Model { Poisson, Uniform };

std::string_view to_string(Model model);

struct PointSample {
  PointList points;
  Model model = Model::Uniform;
  double parameter = 0.0;  ///< λ for Poisson, n for Uniform
  std::uint64_t seed = 0;
};

/// Draws `count` i.i.d. uniform points in the body from `rng`.
void append_uniform_points(const ConvexBody& body, std::size_t count, Xoshiro256& rng, PointList& out);

/// Poisson(mean) variate: sequential inversion for mean ≤ 30, Hörmann's PTRD
/// transformed rejection above.
std::uint64_t poisson_variate(double mean, Xoshiro256& rng);

PointSample uniform_points(const ConvexBody& body, std::size_t n, std::uint64_t seed);
PointSample poisson_points(const ConvexBody& body, double lambda, std::uint64_t seed);

/// Monotone chain. Counterclockwise extreme points, collinear boundary points
/// dropped; fewer than three points come back unchanged (duplicates merged).
PointList convex_hull(std::span<const Point> points);

struct HullSummary {
  /// Counterclockwise; rotated so that edge i (vertices[i] -> vertices[i+1])
  /// has angle edge_angles[i] and the angles are ascending.
  PointList vertices;
  std::size_t N = 0;
  double A = 0.0;
  std::vector<double> edge_angles;
};

HullSummary functionals(const ConvexBody& body, std::span<const Point> points);
inline HullSummary functionals(const ConvexBody& body, const PointSample& sample) {
  return functionals(body, sample.points);
}

/// Index into hull.vertices of W(θ). At an edge angle the edge's terminal
/// vertex is returned.
std::size_t vertex_index_at_angle(const HullSummary& hull, double theta);
/// W(θ): the hull vertex touched by the directed tangent line at angle θ with
/// the hull on its left.
inline Point vertex_at_angle(const HullSummary& hull, double theta) {
  return hull.vertices[vertex_index_at_angle(hull, theta)];
}

struct AngularDecomposition {
  std::vector<double> breakpoints;
  std::vector<std::size_t> N_parts;
  std::vector<double> A_parts;
};

/// Splits N and A over the angular bins [α_i, α_{i+1}) (the last bin wraps).
/// The missed area is cut along the forward tangent rays from W(α_i) to ∂K;
/// these rays never cross, so the parts tile K \ P.
AngularDecomposition decompose(const ConvexBody& body, const HullSummary& hull,
                               std::span<const double> breakpoints);

/// Test for the event that the hull boundary lies in the wet part S_eps.
/// Precomputes the cap offsets once so many hulls can be checked cheaply.
class WetPartTest {
 public:
  WetPartTest(const ConvexBody& body, double eps, std::size_t resolution);
  /// True iff every vertex lies in some grid cap of area ≤ eps.
  bool contains_boundary(const HullSummary& hull) const;

 private:
  std::vector<Point> normals_;
  std::vector<double> levels_;
};

bool boundary_in_wet_part(const ConvexBody& body, const HullSummary& hull, double eps,
                          std::size_t resolution);

}  // namespace hulllab
