#include "hulllab/sample.hpp"
#include "hulllab/polygon.hpp"
#include "hulllab/stats.hpp"

#include "../support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace hulllab;
using std::numbers::pi;

namespace {

ConvexBody unit_square() { return named_body("square"); }

bool same_points(const PointList& a, const PointList& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

}  // namespace

TEST(UniformPoints, EmptyAndDeterministic) {
  EXPECT_TRUE(uniform_points(unit_square(), 0, 1).points.empty());
  const ConvexBody hex = named_body("hexagon");
  const auto a = uniform_points(hex, 500, 42);
  const auto b = uniform_points(hex, 500, 42);
  EXPECT_TRUE(same_points(a.points, b.points));
  EXPECT_FALSE(same_points(a.points, uniform_points(hex, 500, 43).points));
  for (const auto& p : a.points) EXPECT_TRUE(hex.contains(p, 1e-12));
}

TEST(UniformPoints, MomentsInSquare) {
  const std::size_t n = 1'000'000;
  const auto s = uniform_points(unit_square(), n, 7);
  double mx = 0, my = 0;
  for (const auto& p : s.points) {
    mx += p.x();
    my += p.y();
  }
  mx /= n;
  my /= n;
  const double tol = 3 * std::sqrt(1.0 / 12.0) / std::sqrt(static_cast<double>(n));
  EXPECT_NEAR(mx, 0.5, tol);
  EXPECT_NEAR(my, 0.5, tol);
}

TEST(UniformPoints, TriangleCellFrequencies) {
  // Points in the unit right triangle: P(x < 1/2) = 3/4.
  const ConvexBody tri = named_body("triangle");
  const std::size_t n = 200000;
  const auto s = uniform_points(tri, n, 3);
  double hits = 0;
  for (const auto& p : s.points) hits += p.x() < 0.5;
  EXPECT_NEAR(hits / n, 0.75, 3 * std::sqrt(0.75 * 0.25 / n));
}

TEST(PoissonPoints, Examples) {
  EXPECT_TRUE(poisson_points(unit_square(), 0.0, 9).points.empty());
  const int reps = 10000;
  std::vector<double> counts;
  for (int i = 0; i < reps; ++i) counts.push_back(static_cast<double>(poisson_points(unit_square(), 100.0, replicate_seed(1, i)).points.size()));
  const EstimatorReport e = estimate(counts);
  EXPECT_NEAR(e.mean, 100.0, 3 * 10.0 / std::sqrt(reps));
  EXPECT_NEAR(e.variance, 100.0, 3 * 100.0 * std::sqrt(2.0 / reps));

  const ConvexBody two = normalize_area(unit_square(), 2.0);
  const int m = 100000;
  int empty = 0;
  for (int i = 0; i < m; ++i) empty += poisson_points(two, 1.0, replicate_seed(2, i)).points.empty();
  const double p = std::exp(-2.0);
  EXPECT_NEAR(static_cast<double>(empty) / m, p, 3 * std::sqrt(p * (1 - p) / m));
}

TEST(PoissonVariate, MeanAndVarianceAcrossRegimes) {
  for (double mu : {0.5, 5.0, 29.5, 30.5, 250.0, 5000.0}) {
    Xoshiro256 rng(static_cast<std::uint64_t>(mu * 10));
    const int m = 40000;
    std::vector<double> v(m);
    for (double& x : v) x = static_cast<double>(poisson_variate(mu, rng));
    const EstimatorReport e = estimate(v);
    EXPECT_NEAR(e.mean, mu, 4 * std::sqrt(mu / m)) << mu;
    EXPECT_NEAR(e.variance, mu, 4 * e.se_variance) << mu;
  }
}

TEST(ConvexHull, Examples) {
  const PointList sq = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
  EXPECT_EQ(convex_hull(sq).size(), 4u);
  const PointList line = {{0, 0}, {1, 0}, {2, 0}};
  const PointList h = convex_hull(line);
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h[0], Point(0, 0));
  EXPECT_EQ(h[1], Point(2, 0));
  EXPECT_EQ(convex_hull(PointList{{1, 2}}).size(), 1u);
  EXPECT_TRUE(convex_hull(PointList{}).empty());
}

TEST(ConvexHull, MatchesExtremePointOracle) {
  const ConvexBody disk = named_body("disk:256");
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto s = uniform_points(disk, 1000, seed);
    const PointList h = convex_hull(s.points);
    const auto ref = oracle::extreme_points(oracle::from(s.points));
    ASSERT_EQ(h.size(), ref.size());
    for (const auto& r : ref) {
      EXPECT_TRUE(std::any_of(h.begin(), h.end(), [&](const Point& q) { return q.x() == r.x && q.y() == r.y; }));
    }
    EXPECT_GT(signed_area<double>(h), 0.0);
  }
}

TEST(ConvexHull, GridWithCollinearPoints) {
  PointList grid;
  for (int i = 0; i <= 5; ++i)
    for (int j = 0; j <= 5; ++j) grid.emplace_back(i, j);
  EXPECT_EQ(convex_hull(grid).size(), 4u);
  EXPECT_EQ(oracle::extreme_points(oracle::from(grid)).size(), 4u);
}

TEST(Functionals, Examples) {
  const ConvexBody sq = unit_square();
  const PointList three = {{0.1, 0.1}, {0.9, 0.2}, {0.4, 0.8}};
  const HullSummary h3 = functionals(sq, three);
  EXPECT_EQ(h3.N, 3u);
  EXPECT_NEAR(h3.A, 1.0 - std::abs(oracle::area(oracle::from(three))), 1e-15);
  EXPECT_EQ(h3.edge_angles.size(), 3u);
  EXPECT_TRUE(std::is_sorted(h3.edge_angles.begin(), h3.edge_angles.end()));

  const HullSummary h2 = functionals(sq, PointList{{0.1, 0.1}, {0.9, 0.2}});
  EXPECT_EQ(h2.N, 2u);
  EXPECT_EQ(h2.A, 1.0);
  EXPECT_TRUE(h2.edge_angles.empty());

  const HullSummary h0 = functionals(sq, poisson_points(sq, 0.0, 1));
  EXPECT_EQ(h0.N, 0u);
  EXPECT_EQ(h0.A, 1.0);

  try {
    functionals(sq, PointList{{0.5, 0.5}, {1.5, 0.5}, {0.5, 0.7}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PointOutsideBody);
  }
}

TEST(VertexAtAngle, SquareSweep) {
  const HullSummary h = functionals(unit_square(), PointList{{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  // Tangent direction just above 0 (pointing east, hull on the left) rests on
  // the bottom edge's terminal corner side, i.e. touches (1, 0).
  EXPECT_EQ(vertex_at_angle(h, 0.01), Point(1, 0));
  EXPECT_EQ(vertex_at_angle(h, pi / 2 + 0.01), Point(1, 1));
  EXPECT_EQ(vertex_at_angle(h, pi + 0.01), Point(0, 1));
  EXPECT_EQ(vertex_at_angle(h, 3 * pi / 2 + 0.01), Point(0, 0));
  // Exactly at an edge angle: the terminal vertex of that edge.
  EXPECT_EQ(vertex_at_angle(h, 0.0), Point(1, 0));
  EXPECT_EQ(vertex_at_angle(h, pi / 2), Point(1, 1));
}

TEST(VertexAtAngle, SinglePointAndEmpty) {
  const HullSummary one = functionals(unit_square(), PointList{{0.3, 0.6}});
  for (double t : {0.0, 1.0, 4.0}) EXPECT_EQ(vertex_at_angle(one, t), Point(0.3, 0.6));
  const HullSummary none = functionals(unit_square(), PointList{});
  try {
    vertex_at_angle(none, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyHull);
  }
}

TEST(VertexAtAngle, SupportProperty) {
  Xoshiro256 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const ConvexBody b = oracle::random_body(rng);
    const HullSummary h = functionals(b, uniform_points(b, 3 + rng() % 200, rng()));
    for (int j = 0; j < 720; ++j) {
      const double theta = 2 * pi * j / 720.0;
      const Point w = vertex_at_angle(h, theta);
      const Point nu(-std::sin(theta), std::cos(theta));
      for (const auto& v : h.vertices) ASSERT_GE(nu.dot(v - w), -1e-9);
    }
  }
}

TEST(Decompose, SingleBin) {
  const ConvexBody sq = unit_square();
  const HullSummary h = functionals(sq, uniform_points(sq, 50, 1));
  const std::vector<double> bp = {0.0};
  const AngularDecomposition d = decompose(sq, h, bp);
  ASSERT_EQ(d.N_parts.size(), 1u);
  EXPECT_EQ(d.N_parts[0], h.N);
  EXPECT_EQ(d.A_parts[0], h.A);
}

TEST(Decompose, CountsMatchEdgeAngleBins) {
  const ConvexBody sq = unit_square();
  const HullSummary h = functionals(sq, uniform_points(sq, 300, 2));
  const std::vector<double> bp = {0.0, pi};
  const AngularDecomposition d = decompose(sq, h, bp);
  std::size_t lower = 0;
  for (double a : h.edge_angles) lower += a < pi;
  EXPECT_EQ(d.N_parts[0], lower);
  EXPECT_EQ(d.N_parts[0] + d.N_parts[1], h.N);
}

TEST(Decompose, EightBinsTelescope) {
  const ConvexBody sq = unit_square();
  const HullSummary h = functionals(sq, uniform_points(sq, 500, 3));
  std::vector<double> bp;
  for (int i = 0; i < 8; ++i) bp.push_back(2 * pi * i / 8);
  const AngularDecomposition d = decompose(sq, h, bp);
  double sum = 0;
  for (double a : d.A_parts) {
    EXPECT_GE(a, -1e-12);
    sum += a;
  }
  EXPECT_NEAR(sum, h.A, 1e-9);
}

TEST(Decompose, RandomBreakpointsTelescope) {
  Xoshiro256 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const ConvexBody b = oracle::random_body(rng);
    const HullSummary h = functionals(b, uniform_points(b, 3 + rng() % 400, rng()));
    if (h.N < 3) continue;
    std::vector<double> bp(1 + rng() % 12);
    for (double& a : bp) a = 2 * pi * rng.uniform();
    if (trial % 5 == 0 && !h.edge_angles.empty()) bp[0] = h.edge_angles[rng() % h.N];
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    const AngularDecomposition d = decompose(b, h, bp);
    std::size_t n = 0;
    for (auto c : d.N_parts) n += c;
    EXPECT_EQ(n, h.N);
    double a = 0;
    for (double v : d.A_parts) {
      EXPECT_GE(v, -1e-9 * b.area());
      a += v;
    }
    EXPECT_NEAR(a, h.A, 1e-9 * b.area());
  }
}

TEST(Decompose, PartAreaMatchesRegionSampling) {
  // A missed point q lies on exactly one forward tangent ray: the one leaving
  // the hull vertex v with the whole hull on the left of v -> q. Its angle
  // picks the bin. Hit-or-miss over K then estimates every part.
  const ConvexBody sq = unit_square();
  const HullSummary h = functionals(sq, uniform_points(sq, 12, 17));
  ASSERT_GE(h.N, 3u);
  const std::vector<double> bp = {0.5, 2.5, 4.5};
  const AngularDecomposition d = decompose(sq, h, bp);

  auto bin_of = [&](double phi) {
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
      if (phi >= bp[i] && phi < bp[i + 1]) return i;
    }
    return bp.size() - 1;
  };
  Xoshiro256 rng(23);
  const int m = 400000;
  std::vector<double> hits(bp.size(), 0.0);
  for (int k = 0; k < m; ++k) {
    const Point q(rng.uniform(), rng.uniform());
    for (const auto& v : h.vertices) {
      const Point dir = q - v;
      bool left = true;
      for (const auto& w : h.vertices) left = left && dir.x() * (w - v).y() - dir.y() * (w - v).x() >= 0;
      if (left && dir.norm() > 0) {
        hits[bin_of(wrap_angle(std::atan2(dir.y(), dir.x())))] += 1;
        break;
      }
    }
  }
  for (std::size_t i = 0; i < bp.size(); ++i) {
    const double p = hits[i] / m;
    EXPECT_NEAR(d.A_parts[i], p, 4 * std::sqrt(p * (1 - p) / m)) << i;
  }
}

TEST(Decompose, Errors) {
  const ConvexBody sq = unit_square();
  const HullSummary two = functionals(sq, PointList{{0.2, 0.2}, {0.7, 0.3}});
  const std::vector<double> bp = {0.0, 1.0};
  try {
    decompose(sq, two, bp);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateHull);
  }
  const std::vector<double> one = {0.0};
  EXPECT_EQ(decompose(sq, two, one).A_parts[0], 1.0);
}

TEST(BoundaryInWetPart, Examples) {
  const ConvexBody sq = unit_square();
  const HullSummary h = functionals(sq, uniform_points(sq, 40, 5));
  EXPECT_TRUE(boundary_in_wet_part(sq, h, 0.5, 360));
  EXPECT_FALSE(boundary_in_wet_part(sq, h, 0.0, 360));
  EXPECT_TRUE(boundary_in_wet_part(sq, functionals(sq, PointList{}), 0.0, 360));
}

TEST(BoundaryInWetPart, LargeSampleAlmostSure) {
  const ConvexBody sq = unit_square();
  const WetPartTest test(sq, 0.05, 360);
  int hits = 0;
  const int reps = 1000;
  for (int i = 0; i < reps; ++i) {
    hits += test.contains_boundary(functionals(sq, uniform_points(sq, 2000, replicate_seed(77, i))));
  }
  EXPECT_GE(hits, 0.99 * reps);
}

TEST(Efron, ExactAnchorAtThreePoints) {
  const ConvexBody hex = named_body("hexagon");
  for (std::uint64_t s = 0; s < 200; ++s) {
    EXPECT_EQ(functionals(hex, uniform_points(hex, 3, s)).N, 3u);
    EXPECT_EQ(functionals(hex, uniform_points(hex, 2, s)).A, hex.area());
  }
}

TEST(Efron, UniformIdentity) {
  // E[N(P_n)] = n E[A(P_{n-1})] / Area(K), on a body of area n.
  const ConvexBody base = named_body("triangle");
  for (double n : {4.0, 10.0, 50.0}) {
    const ConvexBody body = normalize_area(base, n);
    const auto pn = simulate(body, Model::Uniform, n, 20000, 100, 1);
    const auto pm = simulate(body, Model::Uniform, n - 1, 20000, 200, 1);
    std::vector<double> N, A;
    for (const auto& r : pn) N.push_back(static_cast<double>(r.N));
    for (const auto& r : pm) A.push_back(r.A);
    const EstimatorReport en = estimate(N), ea = estimate(A);
    EXPECT_LE(std::abs(en.mean - ea.mean), 3 * std::hypot(en.se_mean, ea.se_mean)) << n;
  }
}

TEST(Efron, PoissonIdentity) {
  const ConvexBody body = normalize_area(named_body("hexagon"), 60.0);
  const auto rs = simulate(body, Model::Poisson, 60.0, 20000, 300, 1);
  std::vector<double> N, A;
  for (const auto& r : rs) {
    N.push_back(static_cast<double>(r.N));
    A.push_back(r.A);
  }
  const EstimatorReport en = estimate(N), ea = estimate(A);
  EXPECT_LE(std::abs(en.mean - ea.mean), 3 * std::hypot(en.se_mean, ea.se_mean));
}

TEST(Simulate, IndependentOfWorkerCount) {
  const ConvexBody body = normalize_area(named_body("disk:256"), 200.0);
  const auto a = simulate(body, Model::Poisson, 200.0, 300, 5, 1);
  const auto b = simulate(body, Model::Poisson, 200.0, 300, 5, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].N, b[i].N);
    EXPECT_EQ(a[i].A, b[i].A);
    EXPECT_EQ(a[i].seed, replicate_seed(5, i));
  }
}
