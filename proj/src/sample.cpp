#include "hulllab/sample.hpp"

#include "hulllab/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace hulllab {

std::string_view to_string(Model model) { return model == Model::Poisson ? "poisson" : "uniform"; }

namespace {

double edge_angle(const Point& from, const Point& to) {
  const Point d = to - from;
  return wrap_angle(std::atan2(d.y(), d.x()));
}

// Fan triangulation from the centroid with cumulative areas for the
// area-weighted triangle choice.
struct Fan {
  explicit Fan(const ConvexBody& body) : center(body.centroid()), vertices(body.vertices()) {
    const std::size_t m = vertices.size();
    cumulative.resize(m);
    double acc = 0;
    for (std::size_t i = 0; i < m; ++i) {
      acc += 0.5 * cross<double>(vertices[i] - center, vertices[(i + 1) % m] - center);
      cumulative[i] = acc;
    }
  }

  Point draw(Xoshiro256& rng) const {
    const double pick = rng.uniform() * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                                 vertices.size() - 1);
    double s = rng.uniform();
    double t = rng.uniform();
    if (s + t > 1.0) {
      s = 1.0 - s;
      t = 1.0 - t;
    }
    const Point& a = vertices[i];
    const Point& b = vertices[(i + 1) % vertices.size()];
    return center + s * (a - center) + t * (b - center);
  }

  Point center;
  const PointList& vertices;
  std::vector<double> cumulative;
};

std::uint64_t poisson_inversion(double mean, Xoshiro256& rng) {
  const double u = rng.uniform();
  double pmf = std::exp(-mean);
  double cdf = pmf;
  std::uint64_t k = 0;
  // The cap guards against cdf stalling just below u through rounding.
  while (u > cdf && k < 1000) {
    ++k;
    pmf *= mean / static_cast<double>(k);
    cdf += pmf;
  }
  return k;
}

// W. Hörmann, "The transformed rejection method for generating Poisson random
// variables", Insurance: Mathematics and Economics 12 (1993).
std::uint64_t poisson_ptrd(double mean, Xoshiro256& rng) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  while (true) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mean + k * loglam - std::lgamma(k + 1.0)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

}  // namespace

void append_uniform_points(const ConvexBody& body, std::size_t count, Xoshiro256& rng, PointList& out) {
  if (count == 0) return;
  const Fan fan(body);
  out.reserve(out.size() + count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(fan.draw(rng));
}

std::uint64_t poisson_variate(double mean, Xoshiro256& rng) {
  if (!(mean >= 0) || !std::isfinite(mean)) throw Error(ErrorCode::DomainError, "Poisson mean must be finite and >= 0");
  if (mean == 0) return 0;
  return mean <= 30.0 ? poisson_inversion(mean, rng) : poisson_ptrd(mean, rng);
}

PointSample uniform_points(const ConvexBody& body, std::size_t n, std::uint64_t seed) {
  PointSample sample;
  sample.model = Model::Uniform;
  sample.parameter = static_cast<double>(n);
  sample.seed = seed;
  Xoshiro256 rng(seed);
  append_uniform_points(body, n, rng, sample.points);
  return sample;
}

PointSample poisson_points(const ConvexBody& body, double lambda, std::uint64_t seed) {
  if (!(lambda >= 0)) throw Error(ErrorCode::DomainError, "intensity must be >= 0");
  PointSample sample;
  sample.model = Model::Poisson;
  sample.parameter = lambda;
  sample.seed = seed;
  Xoshiro256 rng(seed);
  const auto count = poisson_variate(lambda * body.area(), rng);
  append_uniform_points(body, static_cast<std::size_t>(count), rng, sample.points);
  return sample;
}

PointList convex_hull(std::span<const Point> points) {
  PointList pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;

  PointList hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && orient<double>(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
    while (k >= lower && orient<double>(hull[k - 2], hull[k - 1], *it) <= 0) --k;
    hull[k++] = *it;
  }
  hull.resize(k - 1);
  return hull;
}

HullSummary functionals(const ConvexBody& body, std::span<const Point> points) {
  HullSummary s;
  s.vertices = convex_hull(points);
  const double tol = 1e-9 * std::max(1.0, std::sqrt(body.area()));
  for (const auto& v : s.vertices) {
    if (body.outside_distance(v) > tol) {
      std::ostringstream msg;
      msg << "sample point (" << v.x() << ", " << v.y() << ") outside the body";
      throw Error(ErrorCode::PointOutsideBody, msg.str());
    }
  }
  s.N = s.vertices.size();
  if (s.N < 3) {
    s.A = body.area();
    return s;
  }
  s.A = std::max(0.0, body.area() - signed_area<double>(s.vertices));

  s.edge_angles.resize(s.N);
  for (std::size_t i = 0; i < s.N; ++i) s.edge_angles[i] = edge_angle(s.vertices[i], s.vertices[(i + 1) % s.N]);
  const auto first = std::min_element(s.edge_angles.begin(), s.edge_angles.end()) - s.edge_angles.begin();
  std::rotate(s.vertices.begin(), s.vertices.begin() + first, s.vertices.end());
  std::rotate(s.edge_angles.begin(), s.edge_angles.begin() + first, s.edge_angles.end());
  return s;
}

std::size_t vertex_index_at_angle(const HullSummary& hull, double theta) {
  const std::size_t n = hull.vertices.size();
  if (n == 0) throw Error(ErrorCode::EmptyHull, "W(theta) is undefined for an empty hull");
  if (n == 1) return 0;
  const double t = wrap_angle(theta);

  std::vector<double> two_gon;
  std::size_t offset = 0;
  const std::vector<double>* angles = &hull.edge_angles;
  if (n == 2) {
    // A segment has the two directed edges a->b and b->a.
    const double ab = edge_angle(hull.vertices[0], hull.vertices[1]);
    const double ba = edge_angle(hull.vertices[1], hull.vertices[0]);
    if (ab <= ba) {
      two_gon = {ab, ba};
    } else {
      two_gon = {ba, ab};
      offset = 1;
    }
    angles = &two_gon;
  }
  auto it = std::upper_bound(angles->begin(), angles->end(), t);
  const std::size_t last_edge = it == angles->begin() ? n - 1 : static_cast<std::size_t>(it - angles->begin()) - 1;
  return (last_edge + 1 + offset) % n;
}

AngularDecomposition decompose(const ConvexBody& body, const HullSummary& hull,
                               std::span<const double> breakpoints) {
  const std::size_t L = breakpoints.size();
  if (L == 0) throw Error(ErrorCode::DomainError, "at least one breakpoint is required");
  for (std::size_t i = 0; i < L; ++i) {
    if (!(breakpoints[i] >= 0 && breakpoints[i] < kTwoPi) || (i > 0 && !(breakpoints[i] > breakpoints[i - 1]))) {
      throw Error(ErrorCode::DomainError, "breakpoints must be strictly increasing in [0, 2*pi)");
    }
  }
  AngularDecomposition out;
  out.breakpoints.assign(breakpoints.begin(), breakpoints.end());
  if (L == 1) {
    out.N_parts = {hull.N};
    out.A_parts = {hull.A};
    return out;
  }
  if (hull.N < 3) throw Error(ErrorCode::DegenerateHull, "multi-bin decomposition needs N >= 3");

  // Bin of an angle under the half-open convention [α_i, α_{i+1}).
  auto bin_of = [&](double a) {
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), a);
    return it == breakpoints.begin() ? L - 1 : static_cast<std::size_t>(it - breakpoints.begin()) - 1;
  };
  // Bin under (α_i, α_{i+1}], which matches the W(θ) tie rule.
  auto closed_bin_of = [&](double a) {
    auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), a);
    return it == breakpoints.begin() ? L - 1 : static_cast<std::size_t>(it - breakpoints.begin()) - 1;
  };

  out.N_parts.assign(L, 0);
  std::vector<std::size_t> chain_steps(L, 0);
  for (double a : hull.edge_angles) {
    ++out.N_parts[bin_of(a)];
    ++chain_steps[closed_bin_of(a)];
  }

  const auto& kv = body.vertices();
  const std::size_t m = kv.size();
  const std::size_t n = hull.N;
  std::vector<std::size_t> w(L);
  std::vector<RayExit> exits(L);
  for (std::size_t i = 0; i < L; ++i) {
    w[i] = vertex_index_at_angle(hull, breakpoints[i]);
    exits[i] = body.ray_exit(hull.vertices[w[i]], direction(breakpoints[i]));
  }

  out.A_parts.resize(L);
  PointList region;
  for (std::size_t i = 0; i < L; ++i) {
    const std::size_t j = (i + 1) % L;
    region.clear();
    region.push_back(hull.vertices[w[i]]);
    region.push_back(exits[i].point);
    std::size_t arc = (exits[j].edge + m - exits[i].edge) % m;
    if (arc == 0 && exits[j].edge_param < exits[i].edge_param) arc = m;
    for (std::size_t s = 1; s <= arc; ++s) region.push_back(kv[(exits[i].edge + s) % m]);
    region.push_back(exits[j].point);
    // Hull chain W(α_i) -> W(α_{i+1}) traversed backwards.
    for (std::size_t s = chain_steps[i]; s > 0; --s) region.push_back(hull.vertices[(w[i] + s) % n]);
    out.A_parts[i] = signed_area<double>(region);
  }
  return out;
}

WetPartTest::WetPartTest(const ConvexBody& body, double eps, std::size_t resolution) {
  if (eps < 0) throw Error(ErrorCode::DomainError, "eps must be >= 0");
  if (resolution == 0) throw Error(ErrorCode::DomainError, "resolution must be positive");
  normals_.reserve(resolution);
  levels_.reserve(resolution);
  for (std::size_t j = 0; j < resolution; ++j) {
    const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(resolution);
    const Point nu = inward_normal(theta);
    normals_.push_back(nu);
    levels_.push_back(body.support_min(nu) + cap_at_area(body, theta, eps).offset);
  }
}

bool WetPartTest::contains_boundary(const HullSummary& hull) const {
  for (const auto& v : hull.vertices) {
    bool covered = false;
    for (std::size_t j = 0; j < normals_.size() && !covered; ++j) covered = normals_[j].dot(v) <= levels_[j];
    if (!covered) return false;
  }
  return true;
}

bool boundary_in_wet_part(const ConvexBody& body, const HullSummary& hull, double eps, std::size_t resolution) {
  return WetPartTest(body, eps, resolution).contains_boundary(hull);
}

}  // namespace hulllab
