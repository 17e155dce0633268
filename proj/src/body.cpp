#include "hulllab/body.hpp"

#include "hulllab/polygon.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace hulllab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonConvexInput: return "NonConvexInput";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::PointOutsideBody: return "PointOutsideBody";
    case ErrorCode::AreaOutOfRange: return "AreaOutOfRange";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::EmptyHull: return "EmptyHull";
    case ErrorCode::DegenerateHull: return "DegenerateHull";
    case ErrorCode::NonconvergentQuadrature: return "NonconvergentQuadrature";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::AllHullsEmpty: return "AllHullsEmpty";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

constexpr double kCoincident = 1e-12;
constexpr double kCollinear = 1e-12;
constexpr double kOutsideTol = 1e-9;

double length_scale(const ConvexBody& body) { return std::sqrt(body.area()); }

void require_inside(const ConvexBody& body, const Point& p) {
  const double d = body.outside_distance(p);
  if (d > kOutsideTol * std::max(1.0, length_scale(body))) {
    std::ostringstream msg;
    msg << "point (" << p.x() << ", " << p.y() << ") lies " << d << " outside the body";
    throw Error(ErrorCode::PointOutsideBody, msg.str());
  }
}

double clipped_area(const PointList& poly) { return polygon_area<double>(poly); }

}  // namespace

ConvexBody make_body(std::span<const Point> input) {
  PointList pts;
  pts.reserve(input.size());
  for (const auto& p : input) {
    if (!std::isfinite(p.x()) || !std::isfinite(p.y())) {
      throw Error(ErrorCode::DegenerateInput, "non-finite vertex coordinate");
    }
    if (!pts.empty() && (p - pts.back()).norm() <= kCoincident) continue;
    pts.push_back(p);
  }
  while (pts.size() > 1 && (pts.front() - pts.back()).norm() <= kCoincident) pts.pop_back();
  if (pts.size() < 3) throw Error(ErrorCode::DegenerateInput, "fewer than 3 distinct vertices");

  const double raw_area = signed_area<double>(pts);
  if (std::abs(raw_area) < 1e-12) throw Error(ErrorCode::DegenerateInput, "zero area");
  if (raw_area < 0) std::reverse(pts.begin(), pts.end());

  // Drop collinear vertices until every turn is strictly left.
  bool changed = true;
  while (changed && pts.size() >= 3) {
    changed = false;
    const std::size_t m = pts.size();
    for (std::size_t i = 0; i < m; ++i) {
      const Point& prev = pts[(i + m - 1) % m];
      const Point& cur = pts[i];
      const Point& next = pts[(i + 1) % m];
      const Point e1 = cur - prev;
      const Point e2 = next - cur;
      const double c = cross<double>(e1, e2);
      const double scale = e1.norm() * e2.norm();
      if (std::abs(c) <= kCollinear * scale) {
        if (e1.dot(e2) < 0) throw Error(ErrorCode::NonConvexInput, "polygon folds back on itself");
        pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
      if (c < 0) throw Error(ErrorCode::NonConvexInput, "right turn at a vertex");
    }
  }
  if (pts.size() < 3) throw Error(ErrorCode::DegenerateInput, "collinear vertices");

  // All left turns but winding more than once (a star polygon) is not convex.
  double turning = 0;
  const std::size_t m = pts.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Point e1 = pts[i] - pts[(i + m - 1) % m];
    const Point e2 = pts[(i + 1) % m] - pts[i];
    turning += std::atan2(cross<double>(e1, e2), e1.dot(e2));
  }
  if (std::abs(turning - kTwoPi) > 1e-6) {
    throw Error(ErrorCode::NonConvexInput, "boundary winds more than once");
  }

  ConvexBody body;
  body.vertices_ = std::move(pts);
  body.area_ = signed_area<double>(body.vertices_);
  if (body.area_ < 1e-12) throw Error(ErrorCode::DegenerateInput, "zero area");
  body.centroid_ = polygon_centroid<double>(body.vertices_);
  body.normals_.reserve(m);
  body.levels_.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Point e = body.vertices_[(i + 1) % m] - body.vertices_[i];
    const Point n = Point(e.y(), -e.x()).normalized();
    body.normals_.push_back(n);
    body.levels_.push_back(n.dot(body.vertices_[i]));
  }
  return body;
}

double ConvexBody::outside_distance(const Point& p) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < normals_.size(); ++j) {
    worst = std::max(worst, normals_[j].dot(p) - levels_[j]);
  }
  return worst;
}

double ConvexBody::support_min(const Point& normal) const {
  return extent<double>(vertices_, normal).first;
}

RayExit ConvexBody::ray_exit(const Point& origin, const Point& dir) const {
  RayExit out;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < normals_.size(); ++j) {
    const double speed = normals_[j].dot(dir);
    if (speed <= 0) continue;
    const double s = std::max(0.0, (levels_[j] - normals_[j].dot(origin)) / speed);
    if (s < best) {
      best = s;
      out.edge = j;
    }
  }
  out.point = origin + best * dir;
  const Point& a = vertices_[out.edge];
  const Point e = vertices_[(out.edge + 1) % vertices_.size()] - a;
  out.edge_param = std::clamp((out.point - a).dot(e) / e.squaredNorm(), 0.0, 1.0);
  return out;
}

ConvexBody normalize_area(const ConvexBody& body, double target) {
  if (!(target > 0)) throw Error(ErrorCode::DomainError, "target area must be positive");
  const double s = std::sqrt(target / body.area());
  if (s == 1.0) return body;
  PointList scaled;
  scaled.reserve(body.size());
  for (const auto& v : body.vertices()) scaled.push_back(body.centroid() + s * (v - body.centroid()));
  return make_body(scaled);
}

// ---------------------------------------------------------------------------
// Height profile

namespace {

struct ChainPoint {
  double depth;
  double tangential;
};

// Walks the boundary from the lowest vertex to the highest in the given
// direction, keeping depth strictly increasing. At equal depth the extreme
// tangential coordinate wins (max for the right chain, min for the left).
std::vector<ChainPoint> walk_chain(const std::vector<double>& depth, const std::vector<double>& tang,
                                   std::size_t start, std::size_t stop, int step, bool keep_max) {
  const std::size_t m = depth.size();
  std::vector<ChainPoint> chain;
  std::size_t k = start;
  while (true) {
    const ChainPoint p{depth[k], tang[k]};
    if (!chain.empty() && p.depth <= chain.back().depth) {
      chain.back().tangential = keep_max ? std::max(chain.back().tangential, p.tangential)
                                         : std::min(chain.back().tangential, p.tangential);
    } else {
      chain.push_back(p);
    }
    if (k == stop) break;
    k = step > 0 ? (k + 1) % m : (k + m - 1) % m;
  }
  return chain;
}

double interpolate(const std::vector<ChainPoint>& chain, double d) {
  if (d <= chain.front().depth) return chain.front().tangential;
  if (d >= chain.back().depth) return chain.back().tangential;
  auto it = std::upper_bound(chain.begin(), chain.end(), d,
                             [](double v, const ChainPoint& c) { return v < c.depth; });
  const ChainPoint& b = *it;
  const ChainPoint& a = *(it - 1);
  const double w = (d - a.depth) / (b.depth - a.depth);
  return a.tangential + w * (b.tangential - a.tangential);
}

}  // namespace

HeightProfile::HeightProfile(const ConvexBody& body, double theta)
    : theta_(theta), along_(direction(theta)), normal_(inward_normal(theta)) {
  const auto& verts = body.vertices();
  const std::size_t m = verts.size();
  std::vector<double> depth(m), tang(m);
  for (std::size_t i = 0; i < m; ++i) {
    depth[i] = normal_.dot(verts[i]);
    tang[i] = along_.dot(verts[i]);
  }
  const auto lowest = static_cast<std::size_t>(std::min_element(depth.begin(), depth.end()) - depth.begin());
  const auto highest = static_cast<std::size_t>(std::max_element(depth.begin(), depth.end()) - depth.begin());
  base_ = depth[lowest];
  for (auto& d : depth) d -= base_;
  depth[lowest] = 0.0;

  // Counterclockwise from the bottom runs up the +θ side of every chord.
  const auto right = walk_chain(depth, tang, lowest, highest, +1, true);
  const auto left = walk_chain(depth, tang, lowest, highest, -1, false);

  depths_.reserve(right.size() + left.size());
  for (const auto& c : right) depths_.push_back(c.depth);
  for (const auto& c : left) depths_.push_back(c.depth);
  std::sort(depths_.begin(), depths_.end());
  depths_.erase(std::unique(depths_.begin(), depths_.end()), depths_.end());
  const double top = std::max(right.back().depth, left.back().depth);
  while (depths_.size() > 1 && depths_.back() > top) depths_.pop_back();
  if (depths_.size() < 2) depths_.push_back(top);

  lo_.resize(depths_.size());
  hi_.resize(depths_.size());
  cumulative_.resize(depths_.size());
  for (std::size_t k = 0; k < depths_.size(); ++k) {
    lo_[k] = interpolate(left, depths_[k]);
    hi_[k] = std::max(interpolate(right, depths_[k]), lo_[k]);
  }
  cumulative_[0] = 0.0;
  for (std::size_t k = 0; k + 1 < depths_.size(); ++k) {
    const double h0 = hi_[k] - lo_[k];
    const double h1 = hi_[k + 1] - lo_[k + 1];
    cumulative_[k + 1] = cumulative_[k] + 0.5 * (h0 + h1) * (depths_[k + 1] - depths_[k]);
  }
}

std::size_t HeightProfile::piece(double depth) const {
  auto it = std::upper_bound(depths_.begin(), depths_.end(), depth);
  std::size_t k = it == depths_.begin() ? 0 : static_cast<std::size_t>(it - depths_.begin()) - 1;
  return std::min(k, depths_.size() - 2);
}

double HeightProfile::h(double depth) const {
  const auto [lo, hi] = chord_extent(depth);
  return hi - lo;
}

double HeightProfile::slope(double depth) const {
  const std::size_t k = piece(std::clamp(depth, 0.0, width()));
  const double h0 = hi_[k] - lo_[k];
  const double h1 = hi_[k + 1] - lo_[k + 1];
  return (h1 - h0) / (depths_[k + 1] - depths_[k]);
}

std::pair<double, double> HeightProfile::chord_extent(double depth) const {
  const double d = std::clamp(depth, 0.0, width());
  const std::size_t k = piece(d);
  const double w = (d - depths_[k]) / (depths_[k + 1] - depths_[k]);
  return {lo_[k] + w * (lo_[k + 1] - lo_[k]), hi_[k] + w * (hi_[k + 1] - hi_[k])};
}

double HeightProfile::cumulative(double depth) const {
  if (depth <= 0) return 0.0;
  if (depth >= width()) return total_area();
  const std::size_t k = piece(depth);
  const double delta = depth - depths_[k];
  const double h0 = hi_[k] - lo_[k];
  const double s = slope(depths_[k]);
  return cumulative_[k] + h0 * delta + 0.5 * s * delta * delta;
}

double HeightProfile::depth_at_area(double r) const {
  if (r <= 0) return 0.0;
  if (r >= total_area()) return width();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
  std::size_t k = static_cast<std::size_t>(it - cumulative_.begin()) - 1;
  k = std::min(k, depths_.size() - 2);
  const double rem = r - cumulative_[k];
  const double h0 = hi_[k] - lo_[k];
  const double s = slope(depths_[k]);
  // Root of h0·δ + s·δ²/2 = rem in the cancellation-free form.
  const double disc = std::max(0.0, h0 * h0 + 2.0 * s * rem);
  const double denom = h0 + std::sqrt(disc);
  double delta = denom > 0 ? 2.0 * rem / denom : 0.0;
  delta = std::clamp(delta, 0.0, depths_[k + 1] - depths_[k]);
  return depths_[k] + delta;
}

Point HeightProfile::to_plane(double depth, double tangential) const {
  return tangential * along_ + (base_ + depth) * normal_;
}

// ---------------------------------------------------------------------------
// Caps

Cap cap_at_offset(const ConvexBody& body, double theta, double t) {
  const Point nu = inward_normal(theta);
  const Point u = direction(theta);
  const auto [base, top] = extent<double>(body.vertices(), nu);
  const double width = top - base;
  Cap cap;
  cap.theta = wrap_angle(theta);
  cap.offset = std::clamp(t, 0.0, width);

  auto extreme_vertex = [&](bool lowest) {
    const auto& vs = body.vertices();
    return *std::min_element(vs.begin(), vs.end(), [&](const Point& a, const Point& b) {
      return lowest ? nu.dot(a) < nu.dot(b) : nu.dot(a) > nu.dot(b);
    });
  };

  if (cap.offset <= 0) {
    cap.chord_start = cap.chord_end = extreme_vertex(true);
    return cap;
  }
  if (cap.offset >= width) {
    cap.area = body.area();
    cap.chord_start = cap.chord_end = extreme_vertex(false);
    cap.cut_polygon = body.vertices();
    return cap;
  }

  const double level = base + cap.offset;
  cap.cut_polygon = clip_halfplane<double>(body.vertices(), nu, level);
  cap.area = clipped_area(cap.cut_polygon);

  const double tol = 1e-10 * (1.0 + std::abs(level) + width);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& q : cap.cut_polygon) {
    if (std::abs(nu.dot(q) - level) > tol) continue;
    const double s = u.dot(q);
    if (s < lo) {
      lo = s;
      cap.chord_start = q;
    }
    if (s > hi) {
      hi = s;
      cap.chord_end = q;
    }
  }
  cap.chord = hi > lo ? hi - lo : 0.0;
  return cap;
}

double cap_area(const ConvexBody& body, const Point& p, double theta) {
  require_inside(body, p);
  const HeightProfile profile(body, theta);
  return profile.cumulative(inward_normal(theta).dot(p) - profile.base());
}

Cap cap_at_area(const ConvexBody& body, double theta, double r) {
  if (!(r >= 0) || r > body.area() * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "requested cap area " << r << " outside [0, " << body.area() << "]";
    throw Error(ErrorCode::AreaOutOfRange, msg.str());
  }
  const Point nu = inward_normal(theta);
  const auto [base, top] = extent<double>(body.vertices(), nu);
  if (r == 0) return cap_at_offset(body, theta, 0.0);
  if (r >= body.area()) return cap_at_offset(body, theta, top - base);

  double lo = 0.0;
  double hi = top - base;
  for (int iter = 0; iter < 60 && hi - lo > 1e-12; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double a = clipped_area(clip_halfplane<double>(body.vertices(), nu, base + mid));
    (a < r ? lo : hi) = mid;
  }
  return cap_at_offset(body, theta, 0.5 * (lo + hi));
}

double f_of(const ConvexBody& body, double x, double theta) {
  if (!(x > 0) || x > 1) throw Error(ErrorCode::DomainError, "f_of needs 0 < x <= 1");
  if (x == 1.0) return 0.0;
  const double r = -std::log(x);
  if (r >= body.area()) return 0.0;
  const HeightProfile profile(body, theta);
  return profile.h(profile.depth_at_area(r));
}

MonotonicityReport check_f_monotonicity(const ConvexBody& body, double theta, std::size_t grid_size) {
  if (grid_size < 2) throw Error(ErrorCode::DomainError, "grid_size must be at least 2");
  const HeightProfile profile(body, theta);
  const double total = body.area();
  MonotonicityReport report;
  report.max_violation = -std::numeric_limits<double>::infinity();

  // Geometric grid in x from 1 down toward exp(-Area) is uniform in r = -log x.
  double previous = 0;
  for (std::size_t j = 0; j < grid_size; ++j) {
    const double r = total * static_cast<double>(j + 1) / static_cast<double>(grid_size + 1);
    const double g = profile.h(profile.depth_at_area(r)) / std::sqrt(r);
    if (j > 0) report.max_violation = std::max(report.max_violation, g - previous);
    previous = g;
  }

  report.min_growth_margin = std::numeric_limits<double>::infinity();
  const double width = profile.width();
  for (std::size_t k = 0; k < grid_size; ++k) {
    const double l = width * static_cast<double>(k) / static_cast<double>(grid_size);
    const double h = profile.h(l);
    const double margin = h * h - 2.0 * profile.slope(l) * profile.cumulative(l);
    report.min_growth_margin = std::min(report.min_growth_margin, margin);
  }
  return report;
}

CapCoordinates cap_coordinates(const ConvexBody& body, const Point& p, double theta) {
  require_inside(body, p);
  const HeightProfile profile(body, theta);
  const double depth = std::clamp(inward_normal(theta).dot(p) - profile.base(), 0.0, profile.width());
  CapCoordinates c;
  c.x = std::exp(-profile.cumulative(depth));
  const auto [lo, hi] = profile.chord_extent(depth);
  const double chord = hi - lo;
  // Zero chord means p is a support vertex; y = 0 by convention.
  c.y = chord > 0 ? std::clamp((hi - direction(theta).dot(p)) / chord, 0.0, 1.0) : 0.0;
  return c;
}

Point point_from_cap_coordinates(const ConvexBody& body, const CapCoordinates& c, double theta) {
  if (!(c.x > 0) || c.x > 1 || c.y < 0 || c.y > 1) {
    throw Error(ErrorCode::DomainError, "cap coordinates outside (0,1] x [0,1]");
  }
  const HeightProfile profile(body, theta);
  const double depth = profile.depth_at_area(-std::log(c.x));
  const auto [lo, hi] = profile.chord_extent(depth);
  return profile.to_plane(depth, hi - c.y * (hi - lo));
}

double wet_part_area(const ConvexBody& body, double eps, std::size_t angular_resolution) {
  if (eps < 0 || eps > 0.5 * body.area() * (1.0 + 1e-12)) {
    throw Error(ErrorCode::DomainError, "eps must lie in [0, Area/2]");
  }
  if (angular_resolution < 8) throw Error(ErrorCode::DomainError, "angular_resolution must be >= 8");
  if (eps == 0) return 0.0;

  PointList floating = body.vertices();
  for (std::size_t j = 0; j < angular_resolution && !floating.empty(); ++j) {
    const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(angular_resolution);
    const Point nu = inward_normal(theta);
    const Cap cap = cap_at_area(body, theta, eps);
    const double level = body.support_min(nu) + cap.offset;
    floating = clip_halfplane<double>(floating, Point(-nu), -level);
  }
  const double kept = floating.size() >= 3 ? clipped_area(floating) : 0.0;
  if (kept <= 0 && eps < 0.25 * body.area()) {
    throw Error(ErrorCode::ResolutionTooCoarse,
                "floating body vanished at eps < Area/4; refine the angular grid");
  }
  return std::clamp(body.area() - kept, 0.0, body.area());
}

double cap_union_area(const ConvexBody& body, const Point& p, double theta, const Point& q, double psi) {
  require_inside(body, p);
  require_inside(body, q);
  const Point n1 = inward_normal(theta);
  const Point n2 = inward_normal(psi);
  const PointList first = clip_halfplane<double>(body.vertices(), n1, n1.dot(p));
  const PointList second = clip_halfplane<double>(body.vertices(), n2, n2.dot(q));
  const PointList both = clip_halfplane<double>(first, n2, n2.dot(q));
  const double a1 = clipped_area(first);
  const double a2 = clipped_area(second);
  return std::max({a1 + a2 - clipped_area(both), a1, a2});
}

// ---------------------------------------------------------------------------
// Named bodies and body files

namespace {

PointList regular_polygon(std::size_t m) {
  PointList pts;
  pts.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double a = kTwoPi * static_cast<double>(k) / static_cast<double>(m);
    pts.emplace_back(std::cos(a), std::sin(a));
  }
  return pts;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  if (text.empty()) return false;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool is_named(std::string_view name) {
  return name == "square" || name == "triangle" || name == "hexagon" || name.starts_with("disk:") ||
         name.starts_with("quadrant-proxy:");
}

}  // namespace

ConvexBody named_body(std::string_view name) {
  if (name == "square") return make_body({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  if (name == "triangle") return make_body({{0, 0}, {1, 0}, {0, 1}});
  if (name == "hexagon") return make_body(regular_polygon(6));
  if (name.starts_with("disk:")) {
    std::size_t m = 0;
    if (!parse_number(name.substr(5), m) || m < 3) {
      throw Error(ErrorCode::ConfigError, "disk:<m> needs an integer m >= 3");
    }
    return make_body(regular_polygon(m));
  }
  if (name.starts_with("quadrant-proxy:")) {
    double side = 0;
    if (!parse_number(name.substr(15), side) || !(side > 0)) {
      throw Error(ErrorCode::ConfigError, "quadrant-proxy:<side> needs a positive side");
    }
    return make_body({{0, 0}, {side, 0}, {0, side}});
  }
  throw Error(ErrorCode::ConfigError, "unknown body name '" + std::string(name) + "'");
}

ConvexBody read_body_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open body file " + path.string());
  long long m = 0;
  if (!(in >> m) || m < 3) throw Error(ErrorCode::ParseError, "body file must start with a vertex count >= 3");
  PointList pts;
  pts.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    double x = 0, y = 0;
    if (!(in >> x >> y)) {
      throw Error(ErrorCode::ParseError, "body file ended before vertex " + std::to_string(i + 1));
    }
    pts.emplace_back(x, y);
  }
  std::string rest;
  if (in >> rest) throw Error(ErrorCode::ParseError, "trailing content in body file: '" + rest + "'");
  try {
    return make_body(pts);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

ConvexBody load_body(std::string_view name_or_path) {
  if (is_named(name_or_path)) return named_body(name_or_path);
  return read_body_file(std::filesystem::path(std::string(name_or_path)));
}

}  // namespace hulllab
