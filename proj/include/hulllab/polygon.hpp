#pragma once

// Scalar-generic planar polygon kernels shared by the body and sample modules.

#include "hulllab/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace hulllab {

template <typename Scalar>
inline Scalar cross(const Vec2<Scalar>& a, const Vec2<Scalar>& b) {
  return a.x() * b.y() - a.y() * b.x();
}

/// Orientation of c relative to the directed line a->b (positive = left turn).
template <typename Scalar>
inline Scalar orient(const Vec2<Scalar>& a, const Vec2<Scalar>& b, const Vec2<Scalar>& c) {
  return cross<Scalar>(b - a, c - a);
}

/// Shoelace signed area; positive for counterclockwise order.
template <typename Scalar>
Scalar signed_area(std::span<const Vec2<Scalar>> poly) {
  const std::size_t m = poly.size();
  if (m < 3) return Scalar(0);
  Scalar twice = 0;
  for (std::size_t i = 0; i < m; ++i) {
    twice += cross<Scalar>(poly[i], poly[(i + 1) % m]);
  }
  return twice / Scalar(2);
}

template <typename Scalar>
Scalar polygon_area(std::span<const Vec2<Scalar>> poly) {
  return std::abs(signed_area<Scalar>(poly));
}

template <typename Scalar>
Vec2<Scalar> polygon_centroid(std::span<const Vec2<Scalar>> poly) {
  const std::size_t m = poly.size();
  Vec2<Scalar> acc = Vec2<Scalar>::Zero();
  Scalar twice = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % m];
    const Scalar c = cross<Scalar>(a, b);
    acc += (a + b) * c;
    twice += c;
  }
  return acc / (Scalar(3) * twice);
}

/// Clips a convex polygon to the half-plane {q : normal·q <= level}.
/// Sutherland–Hodgman against a single edge; output stays counterclockwise.
template <typename Scalar>
std::vector<Vec2<Scalar>> clip_halfplane(std::span<const Vec2<Scalar>> poly,
                                         const Vec2<Scalar>& normal, Scalar level) {
  std::vector<Vec2<Scalar>> out;
  const std::size_t m = poly.size();
  if (m == 0) return out;
  out.reserve(m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % m];
    const Scalar da = normal.dot(a) - level;
    const Scalar db = normal.dot(b) - level;
    if (da <= 0) out.push_back(a);
    if ((da < 0 && db > 0) || (da > 0 && db < 0)) {
      const Scalar t = da / (da - db);
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

/// Extent of `poly` along `axis`: {min, max} of axis·q.
template <typename Scalar>
std::pair<Scalar, Scalar> extent(std::span<const Vec2<Scalar>> poly, const Vec2<Scalar>& axis) {
  Scalar lo = std::numeric_limits<Scalar>::infinity();
  Scalar hi = -lo;
  for (const auto& q : poly) {
    const Scalar s = axis.dot(q);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return {lo, hi};
}

}  // namespace hulllab
