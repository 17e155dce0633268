#pragma once

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace hulllab {

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

using Point = Vec2<double>;
using PointList = std::vector<Point>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class ErrorCode {
  NonConvexInput,
  DegenerateInput,
  PointOutsideBody,
  AreaOutOfRange,
  DomainError,
  ResolutionTooCoarse,
  EmptyHull,
  DegenerateHull,
  NonconvergentQuadrature,
  InsufficientData,
  ZeroVariance,
  AllHullsEmpty,
  ParseError,
  ConfigError,
  IoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Wraps an angle into [0, 2π).
inline double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

/// Unit vector pointing along angle `theta`.
inline Point direction(double theta) { return {std::cos(theta), std::sin(theta)}; }

/// Left normal of the direction at angle `theta`. Points of a cap at angle
/// `theta` have the smallest values of `inward_normal(theta).dot(p)`.
inline Point inward_normal(double theta) { return {-std::sin(theta), std::cos(theta)}; }

}  // namespace hulllab
