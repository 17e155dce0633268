#pragma once

// Integral-geometric expressions for E[N] and E[A] in the Poisson and
// uniform models, in the normalization Area(K) = n, λ = 1.

#include "hulllab/body.hpp"
#include "hulllab/sample.hpp"

#include <cstdint>
#include <functional>
#include <span>

namespace hulllab {

enum class Functional { N, A };

std::string_view to_string(Functional x);

struct ModelSpec {
  Model kind = Model::Poisson;
  double n = 1.0;
};

/// d/dh E[X(θ, θ+h) | W(θ) = p] at h = 0, with y and f the cap coordinates
/// of p and capA = A_K(p, θ).
double incremental_expectation(const ModelSpec& model, Functional x, double y, double f, double capA);

/// Density of W(θ) at a point whose cap has area capA.
double density_W(const ModelSpec& model, double capA);

/// Multiplier of f(x, θ)²/6 in the integrand of E[X]; Poisson ≡ 1.
double model_factor(const ModelSpec& model, Functional x, double x_coord);
/// Same, parameterized by log x so that tiny x (large n) stays representable.
double model_factor_log(const ModelSpec& model, Functional x, double log_x);

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t evaluations = 0;
};

/// Thrown when refinement stalls; carries the best available estimate.
class NonconvergentQuadrature : public Error {
 public:
  NonconvergentQuadrature(const QuadratureResult& best, const std::string& what)
      : Error(ErrorCode::NonconvergentQuadrature, what), best_(best) {}
  const QuadratureResult& best() const { return best_; }

 private:
  QuadratureResult best_;
};

/// E[X] = ∫_0^{2π} ∫_{e^{-n}}^1 f(x, θ)²/6 · model_factor(x) dx dθ for a body
/// of area n.
QuadratureResult expectation_quadrature(const ConvexBody& body, const ModelSpec& model, Functional x,
                                        double rel_tol);

struct FactorBounds {
  double max_over_1 = 0.0;
  double max_scaled_gap = 0.0;
};

/// Statistics of (1/x)(1 + log x / n)^n over a grid of x in (e^{-n}, 1].
FactorBounds factor_bounds_check(double n, std::span<const double> x_grid);
FactorBounds factor_bounds_check_log(double n, std::span<const double> log_x_grid);

/// Largest violation over a log-x grid of the identities tying the uniform
/// factors to (1/x)(1 + log x/n)^n:
///   factor_A · (1 + log x/n)             = term
///   factor_N · (1 + log x/n)² / (1 - 1/n) = term
/// `factor` defaults to model_factor_log.
using FactorFn = std::function<double(const ModelSpec&, Functional, double)>;
double factor_identity_violation(double n, std::span<const double> log_x_grid, const FactorFn& factor = {});

/// Σ_k |Poisson(np)(k) - Binomial(n, p)(k)|.
double tv_poisson_binomial(std::uint64_t n, double p);

}  // namespace hulllab
