#include "hulllab/integeo.hpp"

#include "hulllab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hulllab {

std::string_view to_string(Functional x) { return x == Functional::N ? "N" : "A"; }

namespace {

void require_model(const ModelSpec& model) {
  if (!(model.n >= 1) || !std::isfinite(model.n)) throw Error(ErrorCode::DomainError, "model parameter n must be >= 1");
}

// Power of the uniform-model survival probability, (1 - capA/n)^e, zero once
// the cap swallows the body.
double survival_power(double n, double capA, double exponent) {
  if (capA >= n) return 0.0;
  return std::exp(exponent * std::log1p(-capA / n));
}

// x·model_factor expressed through the cap area A = -log x. This is the
// weight multiplying h(ℓ)³/6 once the x integral is rewritten in depth.
double depth_weight(const ModelSpec& model, Functional x, double capA) {
  if (model.kind == Model::Poisson) return std::exp(-capA);
  if (x == Functional::A) return survival_power(model.n, capA, model.n - 1.0);
  return (1.0 - 1.0 / model.n) * survival_power(model.n, capA, model.n - 2.0);
}

}  // namespace

double incremental_expectation(const ModelSpec& model, Functional x, double y, double f, double capA) {
  require_model(model);
  if (y < 0 || y > 1 || f < 0 || capA < 0) throw Error(ErrorCode::DomainError, "need y in [0,1], f >= 0, capA >= 0");
  if (model.kind == Model::Uniform && capA >= model.n) {
    throw Error(ErrorCode::DomainError, "uniform model needs capA < n");
  }
  const double base = 0.5 * y * y * f * f;
  if (model.kind == Model::Uniform && x == Functional::N) return base * (model.n - 1.0) / (model.n - capA);
  return base;
}

double density_W(const ModelSpec& model, double capA) {
  require_model(model);
  if (capA < 0 || capA > model.n) throw Error(ErrorCode::DomainError, "density_W needs 0 <= capA <= n");
  if (model.kind == Model::Poisson) return std::exp(-capA);
  // (1 - A/n)^n · n/(n - A) = (1 - A/n)^(n-1)
  return survival_power(model.n, capA, model.n - 1.0);
}

double model_factor_log(const ModelSpec& model, Functional x, double log_x) {
  require_model(model);
  if (!(log_x <= 0)) throw Error(ErrorCode::DomainError, "model_factor needs 0 < x <= 1");
  if (model.kind == Model::Poisson) return 1.0;
  const double n = model.n;
  if (log_x <= -n) return 0.0;
  const double base = std::log1p(log_x / n);
  if (x == Functional::A) return std::exp((n - 1.0) * base - log_x);
  if (n == 1.0) return 0.0;
  return std::exp((n - 2.0) * base - log_x) * (1.0 - 1.0 / n);
}

double model_factor(const ModelSpec& model, Functional x, double x_coord) {
  if (!(x_coord > 0) || x_coord > 1) throw Error(ErrorCode::DomainError, "model_factor needs 0 < x <= 1");
  return model_factor_log(model, x, std::log(x_coord));
}

QuadratureResult expectation_quadrature(const ConvexBody& body, const ModelSpec& model, Functional x,
                                        double rel_tol) {
  require_model(model);
  if (std::abs(body.area() - model.n) > 1e-6 * model.n) {
    std::ostringstream msg;
    msg << "body area " << body.area() << " does not match n = " << model.n;
    throw Error(ErrorCode::DomainError, msg.str());
  }
  if (!(rel_tol >= 1e-10 && rel_tol <= 1e-2)) throw Error(ErrorCode::DomainError, "rel_tol must lie in [1e-10, 1e-2]");

  // Substituting x = exp(-A(ℓ)) turns the inner integral into
  //   ∫ h(ℓ)³ · x·model_factor(x) / 6 dℓ
  // which is smooth on every linear piece of the height profile. The weight
  // underflows long before cap areas of 1500.
  const double area_cut = std::min(model.n, 1500.0);
  const double inner_tol = 1e-2 * rel_tol;
  double worst_inner_error = 0.0;
  std::size_t evaluations = 0;
  bool inner_ok = true;

  auto inner = [&](double theta) {
    const HeightProfile profile(body, theta);
    const double depth_cut = profile.depth_at_area(area_cut);
    std::vector<double> edges;
    for (double d : profile.breakpoints()) {
      if (d < depth_cut) edges.push_back(d);
    }
    edges.push_back(depth_cut);
    auto integrand = [&](double depth) {
      const double h = profile.h(depth);
      return h * h * h * depth_weight(model, x, profile.cumulative(depth)) / 6.0;
    };
    const AdaptiveResult r = integrate_adaptive(integrand, edges, inner_tol, 1e-300, 20000);
    worst_inner_error = std::max(worst_inner_error, r.error);
    evaluations += r.evaluations;
    inner_ok = inner_ok && r.converged;
    return r.value;
  };

  // The inner integral is smooth in θ except where an edge of K becomes
  // parallel to the cutting line, i.e. at edge angles and their opposites.
  std::vector<double> kinks = {0.0, kTwoPi};
  const auto& v = body.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point e = v[(i + 1) % v.size()] - v[i];
    const double a = wrap_angle(std::atan2(e.y(), e.x()));
    kinks.push_back(a);
    kinks.push_back(wrap_angle(a + std::numbers::pi));
  }
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end(), [](double l, double r) { return r - l < 1e-14; }),
              kinks.end());
  kinks.back() = kTwoPi;

  const AdaptiveResult outer = integrate_adaptive(inner, kinks, rel_tol, 0.0, 4000);
  QuadratureResult result;
  result.value = outer.value;
  result.abs_error_estimate = outer.error + kTwoPi * worst_inner_error;
  result.evaluations = evaluations;
  if (!outer.converged || !inner_ok) {
    throw NonconvergentQuadrature(result, "expectation quadrature stalled above the requested tolerance");
  }
  return result;
}

FactorBounds factor_bounds_check_log(double n, std::span<const double> log_x_grid) {
  if (!(n > 0)) throw Error(ErrorCode::DomainError, "n must be positive");
  FactorBounds out;
  out.max_over_1 = -std::numeric_limits<double>::infinity();
  for (double L : log_x_grid) {
    if (!(L > -n && L <= 0)) throw Error(ErrorCode::DomainError, "grid point outside (e^-n, 1]");
    const double term = std::exp(n * std::log1p(L / n) - L);
    out.max_over_1 = std::max(out.max_over_1, term - 1.0);
    if (L != 0 && L * L <= 0.5 * n) {
      out.max_scaled_gap = std::max(out.max_scaled_gap, std::abs(term - 1.0) * n / (L * L));
    }
  }
  return out;
}

FactorBounds factor_bounds_check(double n, std::span<const double> x_grid) {
  std::vector<double> logs;
  logs.reserve(x_grid.size());
  for (double x : x_grid) {
    if (!(x > 0) || x > 1) throw Error(ErrorCode::DomainError, "grid point outside (e^-n, 1]");
    logs.push_back(std::log(x));
  }
  return factor_bounds_check_log(n, logs);
}

double factor_identity_violation(double n, std::span<const double> log_x_grid, const FactorFn& factor) {
  const FactorFn eval = factor ? factor : FactorFn(model_factor_log);
  const ModelSpec uniform{Model::Uniform, n};
  double worst = 0.0;
  for (double L : log_x_grid) {
    if (!(L > -n && L <= 0)) throw Error(ErrorCode::DomainError, "grid point outside (e^-n, 1]");
    // Subnormal results carry too few digits for a relative comparison.
    const double log_term = n * std::log1p(L / n) - L;
    if (log_term < -700.0) continue;
    const double term = std::exp(log_term);
    const double base = 1.0 + L / n;
    const double via_a = eval(uniform, Functional::A, L) * base;
    worst = std::max(worst, std::abs(via_a / term - 1.0));
    if (n > 1) {
      const double via_n = eval(uniform, Functional::N, L) * base * base / (1.0 - 1.0 / n);
      worst = std::max(worst, std::abs(via_n / term - 1.0));
    }
  }
  return worst;
}

double tv_poisson_binomial(std::uint64_t n, double p) {
  if (!(p >= 0 && p <= 1)) throw Error(ErrorCode::DomainError, "p must lie in [0, 1]");
  if (p == 0 || n == 0) return 0.0;
  const double nn = static_cast<double>(n);
  const double mu = nn * p;
  const double log_mu = std::log(mu);
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double lg_n = std::lgamma(nn + 1.0);

  auto poisson = [&](double k) { return std::exp(-mu + k * log_mu - std::lgamma(k + 1.0)); };
  auto binomial = [&](double k) {
    if (p == 1) return k == nn ? 1.0 : 0.0;
    return std::exp(lg_n - std::lgamma(k + 1.0) - std::lgamma(nn - k + 1.0) + k * log_p + (nn - k) * log_q);
  };

  double total = 0.0;
  for (std::uint64_t k = 0; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    total += std::abs(poisson(kk) - binomial(kk));
  }
  // Poisson mass beyond the binomial support.
  for (double k = nn + 1.0;; k += 1.0) {
    const double term = poisson(k);
    total += term;
    if (k > mu && term < 1e-18 * std::max(total, 1e-300)) break;
    if (k > mu + 60.0 * std::sqrt(mu) + 100.0) break;
  }
  return total;
}

}  // namespace hulllab
