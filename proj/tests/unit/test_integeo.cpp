#include "hulllab/integeo.hpp"
#include "hulllab/stats.hpp"

#include "../support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace hulllab;
using std::numbers::pi;

namespace {

const ModelSpec kPoisson{Model::Poisson, 100.0};

// E[X] by brute force: Simpson in √r, r = -log x, with chords from bisection caps
// (not the height profile), and composite Gauss–Legendre in θ on panels
// graded toward the edge directions, where the inner integral is sharply
// peaked and has kinks.
struct Rule {
  std::vector<double> nodes, weights;  // on [-1, 1]
};

Rule gauss_legendre(int m) {
  Rule r;
  for (int i = 1; i <= m; ++i) {
    double x = std::cos(pi * (i - 0.25) / (m + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes.push_back(x);
    r.weights.push_back(2 / ((1 - x * x) * dp * dp));
  }
  return r;
}

double inner_brute(const ConvexBody& body, const ModelSpec& model, Functional x, double theta, int n_r) {
  // r = s² absorbs the square-root onset of the chord near edge directions.
  const double s_max = std::sqrt(std::min(body.area(), 60.0));
  double inner = 0;
  for (int k = 0; k <= n_r; ++k) {
    const double s = s_max * k / n_r;
    const double r = s * s;
    const double w = (k == 0 || k == n_r) ? 1 : (k % 2 ? 4 : 2);
    const double f = r < body.area() ? cap_at_area(body, theta, r).chord : 0.0;
    const double factor = model.kind == Model::Poisson ? 1.0 : model_factor_log(model, x, -r);
    inner += w * f * f / 6.0 * factor * std::exp(-r) * 2 * s;
  }
  return inner * s_max / (3.0 * n_r);
}

struct ThetaNode {
  double theta, weight;
};

std::vector<ThetaNode> theta_nodes(const ConvexBody& body, int panels, int order) {
  std::vector<double> kinks;
  const auto& v = body.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point e = v[(i + 1) % v.size()] - v[i];
    const double a = std::atan2(e.y(), e.x());
    kinks.push_back(wrap_angle(a));
    kinks.push_back(wrap_angle(a + pi));
  }
  std::sort(kinks.begin(), kinks.end());
  kinks.push_back(kinks.front() + 2 * pi);
  const Rule gl = gauss_legendre(order);
  std::vector<ThetaNode> out;
  for (std::size_t i = 0; i + 1 < kinks.size(); ++i) {
    const double a = kinks[i], b = kinks[i + 1];
    if (b - a < 1e-12) continue;
    for (int p = 0; p < panels; ++p) {
      const double lo = a + (b - a) * 0.5 * (1 - std::cos(pi * p / panels));
      const double hi = a + (b - a) * 0.5 * (1 - std::cos(pi * (p + 1) / panels));
      for (int q = 0; q < order; ++q) {
        out.push_back({0.5 * (lo + hi) + 0.5 * (hi - lo) * gl.nodes[q], 0.5 * (hi - lo) * gl.weights[q]});
      }
    }
  }
  return out;
}

}  // namespace

TEST(IncrementalExpectation, Examples) {
  const ModelSpec u10{Model::Uniform, 10.0};
  for (const auto& m : {kPoisson, u10}) {
    for (Functional x : {Functional::N, Functional::A}) EXPECT_EQ(incremental_expectation(m, x, 0.0, 2.0, 0.5), 0.0);
  }
  EXPECT_DOUBLE_EQ(incremental_expectation(kPoisson, Functional::N, 1.0, 2.0, 0.3), 2.0);
  EXPECT_DOUBLE_EQ(incremental_expectation(kPoisson, Functional::A, 1.0, 2.0, 0.3), 2.0);
  EXPECT_DOUBLE_EQ(incremental_expectation(u10, Functional::A, 1.0, 2.0, 0.3), 2.0);
  EXPECT_DOUBLE_EQ(incremental_expectation(u10, Functional::N, 1.0, 2.0, 0.0), 1.8);
  try {
    incremental_expectation(u10, Functional::N, 1.0, 2.0, 10.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DomainError);
  }
}

TEST(DensityW, Examples) {
  EXPECT_EQ(density_W(kPoisson, 0.0), 1.0);
  EXPECT_EQ(density_W({Model::Uniform, 7.0}, 0.0), 1.0);
  EXPECT_NEAR(density_W(kPoisson, 1.0), 0.36787944117144233, 1e-15);
  EXPECT_NEAR(density_W({Model::Uniform, 2.0}, 1.0), 0.5, 1e-15);
  EXPECT_EQ(density_W({Model::Uniform, 2.0}, 2.0), 0.0);
  EXPECT_THROW(density_W({Model::Uniform, 2.0}, 2.5), Error);
}

TEST(DensityW, PoissonMassOverBody) {
  // ∫_K exp(-A(p, θ)) dp = 1 - e^{-Area(K)}, by a midpoint grid over K.
  const ConvexBody body = normalize_area(named_body("square"), 5.0);
  const double side = std::sqrt(5.0);
  const Point origin = body.vertices()[0];
  const int g = 200;
  for (double theta : {0.0, 0.6}) {
    double mass = 0;
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) {
        const Point p = origin + Point((i + 0.5) * side / g, (j + 0.5) * side / g);
        mass += density_W(ModelSpec{Model::Poisson, 5.0}, cap_area(body, p, theta));
      }
    mass *= (side / g) * (side / g);
    EXPECT_NEAR(mass, 1 - std::exp(-5.0), 2e-4);
  }
}

TEST(ModelFactor, Examples) {
  EXPECT_EQ(model_factor(kPoisson, Functional::N, 0.3), 1.0);
  EXPECT_EQ(model_factor({Model::Uniform, 50}, Functional::A, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(model_factor({Model::Uniform, 50}, Functional::N, 1.0), 1 - 1.0 / 50);
  EXPECT_NEAR(model_factor({Model::Uniform, 1}, Functional::A, std::exp(-0.5)), std::exp(0.5), 1e-14);
  const double pois = model_factor({Model::Poisson, 1e4}, Functional::A, std::exp(-1.0));
  const double unif = model_factor({Model::Uniform, 1e4}, Functional::A, std::exp(-1.0));
  EXPECT_LE(std::abs(unif - pois) / pois, 2e-4);
  EXPECT_THROW(model_factor(kPoisson, Functional::A, 0.0), Error);
  EXPECT_THROW(model_factor(kPoisson, Functional::A, 1.5), Error);
  EXPECT_EQ(model_factor_log({Model::Uniform, 10}, Functional::N, -10.0), 0.0);
}

TEST(ModelFactor, StableForLargeN) {
  // Direct power evaluation agrees where it is still accurate.
  for (double n : {20.0, 200.0}) {
    for (double lx : {-0.1, -1.0, -5.0}) {
      const double x = std::exp(lx);
      const double direct = std::pow(1 + lx / n, n - 2) * (1 - 1 / n) / x;
      EXPECT_NEAR(model_factor({Model::Uniform, n}, Functional::N, x), direct, 1e-12 * direct);
    }
  }
  EXPECT_TRUE(std::isfinite(model_factor_log({Model::Uniform, 1e6}, Functional::N, -5000.0)));
}

TEST(ExpectationQuadrature, PoissonNEqualsA) {
  for (const char* name : {"square", "triangle", "disk:256"}) {
    const ConvexBody body = normalize_area(named_body(name), 100.0);
    const double n = expectation_quadrature(body, kPoisson, Functional::N, 1e-9).value;
    const double a = expectation_quadrature(body, kPoisson, Functional::A, 1e-9).value;
    EXPECT_NEAR(n, a, 1e-9 * n) << name;
  }
}

TEST(ExpectationQuadrature, MatchesBruteGrid) {
  for (const char* name : {"square", "triangle"}) {
    const ConvexBody body = normalize_area(named_body(name), 30.0);
    const auto nodes = theta_nodes(body, 24, 6);
    for (const ModelSpec& m : {ModelSpec{Model::Poisson, 30.0}, ModelSpec{Model::Uniform, 30.0}}) {
      for (Functional x : {Functional::N, Functional::A}) {
        if (m.kind == Model::Poisson && x == Functional::A) continue;
        double b = 0;
        for (const auto& t : nodes) b += t.weight * inner_brute(body, m, x, t.theta, 300);
        const double q = expectation_quadrature(body, m, x, 1e-8).value;
        EXPECT_NEAR(q, b, 2e-5 * q) << name << " " << to_string(m.kind) << " " << to_string(x);
      }
    }
  }
}

TEST(ExpectationQuadrature, ThreePointClosedForms) {
  // Three uniform points always span a triangle, and a random triangle in a
  // triangle has expected area Area/12.
  const ConvexBody hex = normalize_area(named_body("hexagon"), 3.0);
  EXPECT_NEAR(expectation_quadrature(hex, {Model::Uniform, 3.0}, Functional::N, 1e-10).value, 3.0, 1e-8);
  const ConvexBody tri = normalize_area(named_body("triangle"), 3.0);
  EXPECT_NEAR(expectation_quadrature(tri, {Model::Uniform, 3.0}, Functional::A, 1e-10).value, 3.0 * 11.0 / 12.0,
              1e-8);
}

TEST(ExpectationQuadrature, MatchesMonteCarlo) {
  const ConvexBody body = normalize_area(named_body("square"), 100.0);
  for (Model model : {Model::Poisson, Model::Uniform}) {
    const auto rs = simulate(body, model, 100.0, 10000, model_stream_seed(model, 0x5EEDULL << 32), 1);
    std::vector<double> N, A;
    for (const auto& r : rs) {
      N.push_back(static_cast<double>(r.N));
      A.push_back(r.A);
    }
    const EstimatorReport en = estimate(N), ea = estimate(A);
    const double qn = expectation_quadrature(body, {model, 100.0}, Functional::N, 1e-8).value;
    const double qa = expectation_quadrature(body, {model, 100.0}, Functional::A, 1e-8).value;
    EXPECT_LE(std::abs(en.mean - qn), 3 * en.se_mean);
    EXPECT_LE(std::abs(ea.mean - qa), 3 * ea.se_mean);
  }
}

TEST(ExpectationQuadrature, Preconditions) {
  const ConvexBody body = normalize_area(named_body("square"), 100.0);
  EXPECT_THROW(expectation_quadrature(body, {Model::Poisson, 50.0}, Functional::N, 1e-8), Error);
  EXPECT_THROW(expectation_quadrature(body, kPoisson, Functional::N, 1e-12), Error);
  EXPECT_THROW(expectation_quadrature(body, kPoisson, Functional::N, 0.1), Error);
  const QuadratureResult r = expectation_quadrature(body, kPoisson, Functional::N, 1e-6);
  EXPECT_GE(r.abs_error_estimate, 0.0);
  EXPECT_GT(r.evaluations, 0u);
}

TEST(FactorBounds, Examples) {
  const std::vector<double> one = {1.0};
  const FactorBounds b1 = factor_bounds_check(10.0, one);
  EXPECT_EQ(b1.max_over_1, 0.0);
  EXPECT_EQ(b1.max_scaled_gap, 0.0);

  const std::vector<double> e1 = {std::exp(-1.0)};
  const FactorBounds b = factor_bounds_check(100.0, e1);
  const double term = std::pow(0.99, 100) * std::exp(1.0);
  EXPECT_NEAR(b.max_over_1 + 1, term, 1e-13);
  EXPECT_NEAR(term, 0.994979, 1e-6);
  // (1 - term)·n / (log x)²; the series gives 1/2 + 5/(24n) + O(1/n²).
  EXPECT_NEAR(b.max_scaled_gap, (1 - term) * 100, 1e-10);
  EXPECT_NEAR(b.max_scaled_gap, 0.5 + 5.0 / (24 * 100), 1e-4);
}

TEST(FactorBounds, GeometricGrids) {
  for (double n : {10.0, 100.0, 1e4}) {
    std::vector<double> log_grid;
    for (int i = 0; i < 1000; ++i) log_grid.push_back(-n * i / 1000.0);
    const FactorBounds b = factor_bounds_check_log(n, log_grid);
    EXPECT_LE(b.max_over_1, 1e-12);
    EXPECT_TRUE(std::isfinite(b.max_scaled_gap));
    EXPECT_LE(b.max_scaled_gap, 1.0);
  }
  const std::vector<double> bad = {0.0};
  EXPECT_THROW(factor_bounds_check(10.0, bad), Error);
}

TEST(FactorIdentity, HoldsAndCatchesMutation) {
  for (double n : {10.0, 100.0, 1e4}) {
    std::vector<double> log_grid;
    for (int i = 0; i < 1000; ++i) log_grid.push_back(-n * i / 1000.0);
    EXPECT_LE(factor_identity_violation(n, log_grid), 1e-9);
    const FactorFn mutated = [](const ModelSpec& m, Functional x, double lx) {
      if (x == Functional::A) return model_factor_log(m, x, lx);
      return std::exp(m.n * std::log1p(lx / m.n) - lx) * (1 - 1 / m.n);
    };
    EXPECT_GT(factor_identity_violation(n, log_grid, mutated), 1e-3);
  }
}

TEST(TvPoissonBinomial, Examples) {
  EXPECT_EQ(tv_poisson_binomial(10, 0.0), 0.0);
  const double e = std::exp(-0.5);
  const double expected = std::abs(e - 0.5) + std::abs(0.5 * e - 0.5) + (1 - 1.5 * e);
  EXPECT_NEAR(tv_poisson_binomial(1, 0.5), expected, 1e-14);
  EXPECT_NEAR(expected, 0.3935, 1e-4);
  EXPECT_THROW(tv_poisson_binomial(3, 1.5), Error);
}

TEST(TvPoissonBinomial, VervaatGrid) {
  for (int i = 0; i < 20; ++i) {
    const auto n = static_cast<std::uint64_t>(std::llround(std::pow(1000.0, i / 19.0)));
    for (int j = 0; j < 20; ++j) {
      const double p = 1e-3 * std::pow(500.0, j / 19.0);
      const double tv = tv_poisson_binomial(n, p);
      EXPECT_GE(tv, 0.0);
      EXPECT_LE(tv, 2 * p + 1e-12) << n << " " << p;
    }
  }
}

TEST(TvPoissonBinomial, MatchesDirectSumSmallN) {
  for (std::uint64_t n : {2u, 5u, 12u}) {
    for (double p : {0.05, 0.3}) {
      double s = 0, binom_mass = 0;
      double pois_mass = 0;
      for (std::uint64_t k = 0; k <= n; ++k) {
        const double b = std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0)) * std::pow(p, k) *
                         std::pow(1 - p, n - k);
        const double q = std::exp(-(n * p)) * std::pow(n * p, k) / std::tgamma(k + 1.0);
        s += std::abs(b - q);
        binom_mass += b;
        pois_mass += q;
      }
      s += 1 - pois_mass;
      EXPECT_NEAR(binom_mass, 1.0, 1e-12);
      EXPECT_NEAR(tv_poisson_binomial(n, p), s, 1e-12);
    }
  }
}
