#pragma once

// Estimators, Kolmogorov–Smirnov statistics and the simulation-backed checks
// built on them.

#include "hulllab/body.hpp"
#include "hulllab/sample.hpp"

#include <cstdint>
#include <functional>
#include <span>

namespace hulllab {

/// Pairwise (tree) summation; deterministic for a fixed input order.
double pairwise_sum(std::span<const double> values);

struct EstimatorReport {
  double mean = 0.0;
  double variance = 0.0;
  double se_mean = 0.0;
  double se_variance = 0.0;
  std::size_t replicates = 0;
};

EstimatorReport estimate(std::span<const double> samples);

enum class KSReference { StandardNormal, Uniform, EmpiricalSecondSample };

struct KSReport {
  double statistic = 0.0;
  std::size_t sample_size = 0;
  KSReference reference = KSReference::StandardNormal;
};

/// Standard normal CDF via erfc.
double normal_cdf(double x);

/// One-sample Kolmogorov statistic against a continuous CDF.
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);

KSReport ks_to_normal(std::span<const double> samples, bool standardize);
KSReport ks_to_uniform(std::span<const double> samples, double lo, double hi);
KSReport ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Asymptotic one-sample KS critical value c(α)/√m for α ∈ {0.05, 0.01}.
double ks_critical_value(std::size_t m, double alpha);

/// Hull functionals of one replicate in the area-n normalization.
struct ReplicateResult {
  std::uint64_t seed = 0;
  std::size_t N = 0;
  double A = 0.0;
  double min_edge_angle = 0.0;
  double max_edge_angle = 0.0;
};

/// One replicate of the given model on a body already scaled to area n:
/// Poisson with λ = 1, or uniform with round(n) points.
ReplicateResult simulate_replicate(const ConvexBody& body_area_n, Model model, double n, std::uint64_t seed);

/// Replicates 0..reps-1 with seeds replicate_seed(base_seed, i).
std::vector<ReplicateResult> simulate(const ConvexBody& body_area_n, Model model, double n, std::size_t reps,
                                      std::uint64_t base_seed, std::size_t workers);

/// Base seed of each model's replicate stream, so that runs of both models
/// from one seed are independent.
std::uint64_t model_stream_seed(Model model, std::uint64_t base_seed);

struct Ratio {
  double value = 0.0;
  double se = 0.0;
};

struct ModelMoments {
  Model model = Model::Poisson;
  EstimatorReport N;
  EstimatorReport A;
  Ratio mean_over_var;    ///< E[N] / Var N
  Ratio mean_over_area;   ///< E[N] / (n·E[A]) in unit-area terms
  Ratio mean_over_varA;   ///< E[N] / (n²·Var A) in unit-area terms
};

struct VarianceRatioReport {
  double n = 0.0;
  ModelMoments poisson;
  ModelMoments uniform;
};

/// Moments of N and A for both models at matched n and the three
/// dimensionless ratios, with delta-method standard errors.
VarianceRatioReport variance_ratio_report(const ConvexBody& body, double n, std::size_t replicates,
                                          std::uint64_t seed, std::size_t workers = 1);

ModelMoments moments_from(std::span<const ReplicateResult> results, Model model);

struct WUniformityReport {
  KSReport x;
  KSReport y;
  std::size_t replicates = 0;
  std::size_t empty = 0;
};

/// Samples W_Π(θ) over Poisson realizations on a body of area n (λ = 1) and
/// tests its cap coordinates against Uniform(e^{-n}, 1) × Uniform(0, 1),
/// conditioning on nonempty hulls.
WUniformityReport w_uniformity_test(const ConvexBody& body_area_n, double theta, std::size_t replicates,
                                    std::uint64_t seed, std::size_t workers = 1);

}  // namespace hulllab
