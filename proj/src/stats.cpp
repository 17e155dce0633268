#include "hulllab/stats.hpp"

#include "hulllab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hulllab {

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

EstimatorReport estimate(std::span<const double> samples) {
  const std::size_t m = samples.size();
  if (m < 2) throw Error(ErrorCode::InsufficientData, "need at least 2 samples");
  for (double v : samples) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InsufficientData, "non-finite sample");
  }
  const double md = static_cast<double>(m);
  EstimatorReport r;
  r.replicates = m;
  r.mean = pairwise_sum(samples) / md;
  std::vector<double> sq(m), quart(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double d = samples[i] - r.mean;
    sq[i] = d * d;
    quart[i] = sq[i] * sq[i];
  }
  r.variance = pairwise_sum(sq) / (md - 1.0);
  const double mu4 = pairwise_sum(quart) / md;
  r.se_mean = std::sqrt(r.variance / md);
  r.se_variance = std::sqrt(std::max(0.0, (mu4 - r.variance * r.variance * (md - 3.0) / (md - 1.0)) / md));
  return r;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(sorted.size());
  double d = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double F = cdf(sorted[i]);
    d = std::max({d, F - static_cast<double>(i) / m, static_cast<double>(i + 1) / m - F});
  }
  return std::clamp(d, 0.0, 1.0);
}

KSReport ks_to_normal(std::span<const double> samples, bool standardize) {
  if (samples.size() < 2) throw Error(ErrorCode::InsufficientData, "need at least 2 samples");
  KSReport r;
  r.sample_size = samples.size();
  r.reference = KSReference::StandardNormal;
  if (!standardize) {
    r.statistic = ks_statistic(samples, normal_cdf);
    return r;
  }
  const EstimatorReport e = estimate(samples);
  if (e.variance < 1e-300) throw Error(ErrorCode::ZeroVariance, "cannot standardize a constant sample");
  const double sd = std::sqrt(e.variance);
  std::vector<double> z(samples.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = (samples[i] - e.mean) / sd;
  r.statistic = ks_statistic(z, normal_cdf);
  return r;
}

KSReport ks_to_uniform(std::span<const double> samples, double lo, double hi) {
  if (samples.size() < 2) throw Error(ErrorCode::InsufficientData, "need at least 2 samples");
  if (!(hi > lo)) throw Error(ErrorCode::DomainError, "empty uniform support");
  KSReport r;
  r.sample_size = samples.size();
  r.reference = KSReference::Uniform;
  r.statistic = ks_statistic(samples, [=](double v) { return std::clamp((v - lo) / (hi - lo), 0.0, 1.0); });
  return r;
}

KSReport ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw Error(ErrorCode::InsufficientData, "need at least 2 samples per side");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  KSReport r;
  r.statistic = std::clamp(d, 0.0, 1.0);
  r.sample_size = std::min(x.size(), y.size());
  r.reference = KSReference::EmpiricalSecondSample;
  return r;
}

double ks_critical_value(std::size_t m, double alpha) {
  double c = 0;
  if (alpha == 0.05) {
    c = 1.3581;
  } else if (alpha == 0.01) {
    c = 1.6276;
  } else {
    throw Error(ErrorCode::DomainError, "tabulated KS levels are 0.05 and 0.01");
  }
  return c / std::sqrt(static_cast<double>(m));
}

ReplicateResult simulate_replicate(const ConvexBody& body, Model model, double n, std::uint64_t seed) {
  const PointSample sample = model == Model::Poisson
                                 ? poisson_points(body, 1.0, seed)
                                 : uniform_points(body, static_cast<std::size_t>(std::llround(n)), seed);
  const HullSummary hull = functionals(body, sample);
  ReplicateResult r;
  r.seed = seed;
  r.N = hull.N;
  r.A = hull.A;
  if (hull.edge_angles.empty()) {
    r.min_edge_angle = r.max_edge_angle = std::numeric_limits<double>::quiet_NaN();
  } else {
    r.min_edge_angle = hull.edge_angles.front();
    r.max_edge_angle = hull.edge_angles.back();
  }
  return r;
}

std::vector<ReplicateResult> simulate(const ConvexBody& body, Model model, double n, std::size_t reps,
                                      std::uint64_t base_seed, std::size_t workers) {
  return run_indexed(reps, workers, [&](std::size_t i) {
    return simulate_replicate(body, model, n, replicate_seed(base_seed, i));
  });
}

namespace {

Ratio ratio(double a, double b, double var_a, double var_b, double cov_ab) {
  Ratio r;
  r.value = a / b;
  const double rel = var_a / (a * a) + var_b / (b * b) - 2.0 * cov_ab / (a * b);
  r.se = std::abs(r.value) * std::sqrt(std::max(0.0, rel));
  return r;
}

}  // namespace

std::uint64_t model_stream_seed(Model model, std::uint64_t base_seed) {
  return model == Model::Poisson ? base_seed : splitmix64(base_seed ^ 0x756E69666F726DULL);
}

ModelMoments moments_from(std::span<const ReplicateResult> results, Model model) {
  const std::size_t m = results.size();
  std::vector<double> n_vals(m), a_vals(m);
  for (std::size_t i = 0; i < m; ++i) {
    n_vals[i] = static_cast<double>(results[i].N);
    a_vals[i] = results[i].A;
  }
  ModelMoments out;
  out.model = model;
  out.N = estimate(n_vals);
  out.A = estimate(a_vals);

  // Cross moments for the delta-method covariances of the estimators.
  const double md = static_cast<double>(m);
  std::vector<double> c_na(m), c_naa(m), c_nnn(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double dn = n_vals[i] - out.N.mean;
    const double da = a_vals[i] - out.A.mean;
    c_na[i] = dn * da;
    c_naa[i] = dn * da * da;
    c_nnn[i] = dn * dn * dn;
  }
  const double cov_mean_n_mean_a = pairwise_sum(c_na) / md / md;
  const double cov_mean_n_var_a = pairwise_sum(c_naa) / md / md;
  const double cov_mean_n_var_n = pairwise_sum(c_nnn) / md / md;

  const double se2_mn = out.N.se_mean * out.N.se_mean;
  out.mean_over_var = ratio(out.N.mean, out.N.variance, se2_mn, out.N.se_variance * out.N.se_variance,
                            cov_mean_n_var_n);
  out.mean_over_area = ratio(out.N.mean, out.A.mean, se2_mn, out.A.se_mean * out.A.se_mean, cov_mean_n_mean_a);
  out.mean_over_varA = ratio(out.N.mean, out.A.variance, se2_mn, out.A.se_variance * out.A.se_variance,
                             cov_mean_n_var_a);
  return out;
}

VarianceRatioReport variance_ratio_report(const ConvexBody& body, double n, std::size_t replicates,
                                          std::uint64_t seed, std::size_t workers) {
  if (replicates < 100) throw Error(ErrorCode::DomainError, "variance_ratio_report needs >= 100 replicates");
  const ConvexBody scaled = normalize_area(body, n);
  VarianceRatioReport report;
  report.n = n;
  const auto pois = simulate(scaled, Model::Poisson, n, replicates, seed, workers);
  const auto unif = simulate(scaled, Model::Uniform, n, replicates, model_stream_seed(Model::Uniform, seed), workers);
  report.poisson = moments_from(pois, Model::Poisson);
  report.uniform = moments_from(unif, Model::Uniform);
  return report;
}

WUniformityReport w_uniformity_test(const ConvexBody& body, double theta, std::size_t replicates,
                                    std::uint64_t seed, std::size_t workers) {
  if (replicates < 100) throw Error(ErrorCode::DomainError, "w_uniformity_test needs >= 100 replicates");
  struct Draw {
    bool empty = true;
    CapCoordinates c;
  };
  const auto draws = run_indexed(replicates, workers, [&](std::size_t i) {
    const PointSample sample = poisson_points(body, 1.0, replicate_seed(seed, i));
    Draw d;
    if (sample.points.empty()) return d;
    const HullSummary hull = functionals(body, sample);
    d.empty = false;
    d.c = cap_coordinates(body, vertex_at_angle(hull, theta), theta);
    return d;
  });

  WUniformityReport report;
  report.replicates = replicates;
  std::vector<double> xs, ys;
  for (const auto& d : draws) {
    if (d.empty) {
      ++report.empty;
      continue;
    }
    xs.push_back(d.c.x);
    ys.push_back(d.c.y);
  }
  if (xs.size() < 2) throw Error(ErrorCode::AllHullsEmpty, "fewer than two nonempty hulls");
  report.x = ks_to_uniform(xs, std::exp(-body.area()), 1.0);
  report.y = ks_to_uniform(ys, 0.0, 1.0);
  return report;
}

}  // namespace hulllab
