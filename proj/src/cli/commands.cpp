#include "hulllab/cli/commands.hpp"

#include "hulllab/parallel.hpp"
#include "hulllab/stats.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>

namespace hulllab::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string csv_cell(const Table::Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char c : s) {
        if (c == '"') q += '"';
        q += c;
      }
      return q + '"';
    }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(std::uint64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_real(v); }
  };
  return std::visit(Visitor{}, cell);
}

nlohmann::ordered_json json_cell(const Table::Cell& cell) {
  struct Visitor {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
    nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
    nlohmann::ordered_json operator()(std::uint64_t v) const { return v; }
    nlohmann::ordered_json operator()(double v) const {
      if (!std::isfinite(v)) return nullptr;
      return v;
    }
  };
  return std::visit(Visitor{}, cell);
}

Table::Cell count(std::size_t v) { return static_cast<std::uint64_t>(v); }

ConvexBody body_at(const ExperimentConfig& config, double n) { return normalize_area(load_body(config.body), n); }

std::size_t uniform_count(double n) { return static_cast<std::size_t>(std::llround(n)); }

// Mean and standard error, NaN when fewer than two samples.
EstimatorReport try_estimate(std::span<const double> values) {
  if (values.size() < 2) {
    EstimatorReport r;
    r.mean = values.empty() ? kNaN : values.front();
    r.variance = r.se_mean = r.se_variance = kNaN;
    r.replicates = values.size();
    return r;
  }
  return estimate(values);
}

std::vector<double> column_N(const std::vector<ReplicateResult>& rs) {
  std::vector<double> out;
  out.reserve(rs.size());
  for (const auto& r : rs) out.push_back(static_cast<double>(r.N));
  return out;
}

std::vector<double> column_A(const std::vector<ReplicateResult>& rs) {
  std::vector<double> out;
  out.reserve(rs.size());
  for (const auto& r : rs) out.push_back(r.A);
  return out;
}

}  // namespace

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns_.size()) throw std::logic_error("table row width mismatch");
  rows_.push_back(std::move(row));
}

void Table::write_csv(std::ostream& out) const {
  for (std::size_t j = 0; j < columns_.size(); ++j) out << (j ? "," : "") << columns_[j];
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << csv_cell(row[j]);
    out << '\n';
  }
}

void Table::write_jsonl(std::ostream& out) const {
  for (const auto& row : rows_) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t j = 0; j < row.size(); ++j) obj[columns_[j]] = json_cell(row[j]);
    out << obj.dump() << '\n';
  }
}

// ---------------------------------------------------------------- sample

Table run_sample(const ExperimentConfig& config) {
  validate(config);
  std::vector<std::string> columns = {"replicate", "model", "n", "seed", "N", "A", "min_edge_angle", "max_edge_angle"};
  const std::size_t parts = config.breakpoints.size();
  for (std::size_t i = 0; i < parts; ++i) columns.push_back("N_part_" + std::to_string(i));
  for (std::size_t i = 0; i < parts; ++i) columns.push_back("A_part_" + std::to_string(i));
  Table table(std::move(columns));

  struct Row {
    ReplicateResult r;
    AngularDecomposition d;
    bool has_parts = false;
  };

  for (double n : config.n) {
    const ConvexBody body = body_at(config, n);
    for (Model model : selected_models(config)) {
      const std::uint64_t stream = model_stream_seed(model, config.base_seed);
      const auto rows = run_indexed(config.replicates, config.workers, [&](std::size_t i) {
        Row row;
        const std::uint64_t seed = replicate_seed(stream, i);
        row.r = simulate_replicate(body, model, n, seed);
        if (parts > 0) {
          const PointSample sample =
              model == Model::Poisson ? poisson_points(body, 1.0, seed) : uniform_points(body, uniform_count(n), seed);
          const HullSummary hull = functionals(body, sample);
          if (hull.N >= 3 || parts == 1) {
            row.d = decompose(body, hull, config.breakpoints);
            row.has_parts = true;
          }
        }
        return row;
      });
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& row = rows[i];
        std::vector<Table::Cell> cells = {count(i),          std::string(to_string(model)), n,
                                          row.r.seed,        count(row.r.N),                row.r.A,
                                          row.r.min_edge_angle, row.r.max_edge_angle};
        for (std::size_t k = 0; k < parts; ++k) {
          cells.push_back(row.has_parts ? Table::Cell(count(row.d.N_parts[k])) : Table::Cell(kNaN));
        }
        for (std::size_t k = 0; k < parts; ++k) {
          cells.push_back(row.has_parts ? Table::Cell(row.d.A_parts[k]) : Table::Cell(kNaN));
        }
        table.add(std::move(cells));
      }
    }
  }
  return table;
}

// ---------------------------------------------------------------- expect

Table run_expect(const ExperimentConfig& config) {
  validate(config);
  Table table({"body", "n", "functional", "model", "quadrature", "quad_error", "quad_converged", "mc_mean", "mc_se", "z",
               "rel_gap"});
  const auto models = selected_models(config);
  for (double n : config.n) {
    const ConvexBody body = body_at(config, n);
    std::map<Model, std::vector<ReplicateResult>> mc;
    for (Model model : models) {
      mc[model] = simulate(body, model, n, config.replicates, model_stream_seed(model, config.base_seed), config.workers);
    }
    for (Functional x : {Functional::N, Functional::A}) {
      std::map<Model, QuadratureResult> quad;
      std::map<Model, bool> converged;
      for (Model model : models) {
        try {
          quad[model] = expectation_quadrature(body, {model, n}, x, config.rel_tol);
          converged[model] = true;
        } catch (const NonconvergentQuadrature& e) {
          quad[model] = e.best();
          converged[model] = false;
        }
      }
      double gap = kNaN;
      if (quad.size() == 2) {
        gap = std::abs(quad[Model::Uniform].value - quad[Model::Poisson].value) / quad[Model::Poisson].value;
      }
      for (Model model : models) {
        const auto values = x == Functional::N ? column_N(mc[model]) : column_A(mc[model]);
        const EstimatorReport e = try_estimate(values);
        const double z = (e.mean - quad[model].value) / e.se_mean;
        table.add({config.body, n, std::string(to_string(x)), std::string(to_string(model)), quad[model].value,
                   quad[model].abs_error_estimate, std::int64_t{converged[model]}, e.mean, e.se_mean, z, gap});
      }
    }
  }
  return table;
}

// ---------------------------------------------------------------- clt

Table run_clt(const ExperimentConfig& config) {
  validate(config);
  Table table({"body", "n", "model", "functional", "reference", "statistic", "critical_5pct", "replicates"});
  const auto models = selected_models(config);
  const std::size_t m = config.replicates;
  for (double n : config.n) {
    const ConvexBody body = body_at(config, n);
    std::map<Model, std::vector<ReplicateResult>> runs;
    for (Model model : models) {
      runs[model] = simulate(body, model, n, m, model_stream_seed(model, config.base_seed), config.workers);
    }
    for (Functional x : {Functional::N, Functional::A}) {
      std::map<Model, std::vector<double>> values;
      for (Model model : models) {
        values[model] = x == Functional::N ? column_N(runs[model]) : column_A(runs[model]);
        double stat = kNaN;
        try {
          stat = ks_to_normal(values[model], true).statistic;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::ZeroVariance && e.code() != ErrorCode::InsufficientData) throw;
        }
        table.add({config.body, n, std::string(to_string(model)), std::string(to_string(x)), std::string("normal"),
                   stat, m >= 2 ? ks_critical_value(m, 0.05) : kNaN, count(m)});
      }
      if (models.size() == 2 && m >= 2) {
        const double stat = ks_two_sample(values[Model::Poisson], values[Model::Uniform]).statistic;
        const double md = static_cast<double>(m);
        const double crit = 1.3581 * std::sqrt(2.0 * md / (md * md));
        table.add({config.body, n, std::string("poisson-vs-uniform"), std::string(to_string(x)),
                   std::string("two-sample"), stat, crit, count(m)});
      }
    }
  }
  return table;
}

// ---------------------------------------------------------------- compare-models

Table run_compare_models(const ExperimentConfig& config) {
  validate(config);
  Table table({"body", "n", "model", "mean_N", "se_mean_N", "var_N", "se_var_N", "mean_A", "se_mean_A", "var_A",
               "se_var_A", "EN_over_VarN", "se_EN_over_VarN", "EN_over_nEA", "se_EN_over_nEA", "EN_over_n2VarA",
               "se_EN_over_n2VarA"});
  for (double n : config.n) {
    if (n != std::floor(n)) throw Error(ErrorCode::ConfigError, "compare-models needs integer n");
    const VarianceRatioReport report =
        variance_ratio_report(load_body(config.body), n, config.replicates, config.base_seed, config.workers);
    auto row = [&](const ModelMoments& mm) {
      table.add({config.body, n, std::string(to_string(mm.model)), mm.N.mean, mm.N.se_mean, mm.N.variance,
                 mm.N.se_variance, mm.A.mean, mm.A.se_mean, mm.A.variance, mm.A.se_variance, mm.mean_over_var.value,
                 mm.mean_over_var.se, mm.mean_over_area.value, mm.mean_over_area.se, mm.mean_over_varA.value,
                 mm.mean_over_varA.se});
    };
    row(report.poisson);
    row(report.uniform);
    // Standardized model differences, value columns only.
    auto z = [](double a, double sa, double b, double sb) { return (a - b) / std::sqrt(sa * sa + sb * sb); };
    const ModelMoments& p = report.poisson;
    const ModelMoments& u = report.uniform;
    table.add({config.body, n, std::string("z_diff"), z(p.N.mean, p.N.se_mean, u.N.mean, u.N.se_mean), kNaN,
               z(p.N.variance, p.N.se_variance, u.N.variance, u.N.se_variance), kNaN,
               z(p.A.mean, p.A.se_mean, u.A.mean, u.A.se_mean), kNaN,
               z(p.A.variance, p.A.se_variance, u.A.variance, u.A.se_variance), kNaN,
               z(p.mean_over_var.value, p.mean_over_var.se, u.mean_over_var.value, u.mean_over_var.se), kNaN,
               z(p.mean_over_area.value, p.mean_over_area.se, u.mean_over_area.value, u.mean_over_area.se), kNaN,
               z(p.mean_over_varA.value, p.mean_over_varA.se, u.mean_over_varA.value, u.mean_over_varA.se), kNaN});
  }
  return table;
}

// ---------------------------------------------------------------- wetpart

Table run_wetpart(const ExperimentConfig& config) {
  validate(config);
  Table table({"body", "n", "eps", "resolution", "wet_fraction", "tv_exact", "vervaat_bound", "p_event_poisson",
               "se_poisson", "p_event_uniform", "se_uniform", "coupling_bound"});
  const double eps = config.eps.value_or(0.05);
  for (double n : config.n) {
    const ConvexBody body = body_at(config, n);
    const double wet = wet_part_area(body, eps * n, config.resolution) / body.area();
    const bool integral = n == std::floor(n);
    const double tv = integral ? tv_poisson_binomial(static_cast<std::uint64_t>(n), wet) : kNaN;
    const WetPartTest test(body, eps * n, config.resolution);

    std::map<Model, std::pair<double, double>> event;
    for (Model model : selected_models(config)) {
      const std::uint64_t stream = model_stream_seed(model, config.base_seed);
      const auto hits = run_indexed(config.replicates, config.workers, [&](std::size_t i) {
        const std::uint64_t seed = replicate_seed(stream, i);
        const PointSample s =
            model == Model::Poisson ? poisson_points(body, 1.0, seed) : uniform_points(body, uniform_count(n), seed);
        return test.contains_boundary(functionals(body, s)) ? 1.0 : 0.0;
      });
      const double m = static_cast<double>(hits.size());
      const double p = pairwise_sum(hits) / m;
      event[model] = {p, std::sqrt(p * (1.0 - p) / m)};
    }
    auto get = [&](Model model, bool se) {
      auto it = event.find(model);
      if (it == event.end()) return kNaN;
      return se ? it->second.second : it->second.first;
    };
    // The two hulls coincide whenever both boundaries lie in the wet part and
    // the point sets agree there.
    double coupling = tv;
    for (Model model : {Model::Poisson, Model::Uniform}) {
      if (event.count(model)) coupling += 1.0 - event[model].first;
    }
    if (event.size() < 2) coupling = kNaN;
    table.add({config.body, n, eps, count(config.resolution), wet, tv, 2.0 * wet, get(Model::Poisson, false),
               get(Model::Poisson, true), get(Model::Uniform, false), get(Model::Uniform, true), coupling});
  }
  return table;
}

// ---------------------------------------------------------------- verify

std::vector<VerifyCheck> run_verify(const ExperimentConfig& config, const VerifyOptions& options) {
  validate(config);
  std::vector<std::string> names = options.corpus;
  if (std::find(names.begin(), names.end(), config.body) == names.end()) names.push_back(config.body);
  const std::size_t reps = std::max(config.replicates, options.min_replicates);
  std::vector<VerifyCheck> checks;
  auto record = [&](std::string name, std::string body, bool pass, double value, double threshold,
                    std::string detail = {}) {
    checks.push_back({std::move(name), std::move(body), pass, value, threshold, std::move(detail)});
  };

  // Chord monotonicity over every direction of the angular grid.
  for (const auto& name : names) {
    const ConvexBody body = load_body(name);
    double worst = -std::numeric_limits<double>::infinity();
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < config.resolution; ++j) {
      const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(config.resolution);
      const MonotonicityReport r = check_f_monotonicity(body, theta, 1000);
      worst = std::max(worst, r.max_violation);
      margin = std::min(margin, r.min_growth_margin / body.area());
    }
    record("f-monotonicity", name, worst <= 1e-9, worst, 1e-9);
    record("growth-margin", name, margin >= -1e-9, margin, -1e-9);
  }
  {
    const ConvexBody proxy = named_body("quadrant-proxy:1");
    const double theta = 7.0 * std::numbers::pi / 4.0;
    double worst = 0.0;
    for (int j = 1; j <= 1000; ++j) {
      const double r = proxy.area() * j / 1001.0;
      worst = std::max(worst, std::abs(f_of(proxy, std::exp(-r), theta) / std::sqrt(r) - 2.0));
    }
    record("quadrant-proxy-constant", "quadrant-proxy:1", worst <= 1e-8, worst, 1e-8);
  }

  // Uniform-model factor: bounds and the identities tying it to the kernel.
  for (double n : {10.0, 100.0, 1e4}) {
    std::vector<double> grid(1000);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = -n * static_cast<double>(i) / static_cast<double>(grid.size());
    const FactorBounds b = factor_bounds_check_log(n, grid);
    const double identity = factor_identity_violation(n, grid, options.factor);
    const std::string tag = "n=" + format_real(n);
    record("factor-max-over-1", tag, b.max_over_1 <= 1e-12, b.max_over_1, 1e-12);
    record("factor-scaled-gap", tag, std::isfinite(b.max_scaled_gap) && b.max_scaled_gap <= 1.0, b.max_scaled_gap, 1.0);
    record("factor-identity", tag, identity <= 1e-9, identity, 1e-9);
  }

  {
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 20; ++i) {
      const auto n = static_cast<std::uint64_t>(std::llround(std::pow(1000.0, i / 19.0)));
      for (int j = 0; j < 20; ++j) {
        const double p = 1e-3 * std::pow(500.0, j / 19.0);
        worst = std::max(worst, tv_poisson_binomial(n, p) - 2.0 * p);
      }
    }
    record("vervaat-grid", "-", worst <= 1e-12, worst, 1e-12);
  }

  // Angular decompositions telescope to N and A.
  Xoshiro256 rng(config.base_seed);
  for (const auto& name : names) {
    const ConvexBody body = normalize_area(load_body(name), 100.0);
    double worst_n = 0.0;
    double worst_a = 0.0;
    for (std::size_t t = 0; t < 20; ++t) {
      std::vector<double> bps = config.breakpoints;
      if (t > 0 || bps.empty()) {
        bps.resize(1 + rng() % 8);
        for (double& b : bps) b = kTwoPi * rng.uniform();
        std::sort(bps.begin(), bps.end());
        bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
      }
      const HullSummary hull = functionals(body, poisson_points(body, 1.0, replicate_seed(config.base_seed, t)));
      if (hull.N < 3) continue;
      const AngularDecomposition d = decompose(body, hull, bps);
      std::size_t sn = 0;
      for (auto v : d.N_parts) sn += v;
      worst_n = std::max(worst_n, std::abs(static_cast<double>(sn) - static_cast<double>(hull.N)));
      worst_a = std::max(worst_a, std::abs(pairwise_sum(d.A_parts) - hull.A) / body.area());
    }
    record("telescoping-N", name, worst_n == 0.0, worst_n, 0.0);
    record("telescoping-A", name, worst_a <= 1e-9, worst_a, 1e-9);
  }

  // W(θ) is uniform in cap coordinates for the Poisson model.
  {
    const ConvexBody body = normalize_area(load_body(config.body), 50.0);
    const WUniformityReport r = w_uniformity_test(body, 0.3, reps, config.base_seed, config.workers);
    const double crit = 1.5 * ks_critical_value(r.x.sample_size, 0.05);
    record("w-uniformity-x", config.body, r.x.statistic <= crit, r.x.statistic, crit);
    record("w-uniformity-y", config.body, r.y.statistic <= crit, r.y.statistic, crit);
  }

  // Efron identities. Poisson: E[N] = E[A] (paired). Uniform: E[N(P_n)] =
  // E[A(P_{n-1})] on a body of area n.
  constexpr double kSigma = 4.0;
  for (const auto& name : names) {
    {
      const double n = 100.0;
      const ConvexBody body = normalize_area(load_body(name), n);
      const auto rs = simulate(body, Model::Poisson, n, reps, config.base_seed, config.workers);
      std::vector<double> diff;
      for (const auto& r : rs) diff.push_back(static_cast<double>(r.N) - r.A);
      const EstimatorReport e = estimate(diff);
      const double z = e.mean / e.se_mean;
      record("efron-poisson", name, std::abs(z) <= kSigma, z, kSigma, "z of mean(N - A)");
    }
    {
      const double n = 20.0;
      const ConvexBody body = normalize_area(load_body(name), n);
      const std::uint64_t stream = model_stream_seed(Model::Uniform, config.base_seed);
      const EstimatorReport en = estimate(column_N(simulate(body, Model::Uniform, n, reps, stream, config.workers)));
      const EstimatorReport ea =
          estimate(column_A(simulate(body, Model::Uniform, n - 1.0, reps, splitmix64(stream), config.workers)));
      const double z = (en.mean - ea.mean) / std::hypot(en.se_mean, ea.se_mean);
      record("efron-uniform", name, std::abs(z) <= kSigma, z, kSigma, "z of E[N(P_20)] - E[A(P_19)]");
    }
  }

  // Ratios among E[N], Var N, n E[A], n² Var A stay bounded.
  for (const auto& name : names) {
    const VarianceRatioReport r = variance_ratio_report(load_body(name), 1000.0, reps, config.base_seed, config.workers);
    for (const ModelMoments* mm : {&r.poisson, &r.uniform}) {
      const double lo = std::min({mm->mean_over_var.value, mm->mean_over_area.value, mm->mean_over_varA.value});
      const double hi = std::max({mm->mean_over_var.value, mm->mean_over_area.value, mm->mean_over_varA.value});
      const bool ok = lo >= 0.1 && hi <= 10.0;
      record("ratio-bounds-" + std::string(to_string(mm->model)), name, ok, ok ? hi : (lo < 0.1 ? lo : hi), 10.0,
             "min " + format_real(lo) + " max " + format_real(hi) + " allowed [0.1, 10]");
    }
  }
  return checks;
}

Table verify_table(const std::vector<VerifyCheck>& checks) {
  Table table({"check", "body", "pass", "value", "threshold", "detail"});
  for (const auto& c : checks) {
    table.add({c.name, c.body, std::string(c.pass ? "PASS" : "FAIL"), c.value, c.threshold, c.detail});
  }
  return table;
}

// ---------------------------------------------------------------- output

void emit(const Table& table, const std::string& out, std::ostream& stdout_stream) {
  if (out.empty()) {
    table.write_csv(stdout_stream);
    return;
  }
  std::filesystem::path csv_path(out);
  std::filesystem::path json_path = csv_path;
  json_path.replace_extension(".jsonl");
  if (json_path == csv_path) json_path += ".jsonl";

  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw Error(ErrorCode::IoError, "cannot write " + csv_path.string());
  table.write_csv(csv);
  std::ofstream jsonl(json_path, std::ios::binary);
  if (!jsonl) throw Error(ErrorCode::IoError, "cannot write " + json_path.string());
  table.write_jsonl(jsonl);
  if (!csv.flush() || !jsonl.flush()) throw Error(ErrorCode::IoError, "write failed for " + out);
}

// ---------------------------------------------------------------- entry point

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random convex hulls in planar convex bodies: simulation, quadrature and checks.\n"
               "All sizes use the normalization Area(K) = n, intensity 1."};
  app.require_subcommand(1);
  app.footer("Exit codes: 0 success, 1 verification failure, 2 usage or config error, 3 I/O error.\n"
             "HULLLAB_WORKERS sets the default of --workers.");

  std::map<std::string, std::string> raw;
  std::vector<std::pair<std::string, CLI::Option*>> flags;
  auto flag = [&](const std::string& key, const std::string& help) {
    flags.emplace_back(key, app.add_option("--" + key, raw[key], help));
  };
  flag("body", "square | triangle | hexagon | disk:<m> | quadrant-proxy:<side> | path to a body file");
  flag("model", "poisson | uniform | both (default both)");
  flag("n", "comma-separated list of sizes; the body is scaled to area n (default 100)");
  flag("reps", "replicates per model and n (default 1000)");
  flag("seed", "64-bit base seed");
  flag("breakpoints", "comma-separated increasing angles in [0, 2*pi) for angular decompositions");
  flag("eps", "wet-part cap area as a fraction of Area(K) (default 0.05)");
  flag("resolution", "angular grid size for wet parts and monotonicity checks (default 360)");
  flag("rel-tol", "relative tolerance of the expectation quadrature (default 1e-8)");
  flag("workers", "worker threads, 0 = all cores");
  flag("out", "output CSV path; a .jsonl mirror is written next to it (default stdout, CSV only)");
  std::string config_path;
  app.add_option("--config", config_path, "key = value file; flags override its entries");

  struct Command {
    std::string name;
    std::string help;
  };
  const std::vector<Command> commands = {
      {"sample", "per-replicate N, A and edge-angle range"},
      {"expect", "quadrature E[N], E[A] against Monte Carlo, with the model gap"},
      {"clt", "Kolmogorov distance of standardized N, A to the normal law, and between models"},
      {"compare-models", "moments of N and A for both models and their ratios"},
      {"wetpart", "wet-part area, Poisson-binomial distance and hull-in-wet-part frequencies"},
      {"verify", "property suite over the standard corpus"},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->fallthrough();
    subs[c.name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    ExperimentConfig config;
    const bool workers_flag = std::any_of(flags.begin(), flags.end(), [](const auto& f) {
      return f.first == "workers" && f.second->count() > 0;
    });
    if (const char* env = std::getenv("HULLLAB_WORKERS"); env && *env && !workers_flag) assign(config, "workers", env);
    if (!config_path.empty()) config = load_config(config_path, config);
    for (const auto& [key, option] : flags) {
      if (option->count() > 0) assign(config, key, raw[key]);
    }
    validate(config);

    if (subs["verify"]->parsed()) {
      const auto checks = run_verify(config);
      emit(verify_table(checks), config.out, out);
      const auto passed = std::count_if(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.pass; });
      err << "verify: " << passed << "/" << checks.size() << " checks passed\n";
      return passed == static_cast<std::ptrdiff_t>(checks.size()) ? 0 : 1;
    }
    Table table({});
    if (subs["sample"]->parsed()) {
      table = run_sample(config);
    } else if (subs["expect"]->parsed()) {
      table = run_expect(config);
    } else if (subs["clt"]->parsed()) {
      table = run_clt(config);
    } else if (subs["compare-models"]->parsed()) {
      table = run_compare_models(config);
    } else {
      table = run_wetpart(config);
    }
    emit(table, config.out, out);
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::ConfigError:
      case ErrorCode::DomainError:
      case ErrorCode::AreaOutOfRange:
      case ErrorCode::ResolutionTooCoarse:
        return 2;
      case ErrorCode::ParseError:
      case ErrorCode::IoError:
      case ErrorCode::NonConvexInput:
      case ErrorCode::DegenerateInput:
        return 3;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace hulllab::cli
