#pragma once

#include "hulllab/sample.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hulllab::cli {

/// One experiment. Every size parameter uses the normalization Area(K) = n
/// with λ = 1: the Poisson model has mean n points, the uniform model exactly
/// n points.
struct ExperimentConfig {
  std::string body = "square";
  std::string model = "both";  ///< poisson | uniform | both
  std::vector<double> n = {100.0};
  std::size_t replicates = 1000;
  std::uint64_t base_seed = 20100602;
  std::vector<double> breakpoints;
  std::optional<double> eps;  ///< fraction of Area(K)
  std::size_t resolution = 360;
  double rel_tol = 1e-8;
  std::size_t workers = 0;  ///< 0 = hardware concurrency
  std::string out;          ///< empty = stdout

  bool operator==(const ExperimentConfig&) const = default;
};

/// Throws Error(ConfigError) on the first out-of-range field.
void validate(const ExperimentConfig& config);

std::vector<Model> selected_models(const ExperimentConfig& config);

/// Applies one `key = value` assignment. Keys match the long flag names
/// without dashes (body, model, n, reps, seed, breakpoints, eps, resolution,
/// rel-tol, workers, out).
void assign(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Line-oriented `key = value` text; `#` starts a comment.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});
std::string serialize(const ExperimentConfig& config);

/// Number formatting shared by every CSV writer: 17 significant digits.
std::string format_real(double value);

}  // namespace hulllab::cli
