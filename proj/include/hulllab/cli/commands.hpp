#pragma once

#include "hulllab/cli/config.hpp"
#include "hulllab/integeo.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace hulllab::cli {

/// Rectangular result table, written as CSV and as JSON lines.
class Table {
 public:
  using Cell = std::variant<std::monostate, std::string, std::int64_t, std::uint64_t, double>;

  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add(std::vector<Cell> row);
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }

  /// Reals use 17 significant digits; empty cells and NaN print as "nan" / "".
  void write_csv(std::ostream& out) const;
  /// One object per row; NaN and empty cells become null.
  void write_jsonl(std::ostream& out) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

Table run_sample(const ExperimentConfig& config);
Table run_expect(const ExperimentConfig& config);
Table run_clt(const ExperimentConfig& config);
Table run_compare_models(const ExperimentConfig& config);
Table run_wetpart(const ExperimentConfig& config);

struct VerifyCheck {
  std::string name;
  std::string body;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct VerifyOptions {
  std::vector<std::string> corpus = {"square", "triangle", "hexagon", "disk:256"};
  /// Replaces model_factor_log inside the factor checks.
  FactorFn factor;
  /// Floor on the replicate count of the statistical checks.
  std::size_t min_replicates = 1000;
};

std::vector<VerifyCheck> run_verify(const ExperimentConfig& config, const VerifyOptions& options = {});
Table verify_table(const std::vector<VerifyCheck>& checks);

/// CSV to `out` (stdout when empty) plus a .jsonl mirror next to it.
void emit(const Table& table, const std::string& out, std::ostream& stdout_stream);

/// Entry point of the hulllab tool. Returns the process exit code:
/// 0 success, 1 verification failure, 2 usage or config error, 3 I/O error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hulllab::cli
