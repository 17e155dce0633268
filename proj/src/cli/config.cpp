#include "hulllab/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hulllab::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view why) {
  throw Error(ErrorCode::ConfigError,
              "invalid value '" + std::string(value) + "' for " + std::string(key) + ": " + std::string(why));
}

template <typename T>
T parse_scalar(std::string_view key, std::string_view text) {
  text = trim(text);
  T out{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  if (text.empty() || ec != std::errc() || ptr != end) bad(key, text, "not a number");
  return out;
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.push_back(parse_scalar<double>(key, item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string join(const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) s += ',';
    s += format_real(values[i]);
  }
  return s;
}

}  // namespace

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void assign(ExperimentConfig& config, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "body") {
    if (value.empty()) bad(key, value, "empty");
    config.body = std::string(value);
  } else if (key == "model") {
    config.model = std::string(value);
  } else if (key == "n") {
    config.n = parse_list(key, value);
  } else if (key == "reps" || key == "replicates") {
    config.replicates = parse_scalar<std::size_t>(key, value);
  } else if (key == "seed") {
    config.base_seed = parse_scalar<std::uint64_t>(key, value);
  } else if (key == "breakpoints") {
    config.breakpoints = parse_list(key, value);
  } else if (key == "eps") {
    if (value.empty()) {
      config.eps.reset();
    } else {
      config.eps = parse_scalar<double>(key, value);
    }
  } else if (key == "resolution") {
    config.resolution = parse_scalar<std::size_t>(key, value);
  } else if (key == "rel-tol" || key == "rel_tol") {
    config.rel_tol = parse_scalar<double>(key, value);
  } else if (key == "workers") {
    config.workers = parse_scalar<std::size_t>(key, value);
  } else if (key == "out") {
    config.out = std::string(value);
  } else {
    throw Error(ErrorCode::ConfigError, "unknown config key '" + std::string(key) + "'");
  }
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig config) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": expected key = value");
    }
    assign(config, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

std::string serialize(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "body = " << c.body << "\n";
  out << "model = " << c.model << "\n";
  out << "n = " << join(c.n) << "\n";
  out << "reps = " << c.replicates << "\n";
  out << "seed = " << c.base_seed << "\n";
  out << "breakpoints = " << join(c.breakpoints) << "\n";
  out << "eps = " << (c.eps ? format_real(*c.eps) : std::string()) << "\n";
  out << "resolution = " << c.resolution << "\n";
  out << "rel-tol = " << format_real(c.rel_tol) << "\n";
  out << "workers = " << c.workers << "\n";
  out << "out = " << c.out << "\n";
  return out.str();
}

void validate(const ExperimentConfig& c) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::ConfigError, why); };
  if (c.model != "poisson" && c.model != "uniform" && c.model != "both") fail("model must be poisson, uniform or both");
  if (c.n.empty()) fail("n needs at least one value");
  for (double n : c.n) {
    if (!(n >= 1) || !std::isfinite(n)) fail("every n must be a finite value >= 1");
    if (c.model != "poisson" && n != std::floor(n)) fail("the uniform model needs integer n");
  }
  if (c.replicates < 1) fail("reps must be at least 1");
  for (std::size_t i = 0; i < c.breakpoints.size(); ++i) {
    const double b = c.breakpoints[i];
    if (!(b >= 0 && b < kTwoPi)) fail("breakpoints must lie in [0, 2*pi)");
    if (i > 0 && !(b > c.breakpoints[i - 1])) fail("breakpoints must be strictly increasing");
  }
  if (c.eps && !(*c.eps >= 0 && *c.eps <= 0.5)) fail("eps is a fraction of Area(K) in [0, 0.5]");
  if (c.resolution < 8) fail("resolution must be at least 8");
  if (!(c.rel_tol >= 1e-10 && c.rel_tol <= 1e-2)) fail("rel-tol must lie in [1e-10, 1e-2]");
}

std::vector<Model> selected_models(const ExperimentConfig& c) {
  if (c.model == "poisson") return {Model::Poisson};
  if (c.model == "uniform") return {Model::Uniform};
  return {Model::Poisson, Model::Uniform};
}

}  // namespace hulllab::cli
