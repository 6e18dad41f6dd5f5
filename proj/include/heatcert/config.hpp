#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "heatcert/bounds.hpp"
#include "heatcert/format.hpp"
#include "heatcert/verify.hpp"

namespace heatcert {

/// Invalid or unreadable run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One run of the benchmark u_t - Delta u = u^p with u_0 = gamma psi_(1,...,1).
struct RunConfig {
  double gamma = 0.0;
  int p = 2;
  int d = 2;
  int N = 5;
  Rational alpha{3, 8};
  double mu = 70.0;
  double T = 0.25;
  double tau0 = 1e-3;
  /// Adaptive growth cap; 0 means tau0.
  double tau_max = 0.0;
  EpsilonMode mode = EpsilonMode::grouped;
  StepPolicy step_policy = StepPolicy::adaptive;
  double eps0 = 0.0;
  double rho_margin = 0.01;
  double solver_tol = 1e-12;
  std::filesystem::path output_dir = "heatcert-out";

  ProblemParams params() const { return ProblemParams(d, p, alpha, mu, gamma, N); }

  SineSeries<double> initial_data() const {
    MultiIndex ones{};
    for (int k = 0; k < d; ++k) ones[k] = 1;
    return SineSeries<double>::mode(d, N, ones, gamma);
  }

  ConcatenationOptions options(int threads = 1) const {
    ConcatenationOptions o;
    o.t_end = T;
    o.tau0 = tau0;
    o.tau_max = tau_max;
    o.eps0 = Interval(eps0);
    o.mode = mode;
    o.policy = step_policy;
    o.solver.tol = solver_tol;
    o.verify.rho_margin = rho_margin;
    o.verify.threads = threads;
    return o;
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T v{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size())
    throw ConfigError("'" + std::string(key) + "': cannot parse '" + std::string(text) + "' as a number");
  if constexpr (std::is_floating_point_v<T>)
    if (!std::isfinite(v)) throw ConfigError("'" + std::string(key) + "' must be finite");
  return v;
}

inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) throw ConfigError("'alpha' must be a fraction such as 3/8");
  const auto num = parse_number<long long>("alpha", trim(text.substr(0, slash)));
  const auto den = parse_number<long long>("alpha", trim(text.substr(slash + 1)));
  if (den <= 0) throw ConfigError("'alpha' needs a positive denominator");
  return {num, den};
}

}  // namespace detail

/// Parses flat `key = value` lines; `#` starts a comment. Unknown or repeated keys are errors.
inline RunConfig parse_config(std::istream& in) {
  using detail::parse_number;
  RunConfig c;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s(line);
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = detail::trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
    const std::string key(detail::trim(s.substr(0, eq)));
    const std::string_view value = detail::trim(s.substr(eq + 1));
    if (value.empty()) throw ConfigError(where + "'" + key + "' has no value");
    if (!seen.insert(key).second) throw ConfigError(where + "'" + key + "' given twice");
    try {
      if (key == "gamma") c.gamma = parse_number<double>(key, value);
      else if (key == "p") c.p = parse_number<int>(key, value);
      else if (key == "d") c.d = parse_number<int>(key, value);
      else if (key == "N") c.N = parse_number<int>(key, value);
      else if (key == "alpha") c.alpha = detail::parse_rational(value);
      else if (key == "mu") c.mu = parse_number<double>(key, value);
      else if (key == "T") c.T = parse_number<double>(key, value);
      else if (key == "tau0") c.tau0 = parse_number<double>(key, value);
      else if (key == "tau_max") c.tau_max = parse_number<double>(key, value);
      else if (key == "eps0") c.eps0 = parse_number<double>(key, value);
      else if (key == "rho_margin") c.rho_margin = parse_number<double>(key, value);
      else if (key == "solver_tol") c.solver_tol = parse_number<double>(key, value);
      else if (key == "output_dir") c.output_dir = std::string(value);
      else if (key == "mode") {
        if (value == "grouped") c.mode = EpsilonMode::grouped;
        else if (value == "naive") c.mode = EpsilonMode::naive;
        else throw ConfigError("'mode' must be grouped or naive");
      } else if (key == "step_policy") {
        if (value == "adaptive") c.step_policy = StepPolicy::adaptive;
        else if (value == "fixed") c.step_policy = StepPolicy::fixed;
        else throw ConfigError("'step_policy' must be adaptive or fixed");
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }

  if (c.p != 2) throw ConfigError("only p = 2 is supported");
  if (!(c.T > 0.0)) throw ConfigError("T must be positive");
  if (!(c.tau0 > 0.0) || c.tau0 > c.T) throw ConfigError("tau0 must lie in (0, T]");
  if (c.tau_max < 0.0) throw ConfigError("tau_max must be nonnegative");
  if (c.eps0 < 0.0) throw ConfigError("eps0 must be nonnegative");
  if (c.rho_margin < 0.0) throw ConfigError("rho_margin must be nonnegative");
  if (!(c.solver_tol > 0.0)) throw ConfigError("solver_tol must be positive");
  try {
    (void)c.params();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

inline RunConfig parse_config(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  return parse_config(in);
}

}  // namespace heatcert
