#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "heatcert/config.hpp"
#include "heatcert/format.hpp"
#include "heatcert/verify.hpp"

namespace heatcert {

/// Missing or malformed run artifacts.
class ArtifactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void write_certificates(std::ostream& os, const VerificationRun& run) {
  os << "i,t_start,t_end,tau,sigma_lo,sigma_hi,delta_hi,rho_lo,rho_hi,nu_hi,eps_hi,decay_hi,verified\n";
  for (const auto& c : run.certificates) {
    os << c.index << ',' << shortest(c.t_start) << ',' << shortest(c.t_end) << ',' << shortest(c.tau.hi()) << ','
       << shortest(c.sigma.lo()) << ',' << shortest(c.sigma.hi()) << ',' << shortest(c.delta.hi()) << ','
       << shortest(c.rho.lo()) << ',' << shortest(c.rho.hi()) << ',' << shortest(c.nu.hi()) << ','
       << shortest(c.epsilon.hi()) << ',' << shortest(c.decay.hi()) << ',' << (c.verified ? 1 : 0) << '\n';
  }
}

/// Verified radii and pointwise errors against time, one row per verified interval.
inline void write_rho_vs_t(std::ostream& os, const VerificationRun& run) {
  os << "t_start,t_end,rho_hi,eps_hi\n";
  for (const auto& c : run.certificates)
    if (c.verified)
      os << shortest(c.t_start) << ',' << shortest(c.t_end) << ',' << shortest(c.rho.hi()) << ','
         << shortest(c.epsilon.hi()) << '\n';
}

inline std::string to_string(const Rational& r) { return std::to_string(r.num) + "/" + std::to_string(r.den); }

/// key=value summary; the problem keys are what `compare` matches on.
inline void write_summary(std::ostream& os, const VerificationRun& run, const RunConfig& config, double wall_seconds) {
  std::size_t verified = 0;
  for (const auto& c : run.certificates) verified += c.verified;
  const bool failed = !run.certificates.empty() && !run.certificates.back().verified;
  os << "last_verified_time=" << shortest(run.last_verified_time()) << '\n'
     << "reached_end=" << (run.reached_end() ? "true" : "false") << '\n'
     << "mode=" << to_string(config.mode) << '\n'
     << "step_policy=" << to_string(config.step_policy) << '\n'
     << "steps_verified=" << verified << '\n'
     << "failure=" << (failed ? run.certificates.back().reason : std::string("none")) << '\n'
     << "wall_time_seconds=" << shortest(wall_seconds) << '\n'
     << "gamma=" << shortest(config.gamma) << '\n'
     << "p=" << config.p << '\n'
     << "d=" << config.d << '\n'
     << "N=" << config.N << '\n'
     << "alpha=" << to_string(config.alpha) << '\n'
     << "mu=" << shortest(config.mu) << '\n'
     << "T=" << shortest(config.T) << '\n'
     << "tau0=" << shortest(config.tau0) << '\n'
     << "eps0=" << shortest(config.eps0) << '\n';
}

/// Writes certificates.csv, rho_vs_t.csv, snapshots.csv and run_summary.txt into dir.
inline void write_artifacts(const std::filesystem::path& dir, const VerificationRun& run, const RunConfig& config,
                            double wall_seconds) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ArtifactError("cannot create " + dir.string() + ": " + ec.message());
  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw ArtifactError("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("certificates.csv");
    write_certificates(f, run);
  }
  {
    auto f = open("rho_vs_t.csv");
    write_rho_vs_t(f, run);
  }
  {
    auto f = open("snapshots.csv");
    write_snapshots(f, run.omega);
  }
  {
    auto f = open("run_summary.txt");
    write_summary(f, run, config, wall_seconds);
  }
}

/// One row of certificates.csv as read back for comparison.
struct CertificateRow {
  double t_start = 0.0;
  double t_end = 0.0;
  double rho_hi = 0.0;
  double eps_hi = 0.0;
  bool verified = false;
};

/// Artifacts of a finished run.
struct RunArtifacts {
  std::filesystem::path dir;
  std::map<std::string, std::string> summary;
  std::vector<CertificateRow> rows;

  double last_verified_time() const { return detail::parse_number<double>("last_verified_time", summary.at("last_verified_time")); }
};

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace detail

inline RunArtifacts read_artifacts(const std::filesystem::path& dir) {
  RunArtifacts a;
  a.dir = dir;
  std::ifstream summary(dir / "run_summary.txt");
  if (!summary) throw ArtifactError("cannot read " + (dir / "run_summary.txt").string());
  std::string line;
  while (std::getline(summary, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    a.summary[line.substr(0, eq)] = line.substr(eq + 1);
  }
  if (!a.summary.count("last_verified_time")) throw ArtifactError(dir.string() + ": run_summary.txt is incomplete");

  std::ifstream csv(dir / "certificates.csv");
  if (!csv) throw ArtifactError("cannot read " + (dir / "certificates.csv").string());
  std::getline(csv, line);
  const auto header = detail::split(line, ',');
  auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ArtifactError(dir.string() + ": certificates.csv lacks column " + name);
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t ts = column("t_start"), te = column("t_end"), rho = column("rho_hi"), eps = column("eps_hi"),
                    ok = column("verified");
  try {
    while (std::getline(csv, line)) {
      if (line.empty()) continue;
      const auto cells = detail::split(line, ',');
      if (cells.size() != header.size()) throw ArtifactError(dir.string() + ": ragged row in certificates.csv");
      a.rows.push_back({detail::parse_number<double>("t_start", cells[ts]), detail::parse_number<double>("t_end", cells[te]),
                        detail::parse_number<double>("rho_hi", cells[rho]),
                        detail::parse_number<double>("eps_hi", cells[eps]), cells[ok] == "1"});
    }
  } catch (const ConfigError& e) {
    throw ArtifactError(dir.string() + ": " + e.what());
  }
  return a;
}

/// Prints runs A and B side by side at every verified interval end of either run and
/// names the run that verified further. Throws if the problems differ.
inline void compare_runs(const RunArtifacts& a, const RunArtifacts& b, std::ostream& os) {
  static const char* kProblemKeys[] = {"gamma", "p", "d", "N", "alpha", "mu", "T", "eps0"};
  for (const char* key : kProblemKeys) {
    const auto ia = a.summary.find(key), ib = b.summary.find(key);
    if (ia == a.summary.end() || ib == b.summary.end())
      throw ArtifactError(std::string("run summary lacks '") + key + "'");
    if (ia->second != ib->second)
      throw ArtifactError(std::string("runs solve different problems: ") + key + " = " + ia->second + " vs " + ib->second);
  }

  os << "problem:";
  for (const char* key : kProblemKeys) os << ' ' << key << '=' << a.summary.at(key);
  os << '\n';
  auto describe = [&](const char* tag, const RunArtifacts& r) {
    os << tag << ": " << r.dir.string() << " mode=" << r.summary.at("mode") << " step_policy=" << r.summary.at("step_policy")
       << " tau0=" << r.summary.at("tau0") << " last_verified_time=" << r.summary.at("last_verified_time") << '\n';
  };
  describe("A", a);
  describe("B", b);

  std::vector<double> times;
  for (const auto* r : {&a, &b})
    for (const auto& row : r->rows)
      if (row.verified) times.push_back(row.t_end);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  auto lookup = [](const RunArtifacts& r, double t) -> const CertificateRow* {
    for (const auto& row : r.rows)
      if (row.verified && row.t_start < t && t <= row.t_end) return &row;
    return nullptr;
  };
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-24s %-24s %-24s %-24s %s\n", "t", "rho_A", "eps_A", "rho_B", "eps_B");
  os << buf;
  for (double t : times) {
    const auto* ra = lookup(a, t);
    const auto* rb = lookup(b, t);
    std::snprintf(buf, sizeof buf, "%-24s %-24s %-24s %-24s %s\n", shortest(t).c_str(),
                  ra ? shortest(ra->rho_hi).c_str() : "-", ra ? shortest(ra->eps_hi).c_str() : "-",
                  rb ? shortest(rb->rho_hi).c_str() : "-", rb ? shortest(rb->eps_hi).c_str() : "-");
    os << buf;
  }

  const double ta = a.last_verified_time(), tb = b.last_verified_time();
  if (ta > tb) os << "A verified further: " << shortest(ta) << " > " << shortest(tb) << '\n';
  else if (tb > ta) os << "B verified further: " << shortest(tb) << " > " << shortest(ta) << '\n';
  else os << "both runs verified to " << shortest(ta) << '\n';
}

}  // namespace heatcert
