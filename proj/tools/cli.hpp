#ifndef FREEINEQ_CLI_HPP
#define FREEINEQ_CLI_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace freeineq::cli {

// Everything a run needs, merged from --config and the command line.
struct RunConfig {
  std::string command;
  std::string family = "quadratic";
  std::optional<double> rho;
  std::optional<double> p;
  std::optional<double> kappa;
  std::optional<double> r;
  std::optional<double> s;

  std::string kind;
  std::string measure = "equilibrium";
  std::string phi = "chebyshev:2";
  std::optional<int> count;
  std::optional<unsigned long long> seed;
  std::optional<double> curvature;
  std::optional<double> order;
  std::vector<double> weights{0.25, 0.5, 0.75};
  std::vector<int> n;

  int coefficients = 128;
  int basis = 32;
  int points = 201;
  std::optional<double> tolerance;
  std::string out = "freeineq_out";
};

// Keys accepted in a config file; the same names are the long flags.
const std::vector<std::string>& config_keys();

// Builds a config from JSON text and string-valued flag overrides (flags win).
RunConfig merge_config(const std::string& command, const std::string& json_text,
                       const std::map<std::string, std::string>& flags);

int run_equilibrium(const RunConfig& cfg, std::ostream& err);
int run_verify(const RunConfig& cfg, std::ostream& err);
int run_counterexample(const RunConfig& cfg, std::ostream& err);

// Full command line entry point; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace freeineq::cli

#endif
