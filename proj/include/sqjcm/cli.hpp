#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sqjcm {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitDomain = 3,
  kExitTruncation = 4,
};

/// Flags shared by every subcommand, merged from defaults < config file < command line.
struct RunConfig {
  double theta = 2.23606797749978969640917;  // sqrt(5)
  double theta_im = 0.0;
  double r = 0.0;
  double squeeze_phase = 0.0;
  double lambda1 = 0.5;
  double g = 1.0;
  double omega0 = 1.0;
  std::optional<std::string> mode;  // subcommand default when unset
  std::string base = "e";
  double tail_eps = 1e-12;
  int max_cutoff = 8192;
  std::string format = "csv";
  std::string output;
  int workers = 1;
  bool deterministic = true;

  std::optional<double> t;
  double t_max = 25.0;
  int steps = 500;
  bool time_grid = false;
  double lambda_step = 0.05;
  double r_max = 3.0;
  double r_step = 0.25;
  int n_max = 40;
  bool gnuplot = false;

  // Throws DomainError naming the first invalid flag.
  void validate() const;
};

/// Entry point behind the `sqjcm` executable. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sqjcm
