#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lattice::cli {

enum ExitCode { kOk = 0, kValidation = 2, kNumerical = 3, kResource = 4 };

struct RunConfig {
  std::string command;
  std::string input;
  std::string output;
  std::optional<std::string> convention;
  std::vector<double> lambdas;
  std::string lambda_grid;  // "a:b:n", n points with both ends included
  double lambda_im = 0;
  std::string side = "off";  // resolvent: off | plus | minus
  int grid = 0;              // 0 picks the default for the dimension
  int digits = 60;
  double tolerance = 1e-6;
  std::uint64_t seed = 20240607;
  // command specific
  int dim = 0;
  std::vector<int> offset;
  std::string method = "auto";
  int nmax = 5;
  int oracle_l = 0;
  int support_bound = -1;
  std::vector<double> ladder;
  int per_axis = 4;
  bool refine = true;
  double noise = 0;
  std::string data;
  std::string diagnostics;
  std::string smat;
  bool allow_partial_chart = false;
};

// Canonical JSON of the configuration (used for the config hash).
std::string config_json(const RunConfig& c);

// Parses argv, runs the command and returns the exit code. Reports go to the output path
// (or `out` when none is given); error messages go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lattice::cli
