#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wasp/differentiators.hpp"
#include "wasp/function.hpp"

namespace wasp {

// One CSV row. Fields that do not apply to a given evaluation or condition
// stay disengaged and print as empty cells, so every row has the same column
// count. The forward-pass count is always the exact counter delta of the
// function instance the row describes.
struct ExperimentRecord {
  int eval = 0;
  std::optional<int> sub;
  std::string condition;
  std::optional<int> n;
  std::optional<int> m;
  std::optional<int> o;
  std::optional<int> w;
  std::optional<double> lambda;
  std::optional<double> d_theta;
  std::optional<double> d_ell;
  std::uint64_t seed = 0;
  std::optional<long> k;  // step or trial index for per-item rows
  std::optional<double> runtime_s;
  std::optional<std::uint64_t> calls;
  std::optional<double> angular_err;
  std::optional<double> norm_err;
  std::optional<double> iters;
  std::optional<int> converged;
};

inline constexpr const char* kCsvHeader =
    "eval,sub,condition,n,m,o,w,lambda,d_theta,d_ell,seed,k,runtime_s,calls,"
    "angular_err,norm_err,iters,converged";

// Writes comment lines (prefixed '#'), the header row, then one line per
// record. Floats are rendered with %.12g, so identical records always
// serialize to identical bytes. A generation timestamp appears only when
// with_timestamp is set; nothing else in the file is time-dependent.
void write_records_csv(const std::vector<ExperimentRecord>& records,
                       std::ostream& out, bool with_timestamp);
void write_records_csv(const std::vector<ExperimentRecord>& records,
                       const std::string& path, bool with_timestamp);

// Derivative-tracking sweeps over the synthetic benchmark family. Three
// sub-experiments share the machinery: 1 sweeps input dimension at m=1,
// 2 sweeps n=m jointly, 3 sweeps the walk step length at n=m=10. Every
// condition at a grid point sees the same function and the same walk.
struct Eval1Params {
  int sub = 1;
  // Empty grids fall back to the sub's defaults (desk scale, or the full
  // published grids when full_scale is set).
  std::vector<int> n_grid;
  std::vector<double> lambda_grid;
  int m = 0;  // 0 keeps the sub's default; sub 2 always forces m = n
  int o = 1000;
  int w = 100;
  double lambda = 0.05;
  double d_theta = 0.1;
  double d_ell = 0.1;
  std::uint64_t seed = 1;
  std::vector<std::string> conditions = {"FD", "SPSA", "WASP-O", "WASP-NO"};
  double epsilon = kDefaultFdEpsilon;
  double spsa_c = kDefaultSpsaC;
  bool full_scale = false;
  bool timing = true;
  int workers = 0;  // 0: WASP_WORKERS environment variable, else 1
};

// One aggregate row per (grid point, condition): mean per-derivative runtime,
// total forward passes, mean errors against the analytic Jacobian, mean
// corrective iterations.
std::vector<ExperimentRecord> run_eval1(const Eval1Params& params);

// Long-sequence tracking at n=50, m=1: per-derivative rows for one fixed
// orthonormal probe matrix shared across every threshold setting, plus a
// full-finite-differencing baseline block on the same walk.
struct Eval2Params {
  std::vector<double> thresholds = {0.001, 0.01, 0.1, 0.25, 0.5, 0.75, 1.0};
  int n = 50;
  int m = 1;
  int o = 1000;
  int w = 0;  // 0 resolves to the scale default: 5000 desk, 50000 full
  double lambda = 0.05;
  std::uint64_t seed = 1;
  std::vector<std::string> conditions = {"WASP-O", "FD"};
  double epsilon = kDefaultFdEpsilon;
  bool full_scale = false;
  bool timing = true;
  int workers = 0;
};

std::vector<ExperimentRecord> run_eval2(const Eval2Params& params);

// Root-finding trials on the 24-dof branched chain with 5 end-effector
// targets. Targets are planted by sampling a feasible configuration, so a
// root always exists; every condition in a trial gets the same targets and
// the same start.
struct Eval3Params {
  int trials = 0;  // 0 resolves to the scale default: 10 desk, 50 full
  double alpha = 0.004;
  double tol = 1e-4;
  int max_iters = 10000;
  double d_theta = 0.1;
  double d_ell = 0.1;
  std::uint64_t seed = 1;
  std::vector<std::string> conditions = {"FD", "SPSA", "WASP-O", "WASP-NO"};
  double epsilon = kDefaultFdEpsilon;
  double spsa_c = kDefaultSpsaC;
  bool full_scale = false;  // raises trials to 50
  bool timing = true;
  int workers = 0;
};

std::vector<ExperimentRecord> run_eval3(const Eval3Params& params);

// Published default grids, shared by the CLI and the test suites.
std::vector<int> eval1_default_n_grid(int sub, bool full_scale);
std::vector<double> eval1_default_lambda_grid();

}  // namespace wasp
