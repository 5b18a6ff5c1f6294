#include "wasp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "wasp/benchmark.hpp"
#include "wasp/chain.hpp"
#include "wasp/root_finding.hpp"
#include "wasp/rng.hpp"
#include "wasp/tangent.hpp"

namespace wasp {

namespace {

// Seed-stream tags. Every task derives its generators from the master seed
// through mix_seed, so results are independent of worker count and schedule.
constexpr std::uint64_t kBenchStream = 1;
constexpr std::uint64_t kWalkStream = 2;
constexpr std::uint64_t kTangentStream = 3;
constexpr std::uint64_t kSampleStream = 4;
constexpr std::uint64_t kConditionStream0 = 16;
constexpr std::uint64_t kEval1PointTag = 0x100;
constexpr std::uint64_t kEval2Tag = 0x200;
constexpr std::uint64_t kEval3TrialTag = 0x300;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void append_cell(std::string& line, const std::optional<int>& v) {
  if (v) line += std::to_string(*v);
}

void append_cell(std::string& line, const std::optional<long>& v) {
  if (v) line += std::to_string(*v);
}

void append_cell(std::string& line, const std::optional<std::uint64_t>& v) {
  if (v) line += std::to_string(*v);
}

void append_cell(std::string& line, const std::optional<double>& v) {
  if (v) line += format_double(*v);
}

bool is_wasp_condition(const std::string& name) {
  return name == "WASP-O" || name == "WASP-NO";
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("WASP_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 1024) {
      throw std::runtime_error(
          "WASP_WORKERS must be an integer in [1, 1024], got '" +
          std::string(env) + "'");
    }
    return static_cast<int>(v);
  }
  return 1;
}

using Task = std::function<std::vector<ExperimentRecord>()>;

// Executes tasks on a small pool and concatenates the results in task order,
// so the output is identical for any worker count.
std::vector<ExperimentRecord> run_tasks(const std::vector<Task>& tasks,
                                        int workers) {
  std::vector<std::vector<ExperimentRecord>> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());

  const int pool = std::max(
      1, std::min(workers, static_cast<int>(tasks.size())));
  if (pool == 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      results[i] = tasks[i]();
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) return;
        try {
          results[i] = tasks[i]();
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> threads;
    threads.reserve(pool);
    for (int t = 0; t < pool; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::vector<ExperimentRecord> merged;
  for (std::vector<ExperimentRecord>& part : results) {
    merged.insert(merged.end(), std::make_move_iterator(part.begin()),
                  std::make_move_iterator(part.end()));
  }
  return merged;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

void validate_conditions(const std::vector<std::string>& conditions,
                         bool allow_all) {
  if (conditions.empty()) {
    throw std::invalid_argument("conditions must not be empty");
  }
  for (const std::string& c : conditions) {
    const bool known = c == "FD" || c == "SPSA" || c == "WASP-O" ||
                       c == "WASP-NO";
    const bool eval2_known = c == "FD" || c == "WASP-O";
    if (allow_all ? !known : !eval2_known) {
      throw std::invalid_argument("unknown condition '" + c + "'");
    }
  }
}

}  // namespace

void write_records_csv(const std::vector<ExperimentRecord>& records,
                       std::ostream& out, bool with_timestamp) {
  if (with_timestamp) {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    out << "# generated " << stamp << "\n";
  }
  out << kCsvHeader << "\n";
  for (const ExperimentRecord& r : records) {
    std::string line = std::to_string(r.eval);
    line += ',';
    append_cell(line, r.sub);
    line += ',';
    line += r.condition;
    line += ',';
    append_cell(line, r.n);
    line += ',';
    append_cell(line, r.m);
    line += ',';
    append_cell(line, r.o);
    line += ',';
    append_cell(line, r.w);
    line += ',';
    append_cell(line, r.lambda);
    line += ',';
    append_cell(line, r.d_theta);
    line += ',';
    append_cell(line, r.d_ell);
    line += ',';
    line += std::to_string(r.seed);
    line += ',';
    append_cell(line, r.k);
    line += ',';
    append_cell(line, r.runtime_s);
    line += ',';
    append_cell(line, r.calls);
    line += ',';
    append_cell(line, r.angular_err);
    line += ',';
    append_cell(line, r.norm_err);
    line += ',';
    append_cell(line, r.iters);
    line += ',';
    append_cell(line, r.converged);
    out << line << "\n";
  }
  if (!out) throw std::runtime_error("write_records_csv: write failed");
}

void write_records_csv(const std::vector<ExperimentRecord>& records,
                       const std::string& path, bool with_timestamp) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_records_csv: cannot open " + path);
  }
  write_records_csv(records, out, with_timestamp);
}

std::vector<int> eval1_default_n_grid(int sub, bool full_scale) {
  switch (sub) {
    case 1: {
      std::vector<int> grid = {1};
      const int top = full_scale ? 1000 : 200;
      for (int n = 50; n <= top; n += 50) grid.push_back(n);
      return grid;
    }
    case 2:
      return {1, 10, 20, 30, 40, 50};
    case 3:
      return {10};
    default:
      throw std::invalid_argument("eval1 sub must be 1, 2, or 3");
  }
}

std::vector<double> eval1_default_lambda_grid() {
  return {0.001, 0.01, 0.1, 1.0, 10.0};
}

std::vector<ExperimentRecord> run_eval1(const Eval1Params& params) {
  if (params.sub < 1 || params.sub > 3) {
    throw std::invalid_argument("run_eval1: sub must be 1, 2, or 3");
  }
  if (params.o < 1 || params.w < 1) {
    throw std::invalid_argument("run_eval1: o and w must be >= 1");
  }
  if (!(params.lambda >= 0.0) || !(params.d_theta > 0.0) ||
      !(params.d_ell > 0.0)) {
    throw std::invalid_argument("run_eval1: invalid lambda or thresholds");
  }
  validate_conditions(params.conditions, /*allow_all=*/true);

  const std::vector<int> n_grid = params.n_grid.empty()
                                      ? eval1_default_n_grid(params.sub,
                                                             params.full_scale)
                                      : params.n_grid;
  for (int n : n_grid) {
    if (n < 1) throw std::invalid_argument("run_eval1: n must be >= 1");
  }
  const std::vector<double> lambda_grid =
      params.sub == 3 ? (params.lambda_grid.empty() ? eval1_default_lambda_grid()
                                                    : params.lambda_grid)
                      : std::vector<double>{params.lambda};
  for (double l : lambda_grid) {
    if (!(l >= 0.0)) throw std::invalid_argument("run_eval1: bad lambda");
  }

  // Sub 1 sweeps n with scalar output; sub 2 sweeps n = m; sub 3 sweeps the
  // step length at one fixed dimension.
  struct Point {
    int n;
    int m;
    double lambda;
  };
  std::vector<Point> points;
  if (params.sub == 3) {
    const int n = n_grid.front();
    const int m = params.m > 0 ? params.m : n;
    for (double l : lambda_grid) points.push_back({n, m, l});
  } else {
    for (int n : n_grid) {
      const int m = params.sub == 2 ? n : (params.m > 0 ? params.m : 1);
      points.push_back({n, m, params.lambda});
    }
  }

  std::vector<Task> tasks;
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    const Point point = points[pi];
    const std::uint64_t point_base =
        mix_seed(params.seed, kEval1PointTag + pi);
    for (std::size_t ci = 0; ci < params.conditions.size(); ++ci) {
      const std::string condition = params.conditions[ci];
      const std::uint64_t cond_seed =
          mix_seed(point_base, kConditionStream0 + ci);
      tasks.push_back([point, condition, cond_seed, point_base, &params]() {
        const BenchmarkSpec spec = make_benchmark_spec(
            point.n, point.m, params.o, mix_seed(point_base, kBenchStream));
        BenchmarkFunction f(spec);
        const RandomWalk walk = make_random_walk(
            point.n, params.w, point.lambda, mix_seed(point_base, kWalkStream));
        auto differ =
            make_condition(condition, point.n, point.m, params.d_theta,
                           params.d_ell, cond_seed, params.epsilon,
                           params.spsa_c);

        double sum_angular = 0.0;
        double sum_norm = 0.0;
        double sum_iters = 0.0;
        double sum_runtime = 0.0;
        const std::uint64_t calls_at_entry = f.call_count();
        for (const Eigen::VectorXd& x : walk.waypoints) {
          const Eigen::MatrixXd truth = benchmark_analytic_jacobian(spec, x);
          const auto start = std::chrono::steady_clock::now();
          const DerivativeEstimate est = differ->next_derivative(f, x);
          if (params.timing) sum_runtime += seconds_since(start);
          sum_angular += angular_error(est.d, truth);
          sum_norm += norm_error(est.d, truth);
          sum_iters += est.iterations;
        }

        const double count = static_cast<double>(params.w);
        ExperimentRecord r;
        r.eval = 1;
        r.sub = params.sub;
        r.condition = condition;
        r.n = point.n;
        r.m = point.m;
        r.o = params.o;
        r.w = params.w;
        r.lambda = point.lambda;
        if (is_wasp_condition(condition)) {
          r.d_theta = params.d_theta;
          r.d_ell = params.d_ell;
        }
        r.seed = params.seed;
        if (params.timing) r.runtime_s = sum_runtime / count;
        r.calls = f.call_count() - calls_at_entry;
        r.angular_err = sum_angular / count;
        r.norm_err = sum_norm / count;
        r.iters = sum_iters / count;
        return std::vector<ExperimentRecord>{std::move(r)};
      });
    }
  }

  return run_tasks(tasks, resolve_workers(params.workers));
}

std::vector<ExperimentRecord> run_eval2(const Eval2Params& params) {
  if (params.n < 1 || params.m < 1 || params.o < 1) {
    throw std::invalid_argument("run_eval2: n, m, o must be >= 1");
  }
  if (!(params.lambda >= 0.0)) {
    throw std::invalid_argument("run_eval2: lambda must be >= 0");
  }
  if (params.thresholds.empty()) {
    throw std::invalid_argument("run_eval2: need at least one threshold");
  }
  for (double t : params.thresholds) {
    if (!(t > 0.0)) {
      throw std::invalid_argument("run_eval2: thresholds must be positive");
    }
  }
  validate_conditions(params.conditions, /*allow_all=*/false);
  const int w = params.w > 0 ? params.w : (params.full_scale ? 50000 : 5000);

  const std::uint64_t base = mix_seed(params.seed, kEval2Tag);
  const std::uint64_t bench_seed = mix_seed(base, kBenchStream);
  const std::uint64_t walk_seed = mix_seed(base, kWalkStream);
  const std::uint64_t tangent_seed = mix_seed(base, kTangentStream);

  const bool want_wasp =
      std::find(params.conditions.begin(), params.conditions.end(),
                "WASP-O") != params.conditions.end();
  const bool want_fd =
      std::find(params.conditions.begin(), params.conditions.end(), "FD") !=
      params.conditions.end();

  auto sequence_rows = [&params, bench_seed, walk_seed, w](
                           SequentialDifferentiator& differ,
                           std::optional<double> d_theta,
                           std::optional<double> d_ell) {
    const BenchmarkSpec spec =
        make_benchmark_spec(params.n, params.m, params.o, bench_seed);
    BenchmarkFunction f(spec);
    const RandomWalk walk =
        make_random_walk(params.n, w, params.lambda, walk_seed);

    std::vector<ExperimentRecord> rows;
    rows.reserve(w);
    for (int k = 0; k < w; ++k) {
      const Eigen::VectorXd& x = walk.waypoints[k];
      const Eigen::MatrixXd truth = benchmark_analytic_jacobian(spec, x);
      const std::uint64_t calls_before = f.call_count();
      const auto start = std::chrono::steady_clock::now();
      const DerivativeEstimate est = differ.next_derivative(f, x);
      const double elapsed = params.timing ? seconds_since(start) : 0.0;

      ExperimentRecord r;
      r.eval = 2;
      r.condition = differ.name();
      r.n = params.n;
      r.m = params.m;
      r.o = params.o;
      r.w = w;
      r.lambda = params.lambda;
      r.d_theta = d_theta;
      r.d_ell = d_ell;
      r.seed = params.seed;
      r.k = k;
      if (params.timing) r.runtime_s = elapsed;
      r.calls = f.call_count() - calls_before;
      r.angular_err = angular_error(est.d, truth);
      r.norm_err = norm_error(est.d, truth);
      r.iters = est.iterations;
      rows.push_back(std::move(r));
    }
    return rows;
  };

  std::vector<Task> tasks;
  if (want_wasp) {
    for (double threshold : params.thresholds) {
      tasks.push_back([threshold, tangent_seed, &params, &sequence_rows]() {
        // One probe matrix shared across every threshold setting: the seed is
        // common, construction is deterministic.
        WaspDifferentiator differ(
            WaspCache(make_orthonormal_tangents(params.n, tangent_seed),
                      params.m, threshold, threshold),
            params.epsilon);
        return sequence_rows(differ, threshold, threshold);
      });
    }
  }
  if (want_fd) {
    tasks.push_back([&params, &sequence_rows]() {
      FdDifferentiator differ(params.epsilon);
      return sequence_rows(differ, std::nullopt, std::nullopt);
    });
  }

  return run_tasks(tasks, resolve_workers(params.workers));
}

std::vector<ExperimentRecord> run_eval3(const Eval3Params& params) {
  if (!(params.alpha > 0.0) || params.alpha > 1.0) {
    throw std::invalid_argument("run_eval3: alpha must be in (0,1]");
  }
  if (!(params.tol > 0.0) || params.max_iters < 1) {
    throw std::invalid_argument("run_eval3: invalid tol or max_iters");
  }
  validate_conditions(params.conditions, /*allow_all=*/true);
  const int trials =
      params.trials > 0 ? params.trials : (params.full_scale ? 50 : 10);

  std::vector<Task> tasks;
  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t trial_base =
        mix_seed(params.seed, kEval3TrialTag + static_cast<std::uint64_t>(trial));
    for (std::size_t ci = 0; ci < params.conditions.size(); ++ci) {
      const std::string condition = params.conditions[ci];
      const std::uint64_t cond_seed =
          mix_seed(trial_base, kConditionStream0 + ci);
      tasks.push_back([trial, trial_base, condition, cond_seed, &params]() {
        const ChainModel model = make_branched_chain();
        // Same planted targets and start for every condition in this trial.
        Rng sample_rng(mix_seed(trial_base, kSampleStream));
        const Eigen::VectorXd q_star =
            sample_chain_configuration(model, sample_rng);
        const std::vector<Eigen::Vector3d> targets =
            chain_forward_kinematics(model, q_star);
        const Eigen::VectorXd x0 =
            sample_chain_configuration(model, sample_rng);

        ConstraintProblem problem = make_chain_constraint(model, targets);
        auto engine = make_condition(
            condition, model.dof(), model.end_effector_count(), params.d_theta,
            params.d_ell, cond_seed, params.epsilon, params.spsa_c);

        const auto start = std::chrono::steady_clock::now();
        const SolveReport report =
            pseudoinverse_solve(problem, x0, *engine, params.alpha, params.tol,
                                params.max_iters);
        const double elapsed = params.timing ? seconds_since(start) : 0.0;
        if (!report.diagnostic.empty()) {
          throw std::runtime_error("eval3 trial " + std::to_string(trial) +
                                   " (" + condition +
                                   "): " + report.diagnostic);
        }

        ExperimentRecord r;
        r.eval = 3;
        r.condition = condition;
        r.n = problem.residual.input_dim();
        r.m = problem.residual.output_dim();
        if (is_wasp_condition(condition)) {
          r.d_theta = params.d_theta;
          r.d_ell = params.d_ell;
        }
        r.seed = params.seed;
        r.k = trial;
        if (params.timing) r.runtime_s = elapsed;
        r.calls = report.calls;
        r.iters = static_cast<double>(report.iterations);
        r.converged = report.converged ? 1 : 0;
        return std::vector<ExperimentRecord>{std::move(r)};
      });
    }
  }

  return run_tasks(tasks, resolve_workers(params.workers));
}

}  // namespace wasp
