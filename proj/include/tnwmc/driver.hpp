#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tnwmc/formula.hpp"
#include "tnwmc/network.hpp"

namespace tnwmc {

/// Single-core performance factors per planner configuration.
struct AlphaEntry {
  std::string_view planner;
  double alpha;
};
inline constexpr std::array<AlphaEntry, 6> kAlphaTable{{
    {"Tamaki", 3.8e-11},
    {"FlowCutter", 4.8e-12},
    {"htd", 1.6e-12},
    {"Hicks", 1.0e-21},
    {"P3", 1.4e-11},
    {"P4", 1.6e-11},
}};
inline constexpr double kSinglePlannerAlpha = 3.8e-11;
inline constexpr double kPortfolioAlpha = 1.4e-11;

/// Alpha used when none is given: the portfolio entry for `portfolio`, the
/// single-planner entry otherwise.
double default_alpha(const std::string& planner);

struct GuardOutcome {
  std::size_t chosen = 0;      // index of the plan to execute (the last one taken)
  std::size_t considered = 0;  // plans taken from the source
  bool fired = false;          // the guard stopped the loop
};

/// The anytime planning loop. `next_plan` yields the time cost of the next
/// plan or nullopt once no more will come; `elapsed` gives seconds since
/// planning began. Stops after the first plan with alpha * cost < elapsed.
/// Returns nullopt if no plan arrived.
std::optional<GuardOutcome> run_anytime_loop(const std::function<std::optional<double>()>& next_plan,
                                             const std::function<double()>& elapsed, double alpha);

struct CountOptions {
  double timeout = 0.0;  // seconds; 0 disables
  std::optional<double> alpha;
  std::string planner = "minfill";
  std::size_t mem_budget = std::numeric_limits<std::size_t>::max();
  int jobs = 1;
  std::uint64_t seed = 0;
  double throughput = kDefaultThroughput;
};

struct CountReport {
  double count = 0.0;
  int num_vars = 0;
  std::size_t num_clauses = 0;
  std::size_t tensors = 0;
  std::size_t indices = 0;
  std::size_t factored_tensors = 0;
  std::string planner;
  double alpha = 0.0;
  std::size_t plans_considered = 0;
  bool guard_fired = false;
  int tree_width = -1;
  int branch_width = -1;
  int rank_bound = -1;
  int carving_width = -1;
  int max_rank = 0;
  std::size_t audit_violations = 0;
  double ops = 0.0;
  double time_cost = 0.0;
  std::vector<Index> sliced;
  std::size_t mem_cost = 0;
  std::size_t slices = 1;
  std::string plan_text;
  double reduce_seconds = 0.0;
  double planning_seconds = 0.0;
  double execution_seconds = 0.0;
};

CountReport count_formula(const WeightedFormula& wf, const CountOptions& options);
CountReport count_file(const std::string& path, const CountOptions& options);

/// `s wmc <count>` followed by `c` lines with the statistics.
std::string format_report(const CountReport& r);

struct BenchEntry {
  std::string path;
  std::string status;  // solved, timeout, infeasible, error
  double seconds = 0.0;
  double count = 0.0;
  std::string message;
};

/// Solved wall times plus twice the timeout per unsolved instance.
double par2_score(const std::vector<BenchEntry>& entries, double timeout);

/// Runs count on every regular file in `dir` (sorted by name).
std::vector<BenchEntry> bench(const std::string& dir, const CountOptions& options);
std::string format_bench(const std::vector<BenchEntry>& entries, double timeout);

}  // namespace tnwmc
