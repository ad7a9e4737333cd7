#include "tnwmc/driver.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "tnwmc/error.hpp"
#include "tnwmc/factoring.hpp"
#include "tnwmc/portfolio.hpp"
#include "tnwmc/reduction.hpp"
#include "tnwmc/slicing.hpp"

namespace tnwmc {

using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

double default_alpha(const std::string& planner) {
  return planner == "portfolio" ? kPortfolioAlpha : kSinglePlannerAlpha;
}

std::optional<GuardOutcome> run_anytime_loop(const std::function<std::optional<double>()>& next_plan,
                                             const std::function<double()>& elapsed, double alpha) {
  std::optional<GuardOutcome> out;
  while (auto cost = next_plan()) {
    if (!out) out.emplace();
    out->chosen = out->considered++;
    if (alpha * *cost < elapsed()) {
      out->fired = true;
      break;
    }
  }
  return out;
}

CountReport count_formula(const WeightedFormula& wf, const CountOptions& options) {
  const auto begin = Clock::now();
  std::optional<Clock::time_point> until;
  if (options.timeout > 0) {
    until = begin + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(options.timeout));
  }
  const Deadline deadline{until};

  CountReport report;
  report.num_vars = wf.formula.num_vars();
  report.num_clauses = wf.formula.clauses().size();
  report.planner = options.planner;
  report.alpha = options.alpha.value_or(default_alpha(options.planner));

  auto t0 = Clock::now();
  const TensorNetwork n = reduce(wf.formula, wf.weights);
  report.reduce_seconds = seconds_since(t0);
  report.tensors = n.size();
  report.indices = n.bond_indices().size() + n.free_indices().size();

  // planning
  const auto plan_start = Clock::now();
  std::optional<FactorResult> best;
  const StructureGraph sg = structure_graph(n);
  if (sg.graph.num_edges() == 0) {
    best = factor_branch(n, BranchDecomposition{});
    report.plans_considered = 1;
  } else {
    Portfolio portfolio(sg.graph, make_planners(options.planner, options.seed));
    auto& stream = portfolio.stream();
    std::size_t next = 0;
    // once some plan is in hand, leave the second half of the timeout for execution
    std::optional<Clock::time_point> plan_until;
    if (until) plan_until = begin + (*until - begin) / 2;
    auto take = [&]() -> std::optional<double> {
      auto rec = stream.wait_for(next, next == 0 ? until : plan_until);
      if (!rec) return std::nullopt;
      ++next;
      FactorResult fr = factor_branch(n, rec->branch);
      check_plan(fr.network, fr.plan);
      if (!fr.audit.ok()) ++report.audit_violations;
      report.tree_width = rec->tree_width;
      report.branch_width = rec->width;
      const double cost = time_cost(fr.network, fr.plan, options.throughput);
      best = std::move(fr);
      return cost;
    };
    const auto outcome = run_anytime_loop(take, [&] { return seconds_since(plan_start); }, report.alpha);
    portfolio.stop();
    if (!outcome) {
      if (stream.all_failed()) fail(ErrorCode::AllPlannersFailed, "no planner produced a decomposition");
      fail(ErrorCode::Timeout, "timed out before any plan was found");
    }
    report.plans_considered = outcome->considered;
    report.guard_fired = outcome->fired;
  }
  report.planning_seconds = seconds_since(plan_start);

  const FactorResult& plan = *best;
  report.factored_tensors = plan.network.size();
  report.rank_bound = plan.audit.bound;
  report.carving_width = plan.audit.carving_width;
  report.max_rank = plan.audit.max_rank;
  report.ops = op_count(plan.network, plan.plan);
  report.time_cost = report.ops / options.throughput;
  report.plan_text = plan.plan.to_text();

  // execution
  t0 = Clock::now();
  try {
    deadline.check();
    SlicedResult sr = sliced_execute(plan.network, plan.plan, options.mem_budget, options.jobs, deadline);
    report.count = sr.value.values()[0];
    report.sliced = sr.sliced;
    report.mem_cost = sr.mem_cost;
    report.slices = sr.slices;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Timeout) throw;
    fail(ErrorCode::Timeout, std::string(e.what()) + " (plan max-rank " + std::to_string(report.max_rank) +
                                 ", estimated " + fmt(report.time_cost) + " s)");
  }
  report.execution_seconds = seconds_since(t0);
  return report;
}

CountReport count_file(const std::string& path, const CountOptions& options) {
  return count_formula(read_dimacs_file(path), options);
}

std::string format_report(const CountReport& r) {
  std::ostringstream out;
  out << "s wmc " << fmt(r.count) << '\n';
  out << "c vars " << r.num_vars << " clauses " << r.num_clauses << '\n';
  out << "c network tensors " << r.tensors << " indices " << r.indices << " factored " << r.factored_tensors << '\n';
  out << "c planner " << r.planner << " alpha " << fmt(r.alpha) << " plans " << r.plans_considered
      << (r.guard_fired ? " (guard)" : " (exhausted)") << '\n';
  out << "c widths tree " << r.tree_width << " branch " << r.branch_width << " carving " << r.carving_width
      << " max-rank " << r.max_rank << " bound " << r.rank_bound << " violations " << r.audit_violations << '\n';
  out << "c cost ops " << fmt(r.ops) << " est-seconds " << fmt(r.time_cost) << '\n';
  out << "c slicing indices " << r.sliced.size() << " slices " << r.slices << " mem-bytes " << r.mem_cost << '\n';
  out << "c time reduce " << fmt(r.reduce_seconds) << " plan " << fmt(r.planning_seconds) << " execute "
      << fmt(r.execution_seconds) << '\n';
  return out.str();
}

double par2_score(const std::vector<BenchEntry>& entries, double timeout) {
  double score = 0.0;
  for (const auto& e : entries) score += e.status == "solved" ? e.seconds : 2.0 * timeout;
  return score;
}

std::vector<BenchEntry> bench(const std::string& dir, const CountOptions& options) {
  std::vector<std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  std::vector<BenchEntry> out;
  for (const auto& path : files) {
    BenchEntry e;
    e.path = path;
    const auto t0 = Clock::now();
    try {
      e.count = count_file(path, options).count;
      e.status = "solved";
    } catch (const Error& err) {
      e.status = err.code() == ErrorCode::Timeout            ? "timeout"
                 : err.code() == ErrorCode::BudgetInfeasible ? "infeasible"
                                                             : "error";
      e.message = err.what();
    } catch (const std::exception& err) {
      e.status = "error";
      e.message = err.what();
    }
    e.seconds = seconds_since(t0);
    if (e.status == "solved" && options.timeout > 0 && e.seconds > options.timeout) e.status = "timeout";
    out.push_back(std::move(e));
  }
  return out;
}

std::string format_bench(const std::vector<BenchEntry>& entries, double timeout) {
  std::ostringstream out;
  std::size_t solved = 0;
  for (const auto& e : entries) {
    out << "c " << e.status << ' ' << fmt(e.seconds) << ' ' << e.path;
    if (e.status == "solved") {
      out << " wmc " << fmt(e.count);
      ++solved;
    }
    if (!e.message.empty()) out << " (" << e.message << ')';
    out << '\n';
  }
  out << "s par2 " << fmt(par2_score(entries, timeout)) << " solved " << solved << '/' << entries.size() << '\n';
  return out.str();
}

}  // namespace tnwmc
