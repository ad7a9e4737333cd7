#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "tnwmc/driver.hpp"
#include "tnwmc/error.hpp"

namespace {

enum Exit { kOk = 0, kInputError = 2, kTimeout = 10, kInfeasible = 20 };

int exit_code_for(tnwmc::ErrorCode code) {
  switch (code) {
    case tnwmc::ErrorCode::Timeout:
      return kTimeout;
    case tnwmc::ErrorCode::BudgetInfeasible:
      return kInfeasible;
    default:
      return kInputError;
  }
}

void add_common(CLI::App* cmd, tnwmc::CountOptions& o, double& alpha) {
  cmd->add_option("--timeout", o.timeout, "Seconds before giving up (0 = none)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--alpha", alpha, "Performance factor; default depends on the planner");
  cmd->add_option("--planner", o.planner, "minfill | mindegree | portfolio | external:<cmd>");
  cmd->add_option("--mem-budget", o.mem_budget, "Byte budget for one slice execution");
  cmd->add_option("--jobs", o.jobs, "Slices evaluated concurrently")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "Seed for planner tie-breaking");
  cmd->add_option("--throughput", o.throughput, "Operations per second assumed by the cost estimate")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted model counting by tensor-network contraction"};
  app.require_subcommand(1);

  tnwmc::CountOptions options;
  double alpha = -1.0;
  std::string input;
  std::string plan_out;

  auto* count = app.add_subcommand("count", "Count one DIMACS CNF instance");
  count->add_option("file", input, "Instance path")->required();
  count->add_option("--plan-out", plan_out, "Write the executed contraction plan here");
  add_common(count, options, alpha);

  auto* bench = app.add_subcommand("bench", "Count every instance in a directory and report PAR-2");
  bench->add_option("dir", input, "Corpus directory")->required()->check(CLI::ExistingDirectory);
  add_common(bench, options, alpha);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }
  if (alpha >= 0) options.alpha = alpha;

  try {
    if (*count) {
      const auto report = tnwmc::count_file(input, options);
      std::cout << tnwmc::format_report(report);
      if (!plan_out.empty()) {
        std::ofstream out(plan_out);
        out << report.plan_text;
        if (!out) {
          std::cerr << "cannot write " << plan_out << '\n';
          return kInputError;
        }
      }
    } else {
      std::cout << tnwmc::format_bench(tnwmc::bench(input, options), options.timeout);
    }
  } catch (const tnwmc::Error& e) {
    std::cout << "s unknown\nc error " << tnwmc::to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cout << "s unknown\nc error " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}
