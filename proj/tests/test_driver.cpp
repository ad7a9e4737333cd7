#include <sys/wait.h>

#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "tnwmc/driver.hpp"
#include "tnwmc/error.hpp"

using namespace tnwmc;

namespace {

// Replays fixed (arrival, cost) pairs against a fake clock.
std::optional<GuardOutcome> scripted(const std::vector<std::pair<double, double>>& plans, double alpha) {
  std::size_t k = 0;
  double now = 0.0;
  return run_anytime_loop(
      [&]() -> std::optional<double> {
        if (k == plans.size()) return std::nullopt;
        now = plans[k].first;
        return plans[k++].second;
      },
      [&] { return now; }, alpha);
}

struct Run {
  int code;
  std::string out;
};

Run run_cli(const std::string& args) {
  const std::string cmd = std::string("'") + TNWMC_CLI + "' " + args + " 2>/dev/null";
  FILE* p = ::popen(cmd.c_str(), "r");
  std::string out;
  char buf[512];
  while (std::fgets(buf, sizeof buf, p) != nullptr) out += buf;
  const int status = ::pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("tnwmc-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void write_file(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

const std::vector<std::pair<double, double>> kScript{{0.1, 1e12}, {0.2, 1e11}, {0.4, 1e10}, {0.8, 1e9}};

}  // namespace

TEST_CASE("anytime guard on a scripted stream") {
  auto a = scripted(kScript, 0.0);
  REQUIRE(a);
  CHECK(a->chosen == 0);
  CHECK(a->fired);
  auto b = scripted(kScript, 1e-12);
  CHECK(b->chosen == 1);
  CHECK(b->considered == 2);
  auto c = scripted(kScript, 1e-9);
  CHECK(c->chosen == 3);
  CHECK_FALSE(c->fired);
  CHECK_FALSE(scripted({}, 1.0));
}

TEST_CASE("alpha table") {
  CHECK(kAlphaTable.size() == 6);
  CHECK(kAlphaTable[0].alpha == 3.8e-11);
  CHECK(kAlphaTable[3].alpha == 1.0e-21);
  CHECK(default_alpha("minfill") == kSinglePlannerAlpha);
  CHECK(default_alpha("portfolio") == kPortfolioAlpha);
}

TEST_CASE("PAR-2") {
  std::vector<BenchEntry> es{{"a", "solved", 1.0, 0, ""}, {"b", "timeout", 10.0, 0, ""}};
  CHECK(par2_score(es, 10.0) == 21.0);
  CHECK(par2_score({}, 10.0) == 0.0);
  es.push_back({"c", "error", 0.1, 0, "bad"});
  CHECK(par2_score(es, 10.0) == 41.0);
}

TEST_CASE("four-variable example counts to 7") {
  const auto r = count_formula({testsupport::example_formula(), WeightFunction(4)}, {});
  CHECK(r.count == 7.0);
  CHECK(r.tensors == 8);
  CHECK(r.indices == 10);
  CHECK(format_report(r).rfind("s wmc 7\n", 0) == 0);
}

TEST_CASE("driver agrees with brute force and is deterministic") {
  std::mt19937_64 rng(181);
  for (int trial = 0; trial < 20; ++trial) {
    const auto wf = testsupport::random_3cnf(rng, 5 + trial % 12, 5 + trial % 30);
    CountOptions o;
    o.seed = static_cast<std::uint64_t>(trial);
    const auto a = count_formula(wf, o);
    const auto b = count_formula(wf, o);
    CHECK(testsupport::rel_close(a.count, brute_force_count(wf.formula, wf.weights), 1e-9));
    CHECK(a.plan_text == b.plan_text);
    CHECK(std::bit_cast<std::uint64_t>(a.count) == std::bit_cast<std::uint64_t>(b.count));
    CHECK(a.audit_violations == 0);
  }
}

TEST_CASE("memory budget, jobs and planners") {
  std::mt19937_64 rng(191);
  const auto wf = testsupport::random_3cnf(rng, 14, 40);
  const double want = brute_force_count(wf.formula, wf.weights);
  CountOptions o;
  const auto plain = count_formula(wf, o);
  o.mem_budget = plain.mem_cost / 4;
  o.jobs = 3;
  const auto sliced = count_formula(wf, o);
  CHECK(sliced.slices > 1);
  CHECK(sliced.mem_cost <= o.mem_budget);
  CHECK(testsupport::rel_close(sliced.count, want, 1e-9));
  o.mem_budget = 1;
  CHECK_THROWS_AS(count_formula(wf, o), Error);

  CountOptions p;
  p.planner = "portfolio";
  CHECK(testsupport::rel_close(count_formula(wf, p).count, want, 1e-9));
  p.planner = "nonsense";
  CHECK_THROWS_AS(count_formula(wf, p), Error);
  // the first external plan is hopeless; a large alpha keeps planning going
  p.planner = std::string("external:'") + FAKE_TD_SOLVER + "' both";
  p.alpha = 1.0;
  p.timeout = 60;
  const auto ext = count_formula(wf, p);
  CHECK(ext.plans_considered == 2);
  CHECK(testsupport::rel_close(ext.count, want, 1e-9));
}

TEST_CASE("degenerate formulas through the driver") {
  CHECK(count_formula({CnfFormula(0, {}), WeightFunction(0)}, {}).count == 1.0);
  CHECK(count_formula({CnfFormula(2, {{}}), WeightFunction(2)}, {}).count == 0.0);
  CHECK(count_formula({CnfFormula(3, {}), WeightFunction(3)}, {}).count == 8.0);
}

TEST_CASE("timeouts") {
  std::mt19937_64 rng(193);
  const auto wf = testsupport::random_3cnf(rng, 18, 60);
  CountOptions o;
  o.timeout = 1e-9;
  try {
    count_formula(wf, o);
    FAIL("expected Timeout");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Timeout);
  }
}

TEST_CASE("bench over a directory") {
  const auto dir = temp_dir("bench");
  write_file(dir / "a.cnf", "p cnf 4 4\n1 2 -3 0\n1 3 4 0\n-2 -3 0\n-3 -4 0\n");
  write_file(dir / "b.cnf", "p cnf 2 1\n1 5 0\n");
  const auto es = bench(dir.string(), {});
  REQUIRE(es.size() == 2);
  CHECK(es[0].status == "solved");
  CHECK(es[0].count == 7.0);
  CHECK(es[1].status == "error");
  const std::string text = format_bench(es, 10.0);
  CHECK(text.find("solved 1/2") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("command line") {
  const auto dir = temp_dir("cli");
  write_file(dir / "example.cnf", "c example\np cnf 4 4\n1 2 -3 0\n1 3 4 0\n-2 -3 0\n-3 -4 0\n");
  write_file(dir / "bad.cnf", "p cnf 2 1\n1 5 0\n");
  write_file(dir / "weighted.cnf", "p cnf 1 1\nw 1 0.25\n1 0\n");

  auto r = run_cli("count '" + (dir / "example.cnf").string() + "' --plan-out '" + (dir / "plan.txt").string() + "'");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("s wmc 7\n", 0) == 0);
  std::ifstream plan(dir / "plan.txt");
  std::string first;
  std::getline(plan, first);
  CHECK(first.rfind("contract ", 0) == 0);

  r = run_cli("count '" + (dir / "weighted.cnf").string() + "'");
  CHECK(r.out.rfind("s wmc 0.25\n", 0) == 0);

  r = run_cli("count '" + (dir / "bad.cnf").string() + "'");
  CHECK(r.code == 2);
  CHECK(r.out.rfind("s unknown", 0) == 0);
  CHECK(run_cli("count '" + (dir / "missing.cnf").string() + "'").code == 2);
  CHECK(run_cli("count '" + (dir / "example.cnf").string() + "' --planner bogus").code == 2);
  CHECK(run_cli("count '" + (dir / "example.cnf").string() + "' --mem-budget 1").code == 20);
  CHECK(run_cli("frobnicate").code == 2);

  r = run_cli("bench '" + dir.string() + "'");
  CHECK(r.code == 0);
  CHECK(r.out.find("s par2") != std::string::npos);
  std::filesystem::remove_all(dir);
}
