#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stop_token>
#include <string>
#include <thread>
#include <vector>

#include "tnwmc/graph.hpp"
#include "tnwmc/heuristics.hpp"

namespace tnwmc {

using TdSink = std::function<void(TreeDecomposition)>;

/// An anytime source of tree decompositions.
class Planner {
 public:
  virtual ~Planner() = default;
  virtual std::string name() const = 0;
  /// Emits decompositions until done or until `stop` is requested.
  virtual void run(const Graph& g, std::stop_token stop, const TdSink& emit) = 0;
};

/// Elimination heuristic retried with `rounds` derived seeds.
class HeuristicPlanner : public Planner {
 public:
  HeuristicPlanner(EliminationHeuristic h, std::uint64_t seed, int rounds = 8);
  std::string name() const override;
  void run(const Graph& g, std::stop_token stop, const TdSink& emit) override;

 private:
  EliminationHeuristic heuristic_;
  std::uint64_t seed_;
  int rounds_;
};

/// Runs `/bin/sh -c command` with the graph in `.gr` form on stdin and reads
/// `.td` solutions from stdout. On stop the process group receives SIGTERM,
/// and SIGKILL after `grace`; output arriving during the grace period is
/// still used.
class ExternalPlanner : public Planner {
 public:
  explicit ExternalPlanner(std::string command,
                           std::chrono::milliseconds grace = std::chrono::milliseconds(1000));
  std::string name() const override;
  void run(const Graph& g, std::stop_token stop, const TdSink& emit) override;

 private:
  std::string command_;
  std::chrono::milliseconds grace_;
};

/// `minfill`, `mindegree`, `portfolio` (both heuristics) or `external:<cmd>`.
std::vector<std::unique_ptr<Planner>> make_planners(const std::string& spec, std::uint64_t seed);

struct DecompositionRecord {
  BranchDecomposition branch;
  int width = 0;  // branch width
  TreeDecomposition tree;
  int tree_width = 0;
  double seconds = 0.0;  // since the stream was created
  std::string planner;
};

/// Multi-producer, single-consumer best-so-far channel. A decomposition is
/// validated, converted to a branch decomposition and admitted only if its
/// branch width is strictly below every earlier record.
class DecompositionStream {
 public:
  explicit DecompositionStream(Graph g);

  bool offer(const TreeDecomposition& td, const std::string& planner);
  void close(bool all_failed = false);

  /// Blocks until record `index` exists, the stream closes or `until`
  /// passes. Returns nullopt in the last two cases.
  std::optional<DecompositionRecord> wait_for(std::size_t index,
                                              std::optional<std::chrono::steady_clock::time_point> until);

  std::vector<DecompositionRecord> records() const;
  bool closed() const;
  bool all_failed() const;
  std::size_t rejected() const;
  const Graph& graph() const { return graph_; }

 private:
  Graph graph_;
  std::chrono::steady_clock::time_point start_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::vector<DecompositionRecord> records_;
  std::size_t rejected_ = 0;
  bool closed_ = false;
  bool all_failed_ = false;
};

/// Runs each planner on its own thread, feeding one stream. Destruction
/// stops and joins the workers.
class Portfolio {
 public:
  Portfolio(const Graph& g, std::vector<std::unique_ptr<Planner>> planners);
  ~Portfolio();
  Portfolio(const Portfolio&) = delete;
  Portfolio& operator=(const Portfolio&) = delete;

  DecompositionStream& stream() { return *stream_; }
  void stop();

 private:
  std::unique_ptr<DecompositionStream> stream_;
  std::vector<std::unique_ptr<Planner>> planners_;
  std::vector<std::jthread> workers_;
  std::mutex mu_;
  int running_ = 0;
  int failed_ = 0;
};

/// Runs the portfolio until every planner finishes or `deadline` passes and
/// returns the admitted records. Throws AllPlannersFailed if every planner
/// failed without an admitted record.
std::vector<DecompositionRecord> portfolio_plan(const Graph& g, std::vector<std::unique_ptr<Planner>> planners,
                                                std::chrono::duration<double> deadline);

}  // namespace tnwmc
