#include "tnwmc/portfolio.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdlib>
#include <cstring>

#include "tnwmc/error.hpp"
#include "tnwmc/pace.hpp"

namespace tnwmc {

// ---------------------------------------------------------------- heuristics

HeuristicPlanner::HeuristicPlanner(EliminationHeuristic h, std::uint64_t seed, int rounds)
    : heuristic_(h), seed_(seed), rounds_(rounds) {}

std::string HeuristicPlanner::name() const {
  return heuristic_ == EliminationHeuristic::MinFill ? "minfill" : "mindegree";
}

void HeuristicPlanner::run(const Graph& g, std::stop_token stop, const TdSink& emit) {
  for (int r = 0; r < rounds_ && !stop.stop_requested(); ++r) {
    // splitmix-style derivation keeps rounds independent of one another
    std::uint64_t s = seed_ + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(r + 1);
    s = (s ^ (s >> 30)) * 0xbf58476d1ce4e5b9ULL;
    s = (s ^ (s >> 27)) * 0x94d049bb133111ebULL;
    s ^= s >> 31;
    emit(decomposition_from_order(g, elimination_order(g, heuristic_, r == 0 ? seed_ : s)));
  }
}

// ------------------------------------------------------------------ external

ExternalPlanner::ExternalPlanner(std::string command, std::chrono::milliseconds grace)
    : command_(std::move(command)), grace_(grace) {}

std::string ExternalPlanner::name() const { return "external:" + command_; }

namespace {

struct Fd {
  int fd = -1;
  ~Fd() {
    if (fd >= 0) ::close(fd);
  }
};

}  // namespace

void ExternalPlanner::run(const Graph& g, std::stop_token stop, const TdSink& emit) {
  std::array<char, 32> path{};
  std::strcpy(path.data(), "/tmp/tnwmc-XXXXXX");
  Fd input{::mkstemp(path.data())};
  if (input.fd < 0) throw std::runtime_error("cannot create temporary graph file");
  const std::string gr = emit_gr(g);
  const bool written = ::write(input.fd, gr.data(), gr.size()) == static_cast<ssize_t>(gr.size());
  ::unlink(path.data());
  if (!written || ::lseek(input.fd, 0, SEEK_SET) != 0) throw std::runtime_error("cannot write temporary graph file");

  int pipefd[2];
  if (::pipe(pipefd) != 0) throw std::runtime_error("pipe failed");
  Fd out{pipefd[0]};
  Fd child_out{pipefd[1]};
  const pid_t pid = ::fork();
  if (pid < 0) throw std::runtime_error("fork failed");
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(input.fd, STDIN_FILENO);
    ::dup2(child_out.fd, STDOUT_FILENO);
    const int devnull = ::open("/dev/null", O_WRONLY);
    if (devnull >= 0) ::dup2(devnull, STDERR_FILENO);
    ::close(out.fd);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  ::close(child_out.fd);
  child_out.fd = -1;

  TdStreamParser parser;
  int produced = 0;
  std::optional<std::chrono::steady_clock::time_point> terminated_at;
  bool killed = false;
  std::array<char, 4096> buf{};
  for (;;) {
    if (stop.stop_requested() && !terminated_at) {
      ::kill(-pid, SIGTERM);
      terminated_at = std::chrono::steady_clock::now();
    }
    if (terminated_at && !killed && std::chrono::steady_clock::now() - *terminated_at > grace_) {
      ::kill(-pid, SIGKILL);
      killed = true;
    }
    pollfd p{out.fd, POLLIN, 0};
    const int ready = ::poll(&p, 1, 50);
    if (ready < 0 && errno != EINTR) break;
    if (ready <= 0) continue;
    const ssize_t got = ::read(out.fd, buf.data(), buf.size());
    if (got < 0 && errno == EINTR) continue;
    if (got <= 0) break;  // EOF: the solver closed its output
    for (auto& td : parser.feed({buf.data(), static_cast<std::size_t>(got)})) {
      ++produced;
      emit(std::move(td));
    }
  }
  if (!killed) ::kill(-pid, SIGKILL);
  int status = 0;
  ::waitpid(pid, &status, 0);
  if (produced == 0) throw std::runtime_error("external planner produced no decomposition");
}

std::vector<std::unique_ptr<Planner>> make_planners(const std::string& spec, std::uint64_t seed) {
  std::vector<std::unique_ptr<Planner>> out;
  if (spec == "minfill") {
    out.push_back(std::make_unique<HeuristicPlanner>(EliminationHeuristic::MinFill, seed));
  } else if (spec == "mindegree") {
    out.push_back(std::make_unique<HeuristicPlanner>(EliminationHeuristic::MinDegree, seed));
  } else if (spec == "portfolio") {
    out.push_back(std::make_unique<HeuristicPlanner>(EliminationHeuristic::MinFill, seed));
    out.push_back(std::make_unique<HeuristicPlanner>(EliminationHeuristic::MinDegree, seed));
  } else if (spec.rfind("external:", 0) == 0 && spec.size() > 9) {
    out.push_back(std::make_unique<ExternalPlanner>(spec.substr(9)));
  } else {
    fail(ErrorCode::InvalidOption, "unknown planner '" + spec + "'");
  }
  return out;
}

// -------------------------------------------------------------------- stream

DecompositionStream::DecompositionStream(Graph g) : graph_(std::move(g)), start_(std::chrono::steady_clock::now()) {}

bool DecompositionStream::offer(const TreeDecomposition& td, const std::string& planner) {
  if (graph_.num_edges() == 0 || check_tree_decomposition(graph_, td)) {
    std::lock_guard lock(mu_);
    ++rejected_;
    return false;
  }
  DecompositionRecord rec;
  rec.tree = td;
  rec.tree_width = width_tree(graph_, td);
  rec.branch = tree_to_branch(td, graph_);
  if (check_branch_decomposition(graph_, rec.branch)) {
    std::lock_guard lock(mu_);
    ++rejected_;
    return false;
  }
  rec.width = width_branch(graph_, rec.branch);
  rec.planner = planner;
  {
    std::lock_guard lock(mu_);
    if (closed_ || (!records_.empty() && records_.back().width <= rec.width)) return false;
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    records_.push_back(std::move(rec));
  }
  cv_.notify_all();
  return true;
}

void DecompositionStream::close(bool all_failed) {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
    all_failed_ = all_failed;
  }
  cv_.notify_all();
}

std::optional<DecompositionRecord> DecompositionStream::wait_for(
    std::size_t index, std::optional<std::chrono::steady_clock::time_point> until) {
  std::unique_lock lock(mu_);
  auto ready = [&] { return records_.size() > index || closed_; };
  if (until) {
    cv_.wait_until(lock, *until, ready);
  } else {
    cv_.wait(lock, ready);
  }
  if (records_.size() > index) return records_[index];
  return std::nullopt;
}

std::vector<DecompositionRecord> DecompositionStream::records() const {
  std::lock_guard lock(mu_);
  return records_;
}

bool DecompositionStream::closed() const {
  std::lock_guard lock(mu_);
  return closed_;
}

bool DecompositionStream::all_failed() const {
  std::lock_guard lock(mu_);
  return all_failed_;
}

std::size_t DecompositionStream::rejected() const {
  std::lock_guard lock(mu_);
  return rejected_;
}

// ----------------------------------------------------------------- portfolio

Portfolio::Portfolio(const Graph& g, std::vector<std::unique_ptr<Planner>> planners)
    : stream_(std::make_unique<DecompositionStream>(g)), planners_(std::move(planners)) {
  running_ = static_cast<int>(planners_.size());
  if (running_ == 0) stream_->close(true);
  for (auto& planner : planners_) {
    workers_.emplace_back([this, p = planner.get()](std::stop_token stop) {
      bool failed = false;
      try {
        const std::string name = p->name();
        p->run(stream_->graph(), stop, [&](TreeDecomposition td) { stream_->offer(td, name); });
      } catch (const std::exception&) {
        failed = true;
      }
      std::lock_guard lock(mu_);
      if (failed) ++failed_;
      if (--running_ == 0) stream_->close(failed_ == static_cast<int>(planners_.size()));
    });
  }
}

Portfolio::~Portfolio() { stop(); }

void Portfolio::stop() {
  for (auto& w : workers_) w.request_stop();
  for (auto& w : workers_) {
    if (w.joinable()) w.join();
  }
}

std::vector<DecompositionRecord> portfolio_plan(const Graph& g, std::vector<std::unique_ptr<Planner>> planners,
                                                std::chrono::duration<double> deadline) {
  const auto until = std::chrono::steady_clock::now() +
                     std::chrono::duration_cast<std::chrono::steady_clock::duration>(deadline);
  Portfolio portfolio(g, std::move(planners));
  auto& stream = portfolio.stream();
  for (std::size_t next = 0;; ++next) {
    if (!stream.wait_for(next, until)) break;
  }
  portfolio.stop();
  auto records = stream.records();
  if (records.empty() && stream.all_failed()) fail(ErrorCode::AllPlannersFailed, "no planner produced a decomposition");
  return records;
}

}  // namespace tnwmc
