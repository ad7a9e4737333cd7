#include "tnwmc/pace.hpp"

#include <algorithm>
#include <sstream>

#include "tnwmc/error.hpp"

namespace tnwmc {

namespace {

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

long to_long(const std::string& s) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) fail(ErrorCode::MalformedPace, "expected an integer, got '" + s + "'");
  return v;
}

bool skippable(const std::vector<std::string>& toks) { return toks.empty() || toks[0] == "c"; }

}  // namespace

Graph parse_gr(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  long n = -1, m = -1;
  std::vector<std::pair<int, int>> edges;
  while (std::getline(in, line)) {
    const auto toks = tokens(line);
    if (skippable(toks)) continue;
    if (n < 0) {
      if (toks.size() != 4 || toks[0] != "p" || toks[1] != "tw") fail(ErrorCode::MalformedPace, "expected 'p tw <n> <m>'");
      n = to_long(toks[2]);
      m = to_long(toks[3]);
      if (n < 0 || m < 0) fail(ErrorCode::MalformedPace, "negative size in header");
      continue;
    }
    if (toks.size() != 2) fail(ErrorCode::MalformedPace, "bad edge line '" + line + "'");
    const long u = to_long(toks[0]);
    const long v = to_long(toks[1]);
    if (u < 1 || v < 1 || u > n || v > n || u == v) fail(ErrorCode::MalformedPace, "bad edge '" + line + "'");
    edges.emplace_back(static_cast<int>(u - 1), static_cast<int>(v - 1));
  }
  if (n < 0) fail(ErrorCode::MalformedPace, "missing header");
  if (static_cast<long>(edges.size()) != m) fail(ErrorCode::MalformedPace, "edge count differs from header");
  return Graph(static_cast<int>(n), std::move(edges));
}

std::string emit_gr(const Graph& g) {
  std::ostringstream out;
  out << "p tw " << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const auto& [u, v] : g.edges()) out << u + 1 << ' ' << v + 1 << '\n';
  return out.str();
}

TreeDecomposition parse_td(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  long bags = -1, width = 0, n = 0;
  TreeDecomposition td;
  std::vector<char> seen;
  long edges = 0;
  while (std::getline(in, line)) {
    const auto toks = tokens(line);
    if (skippable(toks)) continue;
    if (bags < 0) {
      if (toks.size() != 5 || toks[0] != "s" || toks[1] != "td") fail(ErrorCode::MalformedPace, "expected 's td' line");
      bags = to_long(toks[2]);
      width = to_long(toks[3]);
      n = to_long(toks[4]);
      if (bags < 1 || n < 0) fail(ErrorCode::MalformedPace, "bad solution line");
      td.tree = Tree(static_cast<int>(bags));
      td.bags.resize(static_cast<std::size_t>(bags));
      seen.assign(static_cast<std::size_t>(bags), 0);
      continue;
    }
    if (toks[0] == "b") {
      if (toks.size() < 2) fail(ErrorCode::MalformedPace, "bag line without id");
      const long id = to_long(toks[1]);
      if (id < 1 || id > bags || seen[static_cast<std::size_t>(id - 1)]) fail(ErrorCode::MalformedPace, "bad bag id");
      seen[static_cast<std::size_t>(id - 1)] = 1;
      auto& bag = td.bags[static_cast<std::size_t>(id - 1)];
      for (std::size_t k = 2; k < toks.size(); ++k) {
        const long v = to_long(toks[k]);
        if (v < 1 || v > n) fail(ErrorCode::MalformedPace, "bag vertex out of range");
        bag.push_back(static_cast<int>(v - 1));
      }
      std::sort(bag.begin(), bag.end());
      if (std::adjacent_find(bag.begin(), bag.end()) != bag.end()) fail(ErrorCode::MalformedPace, "repeated bag vertex");
      continue;
    }
    if (toks.size() != 2) fail(ErrorCode::MalformedPace, "bad tree edge '" + line + "'");
    const long a = to_long(toks[0]);
    const long b = to_long(toks[1]);
    if (a < 1 || b < 1 || a > bags || b > bags || a == b) fail(ErrorCode::MalformedPace, "bad tree edge");
    td.tree.add_arc(static_cast<int>(a - 1), static_cast<int>(b - 1));
    ++edges;
  }
  if (bags < 0) fail(ErrorCode::MalformedPace, "missing solution line");
  if (std::count(seen.begin(), seen.end(), 0) != 0) fail(ErrorCode::MalformedPace, "missing bag line");
  if (edges != bags - 1) fail(ErrorCode::MalformedPace, "tree edge count differs from bags - 1");
  std::size_t biggest = 0;
  for (const auto& bag : td.bags) biggest = std::max(biggest, bag.size());
  if (static_cast<long>(biggest) != width) fail(ErrorCode::MalformedPace, "declared bag size differs from the bags");
  return td;
}

std::string emit_td(const TreeDecomposition& td, int num_vertices) {
  std::size_t biggest = 0;
  for (const auto& bag : td.bags) biggest = std::max(biggest, bag.size());
  std::ostringstream out;
  out << "s td " << td.bags.size() << ' ' << biggest << ' ' << num_vertices << '\n';
  for (std::size_t k = 0; k < td.bags.size(); ++k) {
    out << "b " << k + 1;
    for (int v : td.bags[k]) out << ' ' << v + 1;
    out << '\n';
  }
  for (const auto& [a, b] : td.tree.arcs()) out << a + 1 << ' ' << b + 1 << '\n';
  return out.str();
}

std::vector<TreeDecomposition> TdStreamParser::feed(std::string_view chunk) {
  std::vector<TreeDecomposition> out;
  partial_.append(chunk);
  std::size_t start = 0;
  for (std::size_t nl; (nl = partial_.find('\n', start)) != std::string::npos; start = nl + 1) {
    take_line(partial_.substr(start, nl - start), out);
  }
  partial_.erase(0, start);
  return out;
}

void TdStreamParser::take_line(const std::string& line, std::vector<TreeDecomposition>& out) {
  const auto toks = tokens(line);
  if (skippable(toks)) return;
  if (toks[0] == "s") {
    // a new solution header restarts collection
    current_.clear();
    bags_ = toks.size() >= 3 ? static_cast<int>(to_long(toks[2])) : -1;
    bags_seen_ = edges_seen_ = 0;
    if (bags_ < 1) {
      bags_ = -1;
      return;
    }
  } else if (bags_ < 0) {
    return;
  } else if (toks[0] == "b") {
    ++bags_seen_;
  } else {
    ++edges_seen_;
  }
  current_ += line;
  current_ += '\n';
  if (bags_seen_ == bags_ && edges_seen_ == bags_ - 1) {
    try {
      out.push_back(parse_td(current_));
    } catch (const Error&) {
      // a garbled solution is dropped; later ones may still be fine
    }
    current_.clear();
    bags_ = -1;
  }
}

}  // namespace tnwmc
