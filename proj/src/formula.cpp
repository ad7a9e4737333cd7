#include "tnwmc/formula.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tnwmc/error.hpp"

namespace tnwmc {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view tok, T& out) {
  if constexpr (std::is_floating_point_v<T>) {
    // from_chars for double is not available everywhere; strtod is exact enough
    std::string s(tok);
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && !s.empty();
  } else {
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc() && ptr == tok.data() + tok.size();
  }
}

}  // namespace

CnfFormula::CnfFormula(int num_vars, std::vector<Clause> clauses) : num_vars_(num_vars) {
  if (num_vars < 0) fail(ErrorCode::MalformedHeader, "negative variable count");
  clauses_.reserve(clauses.size());
  for (auto& clause : clauses) {
    Clause kept;
    bool tautology = false;
    for (Literal lit : clause) {
      if (lit == 0 || var_of(lit) > num_vars) {
        fail(ErrorCode::LiteralOutOfRange,
             "literal " + std::to_string(lit) + " outside 1.." + std::to_string(num_vars));
      }
      if (std::find(kept.begin(), kept.end(), -lit) != kept.end()) tautology = true;
      if (std::find(kept.begin(), kept.end(), lit) == kept.end()) kept.push_back(lit);
    }
    if (!tautology) clauses_.push_back(std::move(kept));
  }
}

int CnfFormula::occurrences(int var) const {
  int count = 0;
  for (const auto& clause : clauses_) {
    for (Literal lit : clause) {
      if (var_of(lit) == var) ++count;
    }
  }
  return count;
}

WeightedFormula parse_dimacs(std::istream& in) {
  bool have_header = false;
  int num_vars = 0;
  long declared_clauses = 0;
  std::vector<Clause> clauses;
  Clause current;
  std::vector<std::pair<int, LiteralWeights>> weight_lines;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (toks[0][0] == 'c') continue;
    if (toks[0] == "%") break;
    if (toks[0] == "p") {
      if (have_header) fail(ErrorCode::MalformedHeader, where + ": duplicate header");
      if (toks.size() != 4 || toks[1] != "cnf" || !parse_number(toks[2], num_vars) ||
          !parse_number(toks[3], declared_clauses) || num_vars < 0 || declared_clauses < 0) {
        fail(ErrorCode::MalformedHeader, where + ": expected 'p cnf <vars> <clauses>'");
      }
      have_header = true;
      continue;
    }
    if (toks[0] == "w") {
      if (!have_header) fail(ErrorCode::InvalidWeightLine, where + ": weight line before header");
      int var = 0;
      LiteralWeights w;
      bool ok = toks.size() >= 3 && toks.size() <= 4 && parse_number(toks[1], var);
      if (ok && toks.size() == 3) {
        double p = 0;
        ok = parse_number(toks[2], p);
        w = {1.0 - p, p};
      } else if (ok) {
        ok = parse_number(toks[2], w.w0) && parse_number(toks[3], w.w1);
      }
      if (!ok || var < 1 || var > num_vars || !std::isfinite(w.w0) || !std::isfinite(w.w1)) {
        fail(ErrorCode::InvalidWeightLine, where + ": expected 'w <var> <p>' or 'w <var> <w0> <w1>'");
      }
      weight_lines.emplace_back(var, w);
      continue;
    }
    if (!have_header) fail(ErrorCode::MalformedHeader, where + ": clause before 'p cnf' header");
    for (auto tok : toks) {
      long lit = 0;
      if (!parse_number(tok, lit)) {
        fail(ErrorCode::LiteralOutOfRange, where + ": '" + std::string(tok) + "' is not a literal");
      }
      if (lit == 0) {
        clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      if (std::abs(lit) > num_vars) {
        fail(ErrorCode::LiteralOutOfRange,
             where + ": literal " + std::to_string(lit) + " exceeds " + std::to_string(num_vars));
      }
      current.push_back(static_cast<Literal>(lit));
    }
  }
  if (!have_header) fail(ErrorCode::MalformedHeader, "missing 'p cnf' header");
  if (!current.empty()) fail(ErrorCode::UnterminatedClause, "last clause has no terminating 0");
  if (static_cast<long>(clauses.size()) != declared_clauses) {
    fail(ErrorCode::MalformedHeader, "header declares " + std::to_string(declared_clauses) +
                                         " clauses but " + std::to_string(clauses.size()) + " were read");
  }

  WeightedFormula out{CnfFormula(num_vars, std::move(clauses)), WeightFunction(num_vars)};
  for (const auto& [var, w] : weight_lines) out.weights.set(var, w);
  return out;
}

WeightedFormula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

WeightedFormula read_dimacs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::MalformedHeader, "cannot open " + path);
  return parse_dimacs(in);
}

std::string write_dimacs(const CnfFormula& formula, const WeightFunction& weights) {
  std::ostringstream out;
  out << "p cnf " << formula.num_vars() << ' ' << formula.clauses().size() << '\n';
  for (const auto& clause : formula.clauses()) {
    for (Literal lit : clause) out << lit << ' ';
    out << "0\n";
  }
  char buf[96];
  for (int v = 1; v <= weights.num_vars(); ++v) {
    const auto& w = weights[v];
    if (w == LiteralWeights{}) continue;
    std::snprintf(buf, sizeof buf, "w %d %.17g %.17g\n", v, w.w0, w.w1);
    out << buf;
  }
  return out.str();
}

double brute_force_count(const CnfFormula& formula, const WeightFunction& weights) {
  const int n = formula.num_vars();
  if (n > kBruteForceMaxVars) {
    fail(ErrorCode::TooManyVariables, std::to_string(n) + " variables exceed the oracle guard of " +
                                          std::to_string(kBruteForceMaxVars));
  }
  std::vector<std::uint32_t> pos, neg;
  for (const auto& clause : formula.clauses()) {
    std::uint32_t p = 0, q = 0;
    for (Literal lit : clause) {
      const std::uint32_t bit = 1u << (var_of(lit) - 1);
      (lit > 0 ? p : q) |= bit;
    }
    pos.push_back(p);
    neg.push_back(q);
  }
  auto weight_of = [&](int var, std::uint32_t assignment) {
    const auto& w = weights[var];
    return (assignment >> (var - 1)) & 1u ? w.w1 : w.w0;
  };

  const std::uint64_t total = std::uint64_t{1} << n;
  double sum = 0.0;
  for (std::uint64_t t = 0; t < total; ++t) {
    const auto tau = static_cast<std::uint32_t>(t);
    bool sat = true;
    for (std::size_t c = 0; c < pos.size() && sat; ++c) {
      sat = ((tau & pos[c]) | (~tau & neg[c])) != 0;
    }
    if (!sat) continue;
    double product = 1.0;
    for (int v = 1; v <= n; ++v) product *= weight_of(v, tau);
    sum += product;
  }
  return sum;
}

}  // namespace tnwmc
