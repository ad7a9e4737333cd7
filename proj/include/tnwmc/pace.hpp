#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tnwmc/graph.hpp"

namespace tnwmc {

/// PACE 2017 `.gr`: `p tw <n> <m>` then one `u v` line per edge, 1-based.
Graph parse_gr(std::string_view text);
std::string emit_gr(const Graph& g);

/// PACE 2017 `.td`: `s td <bags> <max bag size> <n>`, `b <id> <v...>` lines
/// and `<id> <id>` tree edges. Vertices and bag ids are 1-based in the file
/// and 0-based in memory.
TreeDecomposition parse_td(std::string_view text);
std::string emit_td(const TreeDecomposition& td, int num_vertices);

/// Incremental `.td` reader for solver output that may contain several
/// solutions one after the other.
class TdStreamParser {
 public:
  /// Consumes a chunk and returns every decomposition completed by it.
  std::vector<TreeDecomposition> feed(std::string_view chunk);

 private:
  void take_line(const std::string& line, std::vector<TreeDecomposition>& out);

  std::string partial_;
  std::string current_;
  int bags_ = -1;
  int bags_seen_ = 0;
  int edges_seen_ = 0;
};

}  // namespace tnwmc
