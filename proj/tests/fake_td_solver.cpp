// Stand-in for an external tree-decomposition solver.
//   trivial   one bag with every vertex, then wait; on SIGTERM print a
//             min-fill decomposition and exit
//   stubborn  one bag with every vertex, then ignore SIGTERM forever
//   both      one bag with every vertex, then min-fill, then exit
//   silent    exit without output
//   garbage   print junk and exit
#include <csignal>
#include <iostream>
#include <iterator>
#include <string>
#include <thread>

#include <unistd.h>

#include "tnwmc/heuristics.hpp"
#include "tnwmc/pace.hpp"

namespace {
volatile std::sig_atomic_t terminated = 0;
void on_term(int) { terminated = 1; }
}  // namespace

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "trivial";
  if (mode == "silent") return 0;
  if (mode == "garbage") {
    std::cout << "s td banana\nb x y\n" << std::flush;
    return 0;
  }
  const std::string text{std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  const tnwmc::Graph g = tnwmc::parse_gr(text);
  std::signal(SIGTERM, mode == "stubborn" ? SIG_IGN : on_term);

  tnwmc::TreeDecomposition one{tnwmc::Tree(1), {{}}};
  for (int v = 0; v < g.num_vertices(); ++v) one.bags[0].push_back(v);
  std::cout << tnwmc::emit_td(one, g.num_vertices()) << std::flush;

  if (mode == "both") terminated = 1;
  while (!terminated) std::this_thread::sleep_for(std::chrono::milliseconds(10));
  std::cout << tnwmc::emit_td(tnwmc::min_fill_tree_decomposition(g, 0), g.num_vertices()) << std::flush;
  return 0;
}
