#pragma once

#include <string>

#include "curtainlab/median.hpp"
#include "curtainlab/util.hpp"

namespace curtainlab {

struct GeneratedGraph {
  MedianWindow graph;
  std::string kind;
};

// A random full median graph with at most max_vertices vertices, drawn from a
// mixed family: trees, grids, hypercubes, tree x path products and ideal
// lattices of random posets.
GeneratedGraph random_median_graph(Rng& rng, int max_vertices);

MedianWindow path_window(int n);        // path 0..n-1 based at 0
MedianWindow grid_window(int a, int b); // (a+1) x (b+1) grid based at (0,0)
MedianWindow hypercube_window(int d);

}  // namespace curtainlab
