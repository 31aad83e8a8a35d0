#include "curtainlab/generators.hpp"

#include <algorithm>
#include <bitset>

namespace curtainlab {

MedianWindow path_window(int n) {
  std::vector<std::string> labels;
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (int i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return MedianWindow::full_graph(std::move(labels), edges, 0);
}

MedianWindow grid_window(int a, int b) {
  std::vector<std::string> labels;
  std::vector<std::pair<VertexId, VertexId>> edges;
  auto id = [&](int i, int j) { return static_cast<VertexId>(i * (b + 1) + j); };
  for (int i = 0; i <= a; ++i)
    for (int j = 0; j <= b; ++j)
      labels.push_back("(" + std::to_string(i) + "," + std::to_string(j) + ")");
  for (int i = 0; i <= a; ++i)
    for (int j = 0; j <= b; ++j) {
      if (i < a) edges.emplace_back(id(i, j), id(i + 1, j));
      if (j < b) edges.emplace_back(id(i, j), id(i, j + 1));
    }
  return MedianWindow::full_graph(std::move(labels), edges, 0);
}

MedianWindow hypercube_window(int d) {
  const int n = 1 << d;
  std::vector<std::string> labels;
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (int v = 0; v < n; ++v) {
    std::string s;
    for (int i = d - 1; i >= 0; --i) s += (v >> i) & 1 ? '1' : '0';
    labels.push_back(s);
  }
  for (int v = 0; v < n; ++v)
    for (int i = 0; i < d; ++i)
      if (!((v >> i) & 1)) edges.emplace_back(v, v | (1 << i));
  return MedianWindow::full_graph(std::move(labels), edges, 0);
}

namespace {

MedianWindow random_tree(Rng& rng, int max_vertices) {
  int n = rng.range(4, std::min(max_vertices, 60));
  std::vector<std::string> labels;
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (int i = 0; i < n; ++i) labels.push_back("t" + std::to_string(i));
  for (int i = 1; i < n; ++i)
    edges.emplace_back(static_cast<VertexId>(rng.below(i)), static_cast<VertexId>(i));
  return MedianWindow::full_graph(std::move(labels), edges, 0);
}

MedianWindow random_tree_times_path(Rng& rng, int max_vertices) {
  int p = rng.range(2, 6);
  int t = rng.range(3, std::max(3, max_vertices / (p + 1) - 1));
  std::vector<int> parent(t, 0);
  for (int i = 1; i < t; ++i) parent[i] = static_cast<int>(rng.below(i));
  std::vector<std::string> labels;
  std::vector<std::pair<VertexId, VertexId>> edges;
  auto id = [&](int v, int level) { return static_cast<VertexId>(v * (p + 1) + level); };
  for (int v = 0; v < t; ++v)
    for (int l = 0; l <= p; ++l)
      labels.push_back("t" + std::to_string(v) + "*" + std::to_string(l));
  for (int v = 0; v < t; ++v)
    for (int l = 0; l <= p; ++l) {
      if (l < p) edges.emplace_back(id(v, l), id(v, l + 1));
      if (v > 0) edges.emplace_back(id(v, l), id(parent[v], l));
    }
  return MedianWindow::full_graph(std::move(labels), edges, 0);
}

// Ideals of a random poset on k elements form a distributive lattice whose
// covering graph is median.
MedianWindow random_ideal_lattice(Rng& rng, int max_vertices) {
  for (int attempt = 0; attempt < 50; ++attempt) {
    int k = rng.range(4, 8);
    std::vector<std::uint16_t> below(k, 0);  // strictly-below sets, transitively closed
    for (int j = 1; j < k; ++j)
      for (int i = 0; i < j; ++i)
        if (rng.below(100) < 35) below[j] |= below[i] | (1u << i);
    std::vector<int> ideals;
    for (int s = 0; s < (1 << k); ++s) {
      bool down = true;
      for (int j = 0; j < k && down; ++j)
        if ((s >> j) & 1 && (below[j] & ~s)) down = false;
      if (down) ideals.push_back(s);
    }
    if (static_cast<int>(ideals.size()) > max_vertices || ideals.size() < 5) continue;
    std::vector<int> index(1 << k, -1);
    for (std::size_t v = 0; v < ideals.size(); ++v) index[ideals[v]] = static_cast<int>(v);
    std::vector<std::string> labels;
    for (int s : ideals) labels.push_back("i" + std::to_string(s));
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (int s : ideals)
      for (int j = 0; j < k; ++j)
        if (!((s >> j) & 1) && index[s | (1 << j)] >= 0)
          edges.emplace_back(index[s], index[s | (1 << j)]);
    return MedianWindow::full_graph(std::move(labels), edges, 0);
  }
  return random_tree(rng, max_vertices);
}

}  // namespace

GeneratedGraph random_median_graph(Rng& rng, int max_vertices) {
  switch (rng.below(5)) {
    case 0: return {random_tree(rng, max_vertices), "tree"};
    case 1: {
      int a = rng.range(2, 12), b = rng.range(1, std::max(1, max_vertices / (a + 1) - 1));
      b = std::min(b, 12);
      return {grid_window(a, b), "grid"};
    }
    case 2: {
      int d = rng.range(2, 5);
      return {hypercube_window(d), "hypercube"};
    }
    case 3: return {random_tree_times_path(rng, max_vertices), "tree-x-path"};
    default: return {random_ideal_lattice(rng, max_vertices), "ideal-lattice"};
  }
}

}  // namespace curtainlab
