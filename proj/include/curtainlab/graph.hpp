#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace curtainlab {

using VertexId = std::uint32_t;
constexpr int kUnreached = -1;

// Undirected simple graph on 0..n-1 with sorted adjacency lists.
class SimpleGraph {
 public:
  SimpleGraph() = default;
  explicit SimpleGraph(std::size_t n) : adj_(n) {}

  VertexId add_vertex() {
    adj_.emplace_back();
    return static_cast<VertexId>(adj_.size() - 1);
  }

  // Edges must be added before queries; finish() sorts adjacency lists.
  void add_edge(VertexId a, VertexId b);
  void finish();

  std::size_t size() const { return adj_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  const std::vector<VertexId>& neighbors(VertexId v) const { return adj_[v]; }
  bool has_edge(VertexId a, VertexId b) const;

  // Every edge once, as (min,max) pairs sorted lexicographically.
  std::vector<std::pair<VertexId, VertexId>> edges() const;

  // Distances from src; kUnreached where not reachable.  `skip` vertices are
  // treated as deleted (may be empty).
  std::vector<int> bfs(VertexId src) const;
  std::vector<int> bfs_multi(const std::vector<VertexId>& sources) const;
  std::vector<int> bfs_avoiding(const std::vector<VertexId>& sources,
                                const std::vector<bool>& blocked) const;

  int distance(VertexId a, VertexId b) const;
  bool connected() const;
  int eccentricity(VertexId v) const;

  // Component labels (-1 for blocked vertices).
  std::vector<int> components(const std::vector<bool>* blocked_vertex = nullptr,
                              const std::vector<std::pair<VertexId, VertexId>>* removed_edges =
                                  nullptr) const;

  // One shortest path src..dst inclusive (ties broken toward smaller ids).
  std::vector<VertexId> shortest_path(VertexId src, VertexId dst) const;

 private:
  std::vector<std::vector<VertexId>> adj_;
  std::size_t edge_count_ = 0;
  bool finished_ = false;
};

}  // namespace curtainlab
