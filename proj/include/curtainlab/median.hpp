#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "curtainlab/errors.hpp"
#include "curtainlab/graph.hpp"

namespace curtainlab {

// A theta class of edges.  side_a always contains the basepoint; sides are
// computed lazily because materializing them for every wall of a large window
// is wasteful.
struct Wall {
  std::vector<std::pair<VertexId, VertexId>> edges;  // (min,max), sorted
  std::vector<VertexId> carrier;                     // endpoints of edges, sorted

  // Lazily filled by MedianWindow.
  mutable std::vector<VertexId> side_a, side_b;
  mutable bool sides_ready = false;
  mutable int degenerate_state = -1;  // -1 unknown, 0 splits in two, 1 degenerate

  VertexId rep_a() const { return edges.front().first; }
  VertexId rep_b() const { return edges.front().second; }
  int min_depth(const std::vector<int>& depth) const;
};

struct ConvexSet {
  std::vector<VertexId> members;  // sorted
  bool witnessed = false;         // interval-closure certified
};

// A finite graph standing in for a (possibly infinite) median graph.  When
// is_window is true the graph is the radius-`horizon` ball of something
// bigger, and exact queries are only served inside radius `guard`.
class MedianWindow {
 public:
  MedianWindow() = default;  // empty placeholder; fill via the factories
  static MedianWindow full_graph(std::vector<std::string> labels,
                                 const std::vector<std::pair<VertexId, VertexId>>& edges,
                                 VertexId basepoint);
  static MedianWindow window(std::vector<std::string> labels,
                             const std::vector<std::pair<VertexId, VertexId>>& edges,
                             VertexId basepoint, int horizon, int guard);

  const SimpleGraph& graph() const { return g_; }
  std::size_t size() const { return g_.size(); }
  VertexId basepoint() const { return basepoint_; }
  int horizon() const { return horizon_; }
  int guard() const { return guard_; }
  bool is_window() const { return is_window_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(VertexId v) const { return labels_[v]; }
  std::optional<VertexId> find_label(const std::string& s) const;
  int depth(VertexId v) const { return depth_[v]; }
  const std::vector<int>& depths() const { return depth_; }

  // --- walls ---------------------------------------------------------------
  const std::vector<Wall>& walls() const;          // computed once, cached
  int wall_of_edge(VertexId a, VertexId b) const;  // -1 if no such edge
  bool wall_degenerate(int wall) const;
  int degenerate_wall_count() const;
  // side of v w.r.t. wall w: 0 = side of rep_a, 1 = side of rep_b.
  int wall_side(int wall, VertexId v) const;
  // Materialized sides (side_a = basepoint side).  Throws DegenerateWall on a
  // full graph whose wall fails to split in two.
  void wall_sides(int wall) const;
  // Per-wall side membership bitsets (bit set = rep_b side).  Desk-scale
  // graphs only; costs two BFS per wall on first use.
  const std::vector<std::vector<std::uint64_t>>& wall_side_bits() const;
  // All pairs of crossing walls (discovered on the squares of the graph).
  const std::vector<std::pair<int, int>>& crossings() const;
  bool walls_cross(int w1, int w2) const;
  // Window dimension: the largest family of pairwise-crossing walls meeting
  // at a corner vertex.
  int dimension() const;

  // --- metric operations ----------------------------------------------------
  int distance(VertexId x, VertexId y) const;
  std::vector<int> separating_walls(VertexId x, VertexId y) const;
  VertexId median(VertexId x, VertexId y, VertexId z) const;
  std::vector<VertexId> interval(VertexId x, VertexId y) const;

  struct HullResult {
    ConvexSet hull;
    int rounds = 0;
  };
  HullResult hull(const std::vector<VertexId>& seed) const;
  bool is_interval_closed(const std::vector<VertexId>& members) const;

  VertexId gate_projection(const ConvexSet& convex, VertexId x) const;
  // Exhaustive check of the separating-wall characterization of the gate.
  bool gate_characterization_holds(const ConvexSet& convex, VertexId x, VertexId gate) const;

  std::vector<int> maximal_wall_chain(VertexId x, VertexId y) const;
  // Does `wall` separate walls u and v (carriers in opposite sides)?
  bool wall_separates_walls(int wall, int u, int v) const;

  bool validate_median() const;  // throws WindowNotCheckable on windows

  // Internal, unguarded distance (used by machinery that manages its own
  // visibility radii).
  int raw_distance(VertexId x, VertexId y) const { return g_.distance(x, y); }

 private:
  void require_guarded(VertexId v, const char* op) const;
  void compute_walls() const;

  SimpleGraph g_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, VertexId> index_;
  VertexId basepoint_ = 0;
  int horizon_ = 0;
  int guard_ = 0;
  bool is_window_ = false;
  std::vector<int> depth_;

  mutable std::vector<Wall> walls_;
  mutable std::vector<int> edge_wall_;  // indexed like g_.edges() order
  mutable std::unordered_map<std::uint64_t, int> edge_pos_;
  mutable std::vector<std::pair<int, int>> crossings_;
  mutable std::vector<std::vector<std::uint64_t>> side_bits_;
  mutable bool walls_ready_ = false;
  mutable int dimension_ = -1;
};

}  // namespace curtainlab
