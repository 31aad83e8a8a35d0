#pragma once

#include <optional>
#include <string>
#include <vector>

#include "curtainlab/curtain.hpp"
#include "curtainlab/median.hpp"
#include "curtainlab/raag.hpp"

namespace curtainlab {

// Contact graph of a window: one node per admitted wall, an edge when walls
// cross (share a square) or their carriers share a vertex.  A wall is
// admitted when it has an edge with both endpoints strictly inside the
// horizon, so every recorded adjacency is witnessed inside the window; the
// walls cut off by the horizon are only counted.
struct ContactGraph {
  SimpleGraph g;
  std::vector<int> wall_of_node;
  std::vector<int> node_of_wall;  // -1 when not admitted
  std::vector<int> node_level;    // min carrier depth
  int excluded = 0;

  HypGraph as_hyp(int E) const {
    return HypGraph{g, E, node_level};
  }
};

ContactGraph build_contact_graph(const MedianWindow& w);

// Wall-level left action: image wall of g applied to any visible class edge.
std::optional<int> translate_wall(const BallComplex& b, const GroupElement& g, int wall);
// Guard-checked variant: requires the translated carrier inside the guard.
int translate_node(const BallComplex& b, const ContactGraph& cg, const GroupElement& g, int node);

// Partial automorphism of the contact graph induced by g.
PartialIso contact_iso(const BallComplex& b, const ContactGraph& cg, const GroupElement& g);

// Product (reducibility) detection: connectivity of the non-crossing relation
// on the walls meeting the core ball.  Exact on full graphs, window evidence
// otherwise.
struct ProductSplit {
  std::vector<int> family_a, family_b;  // wall indices
  bool window_evidence = false;
};
std::optional<ProductSplit> detect_product(const MedianWindow& w, int core_radius);

// ---------------------------------------------------------------------------
// Cubical flipping and skewering: the same predicates evaluated on the
// half-spaces of a single wall of the complex itself.

struct CubicalFlip {
  bool holds = false;
  int side_flipped = 0;  // 0 = basepoint side (side_a), 1 = side_b
  int scope_radius = 0;
  std::size_t checked = 0;
  bool proper = false;
  std::string failure;
};

// g applied to (flipped side) inside radius `scope_radius` must land in the
// other side, and g must move the wall off itself.
CubicalFlip wall_flip(const BallComplex& b, int wall, int side_flipped, const GroupElement& g,
                      int scope_radius);

struct CubicalSkewer {
  bool holds = false;
  int scope_radius = 0;
  std::size_t checked = 0;
  // wall-chain tau data: translates {W, wW, ..., w^k W} form a chain and
  // d(x, w^i x) >= i+1 on checked carrier vertices
  int chain_k = 0;
  bool chain_verified = false;
  std::vector<int> min_displacement;
};

// w(side) properly inside side, plus the wall-chain translation-length
// certificate up to k translates.
CubicalSkewer wall_skewer(const BallComplex& b, int wall, int side_kept, const GroupElement& w,
                          int k, int scope_radius);

}  // namespace curtainlab
