#pragma once

#include <climits>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "curtainlab/errors.hpp"
#include "curtainlab/graph.hpp"
#include "curtainlab/util.hpp"

namespace curtainlab {

// A finite hyperbolic(ish) graph together with the constant E in force and a
// per-node visibility level (distance-like; 0 when the graph is not a window
// of anything).  Predicates use levels to scope what a partial automorphism
// must be defined on.
struct HypGraph {
  SimpleGraph g;
  int E = 1;
  std::vector<int> level;  // empty means all zero

  int level_of(VertexId v) const { return level.empty() ? 0 : level[v]; }
};

// Largest four-point defect (delta) over sampled quadruples, as a rational
// with denominator 2.  Exhaustive below `exhaustive_cap` vertices.
Rational four_point_delta(const SimpleGraph& g, std::uint64_t seed, int quadruple_samples = 200000,
                          int exhaustive_cap = 100);
// E = max(1, ceil(delta)).
int measure_E(const SimpleGraph& g, std::uint64_t seed);

// Nearest-point projections of every vertex onto a geodesic.
struct AxisProjection {
  std::vector<VertexId> axis;
  std::vector<int> min_dist;                 // per graph vertex
  std::vector<std::vector<int>> achieving;   // axis indices at minimal distance
};
AxisProjection project_axis(const SimpleGraph& g, const std::vector<VertexId>& axis);
// Single-vertex variant: all axis vertices nearest to x.
std::vector<VertexId> project_to_geodesic(const HypGraph& h, const std::vector<VertexId>& axis,
                                          VertexId x);

// Curtain dual to a geodesic at a 6E-wide interval strictly inside it.
// Membership convention: a vertex belongs to pole/plus/minus when some
// nearest axis point lies in the respective range, so pole may overlap the
// half-spaces but plus and minus are verified disjoint.
struct Curtain {
  std::vector<VertexId> axis;
  int i0 = 0, i1 = 0;  // pole interval endpoints (axis indices), i1 - i0 == 6E
  int E = 1;
  std::vector<VertexId> pole, plus, minus;  // sorted

  bool in_pole(VertexId v) const { return sorted_contains(pole, v); }
  bool in_plus(VertexId v) const { return sorted_contains(plus, v); }
  bool in_minus(VertexId v) const { return sorted_contains(minus, v); }
};

Curtain make_curtain(const HypGraph& h, const std::vector<VertexId>& axis, int offset);

// Structural invariants: cover, disjoint half-spaces, path crossing, 3E
// separation.  Returns a list of violated clauses (empty = all hold).
std::vector<std::string> curtain_violations(const HypGraph& h, const Curtain& c);

// Set-level separation: every path from A to B meets `middle`; A and B
// nonempty and disjoint from middle.
bool separates_sets(const SimpleGraph& g, const std::vector<VertexId>& middle,
                    const std::vector<VertexId>& A, const std::vector<VertexId>& B);

bool is_chain(const HypGraph& h, const std::vector<Curtain>& curtains);

// Greedy chain separating x,y: curtains on one geodesic with 2E gaps.
std::vector<Curtain> greedy_chain(const HypGraph& h, VertexId x, VertexId y);

// ---------------------------------------------------------------------------
// Partial automorphisms and the flip/skewer predicates.

struct PartialIso {
  std::vector<std::int32_t> img;  // -1 where undefined
  std::string name;

  std::optional<VertexId> operator()(VertexId v) const {
    return img[v] < 0 ? std::nullopt : std::optional<VertexId>(static_cast<VertexId>(img[v]));
  }
};

// Which nodes a predicate is required to evaluate on: level <= max_level.
struct Scope {
  int max_level = INT_MAX;
  bool required(const HypGraph& h, VertexId v) const { return h.level_of(v) <= max_level; }
};

enum class Side { Plus, Minus };

struct FlipReport {
  bool holds = false;
  Side flipped = Side::Plus;
  int scope_level = INT_MAX;  // guard recorded in the output
  std::size_t checked_source = 0;
  std::size_t checked_pole = 0;
  bool proper = false;
  std::string failure;  // first violated clause, for diagnostics
};

// flips: a(h^side) properly inside the opposite half-space and a(h) disjoint
// from h, decided on the scoped visible sets.  Throws PartialAction when the
// iso is undefined on a required vertex or a required part is empty.
FlipReport flips(const HypGraph& h, const PartialIso& a, const Curtain& c, Side flipped,
                 const Scope& scope);

struct SkewerReport {
  int m = 0;
  int scope_level = INT_MAX;
  std::size_t checked_plus = 0;
  std::size_t checked_pole = 0;
};

// Least m <= m_max with a^m(h+) properly inside h+ and a^m(h) disjoint from h.
std::optional<SkewerReport> skewers(const HypGraph& h, const Curtain& c, int m_max,
                                    const std::function<PartialIso(int)>& power_iso,
                                    const std::function<Scope(int)>& power_scope);

struct TauCertificate {
  std::string element;
  int iterations = 0;  // k
  bool chain_verified = false;
  Rational tau_lower{0, 1};
  Rational ratio_bound{0, 1};  // E(k+1)/k
  int scope_level = INT_MAX;
  // min displacement of scoped pole vertices under w^i, per i = 1..k
  std::vector<int> min_displacement;
};

// Verifies {h, wh, ..., w^k h} is a chain and the displacement law
// d(x, w^i x) >= E(i+1); w must already skewer with m = 1.
TauCertificate certify_tau(const HypGraph& h, const Curtain& c, int k,
                           const std::function<PartialIso(int)>& power_iso,
                           const std::function<Scope(int)>& power_scope,
                           const std::string& element_name);

struct FlipSkewerResult {
  FlipReport flip_plus;   // by g1
  FlipReport flip_minus;  // by g2
  bool containment = false;  // g2 g1 (h + h+) properly inside h+
  TauCertificate tau;
};

// Flip-then-skewer: g1 flips h+, g2 flips h-, and the composite w = g2*g1
// skewers; verifies the containment directly and certifies tau for w.
FlipSkewerResult flip_then_skewer(const HypGraph& h, const Curtain& c, const PartialIso& g1,
                                  const PartialIso& g2, const Scope& scope, int tau_k,
                                  const std::function<PartialIso(int)>& w_power_iso,
                                  const std::function<Scope(int)>& w_power_scope,
                                  const std::string& w_name);

// Helpers for building partial isos.
PartialIso iso_from_fn(std::size_t n, const std::function<std::optional<VertexId>(VertexId)>& f,
                       const std::string& name);
PartialIso compose(const PartialIso& outer, const PartialIso& inner, const std::string& name);

}  // namespace curtainlab
