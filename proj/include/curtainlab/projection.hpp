#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "curtainlab/contact.hpp"
#include "curtainlab/curtain.hpp"
#include "curtainlab/raag.hpp"

namespace curtainlab {

enum class Rel { Same, Nested, Orth, Trans };

// ---------------------------------------------------------------------------
// Flat-over-tree systems (one commuting pair): one x-line and one y-line per
// visible flat (coset of the commuting subgroup), all nested in the maximal
// domain, whose space is the contact graph of the window.  Lines are
// symbolic: their hyperbolic spaces are integer coordinate lines, so line
// distances are exact and unaffected by the horizon.  Presentations with no
// commuting pair degenerate to the maximal domain alone.
class FlatSystem {
 public:
  struct DomainRef {
    int flat = -1;  // -1 = maximal domain S
    int axis = 0;   // 0 = first generator of the pair, 1 = second
    bool is_maximal() const { return flat < 0; }
    friend bool operator==(const DomainRef& a, const DomainRef& b) {
      return a.flat == b.flat && a.axis == b.axis;
    }
    friend bool operator<(const DomainRef& a, const DomainRef& b) {
      return a.flat != b.flat ? a.flat < b.flat : a.axis < b.axis;
    }
  };

  struct Constants {
    int lambda = 1;
    int K = 1;
    int N = 1;          // complexity: largest pairwise non-transverse family
    int E_window = 1;   // measured hyperbolicity of the maximal space
    int E_formula = 1;  // max(K, N * (lambda + 1)), reported only
  };

  static FlatSystem build(const BallComplex& ball, std::uint64_t seed);

  const BallComplex& ball() const { return *ball_; }
  const ContactGraph& contact() const { return contact_; }
  const Constants& constants() const { return constants_; }
  bool has_flats() const { return !flats_.empty(); }
  std::size_t flat_count() const { return flats_.size(); }
  const GroupElement& flat_rep(int f) const { return flats_[f]; }
  std::string domain_name(const DomainRef& d) const;
  std::optional<int> find_flat(const GroupElement& rep) const;

  // coset representative: normal form with its trailing block of commuting
  // pair letters removed
  GroupElement strip_to_rep(const GroupElement& g) const;

  Rel relation(const DomainRef& a, const DomainRef& b) const;
  std::optional<DomainRef> translate_domain(const GroupElement& g, const DomainRef& d) const;

  // projections
  int pi_line(const DomainRef& line, const GroupElement& p) const;
  std::vector<VertexId> pi_maximal(const GroupElement& p) const;  // contact nodes at p
  int rho_line_line(const DomainRef& from, const DomainRef& to) const;
  std::vector<VertexId> rho_line_maximal(const DomainRef& line) const;

  // distances
  int dist_line(const DomainRef& line, const GroupElement& p, const GroupElement& q) const;
  int dist_maximal_sets(const std::vector<VertexId>& a, const std::vector<VertexId>& b) const;
  int dist_domain(const DomainRef& d, const GroupElement& p, const GroupElement& q) const;

  // --- axiom sweeps ---------------------------------------------------------
  struct Violation {
    std::string domain_u, domain_v;
    std::string witness;
    int d_u = 0, d_v = 0;
  };
  // Behrstock: for transverse line pairs and sample points, far projection on
  // one side forces a close projection on the other.
  std::vector<Violation> verify_behrstock(const std::vector<GroupElement>& samples,
                                          int max_flats) const;
  // Bounded geodesic image for line <| S on sampled contact-graph geodesics.
  std::vector<Violation> verify_bgi(int max_flats, int geodesic_samples,
                                    std::uint64_t seed) const;
  // Measured lambda: max observed defect + 1 over the same sweeps.
  static int measure_lambda(const BallComplex& ball, const ContactGraph& cg, int max_flats,
                            std::uint64_t seed);

  // --- searches -------------------------------------------------------------
  struct ActiveDomainReport {
    DomainRef domain;
    std::string domain_label;
    Rational growth_ratio{0, 1};
    bool passes_threshold = false;
    int iterations = 0;
  };
  ActiveDomainReport find_active_domain(const GroupElement& a, int k,
                                        const Rational& threshold) const;

  std::optional<std::pair<GroupElement, DomainRef>> find_transverse_pair(
      const std::vector<GroupElement>& T, const DomainRef& U, int complexity_bound) const;

  struct ConjugateChain {
    std::vector<DomainRef> domains;       // U_0 .. U_P
    std::vector<GroupElement> elements;   // g_1 .. g_P
    int s = 0;                            // power used in the iteration
    bool local_to_global_hypothesis = false;  // consecutive separations > 4E
    std::vector<int> separations;             // d_{U_i}(rho^{i-1}_i, rho^{i+1}_i)
  };
  ConjugateChain conjugate_chain(const GroupElement& a, const GroupElement& b, const DomainRef& U,
                                 const Rational& K1, int P) const;
  bool pairwise_transverse(const std::vector<DomainRef>& domains) const;

  struct PassingUp {
    DomainRef W;
    std::vector<DomainRef> triple;
    std::vector<int> separations;  // pairwise, in order (0,1),(0,2),(1,2)
  };
  std::optional<PassingUp> passing_up_search(const std::vector<DomainRef>& domains,
                                             const GroupElement& x, const GroupElement& y,
                                             const Rational& K1, const Rational& K2) const;

 private:
  const BallComplex* ball_ = nullptr;
  ContactGraph contact_;
  int pair_a_ = -1, pair_b_ = -1;  // generator indices of the commuting pair
  std::vector<GroupElement> flats_;
  std::map<std::string, int> flat_index_;
  Constants constants_;
  mutable std::map<std::string, GroupElement> rep_inverse_cache_;

  const GroupElement& rep_inverse(int flat) const;
  std::pair<int, int> leading_block(const GroupElement& s) const;  // (dx, dy)
};

// ---------------------------------------------------------------------------
// Table-backed system for hand-built fixtures: explicit domains, relations,
// sample projections and rho points.  Used to plant axiom violations and
// invariant orbits in tests; serializes fully.
struct TableSystem {
  std::vector<std::string> domain_names;
  std::vector<HypGraph> spaces;
  std::vector<std::vector<Rel>> rel;
  // pi[d][sample] = node set in space d
  std::vector<std::vector<std::vector<VertexId>>> pi;
  // rho[{from,to}] = node set in space `to`
  std::map<std::pair<int, int>, std::vector<VertexId>> rho;
  // rho_down[{V,U}][node of V] = image set in U (the nested-pair map)
  std::map<std::pair<int, int>, std::vector<std::vector<VertexId>>> rho_down;
  // translate[g][d] = image domain under abstract generator g
  std::vector<std::vector<int>> translate;
  int lambda = 1;

  int dist(int domain, const std::vector<VertexId>& a, const std::vector<VertexId>& b) const;
  std::vector<FlatSystem::Violation> verify_behrstock(const std::vector<int>& samples) const;
  // U nested in V: geodesics in V far from rho[{U,V}] must have small image
  // under rho_down[{V,U}].
  std::vector<FlatSystem::Violation> verify_bgi(int U, int V,
                                                const std::vector<std::vector<VertexId>>&
                                                    geodesics) const;
  // first generator word (as index list) whose translate of U is transverse
  std::optional<std::vector<int>> find_transverse_pair(int U, int reach) const;
};

// ---------------------------------------------------------------------------
// End-to-end rank-one recipe.

struct RecipeBudget {
  int m_max = 64;
  int tau_k = 3;
  Rational a_threshold{1, 2};
  int separation_target_E = 30;  // want d_S(rho_U, rho_gU) > 30 E
  int margin_target_E = 6;       // curtain endpoint margins
  int transverse_reach = 4;      // T-length for the first transverse search
  int candidate_length = 0;      // 0 = horizon
};

struct RecipeCertificate {
  std::string element;  // w
  std::string a, g;
  int m = 0;
  std::string route;  // "direct-maximal" | "maximal-curtain" | "cubical-wall"
  int E_maximal = 1;

  // maximal-space curtain data (direct and curtain routes)
  bool has_curtain = false;
  std::vector<int> curtain_axis_walls;  // wall indices along the axis
  int curtain_offset = 0;
  std::optional<SkewerReport> skewer;
  std::vector<FlipReport> flip_reports;
  std::optional<TauCertificate> tau;

  // cubical route data
  int cubical_wall = -1;
  std::pair<std::string, std::string> wall_edge_labels;
  std::optional<CubicalFlip> cubical_flip_plus, cubical_flip_minus;
  std::optional<CubicalSkewer> cubical_skewer;

  std::string notes;  // route decisions, achieved separations
};

struct RecipeOutcome {
  std::optional<RecipeCertificate> certificate;
  std::optional<ProductSplit> product_witness;
  std::string reason;
};

RecipeOutcome recipe_rank_one(const BallComplex& ball, const FlatSystem& system,
                              const std::vector<GroupElement>& T, const RecipeBudget& budget);

// Re-runs every predicate stored in the certificate against the window.
bool verify_certificate(const BallComplex& ball, const FlatSystem& system,
                        const RecipeCertificate& cert);

}  // namespace curtainlab
