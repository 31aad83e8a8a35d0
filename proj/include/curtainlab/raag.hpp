#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "curtainlab/errors.hpp"
#include "curtainlab/median.hpp"

namespace curtainlab {

// Signed generator: +(i+1) for generator i, -(i+1) for its inverse.
using Letter = std::int16_t;

inline int gen_of(Letter l) { return (l > 0 ? l : -l) - 1; }
inline bool positive(Letter l) { return l > 0; }
// letter order for shortlex: x < x^-1 < y < y^-1 < ...
inline int letter_rank(Letter l) { return 2 * gen_of(l) + (l < 0 ? 1 : 0); }

class Presentation {
 public:
  Presentation(std::vector<std::string> generators,
               const std::vector<std::pair<std::string, std::string>>& commuting_pairs);

  std::size_t rank() const { return gens_.size(); }
  const std::vector<std::string>& generators() const { return gens_; }
  const std::string& generator(int i) const { return gens_[i]; }
  std::optional<int> generator_index(const std::string& name) const;
  bool commutes(int i, int j) const { return commutes_[i][j]; }
  const std::vector<std::pair<int, int>>& commuting_pairs() const { return pairs_; }

  // Structural shape tests used to pick projection-system instantiations.
  bool is_free() const { return pairs_.empty(); }

 private:
  std::vector<std::string> gens_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::vector<bool>> commutes_;
  std::vector<std::pair<int, int>> pairs_;
};

// Group element held in shortlex-minimal geodesic normal form.
class GroupElement {
 public:
  GroupElement() = default;  // identity

  static GroupElement from_word(const Presentation& p, const std::vector<Letter>& word);
  // Parses "x y^-1 z", "x^3 z x^-2"; empty or "e" is the identity.
  static GroupElement parse(const Presentation& p, const std::string& text);
  static GroupElement generator(int gen, int sign);  // single letter, no reduction needed

  const std::vector<Letter>& word() const { return nf_; }
  std::size_t length() const { return nf_.size(); }
  bool is_identity() const { return nf_.empty(); }

  GroupElement times(const Presentation& p, const GroupElement& rhs) const;
  GroupElement inverse(const Presentation& p) const;
  GroupElement pow(const Presentation& p, int n) const;
  GroupElement conjugate(const Presentation& p, const GroupElement& by) const;  // by * this * by^-1

  std::string str(const Presentation& p) const;  // "x y^-1 z"; identity -> "e"
  std::string key() const;                       // compact map key

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.nf_ == b.nf_;
  }
  friend bool operator!=(const GroupElement& a, const GroupElement& b) { return !(a == b); }
  // shortlex order
  bool shortlex_less(const GroupElement& other) const;

 private:
  std::vector<Letter> nf_;
};

// Radius-`horizon` ball of the Cayley graph of a RAAG, as a MedianWindow with
// guard = horizon / 3, plus the vertex <-> element dictionary and the partial
// left action.
class BallComplex {
 public:
  static BallComplex build(const Presentation& p, int horizon, std::size_t budget);

  const Presentation& presentation() const { return pres_; }
  const MedianWindow& window() const { return window_; }
  MedianWindow& window() { return window_; }
  int horizon() const { return window_.horizon(); }

  const GroupElement& element(VertexId v) const { return elements_[v]; }
  std::optional<VertexId> find(const GroupElement& g) const;
  VertexId identity_vertex() const { return 0; }

  // Left action; nullopt when g.label(v) leaves the window.
  std::optional<VertexId> act(const GroupElement& g, VertexId v) const;
  // Guard-checked variant per the module contract.
  VertexId act_checked(const GroupElement& g, VertexId v) const;

 private:
  Presentation pres_{{}, {}};
  MedianWindow window_;
  std::vector<GroupElement> elements_;
  std::unordered_map<std::string, VertexId> index_;
};

// Products of at most `factors` elements of T and inverses, deduplicated and
// sorted by (T-length, shortlex).
std::vector<GroupElement> enumerate_elements(const Presentation& p,
                                             const std::vector<GroupElement>& T, int factors,
                                             std::size_t budget = 1u << 22);

// As enumerate_elements but also reports the factor count of each element.
std::vector<std::pair<GroupElement, int>> enumerate_elements_with_length(
    const Presentation& p, const std::vector<GroupElement>& T, int factors,
    std::size_t budget = 1u << 22);

// A nontrivial relator among g1,g2 with at most `syllables` alternating
// syllables and exponents bounded by `max_exp`; nullopt if none.
std::optional<std::string> relation_search(const Presentation& p, const GroupElement& g1,
                                           const GroupElement& g2, int syllables,
                                           int max_exp = 3);

}  // namespace curtainlab
