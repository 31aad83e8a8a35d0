#include "curtainlab/raag.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "curtainlab/util.hpp"

namespace curtainlab {

Presentation::Presentation(std::vector<std::string> generators,
                           const std::vector<std::pair<std::string, std::string>>& commuting_pairs)
    : gens_(std::move(generators)) {
  for (int i = 0; i < static_cast<int>(gens_.size()); ++i) {
    if (index_.count(gens_[i])) fail(ErrorKind::ParseError, "duplicate generator " + gens_[i]);
    index_[gens_[i]] = i;
  }
  commutes_.assign(gens_.size(), std::vector<bool>(gens_.size(), false));
  for (const auto& [a, b] : commuting_pairs) {
    auto ia = generator_index(a);
    auto ib = generator_index(b);
    if (!ia || !ib) fail(ErrorKind::UnknownGenerator, a + " or " + b);
    if (*ia == *ib) fail(ErrorKind::ParseError, "commuting pair repeats a generator");
    commutes_[*ia][*ib] = commutes_[*ib][*ia] = true;
    pairs_.emplace_back(std::min(*ia, *ib), std::max(*ia, *ib));
  }
  sort_unique(pairs_);
}

std::optional<int> Presentation::generator_index(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

// Append one letter with cancellation: scan leftward across commuting letters
// looking for the inverse; blocked by anything sharing the generator or not
// commuting.
void pile_insert(const Presentation& p, std::vector<Letter>& w, Letter l) {
  for (int i = static_cast<int>(w.size()) - 1; i >= 0; --i) {
    Letter s = w[i];
    if (s == -l) {
      w.erase(w.begin() + i);
      return;
    }
    if (gen_of(s) == gen_of(l) || !p.commutes(gen_of(s), gen_of(l))) break;
  }
  w.push_back(l);
}

// Lexicographically smallest linearization of the trace: repeatedly emit the
// smallest letter with no unfinished dependency to its left.
std::vector<Letter> lex_min(const Presentation& p, const std::vector<Letter>& w) {
  const int n = static_cast<int>(w.size());
  std::vector<bool> done(n, false);
  std::vector<Letter> out;
  out.reserve(n);
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      bool free = true;
      for (int j = 0; j < i && free; ++j) {
        if (done[j]) continue;
        if (gen_of(w[j]) == gen_of(w[i]) || !p.commutes(gen_of(w[j]), gen_of(w[i]))) free = false;
      }
      if (free && (pick == -1 || letter_rank(w[i]) < letter_rank(w[pick]))) pick = i;
    }
    done[pick] = true;
    out.push_back(w[pick]);
  }
  return out;
}

}  // namespace

GroupElement GroupElement::from_word(const Presentation& p, const std::vector<Letter>& word) {
  std::vector<Letter> w;
  w.reserve(word.size());
  for (Letter l : word) {
    if (l == 0 || gen_of(l) >= static_cast<int>(p.rank()))
      fail(ErrorKind::UnknownGenerator, "letter out of range");
    pile_insert(p, w, l);
  }
  GroupElement g;
  g.nf_ = lex_min(p, w);
  return g;
}

GroupElement GroupElement::parse(const Presentation& p, const std::string& text) {
  std::vector<Letter> word;
  std::size_t i = 0;
  auto skip_ws = [&] { while (i < text.size() && text[i] == ' ') ++i; };
  skip_ws();
  if (text.substr(i) == "e" || i == text.size()) return GroupElement();
  while (i < text.size()) {
    skip_ws();
    if (i == text.size()) break;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '^') ++j;
    std::string name = text.substr(i, j - i);
    auto gi = p.generator_index(name);
    if (!gi) fail(ErrorKind::UnknownGenerator, name);
    int exp = 1;
    i = j;
    if (i < text.size() && text[i] == '^') {
      ++i;
      bool neg = false;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) neg = text[i++] == '-';
      int v = 0;
      if (i >= text.size() || !isdigit(static_cast<unsigned char>(text[i])))
        fail(ErrorKind::ParseError, "bad exponent in element string");
      while (i < text.size() && isdigit(static_cast<unsigned char>(text[i])))
        v = v * 10 + (text[i++] - '0');
      exp = neg ? -v : v;
    }
    Letter l = static_cast<Letter>((*gi + 1) * (exp >= 0 ? 1 : -1));
    for (int k = 0; k < (exp < 0 ? -exp : exp); ++k) word.push_back(l);
  }
  return from_word(p, word);
}

GroupElement GroupElement::generator(int gen, int sign) {
  GroupElement g;
  g.nf_.push_back(static_cast<Letter>((gen + 1) * (sign >= 0 ? 1 : -1)));
  return g;
}

GroupElement GroupElement::times(const Presentation& p, const GroupElement& rhs) const {
  std::vector<Letter> w = nf_;
  for (Letter l : rhs.nf_) pile_insert(p, w, l);
  GroupElement g;
  g.nf_ = lex_min(p, w);
  return g;
}

GroupElement GroupElement::inverse(const Presentation& p) const {
  std::vector<Letter> w(nf_.rbegin(), nf_.rend());
  for (Letter& l : w) l = -l;
  GroupElement g;
  g.nf_ = lex_min(p, w);
  return g;
}

GroupElement GroupElement::pow(const Presentation& p, int n) const {
  GroupElement base = n < 0 ? inverse(p) : *this;
  int k = n < 0 ? -n : n;
  GroupElement acc;
  for (int i = 0; i < k; ++i) acc = acc.times(p, base);
  return acc;
}

GroupElement GroupElement::conjugate(const Presentation& p, const GroupElement& by) const {
  return by.times(p, *this).times(p, by.inverse(p));
}

std::string GroupElement::str(const Presentation& p) const {
  if (nf_.empty()) return "e";
  std::string out;
  std::size_t i = 0;
  while (i < nf_.size()) {
    std::size_t j = i;
    while (j < nf_.size() && nf_[j] == nf_[i]) ++j;
    if (!out.empty()) out += ' ';
    out += p.generator(gen_of(nf_[i]));
    int run = static_cast<int>(j - i);
    int exp = positive(nf_[i]) ? run : -run;
    if (exp != 1) out += "^" + std::to_string(exp);
    i = j;
  }
  return out;
}

std::string GroupElement::key() const {
  std::string k;
  k.reserve(nf_.size());
  for (Letter l : nf_) k.push_back(static_cast<char>(l + 64));
  return k;
}

bool GroupElement::shortlex_less(const GroupElement& other) const {
  if (nf_.size() != other.nf_.size()) return nf_.size() < other.nf_.size();
  for (std::size_t i = 0; i < nf_.size(); ++i)
    if (nf_[i] != other.nf_[i]) return letter_rank(nf_[i]) < letter_rank(other.nf_[i]);
  return false;
}

BallComplex BallComplex::build(const Presentation& p, int horizon, std::size_t budget) {
  if (horizon < 2) fail(ErrorKind::ParseError, "horizon must be at least 2");
  BallComplex b;
  b.pres_ = p;

  std::vector<GroupElement> elems{GroupElement()};
  b.index_[elems[0].key()] = 0;
  std::size_t sphere_begin = 0;
  for (int len = 0; len < horizon; ++len) {
    std::size_t sphere_end = elems.size();
    for (std::size_t v = sphere_begin; v < sphere_end; ++v) {
      for (int gi = 0; gi < static_cast<int>(p.rank()); ++gi) {
        for (int sign : {1, -1}) {
          GroupElement one;
          {
            std::vector<Letter> l{static_cast<Letter>(sign * (gi + 1))};
            one = GroupElement::from_word(p, l);
          }
          GroupElement w = elems[v].times(p, one);
          if (w.length() != static_cast<std::size_t>(len) + 1) continue;
          auto key = w.key();
          if (b.index_.count(key)) continue;
          if (elems.size() >= budget)
            fail(ErrorKind::BudgetExceeded,
                 "window exceeds vertex budget " + std::to_string(budget));
          b.index_[key] = static_cast<VertexId>(elems.size());
          elems.push_back(std::move(w));
        }
      }
    }
    sphere_begin = sphere_end;
  }

  std::vector<std::string> labels(elems.size());
  for (std::size_t v = 0; v < elems.size(); ++v) labels[v] = elems[v].str(p);
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (std::size_t v = 0; v < elems.size(); ++v) {
    for (int gi = 0; gi < static_cast<int>(p.rank()); ++gi) {
      std::vector<Letter> l{static_cast<Letter>(gi + 1)};
      GroupElement w = elems[v].times(p, GroupElement::from_word(p, l));
      auto it = b.index_.find(w.key());
      if (it != b.index_.end()) edges.emplace_back(static_cast<VertexId>(v), it->second);
    }
  }
  b.window_ = MedianWindow::window(std::move(labels), edges, 0, horizon, horizon / 3);
  b.elements_ = std::move(elems);
  return b;
}

std::optional<VertexId> BallComplex::find(const GroupElement& g) const {
  auto it = index_.find(g.key());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<VertexId> BallComplex::act(const GroupElement& g, VertexId v) const {
  return find(g.times(pres_, elements_[v]));
}

VertexId BallComplex::act_checked(const GroupElement& g, VertexId v) const {
  GroupElement w = g.times(pres_, elements_[v]);
  if (static_cast<int>(w.length()) > window_.guard())
    fail(ErrorKind::HorizonExceeded, "action leaves the guard region");
  auto it = index_.find(w.key());
  if (it == index_.end()) fail(ErrorKind::HorizonExceeded, "action leaves the window");
  return it->second;
}

std::vector<std::pair<GroupElement, int>> enumerate_elements_with_length(
    const Presentation& p, const std::vector<GroupElement>& T, int factors, std::size_t budget) {
  if (factors < 1) fail(ErrorKind::ParseError, "factor bound must be positive");
  std::vector<GroupElement> gens;
  for (const auto& t : T) {
    gens.push_back(t);
    gens.push_back(t.inverse(p));
  }
  std::vector<std::pair<GroupElement, int>> out{{GroupElement(), 0}};
  std::unordered_map<std::string, int> seen{{GroupElement().key(), 0}};
  std::size_t begin = 0;
  for (int len = 1; len <= factors; ++len) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (const auto& g : gens) {
        GroupElement w = out[i].first.times(p, g);
        if (seen.count(w.key())) continue;
        if (out.size() >= budget) fail(ErrorKind::BudgetExceeded, "element enumeration budget");
        seen[w.key()] = len;
        out.emplace_back(std::move(w), len);
      }
    }
    begin = end;
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second < b.second;
    return a.first.shortlex_less(b.first);
  });
  return out;
}

std::vector<GroupElement> enumerate_elements(const Presentation& p,
                                             const std::vector<GroupElement>& T, int factors,
                                             std::size_t budget) {
  auto with_len = enumerate_elements_with_length(p, T, factors, budget);
  std::vector<GroupElement> out;
  out.reserve(with_len.size());
  for (auto& [g, l] : with_len) out.push_back(std::move(g));
  return out;
}

std::optional<std::string> relation_search(const Presentation& p, const GroupElement& g1,
                                           const GroupElement& g2, int syllables, int max_exp) {
  if (g1 == g2) return std::string("A B^-1");
  // Alternating words A^{e1} B^{e2} A^{e3} ... with nonzero exponents.
  std::vector<int> exps;
  bool first_is_a = true;
  auto render = [&] {
    std::string word;
    bool cur_a = first_is_a;
    for (int e : exps) {
      if (!word.empty()) word += ' ';
      word += cur_a ? "A" : "B";
      if (e != 1) word += "^" + std::to_string(e);
      cur_a = !cur_a;
    }
    return word;
  };
  std::function<std::optional<std::string>(int, const GroupElement&, bool)> rec =
      [&](int remaining, const GroupElement& acc, bool next_is_a) -> std::optional<std::string> {
    if (!exps.empty() && acc.is_identity()) return render();
    if (remaining == 0) return std::nullopt;
    for (int e = -max_exp; e <= max_exp; ++e) {
      if (e == 0) continue;
      const GroupElement& base = next_is_a ? g1 : g2;
      GroupElement next = acc.times(p, base.pow(p, e));
      exps.push_back(e);
      auto r = rec(remaining - 1, next, !next_is_a);
      if (r) return r;
      exps.pop_back();
    }
    return std::nullopt;
  };
  for (bool start_a : {true, false}) {
    first_is_a = start_a;
    exps.clear();
    auto r = rec(syllables, GroupElement(), start_a);
    if (r) return r;
  }
  return std::nullopt;
}

}  // namespace curtainlab
