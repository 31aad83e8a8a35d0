// Independent brute-force oracles.  These deliberately avoid the library's
// algorithms: distances via Floyd-Warshall, medians and hulls by exhaustive
// scans over the distance matrix, normal forms by exploring the full
// rewriting orbit, chains by subset enumeration.
#pragma once

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <vector>

#include "curtainlab/median.hpp"
#include "curtainlab/raag.hpp"

namespace oracle {

using curtainlab::MedianWindow;
using curtainlab::VertexId;

inline std::vector<std::vector<int>> floyd_warshall(const curtainlab::SimpleGraph& g) {
  const int n = static_cast<int>(g.size());
  const int inf = 1 << 28;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (int v = 0; v < n; ++v) d[v][v] = 0;
  for (auto [a, b] : g.edges()) d[a][b] = d[b][a] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

inline std::vector<VertexId> medians_of(const std::vector<std::vector<int>>& d, VertexId x,
                                        VertexId y, VertexId z) {
  std::vector<VertexId> out;
  for (VertexId m = 0; m < d.size(); ++m)
    if (d[x][m] + d[m][y] == d[x][y] && d[y][m] + d[m][z] == d[y][z] &&
        d[x][m] + d[m][z] == d[x][z])
      out.push_back(m);
  return out;
}

inline std::vector<VertexId> interval_closure(const std::vector<std::vector<int>>& d,
                                              std::vector<VertexId> members) {
  std::sort(members.begin(), members.end());
  while (true) {
    std::vector<VertexId> next = members;
    for (VertexId a : members)
      for (VertexId b : members)
        for (VertexId v = 0; v < d.size(); ++v)
          if (d[a][v] + d[v][b] == d[a][b]) next.push_back(v);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    if (next == members) return members;
    members = std::move(next);
  }
}

// Exhaustive normal form: explore the orbit of a word under free cancellation
// and adjacent commuting swaps; the canonical form is the shortlex-least word
// reached.
inline std::vector<curtainlab::Letter> brute_normal_form(const curtainlab::Presentation& p,
                                                         std::vector<curtainlab::Letter> w) {
  using Word = std::vector<curtainlab::Letter>;
  auto lex_less = [](const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] != b[i]) return curtainlab::letter_rank(a[i]) < curtainlab::letter_rank(b[i]);
    return false;
  };
  std::set<Word> seen;
  std::queue<Word> todo;
  todo.push(w);
  seen.insert(w);
  Word best = w;
  while (!todo.empty()) {
    Word cur = todo.front();
    todo.pop();
    if (lex_less(cur, best)) best = cur;
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      if (cur[i] == -cur[i + 1]) {
        Word nxt = cur;
        nxt.erase(nxt.begin() + i, nxt.begin() + i + 2);
        if (seen.insert(nxt).second) todo.push(nxt);
      }
      if (curtainlab::gen_of(cur[i]) != curtainlab::gen_of(cur[i + 1]) &&
          p.commutes(curtainlab::gen_of(cur[i]), curtainlab::gen_of(cur[i + 1]))) {
        Word nxt = cur;
        std::swap(nxt[i], nxt[i + 1]);
        if (seen.insert(nxt).second) todo.push(nxt);
      }
    }
  }
  return best;
}

// Largest chain among the given separating walls by subset enumeration.
inline int brute_max_chain(const MedianWindow& w, const std::vector<int>& sep, VertexId x) {
  const int n = static_cast<int>(sep.size());
  auto dx = w.graph().bfs(x);
  std::vector<int> pos(n);
  for (int i = 0; i < n; ++i) {
    int p = static_cast<int>(w.size());
    for (VertexId c : w.walls()[sep[i]].carrier) p = std::min(p, dx[c]);
    pos[i] = p;
  }
  int best = n > 0 ? 1 : 0;
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> subset;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) subset.push_back(i);
    if (static_cast<int>(subset.size()) <= best) continue;
    std::sort(subset.begin(), subset.end(), [&](int a, int b) {
      return pos[a] != pos[b] ? pos[a] < pos[b] : sep[a] < sep[b];
    });
    bool chain = true;
    for (std::size_t i = 1; i + 1 < subset.size() && chain; ++i)
      if (!w.wall_separates_walls(sep[subset[i]], sep[subset[i - 1]], sep[subset[i + 1]]))
        chain = false;
    // members of a chain are pairwise disjoint, so a bare pair must not cross
    if (chain && subset.size() == 2)
      chain = !w.walls_cross(sep[subset[0]], sep[subset[1]]);
    if (chain) best = std::max(best, static_cast<int>(subset.size()));
  }
  return best;
}

}  // namespace oracle
