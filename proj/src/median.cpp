#include "curtainlab/median.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>

#include "curtainlab/util.hpp"

namespace curtainlab {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::WindowNotCheckable: return "WindowNotCheckable";
    case ErrorKind::DegenerateWall: return "DegenerateWall";
    case ErrorKind::HorizonExceeded: return "HorizonExceeded";
    case ErrorKind::NoMedian: return "NoMedian";
    case ErrorKind::NotConvex: return "NotConvex";
    case ErrorKind::UnknownGenerator: return "UnknownGenerator";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::IntervalTooWide: return "IntervalTooWide";
    case ErrorKind::TooClose: return "TooClose";
    case ErrorKind::NotGeodesic: return "NotGeodesic";
    case ErrorKind::PartialAction: return "PartialAction";
    case ErrorKind::FlipPreconditionFailed: return "FlipPreconditionFailed";
    case ErrorKind::ChainBroken: return "ChainBroken";
    case ErrorKind::NoGrowth: return "NoGrowth";
    case ErrorKind::SeparationNotAchieved: return "SeparationNotAchieved";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Error";
}

int Wall::min_depth(const std::vector<int>& depth) const {
  int m = depth[carrier.front()];
  for (VertexId v : carrier) m = std::min(m, depth[v]);
  return m;
}

namespace {
std::uint64_t edge_key(VertexId a, VertexId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}
}  // namespace

MedianWindow MedianWindow::full_graph(std::vector<std::string> labels,
                                      const std::vector<std::pair<VertexId, VertexId>>& edges,
                                      VertexId basepoint) {
  MedianWindow m;
  m.labels_ = std::move(labels);
  m.g_ = SimpleGraph(m.labels_.size());
  for (auto [a, b] : edges) m.g_.add_edge(a, b);
  m.g_.finish();
  m.basepoint_ = basepoint;
  m.is_window_ = false;
  m.depth_ = m.g_.bfs(basepoint);
  for (int d : m.depth_)
    if (d == kUnreached) fail(ErrorKind::ParseError, "graph is not connected");
  m.horizon_ = *std::max_element(m.depth_.begin(), m.depth_.end());
  m.guard_ = m.horizon_;
  for (VertexId v = 0; v < m.labels_.size(); ++v) m.index_[m.labels_[v]] = v;
  return m;
}

MedianWindow MedianWindow::window(std::vector<std::string> labels,
                                  const std::vector<std::pair<VertexId, VertexId>>& edges,
                                  VertexId basepoint, int horizon, int guard) {
  MedianWindow m = full_graph(std::move(labels), edges, basepoint);
  m.is_window_ = true;
  m.horizon_ = horizon;
  m.guard_ = guard;
  if (guard > horizon) fail(ErrorKind::ParseError, "guard exceeds horizon");
  return m;
}

std::optional<VertexId> MedianWindow::find_label(const std::string& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void MedianWindow::require_guarded(VertexId v, const char* op) const {
  if (is_window_ && depth_[v] > guard_)
    fail(ErrorKind::HorizonExceeded,
         std::string(op) + ": vertex " + labels_[v] + " outside guard radius " +
             std::to_string(guard_));
}

void MedianWindow::compute_walls() const {
  if (walls_ready_) return;
  auto edge_list = g_.edges();
  const std::size_t ne = edge_list.size();
  edge_pos_.reserve(ne * 2);
  for (std::size_t i = 0; i < ne; ++i)
    edge_pos_[edge_key(edge_list[i].first, edge_list[i].second)] = static_cast<int>(i);

  // Union-find over edges: opposite sides of every 4-cycle get merged.
  std::vector<int> parent(ne);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };

  std::vector<std::array<int, 2>> square_pairs;  // consecutive edges of a square
  for (std::size_t i = 0; i < ne; ++i) {
    auto [u, v] = edge_list[i];
    for (VertexId x : g_.neighbors(u)) {
      if (x == v) continue;
      for (VertexId w : g_.neighbors(v)) {
        if (w == u || w == x) continue;
        auto it = edge_pos_.find(edge_key(x, w));
        if (it == edge_pos_.end()) continue;
        // square u-v-w-x: (u,v) opposite (x,w); (v,w) opposite (u,x)
        unite(static_cast<int>(i), it->second);
        auto it2 = edge_pos_.find(edge_key(v, w));
        if (it2 != edge_pos_.end()) square_pairs.push_back({static_cast<int>(i), it2->second});
      }
    }
  }

  std::unordered_map<int, int> root_to_wall;
  edge_wall_.assign(ne, -1);
  for (std::size_t i = 0; i < ne; ++i) {
    int r = find(static_cast<int>(i));
    auto it = root_to_wall.find(r);
    int w;
    if (it == root_to_wall.end()) {
      w = static_cast<int>(walls_.size());
      root_to_wall[r] = w;
      walls_.emplace_back();
    } else {
      w = it->second;
    }
    edge_wall_[i] = w;
    walls_[w].edges.push_back(edge_list[i]);
    walls_[w].carrier.push_back(edge_list[i].first);
    walls_[w].carrier.push_back(edge_list[i].second);
  }
  for (auto& w : walls_) {
    std::sort(w.edges.begin(), w.edges.end());
    sort_unique(w.carrier);
  }

  std::set<std::pair<int, int>> cross;
  for (auto [e1, e2] : square_pairs) {
    int w1 = edge_wall_[e1], w2 = edge_wall_[e2];
    if (w1 != w2) cross.insert({std::min(w1, w2), std::max(w1, w2)});
  }
  crossings_.assign(cross.begin(), cross.end());
  walls_ready_ = true;

  // Full graphs are desk scale; certify every wall eagerly there.  Windows
  // check degeneracy lazily on access.
  if (!is_window_) {
    for (std::size_t w = 0; w < walls_.size(); ++w)
      if (wall_degenerate(static_cast<int>(w)))
        fail(ErrorKind::DegenerateWall, "wall fails to separate a full median graph");
  }
}

const std::vector<Wall>& MedianWindow::walls() const {
  compute_walls();
  return walls_;
}

int MedianWindow::wall_of_edge(VertexId a, VertexId b) const {
  compute_walls();
  auto it = edge_pos_.find(edge_key(a, b));
  return it == edge_pos_.end() ? -1 : edge_wall_[it->second];
}

bool MedianWindow::wall_degenerate(int wall) const {
  compute_walls();
  const Wall& w = walls_[wall];
  if (w.degenerate_state == -1) {
    auto comp = g_.components(nullptr, &w.edges);
    int ncomp = *std::max_element(comp.begin(), comp.end()) + 1;
    bool ok = ncomp == 2 && comp[w.rep_a()] != comp[w.rep_b()];
    if (ok) {
      for (auto [a, b] : w.edges)
        if (comp[a] == comp[b]) { ok = false; break; }
    }
    w.degenerate_state = ok ? 0 : 1;
  }
  return w.degenerate_state == 1;
}

int MedianWindow::degenerate_wall_count() const {
  compute_walls();
  int n = 0;
  for (std::size_t w = 0; w < walls_.size(); ++w) n += wall_degenerate(static_cast<int>(w));
  return n;
}

int MedianWindow::wall_side(int wall, VertexId v) const {
  compute_walls();
  const Wall& w = walls_[wall];
  int da = g_.distance(v, w.rep_a());
  int db = g_.distance(v, w.rep_b());
  return da <= db ? 0 : 1;
}

void MedianWindow::wall_sides(int wall) const {
  compute_walls();
  const Wall& w = walls_[wall];
  if (w.sides_ready) return;
  auto comp = g_.components(nullptr, &w.edges);
  int ca = comp[w.rep_a()];
  int cb = comp[w.rep_b()];
  int ncomp = *std::max_element(comp.begin(), comp.end()) + 1;
  if (ca == cb || ncomp != 2) {
    if (!is_window_)
      fail(ErrorKind::DegenerateWall, "wall removal does not yield two components");
    // window: fall back to the distance partition relative to a class edge
    auto da = g_.bfs(w.rep_a());
    auto db = g_.bfs(w.rep_b());
    for (VertexId v = 0; v < g_.size(); ++v)
      (da[v] <= db[v] ? w.side_a : w.side_b).push_back(v);
  } else {
    for (VertexId v = 0; v < g_.size(); ++v)
      (comp[v] == ca ? w.side_a : w.side_b).push_back(v);
  }
  if (!sorted_contains(w.side_a, basepoint_)) std::swap(w.side_a, w.side_b);
  w.sides_ready = true;
}

const std::vector<std::pair<int, int>>& MedianWindow::crossings() const {
  compute_walls();
  return crossings_;
}

bool MedianWindow::walls_cross(int w1, int w2) const {
  compute_walls();
  auto key = std::make_pair(std::min(w1, w2), std::max(w1, w2));
  return std::binary_search(crossings_.begin(), crossings_.end(), key);
}

const std::vector<std::vector<std::uint64_t>>& MedianWindow::wall_side_bits() const {
  compute_walls();
  if (side_bits_.empty() && !walls_.empty()) {
    // bit v set iff v lies on the rep_b side; desk-scale graphs only.
    const std::size_t words = (g_.size() + 63) / 64;
    side_bits_.assign(walls_.size(), std::vector<std::uint64_t>(words, 0));
    for (std::size_t w = 0; w < walls_.size(); ++w) {
      auto da = g_.bfs(walls_[w].rep_a());
      auto db = g_.bfs(walls_[w].rep_b());
      for (VertexId v = 0; v < g_.size(); ++v)
        if (da[v] > db[v]) side_bits_[w][v >> 6] |= 1ULL << (v & 63);
    }
  }
  return side_bits_;
}

int MedianWindow::dimension() const {
  if (dimension_ >= 0) return dimension_;
  compute_walls();
  // Largest pairwise-crossing family.  In a median graph every such family
  // meets at the corner of a cube, so scanning corners is exact there.
  int best = walls_.empty() ? 0 : 1;
  for (VertexId p = 0; p < g_.size(); ++p) {
    std::vector<int> local;
    for (VertexId q : g_.neighbors(p)) local.push_back(wall_of_edge(p, q));
    sort_unique(local);
    const int n = static_cast<int>(local.size());
    if (n <= best || n > 63) continue;
    std::vector<std::uint64_t> adj(n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (walls_cross(local[i], local[j])) {
          adj[i] |= 1ULL << j;
          adj[j] |= 1ULL << i;
        }
    std::uint64_t full = (1ULL << n) - 1;
    struct Frame {
      std::uint64_t cand;
      int size;
    };
    std::vector<Frame> stack{{full, 0}};
    while (!stack.empty()) {
      auto [cand, size] = stack.back();
      stack.pop_back();
      if (size + __builtin_popcountll(cand) <= best) continue;
      if (!cand) {
        best = std::max(best, size);
        continue;
      }
      int i = __builtin_ctzll(cand);
      std::uint64_t bit = 1ULL << i;
      stack.push_back({cand & ~bit, size});
      stack.push_back({cand & adj[i] & ~bit, size + 1});
      best = std::max(best, size + 1);
    }
  }
  dimension_ = best;
  return dimension_;
}

int MedianWindow::distance(VertexId x, VertexId y) const {
  require_guarded(x, "distance");
  require_guarded(y, "distance");
  return g_.distance(x, y);
}

std::vector<int> MedianWindow::separating_walls(VertexId x, VertexId y) const {
  require_guarded(x, "separating_walls");
  require_guarded(y, "separating_walls");
  compute_walls();
  auto dx = g_.bfs(x);
  auto dy = g_.bfs(y);
  std::vector<int> out;
  for (std::size_t w = 0; w < walls_.size(); ++w) {
    VertexId a = walls_[w].rep_a(), b = walls_[w].rep_b();
    bool xa = dx[a] <= dx[b];
    bool ya = dy[a] <= dy[b];
    if (xa != ya) out.push_back(static_cast<int>(w));
  }
  return out;
}

std::vector<VertexId> MedianWindow::interval(VertexId x, VertexId y) const {
  auto dx = g_.bfs(x);
  auto dy = g_.bfs(y);
  int d = dx[y];
  std::vector<VertexId> out;
  for (VertexId v = 0; v < g_.size(); ++v)
    if (dx[v] != kUnreached && dy[v] != kUnreached && dx[v] + dy[v] == d) out.push_back(v);
  return out;
}

VertexId MedianWindow::median(VertexId x, VertexId y, VertexId z) const {
  require_guarded(x, "median");
  require_guarded(y, "median");
  require_guarded(z, "median");
  auto dx = g_.bfs(x);
  auto dy = g_.bfs(y);
  auto dz = g_.bfs(z);
  int dxy = dx[y], dyz = dy[z], dxz = dx[z];
  std::optional<VertexId> found;
  for (VertexId v = 0; v < g_.size(); ++v) {
    if (dx[v] + dy[v] == dxy && dy[v] + dz[v] == dyz && dx[v] + dz[v] == dxz) {
      if (found) fail(ErrorKind::NoMedian, "median is not unique");
      found = v;
    }
  }
  if (!found) fail(ErrorKind::NoMedian, "no median vertex");
  return *found;
}

MedianWindow::HullResult MedianWindow::hull(const std::vector<VertexId>& seed) const {
  for (VertexId v : seed) require_guarded(v, "hull");
  std::vector<VertexId> cur = seed;
  sort_unique(cur);
  int rounds = 0;
  while (true) {
    std::vector<VertexId> next = cur;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      auto di = g_.bfs(cur[i]);
      for (std::size_t j = i + 1; j < cur.size(); ++j) {
        int d = di[cur[j]];
        auto dj = g_.bfs(cur[j]);
        for (VertexId v = 0; v < g_.size(); ++v)
          if (di[v] + dj[v] == d) next.push_back(v);
      }
    }
    sort_unique(next);
    if (next.size() == cur.size()) break;
    cur = std::move(next);
    ++rounds;
    if (is_window_) {
      for (VertexId v : cur)
        if (depth_[v] >= horizon_)
          fail(ErrorKind::HorizonExceeded, "hull iteration reached the horizon");
    }
  }
  return {ConvexSet{cur, true}, rounds};
}

bool MedianWindow::is_interval_closed(const std::vector<VertexId>& members) const {
  for (std::size_t i = 0; i < members.size(); ++i) {
    auto di = g_.bfs(members[i]);
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      auto dj = g_.bfs(members[j]);
      int d = di[members[j]];
      for (VertexId v = 0; v < g_.size(); ++v)
        if (di[v] + dj[v] == d && !sorted_contains(members, v)) return false;
    }
  }
  return true;
}

VertexId MedianWindow::gate_projection(const ConvexSet& convex, VertexId x) const {
  require_guarded(x, "gate_projection");
  if (convex.members.empty()) fail(ErrorKind::NotConvex, "empty set has no gate");
  if (!convex.witnessed && !is_interval_closed(convex.members))
    fail(ErrorKind::NotConvex, "set is not interval-closed");
  if (sorted_contains(convex.members, x)) return x;
  auto dx = g_.bfs(x);
  int best = kUnreached;
  std::vector<VertexId> nearest;
  for (VertexId v : convex.members) {
    if (dx[v] == kUnreached) continue;
    if (best == kUnreached || dx[v] < best) {
      best = dx[v];
      nearest.assign(1, v);
    } else if (dx[v] == best) {
      nearest.push_back(v);
    }
  }
  if (nearest.size() != 1)
    fail(ErrorKind::NotConvex, "nearest point in target set is not unique");
  return nearest.front();
}

bool MedianWindow::gate_characterization_holds(const ConvexSet& convex, VertexId x,
                                               VertexId gate) const {
  const auto& bits = wall_side_bits();
  auto side = [&](std::size_t w, VertexId v) {
    return (bits[w][v >> 6] >> (v & 63)) & 1ULL;
  };
  for (std::size_t w = 0; w < walls_.size(); ++w) {
    auto sx = side(w, x);
    bool separates_gate = sx != side(w, gate);
    bool separates_set = true;
    for (VertexId y : convex.members)
      if (side(w, y) == sx) { separates_set = false; break; }
    if (separates_set != separates_gate) return false;
  }
  return true;
}

bool MedianWindow::wall_separates_walls(int wall, int u, int v) const {
  compute_walls();
  const Wall& w = walls_[wall];
  auto da = g_.bfs(w.rep_a());
  auto db = g_.bfs(w.rep_b());
  auto side_of_carrier = [&](int idx) {
    int side = -1;  // 0 = a, 1 = b, -2 = straddles
    for (VertexId c : walls_[idx].carrier) {
      int s = da[c] <= db[c] ? 0 : 1;
      if (side == -1) side = s;
      else if (side != s) return -2;
    }
    return side;
  };
  int su = side_of_carrier(u);
  int sv = side_of_carrier(v);
  return su >= 0 && sv >= 0 && su != sv;
}

std::vector<int> MedianWindow::maximal_wall_chain(VertexId x, VertexId y) const {
  auto sep = separating_walls(x, y);
  const int n = static_cast<int>(sep.size());
  if (n <= 1) return sep;

  auto dx = g_.bfs(x);
  std::vector<std::vector<int>> da(n), db(n);
  for (int i = 0; i < n; ++i) {
    da[i] = g_.bfs(walls_[sep[i]].rep_a());
    db[i] = g_.bfs(walls_[sep[i]].rep_b());
  }
  auto on_x_side = [&](int i, VertexId v) {
    bool x_on_a = da[i][x] <= db[i][x];
    bool v_on_a = da[i][v] <= db[i][v];
    return v_on_a == x_on_a;
  };
  // sep2(u,v): u strictly precedes v along the geodesic in the sense that u's
  // carrier sits on x's side of v and v's carrier on y's side of u.
  auto sep2 = [&](int u, int v) {
    for (VertexId c : walls_[sep[v]].carrier)
      if (on_x_side(u, c)) return false;
    for (VertexId c : walls_[sep[u]].carrier)
      if (!on_x_side(v, c)) return false;
    return true;
  };

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> posn(n);
  for (int i = 0; i < n; ++i) {
    int p = static_cast<int>(g_.size());
    for (VertexId c : walls_[sep[i]].carrier) p = std::min(p, dx[c]);
    posn[i] = p;
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return posn[a] != posn[b] ? posn[a] < posn[b] : sep[a] < sep[b];
  });

  std::vector<int> dp(n, 1), prev(n, -1);
  int best = order[0];
  for (int oi = 0; oi < n; ++oi) {
    int i = order[oi];
    for (int oj = 0; oj < oi; ++oj) {
      int j = order[oj];
      if (dp[j] + 1 > dp[i] && sep2(j, i)) {
        dp[i] = dp[j] + 1;
        prev[i] = j;
      }
    }
    if (dp[i] > dp[best]) best = i;
  }
  std::vector<int> chain;
  for (int cur = best; cur != -1; cur = prev[cur]) chain.push_back(sep[cur]);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

bool MedianWindow::validate_median() const {
  if (is_window_) fail(ErrorKind::WindowNotCheckable, "cannot certify a truncated window");
  const std::size_t n = g_.size();
  std::vector<std::vector<int>> d(n);
  for (VertexId v = 0; v < n; ++v) d[v] = g_.bfs(v);
  for (VertexId x = 0; x < n; ++x)
    for (VertexId y = x; y < n; ++y)
      for (VertexId z = y; z < n; ++z) {
        int count = 0;
        for (VertexId m = 0; m < n; ++m) {
          if (d[x][m] + d[y][m] == d[x][y] && d[y][m] + d[z][m] == d[y][z] &&
              d[x][m] + d[z][m] == d[x][z])
            ++count;
        }
        if (count != 1) return false;
      }
  return true;
}

}  // namespace curtainlab
