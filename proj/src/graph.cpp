#include "curtainlab/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "curtainlab/util.hpp"

namespace curtainlab {

void SimpleGraph::add_edge(VertexId a, VertexId b) {
  if (a == b) return;
  adj_[a].push_back(b);
  adj_[b].push_back(a);
  finished_ = false;
}

void SimpleGraph::finish() {
  edge_count_ = 0;
  for (auto& nb : adj_) {
    sort_unique(nb);
    edge_count_ += nb.size();
  }
  edge_count_ /= 2;
  finished_ = true;
}

bool SimpleGraph::has_edge(VertexId a, VertexId b) const {
  const auto& nb = adj_[a].size() <= adj_[b].size() ? adj_[a] : adj_[b];
  VertexId want = adj_[a].size() <= adj_[b].size() ? b : a;
  return std::binary_search(nb.begin(), nb.end(), want);
}

std::vector<std::pair<VertexId, VertexId>> SimpleGraph::edges() const {
  std::vector<std::pair<VertexId, VertexId>> out;
  out.reserve(edge_count_);
  for (VertexId v = 0; v < adj_.size(); ++v)
    for (VertexId w : adj_[v])
      if (v < w) out.emplace_back(v, w);
  return out;
}

std::vector<int> SimpleGraph::bfs(VertexId src) const {
  return bfs_multi({src});
}

std::vector<int> SimpleGraph::bfs_multi(const std::vector<VertexId>& sources) const {
  std::vector<int> dist(adj_.size(), kUnreached);
  std::deque<VertexId> q;
  for (VertexId s : sources) {
    if (dist[s] == kUnreached) {
      dist[s] = 0;
      q.push_back(s);
    }
  }
  while (!q.empty()) {
    VertexId v = q.front();
    q.pop_front();
    for (VertexId w : adj_[v]) {
      if (dist[w] == kUnreached) {
        dist[w] = dist[v] + 1;
        q.push_back(w);
      }
    }
  }
  return dist;
}

std::vector<int> SimpleGraph::bfs_avoiding(const std::vector<VertexId>& sources,
                                           const std::vector<bool>& blocked) const {
  std::vector<int> dist(adj_.size(), kUnreached);
  std::deque<VertexId> q;
  for (VertexId s : sources) {
    if (!blocked[s] && dist[s] == kUnreached) {
      dist[s] = 0;
      q.push_back(s);
    }
  }
  while (!q.empty()) {
    VertexId v = q.front();
    q.pop_front();
    for (VertexId w : adj_[v]) {
      if (!blocked[w] && dist[w] == kUnreached) {
        dist[w] = dist[v] + 1;
        q.push_back(w);
      }
    }
  }
  return dist;
}

int SimpleGraph::distance(VertexId a, VertexId b) const {
  if (a == b) return 0;
  std::vector<int> dist(adj_.size(), kUnreached);
  std::deque<VertexId> q{a};
  dist[a] = 0;
  while (!q.empty()) {
    VertexId v = q.front();
    q.pop_front();
    for (VertexId w : adj_[v]) {
      if (dist[w] == kUnreached) {
        if (w == b) return dist[v] + 1;
        dist[w] = dist[v] + 1;
        q.push_back(w);
      }
    }
  }
  return kUnreached;
}

bool SimpleGraph::connected() const {
  if (adj_.empty()) return true;
  auto d = bfs(0);
  for (int x : d)
    if (x == kUnreached) return false;
  return true;
}

int SimpleGraph::eccentricity(VertexId v) const {
  auto d = bfs(v);
  int m = 0;
  for (int x : d) m = std::max(m, x);
  return m;
}

std::vector<int> SimpleGraph::components(
    const std::vector<bool>* blocked_vertex,
    const std::vector<std::pair<VertexId, VertexId>>* removed_edges) const {
  std::set<std::pair<VertexId, VertexId>> removed;
  if (removed_edges)
    for (auto [a, b] : *removed_edges) removed.insert({std::min(a, b), std::max(a, b)});

  std::vector<int> comp(adj_.size(), -1);
  int c = 0;
  std::deque<VertexId> q;
  for (VertexId s = 0; s < adj_.size(); ++s) {
    if (comp[s] != -1 || (blocked_vertex && (*blocked_vertex)[s])) continue;
    comp[s] = c;
    q.push_back(s);
    while (!q.empty()) {
      VertexId v = q.front();
      q.pop_front();
      for (VertexId w : adj_[v]) {
        if (comp[w] != -1 || (blocked_vertex && (*blocked_vertex)[w])) continue;
        if (removed_edges && removed.count({std::min(v, w), std::max(v, w)})) continue;
        comp[w] = c;
        q.push_back(w);
      }
    }
    ++c;
  }
  return comp;
}

std::vector<VertexId> SimpleGraph::shortest_path(VertexId src, VertexId dst) const {
  auto dist = bfs(src);
  if (dist[dst] == kUnreached) return {};
  std::vector<VertexId> path{dst};
  VertexId cur = dst;
  while (cur != src) {
    VertexId next = cur;
    for (VertexId w : adj_[cur]) {
      if (dist[w] == dist[cur] - 1 && (next == cur || w < next)) next = w;
    }
    cur = next;
    path.push_back(cur);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace curtainlab
