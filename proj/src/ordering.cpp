#include "hefie/ordering.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

namespace hefie {

OrderingAlgorithm ordering_from_string(const std::string& name) {
  if (name == "none") return OrderingAlgorithm::none;
  if (name == "cm") return OrderingAlgorithm::cm;
  if (name == "rcm") return OrderingAlgorithm::rcm;
  if (name == "king") return OrderingAlgorithm::king;
  if (name == "sloan") return OrderingAlgorithm::sloan;
  throw std::invalid_argument("unknown ordering '" + name + "'");
}

std::string to_string(OrderingAlgorithm alg) {
  switch (alg) {
    case OrderingAlgorithm::none: return "none";
    case OrderingAlgorithm::cm: return "cm";
    case OrderingAlgorithm::rcm: return "rcm";
    case OrderingAlgorithm::king: return "king";
    case OrderingAlgorithm::sloan: return "sloan";
  }
  return "none";
}

namespace {

std::vector<std::vector<int>> components(const NearFieldGraph& g) {
  std::vector<int> comp(g.vertex_count, -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < g.vertex_count; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> members;
    std::deque<int> queue{s};
    comp[s] = static_cast<int>(out.size());
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      members.push_back(v);
      for (int w : g.adjacency[v])
        if (comp[w] < 0) {
          comp[w] = comp[s];
          queue.push_back(w);
        }
    }
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  // components ordered by smallest contained index: already true since the
  // outer scan visits vertices in increasing order
  return out;
}

std::vector<int> bfs_levels(const NearFieldGraph& g, int start) {
  std::vector<int> level(g.vertex_count, -1);
  std::deque<int> queue{start};
  level[start] = 0;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int w : g.adjacency[v])
      if (level[w] < 0) {
        level[w] = level[v] + 1;
        queue.push_back(w);
      }
  }
  return level;
}

// double-BFS heuristic; returns {start, end}
std::pair<int, int> pseudo_peripheral(const NearFieldGraph& g,
                                      const std::vector<int>& comp) {
  int start = comp.front();
  int end = start;
  for (int iter = 0; iter < 2; ++iter) {
    auto level = bfs_levels(g, start);
    int far = start, far_level = -1;
    for (int v : comp) {
      // farthest vertex, ties by lower degree then lower index
      if (level[v] > far_level ||
          (level[v] == far_level &&
           (g.degree(v) < g.degree(far) ||
            (g.degree(v) == g.degree(far) && v < far)))) {
        far = v;
        far_level = level[v];
      }
    }
    end = start;
    start = far;
  }
  return {start, end};
}

std::vector<int> cm_component(const NearFieldGraph& g,
                              const std::vector<int>& comp) {
  auto [start, end] = pseudo_peripheral(g, comp);
  (void)end;
  std::vector<char> visited(g.vertex_count, 0);
  std::vector<int> order;
  std::deque<int> queue{start};
  visited[start] = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    order.push_back(v);
    std::vector<int> next;
    for (int w : g.adjacency[v])
      if (!visited[w]) next.push_back(w);
    std::sort(next.begin(), next.end(), [&](int a, int b) {
      return std::make_pair(g.degree(a), a) < std::make_pair(g.degree(b), b);
    });
    for (int w : next) {
      visited[w] = 1;
      queue.push_back(w);
    }
  }
  return order;
}

std::vector<int> king_component(const NearFieldGraph& g,
                                const std::vector<int>& comp) {
  auto [start, end] = pseudo_peripheral(g, comp);
  (void)end;
  std::vector<char> numbered(g.vertex_count, 0);
  std::vector<char> in_front(g.vertex_count, 0);  // adjacent to numbered
  std::vector<int> order;
  auto number_vertex = [&](int v) {
    numbered[v] = 1;
    in_front[v] = 0;
    order.push_back(v);
    for (int w : g.adjacency[v])
      if (!numbered[w]) in_front[w] = 1;
  };
  number_vertex(start);
  while (order.size() < comp.size()) {
    int best = -1, best_growth = std::numeric_limits<int>::max();
    for (int v : comp) {
      if (numbered[v] || !in_front[v]) continue;
      int growth = 0;
      for (int w : g.adjacency[v])
        if (!numbered[w] && !in_front[w]) ++growth;
      if (growth < best_growth || (growth == best_growth && v < best)) {
        best = v;
        best_growth = growth;
      }
    }
    if (best < 0) break;  // cannot happen on a connected component
    number_vertex(best);
  }
  return order;
}

std::vector<int> sloan_component(const NearFieldGraph& g,
                                 const std::vector<int>& comp,
                                 int w1, int w2) {
  auto [start, end] = pseudo_peripheral(g, comp);
  const auto dist_to_end = bfs_levels(g, end);

  enum Status : char { kInactive, kPreactive, kActive, kNumbered };
  std::vector<Status> status(g.vertex_count, kInactive);
  std::vector<long> priority(g.vertex_count, 0);
  for (int v : comp)
    priority[v] = static_cast<long>(w2) * dist_to_end[v] -
                  static_cast<long>(w1) * (g.degree(v) + 1);

  std::vector<int> queue{start};
  status[start] = kPreactive;
  std::vector<int> order;

  while (!queue.empty()) {
    // max priority, tie lowest index
    std::size_t best = 0;
    for (std::size_t i = 1; i < queue.size(); ++i) {
      int v = queue[i], b = queue[best];
      if (priority[v] > priority[b] || (priority[v] == priority[b] && v < b))
        best = i;
    }
    const int v = queue[best];
    queue[best] = queue.back();
    queue.pop_back();
    if (status[v] == kNumbered) continue;

    if (status[v] == kPreactive) {
      for (int w : g.adjacency[v]) {
        priority[w] += w1;
        if (status[w] == kInactive) {
          status[w] = kPreactive;
          queue.push_back(w);
        }
      }
    }
    status[v] = kNumbered;
    order.push_back(v);
    for (int w : g.adjacency[v]) {
      if (status[w] != kPreactive) continue;
      status[w] = kActive;
      priority[w] += w1;
      for (int x : g.adjacency[w]) {
        if (status[x] == kNumbered) continue;
        priority[x] += w1;
        if (status[x] == kInactive) {
          status[x] = kPreactive;
          queue.push_back(x);
        }
      }
    }
  }
  return order;
}

LeafOrdering per_component(const NearFieldGraph& g, OrderingAlgorithm alg,
                           std::vector<int> (*fn)(const NearFieldGraph&,
                                                  const std::vector<int>&)) {
  LeafOrdering out;
  out.algorithm = alg;
  for (const auto& comp : components(g)) {
    auto order = fn(g, comp);
    out.permutation.insert(out.permutation.end(), order.begin(), order.end());
  }
  return out;
}

}  // namespace

LeafOrdering identity_ordering(const NearFieldGraph& g) {
  LeafOrdering out;
  out.algorithm = OrderingAlgorithm::none;
  out.permutation.resize(g.vertex_count);
  for (int i = 0; i < g.vertex_count; ++i) out.permutation[i] = i;
  return out;
}

LeafOrdering cuthill_mckee(const NearFieldGraph& g) {
  return per_component(g, OrderingAlgorithm::cm, &cm_component);
}

LeafOrdering reverse_cuthill_mckee(const NearFieldGraph& g) {
  LeafOrdering out = cuthill_mckee(g);
  std::reverse(out.permutation.begin(), out.permutation.end());
  out.algorithm = OrderingAlgorithm::rcm;
  return out;
}

LeafOrdering king(const NearFieldGraph& g) {
  return per_component(g, OrderingAlgorithm::king, &king_component);
}

LeafOrdering sloan(const NearFieldGraph& g) {
  LeafOrdering out;
  out.algorithm = OrderingAlgorithm::sloan;
  for (const auto& comp : components(g)) {
    auto order = sloan_component(g, comp, 2, 1);
    out.permutation.insert(out.permutation.end(), order.begin(), order.end());
  }
  return out;
}

LeafOrdering compute_ordering(const NearFieldGraph& g, OrderingAlgorithm alg) {
  switch (alg) {
    case OrderingAlgorithm::none: return identity_ordering(g);
    case OrderingAlgorithm::cm: return cuthill_mckee(g);
    case OrderingAlgorithm::rcm: return reverse_cuthill_mckee(g);
    case OrderingAlgorithm::king: return king(g);
    case OrderingAlgorithm::sloan: return sloan(g);
  }
  return identity_ordering(g);
}

namespace {
std::vector<int> positions(const std::vector<int>& permutation) {
  std::vector<int> pos(permutation.size());
  for (int k = 0; k < static_cast<int>(permutation.size()); ++k)
    pos[permutation[k]] = k;
  return pos;
}
}  // namespace

int bandwidth(const NearFieldGraph& g, const std::vector<int>& permutation) {
  const auto pos = positions(permutation);
  int bw = 0;
  for (int v = 0; v < g.vertex_count; ++v)
    for (int w : g.adjacency[v]) bw = std::max(bw, std::abs(pos[v] - pos[w]));
  return bw;
}

long profile(const NearFieldGraph& g, const std::vector<int>& permutation) {
  const auto pos = positions(permutation);
  long total = 0;
  for (int v = 0; v < g.vertex_count; ++v) {
    int earliest = pos[v];
    for (int w : g.adjacency[v]) earliest = std::min(earliest, pos[w]);
    total += pos[v] - earliest;
  }
  return total;
}

int max_wavefront(const NearFieldGraph& g, const std::vector<int>& permutation) {
  const auto pos = positions(permutation);
  int worst = 0;
  for (int k = 0; k < g.vertex_count; ++k) {
    // active front at step k: vertices ordered <= k with a neighbor > k
    int front = 0;
    for (int v = 0; v < g.vertex_count; ++v) {
      if (pos[v] > k) continue;
      bool active = pos[v] == k;
      for (int w : g.adjacency[v])
        if (pos[w] > k) active = true;
      if (active) ++front;
    }
    worst = std::max(worst, front);
  }
  return worst;
}

}  // namespace hefie
