#include "mpp/maxflow.hpp"

#include <algorithm>
#include <queue>

namespace mpp {
namespace {

struct Arc {
  int to;
  int cap;
  int rev;  // index of the reverse arc in adj[to]
};

struct FlowNet {
  std::vector<std::vector<Arc>> adj;
  void add(int u, int v, int cap) {
    adj[u].push_back({v, cap, static_cast<int>(adj[v].size())});
    adj[v].push_back({u, 0, static_cast<int>(adj[u].size()) - 1});
  }
};

}  // namespace

DisjointPathSet find_disjoint_paths_maxflow(const GridSpec& grid,
                                            const Region& region,
                                            const std::vector<Vertex>& sources,
                                            const std::vector<Vertex>& sinks) {
  if (sources.size() != sinks.size())
    throw ModelError("source and sink counts differ");
  auto verts = region.vertices(grid);
  auto local = [&](Vertex v) {
    auto it = std::lower_bound(verts.begin(), verts.end(), v);
    if (it == verts.end() || *it != v)
      throw ModelError("path endpoint outside region");
    return static_cast<int>(it - verts.begin());
  };

  // node layout: in(i) = 2i, out(i) = 2i+1, S = 2R, T = 2R+1
  int R = static_cast<int>(verts.size());
  int S = 2 * R, T = 2 * R + 1;
  FlowNet net;
  net.adj.resize(2 * R + 2);
  for (int i = 0; i < R; ++i) net.add(2 * i, 2 * i + 1, 1);
  for (int i = 0; i < R; ++i)
    for (int a = 0; a < grid.k(); ++a)
      for (int dir : {-1, 1}) {
        Vertex u = grid.neighbor(verts[i], a, dir);
        if (u >= 0 && region.contains(grid, u))
          net.add(2 * i + 1, 2 * local(u), 1);
      }
  for (Vertex v : sources) net.add(S, 2 * local(v), 1);
  for (Vertex v : sinks) net.add(2 * local(v) + 1, T, 1);

  // BFS augmenting paths (unit capacities: one unit per augmentation)
  int value = 0;
  std::vector<std::pair<int, int>> pred(net.adj.size());  // (node, arc idx)
  while (true) {
    std::vector<char> seen(net.adj.size(), 0);
    std::queue<int> q;
    q.push(S);
    seen[S] = 1;
    while (!q.empty() && !seen[T]) {
      int u = q.front();
      q.pop();
      for (size_t e = 0; e < net.adj[u].size(); ++e) {
        const Arc& a = net.adj[u][e];
        if (a.cap <= 0 || seen[a.to]) continue;
        seen[a.to] = 1;
        pred[a.to] = {u, static_cast<int>(e)};
        if (a.to == T) break;
        q.push(a.to);
      }
    }
    if (!seen[T]) break;
    for (int v = T; v != S;) {
      auto [u, e] = pred[v];
      net.adj[u][e].cap -= 1;
      net.adj[net.adj[u][e].to][net.adj[u][e].rev].cap += 1;
      v = u;
    }
    ++value;
  }

  // walk the flow from each saturated source to recover the paths
  DisjointPathSet out;
  out.value = value;
  for (Vertex sv : sources) {
    int i = local(sv);
    // source arc used iff the internal arc of i carries flow fed from S;
    // detect via the S->in(i) arc's residual
    bool used = false;
    for (const Arc& a : net.adj[S])
      if (a.to == 2 * i && a.cap == 0) used = true;
    if (!used) continue;
    std::vector<Vertex> path;
    int cur = i;
    while (true) {
      path.push_back(verts[cur]);
      // follow the single outgoing unit from out(cur)
      int next = -1;
      bool at_sink = false;
      for (const Arc& a : net.adj[2 * cur + 1]) {
        if (a.cap != 0 || a.to == 2 * cur) continue;  // only consumed arcs
        if (a.to == T) {
          at_sink = true;
          break;
        }
        next = a.to / 2;
        break;
      }
      if (at_sink || next < 0) break;
      cur = next;
    }
    out.paths.push_back(std::move(path));
  }
  return out;
}

}  // namespace mpp
