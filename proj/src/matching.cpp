#include "mpp/matching.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace mpp {

void BipartiteMultigraph::add_edge(int32_t l, int32_t r, int64_t mult) {
  if (l < 0 || l >= left_count || r < 0 || r >= right_count)
    throw ModelError("edge endpoint out of range");
  if (mult < 1) throw ModelError("edge multiplicity must be >= 1");
  edges.push_back({l, r, mult});
}

int64_t BipartiteMultigraph::degree_left(int32_t l) const {
  int64_t d = 0;
  for (const Edge& e : edges)
    if (e.left == l) d += e.mult;
  return d;
}

int64_t BipartiteMultigraph::degree_right(int32_t r) const {
  int64_t d = 0;
  for (const Edge& e : edges)
    if (e.right == r) d += e.mult;
  return d;
}

bool BipartiteMultigraph::is_regular(int64_t d) const {
  std::vector<int64_t> dl(left_count, 0), dr(right_count, 0);
  for (const Edge& e : edges) {
    dl[e.left] += e.mult;
    dr[e.right] += e.mult;
  }
  for (int64_t x : dl)
    if (x != d) return false;
  for (int64_t x : dr)
    if (x != d) return false;
  return true;
}

namespace {

// Hopcroft-Karp on the support graph (multiplicities only gate which edge
// entries are usable). Adjacency is scanned in edge-index order so results
// are reproducible.
struct Matcher {
  const BipartiteMultigraph& g;
  std::vector<std::vector<int32_t>> adj;  // left -> usable edge indices
  std::vector<int32_t> match_l, match_r;  // vertex -> matched edge index, -1
  std::vector<int32_t> level;

  explicit Matcher(const BipartiteMultigraph& graph) : g(graph) {
    adj.resize(g.left_count);
    for (int32_t e = 0; e < static_cast<int32_t>(g.edges.size()); ++e)
      if (g.edges[e].mult > 0) adj[g.edges[e].left].push_back(e);
    match_l.assign(g.left_count, -1);
    match_r.assign(g.right_count, -1);
  }

  bool bfs() {
    const int32_t inf = std::numeric_limits<int32_t>::max();
    level.assign(g.left_count, inf);
    std::queue<int32_t> q;
    for (int32_t l = 0; l < g.left_count; ++l)
      if (match_l[l] == -1) {
        level[l] = 0;
        q.push(l);
      }
    bool reachable = false;
    while (!q.empty()) {
      int32_t l = q.front();
      q.pop();
      for (int32_t e : adj[l]) {
        int32_t r = g.edges[e].right;
        int32_t me = match_r[r];
        if (me == -1) {
          reachable = true;
        } else if (level[g.edges[me].left] == inf) {
          level[g.edges[me].left] = level[l] + 1;
          q.push(g.edges[me].left);
        }
      }
    }
    return reachable;
  }

  bool dfs(int32_t l) {
    for (int32_t e : adj[l]) {
      int32_t r = g.edges[e].right;
      int32_t me = match_r[r];
      if (me == -1 ||
          (level[g.edges[me].left] == level[l] + 1 && dfs(g.edges[me].left))) {
        match_l[l] = e;
        match_r[r] = e;
        return true;
      }
    }
    level[l] = std::numeric_limits<int32_t>::max();
    return false;
  }

  int32_t run() {
    int32_t size = 0;
    while (bfs())
      for (int32_t l = 0; l < g.left_count; ++l)
        if (match_l[l] == -1 && dfs(l)) ++size;
    return size;
  }
};

int64_t regular_degree(const BipartiteMultigraph& g) {
  if (g.left_count != g.right_count || g.left_count == 0)
    throw ModelError("graph must be balanced and non-empty");
  int64_t total = 0;
  for (const auto& e : g.edges) total += e.mult;
  if (total % g.left_count != 0)
    throw ModelError("graph is not regular");
  int64_t d = total / g.left_count;
  if (d < 1 || !g.is_regular(d)) throw ModelError("graph is not regular");
  return d;
}

Matching extract_unchecked(const BipartiteMultigraph& g) {
  Matcher m(g);
  if (m.run() != g.left_count)
    throw ModelError("no perfect matching found on a regular graph");
  Matching out;
  for (int32_t l = 0; l < g.left_count; ++l)
    out.pairs.push_back({l, g.edges[m.match_l[l]].right, m.match_l[l]});
  return out;
}

}  // namespace

Matching extract_perfect_matching(const BipartiteMultigraph& g) {
  regular_degree(g);
  return extract_unchecked(g);
}

std::vector<Matching> decompose_regular(const BipartiteMultigraph& g) {
  int64_t d = regular_degree(g);
  BipartiteMultigraph work = g;
  std::vector<Matching> out;
  for (int64_t i = 0; i < d; ++i) {
    Matching m = extract_unchecked(work);
    for (const MatchPair& p : m.pairs) --work.edges[p.edge].mult;
    out.push_back(std::move(m));
  }
  for (const auto& e : work.edges)
    if (e.mult != 0) throw ModelError("decomposition did not exhaust edges");
  return out;
}

}  // namespace mpp
