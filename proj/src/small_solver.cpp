#include "mpp/small_solver.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <mutex>

namespace mpp {
namespace {

// All undirected simple cycles, each reported once with the smallest vertex
// first and the smaller of the two possible second vertices.
void enumerate_cycles(const GridSpec& g,
                      std::vector<std::vector<Vertex>>& out) {
  const int n = static_cast<int>(g.vertex_count);
  std::vector<std::vector<Vertex>> adj(n);
  for (Vertex v = 0; v < n; ++v)
    for (int axis = 0; axis < g.k(); ++axis)
      for (int dir : {-1, 1})
        if (Vertex w = g.neighbor(v, axis, dir); w >= 0)
          adj[v].push_back(w);

  std::vector<Vertex> path;
  std::vector<char> on_path(n, 0);
  auto dfs = [&](auto&& self, Vertex v) -> void {
    for (Vertex w : adj[v]) {
      if (w == path[0]) {
        if (path.size() >= 3 && path[1] < path.back())
          out.push_back(path);
        continue;
      }
      if (w < path[0] || on_path[w]) continue;
      on_path[w] = 1;
      path.push_back(w);
      self(self, w);
      path.pop_back();
      on_path[w] = 0;
    }
  };
  for (Vertex s = 0; s < n; ++s) {
    path.assign(1, s);
    on_path.assign(n, 0);
    on_path[s] = 1;
    dfs(dfs, s);
  }
}

// Every nonempty set of pairwise disjoint cycles, each cycle in either
// orientation, becomes one candidate step.
std::vector<Step> enumerate_moves(const GridSpec& g) {
  std::vector<std::vector<Vertex>> cycles;
  enumerate_cycles(g, cycles);
  std::vector<uint32_t> masks;
  std::vector<std::vector<Vertex>> oriented;
  for (auto& c : cycles) {
    uint32_t m = 0;
    for (Vertex v : c) m |= 1u << v;
    oriented.push_back(c);
    masks.push_back(m);
    std::vector<Vertex> rev(c.rbegin(), c.rend());
    std::rotate(rev.begin(), std::min_element(rev.begin(), rev.end()),
                rev.end());
    oriented.push_back(std::move(rev));
    masks.push_back(m);
  }

  std::vector<Step> moves;
  std::vector<int> chosen;
  auto rec = [&](auto&& self, int from, uint32_t used) -> void {
    if (!chosen.empty()) {
      Step s;
      for (int idx : chosen) s.add_cycle(oriented[idx]);
      moves.push_back(std::move(s));
    }
    for (int i = from; i < static_cast<int>(oriented.size()); ++i)
      if (!(masks[i] & used)) {
        chosen.push_back(i);
        self(self, i + 1, used | masks[i]);
        chosen.pop_back();
      }
  };
  rec(rec, 0, 0);
  return moves;
}

}  // namespace

SmallGridSolver::SmallGridSolver(std::vector<int> dims)
    : grid_(GridSpec::make(std::move(dims))) {
  n_ = static_cast<int>(grid_.vertex_count);
  if (n_ > 9) throw ModelError("brute-force solver is limited to 9 vertices");
  fact_.assign(n_ + 1, 1);
  for (int i = 1; i <= n_; ++i) fact_[i] = fact_[i - 1] * i;
  moves_ = enumerate_moves(grid_);

  dist_.assign(fact_[n_], 255);
  std::vector<Vertex> ident(n_);
  std::iota(ident.begin(), ident.end(), 0);
  std::deque<int64_t> queue{rank(ident)};
  dist_[queue.front()] = 0;
  std::vector<Vertex> perm(n_);
  while (!queue.empty()) {
    int64_t r = queue.front();
    queue.pop_front();
    int d = dist_[r];
    diameter_ = std::max(diameter_, d);
    // unrank
    {
      std::vector<Vertex> pool(n_);
      std::iota(pool.begin(), pool.end(), 0);
      int64_t rem = r;
      for (int i = 0; i < n_; ++i) {
        int64_t f = fact_[n_ - 1 - i];
        int idx = static_cast<int>(rem / f);
        rem %= f;
        perm[i] = pool[idx];
        pool.erase(pool.begin() + idx);
      }
    }
    for (const Step& m : moves_) {
      auto next = apply_move(perm, m);
      int64_t nr = rank(next);
      if (dist_[nr] == 255) {
        dist_[nr] = static_cast<uint8_t>(d + 1);
        queue.push_back(nr);
      }
    }
  }
}

int64_t SmallGridSolver::rank(const std::vector<Vertex>& p) const {
  int64_t r = 0;
  for (int i = 0; i < n_; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < n_; ++j) smaller += p[j] < p[i];
    r += smaller * fact_[n_ - 1 - i];
  }
  return r;
}

std::vector<Vertex> SmallGridSolver::apply_move(const std::vector<Vertex>& s,
                                                const Step& m) const {
  // s[v] = goal vertex of the robot standing on v; the robot on cyc[i]
  // advances to cyc[i+1].
  std::vector<Vertex> out = s;
  for (int c = 0; c < m.cycle_count(); ++c) {
    auto cyc = m.cycle(c);
    int len = static_cast<int>(cyc.size());
    for (int i = 0; i < len; ++i) out[cyc[(i + 1) % len]] = s[cyc[i]];
  }
  return out;
}

int SmallGridSolver::optimal_makespan(const std::vector<Vertex>& target) const {
  if (static_cast<int>(target.size()) != n_)
    throw ModelError("target size mismatch");
  uint8_t d = dist_[rank(target)];
  if (d == 255) throw ModelError("configuration is unreachable");
  return d;
}

Plan SmallGridSolver::solve(const std::vector<Vertex>& target) const {
  std::vector<Vertex> state = target;
  int d = optimal_makespan(state);
  Plan plan;
  while (d > 0) {
    bool advanced = false;
    for (const Step& m : moves_) {
      auto next = apply_move(state, m);
      if (dist_[rank(next)] == d - 1) {
        plan.steps.push_back(m);
        state = std::move(next);
        --d;
        advanced = true;
        break;
      }
    }
    if (!advanced) throw ModelError("BFS table is inconsistent");
  }
  return plan;
}

const SmallGridSolver& SmallGridSolver::cached(const std::vector<int>& dims) {
  static std::mutex mu;
  static std::map<std::vector<int>, std::unique_ptr<SmallGridSolver>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[dims];
  if (!slot) slot = std::make_unique<SmallGridSolver>(dims);
  return *slot;
}

Plan solve_tiny_region(const GridSpec& grid, const Region& region,
                       const std::vector<Vertex>& region_verts,
                       const std::vector<Vertex>& global_target) {
  std::vector<int> local_dims;
  for (int i = 0; i < region.k(); ++i)
    if (region.side(i) > 1) local_dims.push_back(region.side(i));
  if (local_dims.empty()) return {};  // single cell, nothing to do

  const SmallGridSolver& solver = SmallGridSolver::cached(local_dims);
  auto local_of = [&](Vertex v) {
    auto it = std::lower_bound(region_verts.begin(), region_verts.end(), v);
    if (it == region_verts.end() || *it != v)
      throw ModelError("target leaves the region");
    return static_cast<Vertex>(it - region_verts.begin());
  };
  std::vector<Vertex> target(region_verts.size());
  for (size_t i = 0; i < region_verts.size(); ++i)
    target[i] = local_of(global_target[i]);

  Plan local = solver.solve(target);
  Plan out;
  for (Step& s : local.steps) {
    for (Vertex& v : s.verts) v = region_verts[v];
    out.steps.push_back(std::move(s));
  }
  return out;
}

}  // namespace mpp
