#include "mpp/shuffle.hpp"

#include <algorithm>
#include <map>

#include "mpp/compose.hpp"
#include "mpp/line_ops.hpp"
#include "mpp/small_solver.hpp"
#include "mpp/validate.hpp"

namespace mpp {
namespace {

// Columns run along the shortest non-unit axis (ties broken toward the
// later axis), matching the dimension-order convention m1 >= ... >= mk.
struct Columns {
  int ca = -1;
  int d = 1;                              // column length
  std::vector<std::vector<Vertex>> cols;  // [column][position] -> vertex
  std::map<Vertex, std::pair<int, int>> at;  // vertex -> (column, position)
};

Columns make_columns(const GridSpec& grid, const Region& region) {
  Columns c;
  for (int i = 0; i < region.k(); ++i)
    if (region.side(i) > 1 && (c.ca == -1 || region.side(i) <= region.side(c.ca)))
      c.ca = i;
  if (c.ca == -1) throw ModelError("region has no non-unit axis");
  c.d = region.side(c.ca);
  int64_t m = region.volume() / c.d;
  c.cols.assign(m, {});
  for (Vertex v : region.vertices(grid)) {
    int64_t col = 0;
    for (int i = 0; i < region.k(); ++i) {
      if (i == c.ca) continue;
      col = col * region.side(i) + (grid.coord_of(v, i) - region.lo[i]);
    }
    int pos = grid.coord_of(v, c.ca) - region.lo[c.ca];
    if (c.cols[col].empty()) c.cols[col].resize(c.d, -1);
    c.cols[col][pos] = v;
    c.at[v] = {static_cast<int>(col), pos};
  }
  return c;
}

struct CellEdge {
  Vertex src, tgt;
  int cls;  // 0 = complement, >0 = group index + 1
};

// Sequential pairing in ascending vertex order within each class: the k-th
// source cell of a class goes with its k-th target cell, and likewise for
// the complement. Classes must be disjoint on both sides.
std::vector<CellEdge> build_multi_edges(const GridSpec& grid,
                                        const MultiGroupTask& task) {
  auto region_verts = task.region.vertices(grid);
  if (task.sources.size() != task.targets.size())
    throw ModelError("group count mismatch");
  std::vector<CellEdge> edges;
  std::vector<Vertex> all_src, all_tgt;
  for (size_t c = 0; c < task.sources.size(); ++c) {
    std::vector<Vertex> s = task.sources[c], t = task.targets[c];
    if (s.size() != t.size()) throw ModelError("group size mismatch");
    std::sort(s.begin(), s.end());
    std::sort(t.begin(), t.end());
    for (size_t i = 0; i < s.size(); ++i)
      edges.push_back({s[i], t[i], static_cast<int>(c) + 1});
    all_src.insert(all_src.end(), s.begin(), s.end());
    all_tgt.insert(all_tgt.end(), t.begin(), t.end());
  }
  std::sort(all_src.begin(), all_src.end());
  std::sort(all_tgt.begin(), all_tgt.end());
  auto check_subset = [&](const std::vector<Vertex>& s) {
    for (size_t i = 0; i < s.size(); ++i) {
      if (i && s[i] == s[i - 1]) throw ModelError("duplicate group vertex");
      if (!std::binary_search(region_verts.begin(), region_verts.end(), s[i]))
        throw ModelError("group vertex outside region");
    }
  };
  check_subset(all_src);
  check_subset(all_tgt);

  std::vector<Vertex> comp_src, comp_tgt;
  std::set_difference(region_verts.begin(), region_verts.end(),
                      all_src.begin(), all_src.end(),
                      std::back_inserter(comp_src));
  std::set_difference(region_verts.begin(), region_verts.end(),
                      all_tgt.begin(), all_tgt.end(),
                      std::back_inserter(comp_tgt));
  for (size_t i = 0; i < comp_src.size(); ++i)
    edges.push_back({comp_src[i], comp_tgt[i], 0});
  return edges;
}

Plan tiny_reconfig(const GridSpec& grid, const MultiGroupTask& task) {
  auto region_verts = task.region.vertices(grid);
  auto edges = build_multi_edges(grid, task);
  std::map<Vertex, Vertex> dest;
  for (const CellEdge& e : edges) dest[e.src] = e.tgt;
  std::vector<Vertex> target(region_verts.size());
  for (size_t i = 0; i < region_verts.size(); ++i)
    target[i] = dest[region_verts[i]];
  return solve_tiny_region(grid, task.region, region_verts, target);
}

void replay(const GridSpec& grid, const Plan& plan, std::vector<int32_t>& occ) {
  for (const Step& s : plan.steps) {
    if (auto v = check_step(grid, s, occ, /*strict=*/false, 0))
      throw ModelError("internal shuffle step invalid: " + v->detail);
    apply_step_occ(s, occ);
  }
}

Plan shuffle_rec(const GridSpec& grid, const Region& bound,
                 const MultiGroupTask& task);

// 1D base case: each class is matched monotonically onto its target
// positions, the complement fills what remains in order.
Plan line_reconfig(const GridSpec& grid, const Region& bound,
                   const MultiGroupTask& task) {
  auto line = task.region.vertices(grid);
  LineRegion lr = [&] {
    try {
      return make_line_region(grid, bound, line);
    } catch (const ModelError&) {
      // top-level call on a bare line: borrow helpers from the whole grid
      return make_line_region(grid, Region::whole(grid), line);
    }
  }();
  const int l = static_cast<int>(line.size());
  auto pos_of = [&](Vertex v) {
    return static_cast<int>(
        std::lower_bound(line.begin(), line.end(), v) - line.begin());
  };
  auto edges = build_multi_edges(grid, task);
  std::vector<int> dest(l, -1);
  for (const CellEdge& e : edges) dest[pos_of(e.src)] = pos_of(e.tgt);
  return permute_on_line(grid, lr, dest);
}

Plan shuffle_rec(const GridSpec& grid, const Region& bound,
                 const MultiGroupTask& task) {
  const Region& region = task.region;
  {
    bool fixed = true;
    for (size_t c = 0; c < task.sources.size() && fixed; ++c) {
      std::vector<Vertex> a = task.sources[c], b = task.targets[c];
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      fixed = a == b;
    }
    if (fixed) return {};
  }
  int non_unit = 0;
  for (int i = 0; i < region.k(); ++i) non_unit += region.side(i) > 1;
  if (non_unit == 1) return line_reconfig(grid, bound, task);
  if (region.volume() <= 9) return tiny_reconfig(grid, task);

  Columns cols = make_columns(grid, region);
  auto edges = build_multi_edges(grid, task);

  BipartiteMultigraph g;
  g.left_count = g.right_count = static_cast<int32_t>(cols.cols.size());
  for (const CellEdge& e : edges)
    g.add_edge(cols.at[e.src].first, cols.at[e.tgt].first);
  auto matchings = decompose_regular(g);  // one per layer

  std::vector<int> midx(edges.size(), -1);
  for (size_t l = 0; l < matchings.size(); ++l)
    for (const MatchPair& p : matchings[l].pairs) midx[p.edge] = static_cast<int>(l);

  std::vector<int32_t> occ(grid.vertex_count, -1);  // -1 = outside, else class
  std::vector<int32_t> tgt_cls(grid.vertex_count, -1);
  for (const CellEdge& e : edges) {
    occ[e.src] = e.cls;
    tgt_cls[e.tgt] = e.cls;
  }

  Plan out;
  auto run_phase = [&](std::vector<Fragment> frags) {
    Plan phase = compose_fragments(grid, std::move(frags));
    replay(grid, phase, occ);
    out.append(std::move(phase));
  };

  // phase 1: within each column, the robot with edge e moves to row midx[e]
  {
    std::map<Vertex, int> edge_at;
    for (size_t e = 0; e < edges.size(); ++e) edge_at[edges[e].src] = static_cast<int>(e);
    std::vector<Fragment> frags;
    for (const auto& column : cols.cols) {
      std::vector<int> dest(cols.d);
      bool identity = true;
      for (int p = 0; p < cols.d; ++p) {
        dest[p] = midx[edge_at[column[p]]];
        identity = identity && dest[p] == p;
      }
      if (identity) continue;
      LineRegion lr = make_line_region(grid, bound, column);
      Plan frag = permute_on_line(grid, lr, dest);
      auto fp = plan_footprint(frag);
      frags.push_back({std::move(frag), std::move(fp)});
    }
    run_phase(std::move(frags));
  }

  // phase 2: one (k-1)-dimensional shuffle per layer
  {
    std::vector<Fragment> frags;
    for (int l = 0; l < cols.d; ++l) {
      MultiGroupTask sub;
      sub.region = region;
      sub.region.lo[cols.ca] = region.lo[cols.ca] + l;
      sub.region.hi[cols.ca] = region.lo[cols.ca] + l + 1;
      sub.sources.assign(task.sources.size(), {});
      sub.targets.assign(task.sources.size(), {});
      for (size_t e = 0; e < edges.size(); ++e) {
        if (edges[e].cls == 0 || midx[e] != l) continue;
        sub.sources[edges[e].cls - 1].push_back(
            cols.cols[cols.at[edges[e].src].first][l]);
        sub.targets[edges[e].cls - 1].push_back(
            cols.cols[cols.at[edges[e].tgt].first][l]);
      }
      Plan frag = shuffle_rec(grid, bound, sub);
      if (frag.makespan() == 0) continue;
      auto fp = plan_footprint(frag);
      frags.push_back({std::move(frag), std::move(fp)});
    }
    run_phase(std::move(frags));
  }

  // phase 3: within each column, every class takes its own target cells
  {
    const int ncls = static_cast<int>(task.sources.size()) + 1;
    std::vector<Fragment> frags;
    for (const auto& column : cols.cols) {
      std::vector<std::vector<int>> pos(ncls), cell(ncls);
      for (int p = 0; p < cols.d; ++p) {
        pos[occ[column[p]]].push_back(p);
        cell[tgt_cls[column[p]]].push_back(p);
      }
      std::vector<int> dest(cols.d);
      bool identity = true;
      for (int c = 0; c < ncls; ++c) {
        if (pos[c].size() != cell[c].size())
          throw ModelError("shuffle phase balance broken");
        for (size_t i = 0; i < pos[c].size(); ++i) {
          dest[pos[c][i]] = cell[c][i];
          identity = identity && pos[c][i] == cell[c][i];
        }
      }
      if (identity) continue;
      LineRegion lr = make_line_region(grid, bound, column);
      Plan frag = permute_on_line(grid, lr, dest);
      auto fp = plan_footprint(frag);
      frags.push_back({std::move(frag), std::move(fp)});
    }
    run_phase(std::move(frags));
  }

  // post-condition: every class occupies exactly its target set
  for (size_t c = 0; c < task.targets.size(); ++c)
    for (Vertex v : task.targets[c])
      if (occ[v] != static_cast<int32_t>(c) + 1)
        throw ModelError("shuffle failed to place a group");
  return out;
}

MultiGroupTask widen(const GroupReconfigTask& task) {
  MultiGroupTask m;
  m.region = task.region;
  m.sources = {task.sources};
  m.targets = {task.targets};
  return m;
}

}  // namespace

BipartiteMultigraph build_column_bipartite(const GridSpec& grid,
                                           const GroupReconfigTask& task) {
  Columns cols = make_columns(grid, task.region);
  auto edges = build_multi_edges(grid, widen(task));
  BipartiteMultigraph g;
  g.left_count = g.right_count = static_cast<int32_t>(cols.cols.size());
  for (const CellEdge& e : edges)
    g.add_edge(cols.at[e.src].first, cols.at[e.tgt].first);
  return g;
}

Plan shuffle_kd(const GridSpec& grid, const GroupReconfigTask& task) {
  return shuffle_rec(grid, task.region, widen(task));
}

Plan shuffle_kd_in(const GridSpec& grid, const Region& bound,
                   const GroupReconfigTask& task) {
  return shuffle_rec(grid, bound, widen(task));
}

Plan shuffle_groups(const GridSpec& grid, const MultiGroupTask& task) {
  return shuffle_rec(grid, task.region, task);
}

Plan shuffle_2d(const GridSpec& grid, const GroupReconfigTask& task) {
  int non_unit = 0;
  for (int i = 0; i < task.region.k(); ++i)
    non_unit += task.region.side(i) > 1;
  if (non_unit != 2) throw ModelError("shuffle_2d needs a 2D region");
  return shuffle_kd(grid, task);
}

}  // namespace mpp
