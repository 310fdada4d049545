#include "mpp/flow.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "mpp/compose.hpp"
#include "mpp/isag.hpp"
#include "mpp/matching.hpp"
#include "mpp/validate.hpp"

namespace mpp {

int CellPartition::cell_coord(int axis, int coord) const {
  const auto& c = cuts[axis];
  auto it = std::upper_bound(c.begin(), c.end(), coord);
  return static_cast<int>(it - c.begin()) - 1;
}

int32_t CellPartition::cell_of(Vertex v) const {
  std::vector<int> cc(grid.k());
  for (int a = 0; a < grid.k(); ++a)
    cc[a] = cell_coord(a, grid.coord_of(v, a));
  return skeleton.vertex_at(cc);
}

Region CellPartition::cell_region(int32_t cell) const {
  Region r;
  r.lo.resize(grid.k());
  r.hi.resize(grid.k());
  for (int a = 0; a < grid.k(); ++a) {
    int i = skeleton.coord_of(cell, a);
    r.lo[a] = cuts[a][i];
    r.hi[a] = cuts[a][i + 1];
  }
  return r;
}

CellPartition build_partition(const GridSpec& grid, int dg, int cell_side) {
  if (cell_side <= 0) throw ModelError("cell side must be positive");
  CellPartition p;
  p.grid = grid;
  p.dg = dg;
  std::vector<int> q(grid.k());
  for (int a = 0; a < grid.k(); ++a) {
    if (grid.dims[a] % cell_side != 0)
      throw ModelError("cell side " + std::to_string(cell_side) +
                       " does not divide grid side " +
                       std::to_string(grid.dims[a]) +
                       "; use a balanced partition instead");
    q[a] = grid.dims[a] / cell_side;
    p.cuts.emplace_back();
    for (int c = 0; c <= q[a]; ++c) p.cuts.back().push_back(c * cell_side);
  }
  p.skeleton = GridSpec::make(q);
  return p;
}

CellPartition build_partition_balanced(const GridSpec& grid, int dg,
                                       int factor) {
  int side_min = factor * std::max(dg, 1);
  CellPartition p;
  p.grid = grid;
  p.dg = dg;
  std::vector<int> q(grid.k());
  for (int a = 0; a < grid.k(); ++a) {
    int m = grid.dims[a];
    if (m < side_min)
      throw ModelError("grid side too small for the requested cell size");
    q[a] = m / side_min;
    p.cuts.emplace_back();
    // balanced interval lengths m/q or m/q+1
    for (int c = 0; c <= q[a]; ++c)
      p.cuts.back().push_back(static_cast<int>(int64_t(m) * c / q[a]));
  }
  p.skeleton = GridSpec::make(q);
  return p;
}

namespace {

// axes where the robot's current cell and goal cell differ, with signs
struct CellDiff {
  std::vector<int> axes;
  std::vector<int> dir;
};

CellDiff cell_diff(const CellPartition& part, Vertex pos, Vertex goal) {
  CellDiff d;
  for (int a = 0; a < part.grid.k(); ++a) {
    int ca = part.cell_coord(a, part.grid.coord_of(pos, a));
    int cg = part.cell_coord(a, part.grid.coord_of(goal, a));
    if (ca != cg) {
      d.axes.push_back(a);
      d.dir.push_back(cg > ca ? 1 : -1);
    }
  }
  return d;
}

// two-cell box along `axis` whose lower cell has skeleton a-coord `low`
Region pair_box(const CellPartition& part, int32_t lower_cell, int axis) {
  Region r = part.cell_region(lower_cell);
  int i = part.skeleton.coord_of(lower_cell, axis);
  r.hi[axis] = part.cuts[axis][i + 2];
  return r;
}

// Moves the listed robots into the other cell of the box (as sets, equal
// numbers each way); everyone else keeps its cell. Exact positions inside
// a cell never matter to the flow model, so a grouping pass restricted to
// a band around the boundary is enough and much cheaper than solving the
// box exactly. The band is sized to the movers (at least 2*dg wide).
Plan exchange_sets_in_box(const GridSpec& grid, const CellPartition& part,
                          int32_t lower_cell, int axis,
                          const std::vector<Vertex>& movers) {
  Region box = pair_box(part, lower_cell, axis);
  int cut = part.cuts[axis][part.skeleton.coord_of(lower_cell, axis) + 1];
  int band_lo = 2 * part.dg, band_hi = 2 * part.dg;
  for (Vertex v : movers) {
    int c = grid.coord_of(v, axis);
    if (c < cut) band_lo = std::max(band_lo, cut - c);
    else band_hi = std::max(band_hi, c + 1 - cut);
  }
  box.lo[axis] = std::max(box.lo[axis], cut - band_lo);
  box.hi[axis] = std::min(box.hi[axis], cut + band_hi);
  auto verts = box.vertices(grid);
  std::vector<int> side(verts.size());
  for (size_t i = 0; i < verts.size(); ++i)
    side[i] = grid.coord_of(verts[i], axis) >= cut;
  for (Vertex v : movers) {
    auto it = std::lower_bound(verts.begin(), verts.end(), v);
    if (it == verts.end() || *it != v)
      throw ModelError("internal: mover outside its box");
    side[it - verts.begin()] ^= 1;
  }
  return group_across_split(grid, box, axis, cut, side);
}

void run_round(const GridSpec& grid, std::vector<int32_t>& occ, Plan& out,
               std::vector<Fragment> frags) {
  if (frags.empty()) return;
  // boxes along one axis act near distinct cuts, so their band regions are
  // usually disjoint and the whole axis cancels in one wave; the scheduler
  // serializes the rare overlaps (widened bands), whose mis-delivered
  // robots simply stay crossers for the later stages
  Plan round = compose_fragments(grid, std::move(frags));
  for (const Step& s : round.steps) {
    if (auto v = check_step(grid, s, occ, /*strict=*/true, 0))
      throw ModelError("internal flow step invalid: " + v->detail);
    apply_step_occ(s, occ);
  }
  out.append(std::move(round));
}

// donor candidates of one box cell: robots within `width` of the box cut
// whose goal is in the cell they stand in (such robots never cross on
// their own, so sending one across creates exactly one straight return
// crossing). side_high says whether the cell sits above the cut.
std::vector<Vertex> donor_vertices(const CellPartition& part, int32_t cell,
                                   int axis, bool side_high, int width,
                                   const std::vector<int32_t>& occ,
                                   const std::vector<Vertex>& goal_of) {
  Region r = part.cell_region(cell);
  if (side_high)
    r.hi[axis] = std::min(r.hi[axis], r.lo[axis] + width);
  else
    r.lo[axis] = std::max(r.lo[axis], r.hi[axis] - width);
  std::vector<Vertex> out;
  for (Vertex v : r.vertices(part.grid))
    if (cell_diff(part, v, goal_of[occ[v]]).axes.empty()) out.push_back(v);
  return out;
}

}  // namespace

Plan diagonal_reroute(const GridSpec& grid, const CellPartition& part,
                      std::vector<int32_t>& occ,
                      const std::vector<Vertex>& goal_of) {
  Plan out;
  int k = grid.k();
  for (int sweep = 0;; ++sweep) {
    bool pending = false;
    for (Vertex v = 0; v < grid.vertex_count; ++v)
      if (cell_diff(part, v, goal_of[occ[v]]).axes.size() >= 2) {
        pending = true;
        break;
      }
    if (!pending) break;
    if (sweep >= k)
      throw ModelError("diagonal rerouting failed to converge");

    for (int a = 0; a < k; ++a) {
      // crossers grouped by the two-cell box that hosts their swap
      std::map<int32_t, std::vector<Vertex>> boxes;  // lower cell -> crossers
      for (Vertex v = 0; v < grid.vertex_count; ++v) {
        CellDiff d = cell_diff(part, v, goal_of[occ[v]]);
        if (d.axes.size() < 2 || d.axes[0] != a) continue;
        int32_t cell = part.cell_of(v);
        int ca = part.skeleton.coord_of(cell, a);
        int low = d.dir[0] > 0 ? ca : ca - 1;
        if (low < 0 || low + 1 >= part.skeleton.dims[a]) continue;
        int32_t lower = static_cast<int32_t>(
            cell + (low - ca) * part.skeleton.strides[a]);
        boxes[lower].push_back(v);
      }
      std::vector<Fragment> frags;
      std::vector<char> claimed(grid.vertex_count, 0);  // donors, this round
      for (auto& [lower, crossers] : boxes) {
        int32_t upper = static_cast<int32_t>(lower + part.skeleton.strides[a]);
        std::array<size_t, 2> need = {0, 0};
        for (Vertex v : crossers)
          // the donor comes from the box cell the crosser moves toward
          ++need[part.cell_of(v) == lower ? 1 : 0];
        Region lo_reg = part.cell_region(lower);
        Region hi_reg = part.cell_region(upper);
        int w_max = std::max(lo_reg.side(a), hi_reg.side(a));
        int w = 2 * part.dg;
        std::array<std::vector<Vertex>, 2> donors;
        for (;; w *= 2) {
          w = std::min(w, w_max);
          donors[0] = donor_vertices(part, lower, a, false, w, occ, goal_of);
          donors[1] = donor_vertices(part, upper, a, true, w, occ, goal_of);
          for (auto& ds : donors)
            std::erase_if(ds, [&](Vertex v) { return claimed[v]; });
          if (donors[0].size() >= need[0] && donors[1].size() >= need[1])
            break;
          if (w == w_max) throw ModelError("insufficient reroute donors");
        }
        std::array<size_t, 2> next = {0, 0};
        std::vector<Vertex> movers;
        for (Vertex v : crossers) {
          int side = part.cell_of(v) == lower ? 1 : 0;
          Vertex d = donors[side][next[side]++];
          claimed[d] = 1;
          movers.push_back(v);
          movers.push_back(d);
        }
        Plan p = exchange_sets_in_box(grid, part, lower, a, movers);
        auto fp = plan_footprint(p);
        frags.push_back({std::move(p), std::move(fp)});
      }
      run_round(grid, occ, out, std::move(frags));
    }
  }
  return out;
}

Plan flow_cancellation(const GridSpec& grid, const CellPartition& part,
                       std::vector<int32_t>& occ,
                       const std::vector<Vertex>& goal_of) {
  Plan out;
  // overlapping exchanges in one composed round occasionally deliver the
  // wrong robots, leaving fresh opposing pairs; sweep again until none are
  // left (almost always a single sweep)
  for (int pass = 0;; ++pass) {
    bool any = false;
    for (int a = 0; a < grid.k(); ++a) {
      std::map<int32_t, std::array<std::vector<Vertex>, 2>> boxes;
      for (Vertex v = 0; v < grid.vertex_count; ++v) {
        CellDiff d = cell_diff(part, v, goal_of[occ[v]]);
        if (d.axes.size() != 1 || d.axes[0] != a) continue;
        int32_t cell = part.cell_of(v);
        int ca = part.skeleton.coord_of(cell, a);
        int low = d.dir[0] > 0 ? ca : ca - 1;
        int32_t lower =
            static_cast<int32_t>(cell + (low - ca) * part.skeleton.strides[a]);
        boxes[lower][d.dir[0] > 0 ? 0 : 1].push_back(v);
      }
      std::vector<Fragment> frags;
      for (auto& [lower, sides] : boxes) {
        // pair only robots within half a cell of their cut: the exchange
        // bands of neighboring cuts then never meet, so every box of the
        // round runs in the same wave regardless of how many cuts there
        // are. The rare stragglers stay crossers and ride the circulation.
        int ca = part.skeleton.coord_of(lower, a);
        int cut = part.cuts[a][ca + 1];
        int reach_lo = part.cell_region(lower).side(a) / 2;
        int reach_hi = part.cuts[a][ca + 2] - cut;
        reach_hi /= 2;
        std::array<std::vector<Vertex>, 2> near;
        for (Vertex v : sides[0])
          if (cut - grid.coord_of(v, a) <= reach_lo) near[0].push_back(v);
        for (Vertex v : sides[1])
          if (grid.coord_of(v, a) + 1 - cut <= reach_hi) near[1].push_back(v);
        size_t n = std::min(near[0].size(), near[1].size());
        if (n == 0) continue;
        any = true;
        std::vector<Vertex> movers;
        for (size_t i = 0; i < n; ++i) {
          movers.push_back(near[0][i]);
          movers.push_back(near[1][i]);
        }
        Plan p = exchange_sets_in_box(grid, part, lower, a, movers);
        auto fp = plan_footprint(p);
        frags.push_back({std::move(p), std::move(fp)});
      }
      run_round(grid, occ, out, std::move(frags));
    }
    if (!any) break;
    if (pass > 2 * grid.k() + 2)
      throw ModelError("flow cancellation failed to converge");
  }
  return out;
}

Circulation extract_circulation(const GridSpec& grid,
                                const CellPartition& part,
                                const std::vector<int32_t>& occ,
                                const std::vector<Vertex>& goal_of) {
  std::map<std::pair<int32_t, int32_t>, int64_t> count;
  for (Vertex v = 0; v < grid.vertex_count; ++v) {
    CellDiff d = cell_diff(part, v, goal_of[occ[v]]);
    if (d.axes.empty()) continue;
    if (d.axes.size() > 1)
      throw ModelError("diagonal crossing survived orientation");
    int32_t from = part.cell_of(v);
    int32_t to = static_cast<int32_t>(
        from + d.dir[0] * part.skeleton.strides[d.axes[0]]);
    ++count[{from, to}];
  }
  Circulation c;
  c.vertex_count = static_cast<int32_t>(part.cell_count());
  // opposite crossings over one boundary usually cancel earlier, but the
  // cancellation stage skips robots scattered too far from their cut, so a
  // boundary may legitimately carry flow both ways
  for (auto& [key, flow] : count) c.edges.push_back({key.first, key.second, flow});
  if (!c.conserved()) throw ModelError("extracted flow is not a circulation");
  return c;
}

std::vector<UnitCirculation> decompose_circulation(const Circulation& c,
                                                   int64_t f) {
  if (!c.conserved()) throw ModelError("flow is not a circulation");
  if (f < c.max_inflow())
    throw ModelError("f below the maximum vertex in-flow");
  if (f == 0) return {};

  BipartiteMultigraph g;
  g.left_count = g.right_count = c.vertex_count;
  std::vector<int64_t> inflow(c.vertex_count, 0);
  for (const FlowEdge& e : c.edges) {
    if (e.flow < 0) throw ModelError("negative flow");
    if (e.flow == 0) continue;
    if (e.from == e.to) throw ModelError("self-loop flow");
    g.add_edge(e.from, e.to, e.flow);
    inflow[e.to] += e.flow;
  }
  for (int32_t v = 0; v < c.vertex_count; ++v)
    if (inflow[v] < f) g.add_edge(v, v, f - inflow[v]);

  std::vector<UnitCirculation> out;
  for (const Matching& m : decompose_regular(g)) {
    std::vector<int32_t> next(c.vertex_count, -1);
    bool any = false;
    for (const MatchPair& p : m.pairs)
      if (p.left != p.right) {
        next[p.left] = p.right;
        any = true;
      }
    if (!any) continue;
    UnitCirculation u;
    std::vector<char> seen(c.vertex_count, 0);
    for (int32_t v = 0; v < c.vertex_count; ++v) {
      if (next[v] < 0 || seen[v]) continue;
      std::vector<int32_t> cyc;
      int32_t w = v;
      while (!seen[w]) {
        seen[w] = 1;
        cyc.push_back(w);
        w = next[w];
        if (w < 0) throw ModelError("matching does not close a cycle");
      }
      u.cycles.push_back(std::move(cyc));
    }
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace mpp
