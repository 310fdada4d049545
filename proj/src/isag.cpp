#include "mpp/isag.hpp"

#include <algorithm>
#include <map>

#include "mpp/compose.hpp"
#include "mpp/line_ops.hpp"
#include "mpp/shuffle.hpp"
#include "mpp/small_solver.hpp"
#include "mpp/validate.hpp"

namespace mpp {
namespace {

void replay_loose(const GridSpec& grid, const Plan& plan,
                  std::vector<int32_t>& occ) {
  for (const Step& s : plan.steps) {
    if (auto v = check_step(grid, s, occ, /*strict=*/false, 0))
      throw ModelError("internal step invalid: " + v->detail);
    apply_step_occ(s, occ);
  }
}

// A half (or region) is recursively solvable iff, after dropping unit axes,
// it is a single cell, or has >= 2 non-unit axes and is not exactly 2x2
// (whose move group only contains rotations).
bool solvable_shape(const std::vector<int>& sides) {
  std::vector<int> nu;
  for (int s : sides)
    if (s > 1) nu.push_back(s);
  if (nu.empty()) return true;
  if (nu.size() < 2) return false;
  return !(nu.size() == 2 && nu[0] == 2 && nu[1] == 2);
}

std::vector<int> half_sides(const Region& r, int axis, bool high) {
  std::vector<int> s;
  int cut = r.lo[axis] + r.side(axis) / 2;
  for (int i = 0; i < r.k(); ++i)
    s.push_back(i == axis ? (high ? r.hi[axis] - cut : cut - r.lo[axis])
                          : r.side(i));
  return s;
}

// Labeled solver for m x 2 strips (too long for the lookup table, too
// narrow to split into solvable halves): odd-even transposition sort along
// the boundary ring; each executed transposition is a 3x2 block lookup.
Plan solve_ring_region(const GridSpec& grid, const Region& region,
                       const std::vector<Vertex>& region_verts,
                       const std::vector<Vertex>& target) {
  int u = -1, w = -1;
  for (int i = 0; i < region.k(); ++i) {
    if (region.side(i) >= 3) u = i;
    else if (region.side(i) == 2) w = i;
  }
  if (u < 0 || w < 0) throw ModelError("not an m x 2 strip");
  const int m = region.side(u);

  // ring order: down one rail, back along the other
  std::vector<Vertex> ring;
  std::vector<int> coords(region.lo);
  auto cell = [&](int uu, int ww) {
    coords = region.lo;
    coords[u] += uu;
    coords[w] += ww;
    return grid.vertex_at(coords);
  };
  for (int i = 0; i < m; ++i) ring.push_back(cell(i, 0));
  for (int i = m - 1; i >= 0; --i) ring.push_back(cell(i, 1));
  std::map<Vertex, int> ring_pos;
  for (size_t i = 0; i < ring.size(); ++i) ring_pos[ring[i]] = static_cast<int>(i);

  const int n = static_cast<int>(ring.size());
  std::vector<int> a(n);
  for (size_t i = 0; i < region_verts.size(); ++i)
    a[ring_pos[region_verts[i]]] = ring_pos[target[i]];

  auto swap_fragment = [&](int i) {
    // 3x2 block containing ring cells i and i+1
    int u1 = std::min(grid.coord_of(ring[i], u), grid.coord_of(ring[i + 1], u)) -
             region.lo[u];
    bool same_u =
        grid.coord_of(ring[i], u) == grid.coord_of(ring[i + 1], u);
    // cross-rail pairs get a centered window, along-rail pairs a leading one
    int w3 = same_u ? std::clamp(u1 - 1, 0, m - 3) : std::min(u1, m - 3);
    Region block = region;
    block.lo[u] = region.lo[u] + w3;
    block.hi[u] = block.lo[u] + 3;
    auto verts = block.vertices(grid);
    std::vector<Vertex> t = verts;
    auto idx = [&](Vertex v) {
      return std::lower_bound(verts.begin(), verts.end(), v) - verts.begin();
    };
    std::swap(t[idx(ring[i])], t[idx(ring[i + 1])]);
    return solve_tiny_region(grid, block, verts, t);
  };

  Plan out;
  auto sorted = [&] {
    for (int p = 0; p < n; ++p)
      if (a[p] != p) return false;
    return true;
  };
  int parity = 0;
  for (int phase = 0; phase <= 2 * n + 2 && !sorted(); ++phase, parity ^= 1) {
    std::vector<Fragment> frags;
    std::vector<int> swaps;
    for (int i = parity; i + 1 < n; i += 2)
      if (a[i] > a[i + 1]) swaps.push_back(i);
    if (swaps.empty()) continue;
    for (int i : swaps) {
      Plan f = swap_fragment(i);
      auto fp = plan_footprint(f);
      frags.push_back({std::move(f), std::move(fp)});
    }
    out.append(compose_fragments(grid, std::move(frags)));
    for (int i : swaps) std::swap(a[i], a[i + 1]);
  }
  if (!sorted()) throw ModelError("strip routing failed to converge");
  return out;
}

Plan solve_region(const GridSpec& grid, const Region& region,
                  const std::vector<Vertex>& region_verts,
                  const std::vector<Vertex>& target, int depth);

}  // namespace

Plan group_across_split(const GridSpec& grid, const Region& region, int axis,
                        int cut, const std::vector<int>& side_of) {
  auto region_verts = region.vertices(grid);
  if (side_of.size() != region_verts.size())
    throw ModelError("side label count mismatch");
  const int len_a = cut - region.lo[axis];
  const int len_b = region.hi[axis] - cut;
  if (len_a < 1 || len_b < 1) throw ModelError("cut outside region");

  // lines along the split axis, keyed by their orthogonal coordinates
  std::map<std::vector<int>, std::vector<int>> lines;  // key -> region idx list
  for (size_t i = 0; i < region_verts.size(); ++i) {
    std::vector<int> key;
    for (int d = 0; d < region.k(); ++d)
      if (d != axis) key.push_back(grid.coord_of(region_verts[i], d));
    lines[key].push_back(static_cast<int>(i));
  }

  std::vector<Vertex> cross_a, cross_b;  // current cells of wrong-side robots
  for (size_t i = 0; i < region_verts.size(); ++i) {
    bool in_a = grid.coord_of(region_verts[i], axis) < cut;
    if (in_a && side_of[i] == 1) cross_a.push_back(region_verts[i]);
    if (!in_a && side_of[i] == 0) cross_b.push_back(region_verts[i]);
  }
  if (cross_a.size() != cross_b.size())
    throw ModelError("crossing counts do not match half capacities");
  if (cross_a.empty()) return {};

  // per-line exchange quotas, spread evenly so the line exchanges stay
  // shallow and can run concurrently
  const int64_t total = static_cast<int64_t>(cross_a.size());
  const int cap = std::min(len_a, len_b);
  const int64_t nlines = static_cast<int64_t>(lines.size());
  std::map<std::vector<int>, int> quota;
  int64_t idx = 0, shortfall = 0;
  for (auto& [key, cells] : lines) {
    int64_t want = total / nlines + (idx++ < total % nlines ? 1 : 0);
    int t = static_cast<int>(std::min<int64_t>(cap, want));
    shortfall += want - t;
    quota[key] = t;
  }
  for (auto& [key, q] : quota) {  // capped-off leftovers, where room remains
    if (shortfall == 0) break;
    int add = static_cast<int>(std::min<int64_t>(cap - q, shortfall));
    q += add;
    shortfall -= add;
  }
  if (shortfall != 0) throw ModelError("exchange capacity exhausted");

  // balancing shuffle targets: the quota cells nearest the boundary
  GroupReconfigTask bal_a, bal_b;
  bal_a.region = bal_b.region = region;
  bal_a.region.hi[axis] = cut;
  bal_b.region.lo[axis] = cut;
  bal_a.sources = cross_a;
  bal_b.sources = cross_b;
  for (auto& [key, cells] : lines) {
    int t = quota[key];
    // cells (region indices) are ascending, so positions along the axis are
    // ascending within each half
    std::vector<Vertex> line_cells;
    for (int i : cells) line_cells.push_back(region_verts[i]);
    for (int j = 0; j < t; ++j) {
      bal_a.targets.push_back(line_cells[len_a - t + j]);
      bal_b.targets.push_back(line_cells[len_a + j]);
    }
  }
  Plan bal_plan;
  {
    // keep each balancing shuffle inside its own half when the half can
    // host one, so the two halves rearrange concurrently; skinny halves
    // (a bare line) still borrow the whole region for their gadgets
    auto bal_shuffle = [&](const GroupReconfigTask& t) {
      int wide = 0;
      for (int i = 0; i < t.region.k(); ++i) wide += t.region.side(i) > 1;
      return wide >= 2 ? shuffle_kd(grid, t) : shuffle_kd_in(grid, region, t);
    };
    std::vector<Fragment> frags;
    Plan pa = bal_shuffle(bal_a);
    Plan pb = bal_shuffle(bal_b);
    if (pa.makespan()) {
      auto fp = plan_footprint(pa);
      frags.push_back({std::move(pa), std::move(fp)});
    }
    if (pb.makespan()) {
      auto fp = plan_footprint(pb);
      frags.push_back({std::move(pb), std::move(fp)});
    }
    bal_plan = compose_fragments(grid, std::move(frags));
  }
  // boundary exchange, line by line
  std::vector<Fragment> frags;
  for (auto& [key, cells] : lines) {
    int t = quota[key];
    if (t == 0) continue;
    std::vector<Vertex> line_cells;
    for (int i : cells) line_cells.push_back(region_verts[i]);
    LineRegion lr = make_line_region(grid, region, line_cells);
    std::vector<int> ga, gb;
    for (int j = 0; j < t; ++j) {
      ga.push_back(len_a - t + j);
      gb.push_back(len_a + j);
    }
    Plan f = exchange_groups_on_line(grid, lr, ga, gb);
    auto fp = plan_footprint(f);
    frags.push_back({std::move(f), std::move(fp)});
  }
  bal_plan.append(compose_fragments(grid, std::move(frags)));
  return bal_plan;
}

namespace {

Plan solve_region(const GridSpec& grid, const Region& region,
                  const std::vector<Vertex>& region_verts,
                  const std::vector<Vertex>& target, int depth) {
  if (region_verts == target) return {};
  std::vector<int> nu;
  for (int i = 0; i < region.k(); ++i)
    if (region.side(i) > 1) nu.push_back(region.side(i));
  if (nu.empty()) return {};
  if (nu.size() < 2) throw ModelError("path region cannot be permuted");
  if (region.volume() <= 9)
    return solve_tiny_region(grid, region, region_verts, target);

  // pick a split axis round-robin over non-unit axes (largest first),
  // skipping splits that would create unsolvable halves
  std::vector<int> axes;
  for (int i = 0; i < region.k(); ++i)
    if (region.side(i) > 1) axes.push_back(i);
  std::stable_sort(axes.begin(), axes.end(),
                   [&](int a, int b) { return region.side(a) > region.side(b); });
  int split_axis = -1;
  for (size_t off = 0; off < axes.size(); ++off) {
    int a = axes[(depth + off) % axes.size()];
    if (region.side(a) < 2) continue;
    if (solvable_shape(half_sides(region, a, false)) &&
        solvable_shape(half_sides(region, a, true))) {
      split_axis = a;
      break;
    }
  }
  if (split_axis == -1) {
    // m x 2 strips (m = 5 after unit-dropping) land here
    if (nu.size() == 2 && std::min(nu[0], nu[1]) == 2)
      return solve_ring_region(grid, region, region_verts, target);
    throw ModelError("no valid split for region");
  }

  const int cut = region.lo[split_axis] + region.side(split_axis) / 2;
  std::vector<int> side_of(region_verts.size());
  for (size_t i = 0; i < region_verts.size(); ++i)
    side_of[i] = grid.coord_of(target[i], split_axis) >= cut;
  Plan plan = group_across_split(grid, region, split_axis, cut, side_of);

  // replay to find where everyone is, then recurse into the halves
  std::vector<int32_t> occ(grid.vertex_count, -2);
  for (size_t i = 0; i < region_verts.size(); ++i)
    occ[region_verts[i]] = static_cast<int32_t>(i);
  replay_loose(grid, plan, occ);

  std::vector<Plan> halves;
  for (int high = 0; high < 2; ++high) {
    Region half = region;
    (high ? half.lo : half.hi)[split_axis] = cut;
    auto verts = half.vertices(grid);
    std::vector<Vertex> sub_target(verts.size());
    for (size_t i = 0; i < verts.size(); ++i) {
      int32_t robot = occ[verts[i]];
      if (robot < 0) throw ModelError("lost a robot during grouping");
      sub_target[i] = target[robot];
      if (!half.contains(grid, sub_target[i]))
        throw ModelError("grouping left a robot on the wrong side");
    }
    halves.push_back(solve_region(grid, half, verts, sub_target, depth + 1));
  }
  plan.append(zip_plans(std::move(halves)));
  return plan;
}

}  // namespace

Plan isag_solve_region(const GridSpec& grid, const Region& region,
                       const std::vector<Vertex>& region_verts,
                       const std::vector<Vertex>& target) {
  if (region_verts.size() != target.size())
    throw ModelError("target count mismatch");
  return solve_region(grid, region, region_verts, target, 0);
}

Plan isag_solve(const Instance& instance) {
  if (!instance.full_occupancy())
    throw ModelError("solver needs full occupancy; embed virtual robots first");
  const GridSpec& grid = instance.grid;
  auto occ = instance.start.occupancy(grid.vertex_count);
  std::vector<Vertex> region_verts(grid.vertex_count);
  std::iota(region_verts.begin(), region_verts.end(), 0);
  std::vector<Vertex> target(grid.vertex_count);
  for (Vertex v = 0; v < grid.vertex_count; ++v)
    target[v] = instance.goal[occ[v]];
  return isag_solve_region(grid, Region::whole(grid), region_verts, target);
}

}  // namespace mpp
