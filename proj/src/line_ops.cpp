#include "mpp/line_ops.hpp"

#include <algorithm>

#include "mpp/compose.hpp"
#include "mpp/small_solver.hpp"

namespace mpp {
namespace {

// Axis along which the line runs, or -1 for single-cell lines.
int line_axis(const GridSpec& grid, const std::vector<Vertex>& line) {
  if (line.size() < 2) return -1;
  int axis = -1;
  for (int i = 0; i < grid.k(); ++i)
    if (grid.coord_of(line[0], i) != grid.coord_of(line[1], i)) {
      if (axis != -1) throw ModelError("line is not axis-aligned");
      axis = i;
    }
  if (axis == -1) throw ModelError("line repeats a vertex");
  for (size_t p = 1; p < line.size(); ++p) {
    Vertex expect = grid.neighbor(
        line[p - 1], axis,
        grid.coord_of(line[1], axis) > grid.coord_of(line[0], axis) ? 1 : -1);
    if (line[p] != expect) throw ModelError("line vertices are not consecutive");
  }
  return axis;
}

std::vector<Vertex> translate(const GridSpec& grid,
                              const std::vector<Vertex>& line, int axis,
                              int delta) {
  std::vector<Vertex> out;
  out.reserve(line.size());
  for (Vertex v : line) {
    Vertex w = v;
    for (int s = 0; s < std::abs(delta); ++s) {
      w = grid.neighbor(w, axis, delta > 0 ? 1 : -1);
      if (w < 0) throw ModelError("helper row leaves the grid");
    }
    out.push_back(w);
  }
  return out;
}

}  // namespace

LineRegion LineRegion::make(const GridSpec& grid, std::vector<Vertex> line,
                            int helper_axis, int dir) {
  int la = line_axis(grid, line);
  if (helper_axis == la || helper_axis < 0 || helper_axis >= grid.k())
    throw ModelError("bad helper axis");
  LineRegion r;
  int c = grid.coord_of(line[0], helper_axis);
  int m = grid.dims[helper_axis];
  if (static_cast<int>(line.size()) >= 3 || line.size() <= 1) {
    if (m < 2) throw ModelError("helper axis too narrow");
    if (c + dir < 0 || c + dir >= m) dir = -dir;
    if (c + dir < 0 || c + dir >= m) throw ModelError("helper row unavailable");
    r.mode = Mode::Side;
    auto helper = translate(grid, line, helper_axis, dir);
    if (dir > 0) {
      r.rows = {std::move(line), std::move(helper)};
      r.line_row = 0;
    } else {
      r.rows = {std::move(helper), std::move(line)};
      r.line_row = 1;
    }
    return r;
  }
  // length-2 line: need a 3-wide window on the helper axis
  if (m < 3) throw ModelError("length-2 line needs a 3-wide cross axis");
  int ws = std::clamp(dir > 0 ? c : c - 2, 0, m - 3);
  ws = std::min(ws, c);
  if (c > ws + 2) ws = c - 2;
  r.mode = Mode::Rows3;
  r.line_row = c - ws;
  for (int i = 0; i < 3; ++i)
    r.rows.push_back(translate(grid, line, helper_axis, ws + i - c));
  return r;
}

LineRegion LineRegion::make(const GridSpec& grid, std::vector<Vertex> line) {
  int la = line_axis(grid, line);
  int l = static_cast<int>(line.size());
  if (l != 2) {
    for (int axis = 0; axis < grid.k(); ++axis)
      if (axis != la && grid.dims[axis] >= 2) return make(grid, line, axis, 1);
    throw ModelError("no helper row available (1-wide grid)");
  }
  for (int axis = 0; axis < grid.k(); ++axis)
    if (axis != la && grid.dims[axis] >= 3) return make(grid, line, axis, 1);
  // all cross axes have width 2: fall back to a 2x2x2 block
  std::vector<int> cross;
  for (int axis = 0; axis < grid.k(); ++axis)
    if (axis != la && grid.dims[axis] >= 2) cross.push_back(axis);
  if (cross.size() < 2)
    throw ModelError("length-2 line needs two usable cross axes");
  auto dir_on = [&](int axis) {
    return grid.coord_of(line[0], axis) + 1 < grid.dims[axis] ? 1 : -1;
  };
  int h1 = cross[0], h2 = cross[1];
  int d1 = dir_on(h1), d2 = dir_on(h2);
  LineRegion r;
  r.mode = Mode::Cube;
  r.line_row = 0;
  auto helper = translate(grid, line, h1, d1);
  r.rows = {line, helper, translate(grid, line, h2, d2),
            translate(grid, helper, h2, d2)};
  return r;
}

LineRegion make_line_region(const GridSpec& grid, const Region& bound,
                            const std::vector<Vertex>& line) {
  int la = line_axis(grid, line);
  int l = static_cast<int>(line.size());
  auto side_dir = [&](int axis) {
    // +1/-1 keeping the helper row inside bound, or 0 if neither fits
    int c = grid.coord_of(line[0], axis);
    if (c + 1 < bound.hi[axis]) return 1;
    if (c - 1 >= bound.lo[axis]) return -1;
    return 0;
  };
  if (l != 2) {
    for (int axis = 0; axis < grid.k(); ++axis) {
      if (axis == la) continue;
      if (int dir = side_dir(axis)) {
        LineRegion r;
        r.mode = LineRegion::Mode::Side;
        auto helper = translate(grid, line, axis, dir);
        if (dir > 0) {
          r.rows = {line, std::move(helper)};
          r.line_row = 0;
        } else {
          r.rows = {std::move(helper), line};
          r.line_row = 1;
        }
        return r;
      }
    }
    throw ModelError("no in-bound helper row available");
  }
  for (int axis = 0; axis < grid.k(); ++axis) {
    if (axis == la || bound.side(axis) < 3) continue;
    int c = grid.coord_of(line[0], axis);
    int ws = std::clamp(c, bound.lo[axis], bound.hi[axis] - 3);
    if (c > ws + 2) ws = c - 2;
    LineRegion r;
    r.mode = LineRegion::Mode::Rows3;
    r.line_row = c - ws;
    for (int i = 0; i < 3; ++i)
      r.rows.push_back(translate(grid, line, axis, ws + i - c));
    return r;
  }
  std::vector<int> cross;
  for (int axis = 0; axis < grid.k(); ++axis)
    if (axis != la && bound.side(axis) >= 2 && side_dir(axis)) cross.push_back(axis);
  if (cross.size() < 2)
    throw ModelError("length-2 line needs two usable in-bound cross axes");
  int h1 = cross[0], h2 = cross[1];
  int d1 = side_dir(h1), d2 = side_dir(h2);
  LineRegion r;
  r.mode = LineRegion::Mode::Cube;
  r.line_row = 0;
  auto helper = translate(grid, line, h1, d1);
  r.rows = {line, helper, translate(grid, line, h2, d2),
            translate(grid, helper, h2, d2)};
  return r;
}

std::vector<Vertex> LineRegion::footprint() const {
  std::vector<Vertex> out;
  for (const auto& row : rows) out.insert(out.end(), row.begin(), row.end());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Plan fragment transposing the robots at line positions i and i+1.
Plan swap_gadget(const LineRegion& r, int i) {
  const int l = r.length();
  switch (r.mode) {
    case LineRegion::Mode::Side: {
      int w = std::min(i, l - 3);
      const auto& solver = SmallGridSolver::cached({3, 2});
      std::vector<Vertex> target(6);
      std::iota(target.begin(), target.end(), 0);
      int a = 2 * (i - w) + r.line_row, b = 2 * (i + 1 - w) + r.line_row;
      std::swap(target[a], target[b]);
      Plan local = solver.solve(target);
      for (Step& s : local.steps)
        for (Vertex& v : s.verts) v = r.rows[v % 2][w + v / 2];
      return local;
    }
    case LineRegion::Mode::Rows3: {
      const auto& solver = SmallGridSolver::cached({3, 2});
      std::vector<Vertex> target(6);
      std::iota(target.begin(), target.end(), 0);
      std::swap(target[2 * r.line_row], target[2 * r.line_row + 1]);
      Plan local = solver.solve(target);
      for (Step& s : local.steps)
        for (Vertex& v : s.verts) v = r.rows[v / 2][v % 2];
      return local;
    }
    case LineRegion::Mode::Cube: {
      const auto& solver = SmallGridSolver::cached({2, 2, 2});
      std::vector<Vertex> target(8);
      std::iota(target.begin(), target.end(), 0);
      std::swap(target[0], target[1]);
      Plan local = solver.solve(target);
      for (Step& s : local.steps)
        for (Vertex& v : s.verts) v = r.rows[(v / 4) * 2 + (v / 2) % 2][v % 2];
      return local;
    }
  }
  throw ModelError("unreachable");
}

}  // namespace

Plan permute_on_line(const GridSpec& grid, const LineRegion& region,
                     const std::vector<int>& dest) {
  (void)grid;
  const int l = region.length();
  if (static_cast<int>(dest.size()) != l)
    throw ModelError("destination size mismatch");
  {
    std::vector<char> seen(l, 0);
    for (int d : dest) {
      if (d < 0 || d >= l || seen[d])
        throw ModelError("destination is not a permutation");
      seen[d] = 1;
    }
  }
  std::vector<int> a = dest;
  auto sorted = [&] {
    for (int p = 0; p < l; ++p)
      if (a[p] != p) return false;
    return true;
  };

  Plan out;
  int parity = 0;
  for (int phase = 0; phase <= 2 * l + 2 && !sorted(); ++phase, parity ^= 1) {
    std::vector<int> swaps;
    for (int i = parity; i + 1 < l; i += 2)
      if (a[i] > a[i + 1]) swaps.push_back(i);
    if (swaps.empty()) continue;
    // Gadget windows of pairs two apart overlap, so split each phase into
    // two sub-waves of pairwise-disjoint windows.
    for (int sub = 0; sub < 2; ++sub) {
      std::vector<Plan> batch;
      for (int i : swaps)
        if ((i / 2) % 2 == sub) batch.push_back(swap_gadget(region, i));
      if (!batch.empty()) out.append(zip_plans(std::move(batch)));
    }
    for (int i : swaps) std::swap(a[i], a[i + 1]);
  }
  if (!sorted()) throw ModelError("line routing failed to converge");
  return out;
}

Plan rearrange_on_line(const GridSpec& grid, const LineRegion& region,
                       const std::vector<int>& current,
                       const std::vector<int>& target,
                       std::vector<int>* moved_out) {
  const int l = region.length();
  if (current.size() != target.size())
    throw ModelError("group size mismatch");
  std::vector<int> cur = current, tgt = target;
  std::sort(cur.begin(), cur.end());
  std::sort(tgt.begin(), tgt.end());
  std::vector<char> in_cur(l, 0), in_tgt(l, 0);
  for (int p : cur) {
    if (p < 0 || p >= l || in_cur[p]) throw ModelError("bad group position");
    in_cur[p] = 1;
  }
  for (int p : tgt) {
    if (p < 0 || p >= l || in_tgt[p]) throw ModelError("bad target position");
    in_tgt[p] = 1;
  }

  std::vector<int> dest(l, -1);
  for (size_t i = 0; i < cur.size(); ++i) dest[cur[i]] = tgt[i];
  // complement robots fill the complement cells in order
  std::vector<int> comp_cells;
  for (int p = 0; p < l; ++p)
    if (!in_tgt[p]) comp_cells.push_back(p);
  size_t c = 0;
  for (int p = 0; p < l; ++p)
    if (dest[p] == -1) dest[p] = comp_cells[c++];

  if (moved_out) {
    moved_out->clear();
    for (int p = 0; p < l; ++p)
      if (dest[p] != p) moved_out->push_back(p);
  }
  return permute_on_line(grid, region, dest);
}

Plan exchange_groups_on_line(const GridSpec& grid, const LineRegion& region,
                             const std::vector<int>& group_a,
                             const std::vector<int>& group_b) {
  const int l = region.length();
  if (group_a.size() != group_b.size()) throw ModelError("group size mismatch");
  std::vector<int> a = group_a, b = group_b;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<int> dest(l);
  std::iota(dest.begin(), dest.end(), 0);
  std::vector<char> used(l, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    for (int p : {a[i], b[i]}) {
      if (p < 0 || p >= l || used[p])
        throw ModelError("groups overlap or leave the line");
      used[p] = 1;
    }
    dest[a[i]] = b[i];
    dest[b[i]] = a[i];
  }
  return permute_on_line(grid, region, dest);
}

Plan swap_pair_3x2(const GridSpec& grid, const Region& block, Vertex a,
                   Vertex b) {
  std::vector<int> sides;
  for (int i = 0; i < block.k(); ++i)
    if (block.side(i) > 1) sides.push_back(block.side(i));
  std::sort(sides.begin(), sides.end());
  if (block.volume() != 6 || sides != std::vector<int>{2, 3})
    throw ModelError("block is not 3x2");
  if (!block.contains(grid, a) || !block.contains(grid, b))
    throw ModelError("pair outside the block");
  if (a == b) return {};
  auto verts = block.vertices(grid);
  std::vector<Vertex> target = verts;
  auto idx = [&](Vertex v) {
    return std::lower_bound(verts.begin(), verts.end(), v) - verts.begin();
  };
  std::swap(target[idx(a)], target[idx(b)]);
  return solve_tiny_region(grid, block, verts, target);
}

}  // namespace mpp
