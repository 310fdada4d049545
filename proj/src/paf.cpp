#include "mpp/paf.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <utility>

#include "mpp/compose.hpp"
#include "mpp/isag.hpp"
#include "mpp/line_ops.hpp"
#include "mpp/maxflow.hpp"
#include "mpp/shuffle.hpp"
#include "mpp/small_solver.hpp"
#include "mpp/validate.hpp"

namespace mpp {
namespace {

void check_apply(const GridSpec& g, const Step& s, std::vector<int32_t>& occ) {
  if (auto v = check_step(g, s, occ, true, 0))
    throw ModelError("internal: invalid step produced: " + v->detail);
  apply_step_occ(s, occ);
}

void check_apply_plan(const GridSpec& g, const Plan& p,
                      std::vector<int32_t>& occ) {
  for (const Step& s : p.steps) check_apply(g, s, occ);
}

// ---------------------------------------------------------------------------
// distance gap <= 1 fast path

// 3x2 block (any orientation) containing the adjacent pair a, b
Region gadget_block(const GridSpec& g, Vertex a, Vertex b) {
  auto ca = g.coords_of(a), cb = g.coords_of(b);
  int ax = -1;
  for (int i = 0; i < g.k(); ++i)
    if (ca[i] != cb[i]) ax = i;
  if (ax < 0 || std::abs(ca[ax] - cb[ax]) != 1 || g.manhattan(a, b) != 1)
    throw ModelError("swap gadget needs an adjacent pair");
  Region r;
  r.lo.assign(g.k(), 0);
  r.hi.assign(g.k(), 0);
  for (int i = 0; i < g.k(); ++i) {
    r.lo[i] = ca[i];
    r.hi[i] = ca[i] + 1;
  }
  int lo = std::min(ca[ax], cb[ax]);
  auto span_axis = [&](int axis, int len, int around) {
    int start = std::clamp(around - 1, 0, g.dims[axis] - len);
    r.lo[axis] = start;
    r.hi[axis] = start + len;
  };
  if (g.dims[ax] >= 3) {
    // length 3 along the pair axis, width 2 along any other wide axis
    int start = std::min(lo, g.dims[ax] - 3);
    r.lo[ax] = start;
    r.hi[ax] = start + 3;
    int helper = -1;
    for (int i = 0; i < g.k(); ++i)
      if (i != ax && g.dims[i] >= 2) helper = i;
    if (helper < 0) throw ModelError("swap gadget needs a second wide axis");
    span_axis(helper, 2, ca[helper]);
  } else {
    // pair axis only 2 wide: take length 3 across some other axis
    r.lo[ax] = 0;
    r.hi[ax] = 2;
    int helper = -1;
    for (int i = 0; i < g.k(); ++i)
      if (i != ax && g.dims[i] >= 3) helper = i;
    if (helper < 0) throw ModelError("swap gadget needs a 3x2 sub-block");
    span_axis(helper, 3, ca[helper]);
  }
  if (!r.contains(g, a) || !r.contains(g, b))
    throw ModelError("internal: gadget block misses its pair");
  return r;
}

Plan solve_dg1_full(const Instance& inst) {
  const GridSpec& g = inst.grid;
  std::vector<Vertex> target(g.vertex_count);
  for (int r = 0; r < inst.robot_count(); ++r)
    target[inst.start[r]] = inst.goal[r];
  std::vector<char> done(g.vertex_count, 0);
  std::vector<Fragment> gadgets;
  Step rotation;
  for (Vertex v = 0; v < g.vertex_count; ++v) {
    if (done[v]) continue;
    done[v] = 1;
    if (target[v] == v) continue;
    std::vector<Vertex> cyc{v};
    for (Vertex u = target[v]; u != v; u = target[u]) {
      done[u] = 1;
      cyc.push_back(u);
    }
    if (cyc.size() == 2) {
      Region block = gadget_block(g, cyc[0], cyc[1]);
      Plan p = swap_pair_3x2(g, block, cyc[0], cyc[1]);
      gadgets.push_back({std::move(p), block.vertices(g)});
    } else {
      for (size_t i = 0; i < cyc.size(); ++i)
        if (!g.adjacent(cyc[i], cyc[(i + 1) % cyc.size()]))
          throw ModelError("displacement cycle is not a grid cycle");
      rotation.add_cycle(cyc);
    }
  }
  // transposition gadgets first (bystanders keep zero net displacement),
  // then all longer cycles rotate together in one synchronous step
  Plan plan = compose_fragments(g, std::move(gadgets));
  if (!rotation.empty()) plan.steps.push_back(rotation);
  return plan;
}

// ---------------------------------------------------------------------------
// slab special case (the gap is of the order of the second-longest side)

Plan solve_special_full(const Instance& inst) {
  const GridSpec& g = inst.grid;
  const int dg = inst.distance_gap;
  if (dg == 0) return {};
  const int axisL = g.axes_by_size[0];
  const int m1 = g.dims[axisL];
  const int q = m1 / dg;
  if (q < 2) throw ModelError("slab case needs the longest side >= 2*d_g");
  std::vector<int> cuts(q + 1);
  for (int j = 0; j <= q; ++j)
    cuts[j] = static_cast<int>(int64_t(m1) * j / q);
  auto slab_of = [&](Vertex v) {
    int c = g.coord_of(v, axisL);
    return static_cast<int>(std::upper_bound(cuts.begin(), cuts.end(), c) -
                            cuts.begin()) -
           1;
  };
  std::vector<int32_t> occ = inst.start.occupancy(g.vertex_count);
  const std::vector<Vertex>& goal = inst.goal.at;
  for (Vertex v = 0; v < g.vertex_count; ++v)
    if (std::abs(slab_of(v) - slab_of(goal[occ[v]])) > 1)
      throw ModelError("internal: slab width fell below the gap");

  std::vector<int32_t> local(g.vertex_count, -1);
  Plan plan;
  // round 0 pairs slabs (0,1),(2,3),...; round 1 pairs (1,2),(3,4),...
  // after round 0 every robot's goal slab is inside its round-1 pair
  for (int round = 0; round < 2; ++round) {
    std::vector<Plan> parts;
    for (int j = round; j + 2 <= q; j += 2) {
      Region reg = Region::whole(g);
      reg.lo[axisL] = cuts[j];
      reg.hi[axisL] = cuts[j + 2];
      auto verts = reg.vertices(g);
      for (size_t i = 0; i < verts.size(); ++i)
        local[verts[i]] = static_cast<int32_t>(i);
      std::vector<Vertex> target(verts.size(), -1);
      if (round == 1) {
        for (size_t i = 0; i < verts.size(); ++i) {
          Vertex gv = goal[occ[verts[i]]];
          if (!reg.contains(g, gv))
            throw ModelError("internal: residual crosser after slab round");
          target[i] = gv;
        }
      } else {
        // goals inside the pair are met; everyone else keeps its slab so
        // the second round still reaches it (crossing counts across every
        // cut are symmetric, so the leftover slots match up)
        std::vector<char> used(verts.size(), 0);
        for (size_t i = 0; i < verts.size(); ++i) {
          Vertex gv = goal[occ[verts[i]]];
          if (reg.contains(g, gv)) {
            target[i] = gv;
            used[local[gv]] = 1;
          }
        }
        for (int s = j; s < j + 2; ++s) {
          std::vector<size_t> movers, slots;
          for (size_t i = 0; i < verts.size(); ++i) {
            if (slab_of(verts[i]) != s) continue;
            if (target[i] < 0) movers.push_back(i);
            if (!used[i]) slots.push_back(i);
          }
          if (movers.size() != slots.size())
            throw ModelError("internal: slab crossing counts out of balance");
          for (size_t i = 0; i < movers.size(); ++i)
            target[movers[i]] = verts[slots[i]];
        }
      }
      parts.push_back(isag_solve_region(g, reg, verts, target));
      for (Vertex v : verts) local[v] = -1;
    }
    Plan round_plan = zip_plans(std::move(parts));
    check_apply_plan(g, round_plan, occ);
    plan.append(std::move(round_plan));
  }
  for (Vertex v = 0; v < g.vertex_count; ++v)
    if (goal[occ[v]] != v)
      throw ModelError("internal: slab rounds left robots misplaced");
  return plan;
}

// ---------------------------------------------------------------------------
// cell partition + batch routing

// cells of side >= factor*dg on every axis long enough; short axes stay a
// single cell (the skeleton is flat along them). Cell counts are powers of
// two so doubling the grid reproduces the same cell geometry.
CellPartition build_cells(const GridSpec& g, int dg, int factor) {
  CellPartition p;
  p.grid = g;
  p.dg = dg;
  p.cuts.resize(g.k());
  std::vector<int> qs(g.k());
  for (int a = 0; a < g.k(); ++a) {
    int q = 1;
    while (g.dims[a] / (2 * q) >= factor * dg) q *= 2;
    qs[a] = q;
    p.cuts[a].resize(q + 1);
    for (int j = 0; j <= q; ++j)
      p.cuts[a][j] = static_cast<int>(int64_t(g.dims[a]) * j / q);
  }
  p.skeleton = GridSpec::make(qs);
  return p;
}

struct CellGeom {
  Region cell, rr;  // rr: centered routing region, side min(3*dg, s)
};

CellGeom make_cell_geom(const CellPartition& part, int32_t cell) {
  CellGeom cg;
  cg.cell = part.cell_region(cell);
  cg.rr = cg.cell;
  for (int a = 0; a < cg.cell.k(); ++a) {
    int s = cg.cell.side(a);
    int len = std::min(3 * part.dg, s);
    cg.rr.lo[a] = cg.cell.lo[a] + (s - len) / 2;
    cg.rr.hi[a] = cg.rr.lo[a] + len;
  }
  return cg;
}

using BKey = std::pair<int32_t, int32_t>;  // directed skeleton edge

// crossing lanes: centered min(dg, s) window per orthogonal axis (which is
// exactly the middle third of the routing region on long axes)
struct BoundaryGeom {
  int axis = -1, dir = 0;  // to = from + dir along axis
  std::vector<int> lane_axes, lane_lo, lane_len, lane_stride;
  int64_t capacity = 1;
};

BoundaryGeom boundary_geom(const CellPartition& part, BKey key) {
  const GridSpec& sk = part.skeleton;
  BoundaryGeom b;
  for (int a = 0; a < sk.k(); ++a) {
    int d = sk.coord_of(key.second, a) - sk.coord_of(key.first, a);
    if (d == 0) continue;
    if (b.axis != -1 || std::abs(d) != 1)
      throw ModelError("internal: circulation edge is not a skeleton edge");
    b.axis = a;
    b.dir = d;
  }
  if (b.axis == -1) throw ModelError("internal: degenerate skeleton edge");
  Region reg = part.cell_region(key.first);
  for (int a = 0; a < sk.k(); ++a) {
    if (a == b.axis) continue;
    int s = reg.side(a);
    int len = std::min(part.dg, s);
    // spread the lanes every other coordinate when the routing window is
    // wide enough: non-adjacent lane columns keep the queue-staging line
    // gadgets (which borrow a neighboring column) footprint-disjoint, so
    // all lanes of a face are staged in one wave instead of serializing
    int stride = 2 * len - 1 <= std::min(3 * part.dg, s) ? 2 : 1;
    int span = stride * (len - 1) + 1;
    b.lane_axes.push_back(a);
    b.lane_lo.push_back(reg.lo[a] + (s - span) / 2);
    b.lane_len.push_back(len);
    b.lane_stride.push_back(stride);
    b.capacity *= len;
  }
  return b;
}

std::vector<int> lane_coords(const BoundaryGeom& b, int64_t lane) {
  std::vector<int> c(b.lane_axes.size());
  for (int i = static_cast<int>(b.lane_axes.size()) - 1; i >= 0; --i) {
    c[i] = b.lane_lo[i] +
           b.lane_stride[i] * static_cast<int>(lane % b.lane_len[i]);
    lane /= b.lane_len[i];
  }
  return c;
}

// vertex on the face (axis, side) of the routing region at the lane coords
Vertex port_vertex(const GridSpec& g, const CellGeom& cg,
                   const BoundaryGeom& b, int side,
                   const std::vector<int>& lanes) {
  std::vector<int> c(g.k(), 0);
  for (size_t i = 0; i < b.lane_axes.size(); ++i) c[b.lane_axes[i]] = lanes[i];
  c[b.axis] = side > 0 ? cg.rr.hi[b.axis] - 1 : cg.rr.lo[b.axis];
  return g.vertex_at(c);
}

// straight run between the routing region and the cell face (axis, side),
// ordered from the routing region outward to the cell boundary
std::vector<Vertex> arm_vertices(const GridSpec& g, const CellGeom& cg,
                                 const BoundaryGeom& b, int side,
                                 const std::vector<int>& lanes) {
  std::vector<int> c(g.k(), 0);
  for (size_t i = 0; i < b.lane_axes.size(); ++i) c[b.lane_axes[i]] = lanes[i];
  std::vector<Vertex> out;
  if (side > 0)
    for (int x = cg.rr.hi[b.axis]; x < cg.cell.hi[b.axis]; ++x) {
      c[b.axis] = x;
      out.push_back(g.vertex_at(c));
    }
  else
    for (int x = cg.rr.lo[b.axis] - 1; x >= cg.cell.lo[b.axis]; --x) {
      c[b.axis] = x;
      out.push_back(g.vertex_at(c));
    }
  return out;
}

struct Token {
  BKey key;      // boundary crossed
  int64_t lane;  // lane within the boundary
};

// one synchronous step carrying every unit circulation of the batch: each
// grid cycle threads entry runs, a disjoint path through each routing
// region, and the queue run whose front robot then crosses the boundary
Step build_batch_step(const GridSpec& g, const CellPartition& part,
                      const std::vector<const UnitCirculation*>& batch,
                      std::map<int32_t, CellGeom>& geoms,
                      std::map<BKey, BoundaryGeom>& bgeoms,
                      const std::vector<int32_t>& occ,
                      const std::vector<Vertex>& goal_of) {
  auto geom = [&](int32_t cell) -> const CellGeom& {
    auto it = geoms.find(cell);
    if (it == geoms.end())
      it = geoms.emplace(cell, make_cell_geom(part, cell)).first;
    return it->second;
  };
  auto bgeom = [&](BKey key) -> const BoundaryGeom& {
    auto it = bgeoms.find(key);
    if (it == bgeoms.end())
      it = bgeoms.emplace(key, boundary_geom(part, key)).first;
    return it->second;
  };

  // both directions over one physical face share its lane grid: the
  // ascending-key direction counts lanes from the bottom, the other from
  // the top, so they never collide while the combined load fits
  std::vector<Token> tokens;
  std::map<BKey, int64_t> lane_ctr;
  std::map<int32_t, std::vector<std::pair<int, int>>> visits;  // in, out token
  for (const UnitCirculation* unit : batch)
    for (const auto& cyc : unit->cycles) {
      const int L = static_cast<int>(cyc.size());
      std::vector<int> ids(L);
      for (int t = 0; t < L; ++t) {
        BKey key{cyc[t], cyc[(t + 1) % L]};
        BKey rev{key.second, key.first};
        int64_t raw = lane_ctr[key]++;
        int64_t cap = bgeom(key).capacity;
        auto it = lane_ctr.find(rev);
        if (raw + 1 + (it == lane_ctr.end() ? 0 : it->second) > cap)
          throw ModelError("internal: batch exceeds boundary lane capacity");
        int64_t lane = key.first < key.second ? raw : cap - 1 - raw;
        ids[t] = static_cast<int>(tokens.size());
        tokens.push_back({key, lane});
      }
      for (int t = 0; t < L; ++t)
        visits[cyc[t]].push_back({ids[(t + L - 1) % L], ids[t]});
    }

  // disjoint in-port -> out-port paths per routing region; the flow's own
  // pairing decides which entry continues to which exit (any pairing closes
  // into disjoint cycles, and any designated robot serves any crossing)
  std::vector<int> succ(tokens.size(), -1);
  std::vector<std::vector<Vertex>> path_of(tokens.size());
  for (auto& [cell, vs] : visits) {
    const CellGeom& cg = geom(cell);
    std::vector<Vertex> srcs, snks;
    std::map<Vertex, int> by_src, by_snk;
    for (auto& [tin, tout] : vs) {
      const BoundaryGeom& bi = bgeom(tokens[tin].key);
      Vertex pin =
          port_vertex(g, cg, bi, -bi.dir, lane_coords(bi, tokens[tin].lane));
      const BoundaryGeom& bo = bgeom(tokens[tout].key);
      Vertex pout =
          port_vertex(g, cg, bo, bo.dir, lane_coords(bo, tokens[tout].lane));
      srcs.push_back(pin);
      snks.push_back(pout);
      by_src[pin] = tin;
      by_snk[pout] = tout;
    }
    DisjointPathSet res = find_disjoint_paths_maxflow(g, cg.rr, srcs, snks);
    if (res.value != static_cast<int>(srcs.size()))
      throw ModelError("internal: routing region under-saturated");
    for (auto& path : res.paths) {
      int tin = by_src.at(path.front());
      succ[tin] = by_snk.at(path.back());
      path_of[tin] = std::move(path);
    }
  }

  Step step;
  std::vector<char> seen(tokens.size(), 0);
  for (int t0 = 0; t0 < static_cast<int>(tokens.size()); ++t0) {
    if (seen[t0]) continue;
    std::vector<Vertex> cyc;
    int t = t0;
    do {
      seen[t] = 1;
      const int32_t cell = tokens[t].key.second;
      const CellGeom& cg = geom(cell);
      const BoundaryGeom& bi = bgeom(tokens[t].key);
      auto entry =
          arm_vertices(g, cg, bi, -bi.dir, lane_coords(bi, tokens[t].lane));
      cyc.insert(cyc.end(), entry.rbegin(), entry.rend());
      cyc.insert(cyc.end(), path_of[t].begin(), path_of[t].end());
      int tn = succ[t];
      const BoundaryGeom& bo = bgeom(tokens[tn].key);
      auto queue =
          arm_vertices(g, cg, bo, bo.dir, lane_coords(bo, tokens[tn].lane));
      cyc.insert(cyc.end(), queue.begin(), queue.end());
      Vertex crossing = queue.empty() ? path_of[t].back() : queue.back();
      if (part.cell_of(goal_of[occ[crossing]]) != tokens[tn].key.second)
        throw ModelError("internal: queue front is not a designated crosser");
      t = tn;
    } while (t != t0);
    step.add_cycle(cyc);
  }
  return step;
}

// `d` identical rotation steps of the 2-wide ring formed by `rail` and the
// parallel `helper` row: the robot at rail.front() travels to rail.back()
// in rail.size()-1 steps while every other ring robot shifts along; inside
// a cell that shifting is harmless, so a robot moves at one step per grid
// cell instead of paying the line-gadget constant of a shuffle
Plan band_rotate(const std::vector<Vertex>& rail,
                 const std::vector<Vertex>& helper) {
  std::vector<Vertex> ring(rail);
  ring.insert(ring.end(), helper.rbegin(), helper.rend());
  Step s;
  s.add_cycle(ring);
  Plan p;
  for (size_t t = 0; t + 1 < rail.size(); ++t) p.steps.push_back(s);
  return p;
}

struct FaceLoad {
  BKey key;
  std::vector<Vertex> slots;
};

// Stage one cell's designated crossers onto their queue slots with band
// rotations. Slots are filled front (boundary) first, so the approach along
// a lane from the cell interior never crosses an occupied slot; occupied
// slots elsewhere are dodged via the corridor choice. Compatible rotations
// are zipped into waves. Returns nullopt (occ untouched by contract of the
// caller, which restores it) when no safe corridor exists.
std::optional<Plan> stage_by_rotation(const GridSpec& g,
                                      const CellPartition& part,
                                      const Region& creg,
                                      const std::vector<FaceLoad>& fls,
                                      std::vector<int32_t>& occ,
                                      const std::vector<Vertex>& goal_of,
                                      std::vector<char>& staged) {
  const int k = g.k();
  std::vector<char> filled(g.vertex_count, 0);
  std::vector<char> stg = staged;

  // route one robot: to the corridor depth, across the lateral axes, then
  // down its lane; each segment is a band rotation whose ring must avoid
  // occupied slots
  auto route = [&](Vertex v, Vertex slot, int fa)
      -> std::optional<std::pair<Plan, std::vector<Vertex>>> {
    if (v == slot)
      return std::make_pair(Plan{}, std::vector<Vertex>{slot});
    auto vc = g.coords_of(v), sc = g.coords_of(slot);
    int lo = creg.lo[fa], hi = creg.hi[fa];
    int mid = (lo + hi) / 2;
    std::vector<int> corridors;
    for (int off = 0; off <= (hi - lo) / 2; ++off) {
      if (mid + off < hi - 1) corridors.push_back(mid + off);
      if (off && mid - off > lo) corridors.push_back(mid - off);
    }
    for (int wfree : corridors) {
      std::vector<std::array<int, 3>> segs;  // axis, from, to
      std::vector<int> cur = vc;
      auto add = [&](int axis, int to) {
        if (cur[axis] != to) segs.push_back({axis, cur[axis], to});
        cur[axis] = to;
      };
      add(fa, wfree);
      for (int a = 0; a < k; ++a)
        if (a != fa) add(a, sc[a]);
      add(fa, sc[fa]);

      Plan p;
      std::vector<Vertex> cells;
      std::vector<int> pos = vc;
      bool ok = true;
      for (auto [axis, from, to] : segs) {
        int dir = to > from ? 1 : -1;
        std::vector<Vertex> rail;
        std::vector<int> c = pos;
        bool bad = false;
        for (int x = from;; x += dir) {
          c[axis] = x;
          Vertex w = g.vertex_at(c);
          bad = bad || filled[w];
          rail.push_back(w);
          if (x == to) break;
        }
        bool done = false;
        for (int h = 0; h < k && !done && !bad; ++h) {
          if (h == axis) continue;
          for (int sgn : {1, -1}) {
            int hc = pos[h] + sgn;
            if (hc < creg.lo[h] || hc >= creg.hi[h]) continue;
            std::vector<Vertex> helper;
            bool hbad = false;
            c = pos;
            c[h] = hc;
            for (int x = from;; x += dir) {
              c[axis] = x;
              Vertex w = g.vertex_at(c);
              hbad = hbad || filled[w];
              helper.push_back(w);
              if (x == to) break;
            }
            if (hbad) continue;
            p.append(band_rotate(rail, helper));
            cells.insert(cells.end(), rail.begin(), rail.end());
            cells.insert(cells.end(), helper.begin(), helper.end());
            done = true;
            break;
          }
        }
        if (!done) {
          ok = false;
          break;
        }
        pos[axis] = to;
      }
      if (ok) return std::make_pair(std::move(p), std::move(cells));
    }
    return std::nullopt;
  };

  Plan cellplan;
  std::vector<Plan> wave;
  std::vector<char> wave_fp(g.vertex_count, 0);
  auto flush = [&] {
    if (wave.empty()) return;
    cellplan.append(zip_plans(std::move(wave)));
    wave.clear();
    std::fill(wave_fp.begin(), wave_fp.end(), 0);
  };
  for (const FaceLoad& fl : fls) {
    int fa = boundary_geom(part, fl.key).axis;
    for (Vertex slot : fl.slots) {
      Vertex best = -1;
      int64_t bestd = 0;
      for (Vertex v : creg.vertices(g)) {
        if (stg[occ[v]] || part.cell_of(goal_of[occ[v]]) != fl.key.second)
          continue;
        int64_t d = g.manhattan(v, slot);
        if (best < 0 || d < bestd) {
          best = v;
          bestd = d;
        }
      }
      if (best < 0)
        throw ModelError("internal: not enough crossers for the demand");
      auto built = route(best, slot, fa);
      if (!built) return std::nullopt;
      auto& [p, cells] = *built;
      bool overlap = false;
      for (Vertex c : cells) overlap = overlap || wave_fp[c];
      if (overlap) flush();
      for (Vertex c : cells) wave_fp[c] = 1;
      check_apply_plan(g, p, occ);
      wave.push_back(std::move(p));
      stg[occ[slot]] = 1;
      filled[slot] = 1;
    }
  }
  flush();
  staged = std::move(stg);
  return cellplan;
}

}  // namespace

int64_t batch_capacity(const CellPartition& part) {
  const GridSpec& sk = part.skeleton;
  int64_t cap = std::numeric_limits<int64_t>::max();
  for (int a = 0; a < sk.k(); ++a) {
    if (sk.dims[a] < 2) continue;
    int64_t c = 1;
    for (int b = 0; b < sk.k(); ++b) {
      if (b == a) continue;
      int mn = std::numeric_limits<int>::max();
      for (size_t i = 0; i + 1 < part.cuts[b].size(); ++i)
        mn = std::min(mn, part.cuts[b][i + 1] - part.cuts[b][i]);
      c *= std::min(part.dg, mn);
    }
    cap = std::min(cap, c);
  }
  if (cap == std::numeric_limits<int64_t>::max()) return 1;
  return std::max<int64_t>(cap, 1);
}

Plan route_multibatch(const GridSpec& g, const CellPartition& part,
                      const std::vector<UnitCirculation>& units,
                      std::vector<int32_t>& occ,
                      const std::vector<Vertex>& goal_of) {
  if (units.empty()) return {};
  const int dg = part.dg;

  std::map<int32_t, CellGeom> geoms;
  std::map<BKey, BoundaryGeom> bgeoms;
  auto geom = [&](int32_t cell) -> const CellGeom& {
    auto it = geoms.find(cell);
    if (it == geoms.end())
      it = geoms.emplace(cell, make_cell_geom(part, cell)).first;
    return it->second;
  };
  auto bg_of = [&](BKey key) -> const BoundaryGeom& {
    auto it = bgeoms.find(key);
    if (it == bgeoms.end())
      it = bgeoms.emplace(key, boundary_geom(part, key)).first;
    return it->second;
  };

  // pack units greedily. Lanes are split statically per face: one
  // direction counts from the bottom, the other from the top, and the
  // split must hold across every batch of the multibatch (a queue lane
  // stacked for a later batch must never double as an earlier batch's
  // entry lane), so the peak loads of the two directions must fit the
  // lane grid together
  std::vector<std::vector<const UnitCirculation*>> batches;
  std::map<BKey, int64_t> peak, cur;  // directed key -> lanes used
  for (const UnitCirculation& u : units) {
    std::map<BKey, int64_t> add;
    for (const auto& cyc : u.cycles)
      for (size_t t = 0; t < cyc.size(); ++t)
        ++add[{cyc[t], cyc[(t + 1) % cyc.size()]}];
    bool fits = !batches.empty();
    for (auto& [key, n] : add) {
      BKey rev{key.second, key.first};
      int64_t fwd = std::max(peak[key], cur[key] + n);
      int64_t bwd = std::max(peak[rev], cur[rev] + (add.count(rev) ? add[rev] : 0));
      fits = fits && fwd + bwd <= bg_of(key).capacity;
    }
    if (!fits) {
      for (auto& [key, n] : cur) peak[key] = std::max(peak[key], n);
      cur.clear();
      batches.emplace_back();
    }
    batches.back().push_back(&u);
    for (auto& [key, n] : add) cur[key] += n;
  }
  if (static_cast<int>(batches.size()) > dg)
    throw ModelError("too many unit circulations for one multibatch");

  // per-boundary per-batch crossing demand
  std::map<BKey, std::vector<int64_t>> demand;
  for (size_t j = 0; j < batches.size(); ++j)
    for (const UnitCirculation* unit : batches[j])
      for (const auto& cyc : unit->cycles)
        for (size_t t = 0; t < cyc.size(); ++t) {
          auto& d = demand[{cyc[t], cyc[(t + 1) % cyc.size()]}];
          d.resize(batches.size(), 0);
          ++d[j];
        }

  // staging: stack the designated crossers of lane i of each boundary in
  // its queue run, front to back in batch order; each executed batch then
  // advances the queue by one, keeping later crossers on the front slots
  std::map<int32_t, std::vector<FaceLoad>> faces;  // out cell -> its faces
  for (auto& [key, d] : demand) {
    const BoundaryGeom bg = boundary_geom(part, key);
    const CellGeom& cg = geom(key.first);
    FaceLoad fl{key, {}};
    int64_t max_d = *std::max_element(d.begin(), d.end());
    for (int64_t raw = 0; raw < max_d; ++raw) {
      int64_t lane = key.first < key.second ? raw : bg.capacity - 1 - raw;
      auto queue = arm_vertices(g, cg, bg, bg.dir, lane_coords(bg, lane));
      size_t pos = 0;  // 0 = front = last queue vertex
      for (size_t j = 0; j < d.size(); ++j) {
        if (d[j] <= raw) continue;
        if (pos >= queue.size())
          throw ModelError("internal: queue run shorter than its batch load");
        fl.slots.push_back(queue[queue.size() - 1 - pos++]);
      }
    }
    faces[key.first].push_back(std::move(fl));
  }

  std::vector<char> staged(g.vertex_count, 0);  // robot already on a slot
  std::vector<Plan> staging;
  for (auto& [cell, fls] : faces) {
    Region creg = part.cell_region(cell);

    // try marching each crosser to its slot with band rotations (one step
    // per grid cell travelled, but per-robot when corridors collide);
    // bystander scrambling inside the cell is harmless at this stage
    std::vector<int32_t> occ_save = occ;
    std::vector<char> staged_save = staged;
    auto rot = stage_by_rotation(g, part, creg, fls, occ, goal_of, staged);
    std::vector<int32_t> occ_rot;
    std::vector<char> staged_rot;
    if (rot) {
      occ_rot = std::move(occ);
      staged_rot = std::move(staged);
    }
    occ = std::move(occ_save);
    staged = std::move(staged_save);

    // also build the one multi-group shuffle per cell (cost flat in robot
    // count): each face's designated crossers form a group sent to that
    // face's queue slots, and the groups never trade members, so every
    // face is staged at once with no ordering hazards between overlapping
    // face regions
    MultiGroupTask task;
    task.region = creg;
    for (auto& fl : fls) {
      std::vector<Vertex> sources;
      for (Vertex v : creg.vertices(g)) {
        if (sources.size() == fl.slots.size()) break;
        if (!staged[occ[v]] && part.cell_of(goal_of[occ[v]]) == fl.key.second) {
          sources.push_back(v);
          staged[occ[v]] = 1;
        }
      }
      if (sources.size() < fl.slots.size())
        throw ModelError("internal: not enough crossers for the demand");
      task.sources.push_back(std::move(sources));
      task.targets.push_back(fl.slots);
    }
    Plan p = shuffle_groups(g, task);
    if (rot && rot->steps.size() < p.steps.size()) {
      occ = std::move(occ_rot);
      staged = std::move(staged_rot);
      p = std::move(*rot);
    } else {
      check_apply_plan(g, p, occ);
    }
    staging.push_back(std::move(p));
  }
  // cell plans touch disjoint cells, so they interleave into one schedule;
  // occ already reflects them (each fragment was applied as it was built)
  Plan plan = zip_plans(std::move(staging));

  for (auto& batch : batches) {
    Step s = build_batch_step(g, part, batch, geoms, bgeoms, occ, goal_of);
    if (s.empty()) continue;
    check_apply(g, s, occ);
    plan.steps.push_back(std::move(s));
  }
  return plan;
}

namespace {

Plan pipeline(const Instance& inst, int factor) {
  const GridSpec& g = inst.grid;
  const int dg = inst.distance_gap;
  CellPartition part = build_cells(g, dg, factor);
  std::vector<int32_t> occ = inst.start.occupancy(g.vertex_count);
  const std::vector<Vertex>& goal_of = inst.goal.at;

  Plan plan = diagonal_reroute(g, part, occ, goal_of);
  plan.append(flow_cancellation(g, part, occ, goal_of));
  Circulation c = extract_circulation(g, part, occ, goal_of);
  const int64_t f = c.max_inflow();
  std::vector<UnitCirculation> units = decompose_circulation(c, f);

  // a unit can take two lanes of one face (a two-cell loop), so half the
  // lane capacity per batch is always packable
  const int64_t per_mb = std::max<int64_t>(1, batch_capacity(part) / 2) * dg;
  for (size_t i = 0; i < units.size(); i += per_mb) {
    size_t e = std::min(units.size(), i + per_mb);
    std::vector<UnitCirculation> chunk(units.begin() + i, units.begin() + e);
    plan.append(route_multibatch(g, part, chunk, occ, goal_of));
  }

  for (Vertex v = 0; v < g.vertex_count; ++v)
    if (part.cell_of(v) != part.cell_of(goal_of[occ[v]]))
      throw ModelError("internal: residual cell crossers after routing");

  std::vector<Plan> finals;
  for (int32_t cell = 0; cell < part.cell_count(); ++cell) {
    Region reg = part.cell_region(cell);
    auto verts = reg.vertices(g);
    std::vector<Vertex> target(verts.size());
    bool identity = true;
    for (size_t i = 0; i < verts.size(); ++i) {
      target[i] = goal_of[occ[verts[i]]];
      identity &= target[i] == verts[i];
    }
    if (!identity) finals.push_back(isag_solve_region(g, reg, verts, target));
  }
  Plan last = zip_plans(std::move(finals));
  check_apply_plan(g, last, occ);
  plan.append(std::move(last));
  for (Vertex v = 0; v < g.vertex_count; ++v)
    if (goal_of[occ[v]] != v)
      throw ModelError("internal: pipeline left robots misplaced");
  return plan;
}

int wide_axes(const GridSpec& g) {
  int n = 0;
  for (int d : g.dims) n += d >= 2;
  return n;
}

}  // namespace

Plan solve_dg1(const Instance& instance) {
  EmbeddedInstance emb = embed_virtual_robots(instance);
  if (emb.instance.distance_gap > 1)
    throw ModelError("fast path needs distance gap <= 1 (after embedding)");
  return solve_dg1_full(emb.instance);
}

Plan solve_special(const Instance& instance) {
  return solve_special_full(embed_virtual_robots(instance).instance);
}

Plan paf_solve(const Instance& instance) {
  EmbeddedInstance emb = embed_virtual_robots(instance);
  const Instance& inst = emb.instance;
  const GridSpec& g = inst.grid;
  const int dg = inst.distance_gap;
  if (dg == 0) return {};
  if (g.vertex_count <= 9) {
    Region whole = Region::whole(g);
    auto verts = whole.vertices(g);
    std::vector<int32_t> occ = inst.start.occupancy(g.vertex_count);
    std::vector<Vertex> target(verts.size());
    for (size_t i = 0; i < verts.size(); ++i)
      target[i] = inst.goal[occ[verts[i]]];
    return solve_tiny_region(g, whole, verts, target);
  }
  if (wide_axes(g) < 2)
    throw ModelError("non-trivial instances on a path are unsolvable");
  if (dg <= 1) return solve_dg1_full(inst);
  const int factor = g.k() <= 2 ? 5 : 9;
  const int m1 = g.dims[g.axes_by_size[0]];
  const int m2 = g.dims[g.axes_by_size[1]];
  if (int64_t(factor) * dg > m1) return isag_solve(inst);
  if (int64_t(factor) * dg > m2) return solve_special_full(inst);
  return pipeline(inst, factor);
}

}  // namespace mpp
