#include "mpp/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "mpp/small_solver.hpp"

namespace mpp {
namespace {

Configuration identity(const GridSpec& g) {
  Configuration c;
  c.at.resize(g.vertex_count);
  std::iota(c.at.begin(), c.at.end(), 0);
  return c;
}

std::vector<Vertex> random_permutation_goal(const GridSpec& g,
                                            std::mt19937_64& rng) {
  std::vector<Vertex> goal(g.vertex_count);
  std::iota(goal.begin(), goal.end(), 0);
  std::shuffle(goal.begin(), goal.end(), rng);
  return goal;
}

std::vector<Vertex> bounded_gap_goal(const GridSpec& g, int dg,
                                     std::mt19937_64& rng) {
  int64_t max_gap = 0;
  for (int m : g.dims) max_gap += m - 1;
  if (dg < 0 || dg > max_gap)
    throw ModelError("distance gap target exceeds the grid diameter");
  std::vector<Vertex> goal(g.vertex_count);
  std::iota(goal.begin(), goal.end(), 0);
  if (dg == 0) return goal;

  // plant one exchange at exactly the target distance so d_g is tight
  std::vector<int> lo(g.k(), 0), hi(g.k(), 0);
  int left = dg;
  for (int a = 0; a < g.k() && left > 0; ++a) {
    int step = std::min(left, g.dims[a] - 1);
    hi[a] = step;
    left -= step;
  }
  Vertex u = g.vertex_at(lo), v = g.vertex_at(hi);
  std::swap(goal[u], goal[v]);

  // then mix with random local goal swaps that respect the bound; keeping
  // the partner inside the gap ball makes the displaced-robot density
  // independent of the grid size
  int64_t attempts = 20 * g.vertex_count;
  std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(
                                                    g.vertex_count - 1));
  std::uniform_int_distribution<int> off(-dg, dg);
  for (int64_t i = 0; i < attempts; ++i) {
    Vertex a = pick(rng);
    auto c = g.coords_of(a);
    bool in = true;
    for (int ax = 0; ax < g.k(); ++ax) {
      c[ax] += off(rng);
      in &= c[ax] >= 0 && c[ax] < g.dims[ax];
    }
    if (!in) continue;
    Vertex b = g.vertex_at(c);
    if (a == b) continue;
    if (g.manhattan(a, goal[b]) <= dg && g.manhattan(b, goal[a]) <= dg)
      std::swap(goal[a], goal[b]);
  }
  return goal;
}

std::vector<Vertex> ring_rotation_goal(const GridSpec& g) {
  if (g.k() < 2 || g.dims[0] < 2 || g.dims[1] < 2)
    throw ModelError("ring rotation needs two non-unit axes");
  // outer ring of the first two axes, other coordinates 0
  std::vector<std::pair<int, int>> ring;
  int m0 = g.dims[0], m1 = g.dims[1];
  for (int x = 0; x < m0; ++x) ring.push_back({x, 0});
  for (int y = 1; y < m1; ++y) ring.push_back({m0 - 1, y});
  for (int x = m0 - 2; x >= 0; --x) ring.push_back({x, m1 - 1});
  for (int y = m1 - 2; y >= 1; --y) ring.push_back({0, y});
  std::vector<Vertex> goal(g.vertex_count);
  std::iota(goal.begin(), goal.end(), 0);
  std::vector<int> coords(g.k(), 0);
  auto vert = [&](std::pair<int, int> p) {
    coords[0] = p.first;
    coords[1] = p.second;
    return g.vertex_at(coords);
  };
  for (size_t i = 0; i < ring.size(); ++i)
    goal[vert(ring[i])] = vert(ring[(i + 1) % ring.size()]);
  return goal;
}

std::vector<Vertex> disjoint_local_cycles_goal(const GridSpec& g,
                                               std::mt19937_64& rng) {
  if (g.k() < 2 || g.dims[0] < 2 || g.dims[1] < 2)
    throw ModelError("local cycles need two non-unit axes");
  std::vector<Vertex> goal(g.vertex_count);
  std::iota(goal.begin(), goal.end(), 0);
  // anchor cells on a spacing-4 sublattice of the first two axes so that
  // the 3x2 swap gadgets of the d_g = 1 solver never collide
  std::vector<int> coords(g.k(), 0);
  for (int a = 2; a < g.k(); ++a) coords[a] = 0;
  for (int x = 0; x + 2 <= g.dims[0]; x += 4)
    for (int y = 0; y + 2 <= g.dims[1]; y += 4) {
      int what = static_cast<int>(rng() % 3);
      if (what == 0) continue;
      coords[0] = x;
      coords[1] = y;
      Vertex v00 = g.vertex_at(coords);
      coords[1] = y + 1;
      Vertex v01 = g.vertex_at(coords);
      coords[0] = x + 1;
      Vertex v11 = g.vertex_at(coords);
      coords[1] = y;
      Vertex v10 = g.vertex_at(coords);
      if (what == 1) {  // unit-square rotation
        goal[v00] = v10;
        goal[v10] = v11;
        goal[v11] = v01;
        goal[v01] = v00;
      } else {  // adjacent transposition
        goal[v00] = v10;
        goal[v10] = v00;
      }
    }
  return goal;
}

std::vector<Vertex> corner_swap_goal(const GridSpec& g) {
  std::vector<Vertex> goal(g.vertex_count);
  std::iota(goal.begin(), goal.end(), 0);
  Vertex far = static_cast<Vertex>(g.vertex_count - 1);
  std::swap(goal[0], goal[far]);
  return goal;
}

}  // namespace

Instance generate(const InstanceFamily& family) {
  GridSpec g = GridSpec::make(family.dims);
  std::mt19937_64 rng(family.seed);
  std::vector<Vertex> goal;
  switch (family.kind) {
    case FamilyKind::RandomPermutation:
      goal = random_permutation_goal(g, rng);
      break;
    case FamilyKind::BoundedGap:
      goal = bounded_gap_goal(g, family.dg_target, rng);
      break;
    case FamilyKind::RingRotation:
      goal = ring_rotation_goal(g);
      break;
    case FamilyKind::DisjointLocalCycles:
      goal = disjoint_local_cycles_goal(g, rng);
      break;
    case FamilyKind::CornerSwap:
      goal = corner_swap_goal(g);
      break;
  }
  Configuration start = identity(g);
  Configuration gc;
  gc.at = std::move(goal);
  return Instance::make(std::move(g), std::move(start), std::move(gc));
}

FamilyKind family_kind_from_name(const std::string& name) {
  if (name == "random-permutation") return FamilyKind::RandomPermutation;
  if (name == "bounded-dg") return FamilyKind::BoundedGap;
  if (name == "ring-rotation") return FamilyKind::RingRotation;
  if (name == "disjoint-local-cycles") return FamilyKind::DisjointLocalCycles;
  if (name == "corner-swap") return FamilyKind::CornerSwap;
  throw ModelError("unknown instance family: " + name);
}

OracleResult bfs_optimal_makespan(const Instance& instance) {
  if (instance.grid.vertex_count > 9)
    throw ModelError("exhaustive search is limited to grids of 9 vertices");
  if (!instance.full_occupancy())
    throw ModelError("exhaustive search needs full occupancy");
  const SmallGridSolver& solver = SmallGridSolver::cached(instance.grid.dims);
  // displacement form: target[v] = goal of the robot standing on v
  std::vector<Vertex> target(instance.grid.vertex_count);
  for (int r = 0; r < instance.robot_count(); ++r)
    target[instance.start[r]] = instance.goal[r];
  OracleResult out;
  out.plan = solver.solve(target);
  out.makespan = out.plan.makespan();
  return out;
}

}  // namespace mpp
