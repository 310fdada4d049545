#include "mpp/grid.hpp"

#include <algorithm>
#include <cstdlib>

namespace mpp {

GridSpec GridSpec::make(std::vector<int> dims) {
  if (dims.empty()) throw ModelError("grid needs at least one dimension");
  for (int m : dims)
    if (m < 1) throw ModelError("grid side lengths must be >= 1");
  GridSpec g;
  g.dims = std::move(dims);
  g.strides.assign(g.dims.size(), 1);
  for (int i = static_cast<int>(g.dims.size()) - 2; i >= 0; --i)
    g.strides[i] = g.strides[i + 1] * g.dims[i + 1];
  g.vertex_count = g.strides[0] * g.dims[0];
  g.axes_by_size.resize(g.dims.size());
  std::iota(g.axes_by_size.begin(), g.axes_by_size.end(), 0);
  std::stable_sort(g.axes_by_size.begin(), g.axes_by_size.end(),
                   [&](int a, int b) { return g.dims[a] > g.dims[b]; });
  return g;
}

void GridSpec::coords_of(Vertex v, std::span<int> out) const {
  for (int i = 0; i < k(); ++i)
    out[i] = static_cast<int>((v / strides[i]) % dims[i]);
}

std::vector<int> GridSpec::coords_of(Vertex v) const {
  std::vector<int> c(k());
  coords_of(v, c);
  return c;
}

Vertex GridSpec::vertex_at(std::span<const int> coords) const {
  int64_t v = 0;
  for (int i = 0; i < k(); ++i) {
    if (coords[i] < 0 || coords[i] >= dims[i])
      throw ModelError("coordinate out of range");
    v += coords[i] * strides[i];
  }
  return static_cast<Vertex>(v);
}

bool GridSpec::adjacent(Vertex a, Vertex b) const {
  if (a < 0 || b < 0 || a >= vertex_count || b >= vertex_count) return false;
  int diff_axis = -1;
  for (int i = 0; i < k(); ++i) {
    int ca = coord_of(a, i), cb = coord_of(b, i);
    if (ca != cb) {
      if (std::abs(ca - cb) != 1 || diff_axis != -1) return false;
      diff_axis = i;
    }
  }
  return diff_axis != -1;
}

int GridSpec::manhattan(Vertex a, Vertex b) const {
  if (a < 0 || a >= vertex_count || b < 0 || b >= vertex_count)
    throw ModelError("vertex index out of range");
  int d = 0;
  for (int i = 0; i < k(); ++i) d += std::abs(coord_of(a, i) - coord_of(b, i));
  return d;
}

int GridSpec::color(Vertex v) const {
  int s = 0;
  for (int i = 0; i < k(); ++i) s += coord_of(v, i);
  return s & 1;
}

Vertex GridSpec::neighbor(Vertex v, int axis, int dir) const {
  int c = coord_of(v, axis) + dir;
  if (c < 0 || c >= dims[axis]) return -1;
  return static_cast<Vertex>(v + static_cast<int64_t>(dir) * strides[axis]);
}

Region Region::whole(const GridSpec& g) {
  Region r;
  r.lo.assign(g.k(), 0);
  r.hi = g.dims;
  return r;
}

int64_t Region::volume() const {
  int64_t v = 1;
  for (int i = 0; i < k(); ++i) v *= side(i);
  return v;
}

bool Region::contains(const GridSpec& g, Vertex v) const {
  for (int i = 0; i < k(); ++i) {
    int c = g.coord_of(v, i);
    if (c < lo[i] || c >= hi[i]) return false;
  }
  return true;
}

std::vector<Vertex> Region::vertices(const GridSpec& g) const {
  std::vector<Vertex> out;
  out.reserve(volume());
  std::vector<int> c(lo);
  while (true) {
    out.push_back(g.vertex_at(c));
    int axis = k() - 1;
    while (axis >= 0) {
      if (++c[axis] < hi[axis]) break;
      c[axis] = lo[axis];
      --axis;
    }
    if (axis < 0) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Configuration::injective(int64_t vertex_count) const {
  std::vector<char> seen(vertex_count, 0);
  for (Vertex v : at) {
    if (v < 0 || v >= vertex_count) return false;
    if (seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

std::vector<int32_t> Configuration::occupancy(int64_t vertex_count) const {
  std::vector<int32_t> occ(vertex_count, -1);
  for (int r = 0; r < size(); ++r) {
    Vertex v = at[r];
    if (v < 0 || v >= vertex_count) throw ModelError("vertex out of range");
    if (occ[v] != -1) throw ModelError("configuration is not injective");
    occ[v] = r;
  }
  return occ;
}

void Step::add_cycle(std::span<const Vertex> cycle) {
  verts.insert(verts.end(), cycle.begin(), cycle.end());
  offsets.push_back(static_cast<int32_t>(verts.size()));
}

int64_t Plan::move_count() const {
  int64_t n = 0;
  for (const Step& s : steps) n += static_cast<int64_t>(s.verts.size());
  return n;
}

void Plan::append(const Plan& other) {
  steps.insert(steps.end(), other.steps.begin(), other.steps.end());
}

void Plan::append(Plan&& other) {
  for (Step& s : other.steps) steps.push_back(std::move(s));
}

Instance Instance::make(GridSpec grid, Configuration start, Configuration goal) {
  if (start.size() != goal.size())
    throw ModelError("start and goal robot counts differ");
  if (!start.injective(grid.vertex_count) || !goal.injective(grid.vertex_count))
    throw ModelError("configurations must be injective");
  Instance inst{std::move(grid), std::move(start), std::move(goal), 0};
  inst.distance_gap = compute_distance_gap(inst.grid, inst.start, inst.goal);
  return inst;
}

int compute_distance_gap(const GridSpec& grid, const Configuration& start,
                         const Configuration& goal) {
  int dg = 0;
  for (int r = 0; r < start.size(); ++r)
    dg = std::max(dg, grid.manhattan(start[r], goal[r]));
  return dg;
}

}  // namespace mpp
