#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpp {

using Vertex = int32_t;

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// k-dimensional grid geometry with row-major linear vertex indexing.
// Axis order is kept as given externally; algorithms that want the
// paper-style m1 >= m2 >= ... ordering iterate axes_by_size.
struct GridSpec {
  std::vector<int> dims;
  std::vector<int64_t> strides;
  int64_t vertex_count = 0;
  std::vector<int> axes_by_size;  // axis ids, longest first (stable)

  static GridSpec make(std::vector<int> dims);

  int k() const { return static_cast<int>(dims.size()); }

  void coords_of(Vertex v, std::span<int> out) const;
  std::vector<int> coords_of(Vertex v) const;
  Vertex vertex_at(std::span<const int> coords) const;

  int coord_of(Vertex v, int axis) const {
    return static_cast<int>((v / strides[axis]) % dims[axis]);
  }

  bool adjacent(Vertex a, Vertex b) const;
  int manhattan(Vertex a, Vertex b) const;

  // Grid graphs are bipartite; color = parity of the coordinate sum.
  int color(Vertex v) const;

  // neighbor in +1/-1 direction along axis, or -1 when off the grid
  Vertex neighbor(Vertex v, int axis, int dir) const;
};

// Axis-aligned sub-box [lo, hi) of a grid.
struct Region {
  std::vector<int> lo, hi;

  static Region whole(const GridSpec& g);

  int k() const { return static_cast<int>(lo.size()); }
  int side(int axis) const { return hi[axis] - lo[axis]; }
  int64_t volume() const;
  bool contains(const GridSpec& g, Vertex v) const;
  std::vector<Vertex> vertices(const GridSpec& g) const;  // ascending order
};

// robot id -> vertex, injective
struct Configuration {
  std::vector<Vertex> at;

  int size() const { return static_cast<int>(at.size()); }
  Vertex operator[](int robot) const { return at[robot]; }
  bool injective(int64_t vertex_count) const;
  // vertex -> robot id (or -1); length vertex_count
  std::vector<int32_t> occupancy(int64_t vertex_count) const;
};

// One synchronous move: a set of vertex-disjoint directed rotation cycles.
// The robot on verts[i] advances to the next vertex of its cycle.
struct Step {
  std::vector<Vertex> verts;
  std::vector<int32_t> offsets{0};  // cycle c = verts[offsets[c], offsets[c+1])

  void add_cycle(std::span<const Vertex> cycle);
  int cycle_count() const { return static_cast<int>(offsets.size()) - 1; }
  std::span<const Vertex> cycle(int c) const {
    return {verts.data() + offsets[c],
            static_cast<size_t>(offsets[c + 1] - offsets[c])};
  }
  bool empty() const { return verts.empty(); }
};

struct Plan {
  std::vector<Step> steps;

  int makespan() const { return static_cast<int>(steps.size()); }
  int64_t move_count() const;
  void append(const Plan& other);
  void append(Plan&& other);
};

struct Instance {
  GridSpec grid;
  Configuration start;
  Configuration goal;
  int distance_gap = 0;

  static Instance make(GridSpec grid, Configuration start, Configuration goal);
  int robot_count() const { return start.size(); }
  bool full_occupancy() const {
    return static_cast<int64_t>(start.size()) == grid.vertex_count;
  }
};

int compute_distance_gap(const GridSpec& grid, const Configuration& start,
                         const Configuration& goal);

}  // namespace mpp
