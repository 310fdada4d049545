#pragma once

#include <vector>

#include "mpp/grid.hpp"

namespace mpp {

// A grid-embedded line segment plus the parallel helper segment(s) its swap
// gadgets borrow. The whole footprint must be reserved while a fragment
// built on the region runs.
//
// Gadget flavor depends on geometry:
//   Side  - lines of length >= 3: 3x2 blocks along the line + one helper row
//   Rows3 - length-2 lines with a >=3-wide cross axis: a 2x3 block across
//   Cube  - length-2 lines where every cross axis has width 2: a 2x2x2 block
struct LineRegion {
  enum class Mode { Side, Rows3, Cube };

  Mode mode = Mode::Side;
  // Side: 2 coordinate-consecutive rows, rows[line_row] is the line.
  // Rows3: 3 consecutive rows. Cube: {line, helper, line', helper'} where '
  // is the translate along the second helper axis; line_row == 0.
  std::vector<std::vector<Vertex>> rows;
  int line_row = 0;

  // Picks helper rows automatically (first usable axis, +1 side preferred).
  // Throws when the grid cannot host the gadgets (1-wide grids, or a
  // length-2 line with no usable cross axis).
  static LineRegion make(const GridSpec& grid, std::vector<Vertex> line);
  // Helper row(s) taken from an explicit axis, preferring direction dir.
  static LineRegion make(const GridSpec& grid, std::vector<Vertex> line,
                         int helper_axis, int dir);

  const std::vector<Vertex>& line() const { return rows[line_row]; }
  int length() const { return static_cast<int>(rows[line_row].size()); }
  std::vector<Vertex> footprint() const;
};

// Region-bounded variant: helper rows are taken strictly inside `bound`, so
// fragments built on the result never touch vertices outside it. Throws if
// the bound cannot host the gadgets.
LineRegion make_line_region(const GridSpec& grid, const Region& bound,
                            const std::vector<Vertex>& line);

// Realizes an arbitrary labeled permutation of the robots on the line: the
// robot at line position p ends at line position dest[p]; every robot in
// the footprint that stays put nominally has zero net displacement.
// Odd-even transposition routing; each executed transposition is a block
// gadget, so makespan is O(length) with a small constant.
Plan permute_on_line(const GridSpec& grid, const LineRegion& region,
                     const std::vector<int>& dest);

// Moves the (indistinguishable) group occupying line positions `current`
// onto positions `target`; the complement robots are matched monotonically
// onto the complement positions, helpers end where they started. If
// moved_out is given, it receives the line positions whose occupant was
// assigned a destination different from its start.
Plan rearrange_on_line(const GridSpec& grid, const LineRegion& region,
                       const std::vector<int>& current,
                       const std::vector<int>& target,
                       std::vector<int>* moved_out = nullptr);

// Groups A and B (disjoint position sets, |A| = |B|) trade places: the k-th
// A position's robot goes to the k-th B position and vice versa; everything
// else has zero net displacement.
Plan exchange_groups_on_line(const GridSpec& grid, const LineRegion& region,
                             const std::vector<int>& group_a,
                             const std::vector<int>& group_b);

// Transposes the robots at vertices a and b inside a 3x2 block, leaving the
// other four with zero net displacement. a == b gives an empty plan.
Plan swap_pair_3x2(const GridSpec& grid, const Region& block, Vertex a,
                   Vertex b);

}  // namespace mpp
