#pragma once

#include <optional>
#include <string>

#include "mpp/grid.hpp"

namespace mpp {

enum class ViolationKind {
  NonAdjacentMove,
  VertexCollision,    // overlapping cycles within one step
  SwapMove,           // cycle of length < 3 (or odd length on a grid)
  UnoccupiedVertex,   // cycle through a free vertex under the strict model
  GoalMismatch,
  BadVertex,
};

struct Violation {
  ViolationKind kind;
  int step_index;  // -1 for final-state violations
  std::string detail;
};

struct ValidationResult {
  std::optional<Violation> violation;
  int makespan = 0;

  bool ok() const { return !violation.has_value(); }
};

const char* violation_kind_name(ViolationKind k);

// Checks one step against an occupancy map (vertex -> robot or -1) without
// applying it. strict: every cycle vertex must be occupied.
std::optional<Violation> check_step(const GridSpec& grid, const Step& step,
                                    const std::vector<int32_t>& occ,
                                    bool strict, int step_index);

// Rotates the occupancy map along the step's cycles. Caller must have
// checked the step first.
void apply_step_occ(const Step& step, std::vector<int32_t>& occ);

// Pure variant on a Configuration; throws ModelError on an invalid step.
Configuration apply_step(const GridSpec& grid, const Configuration& config,
                         const Step& step);

// Replays the plan from instance.start. strict requires full cycle occupancy
// (the n = |V| model); the relaxed mode accepts plans projected from a
// virtual-robot embedding, where cycles may rotate through free vertices.
ValidationResult validate_plan(const Instance& instance, const Plan& plan,
                               bool strict = true);

struct EmbeddedInstance {
  Instance instance;       // full occupancy
  int real_robot_count;    // robots [0, real_robot_count) are the originals
};

// Fills the free vertices of start and goal with virtual robots, paired in
// ascending vertex order on both sides.
EmbeddedInstance embed_virtual_robots(const Instance& instance);

}  // namespace mpp
