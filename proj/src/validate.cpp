#include "mpp/validate.hpp"

#include <algorithm>

namespace mpp {

const char* violation_kind_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::NonAdjacentMove: return "non-adjacent-move";
    case ViolationKind::VertexCollision: return "vertex-collision";
    case ViolationKind::SwapMove: return "swap";
    case ViolationKind::UnoccupiedVertex: return "unoccupied-vertex";
    case ViolationKind::GoalMismatch: return "goal-mismatch";
    case ViolationKind::BadVertex: return "bad-vertex";
  }
  return "unknown";
}

std::optional<Violation> check_step(const GridSpec& grid, const Step& step,
                                    const std::vector<int32_t>& occ,
                                    bool strict, int step_index) {
  // Cycle disjointness is checked with a scratch mark set kept local so the
  // validator stays pure.
  std::vector<Vertex> touched;
  touched.reserve(step.verts.size());
  static thread_local std::vector<char> mark;
  if (static_cast<int64_t>(mark.size()) < grid.vertex_count)
    mark.assign(grid.vertex_count, 0);

  auto fail = [&](ViolationKind kind, std::string detail) {
    for (Vertex v : touched) mark[v] = 0;
    return std::optional<Violation>(Violation{kind, step_index, std::move(detail)});
  };

  for (int c = 0; c < step.cycle_count(); ++c) {
    auto cyc = step.cycle(c);
    int len = static_cast<int>(cyc.size());
    if (len < 3 || (len & 1))
      return fail(ViolationKind::SwapMove,
                  "cycle of length " + std::to_string(len));
    for (int i = 0; i < len; ++i) {
      Vertex v = cyc[i];
      if (v < 0 || v >= grid.vertex_count)
        return fail(ViolationKind::BadVertex, std::to_string(v));
      if (mark[v])
        return fail(ViolationKind::VertexCollision,
                    "vertex " + std::to_string(v) + " on two cycles");
      mark[v] = 1;
      touched.push_back(v);
      if (strict && occ[v] < 0)
        return fail(ViolationKind::UnoccupiedVertex, std::to_string(v));
      Vertex w = cyc[(i + 1) % len];
      if (!grid.adjacent(v, w))
        return fail(ViolationKind::NonAdjacentMove,
                    std::to_string(v) + " -> " + std::to_string(w));
    }
  }
  for (Vertex v : touched) mark[v] = 0;
  return std::nullopt;
}

void apply_step_occ(const Step& step, std::vector<int32_t>& occ) {
  for (int c = 0; c < step.cycle_count(); ++c) {
    auto cyc = step.cycle(c);
    int len = static_cast<int>(cyc.size());
    int32_t carry = occ[cyc[len - 1]];
    for (int i = len - 1; i > 0; --i) occ[cyc[i]] = occ[cyc[i - 1]];
    occ[cyc[0]] = carry;
  }
}

Configuration apply_step(const GridSpec& grid, const Configuration& config,
                         const Step& step) {
  auto occ = config.occupancy(grid.vertex_count);
  if (auto v = check_step(grid, step, occ, /*strict=*/true, 0))
    throw ModelError(std::string("invalid step: ") +
                     violation_kind_name(v->kind) + " (" + v->detail + ")");
  apply_step_occ(step, occ);
  Configuration out = config;
  for (Vertex v = 0; v < grid.vertex_count; ++v)
    if (occ[v] >= 0) out.at[occ[v]] = v;
  return out;
}

ValidationResult validate_plan(const Instance& instance, const Plan& plan,
                               bool strict) {
  const GridSpec& grid = instance.grid;
  auto occ = instance.start.occupancy(grid.vertex_count);
  for (int s = 0; s < plan.makespan(); ++s) {
    if (auto v = check_step(grid, plan.steps[s], occ, strict, s))
      return {v, plan.makespan()};
    apply_step_occ(plan.steps[s], occ);
  }
  for (int r = 0; r < instance.goal.size(); ++r) {
    if (occ[instance.goal[r]] != r)
      return {Violation{ViolationKind::GoalMismatch, -1,
                        "robot " + std::to_string(r)},
              plan.makespan()};
  }
  return {std::nullopt, plan.makespan()};
}

EmbeddedInstance embed_virtual_robots(const Instance& instance) {
  const int64_t n = instance.grid.vertex_count;
  if (instance.full_occupancy()) return {instance, instance.robot_count()};
  Configuration start = instance.start, goal = instance.goal;
  std::vector<char> used_start(n, 0), used_goal(n, 0);
  for (Vertex v : start.at) used_start[v] = 1;
  for (Vertex v : goal.at) used_goal[v] = 1;
  Vertex gs = 0;
  for (Vertex vs = 0; vs < n; ++vs) {
    if (used_start[vs]) continue;
    while (used_goal[gs]) ++gs;
    start.at.push_back(vs);
    goal.at.push_back(gs);
    ++gs;
  }
  return {Instance::make(instance.grid, std::move(start), std::move(goal)),
          instance.robot_count()};
}

}  // namespace mpp
