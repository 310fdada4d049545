#include "mpp/compose.hpp"

#include <algorithm>

namespace mpp {

Plan zip_plans(std::vector<Plan> fragments) {
  int longest = 0;
  for (const Plan& p : fragments) longest = std::max(longest, p.makespan());
  Plan out;
  out.steps.resize(longest);
  for (Plan& p : fragments)
    for (int s = 0; s < p.makespan(); ++s) {
      Step& dst = out.steps[s];
      Step& src = p.steps[s];
      if (dst.empty()) {
        dst = std::move(src);
        continue;
      }
      for (int c = 0; c < src.cycle_count(); ++c) dst.add_cycle(src.cycle(c));
    }
  // Drop trailing all-empty steps (fragments may contain padding).
  while (!out.steps.empty() && out.steps.back().empty()) out.steps.pop_back();
  return out;
}

std::vector<Vertex> plan_footprint(const Plan& plan) {
  std::vector<Vertex> out;
  for (const Step& s : plan.steps)
    out.insert(out.end(), s.verts.begin(), s.verts.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Plan compose_fragments(const GridSpec& grid, std::vector<Fragment> fragments) {
  // First-fit coloring over the conflict structure, tracked with one
  // vertex -> wave map per pass.
  std::vector<int> wave(fragments.size(), -1);
  std::vector<int32_t> owner(grid.vertex_count, -1);
  int wave_count = 0;
  for (int w = 0;; ++w) {
    bool any_unassigned = false;
    std::fill(owner.begin(), owner.end(), -1);
    for (size_t f = 0; f < fragments.size(); ++f) {
      if (wave[f] != -1) continue;
      bool fits = true;
      for (Vertex v : fragments[f].footprint)
        if (owner[v] != -1) {
          fits = false;
          break;
        }
      if (fits) {
        wave[f] = w;
        wave_count = w + 1;
        for (Vertex v : fragments[f].footprint) owner[v] = static_cast<int32_t>(f);
      } else {
        any_unassigned = true;
      }
    }
    if (!any_unassigned) break;
  }

  Plan out;
  for (int w = 0; w < wave_count; ++w) {
    std::vector<Plan> batch;
    for (size_t f = 0; f < fragments.size(); ++f)
      if (wave[f] == w) batch.push_back(std::move(fragments[f].plan));
    out.append(zip_plans(std::move(batch)));
  }
  return out;
}

}  // namespace mpp
