#pragma once

#include <string>

#include "mpp/grid.hpp"

namespace mpp {

// Directed flow network for the circulation tooling. Vertices are
// 0..vertex_count-1; parallel edges are allowed.
struct FlowEdge {
  int32_t from = 0, to = 0;
  int64_t flow = 0;
};

struct Circulation {
  int32_t vertex_count = 0;
  std::vector<FlowEdge> edges;

  int64_t max_inflow() const;
  bool conserved() const;  // in-flow == out-flow at every vertex
};

// Wire formats:
//   instance     {"dims":[...],"start":[...],"goal":[...]}
//   plan         {"steps":[[[v,...],...],...]}
//   circulation  {"vertices":N,"edges":[[u,v,flow],...]}
// Serialization is canonical (sorted keys, compact) so that
// parse -> serialize round-trips byte-for-byte.
std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);

std::string plan_to_json(const Plan& plan);
Plan plan_from_json(const std::string& text);

std::string circulation_to_json(const Circulation& c);
Circulation circulation_from_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace mpp
