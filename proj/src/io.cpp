#include "mpp/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mpp {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ModelError("malformed JSON");
  return j;
}

std::vector<Vertex> vertex_list(const json& j, const char* field) {
  if (!j.is_array()) throw ModelError(std::string(field) + " must be an array");
  std::vector<Vertex> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number_integer())
      throw ModelError(std::string(field) + " entries must be integers");
    out.push_back(e.get<Vertex>());
  }
  return out;
}

}  // namespace

int64_t Circulation::max_inflow() const {
  std::vector<int64_t> in(vertex_count, 0);
  for (const FlowEdge& e : edges) in[e.to] += e.flow;
  int64_t best = 0;
  for (int64_t f : in) best = std::max(best, f);
  return best;
}

bool Circulation::conserved() const {
  std::vector<int64_t> net(vertex_count, 0);
  for (const FlowEdge& e : edges) {
    net[e.to] += e.flow;
    net[e.from] -= e.flow;
  }
  for (int64_t f : net)
    if (f != 0) return false;
  return true;
}

std::string instance_to_json(const Instance& inst) {
  json j;
  j["dims"] = inst.grid.dims;
  j["start"] = inst.start.at;
  j["goal"] = inst.goal.at;
  return j.dump();
}

Instance instance_from_json(const std::string& text) {
  json j = parse(text);
  if (!j.is_object() || !j.contains("dims") || !j.contains("start") ||
      !j.contains("goal"))
    throw ModelError("instance needs dims, start, goal");
  std::vector<int> dims;
  for (const auto& e : j["dims"]) {
    if (!e.is_number_integer()) throw ModelError("dims must be integers");
    dims.push_back(e.get<int>());
  }
  GridSpec grid = GridSpec::make(std::move(dims));
  Configuration start{vertex_list(j["start"], "start")};
  Configuration goal{vertex_list(j["goal"], "goal")};
  return Instance::make(std::move(grid), std::move(start), std::move(goal));
}

std::string plan_to_json(const Plan& plan) {
  json steps = json::array();
  for (const Step& s : plan.steps) {
    json step = json::array();
    for (int c = 0; c < s.cycle_count(); ++c) {
      auto cyc = s.cycle(c);
      step.push_back(std::vector<Vertex>(cyc.begin(), cyc.end()));
    }
    steps.push_back(std::move(step));
  }
  json j;
  j["steps"] = std::move(steps);
  return j.dump();
}

Plan plan_from_json(const std::string& text) {
  json j = parse(text);
  if (!j.is_object() || !j.contains("steps") || !j["steps"].is_array())
    throw ModelError("plan needs a steps array");
  Plan plan;
  for (const auto& js : j["steps"]) {
    if (!js.is_array()) throw ModelError("each step must be an array of cycles");
    Step step;
    for (const auto& jc : js) {
      auto cyc = vertex_list(jc, "cycle");
      step.add_cycle(cyc);
    }
    plan.steps.push_back(std::move(step));
  }
  return plan;
}

std::string circulation_to_json(const Circulation& c) {
  json edges = json::array();
  for (const FlowEdge& e : c.edges)
    edges.push_back(json::array({e.from, e.to, e.flow}));
  json j;
  j["edges"] = std::move(edges);
  j["vertices"] = c.vertex_count;
  return j.dump();
}

Circulation circulation_from_json(const std::string& text) {
  json j = parse(text);
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
    throw ModelError("circulation needs vertices and edges");
  Circulation c;
  c.vertex_count = j["vertices"].get<int32_t>();
  if (c.vertex_count < 0) throw ModelError("negative vertex count");
  for (const auto& je : j["edges"]) {
    if (!je.is_array() || je.size() != 3)
      throw ModelError("each edge must be [from,to,flow]");
    FlowEdge e{je[0].get<int32_t>(), je[1].get<int32_t>(), je[2].get<int64_t>()};
    if (e.from < 0 || e.from >= c.vertex_count || e.to < 0 ||
        e.to >= c.vertex_count)
      throw ModelError("edge endpoint out of range");
    if (e.flow < 0) throw ModelError("negative edge flow");
    c.edges.push_back(e);
  }
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelError("cannot write " + path);
  out << text;
}

}  // namespace mpp
