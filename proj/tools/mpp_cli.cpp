// Command-line surface: generate instances, solve them, validate plans,
// decompose circulations, and run benchmark manifests.
//
// Exit codes: 0 success, 2 invalid input, 3 internal invariant violation,
// 4 refusal (request outside a tool's supported range).

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mpp/flow.hpp"
#include "mpp/io.hpp"
#include "mpp/isag.hpp"
#include "mpp/oracle.hpp"
#include "mpp/paf.hpp"
#include "mpp/validate.hpp"

using namespace mpp;
using nlohmann::json;

namespace {

constexpr int kExitBadInput = 2;
constexpr int kExitInternal = 3;
constexpr int kExitRefusal = 4;

struct CliError : std::runtime_error {
  int code;
  CliError(int code, const std::string& what)
      : std::runtime_error(what), code(code) {}
};

[[noreturn]] void fail(int code, const std::string& message) {
  throw CliError(code, message);
}

std::string dims_text(const std::vector<int>& dims) {
  std::string s;
  for (size_t i = 0; i < dims.size(); ++i) {
    if (i) s += 'x';
    s += std::to_string(dims[i]);
  }
  return s;
}

InstanceFamily family_from_json(const json& j) {
  InstanceFamily fam;
  if (!j.is_object() || !j.contains("family") || !j.contains("dims"))
    fail(kExitBadInput, "family spec needs family and dims");
  fam.kind = family_kind_from_name(j["family"].get<std::string>());
  for (const auto& d : j["dims"]) fam.dims.push_back(d.get<int>());
  if (j.contains("dg")) fam.dg_target = j["dg"].get<int>();
  if (j.contains("seed")) fam.seed = j["seed"].get<uint64_t>();
  return fam;
}

// solve with the named solver, embedding virtual robots when the instance
// is not fully occupied; the emitted plan validates strictly against the
// embedded instance and relaxed against the original
Plan run_solver(const std::string& solver, const Instance& inst) {
  Instance full = inst;
  if (!inst.full_occupancy()) full = embed_virtual_robots(inst).instance;
  Plan plan;
  if (solver == "isag") {
    plan = isag_solve(full);
  } else if (solver == "paf") {
    plan = paf_solve(full);
  } else if (solver == "dg1") {
    plan = solve_dg1(full);
  } else if (solver == "oracle") {
    if (inst.grid.vertex_count > 9)
      fail(kExitRefusal, "oracle refuses grids with more than 9 vertices");
    plan = bfs_optimal_makespan(full).plan;
  } else {
    fail(kExitBadInput, "unknown solver: " + solver);
  }
  auto strict = validate_plan(full, plan);
  if (!strict.ok())
    fail(kExitInternal, std::string("solver emitted an invalid plan: ") +
                            violation_kind_name(strict.violation->kind));
  if (!inst.full_occupancy() && !validate_plan(inst, plan, false).ok())
    fail(kExitInternal, "embedded plan does not solve the original instance");
  return plan;
}

int cmd_generate(const std::string& manifest, const std::string& family,
                 const std::vector<int>& dims, int dg, uint64_t seed,
                 const std::string& out) {
  InstanceFamily fam;
  if (!manifest.empty()) {
    fam = family_from_json(json::parse(read_file(manifest), nullptr, false));
  } else {
    fam.kind = family_kind_from_name(family);
    fam.dims = dims;
    fam.dg_target = dg;
    fam.seed = seed;
  }
  if (fam.dims.empty()) fail(kExitBadInput, "generate needs grid dimensions");
  Instance inst = generate(fam);
  std::string text = instance_to_json(inst);
  if (out.empty())
    std::cout << text << "\n";
  else
    write_file(out, text);
  json line;
  line["dg"] = compute_distance_gap(inst.grid, inst.start, inst.goal);
  line["robots"] = inst.robot_count();
  line["vertices"] = inst.grid.vertex_count;
  std::cerr << line.dump() << "\n";
  return 0;
}

int cmd_solve(const std::string& in, const std::string& solver,
              const std::string& out) {
  Instance inst = instance_from_json(read_file(in));
  Plan plan = run_solver(solver, inst);
  if (!out.empty()) write_file(out, plan_to_json(plan));
  int dg = compute_distance_gap(inst.grid, inst.start, inst.goal);
  json line;
  line["dg"] = dg;
  line["makespan"] = plan.makespan();
  line["ratio"] = double(plan.makespan()) / std::max(dg, 1);
  std::cout << line.dump() << "\n";
  return 0;
}

int cmd_validate(const std::string& in, const std::string& plan_file,
                 bool relaxed) {
  Instance inst = instance_from_json(read_file(in));
  Plan plan = plan_from_json(read_file(plan_file));
  auto res = validate_plan(inst, plan, !relaxed);
  json line;
  line["ok"] = res.ok();
  if (res.ok()) {
    line["makespan"] = res.makespan;
  } else {
    json v;
    v["kind"] = violation_kind_name(res.violation->kind);
    v["step"] = res.violation->step_index;
    v["detail"] = res.violation->detail;
    line["violation"] = std::move(v);
  }
  std::cout << line.dump() << "\n";
  return res.ok() ? 0 : kExitBadInput;
}

int cmd_decompose(const std::string& in, const std::string& out) {
  Circulation c = circulation_from_json(read_file(in));
  if (!c.conserved())
    fail(kExitBadInput, "circulation is not flow-conserving");
  int64_t f = c.max_inflow();
  auto units = decompose_circulation(c, f);

  // audit: per-edge flow sums of the units must reproduce the input
  std::map<std::pair<int32_t, int32_t>, int64_t> want, got;
  for (const FlowEdge& e : c.edges) want[{e.from, e.to}] += e.flow;
  json junits = json::array();
  for (const UnitCirculation& u : units) {
    json jcycles = json::array();
    for (const auto& cyc : u.cycles) {
      for (size_t i = 0; i < cyc.size(); ++i)
        ++got[{cyc[i], cyc[(i + 1) % cyc.size()]}];
      jcycles.push_back(cyc);
    }
    junits.push_back(std::move(jcycles));
  }
  json line;
  line["flow_sum_equal"] = want == got;
  line["max_inflow"] = f;
  line["units"] = std::move(junits);
  std::string text = line.dump();
  if (out.empty())
    std::cout << text << "\n";
  else
    write_file(out, text);
  if (want != got) fail(kExitInternal, "unit flow sums do not match the input");
  return 0;
}

struct BenchRow {
  InstanceFamily fam;
  std::string family_name, solver;
  // filled by the run
  bool failed = false;
  std::string error;
  int dg = 0, makespan = 0;
  int64_t vertices = 0, micros = 0;
};

int cmd_bench(const std::string& manifest, const std::string& out,
              int threads) {
  json m = json::parse(read_file(manifest), nullptr, false);
  if (m.is_discarded() || !m.is_object())
    fail(kExitBadInput, "malformed bench manifest");

  // cross product: families x dims x seeds x solvers, in manifest order
  std::vector<BenchRow> rows;
  for (const auto& jf : m.value("families", json::array()))
    for (const auto& jd : m.value("dims", json::array()))
      for (const auto& js : m.value("seeds", json::array()))
        for (const auto& js2 : m.value("solvers", json::array())) {
          BenchRow r;
          r.family_name = jf.contains("family")
                              ? jf["family"].get<std::string>()
                              : jf.get<std::string>();
          r.fam.kind = family_kind_from_name(r.family_name);
          if (jf.is_object() && jf.contains("dg"))
            r.fam.dg_target = jf["dg"].get<int>();
          for (const auto& d : jd) r.fam.dims.push_back(d.get<int>());
          r.fam.seed = js.get<uint64_t>();
          r.solver = js2.get<std::string>();
          rows.push_back(std::move(r));
        }

  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i; (i = next.fetch_add(1)) < rows.size();) {
      BenchRow& r = rows[i];
      try {
        Instance inst = generate(r.fam);
        r.vertices = inst.grid.vertex_count;
        r.dg = compute_distance_gap(inst.grid, inst.start, inst.goal);
        auto t0 = std::chrono::steady_clock::now();
        Plan plan = run_solver(r.solver, inst);
        auto t1 = std::chrono::steady_clock::now();
        r.makespan = plan.makespan();
        r.micros =
            std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0)
                .count();
      } catch (const std::exception& e) {
        r.failed = true;
        r.error = e.what();
      }
    }
  };
  threads = std::max(1, threads);
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ostringstream csv;
  csv << "kind,dims,seed,solver,dg,makespan,ratio,vertices,micros\n";
  for (const BenchRow& r : rows) {
    csv << r.family_name << "," << dims_text(r.fam.dims) << "," << r.fam.seed
        << "," << r.solver << ",";
    if (r.failed) {
      csv << ",,,,\n";
      csv << "# error " << r.family_name << " " << dims_text(r.fam.dims)
          << " seed=" << r.fam.seed << " " << r.solver << ": " << r.error
          << "\n";
      continue;
    }
    csv << r.dg << "," << r.makespan << ","
        << double(r.makespan) / std::max(r.dg, 1) << "," << r.vertices << ","
        << r.micros << "\n";
  }

  // footer: least-squares slope of log(micros) vs log(vertices) per solver
  std::map<std::string, std::vector<std::pair<double, double>>> pts;
  for (const BenchRow& r : rows)
    if (!r.failed && r.micros > 0)
      pts[r.solver].push_back(
          {std::log(double(r.vertices)), std::log(double(r.micros))});
  for (auto& [solver, xy] : pts) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : xy) sx += x, sy += y, sxx += x * x, sxy += x * y;
    double n = double(xy.size());
    double den = n * sxx - sx * sx;
    if (den <= 1e-9) continue;  // a single size: no slope
    csv << "# slope " << solver << " " << (n * sxy - sx * sy) / den << "\n";
  }

  if (out.empty())
    std::cout << csv.str();
  else
    write_file(out, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grid multi-robot motion planning toolkit"};
  app.require_subcommand(1);

  std::string manifest, family = "random-permutation", in, out, plan_file;
  std::string solver = "isag";
  std::vector<int> dims;
  int dg = 0;
  uint64_t seed = 0;
  bool relaxed = false;
  int threads = 1;
  if (const char* env = std::getenv("MPP_THREADS")) threads = std::atoi(env);

  auto* g = app.add_subcommand("generate", "generate a seeded instance");
  g->add_option("--manifest", manifest, "JSON family spec (overrides flags)");
  g->add_option("--family", family,
                "random-permutation | bounded-dg | ring-rotation | "
                "disjoint-local-cycles | corner-swap");
  g->add_option("--dims", dims, "grid side lengths");
  g->add_option("--dg", dg, "distance-gap target (bounded-dg)");
  g->add_option("--seed", seed, "generator seed");
  g->add_option("-o,--output", out, "instance file (default stdout)");

  auto* s = app.add_subcommand("solve", "solve an instance file");
  s->add_option("-i,--input", in, "instance JSON")->required();
  s->add_option("--solver", solver, "isag | paf | dg1 | oracle");
  s->add_option("-o,--output", out, "plan file");

  auto* v = app.add_subcommand("validate", "replay a plan against an instance");
  v->add_option("-i,--input", in, "instance JSON")->required();
  v->add_option("-p,--plan", plan_file, "plan JSON")->required();
  v->add_flag("--relaxed", relaxed, "allow cycles through free vertices");

  auto* d = app.add_subcommand("decompose",
                               "split a circulation into unit circulations");
  d->add_option("-i,--input", in, "circulation JSON")->required();
  d->add_option("-o,--output", out, "output file (default stdout)");

  auto* b = app.add_subcommand("bench", "run a benchmark manifest to CSV");
  b->add_option("--manifest", manifest, "JSON manifest")->required();
  b->add_option("-o,--output", out, "CSV file (default stdout)");
  b->add_option("--threads", threads, "parallel rows");

  CLI11_PARSE(app, argc, argv);

  try {
    if (g->parsed()) return cmd_generate(manifest, family, dims, dg, seed, out);
    if (s->parsed()) return cmd_solve(in, solver, out);
    if (v->parsed()) return cmd_validate(in, plan_file, relaxed);
    if (d->parsed()) return cmd_decompose(in, out);
    if (b->parsed()) return cmd_bench(manifest, out, threads);
  } catch (const CliError& e) {
    json err;
    err["error"] = e.what();
    std::cout << err.dump() << "\n";
    return e.code;
  } catch (const std::exception& e) {
    json err;
    err["error"] = e.what();
    std::cout << err.dump() << "\n";
    // model errors from parsing are bad input; anything flagged internal
    // by the library is an invariant violation
    return std::string(e.what()).rfind("internal:", 0) == 0 ? kExitInternal
                                                            : kExitBadInput;
  }
  return 0;
}
