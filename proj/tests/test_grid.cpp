#include <doctest.h>

#include <random>

#include "mpp/grid.hpp"
#include "mpp/io.hpp"
#include "mpp/small_solver.hpp"
#include "mpp/validate.hpp"

using namespace mpp;

namespace {

Instance identity_instance(std::vector<int> dims) {
  GridSpec g = GridSpec::make(std::move(dims));
  Configuration c;
  c.at.resize(g.vertex_count);
  std::iota(c.at.begin(), c.at.end(), 0);
  return Instance::make(g, c, c);
}

}  // namespace

TEST_CASE("manhattan distance") {
  GridSpec g = GridSpec::make({4, 3});
  CHECK(g.manhattan(g.vertex_at(std::vector<int>{0, 0}),
                    g.vertex_at(std::vector<int>{0, 0})) == 0);
  CHECK(g.manhattan(g.vertex_at(std::vector<int>{0, 0}),
                    g.vertex_at(std::vector<int>{3, 2})) == 5);

  GridSpec h = GridSpec::make({5, 5, 5});
  CHECK(h.manhattan(h.vertex_at(std::vector<int>{1, 2, 3}),
                    h.vertex_at(std::vector<int>{4, 0, 3})) == 5);
}

TEST_CASE("vertex indexing round-trips") {
  GridSpec g = GridSpec::make({3, 4, 2});
  for (Vertex v = 0; v < g.vertex_count; ++v)
    CHECK(g.vertex_at(g.coords_of(v)) == v);
  CHECK(g.vertex_count == 24);
  CHECK(g.axes_by_size == std::vector<int>{1, 0, 2});
}

TEST_CASE("adjacency and neighbors") {
  GridSpec g = GridSpec::make({3, 3});
  Vertex c = g.vertex_at(std::vector<int>{1, 1});
  int neighbors = 0;
  for (Vertex v = 0; v < g.vertex_count; ++v) neighbors += g.adjacent(c, v);
  CHECK(neighbors == 4);
  CHECK(!g.adjacent(c, c));
  CHECK(g.neighbor(c, 0, 1) == g.vertex_at(std::vector<int>{2, 1}));
  CHECK(g.neighbor(g.vertex_at(std::vector<int>{0, 0}), 0, -1) == -1);
}

TEST_CASE("distance gap") {
  SUBCASE("identity is zero") {
    CHECK(identity_instance({4, 4}).distance_gap == 0);
  }
  SUBCASE("boundary ring rotation is one") {
    GridSpec g = GridSpec::make({4, 4});
    // clockwise ring of the outer boundary
    std::vector<Vertex> ring;
    for (int j = 0; j < 4; ++j) ring.push_back(g.vertex_at(std::vector<int>{0, j}));
    for (int i = 1; i < 4; ++i) ring.push_back(g.vertex_at(std::vector<int>{i, 3}));
    for (int j = 2; j >= 0; --j) ring.push_back(g.vertex_at(std::vector<int>{3, j}));
    for (int i = 2; i >= 1; --i) ring.push_back(g.vertex_at(std::vector<int>{i, 0}));
    Configuration start, goal;
    start.at.resize(g.vertex_count);
    std::iota(start.at.begin(), start.at.end(), 0);
    goal = start;
    for (size_t i = 0; i < ring.size(); ++i)
      goal.at[start.occupancy(g.vertex_count)[ring[i]]] =
          ring[(i + 1) % ring.size()];
    Instance inst = Instance::make(g, start, goal);
    CHECK(inst.distance_gap == 1);
  }
  SUBCASE("corner exchange dominates") {
    GridSpec g = GridSpec::make({5, 7});
    Configuration start, goal;
    start.at.resize(g.vertex_count);
    std::iota(start.at.begin(), start.at.end(), 0);
    goal = start;
    Vertex a = g.vertex_at(std::vector<int>{0, 0});
    Vertex b = g.vertex_at(std::vector<int>{4, 6});
    std::swap(goal.at[a], goal.at[b]);
    CHECK(Instance::make(g, start, goal).distance_gap == 5 + 7 - 2);
  }
  SUBCASE("bounded by sum of side lengths") {
    std::mt19937_64 rng(7);
    GridSpec g = GridSpec::make({4, 3, 2});
    Configuration start, goal;
    start.at.resize(g.vertex_count);
    std::iota(start.at.begin(), start.at.end(), 0);
    goal = start;
    for (int trial = 0; trial < 20; ++trial) {
      std::shuffle(goal.at.begin(), goal.at.end(), rng);
      CHECK(Instance::make(g, start, goal).distance_gap <= (4 - 1) + (3 - 1) + (2 - 1));
    }
  }
}

TEST_CASE("apply_step") {
  GridSpec g = GridSpec::make({2, 2});
  Configuration c;
  c.at = {0, 1, 3, 2};  // robot r at vertex c.at[r]

  SUBCASE("empty step is the identity") {
    Configuration d = apply_step(g, c, Step{});
    CHECK(d.at == c.at);
  }
  SUBCASE("4-cycle rotates occupants") {
    Step s;
    s.add_cycle(std::vector<Vertex>{0, 1, 3, 2});
    Configuration d = apply_step(g, c, s);
    CHECK(d.at == std::vector<Vertex>{1, 3, 2, 0});
    CHECK(d.injective(g.vertex_count));
  }
  SUBCASE("2-cycle is rejected") {
    Step s;
    s.add_cycle(std::vector<Vertex>{0, 1});
    CHECK_THROWS_AS(apply_step(g, c, s), ModelError);
  }
  SUBCASE("odd cycle is rejected on a bipartite grid") {
    Step s;
    s.add_cycle(std::vector<Vertex>{0, 1, 3});
    CHECK_THROWS_AS(apply_step(g, c, s), ModelError);
  }
  SUBCASE("overlapping cycles are rejected") {
    Step s;
    s.add_cycle(std::vector<Vertex>{0, 1, 3, 2});
    s.add_cycle(std::vector<Vertex>{0, 2, 3, 1});
    CHECK_THROWS_AS(apply_step(g, c, s), ModelError);
  }
  SUBCASE("cycle through an unoccupied vertex is rejected") {
    Configuration partial;
    partial.at = {0, 1};
    Step s;
    s.add_cycle(std::vector<Vertex>{0, 1, 3, 2});
    CHECK_THROWS_AS(apply_step(g, partial, s), ModelError);
  }
  SUBCASE("random valid rotations preserve injectivity") {
    GridSpec big = GridSpec::make({4, 4});
    Configuration conf;
    conf.at.resize(big.vertex_count);
    std::iota(conf.at.begin(), conf.at.end(), 0);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      // random axis-aligned 2x2 square rotation
      int i = static_cast<int>(rng() % 3), j = static_cast<int>(rng() % 3);
      Vertex a = big.vertex_at(std::vector<int>{i, j});
      Vertex b = big.vertex_at(std::vector<int>{i, j + 1});
      Vertex c2 = big.vertex_at(std::vector<int>{i + 1, j + 1});
      Vertex d = big.vertex_at(std::vector<int>{i + 1, j});
      Step s;
      s.add_cycle(std::vector<Vertex>{a, b, c2, d});
      conf = apply_step(big, conf, s);
      CHECK(conf.injective(big.vertex_count));
    }
  }
}

TEST_CASE("validate_plan") {
  SUBCASE("identity instance, empty plan") {
    auto r = validate_plan(identity_instance({3, 3}), Plan{});
    CHECK(r.ok());
    CHECK(r.makespan == 0);
  }
  SUBCASE("non-identity instance, empty plan reports goal mismatch") {
    GridSpec g = GridSpec::make({2, 2});
    Configuration start{{0, 1, 2, 3}}, goal{{1, 0, 2, 3}};
    auto r = validate_plan(Instance::make(g, start, goal), Plan{});
    REQUIRE(!r.ok());
    CHECK(r.violation->kind == ViolationKind::GoalMismatch);
  }
  SUBCASE("three-step adjacent swap on a 3x2 grid") {
    // Robots on (0,0) and (1,0) exchange; everyone else returns home.
    GridSpec g = GridSpec::make({3, 2});
    auto v = [&](int i, int j) { return g.vertex_at(std::vector<int>{i, j}); };
    Configuration start{{v(0, 0), v(1, 0), v(0, 1), v(1, 1), v(2, 0), v(2, 1)}};
    Configuration goal = start;
    std::swap(goal.at[0], goal.at[1]);
    std::vector<Vertex> target(6);
    std::iota(target.begin(), target.end(), 0);
    std::swap(target[v(0, 0)], target[v(1, 0)]);
    Plan plan = SmallGridSolver::cached({3, 2}).solve(target);
    auto r = validate_plan(Instance::make(g, start, goal), plan);
    CHECK(r.ok());
    CHECK(r.makespan == 3);
  }
  SUBCASE("non-adjacent move is flagged") {
    GridSpec g = GridSpec::make({3, 3});
    Instance inst = identity_instance({3, 3});
    Step s;
    s.add_cycle(std::vector<Vertex>{0, 2, 8, 6});
    Plan p;
    p.steps.push_back(s);
    auto r = validate_plan(inst, p);
    REQUIRE(!r.ok());
    CHECK(r.violation->kind == ViolationKind::NonAdjacentMove);
  }
}

TEST_CASE("virtual robot embedding") {
  SUBCASE("full occupancy is unchanged") {
    Instance inst = identity_instance({2, 2});
    auto e = embed_virtual_robots(inst);
    CHECK(e.real_robot_count == 4);
    CHECK(e.instance.start.at == inst.start.at);
  }
  SUBCASE("single free vertex gets the forced placement") {
    GridSpec g = GridSpec::make({2, 2});
    Configuration start{{0, 1, 2}}, goal{{1, 2, 3}};
    auto e = embed_virtual_robots(Instance::make(g, start, goal));
    CHECK(e.real_robot_count == 3);
    REQUIRE(e.instance.robot_count() == 4);
    CHECK(e.instance.start.at[3] == 3);
    CHECK(e.instance.goal.at[3] == 0);
  }
  SUBCASE("4x3 grid with 10 robots gains two virtual robots") {
    GridSpec g = GridSpec::make({4, 3});
    Configuration start, goal;
    for (int r = 0; r < 10; ++r) {
      start.at.push_back(r);          // vertices 0..9 occupied, 10..11 free
      goal.at.push_back(11 - r);      // vertices 2..11 occupied, 0..1 free
    }
    auto e = embed_virtual_robots(Instance::make(g, start, goal));
    CHECK(e.real_robot_count == 10);
    REQUIRE(e.instance.robot_count() == 12);
    CHECK(e.instance.start.at[10] == 10);
    CHECK(e.instance.start.at[11] == 11);
    CHECK(e.instance.goal.at[10] == 0);
    CHECK(e.instance.goal.at[11] == 1);
    CHECK(e.instance.full_occupancy());
  }
}

TEST_CASE("json round-trips are byte stable") {
  SUBCASE("instance") {
    std::string text = R"({"dims":[3,2],"goal":[5,4,3,2,1,0],"start":[0,1,2,3,4,5]})";
    Instance inst = instance_from_json(text);
    CHECK(instance_to_json(inst) == text);
    CHECK(inst.distance_gap == 3);
  }
  SUBCASE("plan") {
    std::string text = R"({"steps":[[[0,1,3,2]],[[2,3,5,4],[0,1,7,6]],[]]})";
    Plan p = plan_from_json(text);
    CHECK(plan_to_json(p) == text);
    CHECK(p.makespan() == 3);
    CHECK(p.steps[1].cycle_count() == 2);
  }
  SUBCASE("circulation") {
    std::string text = R"({"edges":[[0,1,2],[1,2,2],[2,0,2]],"vertices":3})";
    Circulation c = circulation_from_json(text);
    CHECK(circulation_to_json(c) == text);
    CHECK(c.conserved());
    CHECK(c.max_inflow() == 2);
  }
  SUBCASE("malformed input is rejected") {
    CHECK_THROWS_AS(instance_from_json("{"), ModelError);
    CHECK_THROWS_AS(instance_from_json(R"({"dims":[2,2],"start":[0,0],"goal":[0,1]})"),
                    ModelError);
    CHECK_THROWS_AS(plan_from_json(R"({"steps":42})"), ModelError);
    CHECK_THROWS_AS(circulation_from_json(R"({"vertices":2,"edges":[[0,5,1]]})"),
                    ModelError);
  }
}
