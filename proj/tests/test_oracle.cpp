#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "mpp/oracle.hpp"
#include "mpp/validate.hpp"

using namespace mpp;

TEST_CASE("generators are deterministic per seed") {
  InstanceFamily f{FamilyKind::RandomPermutation, {6, 5}, 0, 42};
  Instance a = generate(f), b = generate(f);
  CHECK(a.goal.at == b.goal.at);
  f.seed = 43;
  CHECK(generate(f).goal.at != a.goal.at);
}

TEST_CASE("bounded-gap instances hit the target gap exactly") {
  for (int dg : {1, 2, 4, 8})
    for (uint64_t seed : {1u, 2u, 3u}) {
      InstanceFamily f{FamilyKind::BoundedGap, {20, 20}, dg, seed};
      Instance inst = generate(f);
      CHECK(inst.distance_gap == dg);
    }
  InstanceFamily f3{FamilyKind::BoundedGap, {9, 9, 9}, 3, 7};
  CHECK(generate(f3).distance_gap == 3);
}

TEST_CASE("bounded-gap rejects impossible targets") {
  InstanceFamily f{FamilyKind::BoundedGap, {4, 4}, 7, 0};
  CHECK_THROWS_AS(generate(f), ModelError);
}

TEST_CASE("ring rotation is one big cycle with unit gap") {
  InstanceFamily f{FamilyKind::RingRotation, {10, 10}, 0, 0};
  Instance inst = generate(f);
  CHECK(inst.distance_gap == 1);
  int moved = 0;
  for (int r = 0; r < inst.robot_count(); ++r)
    moved += inst.goal[r] != inst.start[r];
  CHECK(moved == 36);  // the outer ring of a 10x10 grid
}

TEST_CASE("disjoint local cycles have unit gap") {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    InstanceFamily f{FamilyKind::DisjointLocalCycles, {12, 12}, 0, seed};
    Instance inst = generate(f);
    CHECK(inst.distance_gap <= 1);
  }
}

TEST_CASE("corner swap realizes the maximal gap") {
  InstanceFamily f{FamilyKind::CornerSwap, {7, 5}, 0, 0};
  CHECK(generate(f).distance_gap == 6 + 4);
}

TEST_CASE("exhaustive solver: identity, adjacent transposition, refusal") {
  GridSpec g = GridSpec::make({3, 2});
  Configuration start;
  start.at.resize(6);
  std::iota(start.at.begin(), start.at.end(), 0);

  Instance ident = Instance::make(g, start, start);
  CHECK(bfs_optimal_makespan(ident).makespan == 0);

  // swapping two robots adjacent along the long axis takes exactly three
  // synchronous moves, and no two-step plan exists
  Configuration goal = start;
  REQUIRE(g.adjacent(0, 2));  // neighbors along the length-3 axis
  std::swap(goal.at[0], goal.at[2]);
  Instance swap2 = Instance::make(g, start, goal);
  OracleResult r = bfs_optimal_makespan(swap2);
  CHECK(r.makespan == 3);
  CHECK(validate_plan(swap2, r.plan).ok());

  InstanceFamily big{FamilyKind::RandomPermutation, {5, 2}, 0, 0};
  CHECK_THROWS_AS(bfs_optimal_makespan(generate(big)), ModelError);
}

TEST_CASE("optimal makespans are symmetric under inversion") {
  // the move set is closed under reversal, so solving a permutation and
  // solving its inverse (the backward search) must agree
  GridSpec g = GridSpec::make({3, 2});
  Configuration start;
  start.at.resize(6);
  std::iota(start.at.begin(), start.at.end(), 0);
  Configuration goal = start;
  do {
    Instance fwd = Instance::make(g, start, goal);
    Configuration inv;
    inv.at.resize(6);
    for (int r = 0; r < 6; ++r) inv.at[goal.at[r]] = r;
    Instance bwd = Instance::make(g, start, inv);
    int mf = bfs_optimal_makespan(fwd).makespan;
    int mb = bfs_optimal_makespan(bwd).makespan;
    CHECK(mf == mb);
    CHECK(mf >= fwd.distance_gap);
  } while (std::next_permutation(goal.at.begin(), goal.at.end()));
}

TEST_CASE("family names parse") {
  CHECK(family_kind_from_name("bounded-dg") == FamilyKind::BoundedGap);
  CHECK_THROWS_AS(family_kind_from_name("nope"), ModelError);
}
