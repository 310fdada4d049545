#pragma once

#include <cstdint>
#include <vector>

#include "mpp/grid.hpp"  // ModelError

namespace mpp {

// Bipartite multigraph; parallel edges are multiplicity counters so that a
// matching can name exactly which edge entry it consumes.
struct BipartiteMultigraph {
  struct Edge {
    int32_t left = 0, right = 0;
    int64_t mult = 1;
  };

  int32_t left_count = 0, right_count = 0;
  std::vector<Edge> edges;

  void add_edge(int32_t l, int32_t r, int64_t mult = 1);
  int64_t degree_left(int32_t l) const;
  int64_t degree_right(int32_t r) const;
  bool is_regular(int64_t d) const;
};

struct MatchPair {
  int32_t left = 0, right = 0;
  int32_t edge = 0;  // index into edges
};

struct Matching {
  std::vector<MatchPair> pairs;  // each left/right index at most once
};

// Perfect matching on a d-regular balanced multigraph (Hall guarantees
// existence). Deterministic: augmenting search scans edges in ascending
// index order. Throws on non-regular or unbalanced input.
Matching extract_perfect_matching(const BipartiteMultigraph& g);

// Splits a d-regular balanced multigraph into exactly d perfect matchings
// whose disjoint union is the edge multiset.
std::vector<Matching> decompose_regular(const BipartiteMultigraph& g);

}  // namespace mpp
