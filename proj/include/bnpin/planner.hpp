#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bnpin/wiring.hpp"

namespace bnpin {

// One pinned vertex: its update will be replaced so that it depends on
// `pred` alone.  `universe` is the variable scope the controller works
// over, in declaration order:
//   type 1: pred is not read by the node's own update -> update deps + pred
//   type 2: pred is one of the update's deps           -> update deps
//   type 3: constant update                            -> { pred }
// `iota` is the 1-based rank of pred within universe.
struct Pin {
  std::uint32_t node = 0;
  std::uint32_t pred = 0;
  int type = 0;
  std::uint32_t iota = 0;
  std::vector<std::uint32_t> universe;  // state vertex ids
};

struct CostWeights {
  double c1 = 2.0;
  double c2 = 1.0;
  double c3 = 2.0;
};

struct PinningPlan {
  std::vector<Path> paths;  // head-first, trailing mirror ids
  std::vector<Pin> pins;    // ascending node id
  CostWeights weights;

  std::uint32_t count_of_type(int t) const;
  double cost() const;
};

class PlanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Record of how a matching cycle was turned back into path segments:
// either rematching `vertex` to the free right `rematched_to`, or dropping
// `vertex`'s outgoing match entirely (opened).
struct CycleBreak {
  std::vector<std::uint32_t> cycle;
  std::uint32_t vertex = 0;
  bool exchanged = false;
  std::uint32_t rematched_to = 0;
};

struct PathCover {
  std::vector<Path> paths;  // sensor-terminated ones end with the mirror id
  std::uint32_t matching_size = 0;
  std::vector<CycleBreak> cycle_breaks;
};

// Minimum path cover of the state vertices via maximum bipartite matching
// on the split graph (left: states; right: states that read no input, plus
// one mirror per sensor, force-matched to the state it reads).  Self-loops
// are ignored.  Matched cycles are repaired by exchange when some cycle
// vertex has an edge to an unmatched right, otherwise opened at the
// smallest vertex.  Exact minimum on acyclic wiring.
PathCover min_path_cover(const WiringDigraph& g);

// Concatenate a cover's surplus (non-sensor-terminated) chains onto the
// sensor-terminated paths, one merged path per sensor.  Chains headed by an
// input-reading vertex go first in their merged path (one per "open" sensor
// path, i.e. one whose own head reads no input); all remaining chains are
// prepended to the first open sensor path.  Junctions become pins later.
std::vector<Path> merge_paths(const WiringDigraph& g, const PathCover& cover);

// Walk the paths and pin every non-head vertex whose full in-neighbour set
// is not exactly its predecessor; assign types, universes and iota.
PinningPlan categorize(const AugmentedNetwork& aug, const WiringDigraph& g,
                       const std::vector<Path>& paths, const CostWeights& weights = {});

// Backward-chain planner: grow one path per sensor by free extension while
// the head has a unique eligible in-neighbour, pin the head onto the
// in-neighbour with the longest unique chain otherwise, and seed uncovered
// vertices onto the last path with a pinnable head.  Produces no pins iff
// the wiring already decomposes.
PinningPlan plan_greedy(const AugmentedNetwork& aug, const CostWeights& weights = {});

// min_path_cover + merge_paths + categorize.
PinningPlan plan_cover(const AugmentedNetwork& aug, const CostWeights& weights = {});

}  // namespace bnpin
