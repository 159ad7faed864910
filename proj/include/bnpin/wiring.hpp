#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bnpin/network.hpp"

namespace bnpin {

enum class VertexKind { State, OutputMirror, Input };

// Dependency digraph of a network: one vertex per state variable (virtual
// ones included after augmentation), one mirror vertex per sensor, one
// vertex per external input.  Edges follow functional dependencies,
// u -> v when v's update reads u; mirror vertices carry the single edge
// from the state their sensor reads.
struct WiringDigraph {
  struct Vertex {
    std::string name;
    VertexKind kind;
    bool directly_observable;  // state vertices only
  };

  std::vector<Vertex> vertices;  // states, then mirrors, then inputs
  std::vector<std::vector<std::uint32_t>> in_neighbors;   // sorted, full sets
  std::vector<std::vector<std::uint32_t>> out_neighbors;  // sorted

  std::uint32_t n_state = 0;
  std::uint32_t n_output = 0;
  std::uint32_t n_input = 0;

  bool is_state(std::uint32_t v) const { return v < n_state; }
  bool is_mirror(std::uint32_t v) const { return v >= n_state && v < n_state + n_output; }
  std::uint32_t mirror_of(std::uint32_t output) const { return n_state + output; }

  // Whether a state's update reads any external input.
  bool reads_input(std::uint32_t v) const;
};

// A path is a head-to-tail vertex sequence; when it reaches a sensor the
// trailing element is the mirror vertex id.
using Path = std::vector<std::uint32_t>;

enum class AugmentMode { Auto, Collapse, Generic };

// Preprocessing step that makes every sensor a direct read of a distinct
// state variable.  When each sensor already reads a single state (identity
// or negation) and the read states are pairwise distinct, the network is
// kept as is and those states are marked directly observable ("collapse").
// Otherwise each sensor Y_j = g_j(...) gets a virtual state with update
// g_j and the sensor is rewired to read it ("generic", always applicable;
// observability is unaffected).  Auto picks collapse whenever eligible.
struct AugmentedNetwork {
  BooleanNetwork net;
  bool collapsed = false;
  std::uint32_t n_base = 0;                  // original state count
  std::vector<std::uint32_t> sensed_state;   // per output: the read state id
};

AugmentedNetwork augment(const BooleanNetwork& bn, AugmentMode mode = AugmentMode::Auto);

WiringDigraph build_wiring(const AugmentedNetwork& aug);

// An observed path: its terminal is directly observable, nothing else on it
// is, and every vertex after the head has the preceding vertex as its only
// in-neighbor (inputs included in that check).  A trailing mirror fed by
// the terminal is accepted and ignored for the vertex checks.
bool is_observed_path(const WiringDigraph& g, const Path& path);

// Partition of the state vertices into vertex-disjoint observed paths, one
// per sensor (walked in output declaration order, each backward along
// unique-in-neighbor chains).  Paths are returned head first with the
// trailing mirror id attached.  Empty when no such partition is found this
// way.
std::optional<std::vector<Path>> decompose_into_observed_paths(const WiringDigraph& g);

// State vertices that witness a failure of the structural necessary
// condition: a non-directly-observable vertex some other vertex must
// depend on exclusively, but none does.  Ascending vertex ids.
std::vector<std::uint32_t> check_p1(const WiringDigraph& g);

struct DotOverlay {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> highlight_edges;
  std::vector<std::pair<std::uint32_t, std::string>> vertex_notes;
};

std::string to_dot(const WiringDigraph& g, const DotOverlay* overlay = nullptr);

}  // namespace bnpin
