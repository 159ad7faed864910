#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bnpin/network.hpp"

namespace bnpin {

// Exhaustive transition system of a network under fixed input values.
// State s in [0, 2^n) packs node i into bit i (declaration order,
// little-endian, 1 = TRUE); output labels pack sensor j into bit j.
struct StateSpace {
  std::uint32_t n = 0;
  std::uint32_t p = 0;
  std::vector<std::uint32_t> successor;
  std::vector<std::uint32_t> output_label;
};

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleOptions {
  std::uint32_t cap = 22;  // refuse networks with more state variables
  // Input pinning for the run; inputs not listed default to FALSE.
  std::vector<std::pair<std::string, bool>> input_values;
  unsigned threads = 0;  // 0 = hardware concurrency
};

// Rough peak memory for enumerating and refining a 2^n state space.
std::uint64_t state_space_bytes(std::uint32_t n);

StateSpace enumerate_state_space(const BooleanNetwork& bn, const OracleOptions& opts = {});

struct ObservabilityVerdict {
  bool observable = false;
  std::uint64_t classes = 0;
  // Two distinct states no output sequence can tell apart (present iff
  // unobservable): the first such pair in state order.
  std::optional<std::pair<std::uint32_t, std::uint32_t>> witness;
};

// Partition refinement on output labels: split classes by (class, class of
// successor) until stable; observable iff every class is a singleton.
// Deterministic for any thread count.
ObservabilityVerdict is_observable(const StateSpace& space, unsigned threads = 0);

// First time step at which the outputs of the two trajectories differ;
// absent when they agree for 2^n steps (hence forever).
std::optional<std::uint64_t> distinguishing_horizon(const StateSpace& space, std::uint32_t a,
                                                    std::uint32_t b);

}  // namespace bnpin
