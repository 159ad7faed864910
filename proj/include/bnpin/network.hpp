#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "bnpin/expr.hpp"

namespace bnpin {

// A synchronous Boolean network parsed from the line-based rule format:
//   input NAME
//   NAME = <expr>
//   output NAME = <expr>
// with '#' comments.  State variables update simultaneously; outputs are
// read as functions of the current state and inputs.
struct BooleanNetwork {
  struct Node {
    std::string name;
    ExprPtr update;
    // Variables the update actually depends on (not merely mentions):
    // states first in declaration order, then inputs in declaration order.
    std::vector<std::string> functional;
  };
  struct Sensor {
    std::string name;
    ExprPtr read;
    std::vector<std::string> functional;
  };

  std::vector<std::string> input_names;
  std::vector<Node> states;
  std::vector<Sensor> outputs;

  enum class Kind : char { State = 's', Input = 'i', Output = 'o' };
  std::unordered_map<std::string, std::pair<Kind, std::uint32_t>> index;

  std::uint32_t state_index(const std::string& name) const;
  bool is_input(const std::string& name) const;
};

// Each update/sensor expression may mention at most this many distinct
// variables; parse_network rejects anything wider.
inline constexpr std::size_t kMaxFanIn = 16;

BooleanNetwork parse_network(const std::string& text);

// Canonical rendering: inputs, then states, then outputs, each in
// declaration order, one rule per line with single spaces around '='.
std::string to_text(const BooleanNetwork& bn);

// Structure matrix of a node's update over its functional variables.
LogicalMatrix node_structure_matrix(const BooleanNetwork& bn, std::uint32_t state);

// Max in-degree (functional variables of any update) and max out-degree
// over state nodes; sensors excluded.
std::uint32_t max_in_degree(const BooleanNetwork& bn);
std::uint32_t max_out_degree(const BooleanNetwork& bn);

}  // namespace bnpin
