#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bnpin/network.hpp"
#include "bnpin/planner.hpp"

namespace bnpin {

class SynthesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structure matrix of the map x -> Ahat * x_iota over k variables:
// (Ahat (x) 1^T_{2^{k-1}}) * W^T_[2, 2^{iota-1}].  Ahat is I_2 or the
// negation matrix d2[2,1]; 1 <= iota <= k.
LogicalMatrix target_matrix(const LogicalMatrix& ahat, std::uint32_t iota, std::uint32_t k);

// Lift matrix that drops variable iota out of a k-variable column space:
// I_{2^{iota-1}} (x) 1^T_2 (x) I_{2^{k-iota}}  (2^{k-1} x 2^k).
// Right-multiplying a structure matrix over the remaining k-1 variables by
// this lifts it to all k.  For iota < k it coincides with padding by the
// dummy-operand matrix; at iota = k that padding breaks down and this is
// the shape-correct replacement.
LogicalMatrix drop_var_matrix(std::uint32_t iota, std::uint32_t k);

// Structure matrix of the pinned update u (+) f over the pin's universe:
//   type 1: M_op L_g (I (x) lifted L_f) M_r   (L_f over universe minus
//           variable iota, lifted via drop_var_matrix)
//   type 2: M_op L_g (I (x) L_f) M_r          (L_f over the universe)
//   type 3: M_op L_g W_[2,2] theta            (constant update theta)
LogicalMatrix compose_pinned_matrix(int type, const LogicalMatrix& op, const LogicalMatrix& lg,
                                    const LogicalMatrix& lf, std::uint32_t iota,
                                    const std::optional<LogicalMatrix>& theta = std::nullopt);

struct PinController {
  std::uint32_t node = 0;
  int type = 0;
  std::uint32_t iota = 0;
  std::vector<std::uint32_t> universe;
  std::string op_name;
  LogicalMatrix op;                   // 2 x 4
  LogicalMatrix feedback;             // L_g, 2 x 2^|universe|
  ExprPtr feedback_expr;              // g over the universe variable names
  LogicalMatrix polarity;             // Ahat (2 x 2)
  std::optional<LogicalMatrix> theta; // type 3 only
};

// Binary operators the solver tries, in order; the first four are fixed,
// the rest complete the sixteen two-argument Boolean functions.
struct OpCandidate {
  const char* name;
  LogicalMatrix matrix;
};
const std::vector<OpCandidate>& solver_op_order();

// Find (op, g) such that g(universe) op f == Ahat * x_iota pointwise.
// Scans ops in canonical order; within an op picks the g supported on the
// fewest variables (ties: earliest support subset, unconstrained entries
// FALSE).  XOR always admits g = f xor target, so this cannot fail for
// types 1 and 2; a defensive error covers type 3 exhaustion.
PinController solve_controller(int type, const LogicalMatrix& lf, std::uint32_t iota,
                               const LogicalMatrix& ahat,
                               const std::optional<LogicalMatrix>& theta = std::nullopt);

struct PinnedNetwork {
  BooleanNetwork net;
  std::vector<PinController> controllers;
  std::vector<Path> planned_paths;
  std::string planner_name;
  CostWeights weights;
};

// Solve every pin in the plan, replace the pinned updates (each becomes a
// single-variable read of its predecessor), and check that the rewritten
// wiring decomposes into exactly the planned paths.
PinnedNetwork synthesize(const AugmentedNetwork& aug, const PinningPlan& plan,
                         const std::string& planner_name = "");

// Canonical network text prefixed by a comment header recording the
// planner, weights, and each pin's controller.
std::string to_text(const PinnedNetwork& pinned);

}  // namespace bnpin
