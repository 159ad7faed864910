#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bnpin/oracle.hpp"
#include "bnpin/planner.hpp"
#include "bnpin/synthesis.hpp"
#include "bnpin/wiring.hpp"

namespace bnpin {

struct RunOptions {
  std::string planner = "greedy";  // "greedy" | "cover"
  CostWeights weights;
  AugmentMode mode = AugmentMode::Auto;
  std::uint32_t oracle_cap = 22;
  std::vector<std::pair<std::string, bool>> input_values;
  unsigned threads = 0;
  bool timings = false;  // include wall-clock stage times in the report
  bool json = false;     // emit the report as JSON instead of text
};

// Exit codes: 0 success / observable, 2 unobservable or not certified,
// 1 error (errors are thrown; the front end maps them to 1).
struct CommandResult {
  int exit_code = 0;
  std::string report;       // goes to stdout
  std::string file_output;  // pinned network / DOT / CSV payload, if any
};

// Structural check (+ oracle when the state space fits under the cap).
CommandResult cmd_check(const std::string& text, const std::string& name, const RunOptions& opt);

// Exhaustive verdict only; errors out when 2^n exceeds the cap.
CommandResult cmd_oracle(const std::string& text, const std::string& name, const RunOptions& opt);

// Plan, synthesize, emit the pinned network, and re-verify it.
CommandResult cmd_pin(const std::string& text, const std::string& name, const RunOptions& opt);

// DOT export; with_plan overlays the planner's paths and pin annotations.
CommandResult cmd_graph(const std::string& text, const std::string& name, const RunOptions& opt,
                        bool with_plan);

// Stage timings over a corpus of (name, text) pairs; CSV in file_output.
CommandResult cmd_bench(const std::vector<std::pair<std::string, std::string>>& corpus,
                        const RunOptions& opt);

}  // namespace bnpin
