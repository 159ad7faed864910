#include "bnpin/report.hpp"

#include <algorithm>
#include <chrono>
#include <optional>
#include <sstream>

#include "json.hpp"

namespace bnpin {

namespace {

using njson = nlohmann::ordered_json;

struct Timer {
  std::chrono::steady_clock::time_point t = std::chrono::steady_clock::now();
  std::int64_t lap() {
    auto now = std::chrono::steady_clock::now();
    auto us = std::chrono::duration_cast<std::chrono::microseconds>(now - t).count();
    t = now;
    return us;
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string mib(std::uint64_t bytes) {
  double v = static_cast<double>(bytes) / (1024.0 * 1024.0);
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(1);
  os << v;
  return os.str();
}

// State bit-string: character i is node i (declaration order), '1' = TRUE.
std::string bits_of(std::uint64_t s, std::uint32_t n) {
  std::string out(n, '0');
  for (std::uint32_t i = 0; i < n; ++i)
    if (s >> i & 1) out[i] = '1';
  return out;
}

std::vector<std::string> true_names(std::uint64_t s, const BooleanNetwork& bn) {
  std::vector<std::string> out;
  for (std::uint32_t i = 0; i < bn.states.size(); ++i)
    if (s >> i & 1) out.push_back(bn.states[i].name);
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string render_path(const WiringDigraph& g, const Path& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const auto& vx = g.vertices[path[i]];
    if (i) out += g.is_mirror(path[i]) ? " => " : " -> ";
    out += vx.name;
  }
  return out;
}

njson path_json(const WiringDigraph& g, const Path& path) {
  njson arr = njson::array();
  for (std::uint32_t v : path) arr.push_back(g.vertices[v].name);
  return arr;
}

std::vector<std::string> vertex_names(const WiringDigraph& g,
                                      const std::vector<std::uint32_t>& ids) {
  std::vector<std::string> out;
  for (std::uint32_t v : ids) out.push_back(g.vertices[v].name);
  return out;
}

njson network_json(const BooleanNetwork& bn) {
  return njson{{"states", bn.states.size()},
               {"sensors", bn.outputs.size()},
               {"inputs", bn.input_names.size()},
               {"max_in_degree", max_in_degree(bn)},
               {"max_out_degree", max_out_degree(bn)}};
}

std::string network_line(const std::string& name, const BooleanNetwork& bn) {
  std::ostringstream os;
  os << "network " << name << ": " << bn.states.size() << " states, " << bn.outputs.size()
     << " sensors, " << bn.input_names.size() << " inputs, max in-degree " << max_in_degree(bn)
     << ", max out-degree " << max_out_degree(bn);
  return os.str();
}

njson augment_json(const AugmentedNetwork& aug) {
  njson sensed = njson::array();
  for (std::uint32_t sid : aug.sensed_state) sensed.push_back(aug.net.states[sid].name);
  return njson{{"mode", aug.collapsed ? "collapse" : "generic"},
               {"virtual_states", aug.net.states.size() - aug.n_base},
               {"sensed", sensed}};
}

std::string augment_line(const AugmentedNetwork& aug) {
  std::vector<std::string> sensed;
  for (std::uint32_t sid : aug.sensed_state) sensed.push_back(aug.net.states[sid].name);
  std::ostringstream os;
  os << "augmentation: " << (aug.collapsed ? "collapse" : "generic");
  if (!aug.collapsed)
    os << " (" << aug.net.states.size() - aug.n_base << " virtual states added)";
  os << "; sensors read " << join(sensed, ", ");
  return os.str();
}

// Input values the oracle will use: declared order, overrides applied.
std::vector<std::pair<std::string, bool>> effective_inputs(const BooleanNetwork& bn,
                                                           const RunOptions& opt) {
  for (const auto& [given, value] : opt.input_values) {
    (void)value;
    if (!bn.is_input(given))
      throw OracleError("'" + given + "' is not an input of the network");
  }
  std::vector<std::pair<std::string, bool>> out;
  for (const auto& nm : bn.input_names) {
    bool v = false;
    for (const auto& [given, value] : opt.input_values)
      if (given == nm) v = value;
    out.emplace_back(nm, v);
  }
  return out;
}

std::string inputs_line(const std::vector<std::pair<std::string, bool>>& vals) {
  std::vector<std::string> parts;
  for (const auto& [nm, v] : vals) parts.push_back(nm + "=" + (v ? "1" : "0"));
  return "inputs fixed: " + join(parts, " ");
}

struct OracleRun {
  bool feasible = false;
  std::uint64_t states = 0;
  std::uint64_t estimate_bytes = 0;
  std::optional<ObservabilityVerdict> verdict;
  std::int64_t us = 0;
};

OracleRun run_oracle(const BooleanNetwork& bn, const RunOptions& opt) {
  OracleRun run;
  std::uint32_t n = static_cast<std::uint32_t>(bn.states.size());
  run.estimate_bytes = state_space_bytes(n);
  run.feasible = n <= opt.oracle_cap;
  if (!run.feasible) return run;
  Timer timer;
  OracleOptions oo;
  oo.cap = opt.oracle_cap;
  oo.input_values = opt.input_values;
  oo.threads = opt.threads;
  StateSpace space = enumerate_state_space(bn, oo);
  run.states = std::uint64_t{1} << n;
  run.verdict = is_observable(space, opt.threads);
  run.us = timer.lap();
  return run;
}

void oracle_text(std::ostringstream& os, const OracleRun& run, const BooleanNetwork& bn,
                 std::uint32_t cap) {
  std::uint32_t n = static_cast<std::uint32_t>(bn.states.size());
  if (!run.feasible) {
    os << "oracle: skipped; 2^" << n << " states (~" << mib(run.estimate_bytes)
       << " MiB) exceeds the cap 2^" << cap << " (raise --oracle-cap to force it)\n";
    return;
  }
  os << "oracle: state space 2^" << n << " = " << run.states << " states (~"
     << mib(run.estimate_bytes) << " MiB)\n";
  const ObservabilityVerdict& v = *run.verdict;
  if (v.observable) {
    os << "oracle: OBSERVABLE; all " << v.classes << " states distinguishable\n";
  } else {
    os << "oracle: UNOBSERVABLE; " << v.classes << " distinguishable classes of " << run.states
       << " states\n";
    if (v.witness) {
      auto [a, b] = *v.witness;
      os << "witness: " << bits_of(a, n) << " {" << join(true_names(a, bn), ", ") << "} vs "
         << bits_of(b, n) << " {" << join(true_names(b, bn), ", ") << "}\n";
    }
  }
}

njson oracle_json(const OracleRun& run, const BooleanNetwork& bn,
                  const std::vector<std::pair<std::string, bool>>& inputs) {
  std::uint32_t n = static_cast<std::uint32_t>(bn.states.size());
  njson j{{"feasible", run.feasible},
          {"states_log2", n},
          {"estimated_mib", static_cast<double>(run.estimate_bytes) / (1024.0 * 1024.0)}};
  if (!run.feasible) return j;
  j["states"] = run.states;
  njson jin = njson::object();
  for (const auto& [nm, v] : inputs) jin[nm] = v;
  j["inputs"] = jin;
  const ObservabilityVerdict& v = *run.verdict;
  j["observable"] = v.observable;
  j["classes"] = v.classes;
  if (v.witness) {
    auto [a, b] = *v.witness;
    j["witness"] = njson{{"a", bits_of(a, n)},
                         {"b", bits_of(b, n)},
                         {"a_true", true_names(a, bn)},
                         {"b_true", true_names(b, bn)}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

njson pins_json(const WiringDigraph& g, const PinningPlan& plan) {
  njson arr = njson::array();
  for (const Pin& pin : plan.pins) {
    njson u = njson::array();
    for (std::uint32_t id : pin.universe) u.push_back(g.vertices[id].name);
    arr.push_back(njson{{"node", g.vertices[pin.node].name},
                        {"type", pin.type},
                        {"pred", g.vertices[pin.pred].name},
                        {"iota", pin.iota},
                        {"universe", u}});
  }
  return arr;
}

std::string plan_summary_line(const WiringDigraph& g, const PinningPlan& plan,
                              const std::string& planner) {
  (void)g;
  std::ostringstream os;
  os << "plan (" << planner << "): " << plan.paths.size() << " observed paths; "
     << plan.pins.size() << " pins (" << plan.count_of_type(1) << " type 1, "
     << plan.count_of_type(2) << " type 2, " << plan.count_of_type(3) << " type 3); cost "
     << fmt(plan.cost());
  return os.str();
}

std::string describe_pin(const BooleanNetwork& bn, const PinController& c) {
  std::ostringstream os;
  os << "pin " << bn.states[c.node].name << ": type " << c.type << ", pred "
     << bn.states[c.universe[c.iota - 1]].name << ", op " << c.op_name << ", g = "
     << (c.feedback_expr ? to_string(*c.feedback_expr) : std::string("?"));
  if (c.theta) os << ", value " << (c.theta->col[0] == 0 ? "1" : "0");
  return os.str();
}

PinningPlan run_planner(const AugmentedNetwork& aug, const RunOptions& opt) {
  if (opt.planner == "cover") return plan_cover(aug, opt.weights);
  if (opt.planner == "greedy") return plan_greedy(aug, opt.weights);
  throw PlanError("unknown planner '" + opt.planner + "' (expected greedy or cover)");
}

}  // namespace

CommandResult cmd_check(const std::string& text, const std::string& name, const RunOptions& opt) {
  Timer timer;
  BooleanNetwork bn = parse_network(text);
  std::int64_t parse_us = timer.lap();

  AugmentedNetwork aug = augment(bn, opt.mode);
  WiringDigraph g = build_wiring(aug);
  std::vector<std::uint32_t> p1 = check_p1(g);
  auto decomp = decompose_into_observed_paths(g);
  std::int64_t structural_us = timer.lap();

  auto inputs = effective_inputs(bn, opt);
  OracleRun oracle = run_oracle(bn, opt);

  bool structurally_observable = decomp.has_value();
  bool oracle_ran = oracle.feasible;
  bool oracle_observable = oracle_ran && oracle.verdict->observable;

  std::string verdict;
  int exit_code;
  if (structurally_observable && oracle_ran && !oracle_observable) {
    verdict = "internal disagreement: structural certificate vs oracle";
    exit_code = 2;
  } else if (structurally_observable) {
    verdict = "observable";
    exit_code = 0;
  } else if (oracle_ran) {
    verdict = oracle_observable ? "observable" : "unobservable";
    exit_code = oracle_observable ? 0 : 2;
  } else {
    verdict = "not certified (structural condition inconclusive; oracle infeasible)";
    exit_code = 2;
  }

  CommandResult out;
  out.exit_code = exit_code;

  if (opt.json) {
    njson j;
    j["command"] = "check";
    j["file"] = name;
    j["network"] = network_json(bn);
    j["augmentation"] = augment_json(aug);
    njson paths = nullptr;
    if (decomp) {
      paths = njson::array();
      for (const Path& p : *decomp) paths.push_back(path_json(g, p));
    }
    j["structural"] = njson{{"p1_violations", vertex_names(g, p1)},
                            {"decomposes", structurally_observable},
                            {"paths", paths}};
    j["oracle"] = oracle_json(oracle, bn, inputs);
    j["verdict"] = verdict;
    if (opt.timings)
      j["timings_us"] = njson{{"parse", parse_us}, {"structural", structural_us},
                              {"oracle", oracle.us}};
    out.report = j.dump(2) + "\n";
    return out;
  }

  std::ostringstream os;
  os << network_line(name, bn) << "\n";
  os << augment_line(aug) << "\n";
  if (p1.empty())
    os << "P1 holds at every non-directly-observable vertex\n";
  else
    os << "sufficient condition fails (P1 violated at " << join(vertex_names(g, p1), ", ")
       << ")\n";
  if (decomp) {
    os << "decomposes; observable\n";
    for (std::size_t i = 0; i < decomp->size(); ++i)
      os << "  path " << i + 1 << ": " << render_path(g, (*decomp)[i]) << "\n";
  } else {
    os << "no observed-path decomposition found\n";
  }
  if (oracle.feasible && !inputs.empty()) os << inputs_line(inputs) << "\n";
  oracle_text(os, oracle, bn, opt.oracle_cap);
  os << "verdict: " << verdict << "\n";
  if (opt.timings)
    os << "timings: parse " << parse_us << " us, structural " << structural_us << " us, oracle "
       << oracle.us << " us\n";
  out.report = os.str();
  return out;
}

CommandResult cmd_oracle(const std::string& text, const std::string& name,
                         const RunOptions& opt) {
  Timer timer;
  BooleanNetwork bn = parse_network(text);
  std::int64_t parse_us = timer.lap();

  auto inputs = effective_inputs(bn, opt);
  std::uint32_t n = static_cast<std::uint32_t>(bn.states.size());
  if (n > opt.oracle_cap) {
    // Reuse the enumerator's error wording for a consistent front-end message.
    OracleOptions oo;
    oo.cap = opt.oracle_cap;
    oo.input_values = opt.input_values;
    enumerate_state_space(bn, oo);  // throws
  }
  OracleRun oracle = run_oracle(bn, opt);

  const ObservabilityVerdict& v = *oracle.verdict;
  CommandResult out;
  out.exit_code = v.observable ? 0 : 2;

  std::optional<std::uint64_t> horizon_checked;  // steps compared for the witness
  if (v.witness) horizon_checked = std::uint64_t{1} << n;

  if (opt.json) {
    njson j;
    j["command"] = "oracle";
    j["file"] = name;
    j["network"] = network_json(bn);
    j["oracle"] = oracle_json(oracle, bn, inputs);
    j["verdict"] = v.observable ? "observable" : "unobservable";
    if (opt.timings) j["timings_us"] = njson{{"parse", parse_us}, {"oracle", oracle.us}};
    out.report = j.dump(2) + "\n";
    return out;
  }

  std::ostringstream os;
  os << network_line(name, bn) << "\n";
  if (!inputs.empty()) os << inputs_line(inputs) << "\n";
  oracle_text(os, oracle, bn, opt.oracle_cap);
  if (v.witness && horizon_checked)
    os << "witness outputs agree for " << *horizon_checked << " steps (hence forever)\n";
  os << "verdict: " << (v.observable ? "observable" : "unobservable") << "\n";
  if (opt.timings) os << "timings: parse " << parse_us << " us, oracle " << oracle.us << " us\n";
  out.report = os.str();
  return out;
}

CommandResult cmd_pin(const std::string& text, const std::string& name, const RunOptions& opt) {
  Timer timer;
  BooleanNetwork bn = parse_network(text);
  std::int64_t parse_us = timer.lap();

  AugmentedNetwork aug = augment(bn, opt.mode);
  WiringDigraph g = build_wiring(aug);

  std::optional<PathCover> cover;
  if (opt.planner == "cover") cover = min_path_cover(g);
  PinningPlan plan = run_planner(aug, opt);
  std::int64_t plan_us = timer.lap();

  PinnedNetwork pinned = synthesize(aug, plan, opt.planner);
  std::int64_t synth_us = timer.lap();

  CommandResult out;
  out.file_output = to_text(pinned);

  // Re-verify from the serialized artifact, not the in-memory object.
  BooleanNetwork rebn = parse_network(out.file_output);
  AugmentedNetwork reaug = augment(rebn, opt.mode);
  WiringDigraph g2 = build_wiring(reaug);
  auto decomp = decompose_into_observed_paths(g2);
  bool certified = decomp.has_value() && *decomp == plan.paths;
  auto inputs = effective_inputs(rebn, opt);
  OracleRun oracle = run_oracle(rebn, opt);
  std::int64_t verify_us = timer.lap();

  bool oracle_ran = oracle.feasible;
  bool oracle_ok = oracle_ran && oracle.verdict->observable;
  out.exit_code = certified && (!oracle_ran || oracle_ok) ? 0 : 2;

  std::string verdict;
  if (certified && (!oracle_ran || oracle_ok))
    verdict = plan.pins.empty() ? "observable without pins" : "pinned network observable";
  else if (!certified)
    verdict = "pinned network failed structural verification";
  else
    verdict = "internal disagreement: structural certificate vs oracle";

  if (opt.json) {
    njson j;
    j["command"] = "pin";
    j["file"] = name;
    j["network"] = network_json(bn);
    j["augmentation"] = augment_json(aug);
    njson paths = njson::array();
    for (const Path& p : plan.paths) paths.push_back(path_json(g, p));
    njson jplan{{"planner", opt.planner},
                {"paths", paths},
                {"pins", pins_json(g, plan)},
                {"counts", njson{{"type1", plan.count_of_type(1)},
                                 {"type2", plan.count_of_type(2)},
                                 {"type3", plan.count_of_type(3)}}},
                {"cost", plan.cost()}};
    if (cover)
      jplan["cover"] = njson{{"chains", cover->paths.size()},
                             {"matching_size", cover->matching_size},
                             {"cycle_breaks", cover->cycle_breaks.size()}};
    j["plan"] = jplan;
    njson jsynth = njson::array();
    for (const PinController& c : pinned.controllers) {
      njson e{{"node", pinned.net.states[c.node].name},
              {"op", c.op_name},
              {"g", c.feedback_expr ? to_string(*c.feedback_expr) : std::string("?")}};
      if (c.theta) e["value"] = c.theta->col[0] == 0 ? 1 : 0;
      jsynth.push_back(e);
    }
    j["synthesis"] = jsynth;
    j["verification"] = njson{{"reparses", true},
                              {"decomposes_into_plan", certified},
                              {"oracle", oracle_json(oracle, rebn, inputs)}};
    j["verdict"] = verdict;
    if (opt.timings)
      j["timings_us"] = njson{{"parse", parse_us}, {"plan", plan_us}, {"synthesize", synth_us},
                              {"verify", verify_us}};
    out.report = j.dump(2) + "\n";
    return out;
  }

  std::ostringstream os;
  os << network_line(name, bn) << "\n";
  os << augment_line(aug) << "\n";
  if (plan.pins.empty()) os << "network is observable; no pins required\n";
  os << plan_summary_line(g, plan, opt.planner) << "\n";
  if (cover)
    os << "path cover: " << cover->paths.size() << " chains, matching size "
       << cover->matching_size << ", " << cover->cycle_breaks.size() << " cycle breaks\n";
  for (std::size_t i = 0; i < plan.paths.size(); ++i)
    os << "  path " << i + 1 << ": " << render_path(g, plan.paths[i]) << "\n";
  for (const PinController& c : pinned.controllers)
    os << "  " << describe_pin(pinned.net, c) << "\n";
  os << "verification: output re-parses; "
     << (certified ? "wiring decomposes into the planned paths"
                   : "wiring does NOT decompose into the planned paths")
     << "\n";
  if (oracle.feasible && !inputs.empty()) os << inputs_line(inputs) << "\n";
  oracle_text(os, oracle, rebn, opt.oracle_cap);
  os << "verdict: " << verdict << "\n";
  if (opt.timings)
    os << "timings: parse " << parse_us << " us, plan " << plan_us << " us, synthesize "
       << synth_us << " us, verify " << verify_us << " us\n";
  out.report = os.str();
  return out;
}

CommandResult cmd_graph(const std::string& text, const std::string& name, const RunOptions& opt,
                        bool with_plan) {
  BooleanNetwork bn = parse_network(text);
  AugmentedNetwork aug = augment(bn, opt.mode);
  WiringDigraph g = build_wiring(aug);

  CommandResult out;
  DotOverlay overlay;
  std::size_t n_pins = 0;
  if (with_plan) {
    PinningPlan plan = run_planner(aug, opt);
    n_pins = plan.pins.size();
    for (const Path& p : plan.paths)
      for (std::size_t i = 0; i + 1 < p.size(); ++i)
        overlay.highlight_edges.emplace_back(p[i], p[i + 1]);
    for (const Pin& pin : plan.pins) {
      std::ostringstream note;
      note << "pin t" << pin.type << " <- " << g.vertices[pin.pred].name;
      overlay.vertex_notes.emplace_back(pin.node, note.str());
    }
  }
  out.file_output = to_dot(g, with_plan ? &overlay : nullptr);

  std::size_t edges = 0;
  for (const auto& outs : g.out_neighbors) edges += outs.size();
  if (opt.json) {
    njson j{{"command", "graph"},
            {"file", name},
            {"vertices", g.vertices.size()},
            {"edges", edges},
            {"plan_overlay", with_plan},
            {"pins", n_pins}};
    out.report = j.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "graph " << name << ": " << g.vertices.size() << " vertices, " << edges << " edges";
    if (with_plan) os << "; plan overlay with " << n_pins << " pins";
    os << "\n";
    out.report = os.str();
  }
  return out;
}

CommandResult cmd_bench(const std::vector<std::pair<std::string, std::string>>& corpus,
                        const RunOptions& opt) {
  std::vector<std::pair<std::string, std::string>> files = corpus;
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::ostringstream csv;
  csv << "file,states,sensors,inputs,max_in_degree,parse_us,structural_us,greedy_us,greedy_pins,"
         "greedy_cost,cover_us,cover_pins,cover_cost,synth_us,oracle_feasible,oracle_us,"
         "oracle_observable\n";

  for (const auto& [fname, text] : files) {
    Timer timer;
    BooleanNetwork bn = parse_network(text);
    std::int64_t parse_us = timer.lap();
    AugmentedNetwork aug = augment(bn, opt.mode);
    WiringDigraph g = build_wiring(aug);
    auto decomp = decompose_into_observed_paths(g);
    (void)decomp;
    std::int64_t structural_us = timer.lap();
    PinningPlan greedy = plan_greedy(aug, opt.weights);
    std::int64_t greedy_us = timer.lap();
    PinningPlan cover = plan_cover(aug, opt.weights);
    std::int64_t cover_us = timer.lap();
    PinnedNetwork pinned = synthesize(aug, cover, "cover");
    (void)pinned;
    std::int64_t synth_us = timer.lap();
    OracleRun oracle = run_oracle(bn, opt);

    csv << fname << ',' << bn.states.size() << ',' << bn.outputs.size() << ','
        << bn.input_names.size() << ',' << max_in_degree(bn) << ',' << parse_us << ','
        << structural_us << ',' << greedy_us << ',' << greedy.pins.size() << ','
        << fmt(greedy.cost()) << ',' << cover_us << ',' << cover.pins.size() << ','
        << fmt(cover.cost()) << ',' << synth_us << ',' << (oracle.feasible ? 1 : 0) << ',';
    if (oracle.feasible)
      csv << oracle.us << ',' << (oracle.verdict->observable ? 1 : 0);
    else
      csv << ',';
    csv << '\n';
  }

  CommandResult out;
  out.file_output = csv.str();
  if (opt.json) {
    njson j{{"command", "bench"}, {"networks", files.size()}};
    out.report = j.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "benchmarked " << files.size() << " networks\n";
    out.report = os.str();
  }
  return out;
}

}  // namespace bnpin
