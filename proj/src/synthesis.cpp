#include "bnpin/synthesis.hpp"

#include <bit>
#include <sstream>
#include <utility>

namespace bnpin {

namespace {

std::uint32_t log2_exact(std::uint64_t n) {
  // Structure matrices always have power-of-two column counts.
  return static_cast<std::uint32_t>(std::countr_zero(n));
}

// Column order of a 2 x 4 operator matrix: (u,f) = (T,T),(T,F),(F,T),(F,F).
bool apply_op(const LogicalMatrix& op, bool u, bool f) {
  return op.col[(u ? 0u : 1u) * 2 + (f ? 0u : 1u)] == 0;
}

}  // namespace

LogicalMatrix target_matrix(const LogicalMatrix& ahat, std::uint32_t iota, std::uint32_t k) {
  if (ahat.rows != 2 || ahat.cols() != 2)
    throw SynthesisError("polarity matrix must be 2 x 2");
  if (k == 0 || iota == 0 || iota > k)
    throw SynthesisError("variable rank " + std::to_string(iota) + " out of range for " +
                         std::to_string(k) + " variables");
  LogicalMatrix spread = kron(ahat, ones_row(std::uint64_t{1} << (k - 1)));
  return stp(spread, transpose(swap_matrix(2, std::uint64_t{1} << (iota - 1))));
}

LogicalMatrix drop_var_matrix(std::uint32_t iota, std::uint32_t k) {
  if (k == 0 || iota == 0 || iota > k)
    throw SynthesisError("variable rank " + std::to_string(iota) + " out of range for " +
                         std::to_string(k) + " variables");
  LogicalMatrix left = kron(identity(std::uint64_t{1} << (iota - 1)), ones_row(2));
  return kron(left, identity(std::uint64_t{1} << (k - iota)));
}

LogicalMatrix compose_pinned_matrix(int type, const LogicalMatrix& op, const LogicalMatrix& lg,
                                    const LogicalMatrix& lf, std::uint32_t iota,
                                    const std::optional<LogicalMatrix>& theta) {
  if (op.rows != 2 || op.cols() != 4) throw SynthesisError("operator matrix must be 2 x 4");
  if (type == 3) {
    if (!theta || theta->rows != 2 || theta->cols() != 1)
      throw SynthesisError("constant pin needs a 2 x 1 value vector");
    if (lg.rows != 2 || lg.cols() != 2)
      throw SynthesisError("feedback matrix of a constant pin must be 2 x 2");
    return stp(stp(stp(op, lg), swap_matrix(2, 2)), *theta);
  }
  if (type != 1 && type != 2) throw SynthesisError("unknown pin type " + std::to_string(type));

  std::uint32_t k = log2_exact(lf.cols());
  LogicalMatrix lifted = lf;
  if (type == 1) {
    k += 1;
    lifted = stp(lf, drop_var_matrix(iota, k));
  }
  std::uint64_t n = std::uint64_t{1} << k;
  if (lg.rows != 2 || lg.cols() != n)
    throw SynthesisError("feedback matrix does not match the pin universe");
  LogicalMatrix head = stp(op, lg);
  LogicalMatrix body = stp(head, kron(identity(n), lifted));
  return stp(body, power_reducing_matrix(n));
}

const std::vector<OpCandidate>& solver_op_order() {
  static const std::vector<OpCandidate> ops = [] {
    std::vector<OpCandidate> v;
    auto add = [&v](const char* name, std::initializer_list<std::uint32_t> t) {
      v.push_back(OpCandidate{name, delta_matrix(2, t)});
    };
    add("AND", {1, 2, 2, 2});
    add("OR", {1, 1, 1, 2});
    add("XOR", {2, 1, 1, 2});
    add("XNOR", {1, 2, 2, 1});
    add("NAND", {2, 1, 1, 1});
    add("NOR", {2, 2, 2, 1});
    add("IMPLY", {1, 2, 1, 1});
    add("NIMPLY", {2, 1, 2, 2});
    add("CONV-IMPLY", {1, 1, 2, 1});
    add("CONV-NIMPLY", {2, 2, 1, 2});
    add("FIRST", {1, 1, 2, 2});
    add("NOT-FIRST", {2, 2, 1, 1});
    add("SECOND", {1, 2, 1, 2});
    add("NOT-SECOND", {2, 1, 2, 1});
    add("TRUE", {1, 1, 1, 1});
    add("FALSE", {2, 2, 2, 2});
    return v;
  }();
  return ops;
}

PinController solve_controller(int type, const LogicalMatrix& lf, std::uint32_t iota,
                               const LogicalMatrix& ahat,
                               const std::optional<LogicalMatrix>& theta) {
  std::uint32_t m = 0;
  if (type == 1) {
    m = log2_exact(lf.cols()) + 1;
  } else if (type == 2) {
    m = log2_exact(lf.cols());
  } else if (type == 3) {
    if (!theta || theta->rows != 2 || theta->cols() != 1)
      throw SynthesisError("constant pin needs a 2 x 1 value vector");
    m = 1;
    iota = 1;
  } else {
    throw SynthesisError("unknown pin type " + std::to_string(type));
  }
  if (iota == 0 || iota > m) throw SynthesisError("variable rank out of range");

  const std::uint64_t cols = std::uint64_t{1} << m;
  LogicalMatrix tgt = target_matrix(ahat, iota, m);

  // Value of the node's own update in each universe column.
  std::vector<bool> fval(cols);
  for (std::uint64_t c = 0; c < cols; ++c) {
    if (type == 3) {
      fval[c] = theta->col[0] == 0;
    } else if (type == 2) {
      fval[c] = lf.col[c] == 0;
    } else {
      std::uint32_t bit = m - iota;  // drop variable iota from the index
      std::uint64_t high = (c >> (bit + 1)) << bit;
      std::uint64_t low = c & ((std::uint64_t{1} << bit) - 1);
      fval[c] = lf.col[high | low] == 0;
    }
  }

  for (const OpCandidate& cand : solver_op_order()) {
    // Per-column constraint on u = g(x): 0 free, 1 must be TRUE, 2 FALSE.
    std::vector<std::uint8_t> forced(cols, 0);
    bool feasible = true;
    for (std::uint64_t c = 0; c < cols && feasible; ++c) {
      bool want = tgt.col[c] == 0;
      bool with_true = apply_op(cand.matrix, true, fval[c]);
      bool with_false = apply_op(cand.matrix, false, fval[c]);
      if (with_true == want && with_false == want) continue;
      if (with_true == want)
        forced[c] = 1;
      else if (with_false == want)
        forced[c] = 2;
      else
        feasible = false;
    }
    if (!feasible) continue;

    // Smallest support for g: subsets by size, then by position order.
    for (std::uint32_t s = 0; s <= m; ++s) {
      std::vector<std::uint32_t> pick(s);
      for (std::uint32_t i = 0; i < s; ++i) pick[i] = i;
      while (true) {
        auto key_of = [&](std::uint64_t c) {
          std::uint64_t key = 0;
          for (std::uint32_t i = 0; i < s; ++i)
            key = key << 1 | ((c >> (m - 1 - pick[i])) & 1);
          return key;
        };
        std::vector<std::uint8_t> cls(std::uint64_t{1} << s, 0);
        bool ok = true;
        for (std::uint64_t c = 0; c < cols && ok; ++c) {
          if (!forced[c]) continue;
          std::uint64_t key = key_of(c);
          if (!cls[key])
            cls[key] = forced[c];
          else if (cls[key] != forced[c])
            ok = false;
        }
        if (ok) {
          PinController out;
          out.type = type;
          out.iota = iota;
          out.op_name = cand.name;
          out.op = cand.matrix;
          out.polarity = ahat;
          out.theta = theta;
          out.feedback.rows = 2;
          out.feedback.col.resize(cols);
          for (std::uint64_t c = 0; c < cols; ++c)
            out.feedback.col[c] = cls[key_of(c)] == 1 ? 0 : 1;  // free classes read FALSE
          return out;
        }
        std::uint32_t i = s;
        bool advanced = false;
        while (i-- > 0) {
          if (pick[i] < m - s + i) {
            ++pick[i];
            for (std::uint32_t j = i + 1; j < s; ++j) pick[j] = pick[j - 1] + 1;
            advanced = true;
            break;
          }
        }
        if (!advanced) break;
      }
    }
  }
  // XOR forces u = f xor target column-wise, so the scan above cannot run dry.
  throw SynthesisError("no controller operator fits the pin");
}

PinnedNetwork synthesize(const AugmentedNetwork& aug, const PinningPlan& plan,
                         const std::string& planner_name) {
  PinnedNetwork out;
  out.net = aug.net;
  out.planned_paths = plan.paths;
  out.planner_name = planner_name;
  out.weights = plan.weights;

  for (const Pin& pin : plan.pins) {
    BooleanNetwork::Node& node = out.net.states.at(pin.node);
    std::optional<LogicalMatrix> theta;
    LogicalMatrix lf = identity(2);  // unused for type 3
    if (pin.type == 3) {
      bool v = evaluate(*node.update, [](const std::string&) { return false; });
      theta = delta_matrix(2, {v ? 1u : 2u});
    } else {
      lf = node_structure_matrix(out.net, pin.node);
    }

    PinController ctrl = solve_controller(pin.type, lf, pin.iota, identity(2), theta);
    ctrl.node = pin.node;
    ctrl.universe = pin.universe;

    std::vector<std::string> names;
    names.reserve(pin.universe.size());
    for (std::uint32_t id : pin.universe) names.push_back(out.net.states.at(id).name);

    std::vector<bool> gtab(ctrl.feedback.cols());
    for (std::uint64_t c = 0; c < gtab.size(); ++c) gtab[c] = ctrl.feedback.col[c] == 0;
    ctrl.feedback_expr = expr_from_table(gtab, names);

    LogicalMatrix tgt = target_matrix(ctrl.polarity, ctrl.iota,
                                      static_cast<std::uint32_t>(names.size()));
    // Cross-check the closed loop against its target; the intermediate in
    // the composition squares the universe, so guard against the size cap.
    if (names.size() >= 1 && (std::uint64_t{1} << (2 * names.size())) <= matrix_size_cap()) {
      LogicalMatrix composed =
          compose_pinned_matrix(pin.type, ctrl.op, ctrl.feedback, lf, ctrl.iota, ctrl.theta);
      if (!(composed == tgt))
        throw SynthesisError("internal: controller for '" + node.name +
                             "' does not realize its target");
    }

    std::vector<bool> sel(tgt.cols());
    for (std::uint64_t c = 0; c < sel.size(); ++c) sel[c] = tgt.col[c] == 0;
    node.update = expr_from_table(sel, names);
    node.functional = {names[ctrl.iota - 1]};
    out.controllers.push_back(std::move(ctrl));
  }

  AugmentedNetwork pinned_aug{out.net, aug.collapsed, aug.n_base, aug.sensed_state};
  WiringDigraph g = build_wiring(pinned_aug);
  if (!plan.paths.empty()) {
    auto decomp = decompose_into_observed_paths(g);
    if (!decomp || *decomp != plan.paths)
      throw SynthesisError("internal: pinned wiring does not decompose into the planned paths");
  }
  return out;
}

std::string to_text(const PinnedNetwork& pinned) {
  std::ostringstream os;
  os << "# pinned network";
  if (!pinned.planner_name.empty()) os << " (" << pinned.planner_name << " planner)";
  os << "\n";

  std::uint32_t counts[4] = {0, 0, 0, 0};
  for (const PinController& c : pinned.controllers)
    if (c.type >= 1 && c.type <= 3) ++counts[c.type];
  double cost = pinned.weights.c1 * counts[1] + pinned.weights.c2 * counts[2] +
                pinned.weights.c3 * counts[3];
  os << "# weights c1=" << pinned.weights.c1 << " c2=" << pinned.weights.c2
     << " c3=" << pinned.weights.c3 << "; pins " << pinned.controllers.size() << "; cost "
     << cost << "\n";

  if (pinned.controllers.empty()) os << "# no pins required\n";
  for (const PinController& c : pinned.controllers) {
    const std::string& name = pinned.net.states.at(c.node).name;
    const std::string& pred = pinned.net.states.at(c.universe.at(c.iota - 1)).name;
    os << "# pin " << name << ": type " << c.type << ", pred " << pred << ", op " << c.op_name
       << ", g = " << (c.feedback_expr ? to_string(*c.feedback_expr) : std::string("?"));
    if (c.theta) os << ", value " << (c.theta->col[0] == 0 ? "1" : "0");
    os << "\n";
  }
  os << to_text(pinned.net);
  return os.str();
}

}  // namespace bnpin
