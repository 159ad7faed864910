#include "bnpin/wiring.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace bnpin {

bool WiringDigraph::reads_input(std::uint32_t v) const {
  for (auto u : in_neighbors[v])
    if (vertices[u].kind == VertexKind::Input) return true;
  return false;
}

namespace {

// A sensor eligible for collapse reads exactly one variable, that variable
// is a state, and the read is single-variable by construction (a 1-variable
// functional set means identity or negation).
std::optional<std::uint32_t> collapse_target(const BooleanNetwork& bn,
                                             const BooleanNetwork::Sensor& sensor) {
  if (sensor.functional.size() != 1) return std::nullopt;
  const auto& var = sensor.functional[0];
  auto it = bn.index.find(var);
  if (it == bn.index.end() || it->second.first != BooleanNetwork::Kind::State)
    return std::nullopt;
  return it->second.second;
}

std::string fresh_name(const BooleanNetwork& bn, std::string base) {
  while (bn.index.count(base)) base += '_';
  return base;
}

}  // namespace

AugmentedNetwork augment(const BooleanNetwork& bn, AugmentMode mode) {
  AugmentedNetwork aug;
  aug.net = bn;
  aug.n_base = static_cast<std::uint32_t>(bn.states.size());

  if (mode != AugmentMode::Generic) {
    std::vector<std::uint32_t> targets;
    std::set<std::uint32_t> distinct;
    bool eligible = true;
    for (const auto& sensor : bn.outputs) {
      auto t = collapse_target(bn, sensor);
      if (!t || distinct.count(*t)) {
        eligible = false;
        break;
      }
      distinct.insert(*t);
      targets.push_back(*t);
    }
    if (eligible) {
      aug.collapsed = true;
      aug.sensed_state = std::move(targets);
      return aug;
    }
    if (mode == AugmentMode::Collapse)
      throw std::invalid_argument(
          "collapse requested but some sensor is not a direct read of a distinct state");
  }

  // Generic: one virtual state per sensor, sensor rewired to read it.
  for (std::size_t j = 0; j < bn.outputs.size(); ++j) {
    const auto& sensor = bn.outputs[j];
    const std::string vname = fresh_name(aug.net, sensor.name + "_state");
    const auto vid = static_cast<std::uint32_t>(aug.net.states.size());
    aug.net.index.emplace(vname, std::make_pair(BooleanNetwork::Kind::State, vid));
    aug.net.states.push_back({vname, sensor.read, sensor.functional});
    aug.net.outputs[j].read = make_var(vname);
    aug.net.outputs[j].functional = {vname};
    aug.sensed_state.push_back(vid);
  }
  return aug;
}

WiringDigraph build_wiring(const AugmentedNetwork& aug) {
  const BooleanNetwork& bn = aug.net;
  WiringDigraph g;
  g.n_state = static_cast<std::uint32_t>(bn.states.size());
  g.n_output = static_cast<std::uint32_t>(bn.outputs.size());
  g.n_input = static_cast<std::uint32_t>(bn.input_names.size());

  std::vector<bool> sensed(g.n_state, false);
  for (auto s : aug.sensed_state) sensed[s] = true;

  for (std::uint32_t i = 0; i < g.n_state; ++i)
    g.vertices.push_back({bn.states[i].name, VertexKind::State, sensed[i]});
  for (const auto& sensor : bn.outputs)
    g.vertices.push_back({sensor.name, VertexKind::OutputMirror, false});
  for (const auto& name : bn.input_names)
    g.vertices.push_back({name, VertexKind::Input, false});

  auto var_id = [&](const std::string& name) -> std::uint32_t {
    const auto& slot = bn.index.at(name);
    return slot.first == BooleanNetwork::Kind::State ? slot.second
                                                     : g.n_state + g.n_output + slot.second;
  };

  g.in_neighbors.assign(g.vertices.size(), {});
  g.out_neighbors.assign(g.vertices.size(), {});
  auto add_edge = [&](std::uint32_t from, std::uint32_t to) {
    g.in_neighbors[to].push_back(from);
    g.out_neighbors[from].push_back(to);
  };

  for (std::uint32_t i = 0; i < g.n_state; ++i)
    for (const auto& dep : bn.states[i].functional) add_edge(var_id(dep), i);
  for (std::uint32_t j = 0; j < g.n_output; ++j)
    add_edge(aug.sensed_state[j], g.mirror_of(j));

  for (auto& v : g.in_neighbors) std::sort(v.begin(), v.end());
  for (auto& v : g.out_neighbors) std::sort(v.begin(), v.end());
  return g;
}

bool is_observed_path(const WiringDigraph& g, const Path& path) {
  if (path.empty()) return false;
  Path core = path;
  if (g.is_mirror(core.back())) {
    const auto mirror = core.back();
    core.pop_back();
    if (core.empty()) return false;
    if (g.in_neighbors[mirror] != std::vector<std::uint32_t>{core.back()}) return false;
  }
  std::set<std::uint32_t> seen;
  for (auto v : core) {
    if (!g.is_state(v)) return false;
    if (!seen.insert(v).second) return false;  // repeated vertex
  }
  if (!g.vertices[core.back()].directly_observable) return false;
  for (std::size_t i = 0; i + 1 < core.size(); ++i)
    if (g.vertices[core[i]].directly_observable) return false;
  for (std::size_t i = 1; i < core.size(); ++i)
    if (g.in_neighbors[core[i]] != std::vector<std::uint32_t>{core[i - 1]}) return false;
  return true;
}

std::optional<std::vector<Path>> decompose_into_observed_paths(const WiringDigraph& g) {
  std::vector<bool> claimed(g.n_state, false);
  std::vector<Path> paths;
  for (std::uint32_t j = 0; j < g.n_output; ++j) {
    const auto& mirror_in = g.in_neighbors[g.mirror_of(j)];
    if (mirror_in.size() != 1) return std::nullopt;
    const std::uint32_t term = mirror_in[0];
    if (claimed[term]) return std::nullopt;  // two sensors on one state
    claimed[term] = true;
    Path rev{term};
    std::uint32_t cur = term;
    for (;;) {
      const auto& ins = g.in_neighbors[cur];
      if (ins.size() != 1) break;
      const std::uint32_t u = ins[0];
      if (!g.is_state(u) || claimed[u] || g.vertices[u].directly_observable) break;
      claimed[u] = true;
      rev.push_back(u);
      cur = u;
    }
    Path p(rev.rbegin(), rev.rend());
    p.push_back(g.mirror_of(j));
    paths.push_back(std::move(p));
  }
  for (std::uint32_t v = 0; v < g.n_state; ++v)
    if (!claimed[v]) return std::nullopt;
  return paths;
}

std::vector<std::uint32_t> check_p1(const WiringDigraph& g) {
  std::vector<std::uint32_t> violators;
  const std::uint32_t scan_end = g.n_state + g.n_output;
  for (std::uint32_t i = 0; i < g.n_state; ++i) {
    if (g.vertices[i].directly_observable) continue;
    bool ok = false;
    for (std::uint32_t j = 0; j < scan_end && !ok; ++j)
      if (j != i && g.in_neighbors[j] == std::vector<std::uint32_t>{i}) ok = true;
    if (!ok) violators.push_back(i);
  }
  return violators;
}

std::string to_dot(const WiringDigraph& g, const DotOverlay* overlay) {
  std::ostringstream out;
  out << "digraph wiring {\n  rankdir=LR;\n";
  for (std::uint32_t v = 0; v < g.vertices.size(); ++v) {
    const auto& vx = g.vertices[v];
    out << "  \"" << vx.name << "\" [";
    switch (vx.kind) {
      case VertexKind::State:
        out << "shape=ellipse";
        if (vx.directly_observable) out << ", peripheries=2";
        break;
      case VertexKind::OutputMirror: out << "shape=box"; break;
      case VertexKind::Input: out << "shape=diamond"; break;
    }
    if (overlay)
      for (const auto& [id, note] : overlay->vertex_notes)
        if (id == v) out << ", xlabel=\"" << note << "\"";
    out << "];\n";
  }
  auto highlighted = [&](std::uint32_t a, std::uint32_t b) {
    if (!overlay) return false;
    for (const auto& [x, y] : overlay->highlight_edges)
      if (x == a && y == b) return true;
    return false;
  };
  for (std::uint32_t v = 0; v < g.vertices.size(); ++v)
    for (auto w : g.out_neighbors[v]) {
      out << "  \"" << g.vertices[v].name << "\" -> \"" << g.vertices[w].name << "\"";
      if (highlighted(v, w)) out << " [color=red, penwidth=2]";
      out << ";\n";
    }
  out << "}\n";
  return out.str();
}

}  // namespace bnpin
