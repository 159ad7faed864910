#include "bnpin/planner.hpp"

#include <algorithm>
#include <set>

namespace bnpin {

std::uint32_t PinningPlan::count_of_type(int t) const {
  std::uint32_t n = 0;
  for (const auto& pin : pins)
    if (pin.type == t) ++n;
  return n;
}

double PinningPlan::cost() const {
  return weights.c1 * count_of_type(1) + weights.c2 * count_of_type(2) +
         weights.c3 * count_of_type(3);
}

namespace {

constexpr std::uint32_t kUnmatched = UINT32_MAX;

struct Matching {
  // match_left[u] = right id (state or mirror) or kUnmatched
  std::vector<std::uint32_t> match_left;
  // match_right[w] = left state id or kUnmatched; indexed over states+mirrors
  std::vector<std::uint32_t> match_right;
};

bool augment(const WiringDigraph& g, const std::vector<std::vector<std::uint32_t>>& adj,
             Matching& m, std::uint32_t u, std::vector<bool>& visited) {
  for (auto w : adj[u]) {
    if (visited[w]) continue;
    visited[w] = true;
    if (m.match_right[w] == kUnmatched ||
        augment(g, adj, m, m.match_right[w], visited)) {
      m.match_left[u] = w;
      m.match_right[w] = u;
      return true;
    }
  }
  return false;
}

}  // namespace

PathCover min_path_cover(const WiringDigraph& g) {
  const std::uint32_t n = g.n_state;
  const std::uint32_t rights = n + g.n_output;

  // adjacency u -> candidate successors w (state rights only; mirrors are
  // force-matched and never re-examined)
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (std::uint32_t w = 0; w < n; ++w) {
    if (g.reads_input(w)) continue;  // cannot take a predecessor pin later
    for (auto u : g.in_neighbors[w])
      if (g.is_state(u) && u != w) adj[u].push_back(w);
  }
  for (auto& lst : adj) std::sort(lst.begin(), lst.end());

  Matching m;
  m.match_left.assign(n, kUnmatched);
  m.match_right.assign(rights, kUnmatched);
  for (std::uint32_t j = 0; j < g.n_output; ++j) {
    const auto& mirror_in = g.in_neighbors[g.mirror_of(j)];
    if (mirror_in.size() != 1)
      throw PlanError("sensor '" + g.vertices[g.mirror_of(j)].name +
                      "' does not read a single state");
    m.match_left[mirror_in[0]] = g.mirror_of(j);
    m.match_right[g.mirror_of(j)] = mirror_in[0];
  }

  std::vector<bool> visited(rights);
  auto pass = [&]() {
    bool improved = false;
    for (std::uint32_t u = 0; u < n; ++u) {
      if (m.match_left[u] != kUnmatched) continue;
      std::fill(visited.begin(), visited.end(), false);
      if (augment(g, adj, m, u, visited)) improved = true;
    }
    return improved;
  };
  while (pass()) {
  }

  PathCover cover;

  // head-rooted paths and leftover matched cycles
  std::vector<bool> seen(n, false);
  auto walk_from = [&](std::uint32_t h) {
    Path p;
    std::uint32_t cur = h;
    for (;;) {
      p.push_back(cur);
      seen[cur] = true;
      const std::uint32_t nxt = m.match_left[cur];
      if (nxt == kUnmatched) break;
      if (nxt >= n) {  // mirror
        p.push_back(nxt);
        break;
      }
      cur = nxt;
    }
    return p;
  };
  for (std::uint32_t v = 0; v < n; ++v)
    if (m.match_right[v] == kUnmatched && !g.is_mirror(v)) walk_from(v);
  std::vector<std::vector<std::uint32_t>> cycles;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (seen[v]) continue;
    std::vector<std::uint32_t> cyc;
    std::uint32_t cur = v;
    while (std::find(cyc.begin(), cyc.end(), cur) == cyc.end()) {
      cyc.push_back(cur);
      seen[cur] = true;
      cur = m.match_left[cur];
    }
    cycles.push_back(std::move(cyc));
  }

  for (const auto& cyc : cycles) {
    CycleBreak brk;
    brk.cycle = cyc;
    std::sort(brk.cycle.begin(), brk.cycle.end());
    bool fixed = false;
    for (auto u : brk.cycle) {
      for (auto w : adj[u])
        if (m.match_right[w] == kUnmatched) {
          const std::uint32_t old = m.match_left[u];
          m.match_left[u] = w;
          m.match_right[w] = u;
          m.match_right[old] = kUnmatched;
          brk.vertex = u;
          brk.exchanged = true;
          brk.rematched_to = w;
          fixed = true;
          break;
        }
      if (fixed) break;
    }
    if (!fixed) {  // open at the smallest vertex
      const std::uint32_t v = brk.cycle.front();
      const std::uint32_t old = m.match_left[v];
      m.match_left[v] = kUnmatched;
      m.match_right[old] = kUnmatched;
      brk.vertex = v;
      brk.exchanged = false;
    }
    cover.cycle_breaks.push_back(std::move(brk));
  }

  for (std::uint32_t u = 0; u < n; ++u)
    if (m.match_left[u] != kUnmatched) ++cover.matching_size;

  std::fill(seen.begin(), seen.end(), false);
  for (std::uint32_t v = 0; v < n; ++v)
    if (m.match_right[v] == kUnmatched && !seen[v]) cover.paths.push_back(walk_from(v));
  return cover;
}

namespace {

bool sensor_terminated(const WiringDigraph& g, const Path& p) {
  return !p.empty() && g.is_mirror(p.back());
}

std::uint32_t chain_tail(const WiringDigraph& g, const Path& p) {
  return sensor_terminated(g, p) ? p[p.size() - 2] : p.back();
}

}  // namespace

std::vector<Path> merge_paths(const WiringDigraph& g, const PathCover& cover) {
  std::vector<Path> outp;
  std::vector<Path> surplus;
  for (const auto& p : cover.paths)
    (sensor_terminated(g, p) ? outp : surplus).push_back(p);
  if (outp.size() != g.n_output)
    throw PlanError("path cover does not reach every sensor");
  std::sort(outp.begin(), outp.end(),
            [](const Path& a, const Path& b) { return a.back() < b.back(); });
  std::sort(surplus.begin(), surplus.end(),
            [](const Path& a, const Path& b) { return a.front() < b.front(); });

  std::vector<Path> capped, plain;
  for (const auto& p : surplus)
    (g.reads_input(p.front()) ? capped : plain).push_back(p);
  std::vector<std::size_t> open_idx;
  for (std::size_t i = 0; i < outp.size(); ++i)
    if (!g.reads_input(outp[i].front())) open_idx.push_back(i);
  if (capped.size() > open_idx.size())
    throw PlanError("more input-fed chains than sensor paths that can absorb them");
  if (!plain.empty() && open_idx.empty())
    throw PlanError("no sensor path can absorb the leftover chains");

  std::vector<std::vector<Path>> segments(outp.size());
  for (std::size_t i = 0; i < capped.size(); ++i)
    segments[open_idx[i]].push_back(capped[i]);
  if (!plain.empty())
    for (const auto& p : plain) segments[open_idx[0]].push_back(p);

  std::vector<Path> merged;
  for (std::size_t i = 0; i < outp.size(); ++i) {
    Path whole;
    for (const auto& seg : segments[i]) whole.insert(whole.end(), seg.begin(), seg.end());
    whole.insert(whole.end(), outp[i].begin(), outp[i].end());
    merged.push_back(std::move(whole));
  }
  return merged;
}

PinningPlan categorize(const AugmentedNetwork& aug, const WiringDigraph& g,
                       const std::vector<Path>& paths, const CostWeights& weights) {
  if (weights.c1 < 0 || weights.c2 < 0 || weights.c3 < 0)
    throw PlanError("pin cost weights must be nonnegative");
  PinningPlan plan;
  plan.paths = paths;
  plan.weights = weights;
  for (const auto& p : paths) {
    Path core = p;
    if (!core.empty() && g.is_mirror(core.back())) core.pop_back();
    for (std::size_t i = 1; i < core.size(); ++i) {
      const std::uint32_t w = core[i];
      const std::uint32_t pred = core[i - 1];
      if (g.in_neighbors[w] == std::vector<std::uint32_t>{pred}) continue;

      if (g.reads_input(w))
        throw PlanError("vertex '" + g.vertices[w].name +
                        "' reads an external input and cannot be pinned");
      Pin pin;
      pin.node = w;
      pin.pred = pred;
      // state functional deps of w = state in-neighbors (sorted ids)
      std::vector<std::uint32_t> deps;
      for (auto u : g.in_neighbors[w])
        if (g.is_state(u)) deps.push_back(u);
      const bool pred_in = std::find(deps.begin(), deps.end(), pred) != deps.end();
      if (deps.empty()) {
        pin.type = 3;
        pin.universe = {pred};
      } else if (pred_in) {
        if (deps.size() == 1)
          throw PlanError("internal: '" + g.vertices[w].name +
                          "' already follows its only dependency");
        pin.type = 2;
        pin.universe = deps;
      } else {
        pin.type = 1;
        pin.universe = deps;
        pin.universe.insert(
            std::upper_bound(pin.universe.begin(), pin.universe.end(), pred), pred);
      }
      const auto it = std::find(pin.universe.begin(), pin.universe.end(), pred);
      pin.iota = static_cast<std::uint32_t>(it - pin.universe.begin()) + 1;
      plan.pins.push_back(std::move(pin));
    }
  }
  std::sort(plan.pins.begin(), plan.pins.end(),
            [](const Pin& a, const Pin& b) { return a.node < b.node; });
  (void)aug;
  return plan;
}

namespace {

struct GreedyState {
  const WiringDigraph& g;
  std::vector<bool> visited;
  std::vector<Path> paths;  // head-first, no mirrors yet
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pins;  // (node, pred)

  explicit GreedyState(const WiringDigraph& gg) : g(gg), visited(gg.n_state, false) {}

  std::vector<std::uint32_t> eligible(std::uint32_t h) const {
    std::vector<std::uint32_t> out;
    for (auto v : g.in_neighbors[h])
      if (g.is_state(v) && !visited[v] && !g.vertices[v].directly_observable)
        out.push_back(v);
    return out;
  }

  // length of the unique-in-neighbour chain ending at v
  std::uint32_t chain_len(std::uint32_t v) const {
    std::uint32_t cnt = 1;
    std::set<std::uint32_t> on_chain{v};
    std::uint32_t cur = v;
    for (;;) {
      const auto& ins = g.in_neighbors[cur];
      if (ins.size() != 1) break;
      const std::uint32_t w = ins[0];
      if (!g.is_state(w) || visited[w] || g.vertices[w].directly_observable ||
          on_chain.count(w))
        break;
      ++cnt;
      on_chain.insert(w);
      cur = w;
    }
    return cnt;
  }

  bool extend(Path& path) {
    bool changed = false;
    for (;;) {
      const std::uint32_t h = path.front();
      const auto cand = eligible(h);
      if (cand.empty()) return changed;
      if (cand.size() == 1 && g.in_neighbors[h] == std::vector<std::uint32_t>{cand[0]}) {
        path.insert(path.begin(), cand[0]);
        visited[cand[0]] = true;
        changed = true;
        continue;
      }
      if (g.reads_input(h)) return changed;
      // pin the head: follow the candidate with the longest unique chain,
      // smallest vertex on ties
      std::uint32_t best = cand[0];
      std::uint32_t best_len = chain_len(cand[0]);
      for (std::size_t i = 1; i < cand.size(); ++i) {
        const std::uint32_t len = chain_len(cand[i]);
        if (len > best_len) {
          best = cand[i];
          best_len = len;
        }
      }
      pins.emplace_back(h, best);
      path.insert(path.begin(), best);
      visited[best] = true;
      changed = true;
    }
  }

  void stabilize() {
    bool stable = false;
    while (!stable) {
      stable = true;
      for (auto& p : paths)
        if (extend(p)) stable = false;
    }
  }
};

}  // namespace

PinningPlan plan_greedy(const AugmentedNetwork& aug, const CostWeights& weights) {
  const WiringDigraph g = build_wiring(aug);
  // A wiring that already decomposes needs no intervention; growing paths
  // eagerly here could otherwise pin a junction that another sensor's chain
  // would have covered for free.
  if (auto decomp = decompose_into_observed_paths(g))
    return categorize(aug, g, *decomp, weights);
  GreedyState st(g);
  for (auto s : aug.sensed_state) {
    st.visited[s] = true;
    st.paths.push_back({s});
  }
  st.stabilize();
  for (;;) {
    std::uint32_t seed = kUnmatched;
    for (std::uint32_t v = 0; v < g.n_state; ++v)
      if (!st.visited[v]) {
        seed = v;
        break;
      }
    if (seed == kUnmatched) break;
    Path* target = nullptr;
    for (auto it = st.paths.rbegin(); it != st.paths.rend(); ++it)
      if (!g.reads_input(it->front())) {
        target = &*it;
        break;
      }
    if (!target)
      throw PlanError("every path head reads an input; nothing can be pinned");
    st.pins.emplace_back(target->front(), seed);
    target->insert(target->begin(), seed);
    st.visited[seed] = true;
    st.extend(*target);
    st.stabilize();
  }

  std::vector<Path> paths = st.paths;
  for (std::size_t j = 0; j < paths.size(); ++j)
    paths[j].push_back(g.mirror_of(static_cast<std::uint32_t>(j)));
  PinningPlan plan = categorize(aug, g, paths, weights);

  // cross-check: walking the final paths must find exactly the pins made
  // while growing them
  std::vector<std::pair<std::uint32_t, std::uint32_t>> made = st.pins;
  std::sort(made.begin(), made.end());
  std::vector<std::pair<std::uint32_t, std::uint32_t>> found;
  for (const auto& pin : plan.pins) found.emplace_back(pin.node, pin.pred);
  std::sort(found.begin(), found.end());
  if (made != found)
    throw PlanError("internal: greedy pin set disagrees with path categorization");
  return plan;
}

PinningPlan plan_cover(const AugmentedNetwork& aug, const CostWeights& weights) {
  const WiringDigraph g = build_wiring(aug);
  const PathCover cover = min_path_cover(g);
  const auto merged = merge_paths(g, cover);
  return categorize(aug, g, merged, weights);
}

}  // namespace bnpin
