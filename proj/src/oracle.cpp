#include "bnpin/oracle.hpp"

#include <algorithm>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace bnpin {

std::uint64_t state_space_bytes(std::uint32_t n) {
  // successor + output_label (4+4), refinement class/next/key (4+4+8)
  return (std::uint64_t{24} << n) + (std::uint64_t{1} << 20);
}

namespace {

struct CompiledNode {
  std::vector<std::uint32_t> dep_bits;  // state bit positions, gather order
  std::vector<bool> table;              // 2^deps entries, little-endian gather
};

CompiledNode compile_rule(const BooleanNetwork& bn, const ExprPtr& rule,
                          const std::vector<std::string>& functional,
                          const std::vector<std::pair<std::string, bool>>& fixed_inputs) {
  CompiledNode out;
  std::vector<std::string> state_deps;
  for (const auto& name : functional) {
    const auto& slot = bn.index.at(name);
    if (slot.first == BooleanNetwork::Kind::State) {
      state_deps.push_back(name);
      out.dep_bits.push_back(slot.second);
    }
  }
  auto input_value = [&](const std::string& name) {
    for (const auto& [n, v] : fixed_inputs)
      if (n == name) return v;
    return false;
  };
  const std::size_t k = state_deps.size();
  out.table.resize(std::size_t{1} << k);
  for (std::uint64_t m = 0; m < out.table.size(); ++m) {
    auto env = [&](const std::string& name) {
      for (std::size_t j = 0; j < k; ++j)
        if (state_deps[j] == name) return ((m >> j) & 1) != 0;
      return input_value(name);
    };
    out.table[m] = evaluate(*rule, env);
  }
  return out;
}

void run_chunked(std::uint64_t total, unsigned threads,
                 const std::function<void(std::uint64_t, std::uint64_t)>& work) {
  if (threads <= 1 || total < (std::uint64_t{1} << 14)) {
    work(0, total);
    return;
  }
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (total + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::uint64_t lo = t * chunk;
    const std::uint64_t hi = std::min(total, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&work, lo, hi] { work(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

StateSpace enumerate_state_space(const BooleanNetwork& bn, const OracleOptions& opts) {
  const std::uint32_t n = static_cast<std::uint32_t>(bn.states.size());
  const std::uint32_t p = static_cast<std::uint32_t>(bn.outputs.size());
  if (n > opts.cap) {
    std::ostringstream msg;
    msg << "state space 2^" << n << " exceeds the enumeration cap 2^" << opts.cap << " (about "
        << (state_space_bytes(n) >> 20) << " MiB); raise the cap to force it";
    throw OracleError(msg.str());
  }
  if (p > 31) throw OracleError("more than 31 sensors cannot be packed into an output word");
  for (const auto& [name, value] : opts.input_values) {
    (void)value;
    if (!bn.is_input(name)) throw OracleError("'" + name + "' is not an input of the network");
  }

  std::vector<CompiledNode> nodes;
  nodes.reserve(n);
  for (const auto& node : bn.states)
    nodes.push_back(compile_rule(bn, node.update, node.functional, opts.input_values));
  std::vector<CompiledNode> sensors;
  sensors.reserve(p);
  for (const auto& sensor : bn.outputs)
    sensors.push_back(compile_rule(bn, sensor.read, sensor.functional, opts.input_values));

  StateSpace space;
  space.n = n;
  space.p = p;
  const std::uint64_t total = std::uint64_t{1} << n;
  space.successor.resize(total);
  space.output_label.resize(total);

  unsigned threads = opts.threads ? opts.threads : std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;

  auto gather = [](const CompiledNode& cn, std::uint64_t s) {
    std::uint64_t idx = 0;
    for (std::size_t j = 0; j < cn.dep_bits.size(); ++j)
      idx |= ((s >> cn.dep_bits[j]) & 1) << j;
    return cn.table[idx];
  };
  run_chunked(total, threads, [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t s = lo; s < hi; ++s) {
      std::uint32_t next = 0;
      for (std::uint32_t i = 0; i < n; ++i)
        next |= static_cast<std::uint32_t>(gather(nodes[i], s)) << i;
      std::uint32_t label = 0;
      for (std::uint32_t j = 0; j < p; ++j)
        label |= static_cast<std::uint32_t>(gather(sensors[j], s)) << j;
      space.successor[s] = next;
      space.output_label[s] = label;
    }
  });
  return space;
}

ObservabilityVerdict is_observable(const StateSpace& space, unsigned threads) {
  const std::uint64_t total = space.successor.size();
  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;

  std::vector<std::uint32_t> cls(total);
  std::uint32_t count = 0;
  {
    std::unordered_map<std::uint32_t, std::uint32_t> ids;
    ids.reserve(1024);
    for (std::uint64_t s = 0; s < total; ++s) {
      auto [it, fresh] = ids.try_emplace(space.output_label[s],
                                         static_cast<std::uint32_t>(ids.size()));
      cls[s] = it->second;
      (void)fresh;
    }
    count = static_cast<std::uint32_t>(ids.size());
  }

  std::vector<std::uint64_t> keys(total);
  std::vector<std::uint32_t> next_cls(total);
  for (;;) {
    // keys in parallel (pure reads), class ids sequentially so numbering is
    // first-occurrence order no matter the thread count
    run_chunked(total, threads, [&](std::uint64_t lo, std::uint64_t hi) {
      for (std::uint64_t s = lo; s < hi; ++s)
        keys[s] = (std::uint64_t{cls[s]} << 32) | cls[space.successor[s]];
    });
    std::unordered_map<std::uint64_t, std::uint32_t> ids;
    ids.reserve(count * 2);
    for (std::uint64_t s = 0; s < total; ++s) {
      auto [it, fresh] = ids.try_emplace(keys[s], static_cast<std::uint32_t>(ids.size()));
      next_cls[s] = it->second;
      (void)fresh;
    }
    const auto new_count = static_cast<std::uint32_t>(ids.size());
    if (new_count == count) break;
    cls.swap(next_cls);
    count = new_count;
  }

  ObservabilityVerdict verdict;
  verdict.classes = count;
  verdict.observable = (count == total);
  if (!verdict.observable) {
    std::vector<std::uint32_t> first(count, UINT32_MAX);
    for (std::uint64_t s = 0; s < total; ++s) {
      if (first[cls[s]] != UINT32_MAX) {
        verdict.witness = {first[cls[s]], static_cast<std::uint32_t>(s)};
        break;
      }
      first[cls[s]] = static_cast<std::uint32_t>(s);
    }
  }
  return verdict;
}

std::optional<std::uint64_t> distinguishing_horizon(const StateSpace& space, std::uint32_t a,
                                                    std::uint32_t b) {
  const std::uint64_t total = space.successor.size();
  std::uint64_t x = a, y = b;
  for (std::uint64_t t = 0; t < total; ++t) {
    if (space.output_label[x] != space.output_label[y]) return t;
    x = space.successor[x];
    y = space.successor[y];
  }
  return std::nullopt;
}

}  // namespace bnpin
