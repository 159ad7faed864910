#include "bnpin/network.hpp"

#include <algorithm>
#include <sstream>

namespace bnpin {

std::uint32_t BooleanNetwork::state_index(const std::string& name) const {
  auto it = index.find(name);
  if (it == index.end() || it->second.first != Kind::State)
    throw std::invalid_argument("not a state node: " + name);
  return it->second.second;
}

bool BooleanNetwork::is_input(const std::string& name) const {
  auto it = index.find(name);
  return it != index.end() && it->second.first == Kind::Input;
}

namespace {

struct RawLine {
  int number;                 // 1-based
  enum { Input, State, Output } kind;
  std::string name;
  std::string rhs;            // empty for Input
  int rhs_col;                // 1-based column where rhs starts
};

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool name_start(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; }
bool name_char(char c) { return name_start(c) || (c >= '0' && c <= '9'); }

// Same name lexing rule the expression tokenizer uses.
std::size_t scan_name_end(const std::string& s, std::size_t pos) {
  std::size_t i = pos + 1;
  for (;;) {
    while (i < s.size() && name_char(s[i])) ++i;
    if (i < s.size() && s[i] == '(') {
      std::size_t j = i + 1;
      while (j < s.size() && name_char(s[j])) ++j;
      if (j > i + 1 && j < s.size() && s[j] == ')') {
        i = j + 1;
        continue;
      }
    }
    return i;
  }
}

std::vector<RawLine> split_lines(const std::string& text) {
  std::vector<RawLine> out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::size_t hash = line.find('#');
    std::string body = hash == std::string::npos ? line : line.substr(0, hash);
    if (trim(body).empty()) continue;

    std::size_t i = body.find_first_not_of(" \t\r");
    RawLine raw;
    raw.number = number;
    raw.kind = RawLine::State;

    // leading keyword?
    if (body.compare(i, 6, "input ") == 0 || body.compare(i, 6, "input\t") == 0) {
      raw.kind = RawLine::Input;
      i += 6;
    } else if (body.compare(i, 7, "output ") == 0 || body.compare(i, 7, "output\t") == 0) {
      raw.kind = RawLine::Output;
      i += 7;
    }

    while (i < body.size() && (body[i] == ' ' || body[i] == '\t')) ++i;
    if (i >= body.size() || !name_start(body[i]))
      throw ParseError(number, static_cast<int>(i) + 1, "expected a name");
    const std::size_t name_end = scan_name_end(body, i);
    raw.name = body.substr(i, name_end - i);
    i = name_end;
    while (i < body.size() && (body[i] == ' ' || body[i] == '\t')) ++i;

    if (raw.kind == RawLine::Input) {
      if (i < body.size())
        throw ParseError(number, static_cast<int>(i) + 1,
                         "input declarations take no expression");
      out.push_back(std::move(raw));
      continue;
    }
    if (i >= body.size() || body[i] != '=')
      throw ParseError(number, static_cast<int>(i) + 1, "expected '='");
    ++i;
    raw.rhs = body.substr(i);
    raw.rhs_col = static_cast<int>(i) + 1;
    if (trim(raw.rhs).empty())
      throw ParseError(number, raw.rhs_col, "missing expression after '='");
    out.push_back(std::move(raw));
  }
  return out;
}

}  // namespace

BooleanNetwork parse_network(const std::string& text) {
  BooleanNetwork bn;
  const auto lines = split_lines(text);

  // Pass 1: declarations.
  for (const auto& raw : lines) {
    if (bn.index.count(raw.name))
      throw ParseError(raw.number, 1, "duplicate declaration of '" + raw.name + "'");
    switch (raw.kind) {
      case RawLine::Input:
        bn.index.emplace(raw.name, std::make_pair(BooleanNetwork::Kind::Input,
                                                  static_cast<std::uint32_t>(bn.input_names.size())));
        bn.input_names.push_back(raw.name);
        break;
      case RawLine::State:
        bn.index.emplace(raw.name, std::make_pair(BooleanNetwork::Kind::State,
                                                  static_cast<std::uint32_t>(bn.states.size())));
        bn.states.push_back({raw.name, nullptr, {}});
        break;
      case RawLine::Output:
        bn.index.emplace(raw.name, std::make_pair(BooleanNetwork::Kind::Output,
                                                  static_cast<std::uint32_t>(bn.outputs.size())));
        bn.outputs.push_back({raw.name, nullptr, {}});
        break;
    }
  }
  if (bn.states.empty()) throw ParseError(1, 1, "network declares no state variables");

  // Pass 2: expressions, reference checking, functional sets.
  auto functional_sorted = [&bn](const Expr& e, int line) {
    const auto vars = syntactic_vars(e);
    if (vars.size() > kMaxFanIn) {
      std::ostringstream msg;
      msg << "expression reads " << vars.size() << " variables; the fan-in cap is "
          << kMaxFanIn;
      throw ParseError(line, 1, msg.str());
    }
    std::vector<std::string> fn;
    for (const auto& v : vars) {
      auto it = bn.index.find(v);
      if (it == bn.index.end())
        throw ParseError(line, 1, "reference to undeclared variable '" + v + "'");
      if (it->second.first == BooleanNetwork::Kind::Output)
        throw ParseError(line, 1, "'" + v + "' names an output and cannot be read");
      if (is_functional(e, v)) fn.push_back(v);
    }
    // states in declaration order, then inputs in declaration order
    std::sort(fn.begin(), fn.end(), [&bn](const std::string& a, const std::string& b) {
      const auto& ia = bn.index.at(a);
      const auto& ib = bn.index.at(b);
      const bool a_state = ia.first == BooleanNetwork::Kind::State;
      const bool b_state = ib.first == BooleanNetwork::Kind::State;
      if (a_state != b_state) return a_state;
      return ia.second < ib.second;
    });
    return fn;
  };

  for (const auto& raw : lines) {
    if (raw.kind == RawLine::Input) continue;
    ExprPtr e = parse_expr(raw.rhs, raw.number, raw.rhs_col - 1);
    auto fn = functional_sorted(*e, raw.number);
    const auto& slot = bn.index.at(raw.name);
    if (raw.kind == RawLine::State) {
      bn.states[slot.second].update = e;
      bn.states[slot.second].functional = std::move(fn);
    } else {
      bn.outputs[slot.second].read = e;
      bn.outputs[slot.second].functional = std::move(fn);
    }
  }
  return bn;
}

std::string to_text(const BooleanNetwork& bn) {
  std::ostringstream out;
  for (const auto& name : bn.input_names) out << "input " << name << '\n';
  for (const auto& node : bn.states)
    out << node.name << " = " << to_string(*node.update) << '\n';
  for (const auto& sensor : bn.outputs)
    out << "output " << sensor.name << " = " << to_string(*sensor.read) << '\n';
  return out.str();
}

LogicalMatrix node_structure_matrix(const BooleanNetwork& bn, std::uint32_t state) {
  const auto& node = bn.states.at(state);
  return structure_matrix(*node.update, node.functional);
}

std::uint32_t max_in_degree(const BooleanNetwork& bn) {
  std::size_t best = 0;
  for (const auto& node : bn.states) best = std::max(best, node.functional.size());
  return static_cast<std::uint32_t>(best);
}

std::uint32_t max_out_degree(const BooleanNetwork& bn) {
  std::unordered_map<std::string, std::uint32_t> fanout;
  for (const auto& node : bn.states)
    for (const auto& v : node.functional) ++fanout[v];
  std::uint32_t best = 0;
  for (const auto& [name, count] : fanout) {
    (void)name;
    best = std::max(best, count);
  }
  return best;
}

}  // namespace bnpin
