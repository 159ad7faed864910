#include "bnpin/expr.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <sstream>
#include <unordered_map>

namespace bnpin {

ExprPtr make_const(bool v) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Const;
  e->value = v;
  return e;
}

ExprPtr make_var(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Var;
  e->name = std::move(name);
  return e;
}

ExprPtr make_not(ExprPtr inner) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Not;
  e->lhs = std::move(inner);
  return e;
}

ExprPtr make_binary(ExprKind op, ExprPtr l, ExprPtr r) {
  auto e = std::make_shared<Expr>();
  e->kind = op;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

namespace {

std::string locate(int line, int col, const std::string& message) {
  std::ostringstream out;
  out << "line " << line << ", col " << col << ": " << message;
  return out.str();
}

bool name_start(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; }
bool name_char(char c) { return name_start(c) || (c >= '0' && c <= '9'); }

// Names are [A-Za-z_][A-Za-z0-9_()]* with every '(' opening a balanced
// "(seg)", seg nonempty over [A-Za-z0-9_].  Returns the index one past the
// name starting at pos (pos must satisfy name_start).
std::size_t scan_name(const std::string& s, std::size_t pos) {
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

enum class Tok { Ident, ConstLit, Not, And, Or, Xor, Eqv, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  int col;  // 1-based
};

std::vector<Token> tokenize(const std::string& s, int line, int col_offset) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '#') break;  // comment to end of line
    const int col = col_offset + static_cast<int>(i) + 1;
    switch (c) {
      case '!': out.push_back({Tok::Not, "!", col}); ++i; continue;
      case '&': out.push_back({Tok::And, "&", col}); ++i; continue;
      case '|': out.push_back({Tok::Or, "|", col}); ++i; continue;
      case '^': out.push_back({Tok::Xor, "^", col}); ++i; continue;
      case '(': out.push_back({Tok::LParen, "(", col}); ++i; continue;
      case ')': out.push_back({Tok::RParen, ")", col}); ++i; continue;
      case '<':
        if (i + 2 < s.size() && s[i + 1] == '-' && s[i + 2] == '>') {
          out.push_back({Tok::Eqv, "<->", col});
          i += 3;
          continue;
        }
        throw ParseError(line, col, "expected '<->'");
      case '0':
      case '1':
        out.push_back({Tok::ConstLit, std::string(1, c), col});
        ++i;
        continue;
      default: break;
    }
    if (name_start(c)) {
      std::size_t end = scan_name(s, i);
      out.push_back({Tok::Ident, s.substr(i, end - i), col});
      i = end;
      continue;
    }
    throw ParseError(line, col, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", col_offset + static_cast<int>(s.size()) + 1});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, int line) : toks_(std::move(toks)), line_(line) {}

  ExprPtr parse() {
    ExprPtr e = eqv();
    if (peek().kind != Tok::End)
      throw ParseError(line_, peek().col, "unexpected '" + peek().text + "'");
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }
  bool eat(Tok k) {
    if (peek().kind == k) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr eqv() {
    ExprPtr l = xr();
    while (eat(Tok::Eqv)) l = make_binary(ExprKind::Eqv, l, xr());
    return l;
  }
  ExprPtr xr() {
    ExprPtr l = orr();
    while (eat(Tok::Xor)) l = make_binary(ExprKind::Xor, l, orr());
    return l;
  }
  ExprPtr orr() {
    ExprPtr l = andd();
    while (eat(Tok::Or)) l = make_binary(ExprKind::Or, l, andd());
    return l;
  }
  ExprPtr andd() {
    ExprPtr l = unary();
    while (eat(Tok::And)) l = make_binary(ExprKind::And, l, unary());
    return l;
  }
  ExprPtr unary() {
    if (eat(Tok::Not)) return make_not(unary());
    return primary();
  }
  ExprPtr primary() {
    const Token t = take();
    switch (t.kind) {
      case Tok::Ident: return make_var(t.text);
      case Tok::ConstLit: return make_const(t.text == "1");
      case Tok::LParen: {
        ExprPtr e = eqv();
        if (!eat(Tok::RParen)) throw ParseError(line_, peek().col, "expected ')'");
        return e;
      }
      case Tok::End: throw ParseError(line_, t.col, "unexpected end of expression");
      default: throw ParseError(line_, t.col, "unexpected '" + t.text + "'");
    }
  }

  std::vector<Token> toks_;
  int line_;
  std::size_t pos_ = 0;
};

}  // namespace

ParseError::ParseError(int line, int col, const std::string& message)
    : std::runtime_error(locate(line, col, message)), line_(line), col_(col) {}

ExprPtr parse_expr(const std::string& text, int line, int col_offset) {
  return Parser(tokenize(text, line, col_offset), line).parse();
}

bool evaluate(const Expr& e, const std::function<bool(const std::string&)>& env) {
  switch (e.kind) {
    case ExprKind::Const: return e.value;
    case ExprKind::Var: return env(e.name);
    case ExprKind::Not: return !evaluate(*e.lhs, env);
    case ExprKind::And: return evaluate(*e.lhs, env) && evaluate(*e.rhs, env);
    case ExprKind::Or: return evaluate(*e.lhs, env) || evaluate(*e.rhs, env);
    case ExprKind::Xor: return evaluate(*e.lhs, env) != evaluate(*e.rhs, env);
    case ExprKind::Eqv: return evaluate(*e.lhs, env) == evaluate(*e.rhs, env);
  }
  return false;  // unreachable
}

namespace {

void collect_vars(const Expr& e, std::set<std::string>& out) {
  switch (e.kind) {
    case ExprKind::Const: return;
    case ExprKind::Var: out.insert(e.name); return;
    case ExprKind::Not: collect_vars(*e.lhs, out); return;
    default:
      collect_vars(*e.lhs, out);
      collect_vars(*e.rhs, out);
  }
}

}  // namespace

std::set<std::string> syntactic_vars(const Expr& e) {
  std::set<std::string> out;
  collect_vars(e, out);
  return out;
}

bool is_functional(const Expr& e, const std::string& var) {
  auto vars = syntactic_vars(e);
  if (!vars.count(var)) return false;
  std::vector<std::string> others(vars.begin(), vars.end());
  others.erase(std::find(others.begin(), others.end(), var));
  const std::size_t k = others.size();
  if (k > 20) throw std::invalid_argument("is_functional: too many variables");
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << k); ++c) {
    bool flip = false;
    auto env = [&](const std::string& n) {
      if (n == var) return flip;
      for (std::size_t i = 0; i < k; ++i)
        if (others[i] == n) return ((c >> i) & 1) != 0;
      return false;
    };
    flip = false;
    const bool v0 = evaluate(e, env);
    flip = true;
    if (evaluate(e, env) != v0) return true;
  }
  return false;
}

std::vector<bool> truth_table(const Expr& e, const std::vector<std::string>& order) {
  const std::size_t k = order.size();
  if (k > 20) throw std::invalid_argument("truth_table: too many variables");
  std::unordered_map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < k; ++i) pos.emplace(order[i], i);
  for (const auto& v : syntactic_vars(e))
    if (!pos.count(v))
      throw std::invalid_argument("truth_table: variable '" + v + "' not in order");
  std::vector<bool> table(std::size_t{1} << k);
  for (std::uint64_t c = 0; c < table.size(); ++c) {
    auto env = [&](const std::string& n) {
      const std::size_t i = pos.at(n);
      return ((c >> (k - 1 - i)) & 1) == 0;  // TRUE-first column ordering
    };
    table[c] = evaluate(e, env);
  }
  return table;
}

LogicalMatrix structure_matrix(const Expr& e, const std::vector<std::string>& order) {
  const auto table = truth_table(e, order);
  LogicalMatrix m;
  m.rows = 2;
  m.col.resize(table.size());
  for (std::size_t c = 0; c < table.size(); ++c) m.col[c] = table[c] ? 0 : 1;
  return m;
}

bool functional_vars_via_columns(const LogicalMatrix& lf, std::uint32_t i) {
  if (lf.rows != 2 || lf.cols() == 0 || (lf.cols() & (lf.cols() - 1)) != 0)
    throw std::invalid_argument("functional_vars_via_columns: not a 2 x 2^k structure matrix");
  std::uint32_t k = 0;
  while ((std::uint64_t{1} << k) < lf.cols()) ++k;
  if (i < 1 || i > k)
    throw std::invalid_argument("functional_vars_via_columns: position out of range");
  const LogicalMatrix m = stp(lf, swap_matrix(2, std::uint64_t{1} << (i - 1)));
  const std::uint64_t half = m.cols() / 2;
  for (std::uint64_t j = 0; j < half; ++j)
    if (m.col[j] != m.col[j + half]) return true;
  return false;
}

namespace {

int prec_of(ExprKind k) {
  switch (k) {
    case ExprKind::Eqv: return 1;
    case ExprKind::Xor: return 2;
    case ExprKind::Or: return 3;
    case ExprKind::And: return 4;
    case ExprKind::Not: return 5;
    default: return 6;
  }
}

const char* op_text(ExprKind k) {
  switch (k) {
    case ExprKind::Eqv: return " <-> ";
    case ExprKind::Xor: return " ^ ";
    case ExprKind::Or: return " | ";
    case ExprKind::And: return " & ";
    default: return "";
  }
}

void print(const Expr& e, int ambient, std::string& out) {
  const int p = prec_of(e.kind);
  switch (e.kind) {
    case ExprKind::Const: out += e.value ? '1' : '0'; return;
    case ExprKind::Var: out += e.name; return;
    case ExprKind::Not:
      out += '!';
      print(*e.lhs, p, out);
      return;
    default: {
      const bool parens = p < ambient;
      if (parens) out += '(';
      print(*e.lhs, p, out);
      out += op_text(e.kind);
      print(*e.rhs, p + 1, out);  // left-associative: right child binds tighter
      if (parens) out += ')';
    }
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, 0, out);
  return out;
}

namespace {

// Cube over k bit positions using the column convention of truth_table:
// covers column c iff (c & care) == bits.
struct Cube {
  std::uint32_t care;
  std::uint32_t bits;
  bool operator==(const Cube&) const = default;
};

ExprPtr cube_to_expr(const Cube& q, const std::vector<std::string>& order) {
  const std::size_t k = order.size();
  ExprPtr term;
  for (std::size_t i = 0; i < k; ++i) {
    const std::uint32_t bit = std::uint32_t{1} << (k - 1 - i);
    if (!(q.care & bit)) continue;
    // bit 0 in the column index means the variable is TRUE
    ExprPtr lit = (q.bits & bit) ? make_not(make_var(order[i])) : make_var(order[i]);
    term = term ? make_binary(ExprKind::And, term, lit) : lit;
  }
  return term ? term : make_const(true);
}

ExprPtr sum_to_expr(const std::vector<Cube>& cubes, const std::vector<std::string>& order) {
  ExprPtr e;
  for (const auto& q : cubes) {
    ExprPtr term = cube_to_expr(q, order);
    e = e ? make_binary(ExprKind::Or, e, term) : term;
  }
  return e ? e : make_const(false);
}

int literal_count(const Cube& q) { return std::popcount(q.care); }

}  // namespace

ExprPtr expr_from_table(const std::vector<bool>& table, const std::vector<std::string>& order) {
  const std::size_t k = order.size();
  if (table.size() != (std::size_t{1} << k))
    throw std::invalid_argument("expr_from_table: table size does not match variable count");
  std::vector<std::uint32_t> minterms;
  for (std::uint32_t c = 0; c < table.size(); ++c)
    if (table[c]) minterms.push_back(c);
  if (minterms.empty()) return make_const(false);
  if (minterms.size() == table.size()) return make_const(true);

  // Parity tables have no two-level shape worth printing; render them as a
  // chain of ^ (or <-> for the flipped two-variable case) instead.
  if (k >= 2) {
    const bool base = table[0];
    bool parity = true;
    for (std::uint32_t c = 1; c < table.size() && parity; ++c)
      if (table[c] != (base ^ (std::popcount(c) & 1))) parity = false;
    if (parity) {
      const bool chain_at_zero = k & 1;  // all-TRUE column of a ^-chain
      if (chain_at_zero == base) {
        ExprPtr e = make_var(order[0]);
        for (std::size_t i = 1; i < k; ++i)
          e = make_binary(ExprKind::Xor, e, make_var(order[i]));
        return e;
      }
      if (k == 2) return make_binary(ExprKind::Eqv, make_var(order[0]), make_var(order[1]));
      ExprPtr e = make_var(order[0]);
      for (std::size_t i = 1; i < k; ++i)
        e = make_binary(ExprKind::Xor, e, make_var(order[i]));
      return make_not(e);
    }
  }

  if (k > 4) {  // plain sum of minterms for wide tables
    std::vector<Cube> cubes;
    const std::uint32_t full = static_cast<std::uint32_t>(table.size() - 1);
    for (auto m : minterms) cubes.push_back({full, m});
    return sum_to_expr(cubes, order);
  }

  // Quine-McCluskey prime generation.
  const std::uint32_t full = static_cast<std::uint32_t>(table.size() - 1);
  std::vector<Cube> frontier;
  for (auto m : minterms) frontier.push_back({full, m});
  std::vector<Cube> primes;
  while (!frontier.empty()) {
    std::vector<bool> merged(frontier.size(), false);
    std::vector<Cube> next;
    for (std::size_t a = 0; a < frontier.size(); ++a)
      for (std::size_t b = a + 1; b < frontier.size(); ++b) {
        if (frontier[a].care != frontier[b].care) continue;
        const std::uint32_t diff = frontier[a].bits ^ frontier[b].bits;
        if (std::popcount(diff) != 1) continue;
        merged[a] = merged[b] = true;
        Cube c{frontier[a].care & ~diff,
               frontier[a].bits & (frontier[a].care & ~diff)};
        if (std::find(next.begin(), next.end(), c) == next.end()) next.push_back(c);
      }
    for (std::size_t a = 0; a < frontier.size(); ++a)
      if (!merged[a] &&
          std::find(primes.begin(), primes.end(), frontier[a]) == primes.end())
        primes.push_back(frontier[a]);
    frontier = std::move(next);
  }

  // Exact cover: smallest number of primes, then fewest literals, then the
  // first subset in enumeration order.
  auto covers = [](const Cube& q, std::uint32_t m) { return (m & q.care) == q.bits; };
  const std::size_t p = primes.size();
  std::vector<Cube> best;
  int best_lits = 0;
  std::vector<std::size_t> chosen;
  auto lits_of = [&](const std::vector<std::size_t>& sel) {
    int n = 0;
    for (auto i : sel) n += literal_count(primes[i]);
    return n;
  };
  std::function<void(std::size_t)> search = [&](std::size_t want) {
    // find the first uncovered minterm
    auto target = static_cast<std::uint32_t>(table.size());
    for (auto m : minterms) {
      bool cov = false;
      for (auto i : chosen)
        if (covers(primes[i], m)) {
          cov = true;
          break;
        }
      if (!cov) {
        target = m;
        break;
      }
    }
    if (target == table.size()) {
      const int lits = lits_of(chosen);
      if (best.empty() || chosen.size() < best.size() ||
          (chosen.size() == best.size() && lits < best_lits)) {
        best.clear();
        for (auto i : chosen) best.push_back(primes[i]);
        best_lits = lits;
      }
      return;
    }
    if (chosen.size() == want) return;
    for (std::size_t i = 0; i < p; ++i)
      if (covers(primes[i], target)) {
        chosen.push_back(i);
        search(want);
        chosen.pop_back();
      }
  };
  for (std::size_t want = 1; want <= minterms.size(); ++want) {
    search(want);
    if (!best.empty()) break;
  }
  assert(!best.empty());
  return sum_to_expr(best, order);
}

}  // namespace bnpin
