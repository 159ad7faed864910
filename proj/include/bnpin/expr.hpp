#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "bnpin/logical_matrix.hpp"

namespace bnpin {

enum class ExprKind { Const, Var, Not, And, Or, Xor, Eqv };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind;
  bool value = false;   // Const
  std::string name;     // Var
  ExprPtr lhs, rhs;     // Not uses lhs only
};

ExprPtr make_const(bool v);
ExprPtr make_var(std::string name);
ExprPtr make_not(ExprPtr e);
ExprPtr make_binary(ExprKind op, ExprPtr l, ExprPtr r);

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int col, const std::string& message);
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

// Parse a single expression.  Operators by loosening precedence:
// !  then  &  then  |  then  ^  then  <->, all binaries left-associative.
// Names match [A-Za-z_][A-Za-z0-9_()]* where every '(' inside a name opens
// a balanced "(seg)" with seg in [A-Za-z0-9_]+; otherwise '(' groups.
// Literals 0 and 1 denote the Boolean constants.
// `line` and `col_offset` only seed error locations.
ExprPtr parse_expr(const std::string& text, int line = 1, int col_offset = 0);

bool evaluate(const Expr& e, const std::function<bool(const std::string&)>& env);

// All variable names appearing in the expression, sorted.
std::set<std::string> syntactic_vars(const Expr& e);

// Whether flipping `var` can change the expression's value.  Enumerates
// assignments of the syntactic variables, so their count is capped.
bool is_functional(const Expr& e, const std::string& var);

// Truth table over `order` (all syntactic vars of e must appear in order).
// Entry c is the value at the assignment where variable i (0-based in
// `order`) is TRUE iff bit (k-1-i) of c is 0 -- i.e. columns enumerate
// assignments first variable most significant, TRUE before FALSE, so
// entry 0 is the all-TRUE point.
std::vector<bool> truth_table(const Expr& e, const std::vector<std::string>& order);

// Structure matrix over `order`: the 2 x 2^k logical matrix whose column c
// is delta_2^1 where the truth table holds and delta_2^2 elsewhere.
LogicalMatrix structure_matrix(const Expr& e, const std::vector<std::string>& order);

// Column test on a 2 x 2^k structure matrix: position i (1-based) is
// functional iff after rotating variable i to the front the TRUE-half and
// FALSE-half column blocks differ somewhere.
bool functional_vars_via_columns(const LogicalMatrix& lf, std::uint32_t i);

// Minimal-parenthesis rendering using the same grammar parse_expr accepts.
std::string to_string(const Expr& e);

// Exact two-level minimization for tables over at most 4 variables
// (prime implicants + exact cover); larger tables fall back to a plain
// sum of minterms.  Returns an expression over `order` whose truth table
// equals `table`.
ExprPtr expr_from_table(const std::vector<bool>& table, const std::vector<std::string>& order);

}  // namespace bnpin
