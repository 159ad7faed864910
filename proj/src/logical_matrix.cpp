#include "bnpin/logical_matrix.hpp"

#include <numeric>
#include <sstream>

namespace bnpin {

namespace {

std::uint64_t g_size_cap = std::uint64_t{1} << 24;

void check_size(std::uint64_t rows, std::uint64_t cols, const char* op) {
  if (rows > g_size_cap || cols > g_size_cap) {
    std::ostringstream msg;
    msg << op << ": result would be " << rows << " x " << cols
        << ", beyond the size cap of " << g_size_cap
        << " (raise it with set_matrix_size_cap if intended)";
    throw MatrixError(msg.str());
  }
}

}  // namespace

std::uint64_t matrix_size_cap() { return g_size_cap; }

void set_matrix_size_cap(std::uint64_t cap) {
  if (cap == 0) throw MatrixError("matrix size cap must be positive");
  g_size_cap = cap;
}

LogicalMatrix DeltaVector::as_matrix() const {
  if (index < 1 || index > dim) throw MatrixError("delta vector index out of range");
  LogicalMatrix m;
  m.rows = dim;
  m.col = {index - 1};
  return m;
}

LogicalMatrix identity(std::uint64_t n) {
  check_size(n, n, "identity");
  LogicalMatrix m;
  m.rows = n;
  m.col.resize(n);
  for (std::uint64_t j = 0; j < n; ++j) m.col[j] = static_cast<std::uint32_t>(j);
  return m;
}

LogicalMatrix delta_matrix(std::uint64_t rows, const std::vector<std::uint32_t>& one_based) {
  check_size(rows, one_based.size(), "delta_matrix");
  LogicalMatrix m;
  m.rows = rows;
  m.col.reserve(one_based.size());
  for (std::uint32_t e : one_based) {
    if (e < 1 || e > rows) throw MatrixError("delta_matrix: entry out of range");
    m.col.push_back(e - 1);
  }
  return m;
}

LogicalMatrix delta_matrix(std::uint64_t rows, std::initializer_list<std::uint32_t> one_based) {
  return delta_matrix(rows, std::vector<std::uint32_t>(one_based));
}

LogicalMatrix ones_row(std::uint64_t n) {
  check_size(1, n, "ones_row");
  LogicalMatrix m;
  m.rows = 1;
  m.col.assign(n, 0);
  return m;
}

LogicalMatrix stp(const LogicalMatrix& a, const LogicalMatrix& b) {
  const std::uint64_t alpha = std::lcm(a.cols(), b.rows);
  const std::uint64_t s = alpha / a.cols();
  const std::uint64_t t = alpha / b.rows;
  const std::uint64_t rows = a.rows * s;
  const std::uint64_t cols = b.cols() * t;
  check_size(rows, cols, "stp");
  LogicalMatrix r;
  r.rows = rows;
  r.col.resize(cols);
  for (std::uint64_t j = 0; j < cols; ++j) {
    // Column j of (B (x) I_t) hits row rho; column rho of (A (x) I_s) gives
    // the final row.
    const std::uint64_t rho = std::uint64_t{b.col[j / t]} * t + j % t;
    r.col[j] = static_cast<std::uint32_t>(std::uint64_t{a.col[rho / s]} * s + rho % s);
  }
  return r;
}

LogicalMatrix kron(const LogicalMatrix& a, const LogicalMatrix& b) {
  const std::uint64_t rows = a.rows * b.rows;
  const std::uint64_t cols = a.cols() * b.cols();
  check_size(rows, cols, "kron");
  LogicalMatrix r;
  r.rows = rows;
  r.col.resize(cols);
  for (std::uint64_t ca = 0; ca < a.cols(); ++ca)
    for (std::uint64_t cb = 0; cb < b.cols(); ++cb)
      r.col[ca * b.cols() + cb] =
          static_cast<std::uint32_t>(std::uint64_t{a.col[ca]} * b.rows + b.col[cb]);
  return r;
}

LogicalMatrix swap_matrix(std::uint64_t p, std::uint64_t m) {
  const std::uint64_t n = p * m;
  check_size(n, n, "swap_matrix");
  LogicalMatrix r;
  r.rows = n;
  r.col.resize(n);
  for (std::uint64_t k = 0; k < p; ++k)
    for (std::uint64_t j = 0; j < m; ++j)
      r.col[k * m + j] = static_cast<std::uint32_t>(j * p + k);
  return r;
}

LogicalMatrix power_reducing_matrix(std::uint64_t n) {
  check_size(n * n, n, "power_reducing_matrix");
  LogicalMatrix r;
  r.rows = n * n;
  r.col.resize(n);
  for (std::uint64_t i = 0; i < n; ++i)
    r.col[i] = static_cast<std::uint32_t>(i * n + i);
  return r;
}

LogicalMatrix dummy_matrix() { return delta_matrix(2, {1, 2, 1, 2}); }

bool is_permutation(const LogicalMatrix& a) {
  if (a.rows != a.cols()) return false;
  std::vector<bool> hit(a.col.size(), false);
  for (std::uint32_t e : a.col) {
    if (e >= a.rows || hit[e]) return false;
    hit[e] = true;
  }
  return true;
}

LogicalMatrix transpose(const LogicalMatrix& a) {
  if (!is_permutation(a))
    throw MatrixError("transpose: only permutation matrices stay logical under transposition");
  LogicalMatrix r;
  r.rows = a.rows;
  r.col.resize(a.col.size());
  for (std::uint64_t j = 0; j < a.cols(); ++j)
    r.col[a.col[j]] = static_cast<std::uint32_t>(j);
  return r;
}

std::string to_string(const LogicalMatrix& a) {
  std::ostringstream out;
  out << 'd' << a.rows << '[';
  for (std::uint64_t j = 0; j < a.cols(); ++j) {
    if (j) out << ',';
    out << a.col[j] + 1;
  }
  out << ']';
  return out.str();
}

std::string to_string(const DeltaVector& v) {
  std::ostringstream out;
  out << 'd' << v.dim << '^' << v.index;
  return out.str();
}

}  // namespace bnpin
