#pragma once

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace bnpin {

// A Boolean matrix in which every column has exactly one nonzero entry.
// Stored column-wise: col[j] is the 0-based row index of the 1 in column j.
// The textual convention used everywhere else (delta notation, error
// messages, frozen test vectors) is 1-based, so the named accessors below
// translate.  Row and column counts are powers of two throughout this
// library; the factory functions enforce that where it is required.
struct LogicalMatrix {
  std::uint64_t rows = 1;
  std::vector<std::uint32_t> col;  // one entry per column, each < rows

  std::uint64_t cols() const { return col.size(); }

  // 1-based row index of the nonzero entry in 1-based column j.
  std::uint32_t entry(std::uint64_t j) const { return col.at(j - 1) + 1; }

  bool operator==(const LogicalMatrix&) const = default;
};

// Column vector delta_dim^index (a single-column logical matrix).
struct DeltaVector {
  std::uint64_t dim = 1;
  std::uint32_t index = 1;  // 1-based

  LogicalMatrix as_matrix() const;
  bool operator==(const DeltaVector&) const = default;
};

class MatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Guard against runaway intermediate sizes.  Operations throw MatrixError
// instead of allocating past this many columns (or rows).
std::uint64_t matrix_size_cap();
void set_matrix_size_cap(std::uint64_t cap);

LogicalMatrix identity(std::uint64_t n);
LogicalMatrix delta_matrix(std::uint64_t rows, std::initializer_list<std::uint32_t> one_based);
LogicalMatrix delta_matrix(std::uint64_t rows, const std::vector<std::uint32_t>& one_based);
LogicalMatrix ones_row(std::uint64_t n);  // 1 x n row of ones

// Semi-tensor product U |x| V: with a = lcm(cols(U), rows(V)), this is
// (U (x) I_{a/cols(U)}) * (V (x) I_{a/rows(V)}).  For conforming shapes it
// reduces to the ordinary matrix product.
LogicalMatrix stp(const LogicalMatrix& a, const LogicalMatrix& b);

LogicalMatrix kron(const LogicalMatrix& a, const LogicalMatrix& b);

// Swap matrix W_[p,m] (pm x pm): for u in Delta_m, v in Delta_p,
// stp(u, v) == stp(stp(W_[p,m], v), u).
LogicalMatrix swap_matrix(std::uint64_t p, std::uint64_t m);

// Power-reducing matrix M_{r,n} (n^2 x n): stp(v, v) == stp(M_{r,n}, v) for
// v in Delta_n.
LogicalMatrix power_reducing_matrix(std::uint64_t n);

// Dummy operand matrix D = delta_2[1,2,1,2] (2 x 4): stp(D, stp(x, y)) == y
// for x, y in Delta_2 (drops the first factor).
LogicalMatrix dummy_matrix();

// Transpose of a permutation matrix (its inverse).  Throws MatrixError if
// the argument is not square with each row hit exactly once.
LogicalMatrix transpose(const LogicalMatrix& a);

bool is_permutation(const LogicalMatrix& a);

// Render as delta notation, e.g. "d4[1,3,2,4]"; vectors as "d4^2".
std::string to_string(const LogicalMatrix& a);
std::string to_string(const DeltaVector& v);

}  // namespace bnpin
