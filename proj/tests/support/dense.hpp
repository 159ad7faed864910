#pragma once

// Dense reference implementations used only by tests.  These recompute the
// semi-tensor product the long way -- explicit Kronecker inflation followed
// by an ordinary matrix multiply -- so the column-index implementation in
// the library is checked against an independent code path.

#include <cstdint>
#include <numeric>
#include <vector>

#include "bnpin/logical_matrix.hpp"

namespace dense {

using Mat = std::vector<std::vector<int>>;  // row-major 0/1 matrix

inline Mat from_logical(const bnpin::LogicalMatrix& a) {
  Mat m(a.rows, std::vector<int>(a.cols(), 0));
  for (std::uint64_t j = 0; j < a.cols(); ++j) m[a.col[j]][j] = 1;
  return m;
}

inline Mat dense_identity(std::uint64_t n) {
  Mat m(n, std::vector<int>(n, 0));
  for (std::uint64_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline Mat dense_kron(const Mat& a, const Mat& b) {
  const std::size_t ar = a.size(), ac = a[0].size();
  const std::size_t br = b.size(), bc = b[0].size();
  Mat m(ar * br, std::vector<int>(ac * bc, 0));
  for (std::size_t i = 0; i < ar; ++i)
    for (std::size_t j = 0; j < ac; ++j)
      for (std::size_t k = 0; k < br; ++k)
        for (std::size_t l = 0; l < bc; ++l)
          m[i * br + k][j * bc + l] = a[i][j] * b[k][l];
  return m;
}

inline Mat dense_mul(const Mat& a, const Mat& b) {
  const std::size_t ar = a.size(), ac = a[0].size(), bc = b[0].size();
  Mat m(ar, std::vector<int>(bc, 0));
  for (std::size_t i = 0; i < ar; ++i)
    for (std::size_t k = 0; k < ac; ++k)
      if (a[i][k])
        for (std::size_t j = 0; j < bc; ++j) m[i][j] += b[k][j];
  return m;
}

inline Mat dense_stp(const bnpin::LogicalMatrix& a, const bnpin::LogicalMatrix& b) {
  const std::uint64_t alpha = std::lcm(a.cols(), b.rows);
  const Mat left = dense_kron(from_logical(a), dense_identity(alpha / a.cols()));
  const Mat right = dense_kron(from_logical(b), dense_identity(alpha / b.rows));
  return dense_mul(left, right);
}

inline bool same(const Mat& d, const bnpin::LogicalMatrix& a) {
  if (d.size() != a.rows || d[0].size() != a.cols()) return false;
  for (std::uint64_t i = 0; i < a.rows; ++i)
    for (std::uint64_t j = 0; j < a.cols(); ++j)
      if (d[i][j] != (a.col[j] == i ? 1 : 0)) return false;
  return true;
}

}  // namespace dense
