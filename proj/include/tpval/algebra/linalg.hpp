#pragma once

#include <optional>
#include <vector>

#include "tpval/algebra/polynomial.hpp"

namespace tpval::linalg {

template <class F>
using Matrix = std::vector<std::vector<typename F::Elem>>;

/// Solves A x = b (A is rows x cols). Returns some solution if consistent.
template <FieldContext F>
std::optional<std::vector<typename F::Elem>> solve(const F& k, Matrix<F> a, std::vector<typename F::Elem> b) {
  std::size_t rows = a.size();
  std::size_t cols = rows ? a[0].size() : 0;
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && k.is_zero(a[piv][c])) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    std::swap(b[piv], b[r]);
    auto inv = k.inv(a[r][c]);
    for (std::size_t j = c; j < cols; ++j) a[r][j] = k.mul(a[r][j], inv);
    b[r] = k.mul(b[r], inv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || k.is_zero(a[i][c])) continue;
      auto factor = a[i][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] = k.sub(a[i][j], k.mul(factor, a[r][j]));
      b[i] = k.sub(b[i], k.mul(factor, b[r]));
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (!k.is_zero(b[i])) return std::nullopt;
  std::vector<typename F::Elem> x(cols, k.zero());
  for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
  return x;
}

template <FieldContext F>
std::size_t rank(const F& k, Matrix<F> a) {
  std::size_t rows = a.size();
  std::size_t cols = rows ? a[0].size() : 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && k.is_zero(a[piv][c])) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    auto inv = k.inv(a[r][c]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (k.is_zero(a[i][c])) continue;
      auto factor = k.mul(a[i][c], inv);
      for (std::size_t j = c; j < cols; ++j) a[i][j] = k.sub(a[i][j], k.mul(factor, a[r][j]));
    }
    ++r;
  }
  return r;
}

}  // namespace tpval::linalg
