#pragma once

#include <cstdint>
#include <vector>

#include "tpval/algebra/finite_field.hpp"
#include "tpval/algebra/linalg.hpp"
#include "tpval/algebra/number_field.hpp"

// Round 2 (Pohst-Zassenhaus): enlarge Z[alpha] to the p-maximal order by
// repeatedly passing to the multiplier ring of the p-radical.

namespace tpval::padic {

using IntMatrix = std::vector<std::vector<Integer>>;

/// Row Hermite normal form of an integer matrix of full column rank; returns
/// the n nonzero rows (upper triangular, positive pivots).
inline IntMatrix hermite_rows(IntMatrix rows, std::size_t n) {
  std::size_t m = rows.size();
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = c + 1; i < m; ++i) {
      if (rows[i][c] == 0) continue;
      Integer a = rows[c][c], b = rows[i][c], g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      Integer ag = a / g, bg = b / g;
      for (std::size_t j = 0; j < n; ++j) {
        Integer rc = rows[c][j], ri = rows[i][j];
        rows[c][j] = s * rc + t * ri;
        rows[i][j] = ag * ri - bg * rc;
      }
    }
    if (rows[c][c] == 0) throw InvariantViolation("Hermite form: lattice is not of full rank");
    if (rows[c][c] < 0)
      for (auto& x : rows[c]) x = -x;
    for (std::size_t j = 0; j < c; ++j) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), rows[j][c].get_mpz_t(), rows[c][c].get_mpz_t());
      if (q != 0)
        for (std::size_t l = 0; l < n; ++l) rows[j][l] -= q * rows[c][l];
    }
  }
  rows.resize(n);
  return rows;
}

/// Null space over F_p of the linear map given by its columns.
inline std::vector<std::vector<std::int64_t>> kernel_mod_p(const std::vector<std::vector<std::int64_t>>& columns,
                                                          std::size_t rows, std::int64_t p) {
  PrimeField fp(p);
  std::size_t cols = columns.size();
  std::vector<std::vector<std::int64_t>> a(rows, std::vector<std::int64_t>(cols));
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) a[i][j] = fp.from_int(static_cast<long>(columns[j][i]));
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    auto inv = fp.inv(a[r][c]);
    for (auto& x : a[r]) x = fp.mul(x, inv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      auto f = a[i][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] = fp.sub(a[i][j], fp.mul(f, a[r][j]));
    }
    pivots.push_back(c);
    ++r;
  }
  std::vector<std::vector<std::int64_t>> out;
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<std::int64_t> v(cols, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = fp.neg(a[i][free]);
    out.push_back(v);
  }
  return out;
}

namespace detail {

// Coordinates of field elements in a fixed basis.
class BasisCoords {
 public:
  BasisCoords(const NumberField& k, const std::vector<QPoly>& basis) : n_(basis.size()), inv_(n_) {
    linalg::Matrix<RationalField> b(n_, std::vector<Rational>(n_, Rational(0)));
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t i = 0; i < basis[j].size(); ++i) b[i][j] = basis[j][i];
    (void)k;
    for (std::size_t c = 0; c < n_; ++c) {
      std::vector<Rational> e(n_, Rational(0));
      e[c] = 1;
      auto sol = linalg::solve(QQ, b, e);
      if (!sol) throw InvariantViolation("basis is singular");
      inv_[c] = *sol;  // column c of the inverse
    }
  }
  std::vector<Rational> operator()(const QPoly& x) const {
    std::vector<Rational> out(n_, Rational(0));
    for (std::size_t c = 0; c < x.size(); ++c)
      for (std::size_t i = 0; i < n_; ++i) out[i] += inv_[c][i] * x[c];
    return out;
  }

 private:
  std::size_t n_;
  std::vector<std::vector<Rational>> inv_;
};

inline std::vector<Integer> integral_coords(const BasisCoords& bc, const QPoly& x) {
  std::vector<Integer> out;
  for (auto& c : bc(x)) {
    if (c.get_den() != 1) throw InvariantViolation("order is not closed under multiplication");
    out.push_back(Integer(c));
  }
  return out;
}

}  // namespace detail

/// A Z-basis (as field elements) of an order containing `generator`, maximal
/// at p. The generator must be integral.
inline std::vector<QPoly> p_maximal_basis(const NumberField& k, const QPoly& generator, std::int64_t p) {
  const std::size_t n = static_cast<std::size_t>(k.degree());
  const Integer P(static_cast<long>(p));
  std::vector<QPoly> basis{k.one()};
  for (std::size_t i = 1; i < n; ++i) basis.push_back(k.mul(basis.back(), generator));
  if (n == 1) return basis;
  PrimeField fp(p);
  for (int round = 0; round < 64; ++round) {
    detail::BasisCoords coords(k, basis);
    // Structure constants: table[i][j] = coordinates of w_i w_j.
    std::vector<std::vector<std::vector<Integer>>> table(n, std::vector<std::vector<Integer>>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        table[i][j] = detail::integral_coords(coords, k.mul(basis[i], basis[j]));
        table[j][i] = table[i][j];
      }
    auto mul_mod_p = [&](const std::vector<std::int64_t>& u, const std::vector<std::int64_t>& v) {
      std::vector<Integer> acc(n, 0);
      for (std::size_t i = 0; i < n; ++i) {
        if (u[i] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (v[j] == 0) continue;
          Integer c = u[i] * v[j];
          for (std::size_t l = 0; l < n; ++l) acc[l] += c * table[i][j][l];
        }
      }
      std::vector<std::int64_t> out(n);
      for (std::size_t l = 0; l < n; ++l) out[l] = fp.from_integer(acc[l]);
      return out;
    };
    // p-radical of O/pO: kernel of x -> x^(p^j), p^j >= n.
    Integer q = P;
    while (q < Integer(static_cast<long>(n))) q *= P;
    std::vector<std::vector<std::int64_t>> images;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::int64_t> base(n, 0), r(n, 0);
      base[i] = 1;
      r[0] = 1;  // basis[0] = 1
      Integer e = q;
      while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = mul_mod_p(r, base);
        e >>= 1;
        if (e > 0) base = mul_mod_p(base, base);
      }
      images.push_back(r);
    }
    auto rad = kernel_mod_p(images, n, p);
    // Z-basis of I_p = pO + lifts of the radical, in O-coordinates.
    IntMatrix gens;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Integer> row(n, 0);
      row[i] = P;
      gens.push_back(row);
    }
    for (auto& v : rad) {
      std::vector<Integer> row(n);
      for (std::size_t i = 0; i < n; ++i) row[i] = v[i];
      gens.push_back(row);
    }
    IntMatrix ideal = hermite_rows(gens, n);
    // Express products w_i * gamma_k in the gamma basis, mod p.
    linalg::Matrix<RationalField> gm(n, std::vector<Rational>(n));
    for (std::size_t kx = 0; kx < n; ++kx)
      for (std::size_t l = 0; l < n; ++l) gm[l][kx] = Rational(ideal[kx][l]);
    std::vector<std::vector<std::int64_t>> columns;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::int64_t> col;
      for (std::size_t kx = 0; kx < n; ++kx) {
        std::vector<Rational> prod(n, Rational(0));
        for (std::size_t l = 0; l < n; ++l) {
          if (ideal[kx][l] == 0) continue;
          for (std::size_t m = 0; m < n; ++m) prod[m] += Rational(ideal[kx][l] * table[i][l][m]);
        }
        auto sol = linalg::solve(QQ, gm, prod);
        if (!sol) throw InvariantViolation("radical is not an ideal");
        for (auto& c : *sol) {
          if (c.get_den() != 1) throw InvariantViolation("radical is not an ideal");
          col.push_back(fp.from_integer(Integer(c)));
        }
      }
      columns.push_back(col);
    }
    auto u = kernel_mod_p(columns, n * n, p);
    // Kernel always contains pO, i.e. nothing mod p; a nonzero vector enlarges O.
    if (u.empty()) return basis;
    IntMatrix ng;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Integer> row(n, 0);
      row[i] = P;
      ng.push_back(row);
    }
    for (auto& v : u) {
      std::vector<Integer> row(n);
      for (std::size_t i = 0; i < n; ++i) row[i] = v[i];
      ng.push_back(row);
    }
    IntMatrix h = hermite_rows(ng, n);
    std::vector<QPoly> next;
    for (auto& row : h) {
      QPoly x;
      for (std::size_t i = 0; i < n; ++i)
        if (row[i] != 0) x = k.add(x, poly::scale(QQ, basis[i], make_rational(row[i], P)));
      next.push_back(x);
    }
    basis = next;
  }
  throw ResourceError("p-maximal order: Round 2 did not stabilize");
}

}  // namespace tpval::padic
