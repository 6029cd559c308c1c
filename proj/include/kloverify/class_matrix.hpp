#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kloverify/modp.hpp"
#include "kloverify/quadint.hpp"

namespace klv {

// The superclass matrices T_a of the diag(u, u^{-1}) theory, in closed
// form.  Index layout for the (p+2)-dimensional space, 0-based:
//   0 .. p-2   hyperbola classes xy = 1, ..., xy = p-1
//   p-1        the class {(0,u)}            ("axis_y")
//   p          the class {(u,0)}            ("axis_x")
//   p+1        the origin {(0,0)}
// Every entry is c + s*sqrt(p-1) with c in {0,1,2} and s in {0,1}; the
// interior block is 1 + (((j-a-k)^2 - 4ak)/p) with (./p) the Legendre
// symbol, by the usual pair-count discriminant argument, and the borders
// come from counting the handful of solutions involving the axis classes.
struct ClassMatrix {
  const PrimeContext* ctx;
  i64 a;  // multiplier of the class, 1 <= a <= p-1

  ClassMatrix(const PrimeContext& c, i64 mult) : ctx(&c), a(c.reduce(mult)) {
    if (a == 0) throw std::domain_error("ClassMatrix: multiplier must be nonzero mod p");
  }

  struct Entry {
    int c;
    int s;
  };

  i64 dim() const { return ctx->p() + 2; }

  Entry at(i64 row, i64 col) const {
    const i64 p = ctx->p();
    const i64 axis_y = p - 1, axis_x = p, origin = p + 1;
    const bool row_int = row < axis_y, col_int = col < axis_y;
    if (row_int && col_int) {
      const i64 j = row + 1, k = col + 1;
      const i64 disc = ctx->reduce((j - a - k) * (j - a - k) - 4 * a * k);
      return {1 + ctx->legendre(disc), 0};
    }
    if (row_int) {
      if (col == origin) return {0, row + 1 == a ? 1 : 0};
      return {row + 1 != a ? 1 : 0, 0};  // either axis column
    }
    if (col_int) {
      if (row == origin) return {0, col + 1 == a ? 1 : 0};
      return {col + 1 != a ? 1 : 0, 0};
    }
    // axis/origin square block: the two axes connect to each other only
    if ((row == axis_y && col == axis_x) || (row == axis_x && col == axis_y)) return {1, 0};
    return {0, 0};
  }
};

// row <- row * T_a, exactly.  O(N^2) residue-table lookups plus big-integer
// additions; no general multiplications occur because every matrix entry is
// one of 0, 1, 2, sqrt(p-1).
inline std::vector<QuadInt> apply_class_matrix(const PrimeContext& ctx, const std::vector<QuadInt>& row,
                                               i64 a) {
  const i64 p = ctx.p();
  const i64 N = p + 2;
  const i64 axis_y = p - 1, axis_x = p, origin = p + 1;
  a = ctx.reduce(a);
  if (a == 0) throw std::domain_error("apply_class_matrix: zero multiplier");
  if (static_cast<i64>(row.size()) != N) throw std::invalid_argument("apply_class_matrix: bad row size");
  const i64 m = p - 1;

  std::vector<QuadInt> out(static_cast<std::size_t>(N), QuadInt::integer(0, m));

  // interior columns
  const i64 a4 = ctx.reduce(4 * a);
  for (i64 col = 0; col < axis_y; ++col) {
    const i64 k = col + 1;
    QuadInt& acc = out[static_cast<std::size_t>(col)];
    const i64 w = ctx.reduce(a + k);
    const i64 f4 = a4 * k % p;
    for (i64 j = 1; j <= p - 1; ++j) {
      i64 d = j - w;
      if (d < 0) d += p;
      i64 disc = d * d % p - f4;
      if (disc < 0) disc += p;
      add_scaled(acc, row[static_cast<std::size_t>(j - 1)], 1 + ctx.legendre(disc), 0);
    }
    if (k != a) {
      acc += row[static_cast<std::size_t>(axis_y)];
      acc += row[static_cast<std::size_t>(axis_x)];
    }
    add_scaled(acc, row[static_cast<std::size_t>(origin)], 0, k == a ? 1 : 0);
  }

  // axis columns: every interior class except xy = a reaches them
  QuadInt interior_except_a = QuadInt::integer(0, m);
  for (i64 j = 0; j < axis_y; ++j)
    if (j + 1 != a) interior_except_a += row[static_cast<std::size_t>(j)];
  out[static_cast<std::size_t>(axis_y)] = interior_except_a + row[static_cast<std::size_t>(axis_x)];
  out[static_cast<std::size_t>(axis_x)] = interior_except_a + row[static_cast<std::size_t>(axis_y)];

  // origin column: only the class xy = a folds onto the origin
  add_scaled(out[static_cast<std::size_t>(origin)], row[static_cast<std::size_t>(a - 1)], 0, 1);
  return out;
}

struct RowState {
  int power = 0;
  std::vector<QuadInt> row;  // first row of T_1^power
};

inline std::vector<QuadInt> unit_row(const PrimeContext& ctx) {
  std::vector<QuadInt> row(static_cast<std::size_t>(ctx.p() + 2), QuadInt::integer(0, ctx.p() - 1));
  row[0] = QuadInt::integer(1, ctx.p() - 1);
  return row;
}

inline RowState row_power(const PrimeContext& ctx, int m) {
  if (m < 0) throw std::invalid_argument("row_power: need m >= 0");
  RowState st{0, unit_row(ctx)};
  for (int i = 0; i < m; ++i) st.row = apply_class_matrix(ctx, st.row, 1);
  st.power = m;
  return st;
}

// First rows of T_1^0 .. T_1^mmax in one sweep.
inline std::vector<RowState> row_power_sequence(const PrimeContext& ctx, int mmax) {
  std::vector<RowState> seq;
  seq.reserve(static_cast<std::size_t>(mmax + 1));
  seq.push_back(RowState{0, unit_row(ctx)});
  for (int m = 1; m <= mmax; ++m)
    seq.push_back(RowState{m, apply_class_matrix(ctx, seq.back().row, 1)});
  return seq;
}

// V_n(p) = p^2 [T_1^{n-2}]_{1,1} + 2(-1)^{n-1} - (p-1)^{n-1}.  The (1,1)
// entry of any power of T_1 is a plain integer (closed walks cross the
// sqrt(p-1) edge an even number of times); a surviving radical component
// would mean the arithmetic is broken, so it is checked.
inline BigInt moment_from_diag_entry(const PrimeContext& ctx, int n, const QuadInt& entry) {
  if (!entry.is_integer())
    throw verification_error("moment_via_matrix: (1,1) entry of T^" + std::to_string(n - 2) +
                             " has a radical component at p = " + std::to_string(ctx.p()));
  const BigInt p2 = BigInt(ctx.p()) * ctx.p();
  const int sign = (n % 2 == 0) ? -1 : 1;  // 2(-1)^{n-1}
  return p2 * entry.a + 2 * sign - bigint_pow(BigInt(ctx.p() - 1), static_cast<unsigned>(n - 1));
}

inline BigInt moment_via_matrix(const PrimeContext& ctx, int n) {
  if (n < 2) throw std::invalid_argument("moment_via_matrix: need n >= 2");
  return moment_from_diag_entry(ctx, n, row_power(ctx, n - 2).row[0]);
}

// V_2..V_nmax from one row-power sweep; slot [n] holds V_n (slots 0, 1 are
// left empty — V_1 has no matrix route and comes from the cyclotomic side).
inline std::vector<BigInt> moments_via_matrix(const PrimeContext& ctx, int nmax) {
  if (nmax < 2) throw std::invalid_argument("moments_via_matrix: need nmax >= 2");
  const auto seq = row_power_sequence(ctx, nmax - 2);
  std::vector<BigInt> v(static_cast<std::size_t>(nmax + 1), BigInt(0));
  for (int n = 2; n <= nmax; ++n)
    v[static_cast<std::size_t>(n)] = moment_from_diag_entry(ctx, n, seq[static_cast<std::size_t>(n - 2)].row[0]);
  return v;
}

// Four-case closed form for the first row of T_1^2, with the correlation
// sums supplied by the elliptic side.  Returns the first mismatching
// 0-based column, or -1 when every entry matches.
inline i64 squared_row_mismatch(const PrimeContext& ctx, const std::vector<QuadInt>& row2,
                                const std::vector<i64>& correlations) {
  const i64 p = ctx.p();
  const i64 ell = ctx.ell();
  for (i64 col = 0; col < p + 2; ++col) {
    QuadInt expect = QuadInt::integer(0, p - 1);
    if (col == 0)
      expect.a = 3 * p - 6;
    else if (col < p - 1)
      expect.a = p - 4 + correlations[static_cast<std::size_t>(col + 1)];
    else if (col == p + 1)
      expect.b = 1 + ell;
    else
      expect.a = p - 3 - ell;
    if (row2[static_cast<std::size_t>(col)] != expect) return col;
  }
  return -1;
}

// [T^4]_{1,1} as the exact sum of squares of the first row of T^2
// (T is symmetric, so the row against itself is the diagonal entry).
inline BigInt fourth_diag_from_squares(const PrimeContext& ctx, const std::vector<QuadInt>& row2) {
  QuadInt acc = QuadInt::integer(0, ctx.p() - 1);
  for (const auto& e : row2) acc += e * e;
  if (!acc.is_integer()) throw verification_error("fourth_diag_from_squares: radical residue survived");
  return acc.a;
}

// The same entry by the correlation-sum chain:
// p^3 - p^2 + 2p + 4*(p/3) - 8 + sum_{k=2, k != 9 mod p}^{p-1} eps_k^2.
inline BigInt fourth_diag_from_correlations(const PrimeContext& ctx, const std::vector<i64>& correlations) {
  const i64 p = ctx.p();
  BigInt acc = BigInt(p) * p * p - BigInt(p) * p + 2 * p + 4 * ctx.ell() - 8;
  const i64 nine = ctx.reduce(9);
  for (i64 k = 2; k <= p - 1; ++k) {
    if (k == nine) continue;
    const BigInt e = correlations[static_cast<std::size_t>(k)];
    acc += e * e;
  }
  return acc;
}

// Mixed moment sum_{u in F_p} K_u K_{a_1 u} ... K_{a_n u} via
// p^2 [T_{a_1} ... T_{a_{n-1}}]_{1, a_n} + 2(-1)^n - (p-1)^n + (-1)^{n+1};
// the last term is the u = 0 contribution (K_0 = -1).  An empty multiplier
// list is not accepted here — with nothing to twist by there is no matrix
// route (that case is the plain first moment, handled by the oracle).
// Products of three or more class matrices are O(p^2) per factor and are
// cost-guarded to p <= 61 unless allow_large is set.
inline BigInt mixed_moment_via_matrix(const PrimeContext& ctx, const std::vector<i64>& multipliers,
                                      bool allow_large = false) {
  const i64 p = ctx.p();
  const std::size_t n = multipliers.size();
  if (n == 0) throw std::invalid_argument("mixed_moment_via_matrix: need at least one multiplier");
  if (n >= 3 && p > 61 && !allow_large)
    throw std::invalid_argument("mixed_moment_via_matrix: p > 61 with 4+ factors; pass allow_large to override");
  std::vector<i64> a(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = ctx.reduce(multipliers[i]);
    if (a[i] == 0) throw std::domain_error("mixed_moment_via_matrix: zero multiplier");
  }

  std::vector<QuadInt> row = unit_row(ctx);
  for (std::size_t i = 0; i + 1 < n; ++i) row = apply_class_matrix(ctx, row, a[i]);
  const QuadInt& target = row[static_cast<std::size_t>(a[n - 1] - 1)];
  if (!target.is_integer())
    throw verification_error("mixed_moment_via_matrix: target entry has a radical component");

  const int sign_n = (n % 2 == 0) ? 1 : -1;
  return BigInt(p) * p * target.a + 2 * sign_n - bigint_pow(BigInt(p - 1), static_cast<unsigned>(n)) - sign_n;
}

}  // namespace klv
