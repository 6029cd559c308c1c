#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kloverify/class_matrix.hpp"
#include "kloverify/modp.hpp"
#include "kloverify/quadint.hpp"

namespace klv {

class degenerate_curve : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// y^2 = g_k(x) fails to be elliptic exactly when the quadratic factor of
// g_k has a repeated or zero root, i.e. k = 1 or k = 9 mod p (the
// discriminant of that factor is (k-9)(k-1)^3).
inline bool is_degenerate_curve(const PrimeContext& ctx, i64 k) {
  const i64 r = ctx.reduce(k);
  return r == 1 || r == ctx.reduce(9);
}

struct CurveRecord {
  i64 k = 0;
  i64 point_count = 0;  // |E_k(F_p)| including the point at infinity
  i64 trace = 0;        // a_p(E_k) = p + 1 - point_count
};

inline CurveRecord count_points(const PrimeContext& ctx, i64 k) {
  const i64 p = ctx.p();
  k = ctx.reduce(k);
  if (is_degenerate_curve(ctx, k))
    throw degenerate_curve("count_points: y^2 = g_k(x) is not elliptic for k = " + std::to_string(k) +
                           " (mod " + std::to_string(p) + ")");
  const i64 quad_disc = ctx.reduce((k - 9) * (k - 1) % p * ((k - 1) * (k - 1) % p));
  if (quad_disc == 0) throw std::logic_error("count_points: degeneracy test out of sync");

  i64 char_sum = 0;
  for (i64 x = 0; x < p; ++x) char_sum += ctx.legendre(g_poly(ctx, k, x));
  CurveRecord rec;
  rec.k = k;
  rec.point_count = p + 1 + char_sum;
  rec.trace = -char_sum;
  if (rec.trace * rec.trace > 4 * p)
    throw verification_error("count_points: Hasse bound violated at p = " + std::to_string(p) +
                             ", k = " + std::to_string(k));
  return rec;
}

// eps_k = sum_x (f_1(x) f_k(x) / p), the correlation that ties the
// squared-row entries to Frobenius traces.
inline i64 char_correlation(const PrimeContext& ctx, i64 k) {
  const i64 p = ctx.p();
  i64 s = 0;
  for (i64 x = 0; x < p; ++x) s += ctx.legendre(f_poly(ctx, 1, x)) * ctx.legendre(f_poly(ctx, k, x));
  return s;
}

// All correlations; slot [k] is valid for 1 <= k <= p-1.
inline std::vector<i64> char_correlations(const PrimeContext& ctx) {
  const i64 p = ctx.p();
  std::vector<int> f1(static_cast<std::size_t>(p));
  for (i64 x = 0; x < p; ++x) f1[static_cast<std::size_t>(x)] = ctx.legendre(f_poly(ctx, 1, x));
  std::vector<i64> eps(static_cast<std::size_t>(p), 0);
  for (i64 k = 1; k < p; ++k) {
    i64 s = 0;
    for (i64 x = 0; x < p; ++x)
      if (f1[static_cast<std::size_t>(x)]) s += f1[static_cast<std::size_t>(x)] * ctx.legendre(f_poly(ctx, k, x));
    eps[static_cast<std::size_t>(k)] = s;
  }
  return eps;
}

// eps_k = -1 - a_p(E_k) for non-degenerate k; returns 0, throws otherwise.
inline i64 verify_bridge(const PrimeContext& ctx, i64 k) {
  const i64 eps = char_correlation(ctx, k);
  const CurveRecord rec = count_points(ctx, k);
  if (eps != -1 - rec.trace)
    throw verification_error("trace bridge failed at p = " + std::to_string(ctx.p()) + ", k = " +
                             std::to_string(ctx.reduce(k)) + ": eps = " + std::to_string(eps) +
                             ", trace = " + std::to_string(rec.trace));
  return 0;
}

struct TransformSides {
  i64 lhs;
  i64 rhs;
};

struct TransformParams {
  i64 big_d;    // D = B^2 - 4C
  i64 delta;    // 4C - 2bB + 4c
  i64 small_d;  // d = b^2 - 4c
};

inline TransformParams transform_params(const PrimeContext& ctx, i64 b, i64 c, i64 B, i64 C) {
  return {ctx.reduce(B * B - 4 * C), ctx.reduce(4 * C - 2 * b * B + 4 * c), ctx.reduce(b * b - 4 * c)};
}

// Quartic-to-cubic character sum identity:
//   sum_x ((x^2+bx+c)(x^2+Bx+C)/p) = -1 + sum_x (x(Dx^2 + delta x + d)/p),
// valid when B != b and the two quadratics share no root mod p.
// Both sides are evaluated by direct O(p) summation and compared.
inline TransformSides verify_transform(const PrimeContext& ctx, i64 b, i64 c, i64 B, i64 C) {
  const i64 p = ctx.p();
  b = ctx.reduce(b);
  c = ctx.reduce(c);
  B = ctx.reduce(B);
  C = ctx.reduce(C);
  if (B == b)
    throw std::domain_error("verify_transform: SharedRootOrEqualLinear (B = b mod p)");
  // a common root would satisfy (b - B)x + (c - C) = 0
  const i64 r = ctx.mul(ctx.reduce(C - c), ctx.inv(b - B));
  if (ctx.reduce(r * r + b * r + c) == 0)
    throw std::domain_error("verify_transform: SharedRootOrEqualLinear (common root at x = " +
                            std::to_string(r) + ")");

  const TransformParams tp = transform_params(ctx, b, c, B, C);
  i64 lhs = 0, rhs = 0;
  for (i64 x = 0; x < p; ++x) {
    const i64 q1 = ctx.reduce(x * x + b * x + c);
    const i64 q2 = ctx.reduce(x * x + B * x + C);
    lhs += ctx.legendre(q1 * q2);
    const i64 cubic = ctx.mul(x, ctx.reduce((tp.big_d * x + tp.delta) % p * x + tp.small_d));
    rhs += ctx.legendre(cubic);
  }
  rhs -= 1;
  if (lhs != rhs)
    throw verification_error("quartic transform identity failed at p = " + std::to_string(p) + ", (b,c,B,C) = (" +
                             std::to_string(b) + "," + std::to_string(c) + "," + std::to_string(B) + "," +
                             std::to_string(C) + ")");
  return {lhs, rhs};
}

// Curve indices entering the sixth-moment trace sum: k = 2..p-1 with
// k != 1, 9 interpreted mod p.
inline std::vector<i64> valid_curve_indices(const PrimeContext& ctx) {
  std::vector<i64> ks;
  for (i64 k = 2; k <= ctx.p() - 1; ++k)
    if (!is_degenerate_curve(ctx, k)) ks.push_back(k);
  return ks;
}

// V_6(p) = 4p^4 - 8p^3 + (4(p/3)+2)p^2 - 5p - 1 + p^2 sum_k (a_p(E_k)+1)^2.
inline BigInt sixth_moment_from_traces(const PrimeContext& ctx) {
  const BigInt p = ctx.p();
  BigInt trace_sum = 0;
  for (i64 k : valid_curve_indices(ctx)) {
    const i64 t = count_points(ctx, k).trace + 1;
    trace_sum += BigInt(t) * t;
  }
  return 4 * p * p * p * p - 8 * p * p * p + (4 * ctx.ell() + 2) * p * p - 5 * p - 1 + p * p * trace_sum;
}

struct ClosedMoments {
  BigInt v1, v2, v3, v4;
};

inline ClosedMoments closed_moments(const PrimeContext& ctx) {
  const BigInt p = ctx.p();
  ClosedMoments m;
  m.v1 = 1;
  m.v2 = p * p - p - 1;
  m.v3 = ctx.ell() * p * p + 2 * p + 1;
  m.v4 = 2 * p * p * p - 3 * p * p - 3 * p - 1;
  return m;
}

struct MomentResiduals {
  BigInt a_p;  // from V_5 = (p/3)4p^3 + (a_p+5)p^2 + 4p + 1,   needs p > 5
  BigInt b_p;  // from V_6 = 5p^4 - 10p^3 - (b_p+9)p^2 - 5p - 1, needs p > 7
  bool a_valid = false;
  bool b_valid = false;
};

// Solves the residual constants out of exact V_5, V_6 and checks that they
// are integers within their stated ranges: |a_p| < 2p, |b_p| < 2p^{3/2}
// (the latter as b_p^2 < 4p^3 to stay in integer arithmetic).
inline MomentResiduals solve_residuals(const PrimeContext& ctx, const BigInt& v5, const BigInt& v6) {
  const BigInt p = ctx.p();
  const BigInt p2 = p * p;
  MomentResiduals r;
  if (ctx.p() > 5) {
    BigInt num = v5 - ctx.ell() * 4 * p * p * p - 4 * p - 1;
    if (num % p2 != 0)
      throw verification_error("solve_residuals: V5 residual not integral at p = " + p.str());
    r.a_p = num / p2 - 5;
    if (!(abs(r.a_p) < 2 * p))
      throw verification_error("solve_residuals: |a_p| >= 2p at p = " + p.str());
    r.a_valid = true;
  }
  if (ctx.p() > 7) {
    BigInt num = 5 * p * p * p * p - 10 * p * p * p - 5 * p - 1 - v6;
    if (num % p2 != 0)
      throw verification_error("solve_residuals: V6 residual not integral at p = " + p.str());
    r.b_p = num / p2 - 9;
    if (!(r.b_p * r.b_p < 4 * p * p * p))
      throw verification_error("solve_residuals: |b_p| >= 2p^(3/2) at p = " + p.str());
    r.b_valid = true;
  }
  return r;
}

struct FourthMixedResidual {
  BigInt moment;  // sum over u in F_p of K_u K_{au} K_{bu} K_{cu}
  BigInt trace;   // solved from the delta-form evaluation
  bool resonant = false;
  bool hasse_ok = false;
};

// Solves the Frobenius-type residual out of the fourth mixed moment:
//   sum_{u != 0} = delta_{a,1} delta_{b,c} p^3 - ((bc/p) a_p + 2) p^2 - 3p - 1.
// Integrality of a_p is unconditional.  The Hasse-size bound holds exactly
// when the triple is non-resonant; for {b,c} = {1,a} the underlying quartic
// collapses to a square and the residual is exactly 1 - (a/p)p.
inline FourthMixedResidual fourth_mixed_residual(const PrimeContext& ctx, i64 a, i64 b, i64 c) {
  const i64 p = ctx.p();
  a = ctx.reduce(a);
  b = ctx.reduce(b);
  c = ctx.reduce(c);
  if (a == 0 || b == 0 || c == 0) throw std::domain_error("fourth_mixed_residual: zero multiplier");

  FourthMixedResidual out;
  out.moment = mixed_moment_via_matrix(ctx, {a, b, c});
  const BigInt restricted = out.moment - 1;  // drop the u = 0 term (+1)
  const BigInt p2 = BigInt(p) * p;
  const int dd = (a == 1 && b == c) ? 1 : 0;
  BigInt num = dd * p2 * p - 3 * p - 1 - restricted;
  if (num % p2 != 0)
    throw verification_error("fourth_mixed_residual: non-integral residual at p = " + std::to_string(p));
  const BigInt q = num / p2 - 2;
  out.trace = ctx.legendre(b * c % p) * q;
  out.resonant = (b == 1 && c == a) || (c == 1 && b == a);
  out.hasse_ok = out.trace * out.trace <= 4 * p;
  return out;
}

}  // namespace klv
