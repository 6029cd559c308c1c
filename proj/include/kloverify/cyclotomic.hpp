#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "kloverify/modp.hpp"
#include "kloverify/quadint.hpp"

namespace klv {

class not_rational_integer : public verification_error {
public:
  using verification_error::verification_error;
};

// Exact element of Z[zeta_p] in the power basis {1, zeta, ..., zeta^{p-2}}.
//
// Every value is kept fully reduced via zeta^{p-1} = -(1 + zeta + ... +
// zeta^{p-2}), which makes the representation canonical: an element is a
// rational integer precisely when all coefficients above the constant term
// vanish.  That inspection-level certainty is the whole point of this type;
// it is the independent oracle the fast moment routes are checked against.
class CycInt {
public:
  explicit CycInt(i64 p) : p_(p), c_(static_cast<std::size_t>(p - 1), BigInt(0)) {
    if (p < 3 || !is_prime(p)) throw std::invalid_argument("CycInt: modulus must be an odd prime");
  }

  static CycInt integer(i64 p, BigInt v) {
    CycInt r(p);
    r.c_[0] = std::move(v);
    return r;
  }

  static CycInt zeta_power(i64 p, i64 e) {
    CycInt r(p);
    e %= p;
    if (e < 0) e += p;
    if (e == p - 1) {
      for (auto& c : r.c_) c = -1;
    } else {
      r.c_[static_cast<std::size_t>(e)] = 1;
    }
    return r;
  }

  // Builds sum_e counts[e] * zeta^e from a length-p exponent histogram.
  static CycInt from_exponents(i64 p, const std::vector<BigInt>& counts) {
    if (static_cast<i64>(counts.size()) != p) throw std::invalid_argument("from_exponents: need length p");
    CycInt r(p);
    const BigInt& top = counts[static_cast<std::size_t>(p - 1)];
    for (i64 e = 0; e < p - 1; ++e) r.c_[static_cast<std::size_t>(e)] = counts[static_cast<std::size_t>(e)] - top;
    return r;
  }

  i64 modulus() const { return p_; }
  const std::vector<BigInt>& coeffs() const { return c_; }

  bool is_rational_integer() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
      if (c_[i] != 0) return false;
    return true;
  }

  BigInt rational_value() const {
    if (!is_rational_integer())
      throw not_rational_integer("CycInt: value has nonzero zeta components");
    return c_[0];
  }

  CycInt& operator+=(const CycInt& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }

  friend CycInt operator+(CycInt x, const CycInt& y) { return x += y; }

  friend CycInt operator-(CycInt x, const CycInt& y) {
    x.check(y);
    for (std::size_t i = 0; i < x.c_.size(); ++i) x.c_[i] -= y.c_[i];
    return x;
  }

  // Schoolbook product: convolve exponents cyclically mod p (zeta^p = 1),
  // then fold the zeta^{p-1} line back into the power basis.  O(p^2)
  // coefficient multiplies; the oracle only runs at small p where that is
  // instant and exact.
  friend CycInt operator*(const CycInt& x, const CycInt& y) {
    x.check(y);
    const i64 p = x.p_;
    std::vector<BigInt> acc(static_cast<std::size_t>(p), BigInt(0));
    for (i64 i = 0; i < p - 1; ++i) {
      const BigInt& xi = x.c_[static_cast<std::size_t>(i)];
      if (xi == 0) continue;
      for (i64 j = 0; j < p - 1; ++j) {
        const BigInt& yj = y.c_[static_cast<std::size_t>(j)];
        if (yj == 0) continue;
        i64 e = i + j;
        if (e >= p) e -= p;
        acc[static_cast<std::size_t>(e)] += xi * yj;
      }
    }
    return from_exponents(p, acc);
  }

  CycInt& operator*=(const CycInt& o) { return *this = *this * o; }

  friend bool operator==(const CycInt& x, const CycInt& y) { return x.p_ == y.p_ && x.c_ == y.c_; }
  friend bool operator!=(const CycInt& x, const CycInt& y) { return !(x == y); }

  // Galois action zeta -> zeta^t for t coprime to p.
  CycInt galois(i64 t) const {
    t %= p_;
    if (t < 0) t += p_;
    if (t == 0) throw std::domain_error("galois: exponent must be coprime to p");
    std::vector<BigInt> acc(static_cast<std::size_t>(p_), BigInt(0));
    for (i64 e = 0; e < p_ - 1; ++e) acc[static_cast<std::size_t>(t * e % p_)] += c_[static_cast<std::size_t>(e)];
    return from_exponents(p_, acc);
  }

  // Numeric embedding at zeta = exp(2*pi*i/p); test-side cross checks only.
  std::complex<double> embed() const {
    std::complex<double> s{0.0, 0.0};
    const double w = 2.0 * 3.141592653589793238462643383279502884 / static_cast<double>(p_);
    for (i64 e = 0; e < p_ - 1; ++e) {
      const double ce = c_[static_cast<std::size_t>(e)].convert_to<double>();
      if (ce != 0.0) s += ce * std::complex<double>(std::cos(w * e), std::sin(w * e));
    }
    return s;
  }

private:
  void check(const CycInt& o) const {
    if (p_ != o.p_) throw std::invalid_argument("CycInt: mixed moduli");
  }

  i64 p_;
  std::vector<BigInt> c_;
};

// K(a, b) = sum_x zeta^{ax + b x^{-1}} as an exact cyclotomic integer.
inline CycInt kloosterman_cyc_ab(const PrimeContext& ctx, i64 a, i64 b) {
  const i64 p = ctx.p();
  std::vector<BigInt> counts(static_cast<std::size_t>(p), BigInt(0));
  a = ctx.reduce(a);
  b = ctx.reduce(b);
  for (i64 x = 1; x < p; ++x) ++counts[static_cast<std::size_t>((a * x + b * ctx.inv(x)) % p)];
  return CycInt::from_exponents(p, counts);
}

// K_u = K(1, u); rejects u = 0.
inline CycInt kloosterman_cyc(const PrimeContext& ctx, i64 u) {
  if (ctx.reduce(u) == 0) throw std::domain_error("kloosterman_cyc: u must be nonzero mod p");
  return kloosterman_cyc_ab(ctx, 1, u);
}

// V_1..V_nmax computed entirely inside Z[zeta_p]; each must come out a
// rational integer or the arithmetic itself is broken.
inline std::vector<BigInt> moment_oracle_range(const PrimeContext& ctx, int nmax) {
  if (nmax < 1) throw std::invalid_argument("moment_oracle_range: need n >= 1");
  const i64 p = ctx.p();
  std::vector<CycInt> sums(static_cast<std::size_t>(nmax), CycInt(p));
  for (i64 u = 1; u < p; ++u) {
    const CycInt k = kloosterman_cyc(ctx, u);
    CycInt pw = k;
    sums[0] += pw;
    for (int n = 2; n <= nmax; ++n) {
      pw *= k;
      sums[static_cast<std::size_t>(n - 1)] += pw;
    }
  }
  std::vector<BigInt> out;
  out.reserve(static_cast<std::size_t>(nmax));
  for (const auto& s : sums) out.push_back(s.rational_value());
  return out;
}

inline BigInt moment_oracle(const PrimeContext& ctx, int n) {
  return moment_oracle_range(ctx, n).back();
}

// Mixed moment sum_u K_u K_{a_1 u} ... K_{a_n u}.  With at least one
// multiplier the sum runs over all of F_p — the u = 0 term contributes
// (-1)^{n+1} since K_0 = -1 — matching the classical second and third
// mixed moment evaluations (-p and (f_a(b)/p)p^2 + 2p).  With no
// multipliers this is the plain first power moment over nonzero u.
inline BigInt mixed_moment_oracle(const PrimeContext& ctx, const std::vector<i64>& multipliers) {
  const i64 p = ctx.p();
  for (i64 a : multipliers)
    if (ctx.reduce(a) == 0) throw std::domain_error("mixed_moment_oracle: zero multiplier");
  CycInt total(p);
  for (i64 u = 1; u < p; ++u) {
    CycInt term = kloosterman_cyc(ctx, u);
    for (i64 a : multipliers) term *= kloosterman_cyc(ctx, ctx.mul(a, u));
    total += term;
  }
  BigInt value = total.rational_value();
  if (!multipliers.empty()) value += (multipliers.size() % 2 == 0) ? -1 : 1;
  return value;
}

}  // namespace klv
