#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace klv {

using i64 = std::int64_t;

constexpr double kPi = 3.141592653589793238462643383279502884;

// Thrown when a machine-checked identity fails to hold.
class verification_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline bool is_prime(i64 n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (i64 d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<i64> primes_in_range(i64 lo, i64 hi) {
  std::vector<i64> out;
  for (i64 n = std::max<i64>(lo, 2); n <= hi; ++n)
    if (is_prime(n)) out.push_back(n);
  return out;
}

// An odd prime p >= 5 together with the tables the verification kernels
// hammer: quadratic-residue signs (one lookup per Legendre symbol) and
// modular inverses.  Immutable after construction, safe to share.
class PrimeContext {
public:
  explicit PrimeContext(i64 p) : p_(p) {
    if (p < 5) throw std::invalid_argument("PrimeContext: need p >= 5, got " + std::to_string(p));
    if (!is_prime(p)) throw std::invalid_argument("PrimeContext: " + std::to_string(p) + " is not prime");
    ell_ = (p % 3 == 1) ? 1 : -1;  // (p/3); p = 3 itself is excluded above

    qr_sign_.assign(static_cast<std::size_t>(p), -1);
    qr_sign_[0] = 0;
    for (i64 x = 1; x < p; ++x) qr_sign_[static_cast<std::size_t>(x * x % p)] = 1;

    inv_.assign(static_cast<std::size_t>(p), 0);
    inv_[1] = 1;
    for (i64 x = 2; x < p; ++x)
      inv_[static_cast<std::size_t>(x)] =
          static_cast<std::int32_t>(p - (p / x) * inv_[static_cast<std::size_t>(p % x)] % p);
  }

  i64 p() const { return p_; }
  i64 n_classes() const { return p_ + 2; }
  int ell() const { return ell_; }

  i64 reduce(i64 a) const {
    a %= p_;
    return a < 0 ? a + p_ : a;
  }

  // Legendre symbol (a/p) in {-1, 0, +1}.
  int legendre(i64 a) const { return qr_sign_[static_cast<std::size_t>(reduce(a))]; }

  bool is_qr(i64 a) const { return legendre(a) == 1; }

  i64 inv(i64 x) const {
    x = reduce(x);
    if (x == 0) throw std::domain_error("inv: zero has no inverse mod p");
    return inv_[static_cast<std::size_t>(x)];
  }

  const std::vector<std::int32_t>& inverse_table() const { return inv_; }

  i64 mul(i64 a, i64 b) const { return reduce(a) * reduce(b) % p_; }

private:
  i64 p_;
  int ell_;
  std::vector<std::int8_t> qr_sign_;
  std::vector<std::int32_t> inv_;
};

// f_j(x) = x^2 - 2(j+1)x + (j-1)^2, the discriminant of the pair-count
// quadratic; symmetric in (j, x).
inline i64 f_poly(const PrimeContext& ctx, i64 j, i64 x) {
  const i64 p = ctx.p();
  j = ctx.reduce(j);
  x = ctx.reduce(x);
  i64 v = (x * x + ctx.reduce(j - 1) * ctx.reduce(j - 1)) % p;
  v = (v + (p - 2 * (j + 1) % p) * x) % p;
  return v;
}

// g_k(x) = x(4k x^2 + (k^2 - 6k - 3)x + 4), the cubic whose square-root
// count gives |E_k|.
inline i64 g_poly(const PrimeContext& ctx, i64 k, i64 x) {
  const i64 p = ctx.p();
  k = ctx.reduce(k);
  x = ctx.reduce(x);
  const i64 quad_coeff = ctx.reduce(k * k - 6 * k - 3);
  i64 v = (4 * k % p) * x % p;
  v = (v + quad_coeff) * x % p;
  v = (v + 4) * x % p;
  return v;
}

struct CharSumPair {
  i64 s1;  // sum of (f_k(x)/p) over x
  i64 s2;  // sum of (f_k(x)/p)^2 over x
};

// Complete character sums of f_k over F_p.  Identity: s1 = -1 and
// s2 = p - 1 - (k/p) for 1 <= k <= p-1.
inline CharSumPair legendre_char_sums(const PrimeContext& ctx, i64 k) {
  i64 s1 = 0, s2 = 0;
  for (i64 x = 0; x < ctx.p(); ++x) {
    const int s = ctx.legendre(f_poly(ctx, k, x));
    s1 += s;
    s2 += s * s;
  }
  return {s1, s2};
}

}  // namespace klv
