#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "kloverify/modp.hpp"

namespace klv {

// Kahan-compensated accumulator; keeps the per-entry rounding error of the
// O(p)-term trigonometric sums near machine epsilon.
struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

// All K_u for u = 1..p-1, evaluated as sum_x cos(2*pi*(x + u*x^{-1})/p).
// values[u] indexes by u; values[0] is unused.  err_bound is a per-entry
// absolute error bound, 8*(p-1)*eps.
struct KloostermanVector {
  i64 p = 0;
  std::vector<double> values;
  double err_bound = 0.0;

  double max_abs() const {
    double m = 0.0;
    for (std::size_t u = 1; u < values.size(); ++u) m = std::max(m, std::abs(values[u]));
    return m;
  }
};

inline KloostermanVector kloosterman_all(const PrimeContext& ctx) {
  const i64 p = ctx.p();
  std::vector<double> cos_table(static_cast<std::size_t>(p));
  for (i64 j = 0; j < p; ++j) cos_table[static_cast<std::size_t>(j)] = std::cos(2.0 * kPi * j / p);

  KloostermanVector kv;
  kv.p = p;
  kv.values.assign(static_cast<std::size_t>(p), 0.0);
  kv.err_bound = 8.0 * static_cast<double>(p - 1) * std::numeric_limits<double>::epsilon();

  const auto& inv = ctx.inverse_table();
  // Iterate y = x^{-1}: the exponent inv[y] + u*y steps additively in y,
  // so the inner loop is only table lookups and adds.
  for (i64 u = 1; u < p; ++u) {
    Kahan acc;
    i64 uy = 0;
    for (i64 y = 1; y < p; ++y) {
      uy += u;
      if (uy >= p) uy -= p;
      i64 e = inv[static_cast<std::size_t>(y)] + uy;
      if (e >= p) e -= p;
      acc.add(cos_table[static_cast<std::size_t>(e)]);
    }
    kv.values[static_cast<std::size_t>(u)] = acc.sum;
  }
  return kv;
}

inline double kloosterman_float(const PrimeContext& ctx, i64 u) {
  const i64 p = ctx.p();
  u = ctx.reduce(u);
  if (u == 0) throw std::domain_error("kloosterman_float: u must be nonzero mod p");
  Kahan acc;
  for (i64 x = 1; x < p; ++x) {
    const i64 e = (x + u * ctx.inv(x)) % p;
    acc.add(std::cos(2.0 * kPi * e / p));
  }
  return acc.sum;
}

// Independent evaluation = sum_j ((j^2 - 4u)/p) cos(2*pi*j/p): the number
// of x with x + u/x = j is 1 + ((j^2-4u)/p), and the count-1 background
// sums to zero.
inline double kloosterman_via_legendre(const PrimeContext& ctx, i64 u) {
  const i64 p = ctx.p();
  u = ctx.reduce(u);
  Kahan acc;
  for (i64 j = 0; j < p; ++j) {
    const int s = ctx.legendre(j * j - 4 * u);
    if (s) acc.add(s * std::cos(2.0 * kPi * j / p));
  }
  return acc.sum;
}

struct BoundReport {
  i64 p = 0;
  double max_abs = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  bool ok = false;
};

inline BoundReport make_bound_report(i64 p, double max_abs, double bound) {
  BoundReport r;
  r.p = p;
  r.max_abs = max_abs;
  r.bound = bound;
  r.ratio = max_abs / bound;
  r.ok = max_abs <= bound + 1e-6 * std::sqrt(static_cast<double>(p));
  return r;
}

// Weil: |K_u| <= 2*sqrt(p).
inline BoundReport check_weil(const KloostermanVector& kv) {
  return make_bound_report(kv.p, kv.max_abs(), 2.0 * std::sqrt(static_cast<double>(kv.p)));
}

inline BoundReport check_weil(const PrimeContext& ctx) { return check_weil(kloosterman_all(ctx)); }

// Sub-Weil barrier bound: |K_u| <= 1.43 * p^{2/3}.
inline BoundReport check_barrier(const KloostermanVector& kv) {
  return make_bound_report(kv.p, kv.max_abs(), 1.43 * std::pow(static_cast<double>(kv.p), 2.0 / 3.0));
}

inline BoundReport check_barrier(const PrimeContext& ctx) { return check_barrier(kloosterman_all(ctx)); }

// p = 2 and p = 3 sit outside PrimeContext; the barrier bound is checked
// there by direct enumeration of the full complex sums.
inline BoundReport check_barrier_tiny(i64 p) {
  if (p != 2 && p != 3) throw std::invalid_argument("check_barrier_tiny: only p = 2, 3");
  double max_abs = 0.0;
  for (i64 u = 1; u < p; ++u) {
    std::complex<double> s{0.0, 0.0};
    for (i64 x = 1; x < p; ++x) {
      // every unit mod 2 or 3 is its own inverse
      const double ang = 2.0 * kPi * ((x + u * x) % p) / p;
      s += std::complex<double>(std::cos(ang), std::sin(ang));
    }
    max_abs = std::max(max_abs, std::abs(s));
  }
  return make_bound_report(p, max_abs, 1.43 * std::pow(static_cast<double>(p), 2.0 / 3.0));
}

inline double power_moment_float(const KloostermanVector& kv, int n) {
  Kahan acc;
  for (std::size_t u = 1; u < kv.values.size(); ++u) {
    double t = 1.0;
    for (int i = 0; i < n; ++i) t *= kv.values[u];
    acc.add(t);
  }
  return acc.sum;
}

}  // namespace klv
