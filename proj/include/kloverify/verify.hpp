#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "kloverify/class_matrix.hpp"
#include "kloverify/cyclotomic.hpp"
#include "kloverify/elliptic.hpp"
#include "kloverify/kloosterman.hpp"
#include "kloverify/modp.hpp"
#include "kloverify/report.hpp"
#include "kloverify/supercharacter.hpp"

namespace klv {

constexpr std::uint64_t kDefaultSeed = 1729;
constexpr i64 kOracleHardCap = 211;

struct VerifyOptions {
  std::uint64_t seed = kDefaultSeed;
  bool with_oracle = false;
  i64 oracle_limit = 61;   // cyclotomic cross-checks run for p up to this
  i64 theory_limit = 101;  // full supercharacter-theory checks are O(p^3)
  i64 mixed_limit = 31;    // exhaustive mixed-moment checks are O(p^4)
};

// Cheap proxies for "did any kernel run": cache hits must leave all of
// these at zero on a second pass.
struct WorkCounters {
  std::atomic<std::uint64_t> kernel_units{0};  // trig-kernel inner iterations
  std::atomic<std::uint64_t> exact_units{0};   // exact row/matrix cells touched
  std::atomic<std::uint64_t> curve_units{0};   // point-count evaluations
  std::uint64_t total() const { return kernel_units + exact_units + curve_units; }
};

namespace detail {
class Stopwatch {
public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double lap_ms() {
    const auto now = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(now - start_).count();
    start_ = now;
    return ms;
  }

private:
  std::chrono::steady_clock::time_point start_;
};
}  // namespace detail

// Runs the whole identity suite for one prime and returns the annotated
// report.  Exact checks run at every p; the O(p^3)+ theory and exhaustive
// mixed-moment checks stay below their scale limits.
inline MomentReport verify_prime(i64 p, const VerifyOptions& opt = {}, WorkCounters* counters = nullptr) {
  PrimeContext ctx(p);
  MomentReport rep;
  rep.p = p;
  detail::Stopwatch clock;
  const i64 N = p + 2;

  // --- exact moment machinery -------------------------------------------
  const int max_power = (opt.with_oracle && p <= opt.oracle_limit) ? 6 : 4;
  const auto rows = row_power_sequence(ctx, max_power);
  if (counters) counters->exact_units += static_cast<std::uint64_t>(max_power) * N * N;

  rep.moments.assign(static_cast<std::size_t>(max_power + 3), BigInt(0));
  for (int n = 2; n <= max_power + 2; ++n)
    rep.moments[static_cast<std::size_t>(n)] =
        moment_from_diag_entry(ctx, n, rows[static_cast<std::size_t>(n - 2)].row[0]);

  // V_1 has no matrix route; sum the exact cyclotomic values directly
  {
    CycInt v1(p);
    for (i64 u = 1; u < p; ++u) v1 += kloosterman_cyc(ctx, u);
    rep.moments[1] = v1.rational_value();
    if (counters) counters->exact_units += static_cast<std::uint64_t>(p) * (p - 1);
  }
  rep.timings_ms.emplace_back("exact", clock.lap_ms());

  // --- curves and correlation sums --------------------------------------
  const auto eps = char_correlations(ctx);
  for (i64 k : valid_curve_indices(ctx)) {
    const CurveRecord c = count_points(ctx, k);
    rep.traces.push_back({k, c.point_count, c.trace, eps[static_cast<std::size_t>(k)]});
  }
  if (counters) counters->curve_units += static_cast<std::uint64_t>(p) * static_cast<std::uint64_t>(p);
  rep.timings_ms.emplace_back("curves", clock.lap_ms());

  {
    bool ok = true;
    std::string detail;
    for (i64 k = 1; k <= p - 1 && ok; ++k) {
      const auto s = legendre_char_sums(ctx, k);
      if (s.s1 != -1 || s.s2 != p - 1 - ctx.legendre(k)) {
        ok = false;
        detail = "k = " + std::to_string(k);
      }
    }
    rep.add_verdict("legendre_sums", ok, detail);
  }

  {
    const bool special = eps[1] == p - 2 && eps[static_cast<std::size_t>(ctx.reduce(9))] == -1 - ctx.ell();
    i64 total = 0;
    for (i64 k = 2; k <= p - 1; ++k) total += eps[static_cast<std::size_t>(k)];
    const bool sum_ok = total == 4 + ctx.ell() - p;
    rep.add_verdict("correlations", special && sum_ok, special ? (sum_ok ? "" : "sum") : "special values");
  }

  {
    bool ok = true;
    std::string detail;
    for (const auto& t : rep.traces) {
      if (t.eps != -1 - t.trace || t.trace * t.trace > 4 * p) {
        ok = false;
        detail = "k = " + std::to_string(t.k);
        break;
      }
    }
    rep.add_verdict("trace_bridge", ok, detail);
  }

  {
    const i64 bad = squared_row_mismatch(ctx, rows[2].row, eps);
    rep.add_verdict("square_row", bad < 0, bad < 0 ? "" : "column " + std::to_string(bad));
  }

  {
    const BigInt by_squares = fourth_diag_from_squares(ctx, rows[2].row);
    const BigInt by_walks = rows[4].row[0].a;
    const BigInt by_eps = fourth_diag_from_correlations(ctx, eps);
    rep.add_verdict("fourth_power_diag", by_squares == by_walks && by_walks == by_eps);
  }

  {
    BigInt trace_sum = 0;
    for (const auto& t : rep.traces) trace_sum += BigInt(t.trace + 1) * (t.trace + 1);
    const BigInt pp = p;
    const BigInt rhs =
        4 * pp * pp * pp * pp - 8 * pp * pp * pp + (4 * ctx.ell() + 2) * pp * pp - 5 * pp - 1 + pp * pp * trace_sum;
    rep.add_verdict("sixth_moment_traces", rhs == rep.moments[6]);
  }

  {
    const ClosedMoments cm = closed_moments(ctx);
    const bool ok = rep.moments[1] == cm.v1 && rep.moments[2] == cm.v2 && rep.moments[3] == cm.v3 &&
                    rep.moments[4] == cm.v4;
    rep.add_verdict("closed_forms", ok);
  }

  if (p > 5) {
    try {
      const auto res = solve_residuals(ctx, rep.moments[5], rep.moments[6]);
      rep.a_p = res.a_p;
      rep.a_valid = res.a_valid;
      rep.add_verdict("residual_a", true, "a_p = " + res.a_p.str());
      if (res.b_valid) {
        rep.b_p = res.b_p;
        rep.b_valid = true;
        rep.add_verdict("residual_b", true, "b_p = " + res.b_p.str());
      }
    } catch (const verification_error& e) {
      rep.add_verdict("residuals", false, e.what());
    }
  }
  rep.timings_ms.emplace_back("identities", clock.lap_ms());

  // --- analytic bounds ----------------------------------------------------
  {
    const KloostermanVector kv = kloosterman_all(ctx);
    if (counters) counters->kernel_units += static_cast<std::uint64_t>(p - 1) * (p - 1);
    const BoundReport weil = check_weil(kv);
    const BoundReport barrier = check_barrier(kv);
    rep.add_verdict("weil", weil.ok, "ratio " + std::to_string(weil.ratio));
    rep.add_verdict("barrier", barrier.ok, "ratio " + std::to_string(barrier.ratio));
    const BigInt pp = p;
    rep.add_verdict("sixth_moment_bound", 2 * rep.moments[6] <= 17 * pp * pp * pp * pp);  // V6 <= 8.5 p^4
  }
  rep.timings_ms.emplace_back("kernel", clock.lap_ms());

  // --- supercharacter theory ----------------------------------------------
  if (p <= opt.theory_limit) {
    const SuperTheory th(ctx);
    const TheoryReport tr = verify_theory(th, opt.seed);
    if (counters) counters->exact_units += static_cast<std::uint64_t>(N) * N * N;
    rep.add_verdict("theory", tr.ok(1e-8 * static_cast<double>(N)));
  }
  rep.timings_ms.emplace_back("theory", clock.lap_ms());

  // --- mixed moments --------------------------------------------------------
  if (p <= opt.mixed_limit) {
    bool ok = true;
    std::string detail;
    const BigInt pp = p;
    for (i64 a = 1; a <= p - 1 && ok; ++a) {
      const BigInt expect = (a == 1) ? BigInt(pp * pp - pp) : BigInt(-pp);
      if (mixed_moment_via_matrix(ctx, {a}) != expect) {
        ok = false;
        detail = "second, a = " + std::to_string(a);
      }
    }
    std::mt19937_64 rng(opt.seed ^ static_cast<std::uint64_t>(p));
    std::uniform_int_distribution<i64> pick(1, p - 1);
    const bool exhaustive = p <= 13;
    const int pair_samples = exhaustive ? 0 : 100;
    auto check_third = [&](i64 a, i64 b) {
      const BigInt expect = BigInt(ctx.legendre(f_poly(ctx, a, b))) * pp * pp + 2 * pp;
      if (mixed_moment_via_matrix(ctx, {a, b}) != expect) {
        ok = false;
        detail = "third, (a,b) = (" + std::to_string(a) + "," + std::to_string(b) + ")";
      }
    };
    if (exhaustive) {
      for (i64 a = 1; a <= p - 1 && ok; ++a)
        for (i64 b = 1; b <= p - 1 && ok; ++b) check_third(a, b);
    } else {
      for (int s = 0; s < pair_samples && ok; ++s) check_third(pick(rng), pick(rng));
    }
    for (int s = 0; s < 10 && ok; ++s) {
      i64 a = pick(rng), b = pick(rng), c = pick(rng);
      if ((b == 1 && c == a) || (c == 1 && b == a)) continue;  // resonant: no Hasse-size trace
      try {
        if (!fourth_mixed_residual(ctx, a, b, c).hasse_ok) {
          ok = false;
          detail = "fourth trace bound";
        }
      } catch (const verification_error& e) {
        ok = false;
        detail = e.what();
      }
    }
    if (counters) counters->exact_units += static_cast<std::uint64_t>(N) * N;
    rep.add_verdict("mixed", ok, detail);
  }

  // --- independent cyclotomic oracle ---------------------------------------
  if (opt.with_oracle && p <= opt.oracle_limit) {
    bool ok = true;
    std::string detail;
    const auto vals = moment_oracle_range(ctx, 8);
    for (int n = 1; n <= 8 && ok; ++n) {
      const BigInt& lhs = vals[static_cast<std::size_t>(n - 1)];
      const BigInt& rhs = rep.moments[static_cast<std::size_t>(n)];
      if (lhs != rhs) {
        ok = false;
        detail = "V_" + std::to_string(n);
      }
    }
    std::mt19937_64 rng(opt.seed ^ 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(p));
    std::uniform_int_distribution<i64> pick(1, p - 1);
    for (int s = 0; s < 3 && ok; ++s) {
      const std::vector<i64> mults = {pick(rng), pick(rng)};
      if (mixed_moment_oracle(ctx, mults) != mixed_moment_via_matrix(ctx, mults)) {
        ok = false;
        detail = "mixed oracle";
      }
    }
    if (counters) counters->exact_units += static_cast<std::uint64_t>(p) * p * p;
    rep.add_verdict("oracle", ok, detail);
  }
  rep.timings_ms.emplace_back("cross_checks", clock.lap_ms());

  double total = 0.0;
  for (const auto& [name, ms] : rep.timings_ms) total += ms;
  rep.timings_ms.emplace_back("total", total);
  return rep;
}

}  // namespace klv
