// Acceptance suite: every release-gating check, one pass/fail line each.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "kloverify/class_matrix.hpp"
#include "kloverify/cyclotomic.hpp"
#include "kloverify/elliptic.hpp"
#include "kloverify/kloosterman.hpp"
#include "kloverify/modp.hpp"
#include "kloverify/parallel.hpp"
#include "kloverify/supercharacter.hpp"

using namespace klv;

namespace {

int failures = 0;
constexpr std::uint64_t kSeed = 1729;

struct Criterion {
  int id;
  std::string name;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void finish(bool ok, const std::string& detail = "") {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %d: %s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", id, name.c_str(), secs,
                detail.empty() ? "" : " — ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

// 1. sixth moment from curve traces equals the matrix route, p <= 499
void criterion1() {
  Criterion c{1, "sixth-moment trace identity, exact for all p <= 499"};
  std::string detail;
  const auto primes = primes_in_range(5, 499);
  const auto bad = parallel_map<i64>(primes.size(), 0, [&](std::size_t i) -> i64 {
    PrimeContext ctx(primes[i]);
    return sixth_moment_from_traces(ctx) == moment_via_matrix(ctx, 6) ? 0 : primes[i];
  });
  bool ok = true;
  for (i64 b : bad)
    if (b) {
      ok = false;
      detail = "p = " + std::to_string(b);
    }
  c.finish(ok, detail);
}

// 2. matrix moments equal the cyclotomic oracle, 2 <= n <= 8, p <= 61
void criterion2() {
  Criterion c{2, "oracle triangulation V_2..V_8 for p <= 61"};
  bool ok = true;
  std::string detail;
  for (i64 p : primes_in_range(5, 61)) {
    PrimeContext ctx(p);
    const auto oracle = moment_oracle_range(ctx, 8);
    const auto matrix = moments_via_matrix(ctx, 8);
    for (int n = 2; n <= 8; ++n)
      if (matrix[static_cast<std::size_t>(n)] != oracle[static_cast<std::size_t>(n - 1)]) {
        ok = false;
        detail = "p = " + std::to_string(p) + ", n = " + std::to_string(n);
      }
  }
  c.finish(ok, detail);
}

// 3. closed forms V_1..V_4, p <= 499, zero tolerance
void criterion3() {
  Criterion c{3, "closed forms V_1..V_4 for all p <= 499"};
  const auto primes = primes_in_range(5, 499);
  const auto bad = parallel_map<i64>(primes.size(), 0, [&](std::size_t i) -> i64 {
    PrimeContext ctx(primes[i]);
    const auto cm = closed_moments(ctx);
    const auto v = moments_via_matrix(ctx, 4);
    CycInt first(primes[i]);
    for (i64 u = 1; u < primes[i]; ++u) first += kloosterman_cyc(ctx, u);
    const bool good =
        first.rational_value() == cm.v1 && v[2] == cm.v2 && v[3] == cm.v3 && v[4] == cm.v4;
    return good ? 0 : primes[i];
  });
  bool ok = true;
  std::string detail;
  for (i64 b : bad)
    if (b) {
      ok = false;
      detail = "p = " + std::to_string(b);
    }
  c.finish(ok, detail);
}

// 4. residual constants integral and inside their strict bounds
void criterion4() {
  Criterion c{4, "V_5/V_6 residuals integral, |a_p| < 2p and |b_p| < 2p^(3/2), p <= 499"};
  bool ok = true;
  std::string detail;
  for (i64 p : primes_in_range(7, 499)) {
    PrimeContext ctx(p);
    const auto v = moments_via_matrix(ctx, 6);
    try {
      const auto r = solve_residuals(ctx, v[5], v[6]);  // throws on non-integrality or bound breach
      if (!r.a_valid || (p > 7 && !r.b_valid)) {
        ok = false;
        detail = "p = " + std::to_string(p) + " missing residual";
      }
    } catch (const verification_error& e) {
      ok = false;
      detail = e.what();
    }
  }
  c.finish(ok, detail);
}

// 5. the exact identity chain at every prime p <= 499
void criterion5() {
  Criterion c{5, "exact identity suite (character sums, correlations, bridge, squared row), p <= 499"};
  const auto primes = primes_in_range(5, 499);
  std::vector<std::string> fails(primes.size());
  parallel_map<int>(primes.size(), 0, [&](std::size_t idx) {
    const i64 p = primes[idx];
    PrimeContext ctx(p);
    std::string& why = fails[idx];
    for (i64 k = 1; k <= p - 1; ++k) {
      const auto s = legendre_char_sums(ctx, k);
      if (s.s1 != -1 || s.s2 != p - 1 - ctx.legendre(k)) why = "character sums";
    }
    const auto eps = char_correlations(ctx);
    if (eps[1] != p - 2) why = "eps_1";
    if (eps[static_cast<std::size_t>(ctx.reduce(9))] != -1 - ctx.ell()) why = "eps_9";
    i64 total = 0;
    for (i64 k = 2; k <= p - 1; ++k) total += eps[static_cast<std::size_t>(k)];
    if (total != 4 + ctx.ell() - p) why = "eps sum";
    for (i64 k : valid_curve_indices(ctx))
      if (eps[static_cast<std::size_t>(k)] != -1 - count_points(ctx, k).trace) why = "trace bridge";
    if (squared_row_mismatch(ctx, row_power(ctx, 2).row, eps) != -1) why = "squared row";
    return 0;
  });
  bool ok = true;
  std::string detail;
  for (std::size_t i = 0; i < primes.size(); ++i)
    if (!fails[i].empty()) {
      ok = false;
      detail = "p = " + std::to_string(primes[i]) + ": " + fails[i];
    }
  c.finish(ok, detail);
}

// 6. quartic-to-cubic transform identity on random admissible quadruples
void criterion6() {
  Criterion c{6, "quartic transform identity, 200 random quadruples at p in {7,11,13,17,101}"};
  bool ok = true;
  std::string detail;
  std::mt19937_64 rng(kSeed);
  for (i64 p : {7, 11, 13, 17, 101}) {
    PrimeContext ctx(p);
    std::uniform_int_distribution<i64> pick(0, p - 1);
    int done = 0;
    while (done < 200) {
      const i64 b = pick(rng), cc = pick(rng), B = pick(rng), C = pick(rng);
      try {
        verify_transform(ctx, b, cc, B, C);  // throws verification_error on mismatch
        ++done;
      } catch (const std::domain_error&) {
        // inadmissible; redraw
      } catch (const verification_error& e) {
        ok = false;
        detail = e.what();
        ++done;
      }
    }
  }
  c.finish(ok, detail);
}

// 7. supercharacter-theory checks at p in {5, 7, 13, 31}
void criterion7() {
  Criterion c{7, "supercharacter theory: unitarity, diagonalization, normality, independence"};
  bool ok = true;
  std::string detail;
  for (i64 p : {5, 7, 13, 31}) {
    SuperTheory th{PrimeContext(p)};
    const auto rep = verify_theory(th, kSeed);
    const double tol = 1e-8 * static_cast<double>(th.N);
    if (!rep.ok(tol)) {
      ok = false;
      detail = "p = " + std::to_string(p);
    }
  }
  c.finish(ok, detail);
}

// 8. Weil + barrier + 8.5p^4 cap for every prime p <= 10^4 (2 and 3 direct)
void criterion8() {
  Criterion c{8, "bounds at scale: |K_u| <= 2 sqrt(p), 1.43 p^(2/3); V_6 <= 8.5 p^4; p <= 10^4"};
  bool ok = true;
  std::string detail;
  for (i64 tiny : {2, 3})
    if (!check_barrier_tiny(tiny).ok) {
      ok = false;
      detail = "p = " + std::to_string(tiny);
    }
  const auto primes = primes_in_range(5, 10000);
  const auto bad = parallel_map<i64>(primes.size(), 0, [&](std::size_t i) -> i64 {
    const i64 p = primes[i];
    PrimeContext ctx(p);
    const auto kv = kloosterman_all(ctx);
    if (!check_weil(kv).ok || !check_barrier(kv).ok) return p;
    if (p <= 499) {
      const BigInt v6 = moment_via_matrix(ctx, 6);
      const BigInt pp = p;
      if (2 * v6 > 17 * pp * pp * pp * pp) return p;
    } else {
      const double v6 = power_moment_float(kv, 6);
      if (v6 > 8.5 * std::pow(static_cast<double>(p), 4.0) * (1.0 + 1e-4)) return p;
    }
    return 0;
  });
  for (i64 b : bad)
    if (b) {
      ok = false;
      detail = "p = " + std::to_string(b);
    }
  c.finish(ok, detail);
}

// 9. mixed moments: closed second/third forms everywhere, fourth-moment
//    residual integral and Hasse-bounded on sampled admissible triples
void criterion9() {
  Criterion c{9, "mixed moments via matrices and oracle; fourth-moment residuals"};
  bool ok = true;
  std::string detail;
  for (i64 p : {5, 7, 11, 13}) {
    PrimeContext ctx(p);
    const BigInt pp = p;
    for (i64 a = 1; a < p; ++a) {
      const BigInt expect = a == 1 ? BigInt(pp * pp - pp) : BigInt(-pp);
      if (mixed_moment_via_matrix(ctx, {a}) != expect || mixed_moment_oracle(ctx, {a}) != expect) {
        ok = false;
        detail = "second moment, p = " + std::to_string(p);
      }
    }
    for (i64 a = 1; a < p; ++a)
      for (i64 b = 1; b < p; ++b) {
        const BigInt expect = BigInt(ctx.legendre(f_poly(ctx, a, b))) * pp * pp + 2 * pp;
        if (mixed_moment_via_matrix(ctx, {a, b}) != expect || mixed_moment_oracle(ctx, {a, b}) != expect) {
          ok = false;
          detail = "third moment, p = " + std::to_string(p);
        }
      }
  }
  std::mt19937_64 rng(kSeed);
  for (i64 p : {7, 11, 13}) {
    PrimeContext ctx(p);
    std::uniform_int_distribution<i64> pick(1, p - 1);
    int done = 0;
    while (done < 50) {
      const i64 a = pick(rng), b = pick(rng), cc = pick(rng);
      if ((b == 1 && cc == a) || (cc == 1 && b == a)) continue;  // resonant: quartic degenerates
      try {
        const auto r = fourth_mixed_residual(ctx, a, b, cc);
        if (!r.hasse_ok) {
          ok = false;
          detail = "fourth moment bound, p = " + std::to_string(p);
        }
      } catch (const verification_error& e) {
        ok = false;
        detail = e.what();
      }
      ++done;
    }
  }
  c.finish(ok, detail);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  std::printf(
      "[NOTE] criterion 10: the asymptotic statements (V_6 = 5p^4 + O(p^{7/2}), K_u = O(p^{2/3})) "
      "have no finite check; criteria 4 and 8 are their finite-p surrogates\n");
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
