#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kloverify/class_matrix.hpp"
#include "kloverify/modp.hpp"
#include "kloverify/quadint.hpp"

namespace klv {

// ---------------------------------------------------------------------------
// generic orbit machinery for (Z/nZ)^d under a matrix group
// ---------------------------------------------------------------------------

// Orbit partition of (Z/nZ)^d under the group generated by the given
// d x d matrices (row-major, acting on column vectors).  Returns an orbit
// id per flat base-n point index.  BFS; fine for the small n this library
// ever feeds it.
inline std::vector<int> group_orbits(i64 n, int d, const std::vector<std::vector<i64>>& generators) {
  i64 npoints = 1;
  for (int i = 0; i < d; ++i) npoints *= n;
  std::vector<int> orbit(static_cast<std::size_t>(npoints), -1);
  std::vector<i64> coords(static_cast<std::size_t>(d)), image(static_cast<std::size_t>(d));
  std::vector<i64> stack;
  int next_id = 0;
  for (i64 start = 0; start < npoints; ++start) {
    if (orbit[static_cast<std::size_t>(start)] >= 0) continue;
    const int id = next_id++;
    orbit[static_cast<std::size_t>(start)] = id;
    stack.assign(1, start);
    while (!stack.empty()) {
      i64 pt = stack.back();
      stack.pop_back();
      for (int i = d - 1; i >= 0; --i) {
        coords[static_cast<std::size_t>(i)] = pt % n;
        pt /= n;
      }
      for (const auto& g : generators) {
        i64 flat = 0;
        for (int r = 0; r < d; ++r) {
          i64 acc = 0;
          for (int cidx = 0; cidx < d; ++cidx)
            acc += g[static_cast<std::size_t>(r * d + cidx)] * coords[static_cast<std::size_t>(cidx)];
          image[static_cast<std::size_t>(r)] = ((acc % n) + n) % n;
          flat = flat * n + image[static_cast<std::size_t>(r)];
        }
        if (orbit[static_cast<std::size_t>(flat)] < 0) {
          orbit[static_cast<std::size_t>(flat)] = id;
          stack.push_back(flat);
        }
      }
    }
  }
  return orbit;
}

inline i64 primitive_root(const PrimeContext& ctx) {
  const i64 p = ctx.p();
  std::vector<i64> prime_factors;
  i64 m = p - 1;
  for (i64 d = 2; d * d <= m; ++d)
    if (m % d == 0) {
      prime_factors.push_back(d);
      while (m % d == 0) m /= d;
    }
  if (m > 1) prime_factors.push_back(m);
  auto pow_mod = [p](i64 b, i64 e) {
    i64 r = 1;
    b %= p;
    while (e) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  };
  for (i64 g = 2; g < p; ++g) {
    bool ok = true;
    for (i64 q : prime_factors)
      if (pow_mod(g, (p - 1) / q) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  throw std::logic_error("primitive_root: none found");
}

// ---------------------------------------------------------------------------
// the diag(u, u^{-1}) theory on F_p^2
// ---------------------------------------------------------------------------

using Point = std::pair<i64, i64>;

// Superclasses of F_p^2 under Gamma = {diag(u, u^{-1})}, in canonical order:
// the hyperbolas xy = 1, ..., xy = p-1, then {(0,u)}, {(u,0)}, {(0,0)}.
// Built from the explicit formulas and cross-checked against the generic
// orbit engine driven by a primitive-root generator.
struct SuperTheory {
  PrimeContext ctx;
  i64 N;
  std::vector<std::vector<Point>> orbits;
  std::vector<i64> sizes;
  std::vector<int> orbit_of_flat;  // x*p + y -> orbit index
  std::vector<Point> reps;         // canonical representatives
  std::vector<Point> reps2;        // a second representative per class

  explicit SuperTheory(const PrimeContext& c) : ctx(c), N(c.p() + 2) {
    const i64 p = ctx.p();
    orbits.resize(static_cast<std::size_t>(N));
    for (i64 i = 1; i <= p - 1; ++i) {
      auto& orb = orbits[static_cast<std::size_t>(i - 1)];
      orb.reserve(static_cast<std::size_t>(p - 1));
      for (i64 x = 1; x < p; ++x) orb.emplace_back(x, ctx.mul(i, ctx.inv(x)));
    }
    for (i64 u = 1; u < p; ++u) orbits[static_cast<std::size_t>(p - 1)].emplace_back(0, u);
    for (i64 u = 1; u < p; ++u) orbits[static_cast<std::size_t>(p)].emplace_back(u, 0);
    orbits[static_cast<std::size_t>(p + 1)].emplace_back(0, 0);

    sizes.resize(static_cast<std::size_t>(N));
    orbit_of_flat.assign(static_cast<std::size_t>(p * p), -1);
    for (i64 i = 0; i < N; ++i) {
      sizes[static_cast<std::size_t>(i)] = static_cast<i64>(orbits[static_cast<std::size_t>(i)].size());
      for (const auto& [x, y] : orbits[static_cast<std::size_t>(i)])
        orbit_of_flat[static_cast<std::size_t>(x * p + y)] = static_cast<int>(i);
    }
    for (int id : orbit_of_flat)
      if (id < 0) throw std::logic_error("SuperTheory: classes do not partition F_p^2");

    reps.resize(static_cast<std::size_t>(N));
    reps2.resize(static_cast<std::size_t>(N));
    for (i64 i = 1; i <= p - 1; ++i) {
      reps[static_cast<std::size_t>(i - 1)] = {1, i};
      reps2[static_cast<std::size_t>(i - 1)] = {2, ctx.mul(i, ctx.inv(2))};
    }
    reps[static_cast<std::size_t>(p - 1)] = {0, 1};
    reps2[static_cast<std::size_t>(p - 1)] = {0, 2};
    reps[static_cast<std::size_t>(p)] = {1, 0};
    reps2[static_cast<std::size_t>(p)] = {2, 0};
    reps[static_cast<std::size_t>(p + 1)] = {0, 0};
    reps2[static_cast<std::size_t>(p + 1)] = {0, 0};

    // the generic engine must carve out the same partition: the id pairing
    // has to be a bijection
    const i64 g = primitive_root(ctx);
    const std::vector<std::vector<i64>> gens = {{g, 0, 0, ctx.inv(g)}};
    const auto generic = group_orbits(p, 2, gens);
    std::vector<int> fwd(static_cast<std::size_t>(N), -1), bwd(static_cast<std::size_t>(N), -1);
    for (i64 pt = 0; pt < p * p; ++pt) {
      const int ga = generic[static_cast<std::size_t>(pt)];
      const int ha = orbit_of_flat[static_cast<std::size_t>(pt)];
      if (ga >= N || (fwd[static_cast<std::size_t>(ga)] >= 0 && fwd[static_cast<std::size_t>(ga)] != ha) ||
          (bwd[static_cast<std::size_t>(ha)] >= 0 && bwd[static_cast<std::size_t>(ha)] != ga))
        throw std::logic_error("SuperTheory: explicit classes disagree with the orbit engine");
      fwd[static_cast<std::size_t>(ga)] = ha;
      bwd[static_cast<std::size_t>(ha)] = ga;
    }
  }

  int orbit_of(Point v) const {
    return orbit_of_flat[static_cast<std::size_t>(ctx.reduce(v.first) * ctx.p() + ctx.reduce(v.second))];
  }
};

inline SuperTheory build_orbits(const PrimeContext& ctx) { return SuperTheory(ctx); }

// sigma_i evaluated at an arbitrary point by its defining exponential sum.
inline std::complex<double> supercharacter_value_at(const SuperTheory& th, i64 i, Point y) {
  const i64 p = th.ctx.p();
  std::complex<double> s{0.0, 0.0};
  for (const auto& [vx, vy] : th.orbits[static_cast<std::size_t>(i)]) {
    const double ang = 2.0 * kPi * static_cast<double>((vx * y.first + vy * y.second) % p) / static_cast<double>(p);
    s += std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return s;
}

// sigma_i(X_j) at the canonical representative.
inline std::complex<double> supercharacter_value(const SuperTheory& th, i64 i, i64 j) {
  return supercharacter_value_at(th, i, th.reps[static_cast<std::size_t>(j)]);
}

// The full table.  Values are real (every class is closed under negation);
// the largest imaginary part seen is kept for the numeric checks.
struct CharacterTable {
  i64 N = 0;
  std::vector<std::vector<double>> sigma;
  double max_imag = 0.0;
};

inline CharacterTable build_table(const SuperTheory& th) {
  CharacterTable t;
  t.N = th.N;
  t.sigma.assign(static_cast<std::size_t>(th.N), std::vector<double>(static_cast<std::size_t>(th.N), 0.0));
  for (i64 i = 0; i < th.N; ++i)
    for (i64 j = 0; j < th.N; ++j) {
      const auto v = supercharacter_value(th, i, j);
      t.sigma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v.real();
      t.max_imag = std::max(t.max_imag, std::abs(v.imag()));
    }
  return t;
}

using Matrix = std::vector<std::vector<double>>;

// U = (1/p) [ sigma_i(X_j) sqrt(|X_j|) / sqrt(|X_i|) ]: real, symmetric,
// unitary; the DFT compressed onto class functions.
inline Matrix build_unitary(const SuperTheory& th, const CharacterTable& table) {
  const double p = static_cast<double>(th.ctx.p());
  Matrix u(static_cast<std::size_t>(th.N), std::vector<double>(static_cast<std::size_t>(th.N), 0.0));
  for (i64 i = 0; i < th.N; ++i)
    for (i64 j = 0; j < th.N; ++j)
      u[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          table.sigma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
          std::sqrt(static_cast<double>(th.sizes[static_cast<std::size_t>(j)])) /
          (p * std::sqrt(static_cast<double>(th.sizes[static_cast<std::size_t>(i)])));
  return u;
}

// ---------------------------------------------------------------------------
// structure constants and exact counted class matrices
// ---------------------------------------------------------------------------

struct StructureConstants {
  i64 N = 0;
  std::vector<std::int32_t> c;  // c[(i*N + j)*N + k]
  std::int32_t at(i64 i, i64 j, i64 k) const {
    return c[static_cast<std::size_t>((i * N + j) * N + k)];
  }
};

// c_{i,j,k} = #{(x,y) in X_i x X_j : x + y = z} at the given representative
// z of X_k; a full slice over (i, j) in O(N p) point operations.
inline std::vector<std::vector<i64>> count_slice_at(const SuperTheory& th, Point z) {
  std::vector<std::vector<i64>> slice(static_cast<std::size_t>(th.N),
                                      std::vector<i64>(static_cast<std::size_t>(th.N), 0));
  for (i64 i = 0; i < th.N; ++i)
    for (const auto& [vx, vy] : th.orbits[static_cast<std::size_t>(i)]) {
      const int j = th.orbit_of({z.first - vx, z.second - vy});
      ++slice[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  return slice;
}

inline StructureConstants structure_constants(const SuperTheory& th) {
  StructureConstants sc;
  sc.N = th.N;
  sc.c.assign(static_cast<std::size_t>(th.N * th.N * th.N), 0);
  for (i64 k = 0; k < th.N; ++k) {
    const auto slice = count_slice_at(th, th.reps[static_cast<std::size_t>(k)]);
    for (i64 i = 0; i < th.N; ++i)
      for (i64 j = 0; j < th.N; ++j)
        sc.c[static_cast<std::size_t>((i * th.N + j) * th.N + k)] =
            static_cast<std::int32_t>(slice[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  }
  return sc;
}

using QuadMatrix = std::vector<std::vector<QuadInt>>;

// [T_i]_{j,k} = c_{i,j,k} sqrt(|X_k|) / sqrt(|X_j|), assembled from brute
// counts.  The size ratio is 1, sqrt(p-1) or 1/sqrt(p-1); in the last case
// the count is always a multiple of p-1, so the entry stays in Z[sqrt(p-1)].
inline QuadMatrix counted_class_matrix(const SuperTheory& th, i64 i) {
  const i64 m = th.ctx.p() - 1;
  QuadMatrix t(static_cast<std::size_t>(th.N),
               std::vector<QuadInt>(static_cast<std::size_t>(th.N), QuadInt::integer(0, m)));
  for (i64 k = 0; k < th.N; ++k) {
    const auto slice = count_slice_at(th, th.reps[static_cast<std::size_t>(k)]);
    for (i64 j = 0; j < th.N; ++j) {
      const i64 cnt = slice[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      const i64 sj = th.sizes[static_cast<std::size_t>(j)], sk = th.sizes[static_cast<std::size_t>(k)];
      QuadInt& e = t[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
      if (sj == sk) {
        e.a = cnt;
      } else if (sk > sj) {
        e.b = cnt;  // ratio sqrt(p-1)
      } else {
        if (cnt % m != 0) throw std::logic_error("counted_class_matrix: entry escapes Z[sqrt(p-1)]");
        e.b = cnt / m;  // ratio 1/sqrt(p-1)
      }
    }
  }
  return t;
}

inline QuadMatrix quad_matmul(const QuadMatrix& x, const QuadMatrix& y) {
  const std::size_t n = x.size();
  QuadMatrix out(n, std::vector<QuadInt>(n, QuadInt{0, 0, x[0][0].m}));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      QuadInt acc{0, 0, x[0][0].m};
      for (std::size_t j = 0; j < n; ++j) acc += x[i][j] * y[j][k];
      out[i][k] = acc;
    }
  return out;
}

// ---------------------------------------------------------------------------
// numeric + exact verification of the whole theory
// ---------------------------------------------------------------------------

struct TheoryReport {
  i64 p = 0;
  double table_imag = 0.0;        // largest imaginary part in the table
  double u_symmetry = 0.0;        // max |U - U^T|
  double u_unitarity = 0.0;       // max |U U^T - I|
  double diag_residual = 0.0;     // max |T_i U - U D_i| over checked i
  double product_residual = 0.0;  // sigma_i sigma_j = sum_k c_{ijk} sigma_k
  double constancy_residual = 0.0;  // table value at a second representative
  bool normal_exact = false;        // T_i^T T_i = T_i T_i^T as exact matrices
  bool commute_exact = false;       // sampled pairs T_i T_j = T_j T_i
  bool reps_independent = false;    // counts agree at a second representative
  bool closed_form_match = false;   // counted T_a equals the closed-form view

  bool ok(double tol) const {
    return table_imag <= tol && u_symmetry <= tol && u_unitarity <= tol && diag_residual <= tol &&
           product_residual <= tol && constancy_residual <= tol && normal_exact && commute_exact &&
           reps_independent && closed_form_match;
  }
};

// Exhaustive below p = 13; random-sampled (seeded) above, where the full
// N^3/N^4 sweeps would add nothing but time.
inline TheoryReport verify_theory(const SuperTheory& th, std::uint64_t seed = 1729) {
  const i64 p = th.ctx.p();
  const i64 N = th.N;
  TheoryReport rep;
  rep.p = p;
  const bool full = p <= 13;
  std::mt19937_64 rng(seed ^ static_cast<std::uint64_t>(p));
  std::uniform_int_distribution<i64> pick(0, N - 1);
  std::uniform_int_distribution<i64> pick_interior(1, p - 1);

  const CharacterTable table = build_table(th);
  rep.table_imag = table.max_imag;
  const Matrix u = build_unitary(th, table);
  for (i64 i = 0; i < N; ++i)
    for (i64 j = 0; j < N; ++j) {
      rep.u_symmetry = std::max(rep.u_symmetry, std::abs(u[i][j] - u[j][i]));
      double dot = 0.0;
      for (i64 k = 0; k < N; ++k) dot += u[i][k] * u[j][k];
      rep.u_unitarity = std::max(rep.u_unitarity, std::abs(dot - (i == j ? 1.0 : 0.0)));
    }

  // supercharacters are constant on superclasses
  {
    const int samples = full ? static_cast<int>(N * N) : 64;
    for (int s = 0; s < samples; ++s) {
      const i64 i = full ? s / N : pick(rng);
      const i64 j = full ? s % N : pick(rng);
      const auto v2 = supercharacter_value_at(th, i, th.reps2[static_cast<std::size_t>(j)]);
      rep.constancy_residual = std::max(
          rep.constancy_residual,
          std::abs(v2.real() - table.sigma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) +
              std::abs(v2.imag()));
    }
  }

  // T_i U = U D_i, with T_i counted exactly and embedded
  {
    std::vector<i64> which;
    if (full)
      for (i64 i = 0; i < N; ++i) which.push_back(i);
    else
      for (int s = 0; s < 6; ++s) which.push_back(pick(rng));
    for (i64 i : which) {
      const QuadMatrix t = counted_class_matrix(th, i);
      for (i64 r = 0; r < N; ++r)
        for (i64 cidx = 0; cidx < N; ++cidx) {
          double lhs = 0.0;
          for (i64 j = 0; j < N; ++j) lhs += t[r][j].to_double() * u[j][cidx];
          const double rhs = u[r][cidx] * table.sigma[static_cast<std::size_t>(i)][static_cast<std::size_t>(cidx)];
          rep.diag_residual = std::max(rep.diag_residual, std::abs(lhs - rhs));
        }
    }
  }

  // product identity through an exactly counted (i, j) slice
  {
    const int samples = full ? 64 : 24;
    rep.product_residual = 0.0;
    for (int s = 0; s < samples; ++s) {
      const i64 i = pick(rng), j = pick(rng), l = pick(rng);
      std::vector<i64> cij(static_cast<std::size_t>(N), 0);
      for (const auto& [vx, vy] : th.orbits[static_cast<std::size_t>(i)])
        for (const auto& [wx, wy] : th.orbits[static_cast<std::size_t>(j)])
          ++cij[static_cast<std::size_t>(th.orbit_of({vx + wx, vy + wy}))];
      double rhs = 0.0;
      for (i64 k = 0; k < N; ++k) {
        if (cij[static_cast<std::size_t>(k)] % th.sizes[static_cast<std::size_t>(k)] != 0)
          throw verification_error("verify_theory: pair counts not constant on a class");
        rhs += static_cast<double>(cij[static_cast<std::size_t>(k)] / th.sizes[static_cast<std::size_t>(k)]) *
               table.sigma[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
      }
      const double lhs = table.sigma[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] *
                         table.sigma[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)];
      rep.product_residual = std::max(rep.product_residual, std::abs(lhs - rhs));
    }
  }

  // exact normality and sampled exact commutativity
  {
    std::vector<i64> which;
    if (full)
      for (i64 i = 0; i < N; ++i) which.push_back(i);
    else
      for (int s = 0; s < 3; ++s) which.push_back(pick(rng));
    rep.normal_exact = true;
    std::vector<QuadMatrix> mats;
    for (i64 i : which) {
      QuadMatrix t = counted_class_matrix(th, i);
      QuadMatrix tt(t[0].size(), std::vector<QuadInt>(t.size(), QuadInt{0, 0, p - 1}));
      for (std::size_t r = 0; r < t.size(); ++r)
        for (std::size_t c2 = 0; c2 < t.size(); ++c2) tt[c2][r] = t[r][c2];
      if (quad_matmul(tt, t) != quad_matmul(t, tt)) rep.normal_exact = false;
      mats.push_back(std::move(t));
    }
    rep.commute_exact = true;
    const std::size_t pairs = std::min<std::size_t>(mats.size() * (mats.size() - 1) / 2, 8);
    std::size_t done = 0;
    for (std::size_t x = 0; x < mats.size() && done < pairs; ++x)
      for (std::size_t y = x + 1; y < mats.size() && done < pairs; ++y, ++done)
        if (quad_matmul(mats[x], mats[y]) != quad_matmul(mats[y], mats[x])) rep.commute_exact = false;
  }

  // representative independence of the counts
  {
    rep.reps_independent = true;
    const i64 kmax = full ? N : 6;
    for (i64 s = 0; s < kmax; ++s) {
      const i64 k = full ? s : pick(rng);
      const auto s1 = count_slice_at(th, th.reps[static_cast<std::size_t>(k)]);
      const auto s2 = count_slice_at(th, th.reps2[static_cast<std::size_t>(k)]);
      if (s1 != s2) rep.reps_independent = false;
    }
  }

  // counted matrices agree with the closed-form entries used at scale
  {
    rep.closed_form_match = true;
    std::vector<i64> which;
    if (full)
      for (i64 a = 1; a <= p - 1; ++a) which.push_back(a);
    else
      for (int s = 0; s < 4; ++s) which.push_back(pick_interior(rng));
    for (i64 a : which) {
      const QuadMatrix t = counted_class_matrix(th, a - 1);
      const ClassMatrix view(th.ctx, a);
      for (i64 r = 0; r < N && rep.closed_form_match; ++r)
        for (i64 c2 = 0; c2 < N; ++c2) {
          const auto e = view.at(r, c2);
          if (t[static_cast<std::size_t>(r)][static_cast<std::size_t>(c2)] !=
              QuadInt(e.c, e.s, p - 1)) {
            rep.closed_form_match = false;
            break;
          }
        }
    }
  }

  return rep;
}

}  // namespace klv
