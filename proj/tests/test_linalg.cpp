#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "eigenweight/int_linalg.hpp"
#include "eigenweight/zp_linalg.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace eigenweight;

namespace {

IntMat random_int_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c,
                         int lo, int hi) {
  IntMat m(r, IntVec(c));
  for (auto& row : m)
    for (auto& x : row) x = testutil::random_int(rng, lo, hi);
  return m;
}

// small random unimodular matrix: product of elementary operations
IntMat random_unimodular(std::mt19937_64& rng, std::size_t n) {
  IntMat u = identity_mat(n);
  for (int step = 0; step < 12; ++step) {
    std::size_t i = rng() % n, j = rng() % n;
    if (i == j) continue;
    BigInt q = testutil::random_int(rng, -3, 3);
    for (std::size_t k = 0; k < n; ++k) u[i][k] += q * u[j][k];
  }
  return u;
}

}  // namespace

TEST_CASE("bareiss determinant") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    std::size_t n = 1 + rng() % 5;
    auto m = random_int_matrix(rng, n, n, -9, 9);
    CHECK(det_bareiss(m) == testutil::det_cofactor(m));
  }
}

TEST_CASE("integer smith form against minors oracle") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 60; ++i) {
    std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
    auto m = random_int_matrix(rng, r, c, -9, 9);
    auto s = smith_z(m);
    auto expect = testutil::invariant_factors_minors(m);
    REQUIRE(s.divisors.size() == expect.size());
    for (std::size_t k = 0; k < expect.size(); ++k)
      CHECK(s.divisors[k] == expect[k]);
    // transforms: left * m * right = diag
    auto prod = mat_mul(mat_mul(s.left, m), s.right);
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < c; ++b) {
        BigInt want = (a == b && a < s.divisors.size()) ? s.divisors[a] : 0;
        CHECK(prod[a][b] == want);
      }
    // right * right_inv = I
    auto ri = mat_mul(s.right, s.right_inv);
    CHECK(ri == identity_mat(c));
  }
}

TEST_CASE("integer kernel and saturation") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 40; ++i) {
    std::size_t r = 1 + rng() % 3, c = 2 + rng() % 3;
    auto m = random_int_matrix(rng, r, c, -6, 6);
    auto ker = kernel_z(m);
    for (const auto& v : ker)
      for (std::size_t a = 0; a < r; ++a) {
        BigInt dot = 0;
        for (std::size_t b = 0; b < c; ++b) dot += m[a][b] * v[b];
        CHECK(dot == 0);
      }
  }
  // saturation of 2*(1,1) and (2,0) is the full lattice spanned by (1,1),(1,0)... check membership
  IntMat rows = {{2, 2}, {2, 0}};
  auto sat = saturate_rows(rows);
  CHECK(in_rowspan_z(sat, {1, 1}));
  CHECK(in_rowspan_z(sat, {1, 0}));
  // rank-1 case: saturation of (2,4) is (1,2)
  auto sat2 = saturate_rows({{2, 4}});
  REQUIRE(sat2.size() == 1);
  CHECK(sat2[0] == IntVec{1, 2});
}

TEST_CASE("hnf membership") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 40; ++i) {
    std::size_t r = 1 + rng() % 3, c = 2 + rng() % 3;
    auto m = random_int_matrix(rng, r, c, -6, 6);
    auto h = hnf_rows(m);
    // every original row is in the span; random combinations are too
    for (const auto& row : m) CHECK(in_rowspan_z(h, row));
    IntVec comb(c, 0);
    for (const auto& row : m) {
      int q = testutil::random_int(rng, -4, 4);
      for (std::size_t k = 0; k < c; ++k) comb[k] += q * row[k];
    }
    CHECK(in_rowspan_z(h, comb));
    // HNF is canonical under unimodular row changes
    auto u = random_unimodular(rng, r);
    auto h2 = hnf_rows(mat_mul(u, m));
    CHECK(h == h2);
  }
}

TEST_CASE("lll finds planted short vectors") {
  std::mt19937_64 rng(9);
  // lattice spanned by (1,1,1) and two huge random vectors
  for (int i = 0; i < 20; ++i) {
    BigInt big = BigInt("1000000000000000000000");
    IntMat basis = {{1, 1, 1},
                    {0, big, testutil::random_int(rng, 1, 1000) * big},
                    {0, 0, big * big}};
    std::shuffle(basis.begin(), basis.end(), rng);
    // mix rows so the short vector is hidden
    for (int s = 0; s < 6; ++s) {
      std::size_t a = rng() % 3, b = rng() % 3;
      if (a == b) continue;
      BigInt q = testutil::random_int(rng, -2, 2);
      for (std::size_t k = 0; k < 3; ++k) basis[a][k] += q * basis[b][k];
    }
    std::vector<BigRat> star;
    auto red = lll_reduce(basis, &star);
    bool found = false;
    for (const auto& v : red)
      if (v == IntVec{1, 1, 1} || v == IntVec{-1, -1, -1}) found = true;
    CHECK(found);
    REQUIRE(star.size() == 3);
  }
}

TEST_CASE("howell form basics") {
  PadicContext ctx(5, 8);
  auto id = ZpMatrix::from_rows(ctx, {{1, 0}, {0, 1}});
  auto hf = howell_form(id);
  CHECK(hf.h == id);

  PadicContext ctx6(5, 8);
  auto m = ZpMatrix::from_rows(ctx6, {{5, 0}, {0, 1}});
  auto h2 = howell_form(m);
  REQUIRE(h2.pivot_vals.size() == 2);
  CHECK(h2.pivot_vals[0] == 1);
  CHECK(h2.pivot_vals[1] == 0);

  // the classic non-domain case: span of (p, 1) needs a completion row
  auto one_row = ZpMatrix::from_rows(ctx, {{5, 1}});
  auto h3 = howell_form(one_row);
  REQUIRE(h3.pivot_cols.size() == 2);
  CHECK(h3.pivot_cols[0] == 0);
  CHECK(h3.pivot_cols[1] == 1);
  // (0, 5^7) = 5^7 * (5,1) is in the span and must be generated
  BigInt p7 = ctx.prime_power(7);
  CHECK(in_rowspan(h3, {0, p7}));
}

TEST_CASE("howell form: span preservation and canonicity") {
  std::mt19937_64 rng(10);
  PadicContext ctx(5, 8);
  for (int trial = 0; trial < 30; ++trial) {
    ZpMatrix m(ctx, 4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        m.set(i, j, testutil::random_below(rng, ctx.modulus()));
    auto hf = howell_form(m);

    // transform certificate: transform * m == h
    for (std::size_t i = 0; i < hf.h.rows(); ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        BigInt acc = 0;
        for (std::size_t k = 0; k < 4; ++k)
          acc += hf.transform.raw(i, k) * m.raw(k, j);
        acc %= ctx.modulus();
        CHECK(acc == hf.h.raw(i, j));
      }
    // original rows reduce to zero against h
    for (std::size_t i = 0; i < 4; ++i) {
      std::vector<BigInt> row(4);
      for (std::size_t j = 0; j < 4; ++j) row[j] = m.raw(i, j);
      CHECK(in_rowspan(hf, row));
    }
    // canonicity: a scrambled generating set of the same span gives the same h
    std::vector<std::vector<BigInt>> gen;
    for (std::size_t i = 0; i < 4; ++i) {
      std::vector<BigInt> row(4, 0);
      for (std::size_t j = 0; j < 4; ++j) row[j] = m.raw(i, j);
      gen.push_back(row);
    }
    // random invertible-over-Z/p^N mixing: add unit multiples and swap
    for (int s = 0; s < 8; ++s) {
      std::size_t a = rng() % gen.size(), b = rng() % gen.size();
      if (a == b) continue;
      BigInt q = testutil::random_below(rng, ctx.modulus());
      for (std::size_t k = 0; k < 4; ++k)
        gen[a][k] = (gen[a][k] + q * gen[b][k]) % ctx.modulus();
    }
    auto hf2 = howell_form(ZpMatrix::from_rows(ctx, gen));
    CHECK(hf.h == hf2.h);
  }
}

TEST_CASE("zp smith structure") {
  PadicContext ctx(5, 10);
  ZpMatrix z(ctx, 3, 3);
  auto vals = smith_structure(z);
  CHECK(vals == std::vector<int>{10, 10, 10});

  auto d = ZpMatrix::from_rows(ctx, {{1, 0, 0}, {0, 5, 0}, {0, 0, 25}});
  CHECK(smith_structure(d) == std::vector<int>{0, 1, 2});
}

TEST_CASE("zp smith matches exact integer smith p-parts") {
  std::mt19937_64 rng(11);
  for (long p : {3L, 5L, 7L}) {
    PadicContext ctx(p, 30);
    for (int trial = 0; trial < 40; ++trial) {
      std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
      auto m = random_int_matrix(rng, r, c, -20, 20);
      auto oracle = testutil::invariant_factors_minors(m);
      ZpMatrix zm(ctx, r, c);
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) zm.set(i, j, m[i][j]);
      auto vals = smith_structure(zm);
      REQUIRE(vals.size() == oracle.size());
      for (std::size_t k = 0; k < vals.size(); ++k)
        CHECK(vals[k] == testutil::valuation_of(oracle[k], p, ctx.digits()));
    }
  }
}

TEST_CASE("kernel lattice") {
  PadicContext ctx(5, 8);
  int slack = 2;

  ZpMatrix z(ctx, 2, 3);
  auto full = kernel_lattice(z, slack);
  CHECK(full.vectors.size() == 3);

  auto m = ZpMatrix::from_rows(ctx, {{1, 1}});
  auto k = kernel_lattice(m, slack);
  REQUIRE(k.vectors.size() == 1);
  // the kernel is spanned by (1, -1) up to a unit
  BigInt a = k.vectors[0][0], b = k.vectors[0][1];
  CHECK((a + b) % ctx.modulus() == 0);
  CHECK(a % 5 != 0);

  // plant a kernel vector and recover it
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    // honest rank-2 rows orthogonal to v = (1, 2, 3), then mixed by unit
    // row operations so the rank stays exactly 2 at precision
    BigInt inv3 = mod_inverse(BigInt(3), ctx.modulus());
    BigInt a3 = (ctx.modulus() - inv3) % ctx.modulus();           // -1/3
    BigInt b3 = (ctx.modulus() - 2 * inv3 % ctx.modulus()) % ctx.modulus();
    std::vector<std::vector<BigInt>> rows = {{1, 0, a3}, {0, 1, b3}};
    for (int s = 0; s < 4; ++s) {
      std::size_t a = rng() % 2, b = 1 - a;
      BigInt q = testutil::random_below(rng, ctx.modulus());
      for (std::size_t k = 0; k < 3; ++k)
        rows[a][k] = (rows[a][k] + q * rows[b][k]) % ctx.modulus();
    }
    auto mk = ZpMatrix::from_rows(ctx, rows);
    auto kb = kernel_lattice(mk, slack);
    // v must reduce to zero against the basis (membership at precision)
    auto hb = howell_form(ZpMatrix::from_rows(ctx, kb.vectors));
    auto rem = reduce_against(hb, {1, 2, 3});
    for (const auto& x : rem)
      CHECK(testutil::valuation_of(x, 5, ctx.digits()) >= ctx.digits() - slack);
    // and M * (kernel vectors) = 0 at precision
    for (const auto& v : kb.vectors)
      for (std::size_t i = 0; i < 2; ++i) {
        BigInt acc = 0;
        for (std::size_t j = 0; j < 3; ++j) acc += mk.raw(i, j) * v[j];
        acc %= ctx.modulus();
        CHECK(testutil::valuation_of(acc, 5, ctx.digits()) >=
              ctx.digits() - slack);
      }
  }
}

TEST_CASE("quotient structure") {
  PadicContext ctx(5, 12);
  int slack = 3;

  // sub = ambient: trivial quotient
  auto full = quotient_structure({{1, 0}, {0, 1}}, 2, {}, ctx, slack);
  CHECK(full.free_rank == 0);
  CHECK(full.torsion_orders.empty());

  // sub = 0 inside Z_p^2
  auto zero = quotient_structure({}, 2, {}, ctx, slack);
  CHECK(zero.free_rank == 2);

  // sub generated by (p, 0): free rank 1, torsion Z/5
  auto t = quotient_structure({{5, 0}}, 2, {}, ctx, slack);
  CHECK(t.free_rank == 1);
  REQUIRE(t.torsion_orders.size() == 1);
  CHECK(t.torsion_orders[0] == 5);

  // invariance under unimodular change of generating set
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::vector<BigInt>> gens;
    std::size_t g = 2 + rng() % 2;
    for (std::size_t i = 0; i < g; ++i) {
      std::vector<BigInt> row(3);
      for (auto& x : row)
        x = BigInt(testutil::random_int(rng, 0, 60));
      gens.push_back(row);
    }
    auto s1 = quotient_structure(gens, 3, {}, ctx, slack);
    auto u = random_unimodular(rng, g);
    std::vector<std::vector<BigInt>> mixed(g, std::vector<BigInt>(3, 0));
    for (std::size_t i = 0; i < g; ++i)
      for (std::size_t k = 0; k < g; ++k)
        for (std::size_t j = 0; j < 3; ++j)
          mixed[i][j] += u[i][k] * gens[k][j];
    auto s2 = quotient_structure(mixed, 3, {}, ctx, slack);
    CHECK(s1 == s2);
  }

  // ambient torsion: Z_p x Z/p^2 modulo <(p, 1)>
  auto q = quotient_structure({{5, 1}}, 1, {2}, ctx, slack);
  // (p,1): eliminating the torsion coordinate leaves Z_p / <p * (p^2... >
  // structure check: total quotient is Z_p (free of rank 1) x trivial? No:
  // relations (5,1),(0,25): smith of [[5,1],[0,25]] has divisors (1, 125):
  // quotient = Z/125... at precision: torsion [125], free 0? cols=2, nonzero=2.
  CHECK(q.free_rank == 0);
  REQUIRE(q.torsion_orders.size() == 1);
  CHECK(q.torsion_orders[0] == 125);
}
