#pragma once

// Exact linear algebra over Z/p^N with minimal-valuation pivoting: Howell
// canonical forms (row-span canonicity over a non-domain needs the Howell
// completion, not just echelon), Smith structure, kernels read at precision
// N with a stated slack, and quotient module structure.  Every rank
// statement below is a statement "at precision": a divisor of valuation
// >= N - slack is indistinguishable from zero.

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "eigenweight/errors.hpp"
#include "eigenweight/int_linalg.hpp"
#include "eigenweight/padic.hpp"

namespace eigenweight {

class ZpMatrix {
 public:
  ZpMatrix(PadicContext ctx, std::size_t rows, std::size_t cols)
      : ctx_(std::move(ctx)), r_(rows), c_(cols), e_(rows * cols, 0) {}

  static ZpMatrix from_rows(const PadicContext& ctx,
                            const std::vector<std::vector<BigInt>>& rows) {
    std::size_t c = rows.empty() ? 0 : rows[0].size();
    ZpMatrix m(ctx, rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != c)
        throw invariant_error("ZpMatrix: ragged row list");
      for (std::size_t j = 0; j < c; ++j) m.set(i, j, rows[i][j]);
    }
    return m;
  }

  const PadicContext& context() const { return ctx_; }
  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }

  PadicInt at(std::size_t i, std::size_t j) const {
    return ctx_.element(e_[i * c_ + j]);
  }
  const BigInt& raw(std::size_t i, std::size_t j) const {
    return e_[i * c_ + j];
  }
  void set(std::size_t i, std::size_t j, const BigInt& v) {
    BigInt t = v % ctx_.modulus();
    if (t < 0) t += ctx_.modulus();
    e_[i * c_ + j] = t;
  }
  void set(std::size_t i, std::size_t j, const PadicInt& v) {
    if (!v.context().same(ctx_))
      throw invariant_error("ZpMatrix: entry context mismatch");
    e_[i * c_ + j] = v.residue();
  }

  bool operator==(const ZpMatrix& o) const {
    return r_ == o.r_ && c_ == o.c_ && ctx_.same(o.ctx_) && e_ == o.e_;
  }

 private:
  PadicContext ctx_;
  std::size_t r_, c_;
  std::vector<BigInt> e_;
};

namespace detail {

inline int residue_valuation(const BigInt& r, long p, int cap) {
  if (r == 0) return cap;
  int v = 0;
  BigInt t = r;
  while (t % p == 0 && v < cap) {
    t /= p;
    ++v;
  }
  return v;
}

}  // namespace detail

// free_rank counts invariant factors indistinguishable from zero at the
// recorded precision; torsion_orders is the divisor chain of the finite
// part.  Orders are kept as plain integers so prime-to-p parts coming from
// finite ambient factors can be merged in by callers.
struct GroupStructure {
  int free_rank = 0;
  std::vector<BigInt> torsion_orders;  // sorted by divisibility
  int digits = 0;                      // the N this was read at
  int slack = 0;

  bool operator==(const GroupStructure& o) const {
    return free_rank == o.free_rank && torsion_orders == o.torsion_orders;
  }
  BigInt torsion_size() const {
    BigInt t = 1;
    for (const auto& x : torsion_orders) t *= x;
    return t;
  }
};

// A saturated set of Z_p-independent vectors at precision.
struct LatticeBasis {
  std::size_t ambient_dim = 0;
  std::vector<std::vector<BigInt>> vectors;  // residues mod p^N
  bool saturated = false;
};

struct HowellForm {
  ZpMatrix h;          // the canonical form, rows sorted by pivot column
  ZpMatrix transform;  // transform * input = h over Z/p^N
  std::vector<std::size_t> pivot_cols;
  std::vector<int> pivot_vals;
  HowellForm(ZpMatrix hh, ZpMatrix tt)
      : h(std::move(hh)), transform(std::move(tt)) {}
};

// Canonical Howell form over Z/p^N.  Echelon with minimal-valuation
// pivoting, pivots normalized to p^a, above-pivot entries reduced mod p^a,
// and the span closed under the p^{N-a} completions so that the row span
// (including all its leading-zero members) is generated by the rows.
inline HowellForm howell_form(const ZpMatrix& m) {
  const auto& ctx = m.context();
  long p = ctx.prime();
  int N = ctx.digits();
  const BigInt& pn = ctx.modulus();
  std::size_t r = m.rows(), c = m.cols();

  struct WorkRow {
    std::vector<BigInt> v, t;
  };
  std::vector<WorkRow> pivots(c);
  std::vector<bool> has(c, false);

  auto scale = [&](WorkRow& w, const BigInt& u) {
    for (auto& x : w.v) x = (x * u) % pn;
    for (auto& x : w.t) x = (x * u) % pn;
  };
  auto subtract = [&](WorkRow& w, const WorkRow& piv, const BigInt& q) {
    for (std::size_t k = 0; k < c; ++k)
      w.v[k] = ((w.v[k] - q * piv.v[k]) % pn + pn) % pn;
    for (std::size_t k = 0; k < w.t.size(); ++k)
      w.t[k] = ((w.t[k] - q * piv.t[k]) % pn + pn) % pn;
  };

  // Inserts a row, returns true if the pivot table changed.
  auto insert = [&](WorkRow w) {
    bool changed = false;
    std::size_t j = 0;
    while (j < c) {
      if (w.v[j] == 0) {
        ++j;
        continue;
      }
      int a = detail::residue_valuation(w.v[j], p, N);
      if (!has[j]) {
        BigInt unit = w.v[j] / ctx.prime_power(a);
        scale(w, mod_inverse(unit, pn));
        pivots[j] = std::move(w);
        has[j] = true;
        return true;
      }
      int b = detail::residue_valuation(pivots[j].v[j], p, N);
      if (b <= a) {
        BigInt q = w.v[j] / ctx.prime_power(b);  // exact: val >= b
        subtract(w, pivots[j], q);
        ++j;
      } else {
        BigInt unit = w.v[j] / ctx.prime_power(a);
        scale(w, mod_inverse(unit, pn));
        std::swap(pivots[j], w);
        changed = true;
        // stay at j: the displaced old pivot row reduces against the new one
      }
    }
    return changed;
  };

  for (std::size_t i = 0; i < r; ++i) {
    WorkRow w;
    w.v.resize(c);
    for (std::size_t j = 0; j < c; ++j) w.v[j] = m.raw(i, j);
    w.t.assign(r, 0);
    w.t[i] = 1;
    insert(std::move(w));
  }

  // Howell completion: close the span under p^{N-a} * (pivot row).
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t j = 0; j < c; ++j) {
      if (!has[j]) continue;
      int a = detail::residue_valuation(pivots[j].v[j], p, N);
      if (a == 0) continue;
      WorkRow w = pivots[j];
      BigInt mult = ctx.prime_power(N - a);
      for (auto& x : w.v) x = (x * mult) % pn;
      for (auto& x : w.t) x = (x * mult) % pn;
      if (insert(std::move(w))) changed = true;
    }
  }

  // Reduce above-pivot entries to canonical representatives in [0, p^a).
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < c; ++j)
    if (has[j]) cols.push_back(j);
  for (std::size_t bi = 0; bi < cols.size(); ++bi) {
    std::size_t j = cols[bi];
    BigInt pa = ctx.prime_power(detail::residue_valuation(pivots[j].v[j], p, N));
    for (std::size_t ai = 0; ai < bi; ++ai) {
      BigInt q = pivots[cols[ai]].v[j] / pa;
      if (q != 0) subtract(pivots[cols[ai]], pivots[j], q);
    }
  }

  ZpMatrix h(ctx, cols.size(), c);
  ZpMatrix t(ctx, cols.size(), r);
  HowellForm out(h, t);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    const WorkRow& w = pivots[cols[i]];
    for (std::size_t j = 0; j < c; ++j) out.h.set(i, j, w.v[j]);
    for (std::size_t j = 0; j < r; ++j) out.transform.set(i, j, w.t[j]);
    out.pivot_cols.push_back(cols[i]);
    out.pivot_vals.push_back(
        detail::residue_valuation(w.v[cols[i]], p, N));
  }
  return out;
}

// Reduce a row vector against a Howell form; the zero vector comes back iff
// the input lies in the row span over Z/p^N.
inline std::vector<BigInt> reduce_against(const HowellForm& hf,
                                          std::vector<BigInt> v) {
  const auto& ctx = hf.h.context();
  long p = ctx.prime();
  int N = ctx.digits();
  const BigInt& pn = ctx.modulus();
  for (auto& x : v) {
    x %= pn;
    if (x < 0) x += pn;
  }
  for (std::size_t i = 0; i < hf.pivot_cols.size(); ++i) {
    std::size_t j = hf.pivot_cols[i];
    if (v[j] == 0) continue;
    int a = hf.pivot_vals[i];
    if (detail::residue_valuation(v[j], p, N) < a) continue;  // not reducible
    BigInt q = v[j] / ctx.prime_power(a);
    for (std::size_t k = 0; k < v.size(); ++k)
      v[k] = ((v[k] - q * hf.h.raw(i, k)) % pn + pn) % pn;
  }
  return v;
}

inline bool in_rowspan(const HowellForm& hf, const std::vector<BigInt>& v) {
  auto red = reduce_against(hf, v);
  for (const auto& x : red)
    if (x != 0) return false;
  return true;
}

// Diagonal valuations a_1 <= ... <= a_r of the Smith form over Z/p^N;
// an entry of N means "zero at precision".
struct SmithZp {
  std::vector<int> divisor_valuations;
  // right transform Q (cols x cols, invertible): P * M * Q is diagonal for
  // some invertible P.  Column j of Q maps onto the j-th diagonal slot.
  std::vector<std::vector<BigInt>> right;
};

inline SmithZp smith_with_right_transform(const ZpMatrix& m) {
  const auto& ctx = m.context();
  long p = ctx.prime();
  int N = ctx.digits();
  const BigInt& pn = ctx.modulus();
  std::size_t r = m.rows(), c = m.cols();

  std::vector<std::vector<BigInt>> a(r, std::vector<BigInt>(c));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) a[i][j] = m.raw(i, j);
  auto q = identity_mat(c);  // over Z/p^N
  for (auto& row : q) row.resize(c);

  std::size_t mm = std::min(r, c);
  SmithZp out;
  out.divisor_valuations.assign(mm, N);
  for (std::size_t t = 0; t < mm; ++t) {
    // minimal-valuation pivot in trailing block
    int best = N;
    std::size_t pi = t, pj = t;
    for (std::size_t i = t; i < r; ++i)
      for (std::size_t j = t; j < c; ++j) {
        int v = detail::residue_valuation(a[i][j], p, N);
        if (v < best) {
          best = v;
          pi = i;
          pj = j;
        }
      }
    if (best == N) break;
    std::swap(a[pi], a[t]);
    if (pj != t) {
      for (std::size_t i = 0; i < r; ++i) std::swap(a[i][pj], a[i][t]);
      for (std::size_t i = 0; i < c; ++i) std::swap(q[i][pj], q[i][t]);
    }
    // normalize pivot row so the pivot is exactly p^best
    BigInt unit = a[t][t] / ctx.prime_power(best);
    BigInt iu = mod_inverse(unit, pn);
    for (std::size_t j = t; j < c; ++j) a[t][j] = (a[t][j] * iu) % pn;
    BigInt pb = ctx.prime_power(best);
    // clear column (row ops) and row (col ops); all entries have val >= best
    for (std::size_t i = t + 1; i < r; ++i) {
      if (a[i][t] == 0) continue;
      BigInt f = a[i][t] / pb;
      for (std::size_t j = t; j < c; ++j)
        a[i][j] = ((a[i][j] - f * a[t][j]) % pn + pn) % pn;
    }
    for (std::size_t j = t + 1; j < c; ++j) {
      if (a[t][j] == 0) continue;
      BigInt f = a[t][j] / pb;
      for (std::size_t i = 0; i < r; ++i)
        a[i][j] = ((a[i][j] - f * a[i][t]) % pn + pn) % pn;
      for (std::size_t i = 0; i < c; ++i)
        q[i][j] = ((q[i][j] - f * q[i][t]) % pn + pn) % pn;
    }
    out.divisor_valuations[t] = best;
  }
  out.right = std::move(q);
  return out;
}

inline std::vector<int> smith_structure(const ZpMatrix& m) {
  return smith_with_right_transform(m).divisor_valuations;
}

// Saturated basis of {v : Mv = 0 mod p^{N-slack}}; rank is the column count
// minus the number of divisors nonzero at precision.  slack < 0 selects the
// context default.
inline LatticeBasis kernel_lattice(const ZpMatrix& m, int slack = -1) {
  const auto& ctx = m.context();
  int N = ctx.digits();
  if (slack < 0) slack = ctx.default_slack();
  std::size_t r = m.rows(), c = m.cols();
  auto s = smith_with_right_transform(m);

  LatticeBasis out;
  out.ambient_dim = c;
  for (std::size_t j = 0; j < c; ++j) {
    bool in_kernel = j >= std::min(r, c) || s.divisor_valuations[j] >= N - slack;
    if (!in_kernel) continue;
    std::vector<BigInt> v(c);
    for (std::size_t k = 0; k < c; ++k) v[k] = s.right[k][j];
    // divide out the p-content (saturation); transform columns are already
    // primitive, so this is normally a no-op
    int content = N;
    for (const auto& x : v)
      content = std::min(content,
                         detail::residue_valuation(x, ctx.prime(), N));
    if (content > 0 && content < N) {
      BigInt pc = ctx.prime_power(content);
      for (auto& x : v) x /= pc;
    }
    out.vectors.push_back(std::move(v));
  }
  out.saturated = true;
  return out;
}

// Invariant factors of (Z_p^rank x prod Z/p^{e_k}) / <generator rows>, read
// at precision.  Generator rows have rank free coordinates first, then one
// coordinate per ambient torsion factor.
inline GroupStructure quotient_structure(
    const std::vector<std::vector<BigInt>>& generators, int ambient_rank,
    const std::vector<int>& ambient_torsion_exponents,
    const PadicContext& ctx, int slack = -1) {
  int N = ctx.digits();
  if (slack < 0) slack = ctx.default_slack();
  std::size_t c = ambient_rank + ambient_torsion_exponents.size();
  std::vector<std::vector<BigInt>> rows;
  for (const auto& g : generators) {
    if (g.size() != c)
      throw invariant_error("quotient_structure: generator has wrong length");
    rows.push_back(g);
  }
  for (std::size_t k = 0; k < ambient_torsion_exponents.size(); ++k) {
    int e = ambient_torsion_exponents[k];
    if (e <= 0 || e >= N - slack)
      throw invariant_error(
          "quotient_structure: ambient torsion exponent out of certified range");
    std::vector<BigInt> rel(c, 0);
    rel[ambient_rank + k] = ctx.prime_power(e);
    rows.push_back(std::move(rel));
  }

  GroupStructure out;
  out.digits = N;
  out.slack = slack;
  if (rows.empty()) {
    out.free_rank = static_cast<int>(c);
    return out;
  }
  auto vals = smith_structure(ZpMatrix::from_rows(ctx, rows));
  int nonzero = 0;
  for (int a : vals) {
    if (a >= N - slack) continue;
    ++nonzero;
    if (a > 0) out.torsion_orders.push_back(ctx.prime_power(a));
  }
  std::sort(out.torsion_orders.begin(), out.torsion_orders.end());
  out.free_rank = static_cast<int>(c) - nonzero;
  return out;
}

}  // namespace eigenweight
