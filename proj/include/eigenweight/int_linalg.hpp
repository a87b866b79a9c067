#pragma once

// Exact dense linear algebra over Z for small matrices: Bareiss determinants,
// Smith normal form with transforms, Hermite form, kernels, saturation of
// row lattices, and LLL reduction.  Everything here is desk scale (dimensions
// in the single digits); no attempt at asymptotic efficiency.

#include <algorithm>
#include <cstddef>
#include <vector>

#include "eigenweight/errors.hpp"
#include "eigenweight/padic.hpp"

namespace eigenweight {

using IntVec = std::vector<BigInt>;
using IntMat = std::vector<IntVec>;

inline IntMat identity_mat(std::size_t n) {
  IntMat m(n, IntVec(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline IntMat mat_mul(const IntMat& a, const IntMat& b) {
  std::size_t r = a.size(), inner = b.size(), c = b.empty() ? 0 : b[0].size();
  IntMat out(r, IntVec(c, 0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < inner; ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < c; ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

// Fraction-free Gaussian elimination; exact determinant of a square matrix.
inline BigInt det_bareiss(IntMat a) {
  std::size_t n = a.size();
  if (n == 0) return 1;
  BigInt sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t piv = k + 1;
      while (piv < n && a[piv][k] == 0) ++piv;
      if (piv == n) return 0;
      std::swap(a[k], a[piv]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        BigInt num = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        a[i][j] = num / prev;  // exact by Bareiss
      }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

// Smith normal form with transforms: left * M * right = diag(divisors),
// left and right unimodular.  right_inv tracks the inverse of right so
// callers can read off saturations without a separate inversion.
struct SmithZ {
  std::vector<BigInt> divisors;  // nonnegative, divisor chain d_i | d_{i+1}
  IntMat left, right, right_inv;
};

inline SmithZ smith_z(IntMat a) {
  std::size_t r = a.size(), c = r ? a[0].size() : 0;
  SmithZ out;
  out.left = identity_mat(r);
  out.right = identity_mat(c);
  out.right_inv = identity_mat(c);

  auto row_sub = [&](std::size_t i, std::size_t j, const BigInt& q) {
    for (std::size_t k = 0; k < c; ++k) a[i][k] -= q * a[j][k];
    for (std::size_t k = 0; k < r; ++k) out.left[i][k] -= q * out.left[j][k];
  };
  auto col_sub = [&](std::size_t i, std::size_t j, const BigInt& q) {
    for (std::size_t k = 0; k < r; ++k) a[k][i] -= q * a[k][j];
    for (std::size_t k = 0; k < c; ++k) out.right[k][i] -= q * out.right[k][j];
    for (std::size_t k = 0; k < c; ++k)
      out.right_inv[j][k] += q * out.right_inv[i][k];
  };
  auto row_swap = [&](std::size_t i, std::size_t j) {
    std::swap(a[i], a[j]);
    std::swap(out.left[i], out.left[j]);
  };
  auto col_swap = [&](std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < r; ++k) std::swap(a[k][i], a[k][j]);
    for (std::size_t k = 0; k < c; ++k)
      std::swap(out.right[k][i], out.right[k][j]);
    std::swap(out.right_inv[i], out.right_inv[j]);
  };
  auto row_neg = [&](std::size_t i) {
    for (std::size_t k = 0; k < c; ++k) a[i][k] = -a[i][k];
    for (std::size_t k = 0; k < r; ++k) out.left[i][k] = -out.left[i][k];
  };

  std::size_t m = std::min(r, c);
  for (std::size_t t = 0; t < m; ++t) {
    // locate a smallest nonzero pivot in the trailing block
    std::size_t pi = t, pj = t;
    BigInt best = 0;
    for (std::size_t i = t; i < r; ++i)
      for (std::size_t j = t; j < c; ++j) {
        BigInt v = abs(a[i][j]);
        if (v != 0 && (best == 0 || v < best)) {
          best = v;
          pi = i;
          pj = j;
        }
      }
    if (best == 0) break;
    if (pi != t) row_swap(t, pi);
    if (pj != t) col_swap(t, pj);

    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < r; ++i) {
        if (a[i][t] == 0) continue;
        BigInt q = a[i][t] / a[t][t];
        row_sub(i, t, q);
        if (a[i][t] != 0) {
          row_swap(t, i);
          clean = false;
        }
      }
      if (!clean) continue;
      for (std::size_t j = t + 1; j < c; ++j) {
        if (a[t][j] == 0) continue;
        BigInt q = a[t][j] / a[t][t];
        col_sub(j, t, q);
        if (a[t][j] != 0) {
          col_swap(t, j);
          clean = false;
        }
      }
      if (!clean) continue;
      // enforce the divisor chain: pivot must divide the trailing block
      bool divides = true;
      for (std::size_t i = t + 1; i < r && divides; ++i)
        for (std::size_t j = t + 1; j < c && divides; ++j)
          if (a[i][j] % a[t][t] != 0) {
            row_sub(t, i, BigInt(-1));  // pull row i into the pivot row
            divides = false;
          }
      if (divides) break;
    }
    if (a[t][t] < 0) row_neg(t);
  }
  out.divisors.resize(m);
  for (std::size_t t = 0; t < m; ++t) out.divisors[t] = a[t][t];
  return out;
}

inline std::vector<BigInt> invariant_factors(const IntMat& m) {
  return smith_z(m).divisors;
}

// Basis (as rows) of the integer kernel {x : M x = 0}.
inline IntMat kernel_z(const IntMat& m) {
  std::size_t r = m.size(), c = r ? m[0].size() : 0;
  if (c == 0) return {};
  SmithZ s = smith_z(m);
  IntMat out;
  for (std::size_t j = 0; j < c; ++j) {
    if (j < s.divisors.size() && s.divisors[j] != 0) continue;
    IntVec v(c);
    for (std::size_t k = 0; k < c; ++k) v[k] = s.right[k][j];
    out.push_back(std::move(v));
  }
  return out;
}

// Canonical row Hermite normal form: pivots positive, strictly increasing
// pivot columns, entries above each pivot reduced to [0, pivot); zero rows
// dropped.
inline IntMat hnf_rows(IntMat rows) {
  std::size_t c = 0;
  for (auto& v : rows) c = std::max(c, v.size());
  for (auto& v : rows) v.resize(c, 0);
  std::vector<IntVec> piv(c);  // pivot row per column, possibly empty
  std::vector<bool> has(c, false);

  std::vector<IntVec> queue = std::move(rows);
  while (!queue.empty()) {
    IntVec v = std::move(queue.back());
    queue.pop_back();
    for (std::size_t j = 0; j < c; ++j) {
      if (v[j] == 0) continue;
      if (!has[j]) {
        if (v[j] < 0)
          for (auto& x : v) x = -x;
        piv[j] = std::move(v);
        has[j] = true;
        break;
      }
      // fold v into the existing pivot via the extended gcd
      while (v[j] != 0) {
        BigInt q = piv[j][j] / v[j];
        for (std::size_t k = 0; k < c; ++k) piv[j][k] -= q * v[k];
        std::swap(piv[j], v);
      }
      if (piv[j][j] < 0)
        for (auto& x : piv[j]) x = -x;
    }
  }
  // reduce above-pivot entries
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < c; ++j)
    if (has[j]) cols.push_back(j);
  for (std::size_t a = 0; a < cols.size(); ++a)
    for (std::size_t b = a + 1; b < cols.size(); ++b) {
      std::size_t j = cols[b];
      BigInt q = piv[cols[a]][j];
      // floor division so the remainder lands in [0, pivot)
      BigInt d = piv[j][j];
      BigInt f = q >= 0 ? BigInt(q / d) : BigInt(-((-q + d - 1) / d));
      if (f != 0)
        for (std::size_t k = 0; k < c; ++k)
          piv[cols[a]][k] -= f * piv[j][k];
    }
  IntMat out;
  for (std::size_t j : cols) out.push_back(std::move(piv[j]));
  return out;
}

// Membership of v in the row span (over Z) of an HNF basis.
inline bool in_rowspan_z(const IntMat& hnf, IntVec v) {
  std::size_t c = hnf.empty() ? v.size() : hnf[0].size();
  v.resize(std::max(c, v.size()), 0);
  for (const auto& row : hnf) {
    std::size_t j = 0;
    while (j < row.size() && row[j] == 0) ++j;
    if (j == row.size()) continue;
    if (v[j] % row[j] != 0) continue;
    BigInt q = v[j] / row[j];
    for (std::size_t k = 0; k < v.size() && k < row.size(); ++k)
      v[k] -= q * row[k];
  }
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

// Saturation of the row lattice of m inside Z^c: the largest sublattice of
// Z^c with the same rational span.  Returned in HNF.
inline IntMat saturate_rows(const IntMat& m) {
  if (m.empty()) return {};
  SmithZ s = smith_z(m);
  IntMat sat;
  for (std::size_t i = 0; i < s.divisors.size(); ++i) {
    if (s.divisors[i] == 0) continue;
    sat.push_back(s.right_inv[i]);
  }
  return hnf_rows(std::move(sat));
}

// LLL-reduced basis (delta = 3/4) with exact rational Gram-Schmidt.  Rows
// must be linearly independent.  star_norms_sq receives the squared norms
// of the orthogonalized vectors of the final basis.
inline IntMat lll_reduce(IntMat b, std::vector<BigRat>* star_norms_sq = nullptr) {
  std::size_t n = b.size();
  if (n == 0) {
    if (star_norms_sq) star_norms_sq->clear();
    return b;
  }
  std::size_t d = b[0].size();
  std::vector<std::vector<BigRat>> mu(n, std::vector<BigRat>(n, 0));
  std::vector<BigRat> B(n, 0);

  auto dot_ii = [&](const IntVec& x, const IntVec& y) {
    BigInt s = 0;
    for (std::size_t k = 0; k < d; ++k) s += x[k] * y[k];
    return BigRat(s);
  };
  std::vector<std::vector<BigRat>> star(n, std::vector<BigRat>(d, 0));
  auto gram_schmidt = [&]() {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < d; ++k) star[i][k] = BigRat(b[i][k]);
      for (std::size_t j = 0; j < i; ++j) {
        BigRat num = 0;
        for (std::size_t k = 0; k < d; ++k) num += BigRat(b[i][k]) * star[j][k];
        mu[i][j] = (B[j] == 0) ? BigRat(0) : BigRat(num / B[j]);
        for (std::size_t k = 0; k < d; ++k) star[i][k] -= mu[i][j] * star[j][k];
      }
      B[i] = 0;
      for (std::size_t k = 0; k < d; ++k) B[i] += star[i][k] * star[i][k];
      if (B[i] == 0)
        throw invariant_error("lll_reduce: input rows linearly dependent");
    }
  };
  auto nearest = [](const BigRat& q) {
    BigInt num = boost::multiprecision::numerator(q);
    BigInt den = boost::multiprecision::denominator(q);
    BigInt twice = 2 * num + den;  // round(num/den) = floor((2num+den)/(2den))
    BigInt f = twice / (2 * den);
    if (twice < 0 && twice % (2 * den) != 0) f -= 1;
    return f;
  };

  gram_schmidt();
  const BigRat delta(3, 4);
  std::size_t k = 1;
  while (k < n) {
    for (std::size_t j = k; j-- > 0;) {
      if (2 * abs(mu[k][j]) > 1) {
        BigInt r = nearest(mu[k][j]);
        for (std::size_t t = 0; t < d; ++t) b[k][t] -= r * b[j][t];
        gram_schmidt();
      }
    }
    if (B[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      gram_schmidt();
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
  if (star_norms_sq) *star_norms_sq = B;
  return b;
}

}  // namespace eigenweight
