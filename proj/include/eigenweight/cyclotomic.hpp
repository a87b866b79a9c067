#pragma once

// Exact arithmetic in Z[x]/Phi_{p^n}(x) -- the ring of integers of the
// p^n-th cyclotomic field for odd p.  No modular truncation anywhere: this
// module certifies identities exactly.  Phi_{p^n}(x) = sum_{j<p} x^{j p^{n-1}},
// and x has multiplicative order exactly p^n in the quotient.
//
// Level 0 is allowed and degenerates to Z (Phi_1 = x - 1).

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "eigenweight/errors.hpp"
#include "eigenweight/padic.hpp"

namespace eigenweight {

class CyclotomicInt {
 public:
  CyclotomicInt(long p, int level)
      : p_(p), level_(level), c_(phi_degree(p, level), 0) {
    if (p < 3) throw input_error("CyclotomicInt: p must be an odd prime");
    if (level < 0) throw input_error("CyclotomicInt: level must be >= 0");
  }

  static std::size_t phi_degree(long p, int level) {
    if (level == 0) return 1;
    std::size_t pn = 1;
    for (int i = 0; i < level - 1; ++i) pn *= p;
    return pn * (p - 1);
  }

  static CyclotomicInt constant(long p, int level, BigInt v) {
    CyclotomicInt out(p, level);
    out.c_[0] = std::move(v);
    return out;
  }

  // zeta^e, exponent taken mod p^level.
  static CyclotomicInt root_power(long p, int level, const BigInt& e) {
    CyclotomicInt out(p, level);
    std::map<std::size_t, BigInt> acc;
    BigInt pn = out.group_order();
    BigInt r = e % pn;
    if (r < 0) r += pn;
    acc[static_cast<std::size_t>(r)] = 1;
    out.assign_reduced(acc);
    return out;
  }

  long prime() const { return p_; }
  int level() const { return level_; }
  const std::vector<BigInt>& coefficients() const { return c_; }

  BigInt group_order() const {  // p^level
    BigInt r = 1;
    for (int i = 0; i < level_; ++i) r *= p_;
    return r;
  }

  bool is_zero() const {
    for (const auto& x : c_)
      if (x != 0) return false;
    return true;
  }

  bool operator==(const CyclotomicInt& o) const {
    check(o);
    return c_ == o.c_;
  }
  bool operator!=(const CyclotomicInt& o) const { return !(*this == o); }

  CyclotomicInt operator+(const CyclotomicInt& o) const {
    check(o);
    CyclotomicInt out = *this;
    for (std::size_t i = 0; i < c_.size(); ++i) out.c_[i] += o.c_[i];
    return out;
  }
  CyclotomicInt operator-(const CyclotomicInt& o) const {
    check(o);
    CyclotomicInt out = *this;
    for (std::size_t i = 0; i < c_.size(); ++i) out.c_[i] -= o.c_[i];
    return out;
  }
  CyclotomicInt operator-() const {
    CyclotomicInt out = *this;
    for (auto& x : out.c_) x = -x;
    return out;
  }
  CyclotomicInt operator*(const CyclotomicInt& o) const {
    check(o);
    std::map<std::size_t, BigInt> acc;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      for (std::size_t j = 0; j < o.c_.size(); ++j) {
        if (o.c_[j] == 0) continue;
        acc[i + j] += c_[i] * o.c_[j];
      }
    }
    CyclotomicInt out(p_, level_);
    out.assign_reduced(acc);
    return out;
  }
  CyclotomicInt operator*(const BigInt& s) const {
    CyclotomicInt out = *this;
    for (auto& x : out.c_) x *= s;
    return out;
  }

  CyclotomicInt pow(BigInt e) const {
    if (e < 0) throw invariant_error("CyclotomicInt::pow: negative exponent");
    CyclotomicInt acc = constant(p_, level_, 1);
    CyclotomicInt base = *this;
    while (e > 0) {
      if (e % 2 == 1) acc = acc * base;
      base = base * base;
      e /= 2;
    }
    return acc;
  }

  // Image under the ring map zeta -> 1 (values in Z; canonical mod p).
  BigInt evaluate_at_one() const {
    BigInt s = 0;
    for (const auto& x : c_) s += x;
    return s;
  }

  // Exact valuation at the prime pi = zeta - 1 above p (v_pi(p) = phi(p^n)).
  // nullopt for the zero element.  Uses the exact identity p = pi * mu with
  // mu = prod_{a in (Z/p^n)^x, a != 1} (zeta^a - 1).
  std::optional<long> pi_valuation() const {
    if (level_ == 0) {
      // the prime is just p itself
      if (is_zero()) return std::nullopt;
      BigInt v = c_[0];
      long n = 0;
      while (v % p_ == 0) {
        v /= p_;
        ++n;
      }
      return n;
    }
    if (is_zero()) return std::nullopt;
    CyclotomicInt w = *this;
    CyclotomicInt mu = p_over_pi();
    long v = 0;
    for (;;) {
      BigInt r = w.evaluate_at_one();
      if (r % p_ != 0) return v;
      // w = (x-1) q + r as polynomials; w / pi = q + (r/p) mu
      CyclotomicInt q(p_, level_);
      BigInt acc = 0;
      for (std::size_t i = c_.size(); i-- > 1;) {
        acc += w.c_[i];
        q.c_[i - 1] = acc;
      }
      BigInt cmu = r / p_;
      w = q + mu * cmu;
      ++v;
      if (w.is_zero()) return std::nullopt;  // exact zero reached: v = infinity
    }
  }

 private:
  void check(const CyclotomicInt& o) const {
    if (p_ != o.p_ || level_ != o.level_)
      throw invariant_error("CyclotomicInt: mixed cyclotomic levels");
  }

  // Fold exponents mod p^n, then clear degrees >= phi(p^n) with
  // x^{phi} = -sum_{j<p-1} x^{j p^{n-1}}.
  void assign_reduced(const std::map<std::size_t, BigInt>& acc) {
    if (level_ == 0) {
      c_.assign(1, 0);
      for (const auto& [e, v] : acc) c_[0] += v;
      return;
    }
    std::size_t pn = 1;
    for (int i = 0; i < level_; ++i) pn *= p_;
    std::size_t pn1 = pn / p_;
    std::size_t phi = pn - pn1;
    std::vector<BigInt> full(pn, 0);
    for (const auto& [e, v] : acc) full[e % pn] += v;
    for (std::size_t e = pn; e-- > phi;) {
      if (full[e] == 0) continue;
      BigInt v = std::move(full[e]);
      full[e] = 0;
      std::size_t r = e - phi;
      for (long j = 0; j < p_ - 1; ++j) full[j * pn1 + r] -= v;
    }
    c_.assign(full.begin(), full.begin() + phi);
  }

  CyclotomicInt p_over_pi() const {
    CyclotomicInt mu = constant(p_, level_, 1);
    BigInt pn = group_order();
    for (BigInt a = 2; a < pn; ++a) {
      if (a % p_ == 0) continue;
      CyclotomicInt f = root_power(p_, level_, a) - constant(p_, level_, 1);
      mu = mu * f;
    }
    return mu;
  }

  long p_;
  int level_;
  std::vector<BigInt> c_;
};

}  // namespace eigenweight
