#pragma once

// Fixed-precision arithmetic in Z_p for odd primes: every element is an
// integer residue mod p^N (absolute, capped precision; no relative-precision
// tracking).  On top of the ring operations this header provides Teichmuller
// representatives, the Iwasawa-branch logarithm and exponential on units,
// Z_p-powers of principal units, and small-integer / small-rational lifting.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/integer/mod_inverse.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "eigenweight/errors.hpp"

namespace eigenweight {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Typed front for boost's egcd inverse (avoids expression-template
// deduction pitfalls at call sites).  Requires gcd(a, m) = 1.
inline BigInt mod_inverse(const BigInt& a, const BigInt& m) {
  BigInt r = boost::integer::mod_inverse(BigInt(a % m), m);
  if (r == 0) throw invariant_error("mod_inverse: arguments not coprime");
  return r;
}

namespace detail {

inline bool is_prime_u64(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<long> prime_factors(long n) {
  std::vector<long> out;
  for (long d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline long pow_mod_small(long b, long e, long m) {
  long r = 1 % m;
  b %= m;
  while (e > 0) {
    if (e & 1) r = (r * b) % m;
    b = (b * b) % m;
    e >>= 1;
  }
  return r;
}

}  // namespace detail

class PadicInt;

// The ambient ring Z/p^N.  Cheap to copy (shared immutable payload); two
// contexts are interchangeable iff they agree on (p, N).
class PadicContext {
 public:
  PadicContext(long p, int digits) {
    if (p < 3 || !detail::is_prime_u64(p))
      throw input_error("PadicContext: p must be an odd prime >= 3, got " +
                        std::to_string(p));
    if (digits < 8)
      throw input_error("PadicContext: precision N must be >= 8, got " +
                        std::to_string(digits));
    auto d = std::make_shared<Data>();
    d->p = p;
    d->n = digits;
    d->pn = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(digits));
    d->root = smallest_primitive_root(p);
    d_ = std::move(d);
  }

  long prime() const { return d_->p; }
  int digits() const { return d_->n; }
  const BigInt& modulus() const { return d_->pn; }

  // p^k, 0 <= k <= N.
  BigInt prime_power(int k) const {
    return boost::multiprecision::pow(BigInt(d_->p), static_cast<unsigned>(k));
  }

  bool same(const PadicContext& o) const {
    return d_->p == o.d_->p && d_->n == o.d_->n;
  }

  // Smallest primitive root mod p; fixes the generator of mu_{p-1} used for
  // Teichmuller discrete logs.
  long primitive_root() const { return d_->root; }

  // Discrete log of a unit residue mod p, base primitive_root(); in [0, p-1).
  long unit_index(const BigInt& residue) const {
    long p = d_->p;
    long x = static_cast<long>(residue % p);
    if (x < 0) x += p;
    if (x == 0) throw invariant_error("unit_index: residue divisible by p");
    long acc = 1 % p;
    for (long k = 0; k < p - 1; ++k) {
      if (acc == x) return k;
      acc = (acc * d_->root) % p;
    }
    throw invariant_error("unit_index: discrete log not found (p not prime?)");
  }

  PadicInt element(BigInt value) const;
  PadicInt zero() const;
  PadicInt one() const;

  // Documented series-loss bound s = ceil(log_p N) + 1; downstream tolerances
  // of the form p^{N-s} refer to this.
  int series_loss_bound() const {
    int s = 0;
    long q = 1;
    while (q < d_->n) {
      q *= d_->p;
      ++s;
    }
    return s + 1;
  }

  // Default slack for rank statements at this precision.
  int default_slack() const { return (d_->n + 3) / 4; }

 private:
  struct Data {
    long p;
    int n;
    BigInt pn;
    long root;
  };

  static long smallest_primitive_root(long p) {
    auto qs = detail::prime_factors(p - 1);
    for (long c = 2; c < p; ++c) {
      bool ok = true;
      for (long q : qs)
        if (detail::pow_mod_small(c, (p - 1) / q, p) == 1) {
          ok = false;
          break;
        }
      if (ok) return c;
    }
    throw invariant_error("no primitive root found; p not prime?");
  }

  std::shared_ptr<const Data> d_;
};

// An element of Z_p known modulo p^N.  Immutable value type; all arithmetic
// is exact in Z/p^N.  valuation() == N means "indistinguishable from zero at
// this precision" (the known-zero state).
class PadicInt {
 public:
  PadicInt(PadicContext ctx, BigInt value) : ctx_(std::move(ctx)) {
    r_ = value % ctx_.modulus();
    if (r_ < 0) r_ += ctx_.modulus();
  }

  const PadicContext& context() const { return ctx_; }
  const BigInt& residue() const { return r_; }

  bool is_zero_at_precision() const { return r_ == 0; }
  bool is_unit() const { return r_ % ctx_.prime() != 0; }

  // Largest v <= N with p^v | residue; N for the known-zero element.
  int valuation() const {
    if (r_ == 0) return ctx_.digits();
    int v = 0;
    BigInt t = r_;
    long p = ctx_.prime();
    while (t % p == 0) {
      t /= p;
      ++v;
    }
    return v;
  }

  PadicInt operator+(const PadicInt& o) const {
    check_ctx(o);
    return PadicInt(ctx_, r_ + o.r_);
  }
  PadicInt operator-(const PadicInt& o) const {
    check_ctx(o);
    return PadicInt(ctx_, r_ - o.r_);
  }
  PadicInt operator*(const PadicInt& o) const {
    check_ctx(o);
    return PadicInt(ctx_, r_ * o.r_);
  }
  PadicInt operator-() const { return PadicInt(ctx_, -r_); }

  bool operator==(const PadicInt& o) const {
    check_ctx(o);
    return r_ == o.r_;
  }
  bool operator!=(const PadicInt& o) const { return !(*this == o); }

  // Multiplicative inverse; requires valuation 0.
  PadicInt invert() const {
    if (!is_unit())
      throw invariant_error("invert: element has positive valuation");
    BigInt inv = eigenweight::mod_inverse(r_, ctx_.modulus());
    return PadicInt(ctx_, inv);
  }

  // x^e for e >= 0 by modular exponentiation; negative e inverts first.
  PadicInt pow(const BigInt& e) const {
    if (e < 0) return invert().pow(-e);
    return PadicInt(ctx_, boost::multiprecision::powm(r_, e, ctx_.modulus()));
  }

  // Exact division of the residue by p^k; requires valuation >= k.  The
  // result is canonically correct mod p^{N-k} (top k digits read as zero).
  PadicInt shift_down(int k) const {
    if (k == 0) return *this;
    BigInt pk = ctx_.prime_power(k);
    if (r_ % pk != 0)
      throw invariant_error("shift_down: valuation below requested shift");
    return PadicInt(ctx_, r_ / pk);
  }

  // |x - y| <= p^{-t}, i.e. agreement to t digits.
  bool congruent(const PadicInt& o, int t) const {
    check_ctx(o);
    if (t >= ctx_.digits()) return r_ == o.r_;
    BigInt pt = ctx_.prime_power(t);
    return (r_ - o.r_) % pt == 0;
  }

  std::string str() const { return r_.str(); }

 private:
  void check_ctx(const PadicInt& o) const {
    if (!ctx_.same(o.ctx_))
      throw invariant_error("context mismatch: operands live in different Z/p^N");
  }

  PadicContext ctx_;
  BigInt r_;
};

inline PadicInt PadicContext::element(BigInt value) const {
  return PadicInt(*this, std::move(value));
}
inline PadicInt PadicContext::zero() const { return element(0); }
inline PadicInt PadicContext::one() const { return element(1); }

// Teichmuller representative: the unique omega with omega^{p-1} = 1 and
// omega = x mod p, computed by iterating y -> y^p to stabilization.
inline PadicInt teichmuller(const PadicInt& x) {
  if (!x.is_unit()) throw invariant_error("teichmuller: non-unit input");
  const auto& ctx = x.context();
  PadicInt y = x;
  for (int i = 0; i < ctx.digits(); ++i) {
    PadicInt next = y.pow(ctx.prime());
    if (next == y) break;
    y = next;
  }
  return y;
}

namespace detail {

// Smallest K with K - floor(log_p K) >= target; truncating the log series
// at K terms leaves a tail of valuation >= target.
inline int log_series_length(long p, int target) {
  int K = 1;
  auto floor_log = [&](long k) {
    int a = 0;
    long q = p;
    while (q <= k) {
      q *= p;
      ++a;
    }
    return a;
  };
  while (K - floor_log(K) < target) ++K;
  return K;
}

// Smallest K such that every exp-series term beyond K has valuation >= target
// (for val(y) >= 1, p odd: val(y^k/k!) >= k - (k-1)/(p-1)).
inline int exp_series_length(long p, int target) {
  int K = 1;
  while ((K + 1) - K / (static_cast<int>(p) - 1) < target) ++K;
  return K;
}

inline int legendre_factorial_valuation(long p, int k) {
  int v = 0;
  long q = p;
  while (q <= k) {
    v += k / static_cast<int>(q);
    if (q > k / p) break;
    q *= p;
  }
  return v;
}

}  // namespace detail

// Iwasawa-branch logarithm of a unit: log of the principal part x/omega(x)
// via the alternating series, with the division by k performed on exact
// integers before reduction (guard digits absorb the p-part of lcm(1..K)).
// Roots of unity map to 0; the result always has valuation >= 1.  Exact as a
// function of the residue mod p^N.
inline PadicInt padic_log(const PadicInt& x) {
  if (!x.is_unit()) throw invariant_error("padic_log: non-unit input");
  const auto& ctx = x.context();
  long p = ctx.prime();
  int N = ctx.digits();

  PadicInt u = x * teichmuller(x).invert();  // principal part, = 1 mod p
  BigInt z = u.residue() - 1;
  if (z == 0) return ctx.zero();

  int K = detail::log_series_length(p, N);
  int guard = 0;
  for (long q = p; q <= K; q *= p) ++guard;  // v_p(lcm(1..K))
  BigInt L = 1;
  for (int k = 1; k <= K; ++k) L = boost::multiprecision::lcm(L, BigInt(k));

  BigInt Mg = ctx.modulus() * ctx.prime_power(guard);  // p^{N+guard}
  BigInt acc = 0, zk = 1;
  for (int k = 1; k <= K; ++k) {
    zk = (zk * z) % Mg;
    BigInt term = (zk * (L / k)) % Mg;
    acc = (k % 2 == 1) ? BigInt((acc + term) % Mg)
                       : BigInt((acc - term + Mg) % Mg);
  }
  // acc = L * log(u) mod p^{N+guard}; strip p^guard, cancel the unit part.
  BigInt pg = ctx.prime_power(guard);
  if (acc % pg != 0)
    throw invariant_error("padic_log: series accumulator lost divisibility");
  BigInt lead = acc / pg;
  BigInt Lunit = L / pg;
  BigInt inv = mod_inverse(Lunit, ctx.modulus());
  return ctx.element(lead * inv);
}

// exp on p^Z_p (valuation >= 1 required; convergent for odd p).  Inverse to
// padic_log on principal units, exactly at precision N.
inline PadicInt padic_exp(const PadicInt& y) {
  const auto& ctx = y.context();
  if (!y.is_zero_at_precision() && y.valuation() < 1)
    throw invariant_error("padic_exp: input must have valuation >= 1");
  long p = ctx.prime();
  int N = ctx.digits();

  int K = detail::exp_series_length(p, N);
  int guard = detail::legendre_factorial_valuation(p, K);
  BigInt Mg = ctx.modulus() * ctx.prime_power(guard);

  BigInt fact = 1;  // K!
  for (int k = 2; k <= K; ++k) fact *= k;

  BigInt acc = 0, yk = 1, ff = fact;  // ff = K!/k!
  acc = ff % Mg;                      // k = 0 term
  const BigInt& yr = y.residue();
  for (int k = 1; k <= K; ++k) {
    yk = (yk * yr) % Mg;
    ff /= k;
    acc = (acc + yk * (ff % Mg)) % Mg;
  }
  BigInt pg = ctx.prime_power(guard);
  if (acc % pg != 0)
    throw invariant_error("padic_exp: series accumulator lost divisibility");
  BigInt lead = acc / pg;
  BigInt Funit = (fact / pg) % ctx.modulus();
  BigInt inv = mod_inverse(Funit, ctx.modulus());
  return ctx.element(lead * inv);
}

// x^t = exp(t log x) for x = 1 mod p and t in Z_p.  Agrees with repeated
// multiplication for integer t.
inline PadicInt zp_power(const PadicInt& x, const PadicInt& t) {
  const auto& ctx = x.context();
  if (!x.is_unit() || !(x - ctx.one()).is_zero_at_precision()) {
    if ((x.residue() - 1) % ctx.prime() != 0)
      throw invariant_error("zp_power: base must be a principal unit (= 1 mod p)");
  }
  return padic_exp(t * padic_log(x));
}

inline PadicInt zp_power(const PadicInt& x, const BigInt& t) {
  return zp_power(x, x.context().element(t));
}

// Exponent of a unit's principal part against the fixed topological
// generator 1+p:  t with <x> = (1+p)^t.  Canonically correct mod p^{N-1}
// (returned as the canonical lift in [0, p^{N-1})).
inline PadicInt principal_exponent(const PadicInt& x) {
  if (!x.is_unit()) throw invariant_error("principal_exponent: non-unit input");
  const auto& ctx = x.context();
  PadicInt lx = padic_log(x).shift_down(1);
  PadicInt lg = padic_log(ctx.element(1 + ctx.prime())).shift_down(1);
  PadicInt t = lx * lg.invert();
  // reduce to the canonical lift mod p^{N-1}
  return ctx.element(t.residue() % ctx.prime_power(ctx.digits() - 1));
}

// The unique integer n with |n| <= bound and n = x mod p^prec, if any.
// prec defaults to the full working precision.
inline std::optional<BigInt> integer_reconstruct(const PadicInt& x,
                                                 const BigInt& bound,
                                                 int prec = -1) {
  const auto& ctx = x.context();
  if (prec < 0) prec = ctx.digits();
  BigInt M = ctx.prime_power(prec);
  if (2 * bound + 1 >= M)
    throw precision_error("integer_reconstruct: bound too large for precision");
  BigInt r = x.residue() % M;
  if (r <= bound) return r;
  if (M - r <= bound) return r - M;
  return std::nullopt;
}

// Rational reconstruction: n/d with |n| <= bound, 0 < d <= bound, p not
// dividing d, congruent to x mod p^prec.  Requires 2*bound^2 < p^prec.
inline std::optional<BigRat> rational_reconstruct(const PadicInt& x,
                                                  const BigInt& bound,
                                                  int prec = -1) {
  const auto& ctx = x.context();
  if (prec < 0) prec = ctx.digits();
  BigInt M = ctx.prime_power(prec);
  if (2 * bound * bound >= M)
    throw precision_error("rational_reconstruct: bound too large for precision");
  BigInt r0 = M, r1 = x.residue() % M, t0 = 0, t1 = 1;
  while (r1 > bound) {
    BigInt q = r0 / r1;
    BigInt r2 = r0 - q * r1;
    BigInt t2 = t0 - q * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  BigInt n = r1, d = t1;
  if (d == 0) return std::nullopt;
  if (d < 0) {
    d = -d;
    n = -n;
  }
  if (n > bound || -n > bound || d > bound) return std::nullopt;
  if (d % ctx.prime() == 0) return std::nullopt;
  if ((n - x.residue() * d) % M != 0) return std::nullopt;
  return BigRat(n, d);
}

}  // namespace eigenweight
