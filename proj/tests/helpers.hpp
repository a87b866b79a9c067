#pragma once

#include <random>

#include "eigenweight/padic.hpp"

namespace testutil {

using eigenweight::BigInt;
using eigenweight::PadicContext;
using eigenweight::PadicInt;

inline BigInt random_below(std::mt19937_64& rng, const BigInt& m) {
  BigInt r = 0;
  unsigned bits = boost::multiprecision::msb(m) + 1;
  for (unsigned i = 0; i < bits; i += 32) {
    r <<= 32;
    r += static_cast<std::uint32_t>(rng());
  }
  return r % m;
}

inline PadicInt random_unit(std::mt19937_64& rng, const PadicContext& ctx) {
  for (;;) {
    BigInt r = random_below(rng, ctx.modulus());
    if (r % ctx.prime() != 0) return ctx.element(r);
  }
}

// A uniform element of 1 + pZ_p at precision N.
inline PadicInt random_principal_unit(std::mt19937_64& rng,
                                      const PadicContext& ctx) {
  BigInt r = random_below(rng, ctx.prime_power(ctx.digits() - 1));
  return ctx.element(1 + ctx.prime() * r);
}

inline int random_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace testutil
