// Shared fixed-width bitvector semantics used by both the constant folder
// and the ground evaluator, so the two cannot drift.  Division and
// remainder by zero follow the SMT-LIB totalizations: bvudiv(x,0) is
// all-ones, bvsdiv(x,0) is -1 for non-negative x and 1 otherwise, and both
// remainders return the dividend.
#pragma once

#include <cstdint>

namespace minibmc::bvsem {

using U = unsigned __int128;
using S = __int128;

inline U mask(uint32_t w) {
  return w >= 128 ? ~static_cast<U>(0) : ((static_cast<U>(1) << w) - 1);
}

inline S sext(U v, uint32_t w) {
  v &= mask(w);
  if (w >= 128)
    return static_cast<S>(v);
  U sign = static_cast<U>(1) << (w - 1);
  return static_cast<S>((v ^ sign) - sign);
}

inline U add(U a, U b, uint32_t w) { return (a + b) & mask(w); }
inline U sub(U a, U b, uint32_t w) { return (a - b) & mask(w); }
inline U mul(U a, U b, uint32_t w) { return (a * b) & mask(w); }
inline U neg(U a, uint32_t w) { return (~a + 1) & mask(w); }

inline U udiv(U a, U b, uint32_t w) {
  return b == 0 ? mask(w) : (a / b) & mask(w);
}

inline U urem(U a, U b, uint32_t w) {
  return b == 0 ? (a & mask(w)) : (a % b) & mask(w);
}

inline U sdiv(U a, U b, uint32_t w) {
  S sa = sext(a, w), sb = sext(b, w);
  if (sb == 0)
    return sa >= 0 ? mask(w) : static_cast<U>(1);
  if (sb == -1) // avoids the lone overflowing case; wraps like the negation
    return neg(a, w);
  return static_cast<U>(sa / sb) & mask(w);
}

inline U srem(U a, U b, uint32_t w) {
  S sa = sext(a, w), sb = sext(b, w);
  if (sb == 0)
    return a & mask(w);
  if (sb == -1)
    return 0;
  return static_cast<U>(sa % sb) & mask(w);
}

inline U band(U a, U b, uint32_t w) { return (a & b) & mask(w); }
inline U bor(U a, U b, uint32_t w) { return (a | b) & mask(w); }
inline U bxor(U a, U b, uint32_t w) { return (a ^ b) & mask(w); }
inline U bnot(U a, uint32_t w) { return ~a & mask(w); }

inline U shl(U a, U b, uint32_t w) {
  return b >= w ? 0 : (a << static_cast<unsigned>(b)) & mask(w);
}

inline U lshr(U a, U b, uint32_t w) {
  return b >= w ? 0 : ((a & mask(w)) >> static_cast<unsigned>(b));
}

inline U ashr(U a, U b, uint32_t w) {
  bool negv = sext(a, w) < 0;
  if (b >= w)
    return negv ? mask(w) : 0;
  return static_cast<U>(sext(a, w) >> static_cast<unsigned>(b)) & mask(w);
}

inline bool ult(U a, U b, uint32_t w) { return (a & mask(w)) < (b & mask(w)); }
inline bool ule(U a, U b, uint32_t w) { return (a & mask(w)) <= (b & mask(w)); }
inline bool slt(U a, U b, uint32_t w) { return sext(a, w) < sext(b, w); }
inline bool sle(U a, U b, uint32_t w) { return sext(a, w) <= sext(b, w); }

} // namespace minibmc::bvsem
