#include "doctest.h"

#include "minibmc/term.hpp"

#include <random>

using namespace minibmc;

namespace {

GroundValue bv_val(unsigned __int128 v, uint32_t w) {
  return GroundValue::of(GroundScalar::make_bv(v, w));
}

GroundValue array_val(std::vector<uint64_t> elems, uint64_t dflt,
                      uint32_t elem_width) {
  GroundArray a;
  a.dflt = GroundScalar::make_bv(dflt, elem_width);
  for (size_t i = 0; i < elems.size(); ++i)
    a.elems[i] = GroundScalar::make_bv(elems[i], elem_width);
  return GroundValue::of(std::move(a));
}

uint64_t as_u64(const GroundValue &v) {
  REQUIRE(v.kind == GroundValue::Kind::Scalar);
  REQUIRE_FALSE(v.scalar.is_bool);
  return static_cast<uint64_t>(v.scalar.bits);
}

bool as_bool(const GroundValue &v) {
  REQUIRE(v.kind == GroundValue::Kind::Scalar);
  REQUIRE(v.scalar.is_bool);
  return v.scalar.b;
}

} // namespace

TEST_CASE("structurally identical terms are the same reference") {
  TermFactory f;
  SortRef bv32 = f.bv_sort(32);
  TermRef x = f.symbol("x", bv32), y = f.symbol("y", bv32);
  CHECK(f.bv_add(x, y) == f.bv_add(x, y));
  CHECK(f.bv_add(x, y) != f.bv_add(y, x)); // no commutative canonicalization
  CHECK(f.symbol("x", bv32) == x);
  size_t before = f.num_terms();
  (void)f.bv_add(x, y);
  CHECK(f.num_terms() == before);
}

TEST_CASE("a symbol cannot be redeclared at a different sort") {
  TermFactory f;
  f.symbol("x", f.bv_sort(32));
  CHECK_THROWS_AS(f.symbol("x", f.bv_sort(64)), std::logic_error);
}

TEST_CASE("ite laws hold by construction") {
  TermFactory f;
  SortRef bv32 = f.bv_sort(32);
  TermRef t1 = f.symbol("t1", bv32), t2 = f.symbol("t2", bv32);
  CHECK(f.ite(f.tru(), t1, t2) == t1);
  CHECK(f.ite(f.fls(), t1, t2) == t2);
  CHECK(f.ite(f.symbol("c", f.bool_sort()), t1, t1) == t1);
}

TEST_CASE("sort violations are rejected with the construct named") {
  TermFactory f;
  TermRef a = f.symbol("a", f.bv_sort(32));
  TermRef b = f.symbol("b", f.bv_sort(64));
  CHECK_THROWS_WITH_AS(f.bv_add(a, b),
                       "term: bvadd: operand widths differ (32 vs 64)",
                       std::logic_error);
  CHECK_THROWS_AS(f.ite(f.tru(), a, b), std::logic_error);
  CHECK_THROWS_AS(f.and_(a, a), std::logic_error);
  CHECK_THROWS_AS(f.eq(a, b), std::logic_error);
  SortRef arr = f.array_sort(f.bv_sort(64), f.bv_sort(32));
  TermRef m = f.symbol("m", arr);
  CHECK_THROWS_AS(f.select(m, a), std::logic_error); // index must be 64-bit
  CHECK_THROWS_AS(f.select(a, b), std::logic_error);
}

TEST_CASE("boolean and equality simplifications") {
  TermFactory f;
  TermRef p = f.symbol("p", f.bool_sort());
  CHECK(f.and_(p, f.tru()) == p);
  CHECK(f.and_(p, f.fls()) == f.fls());
  CHECK(f.or_(p, f.fls()) == p);
  CHECK(f.or_(p, f.tru()) == f.tru());
  CHECK(f.not_(f.not_(p)) == p);
  CHECK(f.implies(f.fls(), p) == f.tru());
  CHECK(f.implies(f.tru(), p) == p);
  CHECK(f.eq(p, p) == f.tru());
  SortRef arr = f.array_sort(f.bv_sort(64), f.bv_sort(32));
  TermRef m = f.symbol("m", arr);
  CHECK(f.eq(m, m) == f.tru()); // extensional identity
  CHECK(f.and_({}) == f.tru());
  CHECK(f.or_({}) == f.fls());
}

TEST_CASE("constant folding matches the ground evaluator") {
  TermFactory f;
  std::mt19937_64 rng(7);
  GroundEnv empty;
  for (int round = 0; round < 400; ++round) {
    uint32_t w = (round % 2) ? 32 : 64;
    uint64_t av = rng(), bv = rng();
    if (round % 7 == 0)
      bv = 0; // exercise the division totalizations
    TermRef a = f.bv_const(av, w), b = f.bv_const(bv, w);
    auto both = [&](TermRef folded) {
      REQUIRE(f.is_bv_const(folded));
      return f.bv_const_value(folded);
    };
    // Each op folds at build time; the evaluator recomputes from unfolded
    // structure via symbols, so the two paths are independent.
    GroundEnv env;
    env["a"] = bv_val(av, w);
    env["b"] = bv_val(bv, w);
    TermRef sa = f.symbol("a" + std::to_string(w), f.bv_sort(w));
    TermRef sb = f.symbol("b" + std::to_string(w), f.bv_sort(w));
    GroundEnv env2;
    env2["a" + std::to_string(w)] = bv_val(av, w);
    env2["b" + std::to_string(w)] = bv_val(bv, w);
    using Builder = TermRef (TermFactory::*)(TermRef, TermRef);
    for (Builder op :
         {&TermFactory::bv_add, &TermFactory::bv_sub, &TermFactory::bv_mul,
          &TermFactory::bv_udiv, &TermFactory::bv_sdiv, &TermFactory::bv_urem,
          &TermFactory::bv_srem, &TermFactory::bv_and, &TermFactory::bv_or,
          &TermFactory::bv_xor}) {
      uint64_t folded = both((f.*op)(a, b));
      uint64_t evaled = as_u64(eval_ground(f, (f.*op)(sa, sb), env2));
      CHECK(folded == evaled);
    }
    for (Builder op : {&TermFactory::bv_ult, &TermFactory::bv_ule,
                       &TermFactory::bv_slt, &TermFactory::bv_sle}) {
      TermRef folded = (f.*op)(a, b);
      REQUIRE((f.is_true(folded) || f.is_false(folded)));
      bool evaled = as_bool(eval_ground(f, (f.*op)(sa, sb), env2));
      CHECK(f.is_true(folded) == evaled);
    }
  }
}

TEST_CASE("division by zero follows the solver totalizations") {
  TermFactory f;
  TermRef five = f.bv_const(5, 32), zero = f.bv_const(0, 32);
  TermRef neg5 = f.bv_const(0xFFFFFFFBu, 32); // -5
  CHECK(f.bv_const_value(f.bv_udiv(five, zero)) == 0xFFFFFFFFu);
  CHECK(f.bv_const_value(f.bv_sdiv(five, zero)) == 0xFFFFFFFFu);  // -1
  CHECK(f.bv_const_value(f.bv_sdiv(neg5, zero)) == 1);
  CHECK(f.bv_const_value(f.bv_urem(five, zero)) == 5);
  CHECK(f.bv_const_value(f.bv_srem(neg5, zero)) == 0xFFFFFFFBu);
  // truncated signed division
  CHECK(f.bv_const_value(f.bv_sdiv(f.bv_const(0xFFFFFFF9u, 32), // -7
                                   f.bv_const(2, 32))) == 0xFFFFFFFDu); // -3
  CHECK(f.bv_const_value(f.bv_srem(f.bv_const(0xFFFFFFF9u, 32),
                                   f.bv_const(2, 32))) == 0xFFFFFFFFu); // -1
  // the lone overflowing quotient wraps
  CHECK(f.bv_const_value(f.bv_sdiv(f.bv_const(0x80000000u, 32),
                                   f.bv_const(0xFFFFFFFFu, 32))) ==
        0x80000000u);
}

TEST_CASE("algebraic identities keep terms small") {
  TermFactory f;
  SortRef bv32 = f.bv_sort(32);
  TermRef x = f.symbol("x", bv32);
  TermRef zero = f.bv_const(0, 32), one = f.bv_const(1, 32);
  CHECK(f.bv_add(x, zero) == x);
  CHECK(f.bv_add(zero, x) == x);
  CHECK(f.bv_sub(x, zero) == x);
  CHECK(f.bv_sub(x, x) == zero);
  CHECK(f.bv_mul(x, one) == x);
  CHECK(f.bv_mul(x, zero) == zero);
  CHECK(f.bv_shl(x, zero) == x);
  CHECK(f.bv_ult(x, zero) == f.fls());
  CHECK(f.bv_ule(zero, x) == f.tru());
  CHECK(f.bv_xor(x, x) == zero);
}

TEST_CASE("select over a literal-indexed store chain resolves structurally") {
  TermFactory f;
  SortRef arr = f.array_sort(f.bv_sort(64), f.bv_sort(32));
  TermRef a = f.symbol("a", arr);
  TermRef v = f.symbol("v", f.bv_sort(32));
  TermRef i0 = f.bv_const(0, 64), i1 = f.bv_const(1, 64);
  TermRef st = f.store(f.store(a, i0, v), i1, f.bv_const(9, 32));
  CHECK(f.select(st, i1) == f.bv_const(9, 32));
  CHECK(f.select(st, i0) == v); // skips the distinct literal index above it
  TermRef j = f.symbol("j", f.bv_sort(64));
  // symbolic index may alias either store; must stay symbolic
  CHECK(f.node(f.select(st, j)).op == TermOp::Select);
  // same-reference index resolves even symbolically
  CHECK(f.select(f.store(a, j, v), j) == v);
  // writing back the value just read is the identity
  CHECK(f.store(a, j, f.select(a, j)) == a);
}

TEST_CASE("McCarthy axioms validated by evaluation on random instances") {
  TermFactory f;
  SortRef arr = f.array_sort(f.bv_sort(64), f.bv_sort(32));
  TermRef a = f.symbol("a", arr);
  TermRef i = f.symbol("i", f.bv_sort(64)), j = f.symbol("j", f.bv_sort(64));
  TermRef v = f.symbol("v", f.bv_sort(32));
  TermRef read = f.select(f.store(a, i, v), j);
  std::mt19937_64 rng(11);
  for (int round = 0; round < 200; ++round) {
    uint64_t iv = rng() % 16, jv = (round % 2) ? iv : rng() % 16;
    uint64_t vv = rng() & 0xFFFFFFFFu;
    GroundEnv env;
    env["a"] = array_val({5, 6, 7, 8}, 0, 32);
    env["i"] = bv_val(iv, 64);
    env["j"] = bv_val(jv, 64);
    env["v"] = bv_val(vv, 32);
    uint64_t got = as_u64(eval_ground(f, read, env));
    uint64_t want = iv == jv ? vv : (jv < 4 ? 5 + jv : 0);
    CHECK(got == want);
  }
}

// ---------------------------------------------------------------- memcpy

TEST_CASE("memcpy with literal length is a store chain") {
  TermFactory f;
  SortRef idx = f.bv_sort(64);
  SortRef arr = f.array_sort(idx, f.bv_sort(32));
  TermRef a = f.symbol("a", arr), b = f.symbol("b", arr);
  TermRef c0 = f.bv_const(0, 64), c1 = f.bv_const(1, 64),
          c3 = f.bv_const(3, 64);

  SUBCASE("zero length is the destination itself") {
    CHECK(f.memcpy_term(a, b, c0, c1, c0) == b);
  }

  SUBCASE("three elements shifted by one") {
    TermRef r = f.memcpy_term(a, b, c0, c1, c3, 4);
    GroundEnv env;
    env["a"] = array_val({1, 2, 3}, 0, 32);
    env["b"] = array_val({7, 7, 7, 7}, 7, 32);
    for (uint64_t p = 1; p <= 3; ++p)
      CHECK(as_u64(eval_ground(f, f.select(r, f.bv_const(p, 64)), env)) ==
            p); // elements 1,2,3 land at 1..3
    CHECK(as_u64(eval_ground(f, f.select(r, c0), env)) == 7); // untouched
  }

  SUBCASE("untouched suffix reads through to the destination") {
    TermRef r = f.memcpy_term(a, b, c0, c0, f.bv_const(2, 64), 6);
    TermRef at5 = f.select(r, f.bv_const(5, 64));
    CHECK(at5 == f.select(b, f.bv_const(5, 64))); // resolves structurally
  }
}

TEST_CASE("memcpy with symbolic length expands over the capacity") {
  TermFactory f;
  SortRef idx = f.bv_sort(64);
  SortRef arr = f.array_sort(idx, f.bv_sort(32));
  TermRef a = f.symbol("a", arr), b = f.symbol("b", arr);
  TermRef i = f.symbol("i", idx), k = f.symbol("k", idx),
          n = f.symbol("n", idx);

  CHECK_THROWS_WITH_AS(f.memcpy_term(a, b, i, k, n),
                       "term: memcpy: symbolic length requires a capacity "
                       "bound",
                       std::logic_error);

  TermRef r = f.memcpy_term(a, b, i, k, n, 4);
  // Exhaustive check against a direct loop for every n in 0..4 and a few
  // offset combinations.
  for (uint64_t nv = 0; nv <= 4; ++nv) {
    for (uint64_t iv : {0u, 1u}) {
      for (uint64_t kv : {0u, 2u}) {
        GroundEnv env;
        env["a"] = array_val({10, 11, 12, 13, 14, 15}, 0, 32);
        env["b"] = array_val({90, 91, 92, 93, 94, 95, 96, 97}, 9, 32);
        env["i"] = bv_val(iv, 64);
        env["k"] = bv_val(kv, 64);
        env["n"] = bv_val(nv, 64);
        for (uint64_t p = 0; p < 8; ++p) {
          uint64_t want =
              (p >= kv && p < kv + nv) ? 10 + iv + (p - kv) : 90 + p;
          uint64_t got = as_u64(
              eval_ground(f, f.select(r, f.bv_const(p, 64)), env));
          CHECK(got == want);
        }
      }
    }
  }
}

// ------------------------------------------------------- wide bitvectors

TEST_CASE("96-bit values assemble and disassemble by concat/extract") {
  TermFactory f;
  TermRef obj = f.bv_const(0x1234, 32);
  TermRef ofs = f.bv_const(0xDEADBEEF, 64);
  TermRef ptr = f.concat(obj, ofs);
  CHECK(f.sort_of(ptr).width == 96);
  CHECK(f.extract(ptr, 95, 64) == obj); // peels the concat
  CHECK(f.extract(ptr, 63, 0) == ofs);
  GroundEnv env;
  GroundValue v = eval_ground(f, ptr, env);
  CHECK(v.scalar.width == 96);
  CHECK(as_u64(eval_ground(f, f.extract(ptr, 95, 64), env)) == 0x1234);
  // equality across the wide value
  TermRef p = f.symbol("p", f.bv_sort(96));
  GroundEnv env2;
  env2["p"] = GroundValue::of(GroundScalar::make_bv(
      (static_cast<unsigned __int128>(0x1234) << 64) | 0xDEADBEEF, 96));
  CHECK(as_bool(eval_ground(f, f.eq(p, ptr), env2)));
}

TEST_CASE("sign extension agrees between folder and evaluator") {
  TermFactory f;
  TermRef c = f.bv_const(0x80, 8); // -128 as a byte
  TermRef widened = f.sign_extend(c, 24);
  CHECK(f.bv_const_value(widened) == 0xFFFFFF80u);
  TermRef s = f.symbol("s", f.bv_sort(8));
  GroundEnv env;
  env["s"] = bv_val(0x80, 8);
  CHECK(as_u64(eval_ground(f, f.sign_extend(s, 24), env)) == 0xFFFFFF80u);
  CHECK(as_u64(eval_ground(f, f.zero_extend(s, 24), env)) == 0x80u);
}

// --------------------------------------------------------------- printing

TEST_CASE("C-like rendering matches the SSA dump conventions") {
  TermFactory f;
  SortRef bv32 = f.bv_sort(32);
  TermRef v1 = f.symbol("v1", bv32), v2 = f.symbol("v2", bv32);
  TermRef foo1 = f.symbol("foo1", f.bool_sort());
  CHECK(print_term(f, f.ite(foo1, v1, v2)) == "(foo1 ? v1 : v2)");
  TermRef x = f.symbol("x", bv32);
  CHECK(print_term(f, f.bv_add(x, f.bv_const(1, 32))) == "x + 1");
  CHECK(print_term(f, f.bv_mul(f.bv_add(x, v1), v2)) == "(x + v1) * v2");
  CHECK(print_term(f, f.eq(x, f.bv_const(20, 32))) == "x == 20");
  CHECK(print_term(f, f.not_(f.eq(x, v1))) == "x != v1");
  CHECK(print_term(f, f.bv_const(0xFFFFFFFFu, 32)) == "-1");
  CHECK(print_term(f, f.bv_const(0xFF, 8)) == "255");
  SortRef arr = f.array_sort(f.bv_sort(64), bv32);
  TermRef a = f.symbol("a", arr);
  TermRef i = f.symbol("i", f.bv_sort(64));
  CHECK(print_term(f, f.select(a, i)) == "a[i]");
  CHECK(print_term(f, f.store(a, i, x)) == "a[i := x]");
  CHECK(print_term(f, f.and_(f.bv_sle(f.bv_const(0, 32), x),
                             f.bv_slt(x, f.bv_const(3, 32)))) ==
        "0 <= x && x < 3");
  auto rename = std::function<std::string(const std::string &)>(
      [](const std::string &s) { return s == "v1" ? "car" : s; });
  CHECK(print_term(f, f.ite(foo1, v1, v2), &rename) == "(foo1 ? car : v2)");
}

TEST_CASE("SMT-LIB rendering is exact and deterministic") {
  TermFactory f;
  SortRef bv32 = f.bv_sort(32);
  TermRef x = f.symbol("x", bv32);
  CHECK(smtlib_term(f, f.bv_add(x, f.bv_const(1, 32))) ==
        "(bvadd x (_ bv1 32))");
  SortRef arr = f.array_sort(f.bv_sort(64), bv32);
  TermRef a = f.symbol("a", arr);
  TermRef i0 = f.bv_const(0, 64);
  CHECK(smtlib_term(f, f.select(a, i0)) == "(select a (_ bv0 64))");
  TermRef st = f.store(a, i0, x);
  CHECK(smtlib_term(f, st) == "(store a (_ bv0 64) x)");
  CHECK(smtlib_term(f, f.ite(f.symbol("c", f.bool_sort()), x,
                             f.bv_const(2, 32))) == "(ite c x (_ bv2 32))");
  TermRef wide = f.concat(f.bv_const(7, 32), f.symbol("o", f.bv_sort(64)));
  CHECK(smtlib_term(f, wide) == "(concat (_ bv7 32) o)");
  CHECK(smtlib_term(f, f.extract(f.symbol("p", f.bv_sort(96)), 95, 64)) ==
        "((_ extract 95 64) p)");
  CHECK(smtlib_term(f, f.zero_extend(x, 32)) == "((_ zero_extend 32) x)");
  CHECK(smtlib_sort(f, arr) == "(Array (_ BitVec 64) (_ BitVec 32))");
  CHECK(smtlib_sort(f, f.bool_sort()) == "Bool");
  // names outside the simple-symbol alphabet are quoted
  CHECK(smtlib_symbol("main::i@1") == "|main::i@1|");
  CHECK(smtlib_symbol("x@3") == "x@3");
  CHECK(smtlib_symbol("$t1?0") == "$t1?0");
  CHECK(smtlib_symbol("2x") == "|2x|");
}

TEST_CASE("evaluation reports unbound symbols") {
  TermFactory f;
  TermRef x = f.symbol("x", f.bv_sort(32));
  GroundEnv env;
  CHECK_THROWS_WITH_AS(eval_ground(f, x, env),
                       "eval: symbol 'x' has no value", std::logic_error);
}
