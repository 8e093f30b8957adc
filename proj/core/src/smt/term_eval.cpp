#include "minibmc/term.hpp"

#include "bv_semantics.hpp"

#include <cassert>

namespace minibmc {

GroundScalar GroundScalar::make_bv(unsigned __int128 v, uint32_t w) {
  GroundScalar s;
  s.is_bool = false;
  s.bits = v & bvsem::mask(w);
  s.width = w;
  return s;
}

namespace {

[[noreturn]] void fail(const std::string &msg) {
  throw std::logic_error("eval: " + msg);
}

struct Evaluator {
  const TermFactory &f;
  const GroundEnv &env;
  std::map<uint32_t, GroundValue> memo;

  const GroundValue &go(TermRef t) {
    auto it = memo.find(t.id);
    if (it != memo.end())
      return it->second;
    GroundValue v = compute(t);
    return memo.emplace(t.id, std::move(v)).first->second;
  }

  GroundScalar scalar(TermRef t) {
    const GroundValue &v = go(t);
    if (v.kind != GroundValue::Kind::Scalar)
      fail("expected a scalar value");
    return v.scalar;
  }

  bool truth(TermRef t) {
    GroundScalar s = scalar(t);
    if (!s.is_bool)
      fail("expected a boolean value");
    return s.b;
  }

  // A scalar adjusted to the array's element sort; a default-constructed
  // entry reads as zero / false at that sort.
  static GroundScalar normalize(GroundScalar s, const Sort &elem_sort) {
    if (elem_sort.kind == SortKind::Bool) {
      if (!s.is_bool) {
        s.is_bool = true;
        s.b = false;
      }
      s.width = 0;
      s.bits = 0;
    } else if (s.width == 0) {
      s.is_bool = false;
      s.width = elem_sort.width;
      s.bits &= bvsem::mask(s.width);
    }
    return s;
  }

  static GroundScalar element(const GroundArray &a, unsigned __int128 idx,
                              const Sort &elem_sort) {
    auto it = a.elems.find(idx);
    return normalize(it != a.elems.end() ? it->second : a.dflt, elem_sort);
  }

  static bool arrays_equal(const GroundArray &x, const GroundArray &y,
                           const Sort &elem_sort) {
    if (!(normalize(x.dflt, elem_sort) == normalize(y.dflt, elem_sort)))
      return false;
    for (const auto &kv : x.elems)
      if (!(element(x, kv.first, elem_sort) ==
            element(y, kv.first, elem_sort)))
        return false;
    for (const auto &kv : y.elems)
      if (!(element(x, kv.first, elem_sort) ==
            element(y, kv.first, elem_sort)))
        return false;
    return true;
  }

  GroundValue compute(TermRef t) {
    const TermNode &n = f.node(t);
    const Sort &sort = f.sort(n.sort);
    using namespace bvsem;
    switch (n.op) {
    case TermOp::BoolConst:
      return GroundValue::of(GroundScalar::make_bool(n.a != 0));
    case TermOp::BvConst:
      return GroundValue::of(GroundScalar::make_bv(n.a, sort.width));
    case TermOp::SymbolRef: {
      const SymbolInfo &sym = f.symbol_info(n.a);
      auto it = env.find(sym.name);
      if (it == env.end())
        fail("symbol '" + sym.name + "' has no value");
      const GroundValue &v = it->second;
      if (sort.kind == SortKind::Array) {
        if (v.kind != GroundValue::Kind::Array)
          fail("symbol '" + sym.name + "' bound to a non-array value");
      } else {
        if (v.kind != GroundValue::Kind::Scalar)
          fail("symbol '" + sym.name + "' bound to a non-scalar value");
        if (sort.kind == SortKind::Bool && !v.scalar.is_bool)
          fail("symbol '" + sym.name + "' bound to a non-boolean value");
        if (sort.kind == SortKind::BitVec &&
            (v.scalar.is_bool || v.scalar.width != sort.width))
          fail("symbol '" + sym.name + "' bound at the wrong width");
      }
      return v;
    }
    case TermOp::Not:
      return GroundValue::of(GroundScalar::make_bool(!truth(n.kids[0])));
    case TermOp::And:
      return GroundValue::of(
          GroundScalar::make_bool(truth(n.kids[0]) && truth(n.kids[1])));
    case TermOp::Or:
      return GroundValue::of(
          GroundScalar::make_bool(truth(n.kids[0]) || truth(n.kids[1])));
    case TermOp::Xor:
      return GroundValue::of(
          GroundScalar::make_bool(truth(n.kids[0]) != truth(n.kids[1])));
    case TermOp::Implies:
      return GroundValue::of(
          GroundScalar::make_bool(!truth(n.kids[0]) || truth(n.kids[1])));
    case TermOp::Eq: {
      const GroundValue &l = go(n.kids[0]);
      const GroundValue &r = go(n.kids[1]);
      if (l.kind == GroundValue::Kind::Array) {
        const Sort &es = f.sort(f.sort(f.node(n.kids[0]).sort).elem);
        return GroundValue::of(
            GroundScalar::make_bool(arrays_equal(l.array, r.array, es)));
      }
      return GroundValue::of(GroundScalar::make_bool(l.scalar == r.scalar));
    }
    case TermOp::Ite:
      return go(truth(n.kids[0]) ? n.kids[1] : n.kids[2]);
    case TermOp::BvNeg: {
      GroundScalar a = scalar(n.kids[0]);
      return GroundValue::of(
          GroundScalar::make_bv(neg(a.bits, a.width), a.width));
    }
    case TermOp::BvNot: {
      GroundScalar a = scalar(n.kids[0]);
      return GroundValue::of(
          GroundScalar::make_bv(bnot(a.bits, a.width), a.width));
    }
    case TermOp::BvAdd:
    case TermOp::BvSub:
    case TermOp::BvMul:
    case TermOp::BvUDiv:
    case TermOp::BvSDiv:
    case TermOp::BvURem:
    case TermOp::BvSRem:
    case TermOp::BvAnd:
    case TermOp::BvOr:
    case TermOp::BvXor:
    case TermOp::BvShl:
    case TermOp::BvLShr:
    case TermOp::BvAShr: {
      GroundScalar a = scalar(n.kids[0]), b = scalar(n.kids[1]);
      uint32_t w = a.width;
      U r = 0;
      switch (n.op) {
      case TermOp::BvAdd: r = add(a.bits, b.bits, w); break;
      case TermOp::BvSub: r = sub(a.bits, b.bits, w); break;
      case TermOp::BvMul: r = mul(a.bits, b.bits, w); break;
      case TermOp::BvUDiv: r = udiv(a.bits, b.bits, w); break;
      case TermOp::BvSDiv: r = sdiv(a.bits, b.bits, w); break;
      case TermOp::BvURem: r = urem(a.bits, b.bits, w); break;
      case TermOp::BvSRem: r = srem(a.bits, b.bits, w); break;
      case TermOp::BvAnd: r = band(a.bits, b.bits, w); break;
      case TermOp::BvOr: r = bor(a.bits, b.bits, w); break;
      case TermOp::BvXor: r = bxor(a.bits, b.bits, w); break;
      case TermOp::BvShl: r = shl(a.bits, b.bits, w); break;
      case TermOp::BvLShr: r = lshr(a.bits, b.bits, w); break;
      case TermOp::BvAShr: r = ashr(a.bits, b.bits, w); break;
      default: assert(false);
      }
      return GroundValue::of(GroundScalar::make_bv(r, w));
    }
    case TermOp::BvUlt:
    case TermOp::BvUle:
    case TermOp::BvSlt:
    case TermOp::BvSle: {
      GroundScalar a = scalar(n.kids[0]), b = scalar(n.kids[1]);
      uint32_t w = a.width;
      bool r = false;
      switch (n.op) {
      case TermOp::BvUlt: r = ult(a.bits, b.bits, w); break;
      case TermOp::BvUle: r = ule(a.bits, b.bits, w); break;
      case TermOp::BvSlt: r = slt(a.bits, b.bits, w); break;
      case TermOp::BvSle: r = sle(a.bits, b.bits, w); break;
      default: assert(false);
      }
      return GroundValue::of(GroundScalar::make_bool(r));
    }
    case TermOp::Concat: {
      GroundScalar hi = scalar(n.kids[0]), lo = scalar(n.kids[1]);
      return GroundValue::of(GroundScalar::make_bv(
          (hi.bits << lo.width) | lo.bits, hi.width + lo.width));
    }
    case TermOp::Extract: {
      GroundScalar a = scalar(n.kids[0]);
      uint32_t hi = static_cast<uint32_t>(n.a),
               lo = static_cast<uint32_t>(n.b);
      return GroundValue::of(
          GroundScalar::make_bv(a.bits >> lo, hi - lo + 1));
    }
    case TermOp::ZeroExt: {
      GroundScalar a = scalar(n.kids[0]);
      return GroundValue::of(GroundScalar::make_bv(
          a.bits, a.width + static_cast<uint32_t>(n.a)));
    }
    case TermOp::SignExt: {
      GroundScalar a = scalar(n.kids[0]);
      uint32_t w = a.width + static_cast<uint32_t>(n.a);
      return GroundValue::of(GroundScalar::make_bv(
          static_cast<U>(sext(a.bits, a.width)), w));
    }
    case TermOp::Select: {
      const GroundValue &av = go(n.kids[0]);
      GroundScalar idx = scalar(n.kids[1]);
      return GroundValue::of(element(av.array, idx.bits, sort));
    }
    case TermOp::Store: {
      GroundArray a = go(n.kids[0]).array;
      GroundScalar idx = scalar(n.kids[1]);
      a.elems[idx.bits] = scalar(n.kids[2]);
      return GroundValue::of(std::move(a));
    }
    }
    assert(false);
    fail("unreachable");
  }
};

} // namespace

GroundValue eval_ground(const TermFactory &f, TermRef t,
                        const GroundEnv &env) {
  Evaluator ev{f, env, {}};
  return ev.go(t);
}

} // namespace minibmc
