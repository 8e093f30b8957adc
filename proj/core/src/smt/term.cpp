#include "minibmc/term.hpp"

#include "bv_semantics.hpp"

#include <cassert>

namespace minibmc {

namespace {

uint64_t mix(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

} // namespace

bool TermFactory::NodeKey::operator==(const NodeKey &o) const {
  return op == o.op && sort == o.sort && a == o.a && b == o.b &&
         kids == o.kids;
}

size_t TermFactory::NodeKeyHash::operator()(const NodeKey &k) const {
  uint64_t h = static_cast<uint64_t>(k.op);
  h = mix(h, k.sort.id);
  h = mix(h, k.a);
  h = mix(h, k.b);
  for (TermRef t : k.kids)
    h = mix(h, t.id);
  return static_cast<size_t>(h);
}

TermFactory::TermFactory() {
  sorts_.emplace_back(); // id 0 unused
  nodes_.emplace_back(); // id 0 unused
  Sort b;
  b.kind = SortKind::Bool;
  bool_sort_ = intern_sort(b);
  TermNode t;
  t.op = TermOp::BoolConst;
  t.sort = bool_sort_;
  t.a = 1;
  true_ = intern(std::move(t));
  TermNode f;
  f.op = TermOp::BoolConst;
  f.sort = bool_sort_;
  f.a = 0;
  false_ = intern(std::move(f));
}

void TermFactory::fail(const std::string &msg) const {
  throw std::logic_error("term: " + msg);
}

SortRef TermFactory::intern_sort(const Sort &s) {
  auto key = std::make_tuple(static_cast<uint8_t>(s.kind), s.width,
                             s.index.id, s.elem.id);
  auto it = sort_index_.find(key);
  if (it != sort_index_.end())
    return it->second;
  SortRef r{static_cast<uint32_t>(sorts_.size())};
  sorts_.push_back(s);
  sort_index_.emplace(key, r);
  return r;
}

SortRef TermFactory::bv_sort(uint32_t width) {
  if (width < 1 || width > 128)
    fail("bitvector width " + std::to_string(width) + " out of range");
  Sort s;
  s.kind = SortKind::BitVec;
  s.width = width;
  return intern_sort(s);
}

SortRef TermFactory::array_sort(SortRef index, SortRef elem) {
  if (sorts_[index.id].kind != SortKind::BitVec)
    fail("array index sort must be a bitvector");
  if (sorts_[elem.id].kind == SortKind::Array)
    fail("nested array sorts are not supported");
  Sort s;
  s.kind = SortKind::Array;
  s.index = index;
  s.elem = elem;
  return intern_sort(s);
}

TermRef TermFactory::intern(TermNode &&n) {
  NodeKey key{n.op, n.sort, n.a, n.b, n.kids};
  auto it = node_index_.find(key);
  if (it != node_index_.end())
    return it->second;
  TermRef r{static_cast<uint32_t>(nodes_.size())};
  nodes_.push_back(std::move(n));
  node_index_.emplace(std::move(key), r);
  return r;
}

uint32_t TermFactory::width_of(TermRef t) const {
  return sorts_[node(t).sort.id].width;
}

void TermFactory::require_bool(TermRef t, const char *what) const {
  if (sorts_[node(t).sort.id].kind != SortKind::Bool)
    fail(std::string(what) + ": operand is not boolean");
}

void TermFactory::require_bv(TermRef t, const char *what) const {
  if (sorts_[node(t).sort.id].kind != SortKind::BitVec)
    fail(std::string(what) + ": operand is not a bitvector");
}

void TermFactory::require_same_bv(TermRef l, TermRef r,
                                  const char *what) const {
  require_bv(l, what);
  require_bv(r, what);
  if (node(l).sort != node(r).sort)
    fail(std::string(what) + ": operand widths differ (" +
         std::to_string(width_of(l)) + " vs " + std::to_string(width_of(r)) +
         ")");
}

// ------------------------------------------------------------------ leaves

TermRef TermFactory::bv_const(uint64_t value, uint32_t width) {
  if (width < 1 || width > 64)
    fail("bv_const width " + std::to_string(width) +
         " out of range (wider constants are built by concat)");
  TermNode n;
  n.op = TermOp::BvConst;
  n.sort = bv_sort(width);
  n.a = width == 64 ? value : (value & ((1ull << width) - 1));
  return intern(std::move(n));
}

TermRef TermFactory::symbol(const std::string &name, SortRef sort) {
  auto it = symbol_index_.find(name);
  uint64_t idx;
  if (it != symbol_index_.end()) {
    idx = it->second;
    if (symbols_[idx].sort != sort)
      fail("symbol '" + name + "' redeclared at a different sort");
  } else {
    idx = symbols_.size();
    symbols_.push_back(SymbolInfo{name, sort});
    symbol_index_.emplace(name, idx);
  }
  TermNode n;
  n.op = TermOp::SymbolRef;
  n.sort = sort;
  n.a = idx;
  return intern(std::move(n));
}

// ------------------------------------------------------------------- bool

TermRef TermFactory::not_(TermRef t) {
  require_bool(t, "not");
  if (t == true_)
    return false_;
  if (t == false_)
    return true_;
  if (node(t).op == TermOp::Not)
    return node(t).kids[0];
  TermNode n;
  n.op = TermOp::Not;
  n.sort = bool_sort_;
  n.kids = {t};
  return intern(std::move(n));
}

TermRef TermFactory::and_(TermRef l, TermRef r) {
  require_bool(l, "and");
  require_bool(r, "and");
  if (l == false_ || r == false_)
    return false_;
  if (l == true_)
    return r;
  if (r == true_)
    return l;
  if (l == r)
    return l;
  TermNode n;
  n.op = TermOp::And;
  n.sort = bool_sort_;
  n.kids = {l, r};
  return intern(std::move(n));
}

TermRef TermFactory::and_(const std::vector<TermRef> &ts) {
  TermRef acc = true_;
  for (TermRef t : ts)
    acc = and_(acc, t);
  return acc;
}

TermRef TermFactory::or_(TermRef l, TermRef r) {
  require_bool(l, "or");
  require_bool(r, "or");
  if (l == true_ || r == true_)
    return true_;
  if (l == false_)
    return r;
  if (r == false_)
    return l;
  if (l == r)
    return l;
  TermNode n;
  n.op = TermOp::Or;
  n.sort = bool_sort_;
  n.kids = {l, r};
  return intern(std::move(n));
}

TermRef TermFactory::or_(const std::vector<TermRef> &ts) {
  TermRef acc = false_;
  for (TermRef t : ts)
    acc = or_(acc, t);
  return acc;
}

TermRef TermFactory::xor_(TermRef l, TermRef r) {
  require_bool(l, "xor");
  require_bool(r, "xor");
  if (l == false_)
    return r;
  if (r == false_)
    return l;
  if (l == true_)
    return not_(r);
  if (r == true_)
    return not_(l);
  if (l == r)
    return false_;
  TermNode n;
  n.op = TermOp::Xor;
  n.sort = bool_sort_;
  n.kids = {l, r};
  return intern(std::move(n));
}

TermRef TermFactory::implies(TermRef l, TermRef r) {
  require_bool(l, "implies");
  require_bool(r, "implies");
  if (l == false_ || r == true_)
    return true_;
  if (l == true_)
    return r;
  if (r == false_)
    return not_(l);
  if (l == r)
    return true_;
  TermNode n;
  n.op = TermOp::Implies;
  n.sort = bool_sort_;
  n.kids = {l, r};
  return intern(std::move(n));
}

// ------------------------------------------------------------ polymorphic

TermRef TermFactory::eq(TermRef l, TermRef r) {
  if (node(l).sort != node(r).sort)
    fail("eq: operand sorts differ");
  if (l == r)
    return true_;
  const Sort &s = sort_of(l);
  if (s.kind == SortKind::Bool) {
    if (l == true_)
      return r;
    if (r == true_)
      return l;
    if (l == false_)
      return not_(r);
    if (r == false_)
      return not_(l);
  }
  if (node(l).op == TermOp::BvConst && node(r).op == TermOp::BvConst)
    return bool_const(node(l).a == node(r).a);
  TermNode n;
  n.op = TermOp::Eq;
  n.sort = bool_sort_;
  n.kids = {l, r};
  return intern(std::move(n));
}

TermRef TermFactory::ite(TermRef c, TermRef t, TermRef f) {
  require_bool(c, "ite");
  if (node(t).sort != node(f).sort)
    fail("ite: branches have different sorts");
  if (c == true_)
    return t;
  if (c == false_)
    return f;
  if (t == f)
    return t;
  if (sort_of(t).kind == SortKind::Bool) {
    if (t == true_ && f == false_)
      return c;
    if (t == false_ && f == true_)
      return not_(c);
  }
  TermNode n;
  n.op = TermOp::Ite;
  n.sort = node(t).sort;
  n.kids = {c, t, f};
  return intern(std::move(n));
}

// -------------------------------------------------------------- bv arith

TermRef TermFactory::fold_binary_bv(TermOp op, TermRef l, TermRef r) {
  const TermNode &ln = node(l), &rn = node(r);
  uint32_t w = width_of(l);
  bool lc = ln.op == TermOp::BvConst, rc = rn.op == TermOp::BvConst;
  using namespace bvsem;
  if (lc && rc) {
    U a = ln.a, b = rn.a;
    U v = 0;
    switch (op) {
    case TermOp::BvAdd: v = add(a, b, w); break;
    case TermOp::BvSub: v = sub(a, b, w); break;
    case TermOp::BvMul: v = mul(a, b, w); break;
    case TermOp::BvUDiv: v = udiv(a, b, w); break;
    case TermOp::BvSDiv: v = sdiv(a, b, w); break;
    case TermOp::BvURem: v = urem(a, b, w); break;
    case TermOp::BvSRem: v = srem(a, b, w); break;
    case TermOp::BvAnd: v = band(a, b, w); break;
    case TermOp::BvOr: v = bor(a, b, w); break;
    case TermOp::BvXor: v = bxor(a, b, w); break;
    case TermOp::BvShl: v = shl(a, b, w); break;
    case TermOp::BvLShr: v = lshr(a, b, w); break;
    case TermOp::BvAShr: v = ashr(a, b, w); break;
    default: assert(false);
    }
    return bv_const(static_cast<uint64_t>(v), w);
  }
  // algebraic identities on one literal operand
  uint64_t all = w == 64 ? ~0ull : ((1ull << w) - 1);
  switch (op) {
  case TermOp::BvAdd:
    if (lc && ln.a == 0)
      return r;
    if (rc && rn.a == 0)
      return l;
    break;
  case TermOp::BvSub:
    if (rc && rn.a == 0)
      return l;
    if (l == r)
      return bv_const(0, w);
    break;
  case TermOp::BvMul:
    if ((lc && ln.a == 0) || (rc && rn.a == 0))
      return bv_const(0, w);
    if (lc && ln.a == 1)
      return r;
    if (rc && rn.a == 1)
      return l;
    break;
  case TermOp::BvUDiv:
    if (rc && rn.a == 1)
      return l;
    break;
  case TermOp::BvAnd:
    if ((lc && ln.a == 0) || (rc && rn.a == 0))
      return bv_const(0, w);
    if (lc && ln.a == all)
      return r;
    if (rc && rn.a == all)
      return l;
    if (l == r)
      return l;
    break;
  case TermOp::BvOr:
    if (lc && ln.a == 0)
      return r;
    if (rc && rn.a == 0)
      return l;
    if ((lc && ln.a == all) || (rc && rn.a == all))
      return bv_const(all, w);
    if (l == r)
      return l;
    break;
  case TermOp::BvXor:
    if (lc && ln.a == 0)
      return r;
    if (rc && rn.a == 0)
      return l;
    if (l == r)
      return bv_const(0, w);
    break;
  case TermOp::BvShl:
  case TermOp::BvLShr:
  case TermOp::BvAShr:
    if (rc && rn.a == 0)
      return l;
    break;
  default:
    break;
  }
  TermNode n;
  n.op = op;
  n.sort = node(l).sort;
  n.kids = {l, r};
  return intern(std::move(n));
}

#define BV_BINARY(NAME, OP, LABEL)                                            \
  TermRef TermFactory::NAME(TermRef l, TermRef r) {                           \
    require_same_bv(l, r, LABEL);                                             \
    return fold_binary_bv(TermOp::OP, l, r);                                  \
  }

BV_BINARY(bv_add, BvAdd, "bvadd")
BV_BINARY(bv_sub, BvSub, "bvsub")
BV_BINARY(bv_mul, BvMul, "bvmul")
BV_BINARY(bv_udiv, BvUDiv, "bvudiv")
BV_BINARY(bv_sdiv, BvSDiv, "bvsdiv")
BV_BINARY(bv_urem, BvURem, "bvurem")
BV_BINARY(bv_srem, BvSRem, "bvsrem")
BV_BINARY(bv_and, BvAnd, "bvand")
BV_BINARY(bv_or, BvOr, "bvor")
BV_BINARY(bv_xor, BvXor, "bvxor")
BV_BINARY(bv_shl, BvShl, "bvshl")
BV_BINARY(bv_lshr, BvLShr, "bvlshr")
BV_BINARY(bv_ashr, BvAShr, "bvashr")
#undef BV_BINARY

TermRef TermFactory::bv_neg(TermRef t) {
  require_bv(t, "bvneg");
  uint32_t w = width_of(t);
  if (node(t).op == TermOp::BvConst)
    return bv_const(static_cast<uint64_t>(bvsem::neg(node(t).a, w)), w);
  TermNode n;
  n.op = TermOp::BvNeg;
  n.sort = node(t).sort;
  n.kids = {t};
  return intern(std::move(n));
}

TermRef TermFactory::bv_not(TermRef t) {
  require_bv(t, "bvnot");
  uint32_t w = width_of(t);
  if (node(t).op == TermOp::BvConst)
    return bv_const(static_cast<uint64_t>(bvsem::bnot(node(t).a, w)), w);
  if (node(t).op == TermOp::BvNot)
    return node(t).kids[0];
  TermNode n;
  n.op = TermOp::BvNot;
  n.sort = node(t).sort;
  n.kids = {t};
  return intern(std::move(n));
}

TermRef TermFactory::fold_compare(TermOp op, TermRef l, TermRef r) {
  const TermNode &ln = node(l), &rn = node(r);
  uint32_t w = width_of(l);
  using namespace bvsem;
  if (ln.op == TermOp::BvConst && rn.op == TermOp::BvConst) {
    switch (op) {
    case TermOp::BvUlt: return bool_const(ult(ln.a, rn.a, w));
    case TermOp::BvUle: return bool_const(ule(ln.a, rn.a, w));
    case TermOp::BvSlt: return bool_const(slt(ln.a, rn.a, w));
    case TermOp::BvSle: return bool_const(sle(ln.a, rn.a, w));
    default: assert(false);
    }
  }
  if (l == r)
    return bool_const(op == TermOp::BvUle || op == TermOp::BvSle);
  if (op == TermOp::BvUlt && rn.op == TermOp::BvConst && rn.a == 0)
    return false_; // nothing is unsigned-below zero
  if (op == TermOp::BvUle && ln.op == TermOp::BvConst && ln.a == 0)
    return true_; // zero is unsigned-below-or-equal everything
  TermNode n;
  n.op = op;
  n.sort = bool_sort_;
  n.kids = {l, r};
  return intern(std::move(n));
}

TermRef TermFactory::bv_ult(TermRef l, TermRef r) {
  require_same_bv(l, r, "bvult");
  return fold_compare(TermOp::BvUlt, l, r);
}
TermRef TermFactory::bv_ule(TermRef l, TermRef r) {
  require_same_bv(l, r, "bvule");
  return fold_compare(TermOp::BvUle, l, r);
}
TermRef TermFactory::bv_slt(TermRef l, TermRef r) {
  require_same_bv(l, r, "bvslt");
  return fold_compare(TermOp::BvSlt, l, r);
}
TermRef TermFactory::bv_sle(TermRef l, TermRef r) {
  require_same_bv(l, r, "bvsle");
  return fold_compare(TermOp::BvSle, l, r);
}

// ----------------------------------------------------------- bv structure

TermRef TermFactory::concat(TermRef high, TermRef low) {
  require_bv(high, "concat");
  require_bv(low, "concat");
  uint32_t wh = width_of(high), wl = width_of(low);
  if (wh + wl > 128)
    fail("concat: result width " + std::to_string(wh + wl) + " exceeds 128");
  const TermNode &hn = node(high), &ln = node(low);
  if (hn.op == TermOp::BvConst && ln.op == TermOp::BvConst && wh + wl <= 64)
    return bv_const((hn.a << wl) | ln.a, wh + wl);
  TermNode n;
  n.op = TermOp::Concat;
  n.sort = bv_sort(wh + wl);
  n.kids = {high, low};
  return intern(std::move(n));
}

TermRef TermFactory::extract(TermRef t, uint32_t hi, uint32_t lo) {
  require_bv(t, "extract");
  uint32_t w = width_of(t);
  if (hi >= w || lo > hi)
    fail("extract: bounds [" + std::to_string(hi) + ":" + std::to_string(lo) +
         "] invalid for width " + std::to_string(w));
  if (lo == 0 && hi == w - 1)
    return t;
  uint32_t rw = hi - lo + 1;
  const TermNode &tn = node(t);
  if (tn.op == TermOp::BvConst)
    return bv_const(rw == 64 ? (tn.a >> lo)
                             : ((tn.a >> lo) & ((1ull << rw) - 1)),
                    rw);
  // peel a concat when the slice lies wholly in one half
  if (tn.op == TermOp::Concat) {
    uint32_t wl = width_of(tn.kids[1]);
    if (hi < wl)
      return extract(tn.kids[1], hi, lo);
    if (lo >= wl)
      return extract(tn.kids[0], hi - wl, lo - wl);
  }
  TermNode n;
  n.op = TermOp::Extract;
  n.sort = bv_sort(rw);
  n.a = hi;
  n.b = lo;
  n.kids = {t};
  return intern(std::move(n));
}

TermRef TermFactory::zero_extend(TermRef t, uint32_t extra) {
  require_bv(t, "zero_extend");
  if (extra == 0)
    return t;
  uint32_t w = width_of(t);
  if (w + extra > 128)
    fail("zero_extend: result width exceeds 128");
  const TermNode &tn = node(t);
  if (tn.op == TermOp::BvConst && w + extra <= 64)
    return bv_const(tn.a, w + extra);
  TermNode n;
  n.op = TermOp::ZeroExt;
  n.sort = bv_sort(w + extra);
  n.a = extra;
  n.kids = {t};
  return intern(std::move(n));
}

TermRef TermFactory::sign_extend(TermRef t, uint32_t extra) {
  require_bv(t, "sign_extend");
  if (extra == 0)
    return t;
  uint32_t w = width_of(t);
  if (w + extra > 128)
    fail("sign_extend: result width exceeds 128");
  const TermNode &tn = node(t);
  if (tn.op == TermOp::BvConst && w + extra <= 64) {
    using namespace bvsem;
    return bv_const(
        static_cast<uint64_t>(static_cast<U>(sext(tn.a, w)) & mask(w + extra)),
        w + extra);
  }
  TermNode n;
  n.op = TermOp::SignExt;
  n.sort = bv_sort(w + extra);
  n.a = extra;
  n.kids = {t};
  return intern(std::move(n));
}

// ----------------------------------------------------------------- arrays

TermRef TermFactory::select(TermRef array, TermRef index) {
  const Sort &s = sort_of(array);
  if (s.kind != SortKind::Array)
    fail("select: operand is not an array");
  if (node(index).sort != s.index)
    fail("select: index sort mismatch");
  // Read over a literal-indexed store chain resolves structurally.
  TermRef a = array;
  while (node(a).op == TermOp::Store) {
    const TermNode &st = node(a);
    TermRef si = st.kids[1];
    if (si == index)
      return st.kids[2];
    if (node(si).op == TermOp::BvConst && node(index).op == TermOp::BvConst &&
        node(si).a != node(index).a) {
      a = st.kids[0];
      continue;
    }
    break; // indices may alias; keep the select symbolic
  }
  TermNode n;
  n.op = TermOp::Select;
  n.sort = s.elem;
  n.kids = {a, index};
  return intern(std::move(n));
}

TermRef TermFactory::store(TermRef array, TermRef index, TermRef value) {
  const Sort &s = sort_of(array);
  if (s.kind != SortKind::Array)
    fail("store: operand is not an array");
  if (node(index).sort != s.index)
    fail("store: index sort mismatch");
  if (node(value).sort != s.elem)
    fail("store: element sort mismatch");
  // Writing back the value just read leaves the array unchanged
  // (extensionally); this keeps guarded-copy expansions compact.
  if (node(value).op == TermOp::Select && node(value).kids[0] == array &&
      node(value).kids[1] == index)
    return array;
  TermNode n;
  n.op = TermOp::Store;
  n.sort = node(array).sort;
  n.kids = {array, index, value};
  return intern(std::move(n));
}

TermRef TermFactory::memcpy_term(TermRef a, TermRef b, TermRef i, TermRef k,
                                 TermRef n, std::optional<uint64_t> capacity) {
  const Sort &sa = sort_of(a), &sb = sort_of(b);
  if (sa.kind != SortKind::Array || sb.kind != SortKind::Array)
    fail("memcpy: operands are not arrays");
  if (node(a).sort != node(b).sort)
    fail("memcpy: source and destination sorts differ");
  if (node(i).sort != sa.index || node(k).sort != sa.index ||
      node(n).sort != sa.index)
    fail("memcpy: position sorts must match the array index sort");
  uint32_t iw = sorts_[sa.index.id].width;

  constexpr uint64_t kExpansionLimit = 65536;
  if (node(n).op == TermOp::BvConst) {
    uint64_t cnt = node(n).a;
    if (cnt > kExpansionLimit)
      fail("memcpy: literal length " + std::to_string(cnt) +
           " exceeds the expansion limit");
    TermRef r = b;
    for (uint64_t t = 0; t < cnt; ++t) {
      TermRef off = bv_const(t, iw);
      r = store(r, bv_add(k, off), select(a, bv_add(i, off)));
    }
    return r;
  }
  if (!capacity)
    fail("memcpy: symbolic length requires a capacity bound");
  if (*capacity > kExpansionLimit)
    fail("memcpy: capacity bound exceeds the expansion limit");
  if (iw < 64 && *capacity > (1ull << iw))
    fail("memcpy: capacity bound does not fit the index width");
  TermRef r = b;
  for (uint64_t t = 0; t < *capacity; ++t) {
    TermRef off = bv_const(t, iw);
    TermRef dst = bv_add(k, off);
    TermRef copied = select(a, bv_add(i, off));
    TermRef kept = select(b, dst);
    r = store(r, dst, ite(bv_ult(off, n), copied, kept));
  }
  return r;
}

} // namespace minibmc
