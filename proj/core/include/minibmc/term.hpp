// Hash-consed terms over the quantifier-free theories of fixed-width
// bitvectors and extensional arrays, plus booleans.  This is the single
// expression language shared by symbolic execution (SSA right-hand sides),
// the container contract builders, the solver encoder and the
// counterexample decoder.
//
// Terms are immutable nodes owned by a TermFactory; structurally identical
// nodes are interned, so reference equality is structural equality.  The
// builders perform sort checking (a mismatch throws std::logic_error naming
// the construct) and light constant folding — in particular the ite laws
// ite(true,a,b)=a / ite(false,a,b)=b and select-over-store with literal
// indices hold by construction.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace minibmc {

// ---------------------------------------------------------------- sorts

enum class SortKind : uint8_t { Bool, BitVec, Array };

struct SortRef {
  uint32_t id = 0;
  bool operator==(const SortRef &o) const { return id == o.id; }
  bool operator!=(const SortRef &o) const { return id != o.id; }
};

struct Sort {
  SortKind kind = SortKind::Bool;
  uint32_t width = 0; // BitVec only
  SortRef index;      // Array only
  SortRef elem;       // Array only
};

// ---------------------------------------------------------------- terms

enum class TermOp : uint8_t {
  // leaves
  BoolConst, // payload a: 0/1
  BvConst,   // payload a: value bits (width <= 64)
  SymbolRef, // payload a: index into the factory's symbol table
  // boolean connectives
  Not,
  And,
  Or,
  Xor,
  Implies,
  // polymorphic
  Eq,  // both kids share a sort; result Bool
  Ite, // kid0 Bool, kid1/kid2 share a sort
  // bitvector arithmetic
  BvNeg,
  BvAdd,
  BvSub,
  BvMul,
  BvUDiv,
  BvSDiv,
  BvURem,
  BvSRem,
  // bitvector bitwise
  BvNot,
  BvAnd,
  BvOr,
  BvXor,
  BvShl,
  BvLShr,
  BvAShr,
  // bitvector comparisons (result Bool)
  BvUlt,
  BvUle,
  BvSlt,
  BvSle,
  // bitvector structure
  Concat,  // kid0 high bits, kid1 low bits
  Extract, // payload a: hi, payload b: lo
  ZeroExt, // payload a: extra bits
  SignExt, // payload a: extra bits
  // arrays
  Select,
  Store,
};

struct TermRef {
  uint32_t id = 0; // 0 = invalid
  bool valid() const { return id != 0; }
  bool operator==(const TermRef &o) const { return id == o.id; }
  bool operator!=(const TermRef &o) const { return id != o.id; }
  bool operator<(const TermRef &o) const { return id < o.id; }
};

struct TermNode {
  TermOp op = TermOp::BoolConst;
  SortRef sort;
  uint64_t a = 0; // constant bits / symbol index / extract hi / ext amount
  uint64_t b = 0; // extract lo
  std::vector<TermRef> kids;
};

// A declared symbol: every occurrence of the same (name, sort) pair is the
// same term.  Declaring one name at two sorts is an error.
struct SymbolInfo {
  std::string name;
  SortRef sort;
};

class TermFactory {
public:
  TermFactory();

  // sorts
  SortRef bool_sort() const { return bool_sort_; }
  SortRef bv_sort(uint32_t width);
  SortRef array_sort(SortRef index, SortRef elem);
  const Sort &sort(SortRef s) const { return sorts_[s.id]; }
  const Sort &sort_of(TermRef t) const { return sorts_[node(t).sort.id]; }

  // nodes
  const TermNode &node(TermRef t) const { return nodes_[t.id]; }
  const SymbolInfo &symbol_info(uint64_t index) const {
    return symbols_[index];
  }
  const std::vector<SymbolInfo> &symbols() const { return symbols_; }

  // leaves
  TermRef tru() { return true_; }
  TermRef fls() { return false_; }
  TermRef bool_const(bool v) { return v ? true_ : false_; }
  TermRef bv_const(uint64_t value, uint32_t width);
  TermRef symbol(const std::string &name, SortRef sort);

  // boolean connectives (operands Bool)
  TermRef not_(TermRef t);
  TermRef and_(TermRef l, TermRef r);
  TermRef and_(const std::vector<TermRef> &ts); // empty -> true
  TermRef or_(TermRef l, TermRef r);
  TermRef or_(const std::vector<TermRef> &ts); // empty -> false
  TermRef xor_(TermRef l, TermRef r);
  TermRef implies(TermRef l, TermRef r);

  // polymorphic
  TermRef eq(TermRef l, TermRef r);
  TermRef neq(TermRef l, TermRef r) { return not_(eq(l, r)); }
  TermRef ite(TermRef c, TermRef t, TermRef f);

  // bitvector arithmetic (operands same BitVec sort)
  TermRef bv_neg(TermRef t);
  TermRef bv_add(TermRef l, TermRef r);
  TermRef bv_sub(TermRef l, TermRef r);
  TermRef bv_mul(TermRef l, TermRef r);
  TermRef bv_udiv(TermRef l, TermRef r);
  TermRef bv_sdiv(TermRef l, TermRef r);
  TermRef bv_urem(TermRef l, TermRef r);
  TermRef bv_srem(TermRef l, TermRef r);

  // bitvector bitwise
  TermRef bv_not(TermRef t);
  TermRef bv_and(TermRef l, TermRef r);
  TermRef bv_or(TermRef l, TermRef r);
  TermRef bv_xor(TermRef l, TermRef r);
  TermRef bv_shl(TermRef l, TermRef r);
  TermRef bv_lshr(TermRef l, TermRef r);
  TermRef bv_ashr(TermRef l, TermRef r);

  // bitvector comparisons
  TermRef bv_ult(TermRef l, TermRef r);
  TermRef bv_ule(TermRef l, TermRef r);
  TermRef bv_ugt(TermRef l, TermRef r) { return bv_ult(r, l); }
  TermRef bv_uge(TermRef l, TermRef r) { return bv_ule(r, l); }
  TermRef bv_slt(TermRef l, TermRef r);
  TermRef bv_sle(TermRef l, TermRef r);
  TermRef bv_sgt(TermRef l, TermRef r) { return bv_slt(r, l); }
  TermRef bv_sge(TermRef l, TermRef r) { return bv_sle(r, l); }

  // bitvector structure
  TermRef concat(TermRef high, TermRef low);
  TermRef extract(TermRef t, uint32_t hi, uint32_t lo);
  TermRef zero_extend(TermRef t, uint32_t extra);
  TermRef sign_extend(TermRef t, uint32_t extra);

  // arrays
  TermRef select(TermRef array, TermRef index);
  TermRef store(TermRef array, TermRef index, TermRef value);

  // Array copy: the array equal to `b` overwritten on [k, k+n) with the
  // elements a[i .. i+n).  A literal n expands to a store chain; a symbolic
  // n expands over `capacity` index slots with per-slot guards and requires
  // the bound.
  TermRef memcpy_term(TermRef a, TermRef b, TermRef i, TermRef k, TermRef n,
                      std::optional<uint64_t> capacity = std::nullopt);

  // constant inspection
  bool is_true(TermRef t) const { return t == true_; }
  bool is_false(TermRef t) const { return t == false_; }
  bool is_bv_const(TermRef t) const {
    return node(t).op == TermOp::BvConst;
  }
  uint64_t bv_const_value(TermRef t) const { return node(t).a; }

  size_t num_terms() const { return nodes_.size() - 1; }

private:
  TermRef intern(TermNode &&n);
  SortRef intern_sort(const Sort &s);
  uint32_t width_of(TermRef t) const;
  void require_bool(TermRef t, const char *what) const;
  void require_bv(TermRef t, const char *what) const;
  void require_same_bv(TermRef l, TermRef r, const char *what) const;
  [[noreturn]] void fail(const std::string &msg) const;

  TermRef fold_binary_bv(TermOp op, TermRef l, TermRef r);
  TermRef fold_compare(TermOp op, TermRef l, TermRef r);

  std::vector<Sort> sorts_;
  std::map<std::tuple<uint8_t, uint32_t, uint32_t, uint32_t>, SortRef>
      sort_index_;
  std::vector<TermNode> nodes_;
  struct NodeKey {
    TermOp op;
    SortRef sort;
    uint64_t a, b;
    std::vector<TermRef> kids;
    bool operator==(const NodeKey &o) const;
  };
  struct NodeKeyHash {
    size_t operator()(const NodeKey &k) const;
  };
  std::unordered_map<NodeKey, TermRef, NodeKeyHash> node_index_;
  std::vector<SymbolInfo> symbols_;
  std::unordered_map<std::string, uint64_t> symbol_index_;
  SortRef bool_sort_;
  TermRef true_, false_;
};

// ------------------------------------------------------------- printing

// C-like rendering used by the SSA dump: ite prints as `(c ? a : b)`,
// select as `a[i]`, store as `a[i := v]`, comparisons as infix operators.
// `rename` (optional) rewrites symbol names for display.
std::string print_term(const TermFactory &f, TermRef t,
                       const std::function<std::string(const std::string &)>
                           *rename = nullptr);

// SMT-LIB v2 rendering of one term: deterministic s-expression text.
// Symbol names outside the simple-symbol character set are |quoted|.
std::string smtlib_term(const TermFactory &f, TermRef t);
std::string smtlib_sort(const TermFactory &f, SortRef s);
std::string smtlib_symbol(const std::string &name);

// ----------------------------------------------------- ground evaluation

// Concrete evaluation of a term under an assignment to its symbols; the
// independent oracle for builder-level tests and for counterexample
// validation.  Scalars hold up to 128 bits (pointers are 96-bit values
// built by concatenation).
struct GroundScalar {
  bool is_bool = false;
  bool b = false;
  unsigned __int128 bits = 0;
  uint32_t width = 0;

  static GroundScalar make_bool(bool v) {
    GroundScalar s;
    s.is_bool = true;
    s.b = v;
    return s;
  }
  static GroundScalar make_bv(unsigned __int128 v, uint32_t w);
  bool operator==(const GroundScalar &o) const {
    return is_bool == o.is_bool && b == o.b && bits == o.bits &&
           width == o.width;
  }
};

struct GroundArray {
  std::map<unsigned __int128, GroundScalar> elems;
  GroundScalar dflt; // value at every index not in `elems`
};

struct GroundValue {
  enum class Kind { Scalar, Array } kind = Kind::Scalar;
  GroundScalar scalar;
  GroundArray array;

  static GroundValue of(GroundScalar s) {
    GroundValue v;
    v.kind = Kind::Scalar;
    v.scalar = s;
    return v;
  }
  static GroundValue of(GroundArray a) {
    GroundValue v;
    v.kind = Kind::Array;
    v.array = std::move(a);
    return v;
  }
};

using GroundEnv = std::map<std::string, GroundValue>;

// Evaluates `t` with every symbol bound by `env`; an unbound symbol or a
// non-ground construct throws std::logic_error.
GroundValue eval_ground(const TermFactory &f, TermRef t, const GroundEnv &env);

} // namespace minibmc
