#include "minibmc/term.hpp"

#include <cassert>

namespace minibmc {

// ------------------------------------------------------- C-like rendering

namespace {

// Binding strengths for the infix rendering; higher binds tighter.
enum Prec : int {
  kPrimary = 100,
  kUnary = 90,
  kMul = 80,
  kAdd = 70,
  kShift = 60,
  kConcat = 55,
  kRel = 50,
  kEq = 40,
  kBitAnd = 36,
  kBitXor = 34,
  kBitOr = 32,
  kLogAnd = 30,
  kLogOr = 28,
  kImplies = 26,
};

struct CPrinter {
  const TermFactory &f;
  const std::function<std::string(const std::string &)> *rename;

  std::string leaf_const(const TermNode &n) const {
    const Sort &s = f.sort(n.sort);
    if (s.kind == SortKind::Bool)
      return n.a ? "true" : "false";
    // Two's-complement display for int-sized and wider constants keeps
    // dumps readable (-1 rather than 4294967295); narrow widths print raw.
    if (s.width >= 32 && (n.a >> (s.width - 1)) & 1) {
      uint64_t ext = s.width == 64
                         ? n.a
                         : n.a | ~((1ull << s.width) - 1);
      return std::to_string(static_cast<int64_t>(ext));
    }
    return std::to_string(n.a);
  }

  std::string binary(const TermNode &n, const char *op, int prec,
                     int parent) const {
    std::string s =
        go(n.kids[0], prec) + " " + op + " " + go(n.kids[1], prec + 1);
    if (prec < parent)
      return "(" + s + ")";
    return s;
  }

  std::string go(TermRef t, int parent) const {
    const TermNode &n = f.node(t);
    switch (n.op) {
    case TermOp::BoolConst:
    case TermOp::BvConst:
      return leaf_const(n);
    case TermOp::SymbolRef: {
      const std::string &name = f.symbol_info(n.a).name;
      return rename ? (*rename)(name) : name;
    }
    case TermOp::Not:
      // Negated equality reads better as the disequality operator.
      if (f.node(n.kids[0]).op == TermOp::Eq) {
        const TermNode &e = f.node(n.kids[0]);
        std::string s =
            go(e.kids[0], kEq) + " != " + go(e.kids[1], kEq + 1);
        if (kEq < parent)
          return "(" + s + ")";
        return s;
      }
      return "!" + go(n.kids[0], kUnary);
    case TermOp::And:
      return binary(n, "&&", kLogAnd, parent);
    case TermOp::Or:
      return binary(n, "||", kLogOr, parent);
    case TermOp::Xor:
      return binary(n, "^", kBitXor, parent);
    case TermOp::Implies:
      return binary(n, "=>", kImplies, parent);
    case TermOp::Eq:
      return binary(n, "==", kEq, parent);
    case TermOp::Ite:
      return "(" + go(n.kids[0], 0) + " ? " + go(n.kids[1], 0) + " : " +
             go(n.kids[2], 0) + ")";
    case TermOp::BvNeg:
      return "-" + go(n.kids[0], kUnary);
    case TermOp::BvAdd:
      return binary(n, "+", kAdd, parent);
    case TermOp::BvSub:
      return binary(n, "-", kAdd, parent);
    case TermOp::BvMul:
      return binary(n, "*", kMul, parent);
    case TermOp::BvUDiv:
    case TermOp::BvSDiv:
      return binary(n, "/", kMul, parent);
    case TermOp::BvURem:
    case TermOp::BvSRem:
      return binary(n, "%", kMul, parent);
    case TermOp::BvNot:
      return "~" + go(n.kids[0], kUnary);
    case TermOp::BvAnd:
      return binary(n, "&", kBitAnd, parent);
    case TermOp::BvOr:
      return binary(n, "|", kBitOr, parent);
    case TermOp::BvXor:
      return binary(n, "^", kBitXor, parent);
    case TermOp::BvShl:
      return binary(n, "<<", kShift, parent);
    case TermOp::BvLShr:
    case TermOp::BvAShr:
      return binary(n, ">>", kShift, parent);
    case TermOp::BvUlt:
    case TermOp::BvSlt:
      return binary(n, "<", kRel, parent);
    case TermOp::BvUle:
    case TermOp::BvSle:
      return binary(n, "<=", kRel, parent);
    case TermOp::Concat:
      return binary(n, "++", kConcat, parent);
    case TermOp::Extract:
      return go(n.kids[0], kPrimary) + "[" + std::to_string(n.a) + ":" +
             std::to_string(n.b) + "]";
    case TermOp::ZeroExt:
      return "zero_extend(" + go(n.kids[0], 0) + ", " + std::to_string(n.a) +
             ")";
    case TermOp::SignExt:
      return "sign_extend(" + go(n.kids[0], 0) + ", " + std::to_string(n.a) +
             ")";
    case TermOp::Select:
      return go(n.kids[0], kPrimary) + "[" + go(n.kids[1], 0) + "]";
    case TermOp::Store:
      return go(n.kids[0], kPrimary) + "[" + go(n.kids[1], 0) +
             " := " + go(n.kids[2], 0) + "]";
    }
    assert(false);
    return "";
  }
};

} // namespace

std::string print_term(
    const TermFactory &f, TermRef t,
    const std::function<std::string(const std::string &)> *rename) {
  return CPrinter{f, rename}.go(t, 0);
}

// ------------------------------------------------------ SMT-LIB rendering

namespace {

bool simple_symbol_char(char c) {
  if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
      (c >= '0' && c <= '9'))
    return true;
  for (char s : {'~', '!', '@', '$', '%', '^', '&', '*', '_', '-', '+', '=',
                 '<', '>', '.', '?', '/'})
    if (c == s)
      return true;
  return false;
}

const char *smt_op_name(TermOp op) {
  switch (op) {
  case TermOp::Not: return "not";
  case TermOp::And: return "and";
  case TermOp::Or: return "or";
  case TermOp::Xor: return "xor";
  case TermOp::Implies: return "=>";
  case TermOp::Eq: return "=";
  case TermOp::Ite: return "ite";
  case TermOp::BvNeg: return "bvneg";
  case TermOp::BvAdd: return "bvadd";
  case TermOp::BvSub: return "bvsub";
  case TermOp::BvMul: return "bvmul";
  case TermOp::BvUDiv: return "bvudiv";
  case TermOp::BvSDiv: return "bvsdiv";
  case TermOp::BvURem: return "bvurem";
  case TermOp::BvSRem: return "bvsrem";
  case TermOp::BvNot: return "bvnot";
  case TermOp::BvAnd: return "bvand";
  case TermOp::BvOr: return "bvor";
  case TermOp::BvXor: return "bvxor";
  case TermOp::BvShl: return "bvshl";
  case TermOp::BvLShr: return "bvlshr";
  case TermOp::BvAShr: return "bvashr";
  case TermOp::BvUlt: return "bvult";
  case TermOp::BvUle: return "bvule";
  case TermOp::BvSlt: return "bvslt";
  case TermOp::BvSle: return "bvsle";
  case TermOp::Concat: return "concat";
  case TermOp::Select: return "select";
  case TermOp::Store: return "store";
  default: return nullptr;
  }
}

void emit(const TermFactory &f, TermRef t, std::string &out) {
  const TermNode &n = f.node(t);
  switch (n.op) {
  case TermOp::BoolConst:
    out += n.a ? "true" : "false";
    return;
  case TermOp::BvConst:
    out += "(_ bv";
    out += std::to_string(n.a);
    out += " ";
    out += std::to_string(f.sort(n.sort).width);
    out += ")";
    return;
  case TermOp::SymbolRef:
    out += smtlib_symbol(f.symbol_info(n.a).name);
    return;
  case TermOp::Extract:
    out += "((_ extract ";
    out += std::to_string(n.a);
    out += " ";
    out += std::to_string(n.b);
    out += ") ";
    emit(f, n.kids[0], out);
    out += ")";
    return;
  case TermOp::ZeroExt:
  case TermOp::SignExt:
    out += n.op == TermOp::ZeroExt ? "((_ zero_extend " : "((_ sign_extend ";
    out += std::to_string(n.a);
    out += ") ";
    emit(f, n.kids[0], out);
    out += ")";
    return;
  default: {
    const char *name = smt_op_name(n.op);
    assert(name);
    out += "(";
    out += name;
    for (TermRef k : n.kids) {
      out += " ";
      emit(f, k, out);
    }
    out += ")";
    return;
  }
  }
}

} // namespace

std::string smtlib_symbol(const std::string &name) {
  bool simple = !name.empty() && !(name[0] >= '0' && name[0] <= '9');
  for (char c : name)
    if (!simple_symbol_char(c))
      simple = false;
  if (simple)
    return name;
  for (char c : name)
    if (c == '|' || c == '\\')
      throw std::logic_error("term: symbol name '" + name +
                             "' cannot be quoted for SMT-LIB");
  return "|" + name + "|";
}

std::string smtlib_sort(const TermFactory &f, SortRef s) {
  const Sort &so = f.sort(s);
  switch (so.kind) {
  case SortKind::Bool:
    return "Bool";
  case SortKind::BitVec:
    return "(_ BitVec " + std::to_string(so.width) + ")";
  case SortKind::Array:
    return "(Array " + smtlib_sort(f, so.index) + " " +
           smtlib_sort(f, so.elem) + ")";
  }
  assert(false);
  return "";
}

std::string smtlib_term(const TermFactory &f, TermRef t) {
  std::string out;
  emit(f, t, out);
  return out;
}

} // namespace minibmc
