#include "minibmc/typed_program.hpp"

#include <sstream>

// Rendering of the typed program and the flattened-view queries that later
// stages (conversion, symbolic execution) share.

namespace minibmc {

// ------------------------------------------------------------ type names

std::string TypedProgram::type_name(TypeRef t) const {
  if (t == kNoType)
    return "<none>";
  const TypeNode &n = types[t];
  std::string q;
  if (n.quals & kQualConst)
    q = "const ";
  if (n.quals & kQualVolatile)
    q += "volatile ";
  switch (n.kind) {
  case TypeKind::Void: return q + "void";
  case TypeKind::Bool: return q + "bool";
  case TypeKind::Char: return q + "char";
  case TypeKind::SChar: return q + "signed char";
  case TypeKind::UChar: return q + "unsigned char";
  case TypeKind::Short: return q + "short";
  case TypeKind::UShort: return q + "unsigned short";
  case TypeKind::Int: return q + "int";
  case TypeKind::UInt: return q + "unsigned int";
  case TypeKind::Long: return q + "long";
  case TypeKind::ULong: return q + "unsigned long";
  case TypeKind::Float: return q + "float";
  case TypeKind::Double: return q + "double";
  case TypeKind::Pointer:
    return type_name(n.inner) + "*" + (q.empty() ? "" : " " + q.substr(0, q.size() - 1));
  case TypeKind::Reference:
    return type_name(n.inner) + "&";
  case TypeKind::Array:
    return type_name(n.inner) + "[" + std::to_string(n.array_size) + "]";
  case TypeKind::FunctionPtr: {
    const FnSig &s = types.sig(n.sig_id);
    std::string r = type_name(s.ret) + " (*)(";
    for (size_t i = 0; i < s.params.size(); ++i) {
      if (i)
        r += ", ";
      r += type_name(s.params[i]);
    }
    return r + ")";
  }
  case TypeKind::Class:
    return q + classes[n.class_id].name;
  }
  return "<bad>";
}

// --------------------------------------------------------- subobject paths

unsigned TypedProgram::base_path_count(uint32_t derived, uint32_t base) const {
  if (derived == base)
    return 1;
  if (derived >= classes.size())
    return 0;
  unsigned n = 0;
  for (const auto &s : classes[derived].subobjects)
    if (!s.path.empty() && s.class_id == base)
      ++n;
  return n;
}

std::string TypedProgram::upcast_path(uint32_t derived, uint32_t base,
                                      bool &abs) const {
  abs = false;
  if (derived == base)
    return "";
  for (const auto &s : classes[derived].subobjects) {
    if (!s.path.empty() && s.class_id == base) {
      abs = s.via_virtual;
      return s.path;
    }
  }
  return "";
}

bool TypedProgram::field_accessible(uint32_t cls, const FieldInfo &f,
                                    uint32_t accessor_cls) const {
  auto allowed = [&](uint32_t owner, ast::Access a) {
    if (a == ast::Access::Public)
      return true;
    if (accessor_cls == 0xffffffffu)
      return false;
    if (accessor_cls == owner)
      return true;
    const ClassInfo &oc = classes[owner];
    const std::string &an = classes[accessor_cls].name;
    const std::string &atn = classes[accessor_cls].template_name;
    for (const auto &fr : oc.friends)
      if (fr == an || (!atn.empty() && fr == atn))
        return true;
    if (a == ast::Access::Protected &&
        base_path_count(accessor_cls, owner) >= 1)
      return true;
    return false;
  };
  if (!allowed(f.owner, f.access))
    return false;
  if (!f.subobj_path.empty()) {
    for (const auto &s : classes[cls].subobjects)
      if (s.path == f.subobj_path && s.path_access != ast::Access::Public)
        if (!allowed(cls, s.path_access))
          return false;
  }
  return true;
}

const FunctionInfo *TypedProgram::find_function(
    const std::string &symbol) const {
  for (const auto &f : functions)
    if (f.symbol == symbol)
      return &f;
  return nullptr;
}

// ------------------------------------------------------------ expressions

namespace {

// Precedence levels matching the grammar, highest binds tightest.
int bprec(ast::BinaryOp op) {
  using BO = ast::BinaryOp;
  switch (op) {
  case BO::Mul: case BO::Div: case BO::Rem: return 10;
  case BO::Add: case BO::Sub: return 9;
  case BO::Shl: case BO::Shr: return 8;
  case BO::Lt: case BO::Gt: case BO::Le: case BO::Ge: return 7;
  case BO::Eq: case BO::Ne: return 6;
  case BO::BitAnd: return 5;
  case BO::BitXor: return 4;
  case BO::BitOr: return 3;
  case BO::LogAnd: return 2;
  case BO::LogOr: return 1;
  default: return 0; // assignments
  }
}

const char *bop_str(ast::BinaryOp op) {
  using BO = ast::BinaryOp;
  switch (op) {
  case BO::Add: return "+";
  case BO::Sub: return "-";
  case BO::Mul: return "*";
  case BO::Div: return "/";
  case BO::Rem: return "%";
  case BO::Shl: return "<<";
  case BO::Shr: return ">>";
  case BO::Lt: return "<";
  case BO::Gt: return ">";
  case BO::Le: return "<=";
  case BO::Ge: return ">=";
  case BO::Eq: return "==";
  case BO::Ne: return "!=";
  case BO::BitAnd: return "&";
  case BO::BitXor: return "^";
  case BO::BitOr: return "|";
  case BO::LogAnd: return "&&";
  case BO::LogOr: return "||";
  case BO::Assign: return "=";
  case BO::AddAssign: return "+=";
  case BO::SubAssign: return "-=";
  case BO::MulAssign: return "*=";
  case BO::DivAssign: return "/=";
  case BO::RemAssign: return "%=";
  case BO::AndAssign: return "&=";
  case BO::OrAssign: return "|=";
  case BO::XorAssign: return "^=";
  }
  return "?";
}

const char *intr_str(IntrinsicKind k) {
  switch (k) {
  case IntrinsicKind::Assert: return "assert";
  case IntrinsicKind::Assume: return "__ESBMC_assume";
  case IntrinsicKind::SetTerminate: return "set_terminate";
  case IntrinsicKind::SetUnexpected: return "set_unexpected";
  case IntrinsicKind::Terminate: return "terminate";
  case IntrinsicKind::Free: return "__ESBMC_free";
  case IntrinsicKind::SeqInit: return "__ESBMC_seq_init";
  case IntrinsicKind::AssocInit: return "__ESBMC_assoc_init";
  case IntrinsicKind::AssocMultiInit: return "__ESBMC_assoc_multi_init";
  case IntrinsicKind::Copy: return "__ESBMC_copy";
  case IntrinsicKind::Clear: return "__ESBMC_clear";
  case IntrinsicKind::Size: return "__ESBMC_size";
  case IntrinsicKind::Elem: return "__ESBMC_elem";
  case IntrinsicKind::KeyAt: return "__ESBMC_key_at";
  case IntrinsicKind::SeqInsert: return "__ESBMC_seq_insert";
  case IntrinsicKind::SeqErase: return "__ESBMC_seq_erase";
  case IntrinsicKind::SeqSearch: return "__ESBMC_seq_search";
  case IntrinsicKind::SeqSearchRange: return "__ESBMC_seq_search_range";
  case IntrinsicKind::AssocInsert: return "__ESBMC_assoc_insert";
  case IntrinsicKind::AssocErase: return "__ESBMC_assoc_erase";
  case IntrinsicKind::AssocSearch: return "__ESBMC_assoc_search";
  case IntrinsicKind::EraseAt: return "__ESBMC_erase_at";
  case IntrinsicKind::Count: return "__ESBMC_count";
  case IntrinsicKind::SortRange: return "__ESBMC_sort_range";
  case IntrinsicKind::StrAppend: return "__ESBMC_str_append";
  case IntrinsicKind::StrEq: return "__ESBMC_str_eq";
  default: return "__intrinsic";
  }
}

void pexpr(const TypedProgram &p, const TypedExpr &e, std::string &o,
           int parent_prec);

void pargs(const TypedProgram &p, const TypedExpr &e, std::string &o,
           size_t first) {
  o += "(";
  for (size_t i = first; i < e.args.size(); ++i) {
    if (i > first)
      o += ", ";
    pexpr(p, *e.args[i], o, 0);
  }
  o += ")";
}

void pexpr(const TypedProgram &p, const TypedExpr &e, std::string &o,
           int parent_prec) {
  switch (e.kind) {
  case TypedExpr::Kind::IntConst: {
    const TypeNode &n = p.types[p.types.strip_quals(e.type)];
    if (n.kind == TypeKind::Char) {
      o += std::to_string(static_cast<int64_t>(e.ival));
    } else if (p.types.is_signed(p.types.strip_quals(e.type))) {
      o += std::to_string(static_cast<int64_t>(e.ival));
    } else {
      o += std::to_string(e.ival);
    }
    return;
  }
  case TypedExpr::Kind::FloatConst: {
    std::ostringstream ss;
    ss << e.fval;
    o += ss.str();
    if (p.types[p.types.strip_quals(e.type)].kind == TypeKind::Float)
      o += "f";
    return;
  }
  case TypedExpr::Kind::BoolConst:
    o += e.ival ? "true" : "false";
    return;
  case TypedExpr::Kind::StringConst:
    o += "\"" + e.sval + "\"";
    return;
  case TypedExpr::Kind::Nondet:
    o += "nondet()";
    return;
  case TypedExpr::Kind::VarRef:
    o += e.var;
    return;
  case TypedExpr::Kind::GlobalRef:
    o += e.var;
    return;
  case TypedExpr::Kind::FnConst:
    o += p.functions[e.fn_id].display;
    return;
  case TypedExpr::Kind::This:
    o += "this";
    return;
  case TypedExpr::Kind::FieldRef: {
    // `(*this).f` prints as this->f; deref bases print with ->
    const TypedExpr &b = *e.args[0];
    if (b.kind == TypedExpr::Kind::Deref) {
      pexpr(p, *b.args[0], o, 11);
      o += "->";
    } else {
      pexpr(p, b, o, 11);
      o += ".";
    }
    o += e.field;
    return;
  }
  case TypedExpr::Kind::IndexRef:
    pexpr(p, *e.args[0], o, 11);
    o += "[";
    pexpr(p, *e.args[1], o, 0);
    o += "]";
    return;
  case TypedExpr::Kind::Unary: {
    using UO = ast::UnaryOp;
    const char *pre = nullptr, *post = nullptr;
    switch (e.uop) {
    case UO::Plus: pre = "+"; break;
    case UO::Minus: pre = "-"; break;
    case UO::Not: pre = "!"; break;
    case UO::BitNot: pre = "~"; break;
    case UO::Deref: pre = "*"; break;
    case UO::AddrOf: pre = "&"; break;
    case UO::PreInc: pre = "++"; break;
    case UO::PreDec: pre = "--"; break;
    case UO::PostInc: post = "++"; break;
    case UO::PostDec: post = "--"; break;
    }
    if (parent_prec > 10)
      o += "(";
    if (pre)
      o += pre;
    pexpr(p, *e.args[0], o, 10);
    if (post)
      o += post;
    if (parent_prec > 10)
      o += ")";
    return;
  }
  case TypedExpr::Kind::Binary: {
    int prec = bprec(e.bop);
    bool paren = prec < parent_prec || prec == 0;
    if (paren && parent_prec > 0)
      o += "(";
    pexpr(p, *e.args[0], o, prec);
    o += " ";
    o += bop_str(e.bop);
    o += " ";
    pexpr(p, *e.args[1], o, prec + 1);
    if (paren && parent_prec > 0)
      o += ")";
    return;
  }
  case TypedExpr::Kind::Conditional:
    if (parent_prec > 0)
      o += "(";
    pexpr(p, *e.args[0], o, 1);
    o += " ? ";
    pexpr(p, *e.args[1], o, 1);
    o += " : ";
    pexpr(p, *e.args[2], o, 1);
    if (parent_prec > 0)
      o += ")";
    return;
  case TypedExpr::Kind::Deref:
    if (parent_prec > 10)
      o += "(";
    o += "*";
    pexpr(p, *e.args[0], o, 10);
    if (parent_prec > 10)
      o += ")";
    return;
  case TypedExpr::Kind::AddrOf:
    if (parent_prec > 10)
      o += "(";
    o += "&";
    pexpr(p, *e.args[0], o, 10);
    if (parent_prec > 10)
      o += ")";
    return;
  case TypedExpr::Kind::Cast: {
    switch (e.ck) {
    case CastKind::ArrayDecay:
    case CastKind::NullToPtr:
    case CastKind::PtrQual:
    case CastKind::ToBool:
      pexpr(p, *e.args[0], o, parent_prec);
      return;
    default:
      if (parent_prec > 10)
        o += "(";
      o += "(" + p.type_name(e.type) + ")";
      pexpr(p, *e.args[0], o, 10);
      if (parent_prec > 10)
        o += ")";
      return;
    }
  }
  case TypedExpr::Kind::Call: {
    const FunctionInfo &f = p.functions[e.fn_id];
    if (f.is_method && !e.args.empty()) {
      const TypedExpr &recv = *e.args[0];
      if (recv.kind == TypedExpr::Kind::This) {
        o += f.display.substr(f.display.rfind("::") == std::string::npos
                                  ? 0
                                  : f.display.rfind("::") + 2);
      } else {
        pexpr(p, recv, o, 11);
        o += "->";
        size_t pos = f.display.rfind("::");
        o += pos == std::string::npos ? f.display : f.display.substr(pos + 2);
      }
      pargs(p, e, o, 1);
      return;
    }
    o += f.display;
    pargs(p, e, o, 0);
    return;
  }
  case TypedExpr::Kind::VirtualCall: {
    const FunctionInfo &f = p.functions[e.fn_id];
    pexpr(p, *e.args[0], o, 11);
    o += "->";
    size_t pos = f.display.rfind("::");
    o += pos == std::string::npos ? f.display : f.display.substr(pos + 2);
    o += " [virtual]";
    pargs(p, e, o, 1);
    return;
  }
  case TypedExpr::Kind::IntrinsicCall:
    o += intr_str(e.intr);
    pargs(p, e, o, 0);
    return;
  case TypedExpr::Kind::New: {
    if (e.ival == 1) {
      o += p.classes[e.class_id].name;
      pargs(p, e, o, 0);
      return;
    }
    o += "new ";
    TypeRef bare = p.types.strip_quals(e.type);
    o += p.type_name(p.types[bare].inner);
    pargs(p, e, o, 0);
    return;
  }
  }
}

} // namespace

std::string print_typed_expr(const TypedProgram &prog, const TypedExpr &e) {
  std::string o;
  pexpr(prog, e, o, 0);
  return o;
}

TypedExprPtr clone_typed_expr(const TypedExpr &e) {
  auto c = std::make_unique<TypedExpr>();
  c->kind = e.kind;
  c->type = e.type;
  c->loc = e.loc;
  c->lvalue = e.lvalue;
  c->ival = e.ival;
  c->fval = e.fval;
  c->sval = e.sval;
  c->var = e.var;
  c->field = e.field;
  c->fn_id = e.fn_id;
  c->slot_id = e.slot_id;
  c->class_id = e.class_id;
  c->intr = e.intr;
  c->uop = e.uop;
  c->bop = e.bop;
  c->ck = e.ck;
  c->cast_path = e.cast_path;
  c->cast_abs = e.cast_abs;
  for (const auto &a : e.args)
    c->args.push_back(clone_typed_expr(*a));
  return c;
}

// ------------------------------------------------------------- statements

namespace {

void pstmt(const TypedProgram &p, const TypedStmt &s, std::string &o,
           int ind);

void pind(std::string &o, int ind) { o.append(ind * 2, ' '); }

void pdecls(const TypedProgram &p, const TypedStmt &s, std::string &o,
            int ind) {
  for (const auto &d : s.decls) {
    pind(o, ind);
    o += p.type_name(d.type) + " " + d.name;
    if (d.is_ref)
      o += " /*ref*/";
    if (d.init) {
      o += " = ";
      pexpr(p, *d.init, o, 0);
    }
    o += ";\n";
  }
  for (const auto &c : s.stmts)
    pstmt(p, *c, o, ind);
}

void pstmt(const TypedProgram &p, const TypedStmt &s, std::string &o,
           int ind) {
  switch (s.kind) {
  case TypedStmt::Kind::Block:
    pind(o, ind);
    o += "{\n";
    for (const auto &c : s.stmts)
      pstmt(p, *c, o, ind + 1);
    pind(o, ind);
    o += "}\n";
    return;
  case TypedStmt::Kind::Decl:
    pdecls(p, s, o, ind);
    return;
  case TypedStmt::Kind::ExprStmt:
    pind(o, ind);
    pexpr(p, *s.expr, o, 0);
    o += ";\n";
    return;
  case TypedStmt::Kind::If:
    pind(o, ind);
    o += "if (";
    pexpr(p, *s.expr, o, 0);
    o += ")\n";
    pstmt(p, *s.then_stmt, o, ind + 1);
    if (s.else_stmt) {
      pind(o, ind);
      o += "else\n";
      pstmt(p, *s.else_stmt, o, ind + 1);
    }
    return;
  case TypedStmt::Kind::While:
    pind(o, ind);
    o += "while (";
    pexpr(p, *s.expr, o, 0);
    o += ")\n";
    pstmt(p, *s.body, o, ind + 1);
    return;
  case TypedStmt::Kind::For:
    pind(o, ind);
    o += "for (...; ";
    if (s.expr)
      pexpr(p, *s.expr, o, 0);
    o += "; ";
    if (s.step)
      pexpr(p, *s.step, o, 0);
    o += ")\n";
    if (s.init_stmt)
      pstmt(p, *s.init_stmt, o, ind + 1);
    pstmt(p, *s.body, o, ind + 1);
    return;
  case TypedStmt::Kind::Switch:
    pind(o, ind);
    o += "switch (";
    pexpr(p, *s.expr, o, 0);
    o += ") {\n";
    for (const auto &c : s.cases) {
      pind(o, ind + 1);
      o += c.is_default ? "default:" : "case " + std::to_string(c.value) + ":";
      o += "\n";
      for (const auto &cs : c.stmts)
        pstmt(p, *cs, o, ind + 2);
    }
    pind(o, ind);
    o += "}\n";
    return;
  case TypedStmt::Kind::Return:
    pind(o, ind);
    o += "return";
    if (s.expr) {
      o += " ";
      pexpr(p, *s.expr, o, 0);
    }
    o += ";\n";
    return;
  case TypedStmt::Kind::Break:
    pind(o, ind);
    o += "break;\n";
    return;
  case TypedStmt::Kind::Continue:
    pind(o, ind);
    o += "continue;\n";
    return;
  case TypedStmt::Kind::Try:
    pind(o, ind);
    o += "try\n";
    pstmt(p, *s.body, o, ind + 1);
    for (const auto &h : s.handlers) {
      pind(o, ind);
      if (h.is_ellipsis) {
        o += "catch (...)\n";
      } else {
        o += "catch (" + p.type_name(h.type);
        if (h.by_ref)
          o += "&";
        if (!h.var.empty())
          o += " " + h.var;
        o += ")\n";
      }
      pstmt(p, *h.body, o, ind + 1);
    }
    return;
  case TypedStmt::Kind::Throw:
    pind(o, ind);
    o += "throw";
    if (s.expr) {
      o += " ";
      pexpr(p, *s.expr, o, 0);
    }
    o += ";\n";
    return;
  case TypedStmt::Kind::Delete:
    pind(o, ind);
    o += "delete ";
    pexpr(p, *s.expr, o, 0);
    o += ";\n";
    return;
  case TypedStmt::Kind::Empty:
    return;
  }
}

} // namespace

// ---------------------------------------------------------------- program

std::string dump_typed_program(const TypedProgram &prog) {
  std::string o;

  if (!prog.instantiations.empty()) {
    o += "Instantiations:\n";
    for (const auto &i : prog.instantiations)
      o += "  " + i + "\n";
    o += "\n";
  }

  for (uint32_t cid = 0; cid < prog.classes.size(); ++cid) {
    const ClassInfo &c = prog.classes[cid];
    if (!c.layout_done)
      continue;
    o += "class " + c.name;
    if (c.is_abstract)
      o += " [abstract]";
    if (!c.bases.empty()) {
      o += " :";
      for (const auto &b : c.bases) {
        o += " ";
        if (b.is_virtual)
          o += "virtual ";
        o += prog.classes[b.base].name;
      }
    }
    o += " {\n";
    for (const auto &f : c.fields) {
      o += "  " + prog.type_name(f.type) + " " + f.key;
      if (f.is_ghost)
        o += " /*ghost*/";
      o += ";\n";
    }
    if (!c.vslots.empty()) {
      o += "  // vtable:\n";
      for (const auto &v : c.vslots) {
        const VSlotInfo &si = prog.vslots[v.slot];
        o += "  //   slot " + std::to_string(v.slot) + " (" + si.name +
             ") -> ";
        o += v.pure ? "<pure>" : prog.functions[v.impl_fn].symbol;
        o += "\n";
      }
    }
    o += "};\n\n";
  }

  for (const auto &f : prog.functions) {
    if (!f.defined || !f.body)
      continue;
    o += prog.type_name(f.ret_ref ? prog.types[f.ret].inner : f.ret);
    if (f.ret_ref)
      o += "&";
    o += " " + f.symbol + "(";
    bool first = true;
    for (const auto &p : f.params) {
      if (!first)
        o += ", ";
      first = false;
      if (p.is_ref) {
        o += prog.type_name(prog.types[p.type].inner) + "& " + p.name;
      } else {
        o += prog.type_name(p.type) + " " + p.name;
      }
    }
    o += ")";
    if (f.has_throw_spec) {
      o += " throw(";
      for (size_t i = 0; i < f.throw_types.size(); ++i) {
        if (i)
          o += ", ";
        o += prog.type_name(f.throw_types[i]);
      }
      o += ")";
    }
    o += "\n";
    pstmt(prog, *f.body, o, 0);
    o += "\n";
  }

  return o;
}

} // namespace minibmc
