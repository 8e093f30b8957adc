#include "check.hpp"

#include "minibmc/source.hpp"

#include <algorithm>
#include <array>
#include <sstream>

// Expression/statement checking, type resolution, overload resolution and the
// deferred body worklist.  All template machinery lives in templates.cpp and
// class layout in classes.cpp.

namespace minibmc {

bool typecheck(const ast::TranslationUnit &tu, const FileTable &files,
               DiagEngine &diags, TypedProgram &out) {
  Checker c(tu, files, diags, out);
  return c.run();
}

bool Checker::run() {
  collect_top_level();
  if (!diags_.has_errors())
    process_worklist();
  auto it = free_fns_.find("main");
  if (it == free_fns_.end() || it->second.empty()) {
    diags_.error(SourceLoc{}, "main function not found");
  } else {
    prog_.main_fn = it->second.front();
  }
  return !diags_.has_errors();
}

bool Checker::is_model_loc(SourceLoc loc) const {
  const std::string &p = files_.path(loc.file);
  return !p.empty() && p[0] == '<';
}

// ----------------------------------------------------------------- types

TypeRef Checker::resolve_type(const ast::TypeExpr &t) {
  uint8_t q = (t.is_const ? kQualConst : 0) | (t.is_volatile ? kQualVolatile : 0);
  auto requal = [&](TypeRef r) {
    if (r == kNoType || q == 0)
      return r;
    return types().with_quals(r, static_cast<uint8_t>(types()[r].quals | q));
  };

  switch (t.kind) {
  case ast::TypeExpr::Kind::Named: {
    auto sit = ctx_.subst.find(t.name);
    if (sit != ctx_.subst.end()) {
      if (!t.targs.empty()) {
        error(t.loc, "template parameter '" + t.name +
                         "' cannot take template arguments");
        return kNoType;
      }
      return requal(sit->second);
    }

    static const std::map<std::string, TypeKind> kBuiltins = {
        {"void", TypeKind::Void},
        {"bool", TypeKind::Bool},
        {"char", TypeKind::Char},
        {"signed char", TypeKind::SChar},
        {"unsigned char", TypeKind::UChar},
        {"short", TypeKind::Short},
        {"short int", TypeKind::Short},
        {"unsigned short", TypeKind::UShort},
        {"int", TypeKind::Int},
        {"signed", TypeKind::Int},
        {"signed int", TypeKind::Int},
        {"unsigned", TypeKind::UInt},
        {"unsigned int", TypeKind::UInt},
        {"long", TypeKind::Long},
        {"long int", TypeKind::Long},
        {"long long", TypeKind::Long},
        {"unsigned long", TypeKind::ULong},
        {"unsigned long long", TypeKind::ULong},
        {"float", TypeKind::Float},
        {"double", TypeKind::Double},
    };
    auto bit = kBuiltins.find(t.name);
    if (bit != kBuiltins.end()) {
      if (!t.targs.empty()) {
        error(t.loc, "'" + t.name + "' cannot take template arguments");
        return kNoType;
      }
      return types().basic(bit->second, q);
    }

    if (!t.targs.empty()) {
      std::vector<TypeRef> args;
      for (const auto &a : t.targs) {
        TypeRef r = resolve_type(*a);
        if (r == kNoType)
          return kNoType;
        args.push_back(r);
      }
      uint32_t cid = instantiate_class(t.name, args, t.loc);
      if (cid == 0xffffffffu)
        return kNoType;
      return types().class_type(cid, q);
    }

    if (ctx_.class_id != 0xffffffffu) {
      const auto &tds = prog_.classes[ctx_.class_id].typedefs;
      auto td = tds.find(t.name);
      if (td != tds.end())
        return requal(td->second);
    }
    auto gt = global_typedefs_.find(t.name);
    if (gt != global_typedefs_.end())
      return requal(resolve_type(*gt->second));

    uint32_t cid = find_class(t.name);
    if (cid != 0xffffffffu)
      return types().class_type(cid, q);
    if (find_template(t.name)) {
      error(t.loc, "missing template arguments for '" + t.name + "'");
      return kNoType;
    }
    error(t.loc, "unknown type '" + t.name + "'");
    return kNoType;
  }

  case ast::TypeExpr::Kind::Nested: {
    TypeRef in = resolve_type(*t.inner);
    if (in == kNoType)
      return kNoType;
    TypeRef bare = types().strip_quals(in);
    if (types()[bare].kind != TypeKind::Class) {
      error(t.loc, "'" + tname(in) + "' has no member types");
      return kNoType;
    }
    const auto &tds = prog_.classes[types()[bare].class_id].typedefs;
    auto td = tds.find(t.name);
    if (td == tds.end()) {
      error(t.loc, "no type named '" + t.name + "' in '" + tname(in) + "'");
      return kNoType;
    }
    return requal(td->second);
  }

  case ast::TypeExpr::Kind::Pointer: {
    TypeRef in = resolve_type(*t.inner);
    return in == kNoType ? kNoType : types().pointer_to(in, q);
  }
  case ast::TypeExpr::Kind::Reference: {
    TypeRef in = resolve_type(*t.inner);
    return in == kNoType ? kNoType : types().reference_to(in);
  }
  case ast::TypeExpr::Kind::Array: {
    TypeRef in = resolve_type(*t.inner);
    if (in == kNoType)
      return kNoType;
    int64_t n = 0;
    if (!t.array_size || !eval_const_int(*t.array_size, n) || n <= 0) {
      error(t.loc, "array size must be a positive constant");
      return kNoType;
    }
    return types().array_of(in, static_cast<uint64_t>(n));
  }
  case ast::TypeExpr::Kind::FunctionPtr: {
    FnSig sig;
    sig.ret = resolve_type(*t.inner);
    if (sig.ret == kNoType)
      return kNoType;
    for (const auto &p : t.fn_params) {
      TypeRef r = resolve_type(*p);
      if (r == kNoType)
        return kNoType;
      sig.params.push_back(r);
    }
    return types().function_ptr(sig, q);
  }
  }
  return kNoType;
}

bool Checker::eval_const_int(const ast::Expr &e, int64_t &out) {
  switch (e.kind) {
  case ast::Expr::Kind::IntLit:
    out = static_cast<int64_t>(e.int_value);
    return true;
  case ast::Expr::Kind::BoolLit:
    out = e.bool_value ? 1 : 0;
    return true;
  case ast::Expr::Kind::Unary: {
    int64_t v;
    if (!eval_const_int(*e.lhs, v))
      return false;
    switch (e.unary_op) {
    case ast::UnaryOp::Plus:
      out = v;
      return true;
    case ast::UnaryOp::Minus:
      out = -v;
      return true;
    case ast::UnaryOp::Not:
      out = !v;
      return true;
    case ast::UnaryOp::BitNot:
      out = ~v;
      return true;
    default:
      return false;
    }
  }
  case ast::Expr::Kind::Binary: {
    int64_t a, b;
    if (!eval_const_int(*e.lhs, a) || !eval_const_int(*e.rhs, b))
      return false;
    switch (e.binary_op) {
    case ast::BinaryOp::Add: out = a + b; return true;
    case ast::BinaryOp::Sub: out = a - b; return true;
    case ast::BinaryOp::Mul: out = a * b; return true;
    case ast::BinaryOp::Div: if (!b) return false; out = a / b; return true;
    case ast::BinaryOp::Rem: if (!b) return false; out = a % b; return true;
    case ast::BinaryOp::Shl: out = a << b; return true;
    case ast::BinaryOp::Shr: out = a >> b; return true;
    case ast::BinaryOp::BitAnd: out = a & b; return true;
    case ast::BinaryOp::BitOr: out = a | b; return true;
    case ast::BinaryOp::BitXor: out = a ^ b; return true;
    default: return false;
    }
  }
  default:
    return false;
  }
}

// ----------------------------------------------------------------- scopes

Checker::LocalVar *Checker::lookup_local(const std::string &name) {
  for (auto it = ctx_.scopes.rbegin(); it != ctx_.scopes.rend(); ++it) {
    auto f = it->find(name);
    if (f != it->end())
      return &f->second;
  }
  return nullptr;
}

std::string Checker::declare_local(const std::string &name) {
  int &n = ctx_.name_uses[name];
  ++n;
  return n == 1 ? name : name + "$" + std::to_string(n);
}

// --------------------------------------------------- expression constructors

TypedExprPtr Checker::make_int(int64_t v, TypeRef t, SourceLoc loc) {
  auto e = std::make_unique<TypedExpr>();
  e->kind = TypedExpr::Kind::IntConst;
  e->type = t;
  e->ival = static_cast<uint64_t>(v);
  e->loc = loc;
  return e;
}

TypedExprPtr Checker::make_fn_const(uint32_t fn, SourceLoc loc) {
  const FunctionInfo &f = prog_.functions[fn];
  FnSig sig;
  sig.ret = f.ret_ref ? types().reference_to(types()[f.ret].inner) : f.ret;
  for (size_t i = f.is_method ? 1 : 0; i < f.params.size(); ++i) {
    const ParamInfo &p = f.params[i];
    sig.params.push_back(p.is_ref
                             ? types().reference_to(types()[p.type].inner)
                             : types().strip_quals(p.type));
  }
  auto e = std::make_unique<TypedExpr>();
  e->kind = TypedExpr::Kind::FnConst;
  e->fn_id = fn;
  e->type = types().function_ptr(sig);
  e->loc = loc;
  return e;
}

TypedExprPtr Checker::make_this(SourceLoc loc) {
  auto e = std::make_unique<TypedExpr>();
  e->kind = TypedExpr::Kind::This;
  e->type = types().pointer_to(types().class_type(ctx_.class_id));
  e->loc = loc;
  return e;
}

TypedExprPtr Checker::make_addrof(TypedExprPtr v, SourceLoc loc) {
  if (v->kind == TypedExpr::Kind::Deref)
    return std::move(v->args[0]);
  auto e = std::make_unique<TypedExpr>();
  e->kind = TypedExpr::Kind::AddrOf;
  e->type = types().pointer_to(v->type);
  e->loc = loc;
  e->args.push_back(std::move(v));
  return e;
}

TypedExprPtr Checker::make_deref(TypedExprPtr p, SourceLoc loc) {
  if (p->kind == TypedExpr::Kind::AddrOf)
    return std::move(p->args[0]);
  auto e = std::make_unique<TypedExpr>();
  e->kind = TypedExpr::Kind::Deref;
  TypeRef bare = types().strip_quals(p->type);
  e->type = types()[bare].kind == TypeKind::Pointer ? types()[bare].inner
                                                    : kNoType;
  e->lvalue = true;
  e->loc = loc;
  e->args.push_back(std::move(p));
  return e;
}

TypedExprPtr Checker::make_upcast(TypedExprPtr ptr, const std::string &path,
                                  bool abs, uint32_t to_cls, SourceLoc loc) {
  if (path.empty() && !abs) {
    TypeRef bare = types().strip_quals(ptr->type);
    if (types()[bare].kind == TypeKind::Pointer) {
      TypeRef pt = types().strip_quals(types()[bare].inner);
      if (types()[pt].kind == TypeKind::Class &&
          types()[pt].class_id == to_cls)
        return ptr;
    }
  }
  auto e = std::make_unique<TypedExpr>();
  e->kind = TypedExpr::Kind::Cast;
  e->ck = CastKind::PtrUp;
  e->cast_path = path;
  e->cast_abs = abs;
  e->type = types().pointer_to(types().class_type(to_cls));
  e->loc = loc;
  e->args.push_back(std::move(ptr));
  return e;
}

TypedExprPtr Checker::make_field_ref(TypedExprPtr obj, const FieldInfo &f,
                                     SourceLoc loc) {
  auto e = std::make_unique<TypedExpr>();
  e->kind = TypedExpr::Kind::FieldRef;
  e->field = f.key;
  e->type = f.type;
  e->lvalue = true;
  e->loc = loc;
  e->args.push_back(std::move(obj));
  return e;
}

TypedExprPtr Checker::clone_expr(const TypedExpr &e) {
  return clone_typed_expr(e);
}

// ------------------------------------------------------------- conversions

bool Checker::adopt_nondet(TypedExpr &e, TypeRef t) {
  if (e.kind != TypedExpr::Kind::Nondet || e.type != kNoType)
    return false;
  TypeRef bare = types().strip_quals(t);
  if (!types().is_scalar(bare))
    return false;
  e.type = bare;
  return true;
}

TypedExprPtr Checker::to_bool(TypedExprPtr e, SourceLoc loc) {
  if (!e)
    return e;
  if (e->kind == TypedExpr::Kind::Nondet && e->type == kNoType)
    adopt_nondet(*e, types().basic(TypeKind::Bool));
  TypeRef bare = types().strip_quals(e->type);
  if (types()[bare].kind == TypeKind::Bool)
    return e;
  if (!types().is_scalar(bare)) {
    error(loc, "expected a boolean condition, got '" + tname(e->type) + "'");
    return e;
  }
  auto c = std::make_unique<TypedExpr>();
  c->kind = TypedExpr::Kind::Cast;
  c->ck = CastKind::ToBool;
  c->type = types().basic(TypeKind::Bool);
  c->loc = loc;
  c->args.push_back(std::move(e));
  return c;
}

TypedExprPtr Checker::coerce(TypedExprPtr e, TypeRef target, SourceLoc loc) {
  if (!e || target == kNoType)
    return e;
  TypeRef tgt = types().strip_quals(target);
  if (e->kind == TypedExpr::Kind::Nondet && e->type == kNoType) {
    if (!adopt_nondet(*e, tgt))
      error(loc, "nondet() requires a scalar context");
    return e;
  }
  TypeRef src = types().strip_quals(e->type);
  if (src == tgt)
    return e;

  const TypeNode &tn = types()[tgt];
  const TypeNode &sn = types()[src];

  if (tn.kind == TypeKind::Bool && types().is_scalar(src))
    return to_bool(std::move(e), loc);

  if (types().is_arithmetic(tgt) && types().is_arithmetic(src)) {
    auto c = std::make_unique<TypedExpr>();
    c->kind = TypedExpr::Kind::Cast;
    c->ck = sn.kind == TypeKind::Bool ? CastKind::FromBool : CastKind::Numeric;
    c->type = tgt;
    c->loc = loc;
    c->args.push_back(std::move(e));
    return c;
  }

  if (tn.kind == TypeKind::Pointer) {
    if (e->kind == TypedExpr::Kind::IntConst && e->ival == 0) {
      auto c = std::make_unique<TypedExpr>();
      c->kind = TypedExpr::Kind::Cast;
      c->ck = CastKind::NullToPtr;
      c->type = tgt;
      c->loc = loc;
      c->args.push_back(std::move(e));
      return c;
    }
    if (sn.kind == TypeKind::Array) {
      auto c = std::make_unique<TypedExpr>();
      c->kind = TypedExpr::Kind::Cast;
      c->ck = CastKind::ArrayDecay;
      c->type = types().pointer_to(types()[src].inner);
      c->loc = loc;
      c->args.push_back(std::move(e));
      return coerce(std::move(c), tgt, loc);
    }
    if (sn.kind == TypeKind::Pointer) {
      TypeRef sp = types().strip_quals(sn.inner);
      TypeRef tp = types().strip_quals(tn.inner);
      if (sp == tp)
        return e; // qualification-only difference
      if (types()[sp].kind == TypeKind::Class &&
          types()[tp].kind == TypeKind::Class) {
        uint32_t d = types()[sp].class_id, b = types()[tp].class_id;
        unsigned n = prog_.base_path_count(d, b);
        if (n == 1) {
          bool abs = false;
          std::string path = prog_.upcast_path(d, b, abs);
          return make_upcast(std::move(e), path, abs, b, loc);
        }
        if (n > 1) {
          error(loc, "ambiguous conversion from '" + tname(src) + "' to '" +
                         tname(tgt) + "'");
          return e;
        }
      }
    }
    if (sn.kind == TypeKind::FunctionPtr && tn.kind == TypeKind::Pointer) {
      // no implicit function-pointer reinterpretation
    }
  }

  if (tn.kind == TypeKind::FunctionPtr && sn.kind == TypeKind::FunctionPtr &&
      tn.sig_id == sn.sig_id)
    return e;

  if (tn.kind == TypeKind::Class && sn.kind == TypeKind::Class &&
      tn.class_id == sn.class_id)
    return e;

  error(loc, "cannot convert '" + tname(e->type) + "' to '" + tname(target) +
                 "'");
  return e;
}

void Checker::usual_arith(TypedExprPtr &a, TypedExprPtr &b, SourceLoc loc) {
  auto rank = [&](TypeRef t) -> int {
    switch (types()[types().strip_quals(t)].kind) {
    case TypeKind::Bool: return 0;
    case TypeKind::Char: case TypeKind::SChar: case TypeKind::UChar: return 1;
    case TypeKind::Short: case TypeKind::UShort: return 2;
    case TypeKind::Int: return 3;
    case TypeKind::UInt: return 4;
    case TypeKind::Long: return 5;
    case TypeKind::ULong: return 6;
    case TypeKind::Float: return 7;
    case TypeKind::Double: return 8;
    default: return -1;
    }
  };
  int ra = rank(a->type), rb = rank(b->type);
  if (ra < 0 || rb < 0)
    return;
  int r = std::max(std::max(ra, rb), 3); // integer promotion floor: int
  static const TypeKind kByRank[] = {TypeKind::Bool, TypeKind::Char,
                                     TypeKind::Short, TypeKind::Int,
                                     TypeKind::UInt, TypeKind::Long,
                                     TypeKind::ULong, TypeKind::Float,
                                     TypeKind::Double};
  TypeRef common = types().basic(kByRank[r]);
  a = coerce(std::move(a), common, loc);
  b = coerce(std::move(b), common, loc);
}

// ------------------------------------------------------ calls and overloads

uint32_t Checker::resolve_overload(const std::vector<uint32_t> &candidates,
                                   const std::vector<TypedExprPtr> &args,
                                   SourceLoc loc, const std::string &what) {
  struct Viable {
    uint32_t fn;
    std::vector<int> score;
  };
  std::vector<Viable> viable;

  for (uint32_t cand : candidates) {
    const FunctionInfo &f = prog_.functions[cand];
    size_t base = f.is_method ? 1 : 0;
    if (f.params.size() - base != args.size())
      continue;
    std::vector<int> score;
    bool ok = true;
    for (size_t i = 0; i < args.size() && ok; ++i) {
      const TypedExpr &a = *args[i];
      const ParamInfo &p = f.params[i + base];
      int s = -1;
      if (p.is_ref) {
        TypeRef inner = types()[p.type].inner;
        bool const_ref = (types()[inner].quals & kQualConst) != 0;
        TypeRef ptgt = types().strip_quals(inner);
        TypeRef at = types().strip_quals(a.type);
        if (!a.lvalue && !const_ref) {
          s = -1;
        } else if (a.kind == TypedExpr::Kind::Nondet && a.type == kNoType) {
          s = -1;
        } else if (at == ptgt) {
          s = 3;
        } else if (types()[at].kind == TypeKind::Class &&
                   types()[ptgt].kind == TypeKind::Class &&
                   prog_.base_path_count(types()[at].class_id,
                                         types()[ptgt].class_id) == 1) {
          s = 2;
        } else if (const_ref && types().is_arithmetic(at) &&
                   types().is_arithmetic(ptgt)) {
          s = 1;
        }
      } else {
        TypeRef pt = types().strip_quals(p.type);
        if (a.kind == TypedExpr::Kind::Nondet && a.type == kNoType) {
          s = types().is_scalar(pt) ? 3 : -1;
        } else {
          TypeRef at = types().strip_quals(a.type);
          if (at == pt) {
            s = 3;
          } else if (types().is_arithmetic(at) && types().is_arithmetic(pt)) {
            s = 1;
          } else if (types()[pt].kind == TypeKind::Pointer &&
                     a.kind == TypedExpr::Kind::IntConst && a.ival == 0) {
            s = 1;
          } else if (types()[pt].kind == TypeKind::Pointer &&
                     types()[at].kind == TypeKind::Array &&
                     types().same_unqual(types()[at].inner,
                                         types()[pt].inner)) {
            s = 3;
          } else if (types()[pt].kind == TypeKind::Pointer &&
                     types()[at].kind == TypeKind::Pointer) {
            TypeRef sp = types().strip_quals(types()[at].inner);
            TypeRef tp = types().strip_quals(types()[pt].inner);
            if (sp == tp)
              s = 3;
            else if (types()[sp].kind == TypeKind::Class &&
                     types()[tp].kind == TypeKind::Class &&
                     prog_.base_path_count(types()[sp].class_id,
                                           types()[tp].class_id) == 1)
              s = 2;
          } else if (types()[pt].kind == TypeKind::Bool &&
                     types().is_scalar(at)) {
            s = 1;
          }
        }
      }
      if (s < 0)
        ok = false;
      else
        score.push_back(s);
    }
    if (ok)
      viable.push_back(Viable{cand, std::move(score)});
  }

  if (viable.empty()) {
    error(loc, "no matching function for call to '" + what + "'");
    return 0xffffffffu;
  }
  if (viable.size() == 1)
    return viable[0].fn;

  auto better = [](const Viable &a, const Viable &b) {
    bool strictly = false;
    for (size_t i = 0; i < a.score.size(); ++i) {
      if (a.score[i] < b.score[i])
        return false;
      if (a.score[i] > b.score[i])
        strictly = true;
    }
    return strictly;
  };
  for (const auto &v : viable) {
    bool best = true;
    for (const auto &o : viable)
      if (&o != &v && !better(v, o))
        best = false;
    if (best)
      return v.fn;
  }
  error(loc, "ambiguous call to '" + what + "'");
  return 0xffffffffu;
}

TypedExprPtr Checker::finish_call(uint32_t fn, TypedExprPtr this_arg,
                                  std::vector<TypedExprPtr> args,
                                  SourceLoc loc, uint32_t dispatch_slot) {
  if (fn == 0xffffffffu)
    return nullptr;
  // Copy what we need: coercions may grow the function table.
  const bool is_method = prog_.functions[fn].is_method;
  const bool ret_ref = prog_.functions[fn].ret_ref;
  const TypeRef ret = prog_.functions[fn].ret;
  std::vector<ParamInfo> params = prog_.functions[fn].params;

  size_t base = is_method ? 1 : 0;
  if (params.size() - base != args.size()) {
    error(loc, "wrong number of arguments to '" +
                   prog_.functions[fn].display + "'");
    return nullptr;
  }

  auto e = std::make_unique<TypedExpr>();
  e->kind = dispatch_slot == 0xffffffffu ? TypedExpr::Kind::Call
                                         : TypedExpr::Kind::VirtualCall;
  e->fn_id = fn;
  e->slot_id = dispatch_slot;
  e->type = ret;
  e->loc = loc;
  if (is_method) {
    if (!this_arg) {
      error(loc, "call to method '" + prog_.functions[fn].display +
                     "' without an object");
      return nullptr;
    }
    e->args.push_back(std::move(this_arg));
  }
  for (size_t i = 0; i < args.size(); ++i) {
    const ParamInfo &p = params[i + base];
    if (p.is_ref) {
      TypedExprPtr addr = make_addrof(std::move(args[i]), loc);
      addr = coerce(std::move(addr), p.type, loc);
      e->args.push_back(std::move(addr));
    } else {
      e->args.push_back(coerce(std::move(args[i]), p.type, loc));
    }
  }
  if (ret_ref)
    return make_deref(std::move(e), loc);
  return e;
}

TypedExprPtr Checker::check_method_call(TypedExprPtr base_lvalue,
                                        bool dynamic_ok,
                                        const std::string &qualifier,
                                        const std::string &name,
                                        std::vector<TypedExprPtr> args,
                                        SourceLoc loc) {
  if (!base_lvalue)
    return nullptr;
  TypeRef bt = types().strip_quals(base_lvalue->type);
  if (types()[bt].kind != TypeKind::Class) {
    error(loc, "request for member '" + name + "' in non-class type '" +
                   tname(base_lvalue->type) + "'");
    return nullptr;
  }
  uint32_t cid = types()[bt].class_id;

  std::string path;
  bool abs = false;
  std::vector<uint32_t> ids =
      find_methods(cid, qualifier, name, &path, &abs, loc);
  if (ids.empty()) {
    if (!diags_.has_errors() || true) // find_methods reports qualifier errors
      error(loc, "no member named '" + name + "' in '" +
                     prog_.classes[cid].name + "'");
    return nullptr;
  }
  uint32_t fn = resolve_overload(ids, args, loc,
                                 prog_.classes[cid].name + "::" + name);
  if (fn == 0xffffffffu)
    return nullptr;

  const uint32_t owner = prog_.functions[fn].class_id;
  check_member_access(owner, prog_.functions[fn].access, loc, name);

  TypedExprPtr this_ptr = make_addrof(std::move(base_lvalue), loc);
  this_ptr = make_upcast(std::move(this_ptr), path, abs, owner, loc);

  if (dynamic_ok && qualifier.empty() && prog_.functions[fn].is_virtual) {
    // Locate the slot this override fills: lowest matching slot id.
    const FunctionInfo &f = prog_.functions[fn];
    FnSig sig;
    sig.ret = f.ret_ref ? types().reference_to(types()[f.ret].inner) : f.ret;
    for (size_t i = 1; i < f.params.size(); ++i)
      sig.params.push_back(f.params[i].is_ref
                               ? types().reference_to(
                                     types()[f.params[i].type].inner)
                               : types().strip_quals(f.params[i].type));
    std::string nm = f.is_dtor ? "~" : name;
    uint32_t slot = 0xffffffffu;
    for (const auto &r : prog_.classes[owner].vslots) {
      const VSlotInfo &si = prog_.vslots[r.slot];
      if (si.name != nm)
        continue;
      const FnSig &ss = types().sig(si.sig_id);
      if (ss.params == sig.params) {
        slot = r.slot;
        break;
      }
    }
    if (slot != 0xffffffffu) {
      uint32_t intro = prog_.vslots[slot].intro_class;
      if (prog_.base_path_count(owner, intro) == 1 || owner == intro) {
        bool iabs = false;
        std::string ipath = prog_.upcast_path(owner, intro, iabs);
        this_ptr = make_upcast(std::move(this_ptr), ipath, iabs, intro, loc);
        return finish_call(fn, std::move(this_ptr), std::move(args), loc,
                           slot);
      }
    }
  }
  return finish_call(fn, std::move(this_ptr), std::move(args), loc);
}

// ------------------------------------------------------------- expressions

namespace {
const std::map<std::string, IntrinsicKind> &intrinsic_table() {
  static const std::map<std::string, IntrinsicKind> t = {
      {"__ESBMC_assert", IntrinsicKind::Assert},
      {"assert", IntrinsicKind::Assert},
      {"__ESBMC_assume", IntrinsicKind::Assume},
      {"nondet", IntrinsicKind::Nondet},
      {"set_terminate", IntrinsicKind::SetTerminate},
      {"set_unexpected", IntrinsicKind::SetUnexpected},
      {"terminate", IntrinsicKind::Terminate},
      {"__ESBMC_seq_init", IntrinsicKind::SeqInit},
      {"__ESBMC_assoc_init", IntrinsicKind::AssocInit},
      {"__ESBMC_assoc_multi_init", IntrinsicKind::AssocMultiInit},
      {"__ESBMC_copy", IntrinsicKind::Copy},
      {"__ESBMC_clear", IntrinsicKind::Clear},
      {"__ESBMC_size", IntrinsicKind::Size},
      {"__ESBMC_elem", IntrinsicKind::Elem},
      {"__ESBMC_key_at", IntrinsicKind::KeyAt},
      {"__ESBMC_seq_insert", IntrinsicKind::SeqInsert},
      {"__ESBMC_seq_erase", IntrinsicKind::SeqErase},
      {"__ESBMC_seq_search", IntrinsicKind::SeqSearch},
      {"__ESBMC_seq_search_range", IntrinsicKind::SeqSearchRange},
      {"__ESBMC_assoc_insert", IntrinsicKind::AssocInsert},
      {"__ESBMC_assoc_erase", IntrinsicKind::AssocErase},
      {"__ESBMC_assoc_search", IntrinsicKind::AssocSearch},
      {"__ESBMC_erase_at", IntrinsicKind::EraseAt},
      {"__ESBMC_count", IntrinsicKind::Count},
      {"__ESBMC_sort_range", IntrinsicKind::SortRange},
      {"__ESBMC_str_append", IntrinsicKind::StrAppend},
      {"__ESBMC_str_eq", IntrinsicKind::StrEq},
  };
  return t;
}
} // namespace

TypedExprPtr Checker::check_intrinsic(IntrinsicKind kind, const ast::Expr &e) {
  auto out = std::make_unique<TypedExpr>();
  out->kind = TypedExpr::Kind::IntrinsicCall;
  out->intr = kind;
  out->type = types().basic(TypeKind::Void);
  out->loc = e.loc;

  auto arity_error = [&]() {
    error(e.loc, "wrong number of arguments to intrinsic");
    return nullptr;
  };

  switch (kind) {
  case IntrinsicKind::Assert: {
    const bool wide = e.callee->parts[0] == "__ESBMC_assert";
    if (e.args.size() != (wide ? 2u : 1u))
      return arity_error();
    TypedExprPtr cond = check_expr(*e.args[0]);
    if (!cond)
      return nullptr;
    cond = to_bool(std::move(cond), e.loc);
    if (wide) {
      if (e.args[1]->kind != ast::Expr::Kind::StringLit) {
        error(e.loc, "assertion message must be a string literal");
        return nullptr;
      }
      out->sval = e.args[1]->string_value;
    } else {
      out->sval = print_typed_expr(prog_, *cond);
    }
    out->args.push_back(std::move(cond));
    return out;
  }
  case IntrinsicKind::Assume: {
    if (e.args.size() != 1)
      return arity_error();
    TypedExprPtr cond = check_expr(*e.args[0]);
    if (!cond)
      return nullptr;
    out->args.push_back(to_bool(std::move(cond), e.loc));
    return out;
  }
  case IntrinsicKind::Nondet: {
    if (!e.args.empty())
      return arity_error();
    out->kind = TypedExpr::Kind::Nondet;
    out->type = kNoType;
    return out;
  }
  case IntrinsicKind::SetTerminate:
  case IntrinsicKind::SetUnexpected: {
    if (e.args.size() != 1)
      return arity_error();
    TypedExprPtr h = check_expr(*e.args[0]);
    if (!h)
      return nullptr;
    TypeRef bare = types().strip_quals(h->type);
    if (types()[bare].kind != TypeKind::FunctionPtr) {
      error(e.loc, "handler must be a function");
      return nullptr;
    }
    out->args.push_back(std::move(h));
    return out;
  }
  case IntrinsicKind::Terminate:
    if (!e.args.empty())
      return arity_error();
    return out;
  default:
    break;
  }

  // Container registry intrinsics: first argument is a container pointer.
  if (e.args.empty())
    return arity_error();
  TypedExprPtr cont = check_expr(*e.args[0]);
  if (!cont)
    return nullptr;
  TypeRef ct = types().strip_quals(cont->type);
  if (types()[ct].kind == TypeKind::Class && cont->lvalue)
    cont = make_addrof(std::move(cont), e.loc);
  ct = types().strip_quals(cont->type);
  if (types()[ct].kind != TypeKind::Pointer ||
      types()[types().strip_quals(types()[ct].inner)].kind !=
          TypeKind::Class) {
    error(e.loc, "intrinsic expects a container");
    return nullptr;
  }
  uint32_t cid = types()[types().strip_quals(types()[ct].inner)].class_id;
  const ClassInfo &ci = prog_.classes[cid];
  if (ci.ckind == ContainerKind::None) {
    error(e.loc, "'" + ci.name + "' is not a container");
    return nullptr;
  }
  TypeRef elem = types().strip_quals(ci.elem_type);
  TypeRef key = ci.key_type == kNoType ? types().basic(TypeKind::ULong)
                                       : types().strip_quals(ci.key_type);
  TypeRef ulong = types().basic(TypeKind::ULong);
  out->args.push_back(std::move(cont));

  auto more = [&](size_t i, TypeRef want) -> bool {
    TypedExprPtr a = check_expr(*e.args[i]);
    if (!a)
      return false;
    if (want != kNoType)
      a = coerce(std::move(a), want, e.loc);
    out->args.push_back(std::move(a));
    return true;
  };

  size_t want_args = 0;
  switch (kind) {
  case IntrinsicKind::SeqInit:
  case IntrinsicKind::AssocInit:
  case IntrinsicKind::AssocMultiInit:
  case IntrinsicKind::Clear:
    want_args = 1;
    break;
  case IntrinsicKind::Copy:
  case IntrinsicKind::StrAppend:
  case IntrinsicKind::StrEq:
    want_args = 2;
    break;
  case IntrinsicKind::Size:
    want_args = 1;
    out->type = ulong;
    break;
  case IntrinsicKind::Elem:
    want_args = 2;
    out->type = elem;
    out->lvalue = true;
    break;
  case IntrinsicKind::KeyAt:
    want_args = 2;
    out->type = key;
    break;
  case IntrinsicKind::SeqInsert:
    want_args = 3;
    out->type = ulong;
    break;
  case IntrinsicKind::SeqErase:
  case IntrinsicKind::EraseAt:
    want_args = 2;
    out->type = ulong;
    break;
  case IntrinsicKind::SeqSearch:
    want_args = 2;
    out->type = ulong;
    break;
  case IntrinsicKind::SeqSearchRange:
    want_args = 4;
    out->type = ulong;
    break;
  case IntrinsicKind::AssocInsert:
    want_args = 3;
    out->type = ulong;
    break;
  case IntrinsicKind::AssocErase:
  case IntrinsicKind::AssocSearch:
  case IntrinsicKind::Count:
    want_args = 2;
    out->type = ulong;
    break;
  case IntrinsicKind::SortRange:
    want_args = 3;
    break;
  default:
    return nullptr;
  }
  if (e.args.size() != want_args)
    return arity_error();
  if (kind == IntrinsicKind::StrEq)
    out->type = types().basic(TypeKind::Bool);

  for (size_t i = 1; i < want_args; ++i) {
    TypeRef want = kNoType;
    switch (kind) {
    case IntrinsicKind::Copy:
    case IntrinsicKind::StrAppend:
    case IntrinsicKind::StrEq:
      want = kNoType; // second container pointer, typed as-is
      break;
    case IntrinsicKind::Elem:
    case IntrinsicKind::KeyAt:
    case IntrinsicKind::SeqErase:
    case IntrinsicKind::EraseAt:
      want = ulong;
      break;
    case IntrinsicKind::SeqInsert:
      want = i == 1 ? ulong : elem;
      break;
    case IntrinsicKind::SeqSearch:
      want = elem;
      break;
    case IntrinsicKind::SeqSearchRange:
      want = i <= 2 ? ulong : elem;
      break;
    case IntrinsicKind::AssocInsert:
      want = i == 1 ? key : elem;
      break;
    case IntrinsicKind::AssocErase:
    case IntrinsicKind::AssocSearch:
    case IntrinsicKind::Count:
      want = key;
      break;
    case IntrinsicKind::SortRange:
      want = ulong;
      break;
    default:
      break;
    }
    if (!more(i, want))
      return nullptr;
  }
  return out;
}

TypedExprPtr Checker::check_call(const ast::Expr &e) {
  const ast::Expr &callee = *e.callee;

  // Member call: obj.m(...) / ptr->m(...)
  if (callee.kind == ast::Expr::Kind::Member) {
    TypedExprPtr base = check_expr(*callee.base);
    if (!base)
      return nullptr;
    if (callee.is_arrow) {
      TypeRef bare = types().strip_quals(base->type);
      if (types()[bare].kind != TypeKind::Pointer) {
        error(e.loc, "'->' on non-pointer type '" + tname(base->type) + "'");
        return nullptr;
      }
      base = make_deref(std::move(base), e.loc);
    }
    std::vector<TypedExprPtr> args;
    for (const auto &a : e.args) {
      TypedExprPtr t = check_expr(*a);
      if (!t)
        return nullptr;
      args.push_back(std::move(t));
    }
    return check_method_call(std::move(base), true, callee.qualifier,
                             callee.name, std::move(args), e.loc);
  }

  if (callee.kind != ast::Expr::Kind::Ident) {
    error(e.loc, "called expression is not a function");
    return nullptr;
  }

  // Intrinsics are intercepted by name before any lookup.
  if (callee.parts.size() == 1) {
    auto ii = intrinsic_table().find(callee.parts[0]);
    if (ii != intrinsic_table().end())
      return check_intrinsic(ii->second, e);
  }

  std::vector<TypedExprPtr> args;
  for (const auto &a : e.args) {
    TypedExprPtr t = check_expr(*a);
    if (!t)
      return nullptr;
    args.push_back(std::move(t));
  }

  if (callee.parts.size() == 2) {
    // Qualified call Base::m(...): static dispatch on `this`.
    if (ctx_.class_id == 0xffffffffu) {
      error(e.loc, "qualified call '" + callee.parts[0] +
                       "::" + callee.parts[1] + "' outside a method");
      return nullptr;
    }
    return check_method_call(make_deref(make_this(e.loc), e.loc), false,
                             callee.parts[0], callee.parts[1],
                             std::move(args), e.loc);
  }
  if (callee.parts.size() != 1) {
    error(e.loc, "unsupported qualified name");
    return nullptr;
  }
  const std::string &name = callee.parts[0];

  // Calls through local function-pointer variables are out of scope.
  if (LocalVar *lv = lookup_local(name)) {
    TypeRef bare = types().strip_quals(lv->type);
    if (types()[bare].kind == TypeKind::FunctionPtr ||
        (lv->is_ref &&
         types()[types().strip_quals(types()[bare].inner)].kind ==
             TypeKind::FunctionPtr)) {
      error(e.loc, "indirect calls are not supported");
      return nullptr;
    }
    error(e.loc, "'" + name + "' is not a function");
    return nullptr;
  }

  // Explicit template arguments force the template path.
  if (callee.has_explicit_targs) {
    TemplateEntry *te = find_template(name);
    if (!te || te->is_class) {
      error(e.loc, "no function template named '" + name + "'");
      return nullptr;
    }
    std::vector<TypeRef> targs;
    for (const auto &a : callee.targs) {
      TypeRef t = resolve_type(*a);
      if (t == kNoType)
        return nullptr;
      targs.push_back(t);
    }
    uint32_t fn = instantiate_function(name, targs, e.loc);
    return finish_call(fn, nullptr, std::move(args), e.loc);
  }

  // Methods of the enclosing class hide free functions.
  if (ctx_.class_id != 0xffffffffu) {
    QuietScope q(*this);
    std::string path;
    bool abs = false;
    std::vector<uint32_t> ids =
        find_methods(ctx_.class_id, "", name, &path, &abs, e.loc);
    if (!ids.empty()) {
      quiet_ = q.saved; // restore diagnostics for the real resolution
      return check_method_call(make_deref(make_this(e.loc), e.loc), true, "",
                               name, std::move(args), e.loc);
    }
  }

  auto ff = free_fns_.find(name);
  if (ff != free_fns_.end() && !ff->second.empty()) {
    uint32_t fn = resolve_overload(ff->second, args, e.loc, name);
    return finish_call(fn, nullptr, std::move(args), e.loc);
  }

  TemplateEntry *te = find_template(name);
  if (te && !te->is_class) {
    std::vector<TypeRef> targs;
    if (!deduce_call(*te, args, targs, e.loc))
      return nullptr;
    uint32_t fn = instantiate_function(name, targs, e.loc);
    return finish_call(fn, nullptr, std::move(args), e.loc);
  }

  // Constructing a class temporary: T(...)
  uint32_t cid = find_class(name);
  if (cid == 0xffffffffu && te && te->is_class) {
    error(e.loc, "missing template arguments for '" + name + "'");
    return nullptr;
  }
  if (cid != 0xffffffffu) {
    if (prog_.classes[cid].is_abstract) {
      error(e.loc, "CONVERSION ERROR");
      return nullptr;
    }
    for (uint32_t v : prog_.classes[cid].vbases) {
      if (prog_.classes[v].default_ctor == 0xffffffffu) {
        error(e.loc, "virtual base '" + prog_.classes[v].name +
                         "' has no default constructor");
        return nullptr;
      }
    }
    uint32_t ctor = resolve_ctor(cid, args, e.loc);
    if (ctor == 0xffffffffu)
      return nullptr;
    // coerce args against the constructor parameters
    std::vector<ParamInfo> params = prog_.functions[ctor].params;
    auto tmp = std::make_unique<TypedExpr>();
    tmp->kind = TypedExpr::Kind::New;
    tmp->ival = 1; // stack temporary
    tmp->class_id = cid;
    tmp->fn_id = ctor;
    tmp->type = types().class_type(cid);
    tmp->loc = e.loc;
    for (size_t i = 0; i < args.size(); ++i) {
      const ParamInfo &p = params[i + 1];
      if (p.is_ref) {
        TypedExprPtr addr = make_addrof(std::move(args[i]), e.loc);
        tmp->args.push_back(coerce(std::move(addr), p.type, e.loc));
      } else {
        tmp->args.push_back(coerce(std::move(args[i]), p.type, e.loc));
      }
    }
    return tmp;
  }

  error(e.loc, "unknown function '" + name + "'");
  return nullptr;
}

TypedExprPtr Checker::check_member(const ast::Expr &e, bool /*call_ctx*/,
                                   std::vector<TypedExprPtr> * /*call_args*/) {
  TypedExprPtr base = check_expr(*e.base);
  if (!base)
    return nullptr;
  if (e.is_arrow) {
    TypeRef bare = types().strip_quals(base->type);
    // `it->first` on an associative iterator object: the arrow reads through
    // the iterator's own container/position pair, no pointer involved.
    if (types()[bare].kind != TypeKind::Pointer &&
        types()[bare].kind != TypeKind::Class) {
      error(e.loc, "'->' on non-pointer type '" + tname(base->type) + "'");
      return nullptr;
    }
    if (types()[bare].kind == TypeKind::Pointer)
      base = make_deref(std::move(base), e.loc);
  }
  TypeRef bt = types().strip_quals(base->type);
  if (types()[bt].kind != TypeKind::Class) {
    error(e.loc, "request for member '" + e.name + "' in non-class type '" +
                     tname(base->type) + "'");
    return nullptr;
  }
  uint32_t cid = types()[bt].class_id;
  const ClassInfo &ci = prog_.classes[cid];

  // Associative-iterator sugar: it->first / it->second read the key/element
  // through the iterator's container pointer and position.
  if ((e.name == "first" || e.name == "second") && e.qualifier.empty()) {
    const FieldInfo *fc = nullptr, *fp = nullptr;
    for (const auto &f : ci.fields) {
      if (f.name == "__c")
        fc = &f;
      if (f.name == "__pos")
        fp = &f;
    }
    if (fc && fp) {
      TypedExprPtr cptr = make_field_ref(clone_expr(*base), *fc, e.loc);
      cptr->lvalue = false;
      TypedExprPtr pos = make_field_ref(std::move(base), *fp, e.loc);
      pos->lvalue = false;
      TypeRef pointee = types().strip_quals(types()[fc->type].inner);
      uint32_t ccid = types()[pointee].class_id;
      auto out = std::make_unique<TypedExpr>();
      out->kind = TypedExpr::Kind::IntrinsicCall;
      out->intr = e.name == "first" ? IntrinsicKind::KeyAt
                                    : IntrinsicKind::Elem;
      out->type = e.name == "first"
                      ? types().strip_quals(prog_.classes[ccid].key_type)
                      : types().strip_quals(prog_.classes[ccid].elem_type);
      out->lvalue = e.name == "second";
      out->loc = e.loc;
      out->args.push_back(std::move(cptr));
      out->args.push_back(std::move(pos));
      return out;
    }
  }

  if (!e.qualifier.empty()) {
    // Qualified member access obj.Base::field selects the lookup scope: the
    // member is searched only below the named subobject(s).
    std::vector<std::string> qpaths;
    if (e.qualifier == ci.name || e.qualifier == ci.template_name)
      qpaths.push_back("");
    for (const auto &s : ci.subobjects) {
      if (s.path.empty())
        continue;
      const ClassInfo &sc = prog_.classes[s.class_id];
      if (sc.name == e.qualifier || sc.template_name == e.qualifier)
        qpaths.push_back(s.path);
    }
    if (qpaths.empty()) {
      error(e.loc, "'" + e.qualifier + "' is not a base of '" + ci.name + "'");
      return nullptr;
    }
    auto depth_of = [](const std::string &p) {
      if (p.empty())
        return 0;
      int d = 1;
      for (size_t i = 0; i + 1 < p.size(); ++i)
        if (p[i] == ':' && p[i + 1] == ':')
          ++d;
      return d;
    };
    const FieldInfo *best = nullptr;
    int best_depth = 1 << 30;
    bool ambiguous = false;
    for (const auto &f : ci.fields) {
      if (f.is_ghost || f.name != e.name)
        continue;
      for (const auto &qp : qpaths) {
        if (!(f.subobj_path == qp || qp.empty() ||
              (f.subobj_path.size() > qp.size() + 2 &&
               f.subobj_path.compare(0, qp.size() + 2, qp + "::") == 0)))
          continue;
        int rel = depth_of(f.subobj_path) - depth_of(qp);
        if (rel < best_depth) {
          best = &f;
          best_depth = rel;
          ambiguous = false;
        } else if (rel == best_depth && best && best->key != f.key) {
          ambiguous = true;
        }
      }
    }
    if (!best) {
      error(e.loc, "no member named '" + e.name + "' in '" + e.qualifier +
                       "'");
      return nullptr;
    }
    if (ambiguous) {
      error(e.loc, "ambiguous member '" + e.name + "' in '" + e.qualifier +
                       "'");
      return nullptr;
    }
    check_member_access(best->owner, best->access, e.loc, e.name);
    bool was_lv = base->lvalue;
    TypedExprPtr fr = make_field_ref(std::move(base), *best, e.loc);
    fr->lvalue = was_lv;
    return fr;
  }

  const FieldInfo *f = find_field(cid, e.name, e.loc);
  if (!f) {
    if (!class_method_index_[cid].count(e.name)) {
      // not a field; find_field already reported ambiguity if any
      bool reported = false;
      for (const auto &fi : ci.fields)
        if (!fi.is_ghost && fi.name == e.name)
          reported = true;
      if (!reported)
        error(e.loc, "no member named '" + e.name + "' in '" + ci.name + "'");
    } else {
      error(e.loc, "method '" + e.name + "' used without a call");
    }
    return nullptr;
  }
  check_member_access(f->owner, f->access, e.loc, e.name);
  if (!f->subobj_path.empty()) {
    // fold inheritance-path access on top of the member's own access
    for (const auto &s : ci.subobjects)
      if (s.path == f->subobj_path && s.path_access != ast::Access::Public)
        check_member_access(cid, s.path_access, e.loc, e.name);
  }
  bool base_lv = base->lvalue;
  TypedExprPtr fr = make_field_ref(std::move(base), *f, e.loc);
  fr->lvalue = base_lv;
  return fr;
}

TypedExprPtr Checker::check_unary(const ast::Expr &e) {
  using UO = ast::UnaryOp;
  TypedExprPtr v = check_expr(*e.lhs);
  if (!v)
    return nullptr;
  TypeRef bare = types().strip_quals(v->type == kNoType
                                         ? types().basic(TypeKind::Int)
                                         : v->type);

  switch (e.unary_op) {
  case UO::Deref: {
    if (types()[bare].kind == TypeKind::Class)
      return check_method_call(std::move(v), true, "", "operator*", {},
                               e.loc);
    if (types()[bare].kind != TypeKind::Pointer) {
      error(e.loc, "cannot dereference '" + tname(v->type) + "'");
      return nullptr;
    }
    return make_deref(std::move(v), e.loc);
  }
  case UO::AddrOf: {
    if (!v->lvalue) {
      error(e.loc, "cannot take the address of an rvalue");
      return nullptr;
    }
    return make_addrof(std::move(v), e.loc);
  }
  case UO::Not:
    v = to_bool(std::move(v), e.loc);
    break;
  case UO::Plus:
  case UO::Minus:
  case UO::BitNot: {
    if (v->kind == TypedExpr::Kind::Nondet && v->type == kNoType)
      adopt_nondet(*v, types().basic(TypeKind::Int));
    bare = types().strip_quals(v->type);
    if (!types().is_arithmetic(bare) ||
        (e.unary_op == UO::BitNot && !types().is_integer(bare))) {
      error(e.loc, "invalid operand to unary operator");
      return nullptr;
    }
    // integer promotion
    if (types().is_integer(bare) &&
        types().bit_width(bare) < types().bit_width(types().basic(TypeKind::Int)))
      v = coerce(std::move(v), types().basic(TypeKind::Int), e.loc);
    break;
  }
  case UO::PreInc:
  case UO::PreDec:
  case UO::PostInc:
  case UO::PostDec: {
    if (types()[bare].kind == TypeKind::Class) {
      const char *op = (e.unary_op == UO::PreInc || e.unary_op == UO::PostInc)
                           ? "operator++"
                           : "operator--";
      return check_method_call(std::move(v), true, "", op, {}, e.loc);
    }
    if (!v->lvalue) {
      error(e.loc, "increment/decrement needs an lvalue");
      return nullptr;
    }
    if (!types().is_arithmetic(bare) &&
        types()[bare].kind != TypeKind::Pointer) {
      error(e.loc, "invalid operand to increment/decrement");
      return nullptr;
    }
    break;
  }
  }

  auto out = std::make_unique<TypedExpr>();
  out->kind = TypedExpr::Kind::Unary;
  out->uop = e.unary_op;
  out->type = e.unary_op == UO::Not ? types().basic(TypeKind::Bool)
                                    : types().strip_quals(v->type);
  out->lvalue =
      e.unary_op == UO::PreInc || e.unary_op == UO::PreDec ? v->lvalue : false;
  out->loc = e.loc;
  out->args.push_back(std::move(v));
  return out;
}

TypedExprPtr Checker::check_binary(const ast::Expr &e) {
  using BO = ast::BinaryOp;
  const BO op = e.binary_op;

  TypedExprPtr a = check_expr(*e.lhs);
  if (!a)
    return nullptr;
  TypedExprPtr b = check_expr(*e.rhs);
  if (!b)
    return nullptr;

  TypeRef at = a->type == kNoType ? kNoType : types().strip_quals(a->type);

  // Class operands route to operator overloads.
  if (at != kNoType && types()[at].kind == TypeKind::Class) {
    static const std::map<BO, const char *> kOpNames = {
        {BO::Assign, "operator="},   {BO::AddAssign, "operator+="},
        {BO::SubAssign, "operator-="}, {BO::Eq, "operator=="},
        {BO::Ne, "operator!="},      {BO::Lt, "operator<"},
        {BO::Gt, "operator>"},       {BO::Le, "operator<="},
        {BO::Ge, "operator>="},      {BO::Add, "operator+"},
        {BO::Sub, "operator-"},
    };
    auto oi = kOpNames.find(op);
    if (oi != kOpNames.end()) {
      // aggregate copy fallback for assignment without an operator=
      if (op == BO::Assign) {
        QuietScope q(*this);
        std::string path;
        bool abs = false;
        std::vector<uint32_t> ids = find_methods(
            types()[at].class_id, "", "operator=", &path, &abs, e.loc);
        quiet_ = q.saved;
        if (ids.empty()) {
          TypeRef bt = types().strip_quals(b->type);
          if (bt != at) {
            error(e.loc, "no match for assignment to '" + tname(a->type) +
                             "'");
            return nullptr;
          }
          if (!a->lvalue) {
            error(e.loc, "assignment requires an lvalue");
            return nullptr;
          }
          auto out = std::make_unique<TypedExpr>();
          out->kind = TypedExpr::Kind::Binary;
          out->bop = BO::Assign;
          out->type = at;
          out->loc = e.loc;
          out->args.push_back(std::move(a));
          out->args.push_back(std::move(b));
          return out;
        }
      }
      std::vector<TypedExprPtr> args;
      args.push_back(std::move(b));
      return check_method_call(std::move(a), true, "", oi->second,
                               std::move(args), e.loc);
    }
    error(e.loc, "invalid operands to binary operator");
    return nullptr;
  }

  if (op == BO::Assign) {
    if (!a->lvalue) {
      error(e.loc, "assignment requires an lvalue");
      return nullptr;
    }
    if (types()[a->type].quals & kQualConst) {
      error(e.loc, "assignment of read-only location");
      return nullptr;
    }
    b = coerce(std::move(b), types().strip_quals(a->type), e.loc);
    auto out = std::make_unique<TypedExpr>();
    out->kind = TypedExpr::Kind::Binary;
    out->bop = op;
    out->type = types().strip_quals(a->type);
    out->loc = e.loc;
    out->args.push_back(std::move(a));
    out->args.push_back(std::move(b));
    return out;
  }

  if (op == BO::AddAssign || op == BO::SubAssign || op == BO::MulAssign ||
      op == BO::DivAssign || op == BO::RemAssign || op == BO::AndAssign ||
      op == BO::OrAssign || op == BO::XorAssign) {
    if (!a->lvalue) {
      error(e.loc, "compound assignment requires an lvalue");
      return nullptr;
    }
    TypeRef lt = types().strip_quals(a->type);
    if (types()[lt].kind == TypeKind::Pointer &&
        (op == BO::AddAssign || op == BO::SubAssign)) {
      b = coerce(std::move(b), types().basic(TypeKind::Long), e.loc);
    } else if (!types().is_arithmetic(lt)) {
      error(e.loc, "invalid operands to compound assignment");
      return nullptr;
    } else {
      if (b->kind == TypedExpr::Kind::Nondet && b->type == kNoType)
        adopt_nondet(*b, lt);
      b = coerce(std::move(b), lt, e.loc);
    }
    auto out = std::make_unique<TypedExpr>();
    out->kind = TypedExpr::Kind::Binary;
    out->bop = op;
    out->type = lt;
    out->loc = e.loc;
    out->args.push_back(std::move(a));
    out->args.push_back(std::move(b));
    return out;
  }

  if (op == BO::LogAnd || op == BO::LogOr) {
    a = to_bool(std::move(a), e.loc);
    b = to_bool(std::move(b), e.loc);
    auto out = std::make_unique<TypedExpr>();
    out->kind = TypedExpr::Kind::Binary;
    out->bop = op;
    out->type = types().basic(TypeKind::Bool);
    out->loc = e.loc;
    out->args.push_back(std::move(a));
    out->args.push_back(std::move(b));
    return out;
  }

  // Adopt untyped nondet operands from the other side.
  if (a->kind == TypedExpr::Kind::Nondet && a->type == kNoType) {
    if (b->type != kNoType && types().is_scalar(types().strip_quals(b->type)))
      adopt_nondet(*a, types().strip_quals(b->type));
    else {
      error(e.loc, "nondet() requires a typed context");
      return nullptr;
    }
  }
  if (b->kind == TypedExpr::Kind::Nondet && b->type == kNoType) {
    if (a->type != kNoType && types().is_scalar(types().strip_quals(a->type)))
      adopt_nondet(*b, types().strip_quals(a->type));
    else {
      error(e.loc, "nondet() requires a typed context");
      return nullptr;
    }
  }

  at = types().strip_quals(a->type);
  TypeRef bt = types().strip_quals(b->type);
  const bool cmp = op == BO::Lt || op == BO::Gt || op == BO::Le ||
                   op == BO::Ge || op == BO::Eq || op == BO::Ne;

  // Pointer arithmetic and comparisons.
  if (types()[at].kind == TypeKind::Pointer ||
      types()[bt].kind == TypeKind::Pointer ||
      types()[at].kind == TypeKind::FunctionPtr ||
      types()[bt].kind == TypeKind::FunctionPtr) {
    if (cmp) {
      if (types()[at].kind != types()[bt].kind) {
        // null literal on either side
        if (b->kind == TypedExpr::Kind::IntConst && b->ival == 0)
          b = coerce(std::move(b), at, e.loc);
        else if (a->kind == TypedExpr::Kind::IntConst && a->ival == 0)
          a = coerce(std::move(a), bt, e.loc);
        else {
          error(e.loc, "comparison between incompatible operands");
          return nullptr;
        }
      } else if (!types().same_unqual(types()[at].inner, types()[bt].inner) &&
                 types()[at].kind == TypeKind::Pointer) {
        // allow base/derived pointer comparison by upcasting one side
        TypeRef ap = types().strip_quals(types()[at].inner);
        TypeRef bp = types().strip_quals(types()[bt].inner);
        if (types()[ap].kind == TypeKind::Class &&
            types()[bp].kind == TypeKind::Class) {
          if (prog_.base_path_count(types()[ap].class_id,
                                    types()[bp].class_id) == 1)
            a = coerce(std::move(a), bt, e.loc);
          else if (prog_.base_path_count(types()[bp].class_id,
                                         types()[ap].class_id) == 1)
            b = coerce(std::move(b), at, e.loc);
        }
      }
      auto out = std::make_unique<TypedExpr>();
      out->kind = TypedExpr::Kind::Binary;
      out->bop = op;
      out->type = types().basic(TypeKind::Bool);
      out->loc = e.loc;
      out->args.push_back(std::move(a));
      out->args.push_back(std::move(b));
      return out;
    }
    if ((op == BO::Add || op == BO::Sub) &&
        types()[at].kind == TypeKind::Pointer && types().is_integer(bt)) {
      b = coerce(std::move(b), types().basic(TypeKind::Long), e.loc);
      auto out = std::make_unique<TypedExpr>();
      out->kind = TypedExpr::Kind::Binary;
      out->bop = op;
      out->type = at;
      out->loc = e.loc;
      out->args.push_back(std::move(a));
      out->args.push_back(std::move(b));
      return out;
    }
    error(e.loc, "invalid pointer arithmetic");
    return nullptr;
  }

  if (!types().is_arithmetic(at) || !types().is_arithmetic(bt)) {
    error(e.loc, "invalid operands to binary operator");
    return nullptr;
  }
  if ((op == BO::Rem || op == BO::Shl || op == BO::Shr || op == BO::BitAnd ||
       op == BO::BitOr || op == BO::BitXor) &&
      (!types().is_integer(at) || !types().is_integer(bt))) {
    error(e.loc, "integer operands required");
    return nullptr;
  }

  usual_arith(a, b, e.loc);
  auto out = std::make_unique<TypedExpr>();
  out->kind = TypedExpr::Kind::Binary;
  out->bop = op;
  out->type = cmp ? types().basic(TypeKind::Bool)
                  : types().strip_quals(a->type);
  out->loc = e.loc;
  out->args.push_back(std::move(a));
  out->args.push_back(std::move(b));
  return out;
}

TypedExprPtr Checker::check_cast(const ast::Expr &e) {
  TypeRef t = resolve_type(*e.type);
  if (t == kNoType)
    return nullptr;
  TypedExprPtr v = check_expr(*e.lhs);
  if (!v)
    return nullptr;
  TypeRef tgt = types().strip_quals(t);
  if (v->kind == TypedExpr::Kind::Nondet && v->type == kNoType) {
    if (!adopt_nondet(*v, tgt))
      error(e.loc, "nondet() requires a scalar context");
    return v;
  }
  TypeRef src = types().strip_quals(v->type);
  if (src == tgt)
    return v;

  if (types().is_arithmetic(tgt) &&
      (types().is_arithmetic(src) || types()[src].kind == TypeKind::Bool))
    return coerce(std::move(v), tgt, e.loc);

  if (types()[tgt].kind == TypeKind::Pointer) {
    if (v->kind == TypedExpr::Kind::IntConst && v->ival == 0)
      return coerce(std::move(v), tgt, e.loc);
    if (types()[src].kind == TypeKind::Array)
      return coerce(std::move(v), tgt, e.loc);
    if (types()[src].kind == TypeKind::Pointer) {
      TypeRef sp = types().strip_quals(types()[src].inner);
      TypeRef tp = types().strip_quals(types()[tgt].inner);
      if (types()[sp].kind == TypeKind::Class &&
          types()[tp].kind == TypeKind::Class) {
        uint32_t sc = types()[sp].class_id, tc = types()[tp].class_id;
        if (prog_.base_path_count(sc, tc) >= 1)
          return coerce(std::move(v), tgt, e.loc); // upcast
        if (prog_.base_path_count(tc, sc) == 1) {
          bool abs = false;
          std::string path = prog_.upcast_path(tc, sc, abs);
          auto c = std::make_unique<TypedExpr>();
          c->kind = TypedExpr::Kind::Cast;
          c->ck = CastKind::PtrDown;
          c->cast_path = path;
          c->cast_abs = abs;
          c->type = tgt;
          c->loc = e.loc;
          c->args.push_back(std::move(v));
          return c;
        }
        error(e.loc, "invalid cast between unrelated class pointers");
        return nullptr;
      }
      // scalar pointer reinterpretation
      auto c = std::make_unique<TypedExpr>();
      c->kind = TypedExpr::Kind::Cast;
      c->ck = CastKind::PtrQual;
      c->type = tgt;
      c->loc = e.loc;
      c->args.push_back(std::move(v));
      return c;
    }
  }
  error(e.loc, "invalid cast from '" + tname(v->type) + "' to '" + tname(t) +
                   "'");
  return nullptr;
}

TypedExprPtr Checker::check_expr(const ast::Expr &e) {
  switch (e.kind) {
  case ast::Expr::Kind::IntLit: {
    TypeKind k = TypeKind::Int;
    if (e.is_char)
      k = TypeKind::Char;
    else if (e.int_is_unsigned && e.int_is_long)
      k = TypeKind::ULong;
    else if (e.int_is_unsigned)
      k = TypeKind::UInt;
    else if (e.int_is_long)
      k = TypeKind::Long;
    return make_int(static_cast<int64_t>(e.int_value), types().basic(k),
                    e.loc);
  }
  case ast::Expr::Kind::FloatLit: {
    auto v = std::make_unique<TypedExpr>();
    v->kind = TypedExpr::Kind::FloatConst;
    v->type = types().basic(e.float_is_single ? TypeKind::Float
                                              : TypeKind::Double);
    v->fval = e.float_value;
    v->loc = e.loc;
    return v;
  }
  case ast::Expr::Kind::BoolLit: {
    auto v = std::make_unique<TypedExpr>();
    v->kind = TypedExpr::Kind::BoolConst;
    v->type = types().basic(TypeKind::Bool);
    v->ival = e.bool_value ? 1 : 0;
    v->loc = e.loc;
    return v;
  }
  case ast::Expr::Kind::StringLit: {
    auto v = std::make_unique<TypedExpr>();
    v->kind = TypedExpr::Kind::StringConst;
    v->sval = e.string_value;
    v->loc = e.loc;
    uint32_t sc = find_class("string");
    if (sc != 0xffffffffu)
      v->type = types().class_type(sc);
    else
      v->type = types().array_of(types().basic(TypeKind::Char, kQualConst),
                                 e.string_value.size() + 1);
    return v;
  }
  case ast::Expr::Kind::This:
    if (ctx_.class_id == 0xffffffffu) {
      error(e.loc, "invalid use of 'this' outside a method");
      return nullptr;
    }
    return make_this(e.loc);

  case ast::Expr::Kind::Ident: {
    if (e.parts.size() == 1) {
      const std::string &n = e.parts[0];
      if (LocalVar *lv = lookup_local(n)) {
        auto v = std::make_unique<TypedExpr>();
        v->kind = TypedExpr::Kind::VarRef;
        v->var = lv->unique;
        v->type = lv->type;
        v->lvalue = true;
        v->loc = e.loc;
        if (lv->is_ref)
          return make_deref(std::move(v), e.loc); // auto-deref references
        return v;
      }
      if (ctx_.class_id != 0xffffffffu) {
        QuietScope q(*this);
        const FieldInfo *f = find_field(ctx_.class_id, n, e.loc);
        quiet_ = q.saved;
        if (f) {
          check_member_access(f->owner, f->access, e.loc, n);
          return make_field_ref(make_deref(make_this(e.loc), e.loc), *f,
                                e.loc);
        }
      }
      auto gi = global_index_.find(n);
      if (gi != global_index_.end()) {
        auto v = std::make_unique<TypedExpr>();
        v->kind = TypedExpr::Kind::GlobalRef;
        v->var = n;
        v->type = prog_.globals[gi->second].type;
        v->lvalue = true;
        v->loc = e.loc;
        return v;
      }
      auto ff = free_fns_.find(n);
      if (ff != free_fns_.end() && ff->second.size() == 1)
        return make_fn_const(ff->second[0], e.loc);
      if (ff != free_fns_.end()) {
        error(e.loc, "cannot resolve overloaded function '" + n + "'");
        return nullptr;
      }
      error(e.loc, "use of undeclared identifier '" + n + "'");
      return nullptr;
    }
    error(e.loc, "unsupported qualified name");
    return nullptr;
  }

  case ast::Expr::Kind::Unary:
    return check_unary(e);
  case ast::Expr::Kind::Binary:
    return check_binary(e);

  case ast::Expr::Kind::Conditional: {
    TypedExprPtr c = check_expr(*e.cond);
    if (!c)
      return nullptr;
    c = to_bool(std::move(c), e.loc);
    TypedExprPtr a = check_expr(*e.lhs);
    TypedExprPtr b = check_expr(*e.rhs);
    if (!a || !b)
      return nullptr;
    if (a->kind == TypedExpr::Kind::Nondet && a->type == kNoType &&
        b->type != kNoType)
      adopt_nondet(*a, types().strip_quals(b->type));
    if (b->kind == TypedExpr::Kind::Nondet && b->type == kNoType &&
        a->type != kNoType)
      adopt_nondet(*b, types().strip_quals(a->type));
    TypeRef at = types().strip_quals(a->type);
    TypeRef bt = types().strip_quals(b->type);
    if (at != bt) {
      if (types().is_arithmetic(at) && types().is_arithmetic(bt)) {
        usual_arith(a, b, e.loc);
      } else if (types()[at].kind == TypeKind::Pointer &&
                 b->kind == TypedExpr::Kind::IntConst && b->ival == 0) {
        b = coerce(std::move(b), at, e.loc);
      } else if (types()[bt].kind == TypeKind::Pointer &&
                 a->kind == TypedExpr::Kind::IntConst && a->ival == 0) {
        a = coerce(std::move(a), bt, e.loc);
      } else {
        error(e.loc, "incompatible operands in conditional expression");
        return nullptr;
      }
    }
    auto out = std::make_unique<TypedExpr>();
    out->kind = TypedExpr::Kind::Conditional;
    out->type = types().strip_quals(a->type);
    out->loc = e.loc;
    out->args.push_back(std::move(c));
    out->args.push_back(std::move(a));
    out->args.push_back(std::move(b));
    return out;
  }

  case ast::Expr::Kind::Call:
    return check_call(e);
  case ast::Expr::Kind::Member:
    return check_member(e, false, nullptr);

  case ast::Expr::Kind::Index: {
    TypedExprPtr base = check_expr(*e.base);
    if (!base)
      return nullptr;
    TypedExprPtr idx = check_expr(*e.index);
    if (!idx)
      return nullptr;
    TypeRef bt = types().strip_quals(base->type);
    if (types()[bt].kind == TypeKind::Class) {
      std::vector<TypedExprPtr> args;
      args.push_back(std::move(idx));
      return check_method_call(std::move(base), true, "", "operator[]",
                               std::move(args), e.loc);
    }
    if (types()[bt].kind == TypeKind::Array) {
      idx = coerce(std::move(idx), types().basic(TypeKind::Long), e.loc);
      auto out = std::make_unique<TypedExpr>();
      out->kind = TypedExpr::Kind::IndexRef;
      out->type = types()[bt].inner;
      out->lvalue = base->lvalue;
      out->loc = e.loc;
      out->args.push_back(std::move(base));
      out->args.push_back(std::move(idx));
      return out;
    }
    if (types()[bt].kind == TypeKind::Pointer) {
      idx = coerce(std::move(idx), types().basic(TypeKind::Long), e.loc);
      auto add = std::make_unique<TypedExpr>();
      add->kind = TypedExpr::Kind::Binary;
      add->bop = ast::BinaryOp::Add;
      add->type = bt;
      add->loc = e.loc;
      add->args.push_back(std::move(base));
      add->args.push_back(std::move(idx));
      return make_deref(std::move(add), e.loc);
    }
    error(e.loc, "subscript on non-array type '" + tname(base->type) + "'");
    return nullptr;
  }

  case ast::Expr::Kind::Cast:
    return check_cast(e);

  case ast::Expr::Kind::New: {
    TypeRef t = resolve_type(*e.type);
    if (t == kNoType)
      return nullptr;
    TypeRef bare = types().strip_quals(t);
    auto out = std::make_unique<TypedExpr>();
    out->kind = TypedExpr::Kind::New;
    out->loc = e.loc;
    out->type = types().pointer_to(bare);
    if (types()[bare].kind == TypeKind::Class) {
      uint32_t cid = types()[bare].class_id;
      if (prog_.classes[cid].is_abstract) {
        error(e.loc, "CONVERSION ERROR");
        return nullptr;
      }
      for (uint32_t v : prog_.classes[cid].vbases) {
        if (prog_.classes[v].default_ctor == 0xffffffffu) {
          error(e.loc, "virtual base '" + prog_.classes[v].name +
                           "' has no default constructor");
          return nullptr;
        }
      }
      std::vector<TypedExprPtr> args;
      for (const auto &a : e.args) {
        TypedExprPtr v = check_expr(*a);
        if (!v)
          return nullptr;
        args.push_back(std::move(v));
      }
      uint32_t ctor = resolve_ctor(cid, args, e.loc);
      if (ctor == 0xffffffffu)
        return nullptr;
      std::vector<ParamInfo> params = prog_.functions[ctor].params;
      out->class_id = cid;
      out->fn_id = ctor;
      for (size_t i = 0; i < args.size(); ++i) {
        const ParamInfo &p = params[i + 1];
        if (p.is_ref) {
          TypedExprPtr addr = make_addrof(std::move(args[i]), e.loc);
          out->args.push_back(coerce(std::move(addr), p.type, e.loc));
        } else {
          out->args.push_back(coerce(std::move(args[i]), p.type, e.loc));
        }
      }
      return out;
    }
    if (!types().is_scalar(bare)) {
      error(e.loc, "cannot allocate type '" + tname(t) + "'");
      return nullptr;
    }
    if (e.args.size() > 1) {
      error(e.loc, "too many initializers in new-expression");
      return nullptr;
    }
    if (e.args.size() == 1) {
      TypedExprPtr v = check_expr(*e.args[0]);
      if (!v)
        return nullptr;
      out->args.push_back(coerce(std::move(v), bare, e.loc));
    }
    return out;
  }

  case ast::Expr::Kind::SizeofType:
  case ast::Expr::Kind::SizeofExpr: {
    TypeRef t = kNoType;
    if (e.kind == ast::Expr::Kind::SizeofType) {
      t = resolve_type(*e.type);
    } else {
      TypedExprPtr v = check_expr(*e.lhs);
      if (!v)
        return nullptr;
      t = v->type;
    }
    if (t == kNoType)
      return nullptr;
    TypeRef bare = types().strip_quals(t);
    uint64_t sz = 8;
    if (types().is_arithmetic(bare) ||
        types()[bare].kind == TypeKind::Bool)
      sz = std::max(1u, types().bit_width(bare) / 8);
    else if (types()[bare].kind == TypeKind::Array)
      sz = types()[bare].array_size *
           std::max<uint64_t>(1, types().bit_width(types().strip_quals(
                                     types()[bare].inner)) / 8);
    return make_int(static_cast<int64_t>(sz), types().basic(TypeKind::ULong),
                    e.loc);
  }
  }
  return nullptr;
}

// -------------------------------------------------------------- statements

TypedStmtPtr Checker::check_decl_stmt(const ast::Stmt &s) {
  auto out = std::make_unique<TypedStmt>();
  out->kind = TypedStmt::Kind::Decl;
  out->loc = s.loc;

  for (const auto &d : s.decls) {
    TypeRef t = resolve_type(*d.type);
    if (t == kNoType)
      continue;
    TypedVarDecl vd;
    vd.display = d.name;
    vd.loc = d.loc;

    if (types()[t].kind == TypeKind::Reference) {
      TypeRef inner = types()[t].inner;
      vd.type = types().pointer_to(inner);
      vd.is_ref = true;
      if (!d.init || d.has_ctor_init) {
        error(d.loc, "reference '" + d.name + "' must be initialized");
        continue;
      }
      TypedExprPtr init = check_expr(*d.init);
      if (!init)
        continue;
      if (!init->lvalue) {
        error(d.loc, "reference must bind to an lvalue");
        continue;
      }
      TypedExprPtr addr = make_addrof(std::move(init), d.loc);
      vd.init = coerce(std::move(addr), vd.type, d.loc);
      vd.name = declare_local(d.name);
      ctx_.scopes.back()[d.name] = LocalVar{vd.name, vd.type, true};
      out->decls.push_back(std::move(vd));
      continue;
    }

    TypeRef bare = types().strip_quals(t);
    vd.type = bare;

    if (types()[bare].kind == TypeKind::Class) {
      uint32_t cid = types()[bare].class_id;
      std::vector<TypedExprPtr> args;
      bool aggregate = false;
      TypedExprPtr agg_init;
      if (d.has_ctor_init) {
        for (const auto &a : d.ctor_args) {
          TypedExprPtr v = check_expr(*a);
          if (v)
            args.push_back(std::move(v));
        }
      } else if (d.init) {
        TypedExprPtr v = check_expr(*d.init);
        if (!v)
          continue;
        TypeRef vt = v->type == kNoType ? kNoType
                                        : types().strip_quals(v->type);
        if (vt == bare && find_copy_ctor(cid) == 0xffffffffu) {
          aggregate = true;
          agg_init = std::move(v);
        } else {
          args.push_back(std::move(v));
        }
      }
      vd.name = declare_local(d.name);
      ctx_.scopes.back()[d.name] = LocalVar{vd.name, bare, false};
      if (aggregate) {
        // Initialization order must interleave with sibling constructions,
        // so the copy becomes a statement rather than a declarator init.
        auto var = std::make_unique<TypedExpr>();
        var->kind = TypedExpr::Kind::VarRef;
        var->var = vd.name;
        var->type = bare;
        var->lvalue = true;
        var->loc = d.loc;
        auto asg = std::make_unique<TypedExpr>();
        asg->kind = TypedExpr::Kind::Binary;
        asg->bop = ast::BinaryOp::Assign;
        asg->type = bare;
        asg->loc = d.loc;
        asg->args.push_back(std::move(var));
        asg->args.push_back(std::move(agg_init));
        auto st = std::make_unique<TypedStmt>();
        st->kind = TypedStmt::Kind::ExprStmt;
        st->loc = d.loc;
        st->expr = std::move(asg);
        out->decls.push_back(std::move(vd));
        out->stmts.push_back(std::move(st));
        continue;
      }
      auto var = std::make_unique<TypedExpr>();
      var->kind = TypedExpr::Kind::VarRef;
      var->var = vd.name;
      var->type = bare;
      var->lvalue = true;
      var->loc = d.loc;
      TypedExprPtr proto = make_addrof(std::move(var), d.loc);
      out->decls.push_back(std::move(vd));
      synthesize_object_construction(out->stmts, *proto, cid,
                                     std::move(args), d.loc);
      continue;
    }

    if (d.has_ctor_init) {
      if (d.ctor_args.size() != 1) {
        error(d.loc, "scalar initializer must be a single value");
        continue;
      }
      TypedExprPtr v = check_expr(*d.ctor_args[0]);
      if (!v)
        continue;
      vd.init = coerce(std::move(v), bare, d.loc);
    } else if (d.init) {
      TypedExprPtr v = check_expr(*d.init);
      if (!v)
        continue;
      vd.init = coerce(std::move(v), bare, d.loc);
    }
    vd.name = declare_local(d.name);
    ctx_.scopes.back()[d.name] = LocalVar{vd.name, bare, false};
    out->decls.push_back(std::move(vd));
  }
  return out;
}

TypedStmtPtr Checker::check_stmt(const ast::Stmt &s) {
  auto mk = [&](TypedStmt::Kind k) {
    auto st = std::make_unique<TypedStmt>();
    st->kind = k;
    st->loc = s.loc;
    return st;
  };

  switch (s.kind) {
  case ast::Stmt::Kind::Block: {
    auto out = mk(TypedStmt::Kind::Block);
    ctx_.scopes.emplace_back();
    for (const auto &c : s.stmts) {
      TypedStmtPtr t = check_stmt(*c);
      if (t)
        out->stmts.push_back(std::move(t));
    }
    ctx_.scopes.pop_back();
    return out;
  }
  case ast::Stmt::Kind::Decl:
    return check_decl_stmt(s);

  case ast::Stmt::Kind::ExprStmt: {
    auto out = mk(TypedStmt::Kind::ExprStmt);
    out->expr = check_expr(*s.expr);
    if (!out->expr)
      return mk(TypedStmt::Kind::Empty);
    if (out->expr->kind == TypedExpr::Kind::Nondet &&
        out->expr->type == kNoType) {
      error(s.loc, "nondet() requires a typed context");
      return mk(TypedStmt::Kind::Empty);
    }
    return out;
  }

  case ast::Stmt::Kind::If: {
    auto out = mk(TypedStmt::Kind::If);
    out->expr = to_bool(check_expr(*s.expr), s.loc);
    if (!out->expr)
      return mk(TypedStmt::Kind::Empty);
    out->then_stmt = check_stmt(*s.then_stmt);
    if (s.else_stmt)
      out->else_stmt = check_stmt(*s.else_stmt);
    return out;
  }

  case ast::Stmt::Kind::While: {
    auto out = mk(TypedStmt::Kind::While);
    out->expr = to_bool(check_expr(*s.expr), s.loc);
    if (!out->expr)
      return mk(TypedStmt::Kind::Empty);
    ++ctx_.loop_depth;
    out->body = check_stmt(*s.body);
    --ctx_.loop_depth;
    return out;
  }

  case ast::Stmt::Kind::For: {
    auto out = mk(TypedStmt::Kind::For);
    ctx_.scopes.emplace_back();
    if (s.init_stmt)
      out->init_stmt = check_stmt(*s.init_stmt);
    if (s.expr) {
      out->expr = to_bool(check_expr(*s.expr), s.loc);
    } else {
      auto t = std::make_unique<TypedExpr>();
      t->kind = TypedExpr::Kind::BoolConst;
      t->type = types().basic(TypeKind::Bool);
      t->ival = 1;
      t->loc = s.loc;
      out->expr = std::move(t);
    }
    if (s.step)
      out->step = check_expr(*s.step);
    ++ctx_.loop_depth;
    out->body = check_stmt(*s.body);
    --ctx_.loop_depth;
    ctx_.scopes.pop_back();
    return out;
  }

  case ast::Stmt::Kind::Switch: {
    auto out = mk(TypedStmt::Kind::Switch);
    out->expr = check_expr(*s.expr);
    if (!out->expr)
      return mk(TypedStmt::Kind::Empty);
    TypeRef st = types().strip_quals(out->expr->type);
    if (!types().is_integer(st)) {
      error(s.loc, "switch condition must be an integer");
      return mk(TypedStmt::Kind::Empty);
    }
    ++ctx_.switch_depth;
    std::set<int64_t> seen;
    bool has_default = false;
    for (const auto &c : s.cases) {
      TypedStmt::Case tc;
      tc.is_default = c.is_default;
      if (c.is_default) {
        if (has_default)
          error(c.loc, "multiple default labels");
        has_default = true;
      } else {
        int64_t v = 0;
        if (!c.value || !eval_const_int(*c.value, v)) {
          error(c.loc, "case label must be an integer constant");
          continue;
        }
        if (!seen.insert(v).second)
          error(c.loc, "duplicate case value " + std::to_string(v));
        tc.value = v;
      }
      ctx_.scopes.emplace_back();
      for (const auto &cs : c.stmts) {
        TypedStmtPtr t = check_stmt(*cs);
        if (t)
          tc.stmts.push_back(std::move(t));
      }
      ctx_.scopes.pop_back();
      out->cases.push_back(std::move(tc));
    }
    --ctx_.switch_depth;
    return out;
  }

  case ast::Stmt::Kind::Return: {
    auto out = mk(TypedStmt::Kind::Return);
    const bool is_void =
        types()[types().strip_quals(ctx_.ret)].kind == TypeKind::Void;
    if (s.expr) {
      if (is_void) {
        error(s.loc, "return with a value in a void function");
        return mk(TypedStmt::Kind::Empty);
      }
      TypedExprPtr v = check_expr(*s.expr);
      if (!v)
        return mk(TypedStmt::Kind::Empty);
      if (ctx_.ret_ref) {
        if (!v->lvalue) {
          error(s.loc, "returning a reference to an rvalue");
          return mk(TypedStmt::Kind::Empty);
        }
        TypedExprPtr addr = make_addrof(std::move(v), s.loc);
        out->expr = coerce(std::move(addr), ctx_.ret, s.loc);
      } else {
        out->expr = coerce(std::move(v), types().strip_quals(ctx_.ret),
                           s.loc);
      }
    } else if (!is_void) {
      error(s.loc, "return without a value in a non-void function");
      return mk(TypedStmt::Kind::Empty);
    }
    return out;
  }

  case ast::Stmt::Kind::Break:
    if (ctx_.loop_depth == 0 && ctx_.switch_depth == 0) {
      error(s.loc, "break outside a loop or switch");
      return mk(TypedStmt::Kind::Empty);
    }
    return mk(TypedStmt::Kind::Break);
  case ast::Stmt::Kind::Continue:
    if (ctx_.loop_depth == 0) {
      error(s.loc, "continue outside a loop");
      return mk(TypedStmt::Kind::Empty);
    }
    return mk(TypedStmt::Kind::Continue);

  case ast::Stmt::Kind::Try: {
    auto out = mk(TypedStmt::Kind::Try);
    out->body = check_stmt(*s.body);
    for (const auto &h : s.handlers) {
      TypedCatch tc;
      tc.loc = h.loc;
      tc.is_ellipsis = h.is_ellipsis;
      ctx_.scopes.emplace_back();
      if (!h.is_ellipsis) {
        TypeRef t = resolve_type(*h.type);
        if (t == kNoType) {
          ctx_.scopes.pop_back();
          continue;
        }
        if (types()[t].kind == TypeKind::Reference) {
          tc.by_ref = true;
          t = types()[t].inner;
        }
        tc.type = types().strip_quals(t);
        if (!h.var_name.empty()) {
          tc.var = declare_local(h.var_name);
          ctx_.scopes.back()[h.var_name] =
              LocalVar{tc.var, tc.type, false};
        }
      }
      tc.body = check_stmt(*h.body);
      ctx_.scopes.pop_back();
      out->handlers.push_back(std::move(tc));
    }
    if (out->handlers.empty() && !s.handlers.empty())
      return mk(TypedStmt::Kind::Empty);
    return out;
  }

  case ast::Stmt::Kind::Throw: {
    auto out = mk(TypedStmt::Kind::Throw);
    if (s.expr) {
      out->expr = check_expr(*s.expr);
      if (!out->expr)
        return mk(TypedStmt::Kind::Empty);
      if (out->expr->kind == TypedExpr::Kind::Nondet &&
          out->expr->type == kNoType)
        adopt_nondet(*out->expr, types().basic(TypeKind::Int));
    }
    return out;
  }

  case ast::Stmt::Kind::Delete: {
    TypedExprPtr p = check_expr(*s.expr);
    if (!p)
      return mk(TypedStmt::Kind::Empty);
    TypeRef bare = types().strip_quals(p->type);
    if (types()[bare].kind != TypeKind::Pointer) {
      error(s.loc, "delete on non-pointer type '" + tname(p->type) + "'");
      return mk(TypedStmt::Kind::Empty);
    }
    TypeRef pointee = types().strip_quals(types()[bare].inner);
    auto blk = mk(TypedStmt::Kind::Block);
    if (types()[pointee].kind == TypeKind::Class)
      emit_dtor_calls(blk->stmts, *p, types()[pointee].class_id, true, s.loc);
    auto del = mk(TypedStmt::Kind::Delete);
    del->expr = std::move(p);
    blk->stmts.push_back(std::move(del));
    return blk;
  }

  case ast::Stmt::Kind::Label: {
    if (s.label == "__ESBMC_HIDE") {
      if (ctx_.fn_id != 0xffffffffu)
        prog_.functions[ctx_.fn_id].hidden = true;
      return mk(TypedStmt::Kind::Empty);
    }
    error(s.loc, "labels are not supported");
    return mk(TypedStmt::Kind::Empty);
  }

  case ast::Stmt::Kind::Empty:
    return mk(TypedStmt::Kind::Empty);
  }
  return mk(TypedStmt::Kind::Empty);
}

// ------------------------------------------------------------ body typing

void Checker::type_function_body(const FnWork &w) {
  const bool is_ctor = prog_.functions[w.fn_id].is_ctor;
  const bool is_dtor = prog_.functions[w.fn_id].is_dtor;
  const SourceLoc loc = prog_.functions[w.fn_id].loc;
  const std::string symbol = prog_.functions[w.fn_id].symbol;

  ctx_ = FnContext{};
  ctx_.fn_id = w.fn_id;
  ctx_.class_id = w.class_id != 0xffffffffu
                      ? w.class_id
                      : prog_.functions[w.fn_id].class_id;
  ctx_.subst = w.subst;
  ctx_.ret = prog_.functions[w.fn_id].ret;
  ctx_.ret_ref = prog_.functions[w.fn_id].ret_ref;
  ctx_.scopes.emplace_back();
  {
    const std::vector<ParamInfo> params = prog_.functions[w.fn_id].params;
    for (const auto &p : params) {
      if (p.name == "this")
        continue;
      ctx_.name_uses[p.name] = 1;
      ctx_.scopes.back()[p.name] = LocalVar{p.name, p.type, p.is_ref};
    }
  }

  std::vector<TypedStmtPtr> out;
  if (is_ctor)
    build_ctor_body(w, out);
  if (is_dtor)
    emit_ghost_assigns(ctx_.class_id, out, loc);

  if (w.decl && w.decl->body) {
    TypedStmtPtr body = check_stmt(*w.decl->body);
    if (body)
      out.push_back(std::move(body));
  }

  if (is_dtor)
    build_dtor_body_tail(w, out);

  if (symbol == "main") {
    // Falling off the end of main returns 0; skip when the body already
    // ends in a return.
    const TypedStmt *last = out.empty() ? nullptr : out.back().get();
    while (last && last->kind == TypedStmt::Kind::Block && !last->stmts.empty())
      last = last->stmts.back().get();
    if (!last || last->kind != TypedStmt::Kind::Return) {
      auto ret = std::make_unique<TypedStmt>();
      ret->kind = TypedStmt::Kind::Return;
      ret->loc = loc;
      ret->expr = make_int(0, types().basic(TypeKind::Int), loc);
      out.push_back(std::move(ret));
    }
  }

  auto block = std::make_unique<TypedStmt>();
  block->kind = TypedStmt::Kind::Block;
  block->loc = loc;
  block->stmts = std::move(out);
  prog_.functions[w.fn_id].body = std::move(block);
  ctx_ = FnContext{};
}

void Checker::process_worklist() {
  size_t guard = 0;
  while (!worklist_.empty()) {
    FnWork w = std::move(worklist_.front());
    worklist_.pop_front();
    type_function_body(w);
    if (++guard > 100000) {
      diags_.error(SourceLoc{}, "function body worklist did not terminate");
      return;
    }
  }
}

} // namespace minibmc
