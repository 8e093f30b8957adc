// Lowering from the typed program to the goto program: structured control
// flow becomes IF/GOTO chains, expressions lose their side effects (calls,
// allocations, assignments and increments are hoisted onto instructions of
// their own), try/catch becomes paired CATCH instructions with handler maps,
// and scope exits gain destructor calls and DEAD markers.

#include "minibmc/goto_program.hpp"

#include <cassert>

namespace minibmc {

namespace {

using EK = TypedExpr::Kind;
using IK = GotoInstr::Kind;

// ------------------------------------------------------------- predicates

bool intrinsic_is_pure(IntrinsicKind k) {
  switch (k) {
  case IntrinsicKind::Size:
  case IntrinsicKind::Elem:
  case IntrinsicKind::KeyAt:
  case IntrinsicKind::SeqSearch:
  case IntrinsicKind::SeqSearchRange:
  case IntrinsicKind::AssocSearch:
  case IntrinsicKind::Count:
  case IntrinsicKind::StrEq:
    return true;
  default:
    return false;
  }
}

bool is_assign_op(ast::BinaryOp op) {
  switch (op) {
  case ast::BinaryOp::Assign:
  case ast::BinaryOp::AddAssign:
  case ast::BinaryOp::SubAssign:
  case ast::BinaryOp::MulAssign:
  case ast::BinaryOp::DivAssign:
  case ast::BinaryOp::RemAssign:
  case ast::BinaryOp::AndAssign:
  case ast::BinaryOp::OrAssign:
  case ast::BinaryOp::XorAssign:
    return true;
  default:
    return false;
  }
}

bool is_incdec(ast::UnaryOp op) {
  switch (op) {
  case ast::UnaryOp::PreInc:
  case ast::UnaryOp::PreDec:
  case ast::UnaryOp::PostInc:
  case ast::UnaryOp::PostDec:
    return true;
  default:
    return false;
  }
}

// Whether evaluating `e` can change state or emit instructions.
bool has_effects(const TypedExpr &e) {
  switch (e.kind) {
  case EK::Call:
  case EK::VirtualCall:
  case EK::New:
    return true;
  case EK::IntrinsicCall:
    if (!intrinsic_is_pure(e.intr))
      return true;
    break;
  case EK::Unary:
    if (is_incdec(e.uop))
      return true;
    break;
  case EK::Binary:
    if (is_assign_op(e.bop))
      return true;
    break;
  default:
    break;
  }
  for (const auto &a : e.args)
    if (has_effects(*a))
      return true;
  return false;
}

// Whether `e` evaluates to the same value every time (so it may be cloned
// into both the read and the write side of a compound assignment).
bool contains_nondet(const TypedExpr &e) {
  if (e.kind == EK::Nondet)
    return true;
  for (const auto &a : e.args)
    if (contains_nondet(*a))
      return true;
  return false;
}

bool is_place(const TypedExpr &e) {
  switch (e.kind) {
  case EK::VarRef:
  case EK::GlobalRef:
  case EK::Deref:
    return true;
  case EK::FieldRef:
  case EK::IndexRef:
    return is_place(*e.args[0]);
  case EK::IntrinsicCall:
    return e.intr == IntrinsicKind::Elem;
  default:
    return false;
  }
}

// --------------------------------------------------------------- lowering

struct LocalObj {
  std::string name;
  TypeRef type = kNoType;
  bool run_dtor = false; // class object owned by this scope
  SourceLoc loc;
};

struct LoopCtx {
  bool is_switch = false;
  size_t scope_depth = 0; // scopes outside the construct
  size_t continue_target = kNoTarget;
  std::vector<size_t> break_patches;
  std::vector<size_t> continue_patches;
};

class FnLower {
public:
  FnLower(TypedProgram &prog, std::string symbol, const FunctionInfo *fn)
      : prog_(prog), symbol_(std::move(symbol)), fn_(fn) {}

  GotoFunction run() {
    hidden_ = fn_ && fn_->hidden;
    scopes_.emplace_back();
    if (fn_ && fn_->has_throw_spec) {
      GotoInstr &in = emit(IK::ThrowDecl, fn_->loc);
      for (TypeRef t : fn_->throw_types)
        in.allowed.push_back(handler_desc(t));
    }
    if (fn_ && fn_->body)
      lower_stmt(*fn_->body);
    cleanup_scopes(0);
    scopes_.clear();
    emit(IK::EndFunction, fn_ ? fn_->loc : SourceLoc{});
    GotoFunction out;
    out.symbol = symbol_;
    out.body = std::move(out_);
    return out;
  }

  GotoFunction run_global_init(const std::vector<GlobalInfo> &globals) {
    scopes_.emplace_back();
    for (const GlobalInfo &g : globals) {
      if (!g.init)
        continue;
      auto lhs = std::make_unique<TypedExpr>();
      lhs->kind = EK::GlobalRef;
      lhs->var = g.name;
      lhs->type = g.type;
      lhs->lvalue = true;
      lhs->loc = g.loc;
      emit_assign(std::move(lhs), purify(clone_typed_expr(*g.init), true),
                  g.loc);
    }
    scopes_.clear();
    emit(IK::EndFunction, SourceLoc{});
    GotoFunction out;
    out.symbol = symbol_;
    out.body = std::move(out_);
    return out;
  }

private:
  TypedProgram &prog_;
  std::string symbol_;
  const FunctionInfo *fn_;
  std::vector<GotoInstr> out_;
  std::vector<std::vector<LocalObj>> scopes_;
  std::vector<LoopCtx> loops_;
  uint32_t tmp_n_ = 0;
  bool hidden_ = false;

  TypeTable &types() { return prog_.types; }

  // ------------------------------------------------------------- emission

  GotoInstr &emit(IK k, SourceLoc loc) {
    GotoInstr in;
    in.kind = k;
    in.loc = loc;
    in.hidden = hidden_;
    out_.push_back(std::move(in));
    return out_.back();
  }

  size_t here() const { return out_.size(); }

  void emit_assign(TypedExprPtr lhs, TypedExprPtr rhs, SourceLoc loc) {
    GotoInstr &in = emit(IK::Assign, loc);
    in.lhs = std::move(lhs);
    in.expr = std::move(rhs);
  }

  size_t emit_goto(SourceLoc loc, size_t target = kNoTarget) {
    GotoInstr &in = emit(IK::Goto, loc);
    in.target = target;
    return out_.size() - 1;
  }

  size_t emit_if(TypedExprPtr cond, SourceLoc loc,
                 size_t target = kNoTarget) {
    GotoInstr &in = emit(IK::If, loc);
    in.expr = std::move(cond);
    in.target = target;
    return out_.size() - 1;
  }

  void patch(size_t idx, size_t target) { out_[idx].target = target; }
  void patch_all(const std::vector<size_t> &idxs, size_t target) {
    for (size_t i : idxs)
      out_[i].target = target;
  }

  // ------------------------------------------------------- node builders

  TypedExprPtr mk_var(const std::string &name, TypeRef t, SourceLoc loc) {
    auto e = std::make_unique<TypedExpr>();
    e->kind = EK::VarRef;
    e->var = name;
    e->type = t;
    e->lvalue = true;
    e->loc = loc;
    return e;
  }

  TypedExprPtr mk_int(uint64_t v, TypeRef t, SourceLoc loc) {
    auto e = std::make_unique<TypedExpr>();
    e->kind = EK::IntConst;
    e->ival = v;
    e->type = t;
    e->loc = loc;
    return e;
  }

  TypedExprPtr mk_float(double v, TypeRef t, SourceLoc loc) {
    auto e = std::make_unique<TypedExpr>();
    e->kind = EK::FloatConst;
    e->fval = v;
    e->type = t;
    e->loc = loc;
    return e;
  }

  TypedExprPtr mk_not(TypedExprPtr a) {
    auto e = std::make_unique<TypedExpr>();
    e->kind = EK::Unary;
    e->uop = ast::UnaryOp::Not;
    e->type = types().basic(TypeKind::Bool);
    e->loc = a->loc;
    e->args.push_back(std::move(a));
    return e;
  }

  TypedExprPtr mk_binary(ast::BinaryOp op, TypedExprPtr a, TypedExprPtr b,
                         TypeRef t) {
    auto e = std::make_unique<TypedExpr>();
    e->kind = EK::Binary;
    e->bop = op;
    e->type = t;
    e->loc = a->loc;
    e->args.push_back(std::move(a));
    e->args.push_back(std::move(b));
    return e;
  }

  TypedExprPtr mk_addrof(TypedExprPtr a) {
    auto e = std::make_unique<TypedExpr>();
    e->kind = EK::AddrOf;
    e->type = types().pointer_to(types().strip_quals(a->type));
    e->loc = a->loc;
    e->args.push_back(std::move(a));
    return e;
  }

  TypedExprPtr mk_vbase_cast(TypedExprPtr ptr, uint32_t vbase) {
    auto e = std::make_unique<TypedExpr>();
    e->kind = EK::Cast;
    e->ck = CastKind::PtrUp;
    e->cast_path = "virtual::" + prog_.classes[vbase].name;
    e->cast_abs = true;
    e->type = types().pointer_to(types().class_type(vbase));
    e->loc = ptr->loc;
    e->args.push_back(std::move(ptr));
    return e;
  }

  TypedExprPtr mk_call(uint32_t fn, std::vector<TypedExprPtr> args,
                       SourceLoc loc) {
    auto e = std::make_unique<TypedExpr>();
    e->kind = EK::Call;
    e->fn_id = fn;
    e->type = prog_.functions[fn].ret;
    e->loc = loc;
    e->args = std::move(args);
    return e;
  }

  // --------------------------------------------------------- temporaries

  std::string fresh_tmp(TypeRef t, SourceLoc loc) {
    std::string name = "$t" + std::to_string(++tmp_n_);
    GotoInstr &in = emit(IK::Decl, loc);
    in.var = name;
    in.type = t;
    return name;
  }

  // Hoists `v` into a fresh temporary and returns a reference to it.
  TypedExprPtr to_temp(TypedExprPtr v) {
    TypeRef t = types().strip_quals(v->type);
    SourceLoc loc = v->loc;
    std::string name = fresh_tmp(t, loc);
    emit_assign(mk_var(name, t, loc), std::move(v), loc);
    return mk_var(name, t, loc);
  }

  TypedExprPtr hoist_if_unstable(TypedExprPtr e) {
    if (!contains_nondet(*e))
      return e;
    return to_temp(std::move(e));
  }

  // Makes a purified place safe to evaluate twice: any sub-expression whose
  // value could differ between the read and the write is pinned first.
  TypedExprPtr stabilize_place(TypedExprPtr p) {
    switch (p->kind) {
    case EK::FieldRef:
      p->args[0] = stabilize_place(std::move(p->args[0]));
      return p;
    case EK::IndexRef:
      p->args[0] = stabilize_place(std::move(p->args[0]));
      p->args[1] = hoist_if_unstable(std::move(p->args[1]));
      return p;
    case EK::Deref:
      p->args[0] = hoist_if_unstable(std::move(p->args[0]));
      return p;
    case EK::IntrinsicCall: // Elem
      for (auto &a : p->args)
        a = hoist_if_unstable(std::move(a));
      return p;
    default:
      return p;
    }
  }

  // ------------------------------------------------------- expressions

  // Rewrites `e` into a side-effect-free expression, emitting instructions
  // for everything hoisted.  `want` is false when the value is discarded.
  TypedExprPtr purify(TypedExprPtr e, bool want) {
    switch (e->kind) {
    case EK::IntConst:
    case EK::FloatConst:
    case EK::BoolConst:
    case EK::StringConst:
    case EK::VarRef:
    case EK::GlobalRef:
    case EK::FnConst:
    case EK::Nondet:
    case EK::This:
      return e;

    case EK::FieldRef:
    case EK::IndexRef:
    case EK::Deref:
    case EK::Cast:
      for (auto &a : e->args)
        a = purify(std::move(a), true);
      return e;

    case EK::AddrOf: {
      TypedExprPtr inner = purify(std::move(e->args[0]), true);
      if (!is_place(*inner))
        inner = to_temp(std::move(inner));
      e->args[0] = std::move(inner);
      return e;
    }

    case EK::Unary:
      if (is_incdec(e->uop))
        return lower_incdec(std::move(e), want);
      e->args[0] = purify(std::move(e->args[0]), true);
      return e;

    case EK::Binary:
      if (e->bop == ast::BinaryOp::Assign)
        return lower_assign(std::move(e), want);
      if (is_assign_op(e->bop))
        return lower_compound(std::move(e), want);
      if ((e->bop == ast::BinaryOp::LogAnd ||
           e->bop == ast::BinaryOp::LogOr) &&
          has_effects(*e->args[1]))
        return lower_shortcircuit(std::move(e));
      for (auto &a : e->args)
        a = purify(std::move(a), true);
      return e;

    case EK::Conditional:
      if (!has_effects(*e->args[1]) && !has_effects(*e->args[2])) {
        for (auto &a : e->args)
          a = purify(std::move(a), true);
        return e;
      }
      return lower_conditional(std::move(e));

    case EK::Call:
    case EK::VirtualCall:
      return lower_call(std::move(e), want);

    case EK::IntrinsicCall:
      return lower_intrinsic(std::move(e), want);

    case EK::New:
      return lower_new(std::move(e));
    }
    return e;
  }

  TypedExprPtr lower_assign(TypedExprPtr e, bool want) {
    TypedExprPtr lhs = stabilize_place(purify(std::move(e->args[0]), true));
    TypedExprPtr rhs = purify(std::move(e->args[1]), true);
    TypedExprPtr result;
    if (want)
      result = clone_typed_expr(*lhs);
    emit_assign(std::move(lhs), std::move(rhs), e->loc);
    return result;
  }

  static ast::BinaryOp strip_compound(ast::BinaryOp op) {
    switch (op) {
    case ast::BinaryOp::AddAssign: return ast::BinaryOp::Add;
    case ast::BinaryOp::SubAssign: return ast::BinaryOp::Sub;
    case ast::BinaryOp::MulAssign: return ast::BinaryOp::Mul;
    case ast::BinaryOp::DivAssign: return ast::BinaryOp::Div;
    case ast::BinaryOp::RemAssign: return ast::BinaryOp::Rem;
    case ast::BinaryOp::AndAssign: return ast::BinaryOp::BitAnd;
    case ast::BinaryOp::OrAssign: return ast::BinaryOp::BitOr;
    case ast::BinaryOp::XorAssign: return ast::BinaryOp::BitXor;
    default: return op;
    }
  }

  TypedExprPtr lower_compound(TypedExprPtr e, bool want) {
    TypedExprPtr place = stabilize_place(purify(std::move(e->args[0]), true));
    TypedExprPtr rhs = purify(std::move(e->args[1]), true);
    TypedExprPtr read = clone_typed_expr(*place);
    read->lvalue = false;
    TypedExprPtr value = mk_binary(strip_compound(e->bop), std::move(read),
                                   std::move(rhs), place->type);
    TypedExprPtr result;
    if (want)
      result = clone_typed_expr(*place);
    emit_assign(std::move(place), std::move(value), e->loc);
    return result;
  }

  TypedExprPtr lower_incdec(TypedExprPtr e, bool want) {
    bool post = e->uop == ast::UnaryOp::PostInc ||
                e->uop == ast::UnaryOp::PostDec;
    bool inc = e->uop == ast::UnaryOp::PreInc ||
               e->uop == ast::UnaryOp::PostInc;
    TypedExprPtr place = stabilize_place(purify(std::move(e->args[0]), true));
    TypeRef pt = types().strip_quals(place->type);
    TypedExprPtr one;
    if (types()[pt].kind == TypeKind::Pointer)
      one = mk_int(1, types().basic(TypeKind::Long), e->loc);
    else if (types().is_floating(pt))
      one = mk_float(1.0, pt, e->loc);
    else
      one = mk_int(1, pt, e->loc);
    TypedExprPtr result;
    if (want && post) {
      TypedExprPtr old = clone_typed_expr(*place);
      old->lvalue = false;
      result = to_temp(std::move(old));
    }
    TypedExprPtr read = clone_typed_expr(*place);
    read->lvalue = false;
    TypedExprPtr value =
        mk_binary(inc ? ast::BinaryOp::Add : ast::BinaryOp::Sub,
                  std::move(read), std::move(one), place->type);
    if (want && !post)
      result = clone_typed_expr(*place);
    emit_assign(std::move(place), std::move(value), e->loc);
    return result;
  }

  TypedExprPtr lower_shortcircuit(TypedExprPtr e) {
    bool is_and = e->bop == ast::BinaryOp::LogAnd;
    TypeRef bt = types().basic(TypeKind::Bool);
    SourceLoc loc = e->loc;
    TypedExprPtr lhs = purify(std::move(e->args[0]), true);
    std::string t = fresh_tmp(bt, loc);
    emit_assign(mk_var(t, bt, loc), std::move(lhs), loc);
    TypedExprPtr guard = mk_var(t, bt, loc);
    guard->lvalue = false;
    if (is_and)
      guard = mk_not(std::move(guard));
    size_t skip = emit_if(std::move(guard), loc);
    TypedExprPtr rhs = purify(std::move(e->args[1]), true);
    emit_assign(mk_var(t, bt, loc), std::move(rhs), loc);
    patch(skip, here());
    TypedExprPtr result = mk_var(t, bt, loc);
    result->lvalue = false;
    return result;
  }

  TypedExprPtr lower_conditional(TypedExprPtr e) {
    TypeRef t = types().strip_quals(e->type);
    SourceLoc loc = e->loc;
    std::string tmp = fresh_tmp(t, loc);
    TypedExprPtr cond = purify(std::move(e->args[0]), true);
    size_t to_else = emit_if(mk_not(std::move(cond)), loc);
    emit_assign(mk_var(tmp, t, loc), purify(std::move(e->args[1]), true),
                loc);
    size_t to_end = emit_goto(loc);
    patch(to_else, here());
    emit_assign(mk_var(tmp, t, loc), purify(std::move(e->args[2]), true),
                loc);
    patch(to_end, here());
    TypedExprPtr result = mk_var(tmp, t, loc);
    result->lvalue = false;
    return result;
  }

  TypedExprPtr lower_call(TypedExprPtr e, bool want) {
    for (auto &a : e->args)
      a = purify(std::move(a), true);
    TypeRef ret = types().strip_quals(e->type);
    SourceLoc loc = e->loc;
    bool has_value = types()[ret].kind != TypeKind::Void && want;
    std::string t;
    if (has_value)
      t = fresh_tmp(ret, loc);
    GotoInstr &in = emit(IK::FunctionCall, loc);
    if (has_value)
      in.lhs = mk_var(t, ret, loc);
    in.expr = std::move(e);
    if (!has_value)
      return nullptr;
    TypedExprPtr result = mk_var(t, ret, loc);
    result->lvalue = false;
    return result;
  }

  TypedExprPtr lower_intrinsic(TypedExprPtr e, bool want) {
    switch (e->intr) {
    case IntrinsicKind::Assert: {
      TypedExprPtr cond = purify(std::move(e->args[0]), true);
      GotoInstr &in = emit(IK::Assert, e->loc);
      in.expr = std::move(cond);
      in.msg = e->sval;
      return nullptr;
    }
    case IntrinsicKind::Assume: {
      TypedExprPtr cond = purify(std::move(e->args[0]), true);
      GotoInstr &in = emit(IK::Assume, e->loc);
      in.expr = std::move(cond);
      return nullptr;
    }
    default:
      break;
    }
    if (intrinsic_is_pure(e->intr)) {
      for (auto &a : e->args)
        a = purify(std::move(a), true);
      return e;
    }
    // State-changing intrinsic: becomes a call instruction.
    return lower_call(std::move(e), want);
  }

  // Materialises allocations.  Heap: t := NEW; vbase ctors; ctor(t, ...).
  // Temporary (ival == 1): a stack object constructed in place.
  TypedExprPtr lower_new(TypedExprPtr e) {
    SourceLoc loc = e->loc;
    uint32_t cid = e->class_id;
    uint32_t ctor = e->fn_id;
    bool is_class = cid != 0xffffffffu;
    std::vector<TypedExprPtr> ctor_args;
    for (auto &a : e->args)
      ctor_args.push_back(purify(std::move(a), true));
    e->args.clear();

    if (e->ival == 1) { // stack temporary, value is the object itself
      TypeRef ct = types().strip_quals(e->type);
      std::string name = fresh_tmp(ct, loc);
      register_local(name, ct, loc, /*run_dtor=*/true);
      emit_vbase_ctors(mk_addrof(mk_var(name, ct, loc)), cid, loc);
      std::vector<TypedExprPtr> args;
      args.push_back(mk_addrof(mk_var(name, ct, loc)));
      for (auto &a : ctor_args)
        args.push_back(std::move(a));
      GotoInstr &in = emit(IK::FunctionCall, loc);
      in.expr = mk_call(ctor, std::move(args), loc);
      return mk_var(name, ct, loc);
    }

    TypeRef pt = types().strip_quals(e->type); // pointer to the object
    std::string name = fresh_tmp(pt, loc);
    TypedExprPtr scalar_init;
    if (!is_class && !ctor_args.empty())
      scalar_init = std::move(ctor_args[0]);
    emit_assign(mk_var(name, pt, loc), std::move(e), loc);
    if (is_class) {
      emit_vbase_ctors(mk_var(name, pt, loc), cid, loc);
      std::vector<TypedExprPtr> args;
      args.push_back(mk_var(name, pt, loc));
      for (auto &a : ctor_args)
        args.push_back(std::move(a));
      GotoInstr &in = emit(IK::FunctionCall, loc);
      in.expr = mk_call(ctor, std::move(args), loc);
    } else if (scalar_init) {
      auto deref = std::make_unique<TypedExpr>();
      deref->kind = EK::Deref;
      deref->type = types()[pt].inner;
      deref->lvalue = true;
      deref->loc = loc;
      deref->args.push_back(mk_var(name, pt, loc));
      emit_assign(std::move(deref), std::move(scalar_init), loc);
    }
    return mk_var(name, pt, loc);
  }

  // -------------------------------------------------- scopes, destructors

  void register_local(const std::string &name, TypeRef t, SourceLoc loc,
                      bool run_dtor) {
    LocalObj o;
    o.name = name;
    o.type = t;
    TypeRef bare = types().strip_quals(t);
    o.run_dtor = run_dtor && types()[bare].kind == TypeKind::Class;
    o.loc = loc;
    scopes_.back().push_back(std::move(o));
  }

  void emit_object_dtors(const LocalObj &o) {
    TypeRef bare = types().strip_quals(o.type);
    uint32_t cid = types()[bare].class_id;
    const ClassInfo &ci = prog_.classes[cid];
    if (ci.dtor != 0xffffffffu) {
      std::vector<TypedExprPtr> args;
      args.push_back(mk_addrof(mk_var(o.name, bare, o.loc)));
      GotoInstr &in = emit(IK::FunctionCall, o.loc);
      in.expr = mk_call(ci.dtor, std::move(args), o.loc);
    }
    for (auto it = ci.vbases.rbegin(); it != ci.vbases.rend(); ++it) {
      uint32_t vd = prog_.classes[*it].dtor;
      if (vd == 0xffffffffu)
        continue;
      std::vector<TypedExprPtr> args;
      args.push_back(
          mk_vbase_cast(mk_addrof(mk_var(o.name, bare, o.loc)), *it));
      GotoInstr &in = emit(IK::FunctionCall, o.loc);
      in.expr = mk_call(vd, std::move(args), o.loc);
    }
  }

  // Destructors and DEAD markers for one scope, newest object first.
  void cleanup_scope(const std::vector<LocalObj> &objs) {
    for (auto it = objs.rbegin(); it != objs.rend(); ++it) {
      if (it->run_dtor)
        emit_object_dtors(*it);
      GotoInstr &in = emit(IK::Dead, it->loc);
      in.var = it->name;
    }
  }

  // Emits cleanup for every scope deeper than `depth` without popping them
  // (the instructions sit on an early-exit path; lowering continues in the
  // enclosing scopes).
  void cleanup_scopes(size_t depth) {
    for (size_t i = scopes_.size(); i-- > depth;)
      cleanup_scope(scopes_[i]);
  }

  // Whether leaving the scopes deeper than `depth` runs any destructor.
  bool any_pending_dtor(size_t depth) {
    for (size_t i = scopes_.size(); i-- > depth;) {
      for (const LocalObj &o : scopes_[i]) {
        if (!o.run_dtor)
          continue;
        TypeRef bare = types().strip_quals(o.type);
        const ClassInfo &ci = prog_.classes[types()[bare].class_id];
        if (ci.dtor != 0xffffffffu)
          return true;
        for (uint32_t v : ci.vbases)
          if (prog_.classes[v].dtor != 0xffffffffu)
            return true;
      }
    }
    return false;
  }

  // `obj_ptr` is a prototype pointer to the most-derived object; each
  // virtual base gets its default constructor exactly once, here at the
  // creation site.
  void emit_vbase_ctors(TypedExprPtr obj_ptr, uint32_t cid, SourceLoc loc) {
    for (uint32_t v : prog_.classes[cid].vbases) {
      uint32_t vctor = prog_.classes[v].default_ctor;
      if (vctor == 0xffffffffu)
        continue; // typecheck rejected such programs already
      std::vector<TypedExprPtr> args;
      args.push_back(mk_vbase_cast(clone_typed_expr(*obj_ptr), v));
      GotoInstr &in = emit(IK::FunctionCall, loc);
      in.expr = mk_call(vctor, std::move(args), loc);
    }
  }

  // ------------------------------------------------------------ statements

  void lower_stmt(const TypedStmt &s) {
    switch (s.kind) {
    case TypedStmt::Kind::Block: {
      scopes_.emplace_back();
      for (const auto &c : s.stmts)
        lower_stmt(*c);
      cleanup_scope(scopes_.back());
      scopes_.pop_back();
      return;
    }

    case TypedStmt::Kind::Decl: {
      for (const TypedVarDecl &vd : s.decls) {
        GotoInstr &in = emit(IK::Decl, vd.loc);
        in.var = vd.name;
        in.type = vd.type;
        register_local(vd.name, vd.type, vd.loc, /*run_dtor=*/true);
        if (vd.init)
          emit_assign(mk_var(vd.name, vd.type, vd.loc),
                      purify(clone_typed_expr(*vd.init), true), vd.loc);
      }
      for (const auto &c : s.stmts) // synthesized constructions
        lower_stmt(*c);
      return;
    }

    case TypedStmt::Kind::ExprStmt:
      purify(clone_typed_expr(*s.expr), false);
      return;

    case TypedStmt::Kind::If: {
      TypedExprPtr c = purify(clone_typed_expr(*s.expr), true);
      size_t to_else = emit_if(mk_not(std::move(c)), s.loc);
      if (s.then_stmt)
        lower_stmt(*s.then_stmt);
      if (s.else_stmt) {
        size_t to_end = emit_goto(s.loc);
        patch(to_else, here());
        lower_stmt(*s.else_stmt);
        patch(to_end, here());
      } else {
        patch(to_else, here());
      }
      return;
    }

    case TypedStmt::Kind::While: {
      size_t head = here();
      TypedExprPtr c = purify(clone_typed_expr(*s.expr), true);
      size_t exit_if = emit_if(mk_not(std::move(c)), s.loc);
      LoopCtx ctx;
      ctx.scope_depth = scopes_.size();
      ctx.continue_target = head;
      loops_.push_back(std::move(ctx));
      if (s.body)
        lower_stmt(*s.body);
      emit_goto(s.loc, head);
      LoopCtx done = std::move(loops_.back());
      loops_.pop_back();
      patch(exit_if, here());
      patch_all(done.break_patches, here());
      return;
    }

    case TypedStmt::Kind::For: {
      scopes_.emplace_back(); // the init declaration's scope
      if (s.init_stmt)
        lower_stmt(*s.init_stmt);
      size_t head = here();
      size_t exit_if = kNoTarget;
      if (s.expr) {
        TypedExprPtr c = purify(clone_typed_expr(*s.expr), true);
        exit_if = emit_if(mk_not(std::move(c)), s.loc);
      }
      LoopCtx ctx;
      ctx.scope_depth = scopes_.size();
      loops_.push_back(std::move(ctx));
      if (s.body)
        lower_stmt(*s.body);
      LoopCtx done = std::move(loops_.back());
      loops_.pop_back();
      patch_all(done.continue_patches, here());
      if (s.step)
        purify(clone_typed_expr(*s.step), false);
      emit_goto(s.loc, head);
      if (exit_if != kNoTarget)
        patch(exit_if, here());
      patch_all(done.break_patches, here());
      cleanup_scope(scopes_.back());
      scopes_.pop_back();
      return;
    }

    case TypedStmt::Kind::Switch: {
      TypedExprPtr sel = purify(clone_typed_expr(*s.expr), true);
      if (sel->kind != EK::VarRef && sel->kind != EK::GlobalRef &&
          sel->kind != EK::IntConst)
        sel = to_temp(std::move(sel));
      TypeRef st = types().strip_quals(sel->type);
      std::vector<size_t> case_ifs(s.cases.size(), kNoTarget);
      size_t default_idx = kNoTarget;
      for (size_t i = 0; i < s.cases.size(); ++i) {
        if (s.cases[i].is_default) {
          default_idx = i;
          continue;
        }
        TypedExprPtr lhs = clone_typed_expr(*sel);
        lhs->lvalue = false;
        TypedExprPtr cmp = mk_binary(
            ast::BinaryOp::Eq, std::move(lhs),
            mk_int(static_cast<uint64_t>(s.cases[i].value), st, s.loc),
            types().basic(TypeKind::Bool));
        case_ifs[i] = emit_if(std::move(cmp), s.loc);
      }
      size_t miss_goto = emit_goto(s.loc);
      LoopCtx ctx;
      ctx.is_switch = true;
      ctx.scope_depth = scopes_.size();
      loops_.push_back(std::move(ctx));
      scopes_.emplace_back();
      for (size_t i = 0; i < s.cases.size(); ++i) {
        size_t start = here();
        if (s.cases[i].is_default)
          patch(miss_goto, start);
        else
          patch(case_ifs[i], start);
        for (const auto &c : s.cases[i].stmts)
          lower_stmt(*c);
      }
      size_t end_target = here(); // exits flow through the scope cleanup
      cleanup_scope(scopes_.back());
      scopes_.pop_back();
      LoopCtx done = std::move(loops_.back());
      loops_.pop_back();
      if (default_idx == kNoTarget)
        patch(miss_goto, end_target);
      patch_all(done.break_patches, end_target);
      return;
    }

    case TypedStmt::Kind::Return: {
      TypedExprPtr v;
      if (s.expr) {
        v = purify(clone_typed_expr(*s.expr), true);
        // Destructors run after the value is computed; pin the value first
        // when any leave-scope destructor is about to execute.
        if (any_pending_dtor(0) && v->kind != EK::IntConst &&
            v->kind != EK::FloatConst && v->kind != EK::BoolConst)
          v = to_temp(std::move(v));
      }
      cleanup_scopes(0);
      GotoInstr &in = emit(IK::Return, s.loc);
      in.expr = std::move(v);
      return;
    }

    case TypedStmt::Kind::Break: {
      assert(!loops_.empty());
      LoopCtx &ctx = loops_.back();
      cleanup_scopes(ctx.scope_depth);
      ctx.break_patches.push_back(emit_goto(s.loc));
      return;
    }

    case TypedStmt::Kind::Continue: {
      for (size_t i = loops_.size(); i-- > 0;) {
        if (loops_[i].is_switch)
          continue;
        LoopCtx &ctx = loops_[i];
        cleanup_scopes(ctx.scope_depth);
        if (ctx.continue_target != kNoTarget)
          emit_goto(s.loc, ctx.continue_target);
        else
          ctx.continue_patches.push_back(emit_goto(s.loc));
        return;
      }
      assert(false && "continue outside loop");
      return;
    }

    case TypedStmt::Kind::Try:
      lower_try(s);
      return;

    case TypedStmt::Kind::Throw: {
      if (!s.expr) {
        GotoInstr &in = emit(IK::Throw, s.loc);
        in.ex.kind = ExDesc::Kind::Rethrow;
        return;
      }
      TypedExprPtr v = purify(clone_typed_expr(*s.expr), true);
      ExDesc d = throw_desc(v->type);
      GotoInstr &in = emit(IK::Throw, s.loc);
      in.ex = d;
      in.expr = std::move(v);
      return;
    }

    case TypedStmt::Kind::Delete: {
      TypedExprPtr p = purify(clone_typed_expr(*s.expr), true);
      auto freed = std::make_unique<TypedExpr>();
      freed->kind = EK::IntrinsicCall;
      freed->intr = IntrinsicKind::Free;
      freed->type = types().basic(TypeKind::Void);
      freed->loc = s.loc;
      freed->args.push_back(std::move(p));
      GotoInstr &in = emit(IK::FunctionCall, s.loc);
      in.expr = std::move(freed);
      return;
    }

    case TypedStmt::Kind::Empty:
      return;
    }
  }

  void lower_try(const TypedStmt &s) {
    emit(IK::Catch, s.loc);
    size_t begin_idx = here() - 1;
    for (const TypedCatch &h : s.handlers) {
      CatchEntry ce;
      ce.desc = h.is_ellipsis
                    ? ExDesc{ExDesc::Kind::Ellipsis, kNoType}
                    : handler_desc(h.type);
      ce.var = h.var;
      ce.by_ref = h.by_ref;
      out_[begin_idx].entries.push_back(std::move(ce));
    }
    if (s.body)
      lower_stmt(*s.body);
    GotoInstr &end = emit(IK::Catch, s.loc);
    end.catch_end = true;
    std::vector<size_t> joins;
    joins.push_back(emit_goto(s.loc));
    for (size_t i = 0; i < s.handlers.size(); ++i) {
      const TypedCatch &h = s.handlers[i];
      out_[begin_idx].entries[i].target = here();
      scopes_.emplace_back();
      if (!h.var.empty()) {
        GotoInstr &d = emit(IK::Decl, h.loc);
        d.var = h.var;
        d.type = h.type;
        // by-reference handlers alias the in-flight object: no destructor
        register_local(h.var, h.type, h.loc, /*run_dtor=*/!h.by_ref);
      }
      if (h.body)
        lower_stmt(*h.body);
      cleanup_scope(scopes_.back());
      scopes_.pop_back();
      joins.push_back(emit_goto(h.loc));
    }
    patch_all(joins, here());
  }

  // ------------------------------------------------------------ descriptors

  // Descriptor of a thrown value, with the array/function/pointer
  // adjustments applied.
  ExDesc throw_desc(TypeRef t) {
    TypeRef bare = types().strip_quals(t);
    const TypeNode &n = types()[bare];
    switch (n.kind) {
    case TypeKind::Array:
      return {ExDesc::Kind::Array, n.inner};
    case TypeKind::FunctionPtr:
      return {ExDesc::Kind::Function, bare};
    case TypeKind::Pointer:
      if (types()[types().strip_quals(n.inner)].kind == TypeKind::Void)
        return {ExDesc::Kind::VoidPtr, kNoType};
      return {ExDesc::Kind::Pointer, n.inner};
    default:
      return {ExDesc::Kind::Plain, bare};
    }
  }

  // Descriptor of a handler (or throw-specification entry).
  ExDesc handler_desc(TypeRef t) {
    TypeRef bare = types().strip_quals(t);
    const TypeNode &n = types()[bare];
    switch (n.kind) {
    case TypeKind::Array: // handlers of array type adjust to pointer
      return {ExDesc::Kind::Pointer, n.inner};
    case TypeKind::FunctionPtr:
      return {ExDesc::Kind::Function, bare};
    case TypeKind::Pointer:
      if (types()[types().strip_quals(n.inner)].kind == TypeKind::Void)
        return {ExDesc::Kind::VoidPtr, kNoType};
      return {ExDesc::Kind::Pointer, n.inner};
    default:
      return {ExDesc::Kind::Plain, bare};
    }
  }
};

} // namespace

GotoProgram lower_to_goto(TypedProgram &prog) {
  GotoProgram out;
  for (uint32_t i = 0; i < prog.functions.size(); ++i) {
    const FunctionInfo &fn = prog.functions[i];
    if (!fn.defined || !fn.body)
      continue;
    FnLower lw(prog, fn.symbol, &fn);
    out.functions[fn.symbol] = lw.run();
  }
  if (prog.main_fn != 0xffffffffu)
    out.main_symbol = prog.functions[prog.main_fn].symbol;
  bool any_init = false;
  for (const GlobalInfo &g : prog.globals)
    if (g.init)
      any_init = true;
  if (any_init) {
    FnLower lw(prog, "$globals_init", nullptr);
    out.functions["$globals_init"] = lw.run_global_init(prog.globals);
    out.init_symbol = "$globals_init";
  }
  return out;
}

} // namespace minibmc
