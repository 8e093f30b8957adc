#include "check.hpp"

#include <algorithm>
#include <set>
#include <sstream>

// Class registration and layout.  A class is registered shell-first (name and
// type visible immediately, so recursive template references resolve), then
// its bases, fields and method signatures, and finally the flattened layout:
// every inheritance subobject with its path, every field with its unique key,
// the virtual slot table and the synthesized vtable$ ghost fields.

namespace minibmc {

namespace {

std::string path_join(const std::string &prefix, const std::string &rest) {
  if (prefix.empty())
    return rest;
  if (rest.empty())
    return prefix;
  return prefix + "::" + rest;
}

ast::Access fold_access(ast::Access a, ast::Access b) {
  return static_cast<ast::Access>(
      std::max(static_cast<int>(a), static_cast<int>(b)));
}

bool is_virtual_section(const std::string &path) {
  return path.rfind("virtual::", 0) == 0;
}

// Splits a ghost field name "vtable$<method>$<sig>" into its parts.
bool split_ghost_name(const std::string &name, std::string &method,
                      uint32_t &sig) {
  if (name.rfind("vtable$", 0) != 0)
    return false;
  size_t last = name.rfind('$');
  if (last == 6)
    return false;
  method = name.substr(7, last - 7);
  sig = static_cast<uint32_t>(std::stoul(name.substr(last + 1)));
  return true;
}

// Recursively searches a statement tree for a call to one of the container
// registry intrinsics; used to classify built-in container models.
bool expr_calls(const ast::Expr *e, const char *name);
bool stmt_calls(const ast::Stmt *s, const char *name) {
  if (!s)
    return false;
  if (expr_calls(s->expr.get(), name) || expr_calls(s->step.get(), name))
    return true;
  for (const auto &c : s->stmts)
    if (stmt_calls(c.get(), name))
      return true;
  return stmt_calls(s->then_stmt.get(), name) ||
         stmt_calls(s->else_stmt.get(), name) ||
         stmt_calls(s->body.get(), name) || stmt_calls(s->init_stmt.get(), name);
}
bool expr_calls(const ast::Expr *e, const char *name) {
  if (!e)
    return false;
  if (e->kind == ast::Expr::Kind::Ident && e->parts.size() == 1 &&
      e->parts[0] == name)
    return true;
  for (const auto &a : e->args)
    if (expr_calls(a.get(), name))
      return true;
  return expr_calls(e->lhs.get(), name) || expr_calls(e->rhs.get(), name) ||
         expr_calls(e->cond.get(), name) || expr_calls(e->callee.get(), name) ||
         expr_calls(e->base.get(), name) || expr_calls(e->index.get(), name);
}

} // namespace

uint32_t Checker::find_class(const std::string &display) const {
  auto it = class_index_.find(display);
  return it == class_index_.end() ? 0xffffffffu : it->second;
}

uint32_t Checker::register_function_shell(const ast::FunctionDecl &fd,
                                          const std::string &symbol_base,
                                          uint32_t class_id,
                                          const SubstMap &subst) {
  CtxScope cs(*this, subst);
  ctx_.class_id = class_id;

  FunctionInfo fi;
  fi.display = symbol_base;
  fi.symbol = symbol_base;
  for (int n = 2; fn_index_.count(fi.symbol); ++n)
    fi.symbol = symbol_base + "#" + std::to_string(n);
  fi.loc = fd.loc;
  fi.class_id = class_id;
  fi.is_method = class_id != 0xffffffffu;
  fi.is_ctor = fd.is_ctor;
  fi.is_dtor = fd.is_dtor;
  fi.is_virtual = fd.is_virtual;
  fi.access = fd.access;
  fi.has_throw_spec = fd.has_throw_spec;

  if (fd.return_type) {
    TypeRef r = resolve_type(*fd.return_type);
    if (r == kNoType)
      r = types().basic(TypeKind::Int);
    if (types()[r].kind == TypeKind::Reference) {
      fi.ret = types().pointer_to(types()[r].inner);
      fi.ret_ref = true;
    } else {
      fi.ret = r;
    }
  } else {
    fi.ret = types().basic(TypeKind::Void);
  }

  if (fi.is_method)
    fi.params.push_back(ParamInfo{
        "this", types().pointer_to(types().class_type(class_id)), false,
        fd.loc});
  for (size_t i = 0; i < fd.params.size(); ++i) {
    const ast::ParamDecl &p = fd.params[i];
    TypeRef t = resolve_type(*p.type);
    if (t == kNoType)
      t = types().basic(TypeKind::Int);
    ParamInfo pi;
    pi.name = p.name.empty() ? "__p" + std::to_string(i) : p.name;
    pi.loc = p.loc;
    if (types()[t].kind == TypeKind::Reference) {
      pi.type = types().pointer_to(types()[t].inner);
      pi.is_ref = true;
    } else if (types()[t].kind == TypeKind::Array) {
      pi.type = types().pointer_to(types()[t].inner);
    } else {
      pi.type = t;
    }
    for (const auto &prev : fi.params)
      if (prev.name == pi.name)
        error(p.loc, "duplicate parameter name '" + pi.name + "'");
    fi.params.push_back(std::move(pi));
  }

  for (const auto &tt : fd.throw_types) {
    TypeRef t = resolve_type(*tt);
    if (t == kNoType)
      continue;
    if (types()[t].kind == TypeKind::Reference)
      t = types()[t].inner;
    fi.throw_types.push_back(types().strip_quals(t));
  }

  uint32_t id = static_cast<uint32_t>(prog_.functions.size());
  fn_index_[fi.symbol] = id;
  prog_.functions.push_back(std::move(fi));
  return id;
}

// Creates a FunctionInfo with no AST behind it (implicit constructors and
// destructors); the body is synthesized when the worklist reaches it.
uint32_t Checker::synth_special(uint32_t cid, const std::string &name,
                                bool is_ctor, SourceLoc loc) {
  FunctionInfo fi;
  std::string base = prog_.classes[cid].name + "::" + name;
  fi.display = base;
  fi.symbol = base;
  for (int n = 2; fn_index_.count(fi.symbol); ++n)
    fi.symbol = base + "#" + std::to_string(n);
  fi.ret = types().basic(TypeKind::Void);
  fi.params.push_back(ParamInfo{
      "this", types().pointer_to(types().class_type(cid)), false, loc});
  fi.defined = true;
  fi.is_method = true;
  fi.is_ctor = is_ctor;
  fi.is_dtor = !is_ctor;
  fi.class_id = cid;
  fi.loc = loc;
  uint32_t id = static_cast<uint32_t>(prog_.functions.size());
  fn_index_[fi.symbol] = id;
  prog_.functions.push_back(std::move(fi));
  worklist_.push_back(FnWork{id, nullptr, cid, class_subst_[cid]});
  return id;
}

uint32_t Checker::register_class(const ast::ClassDecl &decl,
                                 std::string display_name,
                                 std::string template_name,
                                 std::vector<TypeRef> targs,
                                 const SubstMap &subst,
                                 const std::string &cache_key) {
  uint32_t cid = static_cast<uint32_t>(prog_.classes.size());
  {
    ClassInfo ci;
    ci.name = display_name;
    ci.is_model = is_model_loc(decl.loc);
    ci.defined = true;
    ci.template_name = std::move(template_name);
    ci.template_args = std::move(targs);
    ci.friends = decl.friends;
    ci.loc = decl.loc;
    prog_.classes.push_back(std::move(ci));
  }
  class_index_[display_name] = cid;
  if (!cache_key.empty())
    inst_cache_[cache_key] = cid; // before content: recursive uses hit here
  class_decls_[cid] = &decl;
  class_subst_[cid] = subst;
  types().class_type(cid);

  CtxScope cs(*this, subst);
  ctx_.class_id = cid;

  for (const auto &td : decl.typedefs) {
    TypeRef t = resolve_type(*td.type);
    if (t != kNoType)
      prog_.classes[cid].typedefs[td.name] = t;
  }

  // Bases.  Every base must be a complete class by the time it is used.
  for (const auto &bs : decl.bases) {
    uint32_t bcid = 0xffffffffu;
    if (bs.targs.empty()) {
      auto sit = ctx_.subst.find(bs.name);
      if (sit != ctx_.subst.end()) {
        TypeRef t = types().strip_quals(sit->second);
        if (types()[t].kind == TypeKind::Class)
          bcid = types()[t].class_id;
        else
          error(decl.loc, "base '" + bs.name + "' is not a class type");
      } else {
        bcid = find_class(bs.name);
        if (bcid == 0xffffffffu) {
          if (find_template(bs.name))
            error(decl.loc,
                  "missing template arguments for base '" + bs.name + "'");
          else
            error(decl.loc, "unknown base class '" + bs.name + "'");
        }
      }
    } else {
      std::vector<TypeRef> bargs;
      bool ok = true;
      for (const auto &a : bs.targs) {
        TypeRef t = resolve_type(*a);
        if (t == kNoType)
          ok = false;
        bargs.push_back(t);
      }
      if (ok)
        bcid = instantiate_class(bs.name, bargs, decl.loc);
    }
    if (bcid == 0xffffffffu)
      continue;
    if (!prog_.classes[bcid].layout_done) {
      error(decl.loc,
            "base class '" + prog_.classes[bcid].name + "' is incomplete");
      continue;
    }
    prog_.classes[cid].bases.push_back(
        BaseEdge{bcid, bs.is_virtual, bs.access});
  }

  // Container classification: built-in models register their storage through
  // one of the registry-init intrinsics in a constructor.
  if (prog_.classes[cid].is_model) {
    ContainerKind ck = ContainerKind::None;
    for (const auto &m : decl.methods) {
      if (!m->is_ctor || !m->body)
        continue;
      if (stmt_calls(m->body.get(), "__ESBMC_seq_init"))
        ck = display_name == "string" ? ContainerKind::Str : ContainerKind::Seq;
      else if (stmt_calls(m->body.get(), "__ESBMC_assoc_multi_init"))
        ck = ContainerKind::AssocMulti;
      else if (stmt_calls(m->body.get(), "__ESBMC_assoc_init"))
        ck = ContainerKind::Assoc;
      if (ck != ContainerKind::None)
        break;
    }
    if (ck != ContainerKind::None) {
      ClassInfo &ci = prog_.classes[cid];
      ci.ckind = ck;
      if (ck == ContainerKind::Str) {
        ci.elem_type = types().basic(TypeKind::Char);
        ci.key_type = types().basic(TypeKind::ULong);
      } else if (ci.template_args.size() == 2) {
        ci.key_type = ci.template_args[0];
        ci.elem_type = ci.template_args[1];
      } else if (ci.template_args.size() == 1) {
        ci.key_type = ci.template_args[0];
        ci.elem_type = ci.template_args[0];
      }
      if (ci.elem_type != kNoType && !types().is_scalar(ci.elem_type))
        error(decl.loc, "container elements must have scalar type, got '" +
                            tname(ci.elem_type) + "'");
      if ((ck == ContainerKind::Assoc || ck == ContainerKind::AssocMulti) &&
          ci.key_type != kNoType && !types().is_scalar(ci.key_type))
        error(decl.loc, "container keys must have scalar type, got '" +
                            tname(ci.key_type) + "'");
    }
  }

  // Own fields.
  std::vector<FieldInfo> own_fields;
  for (const auto &fd : decl.fields) {
    TypeRef t = resolve_type(*fd.type);
    if (t == kNoType)
      continue;
    if (types()[t].kind == TypeKind::Reference) {
      error(fd.loc, "reference members are not supported");
      continue;
    }
    TypeRef bare = types().strip_quals(t);
    if (types()[bare].kind == TypeKind::Class &&
        !prog_.classes[types()[bare].class_id].layout_done) {
      error(fd.loc, "field '" + fd.name + "' has incomplete type '" +
                        tname(t) + "'");
      continue;
    }
    FieldInfo fi;
    fi.name = fd.name;
    fi.key = fd.name;
    fi.type = t;
    fi.access = fd.access;
    fi.owner = cid;
    fi.loc = fd.loc;
    own_fields.push_back(std::move(fi));
  }

  // Method signatures.
  for (const auto &m : decl.methods) {
    std::string symbol = prog_.classes[cid].name + "::" + m->name;
    uint32_t id = register_function_shell(*m, symbol, cid, subst);
    if (m->is_ctor) {
      prog_.classes[cid].ctors.push_back(id);
      if (m->params.empty())
        prog_.classes[cid].default_ctor = id;
    } else if (m->is_dtor) {
      if (prog_.classes[cid].dtor != 0xffffffffu)
        error(m->loc, "multiple destructors in '" + prog_.classes[cid].name +
                          "'");
      prog_.classes[cid].dtor = id;
    } else {
      prog_.classes[cid].methods.push_back(id);
      class_method_index_[cid][m->name].push_back(id);
    }
    if (m->is_pure) {
      pure_fns_.insert(id);
      make_pure_stub(id);
    } else if (m->body) {
      prog_.functions[id].defined = true;
      worklist_.push_back(FnWork{id, m.get(), cid, subst});
    }
  }

  if (prog_.classes[cid].ctors.empty()) {
    uint32_t id = synth_special(cid, decl.name, true, decl.loc);
    prog_.classes[cid].ctors.push_back(id);
    prog_.classes[cid].default_ctor = id;
  }

  // A destructor is synthesized only when destruction does something: a
  // member or direct non-virtual base needs destroying, or a virtual
  // destructor slot inherited from a base must be overridden.
  if (prog_.classes[cid].dtor == 0xffffffffu) {
    bool needs = false;
    for (const auto &f : own_fields) {
      TypeRef bare = types().strip_quals(f.type);
      if (types()[bare].kind == TypeKind::Class &&
          prog_.classes[types()[bare].class_id].dtor != 0xffffffffu)
        needs = true;
    }
    for (const auto &e : prog_.classes[cid].bases) {
      if (!e.is_virtual && prog_.classes[e.base].dtor != 0xffffffffu)
        needs = true;
      for (const auto &r : prog_.classes[e.base].vslots)
        if (prog_.vslots[r.slot].name == "~")
          needs = true;
    }
    if (needs)
      prog_.classes[cid].dtor = synth_special(cid, "~" + decl.name, false,
                                              decl.loc);
  }

  build_layout(cid, std::move(own_fields));
  return cid;
}

void Checker::make_pure_stub(uint32_t fn_id) {
  FunctionInfo &fi = prog_.functions[fn_id];
  auto body = std::make_unique<TypedStmt>();
  body->kind = TypedStmt::Kind::Block;
  body->loc = fi.loc;

  auto cond = std::make_unique<TypedExpr>();
  cond->kind = TypedExpr::Kind::BoolConst;
  cond->type = types().basic(TypeKind::Bool);
  cond->ival = 0;
  cond->loc = fi.loc;
  auto call = std::make_unique<TypedExpr>();
  call->kind = TypedExpr::Kind::IntrinsicCall;
  call->intr = IntrinsicKind::Assert;
  call->type = types().basic(TypeKind::Void);
  call->sval = "pure virtual method called";
  call->loc = fi.loc;
  call->args.push_back(std::move(cond));
  auto es = std::make_unique<TypedStmt>();
  es->kind = TypedStmt::Kind::ExprStmt;
  es->loc = fi.loc;
  es->expr = std::move(call);
  body->stmts.push_back(std::move(es));

  TypeRef r = fi.ret;
  if (types()[r].kind != TypeKind::Void) {
    auto ret = std::make_unique<TypedStmt>();
    ret->kind = TypedStmt::Kind::Return;
    ret->loc = fi.loc;
    if (types().is_arithmetic(types().strip_quals(r))) {
      ret->expr = make_int(0, types().strip_quals(r), fi.loc);
      if (types().is_floating(types().strip_quals(r))) {
        ret->expr->kind = TypedExpr::Kind::FloatConst;
        ret->expr->fval = 0.0;
      }
    } else if (types()[types().strip_quals(r)].kind == TypeKind::Pointer) {
      auto zero = make_int(0, types().basic(TypeKind::Int), fi.loc);
      auto cast = std::make_unique<TypedExpr>();
      cast->kind = TypedExpr::Kind::Cast;
      cast->ck = CastKind::NullToPtr;
      cast->type = types().strip_quals(r);
      cast->loc = fi.loc;
      cast->args.push_back(std::move(zero));
      ret->expr = std::move(cast);
    }
    if (ret->expr)
      body->stmts.push_back(std::move(ret));
  }
  fi.body = std::move(body);
  fi.defined = true;
}

void Checker::build_layout(uint32_t cid, std::vector<FieldInfo> own_fields) {
  // ---- virtual bases: depth-first, left-to-right, first appearance wins.
  std::vector<uint32_t> vbases;
  std::vector<ast::Access> vbase_access;
  std::set<uint32_t> seen;
  std::set<uint32_t> visiting;
  auto visit = [&](auto &&self, uint32_t c, ast::Access path) -> void {
    if (visiting.count(c))
      return;
    visiting.insert(c);
    for (const auto &e : prog_.classes[c].bases) {
      ast::Access folded = fold_access(path, e.access);
      self(self, e.base, folded);
      if (e.is_virtual && !seen.count(e.base)) {
        seen.insert(e.base);
        vbases.push_back(e.base);
        vbase_access.push_back(folded);
      }
    }
    visiting.erase(c);
  };
  visit(visit, cid, ast::Access::Public);
  prog_.classes[cid].vbases = vbases;

  // ---- subobject enumeration
  std::vector<Subobject> subs;
  subs.push_back(Subobject{cid, "", false, ast::Access::Public});
  for (const auto &e : prog_.classes[cid].bases) {
    if (e.is_virtual)
      continue;
    const ClassInfo &b = prog_.classes[e.base];
    for (const auto &s : b.subobjects) {
      if (is_virtual_section(s.path))
        continue;
      Subobject n;
      n.class_id = s.class_id;
      n.path = path_join(b.name, s.path);
      n.via_virtual = false;
      n.path_access = fold_access(e.access, s.path_access);
      subs.push_back(std::move(n));
    }
  }
  for (size_t i = 0; i < vbases.size(); ++i) {
    const ClassInfo &vb = prog_.classes[vbases[i]];
    for (const auto &s : vb.subobjects) {
      if (is_virtual_section(s.path))
        continue;
      Subobject n;
      n.class_id = s.class_id;
      n.path = path_join("virtual::" + vb.name, s.path);
      n.via_virtual = true;
      n.path_access = fold_access(vbase_access[i], s.path_access);
      subs.push_back(std::move(n));
    }
  }
  {
    std::set<std::string> paths;
    for (const auto &s : subs)
      if (!paths.insert(s.path).second)
        error(prog_.classes[cid].loc,
              "duplicate base class '" + prog_.classes[s.class_id].name + "'");
  }

  // ---- virtual slot table: inherit, then match own methods.
  std::map<uint32_t, VSlotRef> table;
  std::set<uint32_t> conflicts;
  for (const auto &e : prog_.classes[cid].bases) {
    for (const auto &r : prog_.classes[e.base].vslots) {
      auto it = table.find(r.slot);
      if (it == table.end())
        table[r.slot] = r;
      else if (it->second.impl_fn != r.impl_fn)
        conflicts.insert(r.slot);
    }
  }

  // The signature used for override matching: reference-ness is restored so
  // that f(T&) and f(T*) stay distinct, and top-level qualifiers are ignored.
  auto slot_sig = [&](const FunctionInfo &fn) {
    FnSig s;
    s.ret = fn.ret_ref ? types().reference_to(types()[fn.ret].inner) : fn.ret;
    for (size_t i = 1; i < fn.params.size(); ++i) {
      const ParamInfo &p = fn.params[i];
      TypeRef t = p.is_ref ? types().reference_to(types()[p.type].inner)
                           : types().strip_quals(p.type);
      s.params.push_back(t);
    }
    return s;
  };

  auto match_own = [&](uint32_t fn_id, const std::string &nm) {
    FunctionInfo &fn = prog_.functions[fn_id];
    FnSig sig = slot_sig(fn);
    std::vector<uint32_t> matched;
    for (const auto &kv : table) {
      const VSlotInfo &si = prog_.vslots[kv.first];
      if (si.name != nm)
        continue;
      const FnSig &ss = types().sig(si.sig_id);
      if (ss.params != sig.params)
        continue;
      if (ss.ret != sig.ret) {
        error(fn.loc, "virtual method '" + nm +
                          "' overrides with a different return type");
        continue;
      }
      matched.push_back(kv.first);
    }
    bool is_pure = pure_fns_.count(fn_id) != 0;
    if (!matched.empty()) {
      fn.is_virtual = true;
      for (uint32_t s : matched) {
        table[s] = VSlotRef{s, fn_id, is_pure};
        conflicts.erase(s);
      }
    } else if (fn.is_virtual) {
      uint32_t sig_id =
          types()[types().function_ptr(sig)].sig_id;
      std::string key = std::to_string(cid) + "$" + nm + "$" +
                        std::to_string(sig_id);
      uint32_t slot;
      auto it = vslot_index_.find(key);
      if (it != vslot_index_.end()) {
        slot = it->second;
      } else {
        slot = static_cast<uint32_t>(prog_.vslots.size());
        prog_.vslots.push_back(VSlotInfo{nm, sig_id, cid});
        vslot_index_[key] = slot;
      }
      table[slot] = VSlotRef{slot, fn_id, is_pure};
    }
  };

  for (uint32_t m : prog_.classes[cid].methods)
    match_own(m, prog_.functions[m].display.substr(
                     prog_.functions[m].display.rfind("::") + 2));
  if (prog_.classes[cid].dtor != 0xffffffffu)
    match_own(prog_.classes[cid].dtor, "~");

  for (uint32_t s : conflicts)
    error(prog_.classes[cid].loc,
          "no unique final overrider for virtual method '" +
              prog_.vslots[s].name + "' in '" + prog_.classes[cid].name + "'");

  std::vector<VSlotRef> vslots;
  for (const auto &kv : table)
    vslots.push_back(kv.second);
  std::sort(vslots.begin(), vslots.end(),
            [](const VSlotRef &a, const VSlotRef &b) { return a.slot < b.slot; });
  bool is_abstract = false;
  for (const auto &r : vslots)
    if (r.pure)
      is_abstract = true;

  // ---- field flattening: per subobject, ghosts first, then its own fields.
  std::vector<FieldInfo> fields;
  for (const auto &s : subs) {
    for (const auto &kv : table) {
      const VSlotInfo &si = prog_.vslots[kv.first];
      if (si.intro_class != s.class_id)
        continue;
      FieldInfo g;
      g.name = "vtable$" + si.name + "$" + std::to_string(si.sig_id);
      g.key = path_join(s.path, g.name);
      g.type = types().function_ptr(types().sig(si.sig_id));
      g.owner = s.class_id;
      g.subobj_path = s.path;
      g.is_ghost = true;
      g.loc = prog_.classes[cid].loc;
      fields.push_back(std::move(g));
    }
    if (s.path.empty()) {
      for (const auto &f : own_fields)
        fields.push_back(f);
      continue;
    }
    for (const auto &f : prog_.classes[s.class_id].fields) {
      if (f.is_ghost || !f.subobj_path.empty())
        continue; // deeper fields come from deeper subobjects
      FieldInfo n = f;
      n.key = path_join(s.path, f.name);
      n.subobj_path = s.path;
      fields.push_back(std::move(n));
    }
  }
  {
    std::set<std::string> keys;
    for (const auto &f : fields)
      if (!keys.insert(f.key).second)
        error(f.loc, "duplicate member key '" + f.key + "' in '" +
                         prog_.classes[cid].name + "'");
  }

  ClassInfo &ci = prog_.classes[cid];
  ci.subobjects = std::move(subs);
  ci.fields = std::move(fields);
  ci.vslots = std::move(vslots);
  ci.is_abstract = is_abstract;
  ci.layout_done = true;
}

const FieldInfo *Checker::find_field(uint32_t cid, const std::string &name,
                                     SourceLoc loc) {
  const ClassInfo &ci = prog_.classes[cid];
  const FieldInfo *best = nullptr;
  size_t best_depth = 0;
  bool ambiguous = false;
  auto depth_of = [](const std::string &p) {
    if (p.empty())
      return size_t{0};
    size_t d = 1;
    for (size_t i = 0; (i = p.find("::", i)) != std::string::npos; i += 2)
      ++d;
    return d;
  };
  for (const auto &f : ci.fields) {
    if (f.is_ghost || f.name != name)
      continue;
    size_t d = depth_of(f.subobj_path);
    if (!best || d < best_depth) {
      best = &f;
      best_depth = d;
      ambiguous = false;
    } else if (d == best_depth) {
      ambiguous = true;
    }
  }
  if (ambiguous) {
    error(loc, "ambiguous member '" + name + "' in '" + ci.name + "'");
    return nullptr;
  }
  return best;
}

std::vector<uint32_t> Checker::find_methods(uint32_t cid,
                                            const std::string &qualifier,
                                            const std::string &name,
                                            std::string *this_path,
                                            bool *this_abs, SourceLoc loc) {
  *this_path = "";
  *this_abs = false;

  uint32_t start = cid;
  std::string start_path;
  bool start_abs = false;
  if (!qualifier.empty() && qualifier != prog_.classes[cid].name &&
      qualifier != prog_.classes[cid].template_name) {
    const ClassInfo &ci = prog_.classes[cid];
    const Subobject *hit = nullptr;
    bool dup = false;
    for (const auto &s : ci.subobjects) {
      if (s.path.empty())
        continue;
      const ClassInfo &sc = prog_.classes[s.class_id];
      if (sc.name != qualifier && sc.template_name != qualifier)
        continue;
      if (hit && hit->class_id != s.class_id)
        dup = true;
      else if (hit)
        dup = true; // replicated copy of the same base
      else
        hit = &s;
    }
    if (!hit) {
      error(loc, "'" + qualifier + "' is not a base of '" + ci.name + "'");
      return {};
    }
    if (dup) {
      error(loc, "ambiguous base '" + qualifier + "' in '" + ci.name + "'");
      return {};
    }
    start = hit->class_id;
    start_path = hit->path;
    start_abs = is_virtual_section(hit->path);
  }

  // Nearest-layer lookup with hiding: a hit in a class hides all its bases;
  // hits reached along distinct subobject paths are ambiguous.
  struct Hit {
    uint32_t class_id;
    std::string path;
    bool abs;
  };
  std::vector<Hit> hits;
  auto lookup = [&](auto &&self, uint32_t c, std::string path,
                    bool abs) -> void {
    auto ci_it = class_method_index_.find(c);
    if (ci_it != class_method_index_.end() && ci_it->second.count(name)) {
      for (const auto &h : hits)
        if (h.class_id == c && h.path == path && h.abs == abs)
          return;
      hits.push_back(Hit{c, path, abs});
      return;
    }
    for (const auto &e : prog_.classes[c].bases) {
      if (e.is_virtual)
        self(self, e.base, "virtual::" + prog_.classes[e.base].name, true);
      else
        self(self, e.base, path_join(path, prog_.classes[e.base].name), abs);
    }
  };
  lookup(lookup, start, start_path, start_abs);

  if (hits.empty())
    return {};
  // Deduplicate identical hits (the same virtual layer reached twice).
  std::vector<Hit> uniq;
  for (const auto &h : hits) {
    bool dup = false;
    for (const auto &u : uniq)
      if (u.class_id == h.class_id && u.path == h.path)
        dup = true;
    if (!dup)
      uniq.push_back(h);
  }
  if (uniq.size() > 1) {
    error(loc, "ambiguous member '" + name + "' in '" +
                   prog_.classes[cid].name + "'");
    return {};
  }
  *this_path = uniq[0].path;
  *this_abs = uniq[0].abs;
  return class_method_index_[uniq[0].class_id][name];
}

bool Checker::check_member_access(uint32_t owner, ast::Access access,
                                  SourceLoc loc, const std::string &what) {
  if (access == ast::Access::Public)
    return true;
  uint32_t acc = ctx_.class_id;
  if (acc != 0xffffffffu) {
    if (acc == owner)
      return true;
    const ClassInfo &oc = prog_.classes[owner];
    const ClassInfo &ac = prog_.classes[acc];
    for (const auto &fr : oc.friends)
      if (fr == ac.name || (!ac.template_name.empty() && fr == ac.template_name))
        return true;
    if (access == ast::Access::Protected &&
        prog_.base_path_count(acc, owner) >= 1)
      return true;
  }
  error(loc, "'" + what + "' is a " +
                 (access == ast::Access::Private ? "private" : "protected") +
                 " member of '" + prog_.classes[owner].name + "'");
  return false;
}

uint32_t Checker::find_copy_ctor(uint32_t cid) const {
  const ClassInfo &ci = prog_.classes[cid];
  for (uint32_t c : ci.ctors) {
    const FunctionInfo &f = prog_.functions[c];
    if (f.params.size() != 2 || !f.params[1].is_ref)
      continue;
    TypeRef pointee = prog_.types[f.params[1].type].inner;
    pointee = prog_.types.strip_quals(pointee);
    if (prog_.types[pointee].kind == TypeKind::Class &&
        prog_.types[pointee].class_id == cid)
      return c;
  }
  return 0xffffffffu;
}

uint32_t Checker::resolve_ctor(uint32_t cid,
                               const std::vector<TypedExprPtr> &args,
                               SourceLoc loc) {
  const std::vector<uint32_t> cands = prog_.classes[cid].ctors;
  return resolve_overload(cands, args, loc,
                          "constructor for '" + prog_.classes[cid].name + "'");
}

void Checker::synthesize_object_construction(std::vector<TypedStmtPtr> &out,
                                             const TypedExpr &obj_ptr_proto,
                                             uint32_t cid,
                                             std::vector<TypedExprPtr> args,
                                             SourceLoc loc) {
  if (prog_.classes[cid].is_abstract) {
    error(loc, "CONVERSION ERROR");
    return;
  }
  for (uint32_t v : prog_.classes[cid].vbases) {
    uint32_t vctor = prog_.classes[v].default_ctor;
    if (vctor == 0xffffffffu) {
      error(loc, "virtual base '" + prog_.classes[v].name +
                     "' has no default constructor");
      continue;
    }
    TypedExprPtr vthis =
        make_upcast(clone_expr(obj_ptr_proto),
                    "virtual::" + prog_.classes[v].name, true, v, loc);
    TypedExprPtr call = finish_call(vctor, std::move(vthis), {}, loc);
    if (call) {
      auto st = std::make_unique<TypedStmt>();
      st->kind = TypedStmt::Kind::ExprStmt;
      st->loc = loc;
      st->expr = std::move(call);
      out.push_back(std::move(st));
    }
  }
  uint32_t ctor = resolve_ctor(cid, args, loc);
  if (ctor == 0xffffffffu)
    return;
  TypedExprPtr call =
      finish_call(ctor, clone_expr(obj_ptr_proto), std::move(args), loc);
  if (call) {
    auto st = std::make_unique<TypedStmt>();
    st->kind = TypedStmt::Kind::ExprStmt;
    st->loc = loc;
    st->expr = std::move(call);
    out.push_back(std::move(st));
  }
}

void Checker::emit_dtor_calls(std::vector<TypedStmtPtr> &out,
                              const TypedExpr &obj_ptr_proto, uint32_t cid,
                              bool with_vbases, SourceLoc loc) {
  auto push_call = [&](TypedExprPtr call) {
    if (!call)
      return;
    auto st = std::make_unique<TypedStmt>();
    st->kind = TypedStmt::Kind::ExprStmt;
    st->loc = loc;
    st->expr = std::move(call);
    out.push_back(std::move(st));
  };

  const ClassInfo &ci = prog_.classes[cid];
  uint32_t vslot = 0xffffffffu;
  for (const auto &r : ci.vslots)
    if (prog_.vslots[r.slot].name == "~")
      vslot = r.slot;

  if (vslot != 0xffffffffu) {
    uint32_t intro = prog_.vslots[vslot].intro_class;
    bool abs = false;
    std::string path = prog_.upcast_path(cid, intro, abs);
    TypedExprPtr recv = make_upcast(clone_expr(obj_ptr_proto), path, abs,
                                    intro, loc);
    uint32_t impl = 0xffffffffu;
    for (const auto &r : ci.vslots)
      if (r.slot == vslot)
        impl = r.impl_fn;
    std::vector<TypedExprPtr> none;
    TypedExprPtr call =
        finish_call(impl, std::move(recv), std::move(none), loc, vslot);
    push_call(std::move(call));
  } else if (ci.dtor != 0xffffffffu) {
    push_call(finish_call(ci.dtor, clone_expr(obj_ptr_proto), {}, loc));
  }

  if (with_vbases) {
    for (auto it = ci.vbases.rbegin(); it != ci.vbases.rend(); ++it) {
      uint32_t v = *it;
      if (prog_.classes[v].dtor == 0xffffffffu)
        continue;
      TypedExprPtr vthis =
          make_upcast(clone_expr(obj_ptr_proto),
                      "virtual::" + prog_.classes[v].name, true, v, loc);
      push_call(finish_call(prog_.classes[v].dtor, std::move(vthis), {}, loc));
    }
  }
}

void Checker::emit_ghost_assigns(uint32_t cid, std::vector<TypedStmtPtr> &out,
                                 SourceLoc loc) {
  const ClassInfo &ci = prog_.classes[cid];
  for (const auto &f : ci.fields) {
    if (!f.is_ghost)
      continue;
    std::string method;
    uint32_t sig = 0;
    if (!split_ghost_name(f.name, method, sig))
      continue;
    auto sit = vslot_index_.find(std::to_string(f.owner) + "$" + method + "$" +
                                 std::to_string(sig));
    if (sit == vslot_index_.end())
      continue;
    uint32_t impl = 0xffffffffu;
    for (const auto &r : ci.vslots)
      if (r.slot == sit->second)
        impl = r.impl_fn;
    if (impl == 0xffffffffu)
      continue;

    TypedExprPtr lhs =
        make_field_ref(make_deref(make_this(loc), loc), f, loc);
    TypedExprPtr rhs = make_fn_const(impl, loc);
    auto assign = std::make_unique<TypedExpr>();
    assign->kind = TypedExpr::Kind::Binary;
    assign->bop = ast::BinaryOp::Assign;
    assign->type = f.type;
    assign->loc = loc;
    assign->args.push_back(std::move(lhs));
    assign->args.push_back(std::move(rhs));
    auto st = std::make_unique<TypedStmt>();
    st->kind = TypedStmt::Kind::ExprStmt;
    st->loc = loc;
    st->expr = std::move(assign);
    out.push_back(std::move(st));
  }
}

void Checker::build_ctor_body(const FnWork &w, std::vector<TypedStmtPtr> &out) {
  uint32_t cid = w.class_id;
  const ast::FunctionDecl *decl = w.decl;
  SourceLoc loc = prog_.functions[w.fn_id].loc;

  std::vector<bool> init_used(decl ? decl->ctor_inits.size() : 0, false);
  auto find_init = [&](const std::string &n1,
                       const std::string &n2) -> const ast::MemInit * {
    if (!decl)
      return nullptr;
    for (size_t i = 0; i < decl->ctor_inits.size(); ++i) {
      const auto &mi = decl->ctor_inits[i];
      if (mi.name == n1 || (!n2.empty() && mi.name == n2)) {
        init_used[i] = true;
        return &mi;
      }
    }
    return nullptr;
  };

  // 1. direct non-virtual base constructors, declaration order
  for (const auto &e : prog_.classes[cid].bases) {
    if (e.is_virtual)
      continue;
    const ClassInfo &b = prog_.classes[e.base];
    const ast::MemInit *mi = find_init(b.name, b.template_name);
    std::vector<TypedExprPtr> args;
    if (mi)
      for (const auto &a : mi->args) {
        TypedExprPtr t = check_expr(*a);
        if (!t)
          return;
        args.push_back(std::move(t));
      }
    uint32_t ctor = resolve_ctor(e.base, args, mi ? mi->loc : loc);
    if (ctor == 0xffffffffu)
      continue;
    TypedExprPtr bthis = make_upcast(make_this(loc), b.name, false, e.base, loc);
    TypedExprPtr call = finish_call(ctor, std::move(bthis), std::move(args),
                                    mi ? mi->loc : loc);
    if (call) {
      auto st = std::make_unique<TypedStmt>();
      st->kind = TypedStmt::Kind::ExprStmt;
      st->loc = loc;
      st->expr = std::move(call);
      out.push_back(std::move(st));
    }
  }

  // 2. this class's view of every vtable pointer
  emit_ghost_assigns(cid, out, loc);

  // 3. member initialization, declaration order
  for (const auto &f : prog_.classes[cid].fields) {
    if (f.is_ghost || !f.subobj_path.empty())
      continue;
    const ast::MemInit *mi = find_init(f.name, "");
    TypeRef bare = prog_.types.strip_quals(f.type);
    if (prog_.types[bare].kind == TypeKind::Class) {
      std::vector<TypedExprPtr> args;
      if (mi)
        for (const auto &a : mi->args) {
          TypedExprPtr t = check_expr(*a);
          if (!t)
            return;
          args.push_back(std::move(t));
        }
      TypedExprPtr proto = make_addrof(
          make_field_ref(make_deref(make_this(loc), loc), f, loc), loc);
      synthesize_object_construction(out, *proto, prog_.types[bare].class_id,
                                     std::move(args), mi ? mi->loc : loc);
    } else if (mi) {
      TypedExprPtr value;
      if (mi->args.empty()) {
        value = make_int(0, prog_.types.strip_quals(f.type), mi->loc);
        if (prog_.types.is_floating(bare)) {
          value->kind = TypedExpr::Kind::FloatConst;
          value->fval = 0.0;
        } else if (prog_.types[bare].kind == TypeKind::Pointer) {
          auto zero = make_int(0, prog_.types.basic(TypeKind::Int), mi->loc);
          value = std::make_unique<TypedExpr>();
          value->kind = TypedExpr::Kind::Cast;
          value->ck = CastKind::NullToPtr;
          value->type = bare;
          value->loc = mi->loc;
          value->args.push_back(std::move(zero));
        }
      } else if (mi->args.size() == 1) {
        TypedExprPtr t = check_expr(*mi->args[0]);
        if (!t)
          return;
        value = coerce(std::move(t), bare, mi->loc);
      } else {
        error(mi->loc, "too many initializers for member '" + f.name + "'");
        continue;
      }
      if (!value)
        continue;
      auto assign = std::make_unique<TypedExpr>();
      assign->kind = TypedExpr::Kind::Binary;
      assign->bop = ast::BinaryOp::Assign;
      assign->type = bare;
      assign->loc = mi->loc;
      assign->args.push_back(
          make_field_ref(make_deref(make_this(loc), loc), f, loc));
      assign->args.push_back(std::move(value));
      auto st = std::make_unique<TypedStmt>();
      st->kind = TypedStmt::Kind::ExprStmt;
      st->loc = mi->loc;
      st->expr = std::move(assign);
      out.push_back(std::move(st));
    }
  }

  if (decl) {
    for (size_t i = 0; i < decl->ctor_inits.size(); ++i) {
      if (init_used[i])
        continue;
      const auto &mi = decl->ctor_inits[i];
      bool is_vbase = false;
      for (uint32_t v : prog_.classes[cid].vbases)
        if (prog_.classes[v].name == mi.name ||
            prog_.classes[v].template_name == mi.name)
          is_vbase = true;
      if (is_vbase)
        error(mi.loc, "virtual base initializers are not supported");
      else
        error(mi.loc, "unknown initializer '" + mi.name + "'");
    }
  }

  // 4. user body (typed by the caller, which owns the statement context)
}

void Checker::build_dtor_body_tail(const FnWork &w,
                                   std::vector<TypedStmtPtr> &out) {
  uint32_t cid = w.class_id;
  SourceLoc loc = prog_.functions[w.fn_id].loc;

  // members destroyed in reverse declaration order; each member is the most
  // derived object of its own lifetime, so its virtual bases go with it
  std::vector<const FieldInfo *> members;
  for (const auto &f : prog_.classes[cid].fields) {
    if (f.is_ghost || !f.subobj_path.empty())
      continue;
    TypeRef bare = prog_.types.strip_quals(f.type);
    if (prog_.types[bare].kind == TypeKind::Class)
      members.push_back(&f);
  }
  for (auto it = members.rbegin(); it != members.rend(); ++it) {
    TypeRef bare = prog_.types.strip_quals((*it)->type);
    uint32_t fc = prog_.types[bare].class_id;
    if (prog_.classes[fc].dtor == 0xffffffffu &&
        prog_.classes[fc].vbases.empty())
      continue;
    TypedExprPtr proto = make_addrof(
        make_field_ref(make_deref(make_this(loc), loc), **it, loc), loc);
    // static destruction: the member's declared type is its dynamic type
    uint32_t dt = prog_.classes[fc].dtor;
    if (dt != 0xffffffffu) {
      TypedExprPtr call = finish_call(dt, clone_expr(*proto), {}, loc);
      if (call) {
        auto st = std::make_unique<TypedStmt>();
        st->kind = TypedStmt::Kind::ExprStmt;
        st->loc = loc;
        st->expr = std::move(call);
        out.push_back(std::move(st));
      }
    }
    for (auto vit = prog_.classes[fc].vbases.rbegin();
         vit != prog_.classes[fc].vbases.rend(); ++vit) {
      if (prog_.classes[*vit].dtor == 0xffffffffu)
        continue;
      TypedExprPtr vthis =
          make_upcast(clone_expr(*proto),
                      "virtual::" + prog_.classes[*vit].name, true, *vit, loc);
      TypedExprPtr call =
          finish_call(prog_.classes[*vit].dtor, std::move(vthis), {}, loc);
      if (call) {
        auto st = std::make_unique<TypedStmt>();
        st->kind = TypedStmt::Kind::ExprStmt;
        st->loc = loc;
        st->expr = std::move(call);
        out.push_back(std::move(st));
      }
    }
  }

  // direct non-virtual bases, reverse declaration order
  const auto &bases = prog_.classes[cid].bases;
  for (auto it = bases.rbegin(); it != bases.rend(); ++it) {
    if (it->is_virtual)
      continue;
    uint32_t dt = prog_.classes[it->base].dtor;
    if (dt == 0xffffffffu)
      continue;
    TypedExprPtr bthis = make_upcast(make_this(loc),
                                     prog_.classes[it->base].name, false,
                                     it->base, loc);
    TypedExprPtr call = finish_call(dt, std::move(bthis), {}, loc);
    if (call) {
      auto st = std::make_unique<TypedStmt>();
      st->kind = TypedStmt::Kind::ExprStmt;
      st->loc = loc;
      st->expr = std::move(call);
      out.push_back(std::move(st));
    }
  }
}

} // namespace minibmc
