#include "check.hpp"

#include <algorithm>
#include <sstream>

// Template collection and instantiation.  Collection walks the top level
// once, pairing every specialization with its primary.  Instantiation is
// demand-driven from expression/type checking and keyed by (template name,
// concrete argument types): each key materializes typed IR exactly once.

namespace minibmc {

namespace {

// Top-level const does not participate in a function template's identity:
// `f(const T a)` and `f(T a)` declare the same template.
std::string normalized_param_key(const ast::FunctionDecl &fd) {
  std::string key;
  for (const auto &p : fd.params) {
    ast::TypeExprPtr c = ast::clone(*p.type);
    c->is_const = false;
    key += ast::to_string(*c);
    key += ",";
  }
  return key;
}

} // namespace

std::string Checker::type_list_names(const std::vector<TypeRef> &args) const {
  std::string s;
  for (size_t i = 0; i < args.size(); ++i) {
    if (i)
      s += ", ";
    s += tname(args[i]);
  }
  return s;
}

std::string Checker::canon_args_key(const char *kind, const std::string &name,
                                    const std::vector<TypeRef> &args) const {
  std::ostringstream os;
  os << kind << ":" << name << "<";
  for (TypeRef a : args)
    os << a << ",";
  os << ">";
  return os.str();
}

TemplateEntry *Checker::find_template(const std::string &name) {
  auto it = templates_.find(name);
  return it == templates_.end() ? nullptr : &it->second;
}

void Checker::collect_top_level() {
  for (const auto &d : tu_.decls) {
    switch (d.kind) {
    case ast::Decl::Kind::Template: {
      const ast::TemplateDecl &td = *d.template_decl;
      const bool is_class = td.class_decl != nullptr;
      const std::string name =
          is_class ? td.class_decl->name : td.fn_decl->name;
      TemplateEntry &te = templates_[name];
      const bool is_spec = td.params.empty() || td.has_spec_args;
      if (!is_spec) {
        // Primary definition (or forward declaration / redeclaration).
        if (te.primary == nullptr) {
          te.name = name;
          te.is_class = is_class;
          te.primary = &td;
          break;
        }
        if (te.is_class != is_class) {
          error(td.loc, "'" + name + "' redeclared as a different kind of template");
          break;
        }
        const bool old_fwd =
            is_class ? te.primary->class_decl->is_forward
                     : te.primary->fn_decl->body == nullptr;
        const bool new_fwd =
            is_class ? td.class_decl->is_forward : td.fn_decl->body == nullptr;
        if (old_fwd) {
          te.primary = &td;
        } else if (!new_fwd) {
          // Two definitions.  Function templates whose parameter lists agree
          // modulo top-level const are redeclarations of one template; keep
          // the first body.
          if (is_class || normalized_param_key(*td.fn_decl) !=
                              normalized_param_key(*te.primary->fn_decl))
            error(td.loc, "redefinition of template '" + name + "'");
        }
        break;
      }
      // Specialization.
      if (te.primary == nullptr) {
        error(td.loc, "specialization of '" + name +
                          "' without a primary template");
        break;
      }
      if (te.is_class != is_class) {
        error(td.loc, "specialization kind does not match primary '" + name + "'");
        break;
      }
      TemplateEntry::Spec spec;
      spec.decl = &td;
      spec.is_explicit = td.params.empty();
      if (is_class) {
        if (!td.has_spec_args ||
            td.spec_args.size() != te.primary->params.size()) {
          error(td.loc, "wrong number of template arguments in "
                        "specialization of '" + name + "'");
          break;
        }
        for (const auto &a : td.spec_args)
          spec.patterns.push_back(a.get());
      } else {
        // Function specialization: concrete argument types, either given
        // explicitly or deduced from the specialization's parameter list
        // against the primary.
        if (td.has_spec_args) {
          bool ok = true;
          for (const auto &a : td.spec_args) {
            TypeRef t = resolve_type(*a);
            if (t == kNoType)
              ok = false;
            spec.concrete_args.push_back(t);
          }
          if (!ok)
            break;
        } else {
          const ast::FunctionDecl &primary = *te.primary->fn_decl;
          const ast::FunctionDecl &sd = *td.fn_decl;
          if (sd.params.size() != primary.params.size()) {
            error(td.loc, "specialization of '" + name +
                              "' does not match the primary's parameters");
            break;
          }
          SubstMap binding;
          bool ok = true;
          for (size_t i = 0; i < sd.params.size() && ok; ++i) {
            TypeRef at = resolve_type(*sd.params[i].type);
            if (at == kNoType ||
                !deduce_pattern(*primary.params[i].type, at,
                                te.primary->params, binding))
              ok = false;
          }
          for (const auto &p : te.primary->params)
            if (!binding.count(p))
              ok = false;
          if (!ok) {
            error(td.loc, "cannot deduce template arguments for "
                          "specialization of '" + name + "'");
            break;
          }
          for (const auto &p : te.primary->params)
            spec.concrete_args.push_back(binding[p]);
        }
      }
      te.specs.push_back(std::move(spec));
      break;
    }
    case ast::Decl::Kind::Class: {
      const ast::ClassDecl &cd = *d.class_decl;
      if (cd.is_forward)
        break;
      if (class_index_.count(cd.name)) {
        error(cd.loc, "redefinition of class '" + cd.name + "'");
        break;
      }
      register_class(cd, cd.name, "", {}, SubstMap{}, "");
      break;
    }
    case ast::Decl::Kind::Function: {
      const ast::FunctionDecl &fd = *d.fn_decl;
      // Merge declaration/definition pairs with identical parameter types.
      std::vector<TypeRef> ptypes;
      for (const auto &p : fd.params)
        ptypes.push_back(resolve_type(*p.type));
      bool merged = false;
      for (uint32_t prev : free_fns_[fd.name]) {
        FunctionInfo &pf = prog_.functions[prev];
        std::vector<TypeRef> prev_types;
        for (size_t i = 0; i < pf.params.size(); ++i)
          prev_types.push_back(pf.params[i].is_ref
                                   ? types()[pf.params[i].type].inner
                                   : pf.params[i].type);
        // Compare against the declared (pre-lowering) types loosely by name.
        if (prev_types.size() != ptypes.size())
          continue;
        bool same = true;
        for (size_t i = 0; i < ptypes.size(); ++i) {
          TypeRef d0 = types().strip_quals(prev_types[i]);
          TypeRef d1 = ptypes[i] == kNoType
                           ? kNoType
                           : types().strip_quals(
                                 types()[ptypes[i]].kind == TypeKind::Reference
                                     ? types()[ptypes[i]].inner
                                     : ptypes[i]);
          if (d0 != d1)
            same = false;
        }
        if (!same)
          continue;
        merged = true;
        if (fd.body) {
          if (pf.defined) {
            error(fd.loc, "redefinition of '" + fd.name + "'");
          } else {
            worklist_.push_back(FnWork{prev, &fd, 0xffffffffu, SubstMap{}});
            pf.defined = true; // body arrives via the worklist
          }
        }
        break;
      }
      if (merged)
        break;
      uint32_t id = register_function_shell(fd, fd.name, 0xffffffffu, SubstMap{});
      free_fns_[fd.name].push_back(id);
      if (fd.body) {
        prog_.functions[id].defined = true;
        worklist_.push_back(FnWork{id, &fd, 0xffffffffu, SubstMap{}});
      }
      break;
    }
    case ast::Decl::Kind::GlobalVar: {
      const ast::VarDeclarator &v = d.var_decl->var;
      TypeRef t = resolve_type(*v.type);
      if (t == kNoType)
        break;
      if (!types().is_scalar(t) && types()[t].kind != TypeKind::Array) {
        error(d.var_decl->loc, "global variables must have scalar or array type");
        break;
      }
      if (global_index_.count(v.name)) {
        error(d.var_decl->loc, "redefinition of global '" + v.name + "'");
        break;
      }
      GlobalInfo g;
      g.name = v.name;
      g.type = t;
      g.loc = d.var_decl->loc;
      if (v.init) {
        TypedExprPtr init = check_expr(*v.init);
        if (init)
          g.init = coerce(std::move(init), types().strip_quals(t),
                          d.var_decl->loc);
      }
      global_index_[v.name] = static_cast<uint32_t>(prog_.globals.size());
      prog_.globals.push_back(std::move(g));
      break;
    }
    case ast::Decl::Kind::Typedef:
      global_typedefs_[d.typedef_decl->name] = d.typedef_decl->type.get();
      break;
    }
    if (diags_.has_errors() && diags_.all().size() > 200)
      return; // runaway cascade
  }
}

bool Checker::contains_tparam(const ast::TypeExpr &t,
                              const std::vector<std::string> &tparams) {
  switch (t.kind) {
  case ast::TypeExpr::Kind::Named:
    if (std::find(tparams.begin(), tparams.end(), t.name) != tparams.end())
      return true;
    for (const auto &a : t.targs)
      if (contains_tparam(*a, tparams))
        return true;
    return false;
  case ast::TypeExpr::Kind::Nested:
  case ast::TypeExpr::Kind::Pointer:
  case ast::TypeExpr::Kind::Reference:
  case ast::TypeExpr::Kind::Array:
    return t.inner && contains_tparam(*t.inner, tparams);
  case ast::TypeExpr::Kind::FunctionPtr: {
    if (t.inner && contains_tparam(*t.inner, tparams))
      return true;
    for (const auto &p : t.fn_params)
      if (contains_tparam(*p, tparams))
        return true;
    return false;
  }
  }
  return false;
}

int Checker::pattern_specificity(const ast::TypeExpr &t,
                                 const std::vector<std::string> &tparams) {
  switch (t.kind) {
  case ast::TypeExpr::Kind::Named: {
    if (std::find(tparams.begin(), tparams.end(), t.name) != tparams.end())
      return 0;
    int n = 1;
    for (const auto &a : t.targs)
      n += pattern_specificity(*a, tparams);
    return n;
  }
  case ast::TypeExpr::Kind::Pointer:
  case ast::TypeExpr::Kind::Reference:
  case ast::TypeExpr::Kind::Array:
  case ast::TypeExpr::Kind::Nested:
    return 1 + (t.inner ? pattern_specificity(*t.inner, tparams) : 0);
  case ast::TypeExpr::Kind::FunctionPtr: {
    int n = 1 + (t.inner ? pattern_specificity(*t.inner, tparams) : 0);
    for (const auto &p : t.fn_params)
      n += pattern_specificity(*p, tparams);
    return n;
  }
  }
  return 0;
}

bool Checker::deduce_pattern(const ast::TypeExpr &pattern, TypeRef arg,
                             const std::vector<std::string> &tparams,
                             SubstMap &binding) {
  if (arg == kNoType)
    return false;
  arg = types().strip_quals(arg);
  if (types()[arg].kind == TypeKind::Reference)
    arg = types().strip_quals(types()[arg].inner);

  switch (pattern.kind) {
  case ast::TypeExpr::Kind::Named: {
    const bool is_param = std::find(tparams.begin(), tparams.end(),
                                    pattern.name) != tparams.end();
    if (is_param) {
      if (!pattern.targs.empty())
        return false;
      auto it = binding.find(pattern.name);
      if (it != binding.end())
        return it->second == arg;
      binding.emplace(pattern.name, arg);
      return true;
    }
    if (!pattern.targs.empty()) {
      // Class-template pattern: the argument must be an instantiation of the
      // same template; unify argument-for-argument.
      if (types()[arg].kind != TypeKind::Class)
        return false;
      const ClassInfo &ci = prog_.classes[types()[arg].class_id];
      if (ci.template_name != pattern.name ||
          ci.template_args.size() != pattern.targs.size())
        return false;
      for (size_t i = 0; i < pattern.targs.size(); ++i)
        if (!deduce_pattern(*pattern.targs[i], ci.template_args[i], tparams,
                            binding))
          return false;
      return true;
    }
    QuietScope q(*this);
    TypeRef want = resolve_type(pattern);
    return want != kNoType && types().same_unqual(want, arg);
  }
  case ast::TypeExpr::Kind::Reference:
    return deduce_pattern(*pattern.inner, arg, tparams, binding);
  case ast::TypeExpr::Kind::Pointer:
    if (types()[arg].kind != TypeKind::Pointer)
      return false;
    return deduce_pattern(*pattern.inner, types()[arg].inner, tparams, binding);
  case ast::TypeExpr::Kind::Array: {
    if (types()[arg].kind != TypeKind::Array)
      return false;
    return deduce_pattern(*pattern.inner, types()[arg].inner, tparams, binding);
  }
  case ast::TypeExpr::Kind::Nested:
  case ast::TypeExpr::Kind::FunctionPtr:
    return false; // not used as deducible contexts in this subset
  }
  return false;
}

bool Checker::deduce_call(const TemplateEntry &te,
                          const std::vector<TypedExprPtr> &args,
                          std::vector<TypeRef> &out, SourceLoc loc) {
  const ast::FunctionDecl &fd = *te.primary->fn_decl;
  if (fd.params.size() != args.size()) {
    error(loc, "wrong number of arguments to '" + te.name + "'");
    return false;
  }
  SubstMap binding;
  for (size_t i = 0; i < args.size(); ++i) {
    if (!contains_tparam(*fd.params[i].type, te.primary->params))
      continue; // non-dependent parameter: ordinary conversion applies later
    if (!args[i])
      return false;
    if (!deduce_pattern(*fd.params[i].type, args[i]->type, te.primary->params,
                        binding)) {
      auto it = binding.begin();
      std::string hint =
          it == binding.end() ? "" : (" (deduced '" + it->first + "' = " +
                                      tname(it->second) + " earlier)");
      error(loc, "conflicting deduction for template parameter in call to '" +
                     te.name + "': argument " + std::to_string(i + 1) +
                     " has type " + tname(args[i]->type) + hint);
      return false;
    }
  }
  out.clear();
  for (const auto &p : te.primary->params) {
    auto it = binding.find(p);
    if (it == binding.end()) {
      error(loc, "cannot deduce template parameter '" + p + "' in call to '" +
                     te.name + "'");
      return false;
    }
    out.push_back(it->second);
  }
  return true;
}

uint32_t Checker::instantiate_function(const std::string &name,
                                       const std::vector<TypeRef> &args,
                                       SourceLoc loc) {
  const std::string key = canon_args_key("fn", name, args);
  auto hit = inst_cache_.find(key);
  if (hit != inst_cache_.end())
    return hit->second;

  TemplateEntry *te = find_template(name);
  if (!te || te->is_class) {
    error(loc, "no function template named '" + name + "'");
    return 0xffffffffu;
  }
  if (args.size() != te->primary->params.size()) {
    error(loc, "wrong number of template arguments for '" + name + "'");
    return 0xffffffffu;
  }
  if (++inst_depth_ > 64) {
    error(loc, "template instantiation depth exceeded");
    --inst_depth_;
    return 0xffffffffu;
  }

  // Explicit specializations win over the primary when the arguments match
  // exactly; function templates have no partial specializations.
  const ast::FunctionDecl *chosen = te->primary->fn_decl.get();
  const char *origin = "primary";
  SubstMap subst;
  for (const auto &spec : te->specs) {
    if (spec.concrete_args == args) {
      chosen = spec.decl->fn_decl.get();
      origin = "explicit specialization";
      break;
    }
  }
  if (origin[0] == 'p')
    for (size_t i = 0; i < args.size(); ++i)
      subst[te->primary->params[i]] = args[i];

  if (!chosen->body) {
    error(loc, "function template '" + name + "' has no definition");
    --inst_depth_;
    return 0xffffffffu;
  }

  const std::string symbol = name + "<" + type_list_names(args) + ">";
  uint32_t id;
  {
    CtxScope cs(*this, subst);
    id = register_function_shell(*chosen, symbol, 0xffffffffu, subst);
  }
  prog_.functions[id].display = symbol;
  prog_.functions[id].defined = true;
  inst_cache_[key] = id;
  prog_.instantiations.push_back(symbol + " from " + origin);
  worklist_.push_back(FnWork{id, chosen, 0xffffffffu, subst});
  --inst_depth_;
  return id;
}

uint32_t Checker::instantiate_class(const std::string &name,
                                    const std::vector<TypeRef> &args,
                                    SourceLoc loc) {
  const std::string key = canon_args_key("cls", name, args);
  auto hit = inst_cache_.find(key);
  if (hit != inst_cache_.end())
    return hit->second;

  TemplateEntry *te = find_template(name);
  if (!te || !te->is_class) {
    error(loc, "no class template named '" + name + "'");
    return 0xffffffffu;
  }
  if (args.size() != te->primary->params.size()) {
    error(loc, "wrong number of template arguments for '" + name + "'");
    return 0xffffffffu;
  }
  if (++inst_depth_ > 64) {
    error(loc, "template instantiation depth exceeded");
    --inst_depth_;
    return 0xffffffffu;
  }

  // Most specialized match: explicit > best partial (highest count of
  // concrete nodes; an ambiguous tie is an error) > primary.
  const ast::ClassDecl *chosen = nullptr;
  SubstMap subst;
  std::string origin = "primary";
  for (const auto &spec : te->specs) {
    if (!spec.is_explicit)
      continue;
    bool all = spec.patterns.size() == args.size();
    QuietScope q(*this);
    for (size_t i = 0; all && i < args.size(); ++i) {
      TypeRef t = resolve_type(*spec.patterns[i]);
      all = t != kNoType && types().same_unqual(t, args[i]);
    }
    if (all) {
      chosen = spec.decl->class_decl.get();
      origin = "explicit specialization";
      break;
    }
  }
  if (!chosen) {
    int best = -1;
    bool ambiguous = false;
    for (const auto &spec : te->specs) {
      if (spec.is_explicit || spec.patterns.size() != args.size())
        continue;
      SubstMap binding;
      bool all = true;
      for (size_t i = 0; all && i < args.size(); ++i)
        all = deduce_pattern(*spec.patterns[i], args[i], spec.decl->params,
                             binding);
      if (!all)
        continue;
      int s = 0;
      for (const auto *p : spec.patterns)
        s += pattern_specificity(*p, spec.decl->params);
      if (s > best) {
        best = s;
        ambiguous = false;
        chosen = spec.decl->class_decl.get();
        subst = binding;
        origin = "partial specialization";
      } else if (s == best) {
        ambiguous = true;
      }
    }
    if (ambiguous) {
      error(loc, "ambiguous partial specializations for '" + name + "<" +
                     type_list_names(args) + ">'");
      --inst_depth_;
      return 0xffffffffu;
    }
  }
  if (!chosen) {
    chosen = te->primary->class_decl.get();
    for (size_t i = 0; i < args.size(); ++i)
      subst[te->primary->params[i]] = args[i];
  }
  if (chosen->is_forward) {
    error(loc, "class template '" + name + "' has no definition");
    --inst_depth_;
    return 0xffffffffu;
  }

  const std::string display = name + "<" + type_list_names(args) + ">";
  uint32_t cid = register_class(*chosen, display, name, args, subst, key);
  prog_.instantiations.push_back("class " + display + " from " + origin);
  --inst_depth_;
  return cid;
}

} // namespace minibmc
