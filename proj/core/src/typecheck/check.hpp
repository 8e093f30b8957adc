#ifndef MINIBMC_TYPECHECK_CHECK_HPP
#define MINIBMC_TYPECHECK_CHECK_HPP

#include "minibmc/typecheck.hpp"

#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace minibmc {

using SubstMap = std::map<std::string, TypeRef>;

// A collected template: one primary definition plus its specializations.
struct TemplateEntry {
  std::string name;
  bool is_class = false;
  const ast::TemplateDecl *primary = nullptr; // may hold a forward decl only
  struct Spec {
    const ast::TemplateDecl *decl = nullptr;
    // Class specializations: syntactic argument patterns (partial specs bind
    // the spec's own parameters).  Function specializations: concrete types,
    // deduced against the primary at collect time.
    std::vector<const ast::TypeExpr *> patterns;
    std::vector<TypeRef> concrete_args;
    bool is_explicit = false; // template<>: no free parameters
  };
  std::vector<Spec> specs;
};

// Deferred body-typing work: every function body is typed after its
// signature (and its class, if any) is fully registered.
struct FnWork {
  uint32_t fn_id = 0;
  const ast::FunctionDecl *decl = nullptr; // null: fully synthesized body
  uint32_t class_id = 0xffffffffu;
  SubstMap subst;
};

class Checker {
public:
  Checker(const ast::TranslationUnit &tu, const FileTable &files,
          DiagEngine &diags, TypedProgram &prog)
      : tu_(tu), files_(files), diags_(diags), prog_(prog) {}

  bool run();

  // ---- shared helpers
  void error(SourceLoc loc, const std::string &msg) {
    if (!quiet_)
      diags_.error(loc, msg);
  }
  std::string tname(TypeRef t) const { return prog_.type_name(t); }
  TypeTable &types() { return prog_.types; }

  TypeRef resolve_type(const ast::TypeExpr &t);
  bool is_model_loc(SourceLoc loc) const;
  bool eval_const_int(const ast::Expr &e, int64_t &out);

  // ---- expressions / statements (typecheck.cpp)
  TypedExprPtr check_expr(const ast::Expr &e);
  TypedStmtPtr check_stmt(const ast::Stmt &s);
  TypedExprPtr coerce(TypedExprPtr e, TypeRef target, SourceLoc loc);
  TypedExprPtr to_bool(TypedExprPtr e, SourceLoc loc);
  bool adopt_nondet(TypedExpr &e, TypeRef t);
  void type_function_body(const FnWork &w);
  void process_worklist();
  TypedExprPtr check_call(const ast::Expr &e);
  TypedExprPtr check_intrinsic(IntrinsicKind kind, const ast::Expr &e);
  TypedExprPtr check_member(const ast::Expr &e, bool call_ctx,
                            std::vector<TypedExprPtr> *call_args);
  TypedExprPtr check_binary(const ast::Expr &e);
  TypedExprPtr check_unary(const ast::Expr &e);
  TypedExprPtr check_cast(const ast::Expr &e);
  TypedStmtPtr check_decl_stmt(const ast::Stmt &s);
  void usual_arith(TypedExprPtr &a, TypedExprPtr &b, SourceLoc loc);

  // ---- templates (templates.cpp)
  void collect_top_level();
  TemplateEntry *find_template(const std::string &name);
  uint32_t instantiate_class(const std::string &name,
                             const std::vector<TypeRef> &args, SourceLoc loc);
  uint32_t instantiate_function(const std::string &name,
                                const std::vector<TypeRef> &args,
                                SourceLoc loc);
  bool deduce_pattern(const ast::TypeExpr &pattern, TypeRef arg,
                      const std::vector<std::string> &tparams,
                      SubstMap &binding);
  bool deduce_call(const TemplateEntry &te,
                   const std::vector<TypedExprPtr> &args,
                   std::vector<TypeRef> &out, SourceLoc loc);
  static bool contains_tparam(const ast::TypeExpr &t,
                              const std::vector<std::string> &tparams);
  static int pattern_specificity(const ast::TypeExpr &t,
                                 const std::vector<std::string> &tparams);

  // ---- classes (classes.cpp)
  uint32_t register_class(const ast::ClassDecl &decl, std::string display_name,
                          std::string template_name, std::vector<TypeRef> targs,
                          const SubstMap &subst, const std::string &cache_key);
  void build_layout(uint32_t cid, std::vector<FieldInfo> own_fields);
  uint32_t find_class(const std::string &display) const;
  const FieldInfo *find_field(uint32_t cid, const std::string &name,
                              SourceLoc loc);
  // Nearest-layer method lookup; fills the this-pointer upcast delta.
  std::vector<uint32_t> find_methods(uint32_t cid, const std::string &qualifier,
                                     const std::string &name,
                                     std::string *this_path, bool *this_abs,
                                     SourceLoc loc);
  bool check_member_access(uint32_t owner, ast::Access access, SourceLoc loc,
                           const std::string &what);
  void synthesize_object_construction(std::vector<TypedStmtPtr> &out,
                                      const TypedExpr &obj_ptr_proto,
                                      uint32_t cid,
                                      std::vector<TypedExprPtr> args,
                                      SourceLoc loc);
  void emit_dtor_calls(std::vector<TypedStmtPtr> &out,
                       const TypedExpr &obj_ptr_proto, uint32_t cid,
                       bool with_vbases, SourceLoc loc);
  uint32_t resolve_ctor(uint32_t cid, const std::vector<TypedExprPtr> &args,
                        SourceLoc loc);
  void build_ctor_body(const FnWork &w, std::vector<TypedStmtPtr> &out);
  void build_dtor_body_tail(const FnWork &w, std::vector<TypedStmtPtr> &out);
  void emit_ghost_assigns(uint32_t cid, std::vector<TypedStmtPtr> &out,
                          SourceLoc loc);
  uint32_t find_copy_ctor(uint32_t cid) const;
  uint32_t synth_special(uint32_t cid, const std::string &name, bool is_ctor,
                         SourceLoc loc);
  void make_pure_stub(uint32_t fn_id);

  uint32_t resolve_overload(const std::vector<uint32_t> &candidates,
                            const std::vector<TypedExprPtr> &args,
                            SourceLoc loc, const std::string &what);
  TypedExprPtr finish_call(uint32_t fn, TypedExprPtr this_arg,
                           std::vector<TypedExprPtr> args, SourceLoc loc,
                           uint32_t dispatch_slot = 0xffffffffu);
  TypedExprPtr check_method_call(TypedExprPtr base_lvalue, bool dynamic_ok,
                                 const std::string &qualifier,
                                 const std::string &name,
                                 std::vector<TypedExprPtr> args,
                                 SourceLoc loc);

  // expression constructors
  TypedExprPtr make_int(int64_t v, TypeRef t, SourceLoc loc);
  TypedExprPtr make_fn_const(uint32_t fn, SourceLoc loc);
  TypedExprPtr make_this(SourceLoc loc);
  TypedExprPtr make_addrof(TypedExprPtr e, SourceLoc loc);
  TypedExprPtr make_deref(TypedExprPtr e, SourceLoc loc);
  TypedExprPtr make_upcast(TypedExprPtr ptr, const std::string &path, bool abs,
                           uint32_t to_cls, SourceLoc loc);
  TypedExprPtr make_field_ref(TypedExprPtr obj_lvalue, const FieldInfo &f,
                              SourceLoc loc);
  TypedExprPtr clone_expr(const TypedExpr &e);

  // ---- scopes / function context
  struct LocalVar {
    std::string unique;
    TypeRef type = kNoType; // declared T& stored as T*
    bool is_ref = false;
  };
  struct FnContext {
    uint32_t fn_id = 0xffffffffu;
    uint32_t class_id = 0xffffffffu;
    SubstMap subst;
    std::vector<std::map<std::string, LocalVar>> scopes;
    std::map<std::string, int> name_uses; // local-name uniquing
    int loop_depth = 0;
    int switch_depth = 0;
    TypeRef ret = kNoType;
    bool ret_ref = false;
  };

  // Swaps in a fresh context carrying only a substitution map (used while
  // resolving template signatures outside any function body).
  struct CtxScope {
    Checker &c;
    FnContext saved;
    CtxScope(Checker &ck, SubstMap subst) : c(ck), saved(std::move(c.ctx_)) {
      c.ctx_ = FnContext{};
      c.ctx_.subst = std::move(subst);
    }
    ~CtxScope() { c.ctx_ = std::move(saved); }
  };
  struct QuietScope {
    Checker &c;
    bool saved;
    explicit QuietScope(Checker &ck) : c(ck), saved(ck.quiet_) {
      c.quiet_ = true;
    }
    ~QuietScope() { c.quiet_ = saved; }
  };

  LocalVar *lookup_local(const std::string &name);
  std::string declare_local(const std::string &name);

  const ast::TranslationUnit &tu_;
  const FileTable &files_;
  DiagEngine &diags_;
  TypedProgram &prog_;

  FnContext ctx_;
  bool quiet_ = false;
  int inst_depth_ = 0;
  std::map<std::string, TemplateEntry> templates_;
  std::map<std::string, uint32_t> class_index_;   // display name -> class id
  std::map<std::string, uint32_t> fn_index_;      // symbol -> fn id
  std::map<std::string, std::vector<uint32_t>> free_fns_; // name -> overloads
  std::map<std::string, uint32_t> global_index_;
  std::map<std::string, const ast::TypeExpr *> global_typedefs_;
  std::map<std::string, uint32_t> inst_cache_;    // canonical key -> id
  std::map<std::string, uint32_t> vslot_index_;   // intro$name$sig -> slot
  std::set<uint32_t> pure_fns_; // methods declared "= 0"
  std::deque<FnWork> worklist_;
  std::map<uint32_t, const ast::ClassDecl *> class_decls_;
  std::map<uint32_t, SubstMap> class_subst_;
  std::map<uint32_t, std::map<std::string, std::vector<uint32_t>>>
      class_method_index_; // class id -> name -> fn ids

  uint32_t register_function_shell(const ast::FunctionDecl &fd,
                                   const std::string &symbol_base,
                                   uint32_t class_id, const SubstMap &subst);
  std::string canon_args_key(const char *kind, const std::string &name,
                             const std::vector<TypeRef> &args) const;
  std::string type_list_names(const std::vector<TypeRef> &args) const;
};

} // namespace minibmc

#endif
