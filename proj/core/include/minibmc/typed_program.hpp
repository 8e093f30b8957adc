#ifndef MINIBMC_TYPED_PROGRAM_HPP
#define MINIBMC_TYPED_PROGRAM_HPP

#include "minibmc/ast.hpp"
#include "minibmc/types.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace minibmc {

// ------------------------------------------------------------- intrinsics

enum class IntrinsicKind : uint8_t {
  None,
  Assert,        // __ESBMC_assert(cond, "msg") / assert(cond)
  Assume,        // __ESBMC_assume(cond)
  Nondet,        // nondet()
  SetTerminate,  // set_terminate(fn)
  SetUnexpected, // set_unexpected(fn)
  Terminate,     // terminate()
  Free,          // heap release for delete (internal, synthesized)
  // Container model intrinsics (reserved for the built-in headers).
  SeqInit,
  AssocInit,
  AssocMultiInit,
  Copy,
  Clear,
  Size,
  Elem,          // element lvalue at position
  KeyAt,         // key rvalue at position
  SeqInsert,
  SeqErase,
  SeqSearch,
  SeqSearchRange,
  AssocInsert,
  AssocErase,
  AssocSearch,
  EraseAt,
  Count,
  SortRange,
  StrAppend,
  StrEq,
};

// ------------------------------------------------------ class information

enum class ContainerKind : uint8_t { None, Seq, Assoc, AssocMulti, Str };

struct BaseEdge {
  uint32_t base = 0;
  bool is_virtual = false;
  ast::Access access = ast::Access::Public;
};

// One subobject in the flattened layout of a class.  `path` is the chain of
// class names from just below the most-derived class down to the subobject
// itself ("Vehicle", "Car::Vehicle", ...); it is "" for the class itself and
// "virtual::<Base>" for shared virtual bases, so every upcast chain reaches
// the single shared copy.  Paths compose: an upcast appends path elements to
// the pointer's current path (or resets it, for virtual bases).
struct Subobject {
  uint32_t class_id = 0;
  std::string path;
  bool via_virtual = false;
  ast::Access path_access = ast::Access::Public; // folded along the path
};

struct FieldInfo {
  std::string name;        // declared name
  // Flattened key, unique within the object: fields of the class itself use
  // the plain name; fields of base subobjects are path-qualified
  // ("Vehicle::speed", and "Car::Vehicle::speed" for replicated copies).
  std::string key;
  TypeRef type = kNoType;
  ast::Access access = ast::Access::Public;
  uint32_t owner = 0;      // declaring class
  std::string subobj_path; // "" for own fields
  bool is_ghost = false;   // synthesized vtable$slot field
  SourceLoc loc;
};

// Virtual dispatch slots are shared along inheritance chains: a slot is
// created where a virtual method is first introduced and reused by every
// override below it.
struct VSlotRef {
  uint32_t slot = 0;
  uint32_t impl_fn = 0xffffffffu; // final overrider as seen from this class
  bool pure = false;              // overrider is still pure at this class
};

struct ClassInfo {
  std::string name;        // display name, e.g. "vector<int>"
  bool is_model = false;   // declared inside a built-in header
  bool defined = false;
  bool layout_done = false;
  bool is_abstract = false;
  std::vector<BaseEdge> bases;
  std::vector<Subobject> subobjects; // [0] is the class itself
  std::vector<uint32_t> vbases;      // virtual base class ids, canonical order
  std::vector<FieldInfo> fields;     // flattened (includes vtable$ ghosts)
  std::vector<VSlotRef> vslots;      // all virtual slots, base-first order
  std::vector<uint32_t> methods;     // function ids declared by this class
  std::vector<uint32_t> ctors;       // constructor function ids
  std::vector<std::string> friends;
  std::map<std::string, TypeRef> typedefs;
  uint32_t default_ctor = 0xffffffffu; // zero-argument constructor
  uint32_t dtor = 0xffffffffu; // ~0 when destruction is a no-op

  ContainerKind ckind = ContainerKind::None;
  TypeRef elem_type = kNoType;
  TypeRef key_type = kNoType;

  std::string template_name; // "vector" for "vector<int>"; empty otherwise
  std::vector<TypeRef> template_args;
  SourceLoc loc;
};

struct VSlotInfo {
  std::string name; // method name, "~" for virtual destructors
  uint32_t sig_id = 0;
  uint32_t intro_class = 0; // first class introducing the slot
};

// ------------------------------------------------------- typed expressions

enum class CastKind : uint8_t {
  Numeric,     // int<->int, float<->float, int<->float
  ToBool,      // scalar != 0
  FromBool,
  PtrUp,       // derived* -> base*  (adds subobject prefix)
  PtrDown,     // base* -> derived*  (strips prefix)
  PtrQual,     // qualification / reinterpretation between pointers
  NullToPtr,   // literal 0 to pointer
  ArrayDecay,  // T[n] lvalue -> T*
};

struct TypedExpr;
using TypedExprPtr = std::unique_ptr<TypedExpr>;

struct TypedExpr {
  enum class Kind : uint8_t {
    IntConst,
    FloatConst,
    BoolConst,
    StringConst, // becomes a string-container literal
    VarRef,      // local/param (unique name) or global
    GlobalRef,
    FieldRef,    // args[0] = object lvalue or pointer-deref; `field` is key
    IndexRef,    // args[0] = array lvalue, args[1] = index
    Deref,       // args[0] = pointer
    AddrOf,      // args[0] = lvalue (whole vars / array decay)
    FnConst,     // function id as a value
    Unary,
    Binary,
    Conditional,
    Call,        // static target fn_id; methods: args[0] = this
    VirtualCall, // slot_id; args[0] = this pointer
    IntrinsicCall,
    New,         // class_id; ctor fn_id (may be ~0 for scalars); args = ctor
                 // args.  ival==1: stack temporary (value is the object, the
                 // type is the class itself rather than a pointer)
    Cast,        // args[0]
    Nondet,
    This,
  };

  Kind kind;
  TypeRef type = kNoType;
  SourceLoc loc;
  bool lvalue = false;

  uint64_t ival = 0;
  double fval = 0.0;
  std::string sval;      // StringConst text; assert message
  std::string var;       // VarRef/GlobalRef name
  std::string field;     // FieldRef flattened key
  uint32_t fn_id = 0xffffffffu;
  uint32_t slot_id = 0xffffffffu;
  uint32_t class_id = 0xffffffffu;
  IntrinsicKind intr = IntrinsicKind::None;
  ast::UnaryOp uop{};
  ast::BinaryOp bop{};
  CastKind ck{};
  std::string cast_path; // PtrUp/PtrDown subobject path delta
  bool cast_abs = false; // PtrUp to a virtual base: path is absolute
  std::vector<TypedExprPtr> args;
};

// --------------------------------------------------------- typed statements

struct TypedStmt;
using TypedStmtPtr = std::unique_ptr<TypedStmt>;

struct TypedCatch {
  // Handler type descriptor; null type for catch(...).
  bool is_ellipsis = false;
  TypeRef type = kNoType; // value type (references recorded via by_ref)
  bool by_ref = false;
  std::string var;       // unique local name; empty if unnamed
  TypedStmtPtr body;
  SourceLoc loc;
};

struct TypedVarDecl {
  std::string name;      // unique within function
  std::string display;   // source spelling
  TypeRef type = kNoType;
  TypedExprPtr init;     // initializer (null for class locals with ctors:
                         // those get explicit call statements after the Decl)
  bool is_ref = false;   // declared as T&: `type` is T*, uses auto-deref
  SourceLoc loc;
};

struct TypedStmt {
  enum class Kind : uint8_t {
    Block,
    Decl,
    ExprStmt,
    If,
    While,
    For,
    Switch,
    Return,
    Break,
    Continue,
    Try,
    Throw,
    Delete,
    Empty,
  };

  Kind kind;
  SourceLoc loc;

  std::vector<TypedStmtPtr> stmts; // Block; Decl: synthesized ctor calls
  std::vector<TypedVarDecl> decls; // Decl
  TypedExprPtr expr;               // ExprStmt/If/While/Switch/Return/Throw/Delete
  TypedStmtPtr then_stmt, else_stmt, body, init_stmt;
  TypedExprPtr step;

  struct Case {
    bool is_default = false;
    int64_t value = 0;
    std::vector<TypedStmtPtr> stmts;
  };
  std::vector<Case> cases;

  std::vector<TypedCatch> handlers; // Try
};

// --------------------------------------------------------------- functions

struct ParamInfo {
  std::string name; // unique local name
  TypeRef type = kNoType;
  bool is_ref = false; // declared T&: `type` is T*, callers pass an address
  SourceLoc loc;
};

struct FunctionInfo {
  std::string symbol;  // unique: "main", "qCompare<int>", "vector<int>::size"
  std::string display; // user-facing name
  TypeRef ret = kNoType;
  bool ret_ref = false; // declared T&: `ret` is T*, call sites auto-deref
  std::vector<ParamInfo> params; // methods: params[0] is `this`
  TypedStmtPtr body;
  bool defined = false;
  bool is_method = false;
  bool is_ctor = false;
  bool is_dtor = false;
  bool is_virtual = false;
  bool hidden = false; // body begins with __ESBMC_HIDE:
  uint32_t class_id = 0xffffffffu;
  ast::Access access = ast::Access::Public;
  bool has_throw_spec = false;
  std::vector<TypeRef> throw_types;
  SourceLoc loc;
};

struct GlobalInfo {
  std::string name;
  TypeRef type = kNoType;
  TypedExprPtr init; // may be null -> zero initialised
  SourceLoc loc;
};

// ----------------------------------------------------------- typed program

struct TypedProgram {
  TypeTable types;
  std::vector<ClassInfo> classes;
  std::vector<VSlotInfo> vslots;
  std::vector<FunctionInfo> functions;
  std::vector<GlobalInfo> globals;
  uint32_t main_fn = 0xffffffffu;

  // One entry per template instantiation actually materialised; used by the
  // --show-typed dump.  Cache hits do not append.
  std::vector<std::string> instantiations;

  std::string type_name(TypeRef t) const;

  // Number of distinct inheritance paths from `derived` to `base` where
  // replicated bases count per path and shared virtual bases count once.
  // 0 = not a base, 1 = unambiguous.
  unsigned base_path_count(uint32_t derived, uint32_t base) const;

  // Unambiguous upcast path delta from `derived` to `base` ("" when equal).
  // Only valid when base_path_count(...) == 1; `abs` is set for virtual-base
  // targets whose path replaces rather than extends the pointer's path.
  std::string upcast_path(uint32_t derived, uint32_t base, bool &abs) const;

  // Access filtering per the inheritance joining rules: a member of `cls`'s
  // flattened view is visible to code inside `accessor_cls` (~0 for free
  // functions) when it is public along its path, or protected/private
  // visibility is granted by derivation or friendship.
  bool field_accessible(uint32_t cls, const FieldInfo &f,
                        uint32_t accessor_cls) const;

  const FunctionInfo *find_function(const std::string &symbol) const;
};

// Renders the typed program: one definition block per class, function and
// template instantiation (the --show-typed output).
std::string dump_typed_program(const TypedProgram &prog);

// Renders one expression in the dump's surface syntax.
std::string print_typed_expr(const TypedProgram &prog, const TypedExpr &e);

// Deep copy of an expression tree.
TypedExprPtr clone_typed_expr(const TypedExpr &e);

} // namespace minibmc

#endif
