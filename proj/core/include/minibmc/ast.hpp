#ifndef MINIBMC_AST_HPP
#define MINIBMC_AST_HPP

#include "minibmc/source.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

// Parse-level syntax tree.  Names are unresolved; types are syntactic.
// The type checker turns this into the typed program form.

namespace minibmc::ast {

struct Expr;
struct Stmt;
struct TypeExpr;
using ExprPtr = std::unique_ptr<Expr>;
using StmtPtr = std::unique_ptr<Stmt>;
using TypeExprPtr = std::unique_ptr<TypeExpr>;

// ---------------------------------------------------------------- types

struct TypeExpr {
  enum class Kind {
    Named,    // int, float, MyClass, vector<int>, possibly std::-qualified
    Nested,   // inner::name, e.g. vector<int>::iterator
    Pointer,
    Reference,
    Array,    // inner[size]
    FunctionPtr, // inner (*)(params)
  };

  Kind kind = Kind::Named;
  std::string name;                   // Named: type name; Nested: member name
  std::vector<TypeExprPtr> targs;     // Named: template arguments
  TypeExprPtr inner;                  // Nested/Pointer/Reference/Array: base;
                                      // FunctionPtr: return type
  ExprPtr array_size;                 // Array
  std::vector<TypeExprPtr> fn_params; // FunctionPtr
  bool is_const = false;
  bool is_volatile = false;
  SourceLoc loc;
};

TypeExprPtr clone(const TypeExpr &t);
std::string to_string(const TypeExpr &t);

// ----------------------------------------------------------- expressions

enum class UnaryOp { Plus, Minus, Not, BitNot, Deref, AddrOf, PreInc, PreDec, PostInc, PostDec };
enum class BinaryOp {
  Add, Sub, Mul, Div, Rem,
  Shl, Shr,
  Lt, Gt, Le, Ge, Eq, Ne,
  BitAnd, BitXor, BitOr,
  LogAnd, LogOr,
  Assign, AddAssign, SubAssign, MulAssign, DivAssign, RemAssign,
  AndAssign, OrAssign, XorAssign,
};

struct Expr {
  enum class Kind {
    IntLit,      // int_value; char literals carry is_char
    FloatLit,    // float_value
    BoolLit,     // bool_value
    StringLit,   // string_value
    Ident,       // name (possibly qualified: parts), optional template args
    Unary,       // op, lhs
    Binary,      // op, lhs, rhs
    Conditional, // cond ? lhs : rhs
    Call,        // callee(args)
    Member,      // base.name / base->name, optional Class:: qualifier
    Index,       // base[index]
    Cast,        // (type)expr
    New,         // new type(args)
    This,
    SizeofType,  // sizeof(type)
    SizeofExpr,  // sizeof expr
  };

  Kind kind;
  SourceLoc loc;

  uint64_t int_value = 0;
  bool int_is_unsigned = false;
  bool int_is_long = false;
  bool is_char = false;
  double float_value = 0.0;
  bool float_is_single = false;
  bool bool_value = false;
  std::string string_value;

  std::vector<std::string> parts; // Ident: qualified name parts
  std::vector<TypeExprPtr> targs; // Ident: explicit template args
  bool has_explicit_targs = false;

  UnaryOp unary_op{};
  BinaryOp binary_op{};
  ExprPtr lhs, rhs, cond;

  ExprPtr callee;
  std::vector<ExprPtr> args;

  ExprPtr base;          // Member/Index
  std::string name;      // Member: member name
  std::string qualifier; // Member: explicit Class:: qualifier (static dispatch)
  bool is_arrow = false; // Member: -> vs .
  ExprPtr index;

  TypeExprPtr type; // Cast/New/SizeofType
};

// ------------------------------------------------------------ statements

struct VarDeclarator {
  std::string name;
  TypeExprPtr type;           // full type after declarator suffixes
  ExprPtr init;               // "= expr" initializer
  std::vector<ExprPtr> ctor_args; // "T x(a, b)" initializer
  bool has_ctor_init = false;
  SourceLoc loc;
};

struct CatchClause {
  bool is_ellipsis = false;
  TypeExprPtr type;       // null for catch(...)
  std::string var_name;   // may be empty (unnamed)
  StmtPtr body;
  SourceLoc loc;
};

struct SwitchCase {
  bool is_default = false;
  ExprPtr value;
  std::vector<StmtPtr> stmts;
  SourceLoc loc;
};

struct Stmt {
  enum class Kind {
    Block,    // stmts
    If,       // cond, then_stmt, else_stmt
    While,    // cond, body
    For,      // init_stmt, cond, step, body
    Switch,   // cond, cases
    Return,   // value (optional)
    Break,
    Continue,
    Decl,     // declarators
    ExprStmt, // expr
    Try,      // body, handlers
    Throw,    // value (null for re-throw)
    Delete,   // expr
    Label,    // name, then next statement stands alone
    Empty,
  };

  Kind kind;
  SourceLoc loc;

  std::vector<StmtPtr> stmts;
  ExprPtr expr;
  StmtPtr then_stmt, else_stmt, body;
  StmtPtr init_stmt;
  ExprPtr step;
  std::vector<SwitchCase> cases;
  std::vector<VarDeclarator> decls;
  std::vector<CatchClause> handlers;
  std::string label;
};

// ----------------------------------------------------------- declarations

enum class Access { Public, Protected, Private };

struct ParamDecl {
  TypeExprPtr type;
  std::string name;
  SourceLoc loc;
};

struct MemInit { // constructor initializer list entry
  std::string name; // base class or member name
  std::vector<ExprPtr> args;
  SourceLoc loc;
};

struct FunctionDecl {
  std::string name; // "main", "qCompare", "operator[]", "~Stack", ...
  TypeExprPtr return_type; // null for ctor/dtor
  std::vector<ParamDecl> params;
  StmtPtr body;
  bool is_virtual = false;
  bool is_pure = false;
  bool is_ctor = false;
  bool is_dtor = false;
  bool has_throw_spec = false;
  std::vector<TypeExprPtr> throw_types;
  std::vector<MemInit> ctor_inits;
  Access access = Access::Public;
  SourceLoc loc;
};
using FunctionDeclPtr = std::unique_ptr<FunctionDecl>;

struct FieldDecl {
  TypeExprPtr type;
  std::string name;
  Access access = Access::Public;
  SourceLoc loc;
};

struct BaseSpec {
  std::string name;
  std::vector<TypeExprPtr> targs;
  bool is_virtual = false;
  Access access = Access::Public;
  SourceLoc loc;
};

struct TypedefDecl {
  TypeExprPtr type;
  std::string name;
  SourceLoc loc;
};

struct ClassDecl {
  std::string name;
  bool is_struct = false;
  bool is_forward = false; // "class X;" declaration without a body
  std::vector<BaseSpec> bases;
  std::vector<FieldDecl> fields;
  std::vector<FunctionDeclPtr> methods;
  std::vector<TypedefDecl> typedefs;
  std::vector<std::string> friends; // "friend class X;"
  SourceLoc loc;
};
using ClassDeclPtr = std::unique_ptr<ClassDecl>;

struct TemplateDecl {
  std::vector<std::string> params; // empty means "template<>"
  ClassDeclPtr class_decl;
  FunctionDeclPtr fn_decl;
  // Specialization arguments: class S<T*> / qCompare<float>.  Empty for a
  // primary template; for explicit function specializations they may also be
  // deduced from the parameter list.
  std::vector<TypeExprPtr> spec_args;
  bool has_spec_args = false;
  SourceLoc loc;
};
using TemplateDeclPtr = std::unique_ptr<TemplateDecl>;

struct GlobalVarDecl {
  VarDeclarator var;
  SourceLoc loc;
};

struct Decl {
  enum class Kind { Class, Function, Template, GlobalVar, Typedef };
  Kind kind;
  ClassDeclPtr class_decl;
  FunctionDeclPtr fn_decl;
  TemplateDeclPtr template_decl;
  std::unique_ptr<GlobalVarDecl> var_decl;
  std::unique_ptr<TypedefDecl> typedef_decl;
};

struct TranslationUnit {
  std::vector<Decl> decls;
};

} // namespace minibmc::ast

#endif
