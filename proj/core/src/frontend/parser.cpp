#include "minibmc/parser.hpp"

#include <cassert>
#include <optional>
#include <sstream>

namespace minibmc {

using namespace ast;

namespace {

// Built-in scalar type names that may begin a cast such as (int)x.
bool is_builtin_type_name(const std::string &n) {
  return n == "bool" || n == "char" || n == "signed char" ||
         n == "unsigned char" || n == "short" || n == "unsigned short" ||
         n == "int" || n == "unsigned" || n == "unsigned int" ||
         n == "long" || n == "unsigned long" || n == "float" ||
         n == "double" || n == "void" || n == "size_t" || n == "uint8_t" ||
         n == "int8_t" || n == "uint16_t" || n == "int16_t" ||
         n == "uint32_t" || n == "int32_t" || n == "uint64_t" ||
         n == "int64_t";
}

class Parser {
public:
  Parser(const SourceUnit &unit, DiagEngine &diags)
      : toks_(unit.tokens), diags_(diags) {}

  TranslationUnit run() {
    TranslationUnit tu;
    while (!at_eof()) {
      size_t before = pos_;
      parse_top_decl(tu);
      if (pos_ == before) {
        // Did not consume anything; skip a token to guarantee progress.
        error(cur().loc, "unexpected " + describe(cur()));
        advance();
      }
    }
    return tu;
  }

private:
  const std::vector<Token> &toks_;
  DiagEngine &diags_;
  size_t pos_ = 0;
  int trial_depth_ = 0;

  // ------------------------------------------------------------ plumbing

  const Token &cur() const { return toks_[std::min(pos_, toks_.size() - 1)]; }
  const Token &peek(size_t n = 1) const {
    return toks_[std::min(pos_ + n, toks_.size() - 1)];
  }
  bool at_eof() const { return cur().kind == TokenKind::Eof; }
  const Token &advance() {
    const Token &t = cur();
    if (pos_ + 1 < toks_.size())
      ++pos_;
    return t;
  }

  bool match_punct(const char *p) {
    if (cur().is_punct(p)) {
      advance();
      return true;
    }
    return false;
  }
  bool match_kw(const char *k) {
    if (cur().is_kw(k)) {
      advance();
      return true;
    }
    return false;
  }

  static std::string describe(const Token &t) {
    switch (t.kind) {
    case TokenKind::Eof: return "end of input";
    case TokenKind::Identifier: return "identifier '" + t.text + "'";
    case TokenKind::Keyword: return "'" + t.text + "'";
    case TokenKind::Punct: return "'" + t.text + "'";
    case TokenKind::IntLit:
    case TokenKind::FloatLit: return "numeric literal";
    case TokenKind::CharLit: return "character literal";
    case TokenKind::StringLit: return "string literal";
    case TokenKind::IncludeDirective: return "#include";
    }
    return "token";
  }

  void error(SourceLoc loc, const std::string &msg) {
    if (trial_depth_ == 0)
      diags_.error(loc, msg);
  }

  bool expect_punct(const char *p) {
    if (match_punct(p))
      return true;
    error(cur().loc,
          std::string("expected '") + p + "' before " + describe(cur()));
    return false;
  }
  bool expect_kw(const char *k) {
    if (match_kw(k))
      return true;
    error(cur().loc,
          std::string("expected '") + k + "' before " + describe(cur()));
    return false;
  }
  std::string expect_ident(const char *what) {
    if (cur().is_ident())
      return advance().text;
    error(cur().loc,
          std::string("expected ") + what + " before " + describe(cur()));
    return "";
  }

  void sync_stmt() {
    while (!at_eof()) {
      if (cur().is_punct(";")) {
        advance();
        return;
      }
      if (cur().is_punct("}"))
        return;
      advance();
    }
  }

  struct Trial {
    Parser &p;
    size_t save;
    bool committed = false;
    explicit Trial(Parser &p) : p(p), save(p.pos_) { ++p.trial_depth_; }
    void commit() {
      committed = true;
      --p.trial_depth_;
    }
    ~Trial() {
      if (!committed) {
        p.pos_ = save;
        --p.trial_depth_;
      }
    }
  };

  // --------------------------------------------------------------- types

  // Parses a decl-specifier type (no declarator suffixes).  Returns null if
  // the tokens do not begin a type.
  TypeExprPtr parse_declspec() {
    SourceLoc loc = cur().loc;
    bool is_const = false, is_volatile = false;
    for (;;) {
      if (match_kw("const"))
        is_const = true;
      else if (match_kw("volatile"))
        is_volatile = true;
      else
        break;
    }

    TypeExprPtr ty;
    // Built-in combination: [signed|unsigned] [short|long] [char|int|...]
    if (cur().kind == TokenKind::Keyword) {
      const std::string &k = cur().text;
      if (k == "signed" || k == "unsigned" || k == "short" || k == "long" ||
          k == "char" || k == "int" || k == "bool" || k == "float" ||
          k == "double" || k == "void") {
        bool uns = false, sgn = false, lng = false, shrt = false;
        std::string base;
        for (;;) {
          const std::string &w = cur().text;
          if (cur().kind != TokenKind::Keyword)
            break;
          if (w == "unsigned") { uns = true; advance(); }
          else if (w == "signed") { sgn = true; advance(); }
          else if (w == "long") { lng = true; advance(); }
          else if (w == "short") { shrt = true; advance(); }
          else if (w == "char" || w == "int" || w == "bool" || w == "float" ||
                   w == "double" || w == "void") {
            base = w;
            advance();
          } else
            break;
        }
        std::string name;
        if (base == "char")
          name = uns ? "unsigned char" : (sgn ? "signed char" : "char");
        else if (base == "bool" || base == "float" || base == "double" ||
                 base == "void")
          name = base;
        else if (shrt)
          name = uns ? "unsigned short" : "short";
        else if (lng)
          name = uns ? "unsigned long" : "long";
        else if (uns)
          name = "unsigned";
        else if (!base.empty() || sgn)
          name = "int";
        else
          name = "int";
        ty = std::make_unique<TypeExpr>();
        ty->kind = TypeExpr::Kind::Named;
        ty->name = name;
        ty->loc = loc;
      }
    }

    if (!ty) {
      if (!cur().is_ident())
        return nullptr;
      // std:: prefix is accepted and dropped; the built-in models live in an
      // implicit std namespace.
      if (cur().text == "std" && peek().is_punct("::")) {
        advance();
        advance();
        if (!cur().is_ident())
          return nullptr;
      }
      ty = std::make_unique<TypeExpr>();
      ty->kind = TypeExpr::Kind::Named;
      ty->name = advance().text;
      ty->loc = loc;
      if (cur().is_punct("<")) {
        Trial trial(*this);
        std::vector<TypeExprPtr> targs;
        if (parse_template_args(targs)) {
          trial.commit();
          ty->targs = std::move(targs);
        }
      }
      // Nested member types: vector<int>::iterator
      while (cur().is_punct("::") && peek().is_ident()) {
        advance();
        auto outer = std::move(ty);
        ty = std::make_unique<TypeExpr>();
        ty->kind = TypeExpr::Kind::Nested;
        ty->inner = std::move(outer);
        ty->name = advance().text;
        ty->loc = loc;
      }
    }

    for (;;) {
      if (match_kw("const"))
        is_const = true;
      else if (match_kw("volatile"))
        is_volatile = true;
      else
        break;
    }
    ty->is_const = is_const;
    ty->is_volatile = is_volatile;
    return ty;
  }

  // '<' type {',' type} '>'   with ">>" splitting for nested closers.
  bool parse_template_args(std::vector<TypeExprPtr> &out) {
    if (!match_punct("<"))
      return false;
    if (match_punct(">"))
      return true; // empty list (explicit specialization of a 0-arg form)
    for (;;) {
      TypeExprPtr t = parse_type();
      if (!t)
        return false;
      out.push_back(std::move(t));
      if (match_punct(","))
        continue;
      if (match_punct(">"))
        return true;
      if (cur().is_punct(">>")) {
        // Split '>>' into two closers.
        const_cast<Token &>(cur()).text = ">";
        return true;
      }
      return false;
    }
  }

  // Full type: declspec plus pointer/reference suffixes.
  TypeExprPtr parse_type() {
    TypeExprPtr ty = parse_declspec();
    if (!ty)
      return nullptr;
    for (;;) {
      if (cur().is_punct("*")) {
        advance();
        auto p = std::make_unique<TypeExpr>();
        p->kind = TypeExpr::Kind::Pointer;
        p->inner = std::move(ty);
        p->loc = p->inner->loc;
        if (match_kw("const"))
          p->is_const = true;
        ty = std::move(p);
      } else if (cur().is_punct("&")) {
        advance();
        auto r = std::make_unique<TypeExpr>();
        r->kind = TypeExpr::Kind::Reference;
        r->inner = std::move(ty);
        r->loc = r->inner->loc;
        ty = std::move(r);
        break; // no further suffixes after a reference
      } else {
        break;
      }
    }
    return ty;
  }

  // ---------------------------------------------------------- expressions

  ExprPtr make_expr(Expr::Kind k, SourceLoc loc) {
    auto e = std::make_unique<Expr>();
    e->kind = k;
    e->loc = loc;
    return e;
  }

  ExprPtr parse_expr() { return parse_assignment(); }

  ExprPtr parse_assignment() {
    ExprPtr lhs = parse_conditional();
    if (!lhs)
      return nullptr;
    struct {
      const char *tok;
      BinaryOp op;
    } ops[] = {{"=", BinaryOp::Assign},    {"+=", BinaryOp::AddAssign},
               {"-=", BinaryOp::SubAssign}, {"*=", BinaryOp::MulAssign},
               {"/=", BinaryOp::DivAssign}, {"%=", BinaryOp::RemAssign},
               {"&=", BinaryOp::AndAssign}, {"|=", BinaryOp::OrAssign},
               {"^=", BinaryOp::XorAssign}};
    for (auto &o : ops) {
      if (cur().is_punct(o.tok)) {
        SourceLoc loc = advance().loc;
        ExprPtr rhs = parse_assignment();
        if (!rhs)
          return nullptr;
        auto e = make_expr(Expr::Kind::Binary, loc);
        e->binary_op = o.op;
        e->lhs = std::move(lhs);
        e->rhs = std::move(rhs);
        return e;
      }
    }
    return lhs;
  }

  ExprPtr parse_conditional() {
    ExprPtr c = parse_binary(0);
    if (!c)
      return nullptr;
    if (cur().is_punct("?")) {
      SourceLoc loc = advance().loc;
      ExprPtr t = parse_assignment();
      if (!expect_punct(":"))
        return nullptr;
      ExprPtr f = parse_conditional();
      if (!t || !f)
        return nullptr;
      auto e = make_expr(Expr::Kind::Conditional, loc);
      e->cond = std::move(c);
      e->lhs = std::move(t);
      e->rhs = std::move(f);
      return e;
    }
    return c;
  }

  struct BinOpInfo {
    const char *tok;
    BinaryOp op;
    int prec;
  };

  static const BinOpInfo *binop_table() {
    static const BinOpInfo table[] = {
        {"||", BinaryOp::LogOr, 1},  {"&&", BinaryOp::LogAnd, 2},
        {"|", BinaryOp::BitOr, 3},   {"^", BinaryOp::BitXor, 4},
        {"&", BinaryOp::BitAnd, 5},  {"==", BinaryOp::Eq, 6},
        {"!=", BinaryOp::Ne, 6},     {"<", BinaryOp::Lt, 7},
        {">", BinaryOp::Gt, 7},      {"<=", BinaryOp::Le, 7},
        {">=", BinaryOp::Ge, 7},     {"<<", BinaryOp::Shl, 8},
        {">>", BinaryOp::Shr, 8},    {"+", BinaryOp::Add, 9},
        {"-", BinaryOp::Sub, 9},     {"*", BinaryOp::Mul, 10},
        {"/", BinaryOp::Div, 10},    {"%", BinaryOp::Rem, 10},
        {nullptr, BinaryOp::Add, 0},
    };
    return table;
  }

  ExprPtr parse_binary(int min_prec) {
    ExprPtr lhs = parse_unary();
    if (!lhs)
      return nullptr;
    for (;;) {
      const BinOpInfo *hit = nullptr;
      for (const BinOpInfo *i = binop_table(); i->tok; ++i) {
        if (cur().is_punct(i->tok) && i->prec > min_prec) {
          hit = i;
          break;
        }
      }
      if (!hit)
        return lhs;
      SourceLoc loc = advance().loc;
      ExprPtr rhs = parse_binary(hit->prec);
      if (!rhs)
        return nullptr;
      auto e = make_expr(Expr::Kind::Binary, loc);
      e->binary_op = hit->op;
      e->lhs = std::move(lhs);
      e->rhs = std::move(rhs);
      lhs = std::move(e);
    }
  }

  bool starts_unary_expr() const {
    const Token &t = cur();
    if (t.kind == TokenKind::IntLit || t.kind == TokenKind::FloatLit ||
        t.kind == TokenKind::CharLit || t.kind == TokenKind::StringLit ||
        t.is_ident())
      return true;
    if (t.is_kw("true") || t.is_kw("false") || t.is_kw("this") ||
        t.is_kw("new") || t.is_kw("sizeof"))
      return true;
    return t.is_punct("(") || t.is_punct("!") || t.is_punct("-") ||
           t.is_punct("+") || t.is_punct("~") || t.is_punct("*") ||
           t.is_punct("&") || t.is_punct("++") || t.is_punct("--");
  }

  ExprPtr parse_unary() {
    SourceLoc loc = cur().loc;
    struct {
      const char *tok;
      UnaryOp op;
    } ops[] = {{"!", UnaryOp::Not},    {"~", UnaryOp::BitNot},
               {"-", UnaryOp::Minus},  {"+", UnaryOp::Plus},
               {"*", UnaryOp::Deref},  {"&", UnaryOp::AddrOf},
               {"++", UnaryOp::PreInc}, {"--", UnaryOp::PreDec}};
    for (auto &o : ops) {
      if (cur().is_punct(o.tok)) {
        advance();
        ExprPtr sub = parse_unary();
        if (!sub)
          return nullptr;
        auto e = make_expr(Expr::Kind::Unary, loc);
        e->unary_op = o.op;
        e->lhs = std::move(sub);
        return e;
      }
    }

    if (cur().is_kw("new")) {
      advance();
      TypeExprPtr ty = parse_type();
      if (!ty) {
        error(loc, "expected type after 'new'");
        return nullptr;
      }
      auto e = make_expr(Expr::Kind::New, loc);
      e->type = std::move(ty);
      if (match_punct("(")) {
        if (!cur().is_punct(")")) {
          if (!parse_expr_list(e->args))
            return nullptr;
        }
        if (!expect_punct(")"))
          return nullptr;
      }
      return e;
    }

    if (cur().is_kw("sizeof")) {
      advance();
      if (cur().is_punct("(")) {
        Trial trial(*this);
        advance();
        TypeExprPtr ty = parse_type();
        if (ty && cur().is_punct(")")) {
          advance();
          trial.commit();
          auto e = make_expr(Expr::Kind::SizeofType, loc);
          e->type = std::move(ty);
          return e;
        }
      }
      ExprPtr sub = parse_unary();
      if (!sub)
        return nullptr;
      auto e = make_expr(Expr::Kind::SizeofExpr, loc);
      e->lhs = std::move(sub);
      return e;
    }

    // C-style cast: '(' type ')' unary-expression.  Only attempted for
    // types that are visibly types (built-in scalars, pointers, references,
    // template-ids) so that parenthesised expressions are not swallowed.
    if (cur().is_punct("(")) {
      Trial trial(*this);
      advance();
      TypeExprPtr ty = parse_type();
      if (ty && cur().is_punct(")")) {
        bool plausible = ty->kind == TypeExpr::Kind::Pointer ||
                         ty->kind == TypeExpr::Kind::Reference ||
                         (ty->kind == TypeExpr::Kind::Named &&
                          (is_builtin_type_name(ty->name) || !ty->targs.empty()));
        if (plausible) {
          advance(); // ')'
          if (starts_unary_expr()) {
            ExprPtr sub = parse_unary();
            if (sub) {
              trial.commit();
              auto e = make_expr(Expr::Kind::Cast, loc);
              e->type = std::move(ty);
              e->lhs = std::move(sub);
              return e;
            }
          }
        }
      }
    }

    return parse_postfix();
  }

  bool parse_expr_list(std::vector<ExprPtr> &out) {
    for (;;) {
      ExprPtr e = parse_assignment();
      if (!e)
        return false;
      out.push_back(std::move(e));
      if (!match_punct(","))
        return true;
    }
  }

  ExprPtr parse_postfix() {
    ExprPtr e = parse_primary();
    if (!e)
      return nullptr;
    for (;;) {
      SourceLoc loc = cur().loc;
      if (cur().is_punct("(")) {
        advance();
        auto call = make_expr(Expr::Kind::Call, loc);
        if (!cur().is_punct(")")) {
          if (!parse_expr_list(call->args))
            return nullptr;
        }
        if (!expect_punct(")"))
          return nullptr;
        call->callee = std::move(e);
        e = std::move(call);
      } else if (cur().is_punct("[")) {
        advance();
        ExprPtr idx = parse_expr();
        if (!idx || !expect_punct("]"))
          return nullptr;
        auto ix = make_expr(Expr::Kind::Index, loc);
        ix->base = std::move(e);
        ix->index = std::move(idx);
        e = std::move(ix);
      } else if (cur().is_punct(".") || cur().is_punct("->")) {
        bool arrow = cur().is_punct("->");
        advance();
        auto m = make_expr(Expr::Kind::Member, loc);
        m->is_arrow = arrow;
        // Optional Class:: qualifier for statically dispatched calls.
        if (cur().is_ident() && peek().is_punct("::")) {
          m->qualifier = advance().text;
          advance();
        }
        if (cur().is_ident())
          m->name = advance().text;
        else if (cur().is_punct("~") && peek().is_ident()) {
          advance();
          m->name = "~" + advance().text;
        } else {
          error(cur().loc, "expected member name after '" +
                               std::string(arrow ? "->" : ".") + "'");
          return nullptr;
        }
        m->base = std::move(e);
        e = std::move(m);
      } else if (cur().is_punct("++") || cur().is_punct("--")) {
        bool inc = cur().is_punct("++");
        advance();
        auto u = make_expr(Expr::Kind::Unary, loc);
        u->unary_op = inc ? UnaryOp::PostInc : UnaryOp::PostDec;
        u->lhs = std::move(e);
        e = std::move(u);
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_primary() {
    SourceLoc loc = cur().loc;
    const Token &t = cur();

    switch (t.kind) {
    case TokenKind::IntLit: {
      auto e = make_expr(Expr::Kind::IntLit, loc);
      e->int_value = t.int_value;
      e->int_is_unsigned = t.int_is_unsigned;
      e->int_is_long = t.int_is_long;
      advance();
      return e;
    }
    case TokenKind::CharLit: {
      auto e = make_expr(Expr::Kind::IntLit, loc);
      e->int_value = t.int_value;
      e->is_char = true;
      advance();
      return e;
    }
    case TokenKind::FloatLit: {
      auto e = make_expr(Expr::Kind::FloatLit, loc);
      e->float_value = t.float_value;
      e->float_is_single = t.float_is_single;
      advance();
      return e;
    }
    case TokenKind::StringLit: {
      auto e = make_expr(Expr::Kind::StringLit, loc);
      e->string_value = t.text;
      advance();
      return e;
    }
    default:
      break;
    }

    if (t.is_kw("true") || t.is_kw("false")) {
      auto e = make_expr(Expr::Kind::BoolLit, loc);
      e->bool_value = t.is_kw("true");
      advance();
      return e;
    }
    if (t.is_kw("this")) {
      advance();
      return make_expr(Expr::Kind::This, loc);
    }
    if (t.is_punct("(")) {
      advance();
      ExprPtr e = parse_expr();
      if (!e || !expect_punct(")"))
        return nullptr;
      return e;
    }
    if (t.is_ident()) {
      auto e = make_expr(Expr::Kind::Ident, loc);
      // std:: prefix dropped, Class::name kept as qualified parts.
      if (t.text == "std" && peek().is_punct("::")) {
        advance();
        advance();
      }
      if (!cur().is_ident()) {
        error(cur().loc, "expected identifier after 'std::'");
        return nullptr;
      }
      e->parts.push_back(advance().text);
      while (cur().is_punct("::") && peek().is_ident()) {
        advance();
        e->parts.push_back(advance().text);
      }
      // Explicit template arguments: name<T,...> followed by '('.
      if (cur().is_punct("<")) {
        Trial trial(*this);
        std::vector<TypeExprPtr> targs;
        if (parse_template_args(targs) && cur().is_punct("(")) {
          trial.commit();
          e->targs = std::move(targs);
          e->has_explicit_targs = true;
        }
      }
      return e;
    }

    error(loc, "expected expression before " + describe(t));
    return nullptr;
  }

  // ----------------------------------------------------------- statements

  StmtPtr make_stmt(Stmt::Kind k, SourceLoc loc) {
    auto s = std::make_unique<Stmt>();
    s->kind = k;
    s->loc = loc;
    return s;
  }

  StmtPtr parse_block() {
    SourceLoc loc = cur().loc;
    if (!expect_punct("{"))
      return make_stmt(Stmt::Kind::Empty, loc);
    auto b = make_stmt(Stmt::Kind::Block, loc);
    while (!at_eof() && !cur().is_punct("}")) {
      size_t before = pos_;
      StmtPtr s = parse_stmt();
      if (s)
        b->stmts.push_back(std::move(s));
      if (pos_ == before) {
        error(cur().loc, "unexpected " + describe(cur()) + " in block");
        advance();
      }
    }
    expect_punct("}");
    return b;
  }

  StmtPtr parse_stmt() {
    SourceLoc loc = cur().loc;

    if (cur().is_punct("{"))
      return parse_block();
    if (cur().is_punct(";")) {
      advance();
      return make_stmt(Stmt::Kind::Empty, loc);
    }

    if (cur().is_kw("if")) {
      advance();
      auto s = make_stmt(Stmt::Kind::If, loc);
      if (!expect_punct("("))
        return nullptr;
      s->expr = parse_expr();
      if (!s->expr) {
        sync_stmt();
        return nullptr;
      }
      expect_punct(")");
      s->then_stmt = parse_stmt();
      if (match_kw("else"))
        s->else_stmt = parse_stmt();
      return s;
    }

    if (cur().is_kw("while")) {
      advance();
      auto s = make_stmt(Stmt::Kind::While, loc);
      if (!expect_punct("("))
        return nullptr;
      s->expr = parse_expr();
      if (!s->expr) {
        sync_stmt();
        return nullptr;
      }
      expect_punct(")");
      s->body = parse_stmt();
      return s;
    }

    if (cur().is_kw("for")) {
      advance();
      auto s = make_stmt(Stmt::Kind::For, loc);
      if (!expect_punct("("))
        return nullptr;
      if (!cur().is_punct(";"))
        s->init_stmt = parse_decl_or_expr_stmt();
      else
        advance();
      if (!cur().is_punct(";"))
        s->expr = parse_expr();
      expect_punct(";");
      if (!cur().is_punct(")"))
        s->step = parse_expr();
      expect_punct(")");
      s->body = parse_stmt();
      return s;
    }

    if (cur().is_kw("switch")) {
      advance();
      auto s = make_stmt(Stmt::Kind::Switch, loc);
      if (!expect_punct("("))
        return nullptr;
      s->expr = parse_expr();
      expect_punct(")");
      if (!expect_punct("{"))
        return s;
      while (!at_eof() && !cur().is_punct("}")) {
        SwitchCase c;
        c.loc = cur().loc;
        if (match_kw("case")) {
          c.value = parse_expr();
          expect_punct(":");
        } else if (match_kw("default")) {
          c.is_default = true;
          expect_punct(":");
        } else {
          error(cur().loc, "expected 'case' or 'default' in switch body");
          sync_stmt();
          continue;
        }
        while (!at_eof() && !cur().is_punct("}") && !cur().is_kw("case") &&
               !cur().is_kw("default")) {
          StmtPtr st = parse_stmt();
          if (st)
            c.stmts.push_back(std::move(st));
          else
            break;
        }
        s->cases.push_back(std::move(c));
      }
      expect_punct("}");
      return s;
    }

    if (cur().is_kw("return")) {
      advance();
      auto s = make_stmt(Stmt::Kind::Return, loc);
      if (!cur().is_punct(";"))
        s->expr = parse_expr();
      expect_punct(";");
      return s;
    }
    if (cur().is_kw("break")) {
      advance();
      expect_punct(";");
      return make_stmt(Stmt::Kind::Break, loc);
    }
    if (cur().is_kw("continue")) {
      advance();
      expect_punct(";");
      return make_stmt(Stmt::Kind::Continue, loc);
    }

    if (cur().is_kw("try")) {
      advance();
      auto s = make_stmt(Stmt::Kind::Try, loc);
      s->body = parse_block();
      while (cur().is_kw("catch")) {
        CatchClause cc;
        cc.loc = cur().loc;
        advance();
        expect_punct("(");
        if (cur().is_punct("...")) {
          advance();
          cc.is_ellipsis = true;
        } else {
          auto [ty, name] = parse_param_declarator();
          cc.type = std::move(ty);
          cc.var_name = name;
          if (!cc.type)
            error(cc.loc, "expected exception declaration in catch clause");
        }
        expect_punct(")");
        cc.body = parse_block();
        s->handlers.push_back(std::move(cc));
      }
      if (s->handlers.empty())
        error(loc, "'try' block requires at least one catch clause");
      return s;
    }

    if (cur().is_kw("throw")) {
      advance();
      auto s = make_stmt(Stmt::Kind::Throw, loc);
      if (!cur().is_punct(";"))
        s->expr = parse_expr();
      expect_punct(";");
      return s;
    }

    if (cur().is_kw("delete")) {
      advance();
      auto s = make_stmt(Stmt::Kind::Delete, loc);
      s->expr = parse_expr();
      expect_punct(";");
      return s;
    }

    // Label statement (used by the models for __ESBMC_HIDE:).
    if (cur().is_ident() && peek().is_punct(":")) {
      auto s = make_stmt(Stmt::Kind::Label, loc);
      s->label = advance().text;
      advance(); // ':'
      return s;
    }

    return parse_decl_or_expr_stmt();
  }

  // Declarator inside parameter or catch position: type [name], including
  // the function-pointer form T (*name)(params).
  std::pair<TypeExprPtr, std::string> parse_param_declarator() {
    TypeExprPtr base = parse_declspec();
    if (!base)
      return {nullptr, ""};
    // pointer/ref suffixes, then optional funcptr declarator
    for (;;) {
      if (cur().is_punct("*")) {
        advance();
        auto p = std::make_unique<TypeExpr>();
        p->kind = TypeExpr::Kind::Pointer;
        p->inner = std::move(base);
        p->loc = p->inner->loc;
        if (match_kw("const"))
          p->is_const = true;
        base = std::move(p);
      } else if (cur().is_punct("&")) {
        advance();
        auto r = std::make_unique<TypeExpr>();
        r->kind = TypeExpr::Kind::Reference;
        r->inner = std::move(base);
        r->loc = r->inner->loc;
        base = std::move(r);
      } else {
        break;
      }
    }
    if (cur().is_punct("(") && peek().is_punct("*")) {
      // T (*name)(params)
      advance();
      advance();
      std::string name;
      if (cur().is_ident())
        name = advance().text;
      expect_punct(")");
      auto fp = std::make_unique<TypeExpr>();
      fp->kind = TypeExpr::Kind::FunctionPtr;
      fp->inner = std::move(base);
      fp->loc = fp->inner->loc;
      expect_punct("(");
      if (!cur().is_punct(")")) {
        for (;;) {
          TypeExprPtr pt = parse_type();
          if (!pt)
            break;
          if (cur().is_ident())
            advance(); // parameter name in the type is ignored
          fp->fn_params.push_back(std::move(pt));
          if (!match_punct(","))
            break;
        }
      }
      expect_punct(")");
      return {std::move(fp), name};
    }
    std::string name;
    if (cur().is_ident())
      name = advance().text;
    // Array suffix on parameters decays to pointer.
    if (cur().is_punct("[")) {
      advance();
      if (!cur().is_punct("]"))
        parse_expr();
      expect_punct("]");
      auto p = std::make_unique<TypeExpr>();
      p->kind = TypeExpr::Kind::Pointer;
      p->inner = std::move(base);
      p->loc = p->inner->loc;
      base = std::move(p);
    }
    return {std::move(base), name};
  }

  StmtPtr parse_decl_or_expr_stmt() {
    SourceLoc loc = cur().loc;

    // Trial: declaration.
    {
      Trial trial(*this);
      StmtPtr d = try_parse_decl_stmt(loc);
      if (d) {
        trial.commit();
        return d;
      }
    }

    auto s = make_stmt(Stmt::Kind::ExprStmt, loc);
    s->expr = parse_expr();
    if (!s->expr) {
      sync_stmt();
      return nullptr;
    }
    expect_punct(";");
    return s;
  }

  StmtPtr try_parse_decl_stmt(SourceLoc loc) {
    TypeExprPtr base = parse_declspec();
    if (!base)
      return nullptr;

    auto s = make_stmt(Stmt::Kind::Decl, loc);
    bool first = true;
    for (;;) {
      VarDeclarator d;
      d.loc = cur().loc;
      TypeExprPtr ty = clone(*base);
      for (;;) {
        if (cur().is_punct("*")) {
          advance();
          auto p = std::make_unique<TypeExpr>();
          p->kind = TypeExpr::Kind::Pointer;
          p->inner = std::move(ty);
          p->loc = loc;
          if (match_kw("const"))
            p->is_const = true;
          ty = std::move(p);
        } else if (cur().is_punct("&")) {
          advance();
          auto r = std::make_unique<TypeExpr>();
          r->kind = TypeExpr::Kind::Reference;
          r->inner = std::move(ty);
          r->loc = loc;
          ty = std::move(r);
        } else {
          break;
        }
      }
      if (cur().is_punct("(") && peek().is_punct("*")) {
        // function-pointer variable
        advance();
        advance();
        if (!cur().is_ident())
          return nullptr;
        d.name = advance().text;
        if (!cur().is_punct(")"))
          return nullptr;
        advance();
        auto fp = std::make_unique<TypeExpr>();
        fp->kind = TypeExpr::Kind::FunctionPtr;
        fp->inner = std::move(ty);
        fp->loc = loc;
        if (!cur().is_punct("("))
          return nullptr;
        advance();
        if (!cur().is_punct(")")) {
          for (;;) {
            TypeExprPtr pt = parse_type();
            if (!pt)
              return nullptr;
            if (cur().is_ident())
              advance();
            fp->fn_params.push_back(std::move(pt));
            if (!match_punct(","))
              break;
          }
        }
        if (!cur().is_punct(")"))
          return nullptr;
        advance();
        ty = std::move(fp);
      } else {
        if (!cur().is_ident())
          return nullptr;
        d.name = advance().text;
      }

      // Array suffix.
      if (cur().is_punct("[")) {
        advance();
        ExprPtr sz = parse_expr();
        if (!sz || !cur().is_punct("]"))
          return nullptr;
        advance();
        auto a = std::make_unique<TypeExpr>();
        a->kind = TypeExpr::Kind::Array;
        a->inner = std::move(ty);
        a->array_size = std::move(sz);
        a->loc = loc;
        ty = std::move(a);
      }

      d.type = std::move(ty);

      if (cur().is_punct("=")) {
        advance();
        d.init = parse_assignment();
        if (!d.init)
          return nullptr;
      } else if (cur().is_punct("(")) {
        advance();
        d.has_ctor_init = true;
        if (!cur().is_punct(")")) {
          if (!parse_expr_list(d.ctor_args))
            return nullptr;
        }
        if (!cur().is_punct(")"))
          return nullptr;
        advance();
      }

      s->decls.push_back(std::move(d));
      first = false;
      if (match_punct(","))
        continue;
      if (cur().is_punct(";")) {
        advance();
        return s;
      }
      return nullptr;
    }
    (void)first;
  }

  // --------------------------------------------------------- declarations

  void parse_top_decl(TranslationUnit &tu) {
    SourceLoc loc = cur().loc;

    if (cur().is_kw("using")) {
      advance();
      expect_kw("namespace");
      expect_ident("namespace name");
      expect_punct(";");
      return; // names resolve as if inside the implicit std namespace anyway
    }

    if (cur().is_kw("typedef")) {
      advance();
      auto td = std::make_unique<TypedefDecl>();
      td->loc = loc;
      td->type = parse_type();
      if (!td->type) {
        error(loc, "expected type in typedef");
        sync_stmt();
        return;
      }
      td->name = expect_ident("typedef name");
      expect_punct(";");
      Decl d;
      d.kind = Decl::Kind::Typedef;
      d.typedef_decl = std::move(td);
      tu.decls.push_back(std::move(d));
      return;
    }

    if (cur().is_kw("template")) {
      parse_template(tu);
      return;
    }

    if (cur().is_kw("class") || cur().is_kw("struct")) {
      ClassDeclPtr c = parse_class();
      if (c) {
        Decl d;
        d.kind = Decl::Kind::Class;
        d.class_decl = std::move(c);
        tu.decls.push_back(std::move(d));
      }
      return;
    }

    // Function or global variable.
    TypeExprPtr ty = parse_type();
    if (!ty) {
      error(loc, "expected declaration, got " + describe(cur()));
      sync_stmt();
      return;
    }
    if (!cur().is_ident() && !(cur().is_punct("(") && peek().is_punct("*"))) {
      error(cur().loc, "expected declarator after type");
      sync_stmt();
      return;
    }

    // Function-pointer global.
    if (cur().is_punct("(")) {
      // reuse the statement declarator machinery
      pos_back_up_and_parse_global(tu, std::move(ty), loc);
      return;
    }

    std::string name = advance().text;
    if (cur().is_punct("(")) {
      auto fn = std::make_unique<FunctionDecl>();
      fn->loc = loc;
      fn->name = name;
      fn->return_type = std::move(ty);
      parse_function_rest(*fn);
      Decl d;
      d.kind = Decl::Kind::Function;
      d.fn_decl = std::move(fn);
      tu.decls.push_back(std::move(d));
      return;
    }

    // Global variable.
    auto gv = std::make_unique<GlobalVarDecl>();
    gv->loc = loc;
    gv->var.loc = loc;
    gv->var.name = name;
    if (cur().is_punct("[")) {
      advance();
      ExprPtr sz = parse_expr();
      expect_punct("]");
      auto a = std::make_unique<TypeExpr>();
      a->kind = TypeExpr::Kind::Array;
      a->inner = std::move(ty);
      a->array_size = std::move(sz);
      a->loc = loc;
      ty = std::move(a);
    }
    gv->var.type = std::move(ty);
    if (match_punct("="))
      gv->var.init = parse_assignment();
    expect_punct(";");
    Decl d;
    d.kind = Decl::Kind::GlobalVar;
    d.var_decl = std::move(gv);
    tu.decls.push_back(std::move(d));
  }

  void pos_back_up_and_parse_global(TranslationUnit &tu, TypeExprPtr base,
                                    SourceLoc loc) {
    // '(' '*' name ')' '(' params ')' [= init] ';'
    advance(); // '('
    expect_punct("*");
    std::string name = expect_ident("function pointer name");
    expect_punct(")");
    auto fp = std::make_unique<TypeExpr>();
    fp->kind = TypeExpr::Kind::FunctionPtr;
    fp->inner = std::move(base);
    fp->loc = loc;
    expect_punct("(");
    if (!cur().is_punct(")")) {
      for (;;) {
        TypeExprPtr pt = parse_type();
        if (!pt)
          break;
        if (cur().is_ident())
          advance();
        fp->fn_params.push_back(std::move(pt));
        if (!match_punct(","))
          break;
      }
    }
    expect_punct(")");
    auto gv = std::make_unique<GlobalVarDecl>();
    gv->loc = loc;
    gv->var.loc = loc;
    gv->var.name = name;
    gv->var.type = std::move(fp);
    if (match_punct("="))
      gv->var.init = parse_assignment();
    expect_punct(";");
    Decl d;
    d.kind = Decl::Kind::GlobalVar;
    d.var_decl = std::move(gv);
    tu.decls.push_back(std::move(d));
  }

  void parse_template(TranslationUnit &tu) {
    SourceLoc loc = cur().loc;
    advance(); // 'template'
    auto td = std::make_unique<TemplateDecl>();
    td->loc = loc;
    expect_punct("<");
    if (!cur().is_punct(">")) {
      for (;;) {
        if (!match_kw("typename") && !match_kw("class")) {
          error(cur().loc, "expected 'typename' in template parameter list");
          break;
        }
        td->params.push_back(expect_ident("template parameter name"));
        if (!match_punct(","))
          break;
      }
    }
    expect_punct(">");

    if (cur().is_kw("class") || cur().is_kw("struct")) {
      // Class template, possibly a partial/explicit specialization
      // "class S<T*> { ... }".
      bool is_struct = cur().is_kw("struct");
      advance();
      std::string name = expect_ident("class name");
      if (cur().is_punct("<")) {
        std::vector<TypeExprPtr> args;
        if (parse_template_args(args)) {
          td->spec_args = std::move(args);
          td->has_spec_args = true;
        }
      }
      ClassDeclPtr c = parse_class_body(name, is_struct, loc);
      td->class_decl = std::move(c);
    } else {
      // Function template / explicit specialization.
      TypeExprPtr ret = parse_type();
      if (!ret) {
        error(cur().loc, "expected return type in function template");
        sync_stmt();
        return;
      }
      std::string name = expect_ident("function name");
      if (cur().is_punct("<")) {
        std::vector<TypeExprPtr> args;
        if (parse_template_args(args)) {
          td->spec_args = std::move(args);
          td->has_spec_args = true;
        }
      }
      auto fn = std::make_unique<FunctionDecl>();
      fn->loc = loc;
      fn->name = name;
      fn->return_type = std::move(ret);
      parse_function_rest(*fn);
      td->fn_decl = std::move(fn);
    }
    Decl d;
    d.kind = Decl::Kind::Template;
    d.template_decl = std::move(td);
    tu.decls.push_back(std::move(d));
  }

  ClassDeclPtr parse_class() {
    SourceLoc loc = cur().loc;
    bool is_struct = cur().is_kw("struct");
    advance();
    std::string name = expect_ident("class name");
    return parse_class_body(name, is_struct, loc);
  }

  ClassDeclPtr parse_class_body(const std::string &name, bool is_struct,
                                SourceLoc loc) {
    auto c = std::make_unique<ClassDecl>();
    c->loc = loc;
    c->name = name;
    c->is_struct = is_struct;

    if (match_punct(";")) {
      c->is_forward = true;
      return c;
    }

    if (match_punct(":")) {
      for (;;) {
        BaseSpec b;
        b.loc = cur().loc;
        b.access = is_struct ? Access::Public : Access::Private;
        for (;;) {
          if (match_kw("virtual")) {
            b.is_virtual = true;
          } else if (match_kw("public")) {
            b.access = Access::Public;
          } else if (match_kw("protected")) {
            b.access = Access::Protected;
          } else if (match_kw("private")) {
            b.access = Access::Private;
          } else {
            break;
          }
        }
        b.name = expect_ident("base class name");
        if (cur().is_punct("<"))
          parse_template_args(b.targs);
        c->bases.push_back(std::move(b));
        if (!match_punct(","))
          break;
      }
    }

    if (!expect_punct("{"))
      return c;

    Access access = is_struct ? Access::Public : Access::Private;
    while (!at_eof() && !cur().is_punct("}")) {
      size_t before = pos_;
      parse_member(*c, access);
      if (pos_ == before) {
        error(cur().loc, "unexpected " + describe(cur()) + " in class body");
        advance();
      }
    }
    expect_punct("}");
    match_punct(";");
    return c;
  }

  void parse_member(ClassDecl &c, Access &access) {
    SourceLoc loc = cur().loc;

    if (cur().is_kw("public") || cur().is_kw("protected") ||
        cur().is_kw("private")) {
      if (cur().is_kw("public"))
        access = Access::Public;
      else if (cur().is_kw("protected"))
        access = Access::Protected;
      else
        access = Access::Private;
      advance();
      expect_punct(":");
      return;
    }

    if (cur().is_kw("friend")) {
      advance();
      expect_kw("class");
      c.friends.push_back(expect_ident("friend class name"));
      expect_punct(";");
      return;
    }

    if (cur().is_kw("typedef")) {
      advance();
      TypedefDecl td;
      td.loc = loc;
      td.type = parse_type();
      if (!td.type) {
        error(loc, "expected type in typedef");
        sync_stmt();
        return;
      }
      td.name = expect_ident("typedef name");
      expect_punct(";");
      c.typedefs.push_back(std::move(td));
      return;
    }

    bool is_virtual = false;
    while (match_kw("virtual"))
      is_virtual = true;

    // Destructor.
    if (cur().is_punct("~")) {
      advance();
      std::string nm = expect_ident("destructor name");
      if (nm != c.name)
        error(loc, "destructor name must match class name");
      auto fn = std::make_unique<FunctionDecl>();
      fn->loc = loc;
      fn->name = "~" + c.name;
      fn->is_dtor = true;
      fn->is_virtual = is_virtual;
      fn->access = access;
      parse_function_rest(*fn);
      c.methods.push_back(std::move(fn));
      return;
    }

    // Constructor: class-name '('.
    if (cur().is_ident() && cur().text == c.name && peek().is_punct("(")) {
      advance();
      auto fn = std::make_unique<FunctionDecl>();
      fn->loc = loc;
      fn->name = c.name;
      fn->is_ctor = true;
      fn->access = access;
      parse_function_rest(*fn);
      c.methods.push_back(std::move(fn));
      return;
    }

    TypeExprPtr ty = parse_type();
    if (!ty) {
      error(loc, "expected member declaration");
      sync_stmt();
      return;
    }

    std::string name;
    if (cur().is_kw("operator")) {
      advance();
      name = "operator" + parse_operator_symbol();
    } else {
      name = expect_ident("member name");
    }

    if (cur().is_punct("(")) {
      auto fn = std::make_unique<FunctionDecl>();
      fn->loc = loc;
      fn->name = name;
      fn->return_type = std::move(ty);
      fn->is_virtual = is_virtual;
      fn->access = access;
      parse_function_rest(*fn);
      c.methods.push_back(std::move(fn));
      return;
    }

    // Fields (possibly several).
    for (;;) {
      FieldDecl f;
      f.loc = loc;
      f.access = access;
      f.type = clone(*ty);
      f.name = name;
      c.fields.push_back(std::move(f));
      if (match_punct(",")) {
        // additional declarators share the base type with their own stars
        TypeExprPtr t2 = clone(*ty);
        while (cur().is_punct("*")) {
          advance();
          auto p = std::make_unique<TypeExpr>();
          p->kind = TypeExpr::Kind::Pointer;
          p->inner = std::move(t2);
          p->loc = loc;
          t2 = std::move(p);
        }
        name = expect_ident("member name");
        ty = std::move(t2);
        continue;
      }
      break;
    }
    expect_punct(";");
  }

  std::string parse_operator_symbol() {
    // operator[] operator() and the usual unary/binary spellings
    if (cur().is_punct("[")) {
      advance();
      expect_punct("]");
      return "[]";
    }
    if (cur().is_punct("(")) {
      advance();
      expect_punct(")");
      return "()";
    }
    static const char *syms[] = {"==", "!=", "<=", ">=", "<<", ">>", "&&",
                                 "||", "->", "++", "--", "+=", "-=", "*=",
                                 "/=", "=",  "+",  "-",  "*",  "/",  "%",
                                 "<",  ">",  "!",  "&",  "|",  "^"};
    for (const char *s : syms) {
      if (cur().is_punct(s)) {
        advance();
        return s;
      }
    }
    error(cur().loc, "unsupported operator name");
    return "?";
  }

  // Parses "(params) [const] [throw(...)] [= 0] [: inits] { body }" after
  // the function name.
  void parse_function_rest(FunctionDecl &fn) {
    expect_punct("(");
    if (!cur().is_punct(")")) {
      if (cur().is_kw("void") && peek().is_punct(")")) {
        advance(); // f(void)
      } else {
        for (;;) {
          ParamDecl p;
          p.loc = cur().loc;
          auto [ty, name] = parse_param_declarator();
          if (!ty) {
            error(p.loc, "expected parameter declaration");
            break;
          }
          p.type = std::move(ty);
          p.name = name;
          fn.params.push_back(std::move(p));
          if (!match_punct(","))
            break;
        }
      }
    }
    expect_punct(")");

    match_kw("const"); // const member functions: accepted, not tracked

    if (cur().is_kw("throw")) {
      advance();
      fn.has_throw_spec = true;
      expect_punct("(");
      if (!cur().is_punct(")")) {
        for (;;) {
          TypeExprPtr t = parse_type();
          if (!t)
            break;
          fn.throw_types.push_back(std::move(t));
          if (!match_punct(","))
            break;
        }
      }
      expect_punct(")");
    }

    if (cur().is_punct("=") && peek().kind == TokenKind::IntLit &&
        peek().int_value == 0) {
      advance();
      advance();
      fn.is_pure = true;
      expect_punct(";");
      return;
    }

    if (fn.is_ctor && match_punct(":")) {
      for (;;) {
        MemInit mi;
        mi.loc = cur().loc;
        mi.name = expect_ident("base or member name");
        expect_punct("(");
        if (!cur().is_punct(")"))
          parse_expr_list(mi.args);
        expect_punct(")");
        fn.ctor_inits.push_back(std::move(mi));
        if (!match_punct(","))
          break;
      }
    }

    if (cur().is_punct("{")) {
      fn.body = parse_block();
      return;
    }
    if (match_punct(";"))
      return; // declaration without body (model surface or prototypes)
    error(cur().loc, "expected function body or ';'");
    sync_stmt();
  }
};

} // namespace

ast::TranslationUnit parse(const SourceUnit &unit, DiagEngine &diags) {
  return Parser(unit, diags).run();
}

} // namespace minibmc
