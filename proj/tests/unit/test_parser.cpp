#include "doctest.h"

#include "minibmc/parser.hpp"
#include "minibmc/source_unit.hpp"

using namespace minibmc;

namespace {
ast::TranslationUnit parse_ok(const std::string &src) {
  DiagEngine diags;
  SourceUnit unit = load_program_from_string("test.cpp", src, {}, diags);
  REQUIRE_FALSE(diags.has_errors());
  auto tu = parse(unit, diags);
  INFO(diags.render(unit.files));
  REQUIRE_FALSE(diags.has_errors());
  return tu;
}
} // namespace

TEST_CASE("function template plus explicit specialization") {
  auto tu = parse_ok(R"(
    template <typename T>
    bool qCompare(T a, T b) { return a > b; }

    template <>
    bool qCompare(float a, float b) { return b > a; }

    int main() {
      bool r = qCompare<int>(1, 2);
      return 0;
    }
  )");
  REQUIRE(tu.decls.size() == 3);

  const auto &prim = tu.decls[0];
  REQUIRE(prim.kind == ast::Decl::Kind::Template);
  REQUIRE(prim.template_decl->params.size() == 1);
  CHECK(prim.template_decl->params[0] == "T");
  REQUIRE(prim.template_decl->fn_decl != nullptr);
  CHECK(prim.template_decl->fn_decl->name == "qCompare");
  CHECK(prim.template_decl->fn_decl->params.size() == 2);

  const auto &spec = tu.decls[1];
  REQUIRE(spec.kind == ast::Decl::Kind::Template);
  CHECK(spec.template_decl->params.empty()); // template<>
  REQUIRE(spec.template_decl->fn_decl != nullptr);
  CHECK(ast::to_string(*spec.template_decl->fn_decl->params[0].type) == "float");

  const auto &mainfn = tu.decls[2];
  REQUIRE(mainfn.kind == ast::Decl::Kind::Function);
  // main's first statement declares r from a template-id call
  const auto &body = mainfn.fn_decl->body;
  REQUIRE(body->stmts.size() == 2);
  const auto &decl = body->stmts[0];
  REQUIRE(decl->kind == ast::Stmt::Kind::Decl);
  const auto &init = decl->decls[0].init;
  REQUIRE(init->kind == ast::Expr::Kind::Call);
  CHECK(init->callee->has_explicit_targs);
  CHECK(init->callee->parts[0] == "qCompare");
}

TEST_CASE("class hierarchy with virtual methods and constructors") {
  auto tu = parse_ok(R"(
    class Vehicle {
    public:
      Vehicle() {}
      virtual int number_of_wheels() = 0;
    };

    class Motorcycle : public Vehicle {
    public:
      Motorcycle() : Vehicle() {}
      virtual int number_of_wheels() { return 2; }
    };
  )");
  REQUIRE(tu.decls.size() == 2);
  const auto &veh = *tu.decls[0].class_decl;
  CHECK(veh.name == "Vehicle");
  REQUIRE(veh.methods.size() == 2);
  CHECK(veh.methods[0]->is_ctor);
  CHECK(veh.methods[1]->is_virtual);
  CHECK(veh.methods[1]->is_pure);

  const auto &moto = *tu.decls[1].class_decl;
  REQUIRE(moto.bases.size() == 1);
  CHECK(moto.bases[0].name == "Vehicle");
  CHECK(moto.bases[0].access == ast::Access::Public);
  REQUIRE(moto.methods.size() == 2);
  CHECK(moto.methods[0]->ctor_inits.size() == 1);
  CHECK(moto.methods[0]->ctor_inits[0].name == "Vehicle");
}

TEST_CASE("virtual and replicated inheritance specifiers") {
  auto tu = parse_ok(R"(
    class A {};
    class B : public virtual A {};
    class C : private A, public B {};
  )");
  CHECK(tu.decls[1].class_decl->bases[0].is_virtual);
  CHECK(tu.decls[2].class_decl->bases[0].access == ast::Access::Private);
  CHECK(tu.decls[2].class_decl->bases[1].access == ast::Access::Public);
}

TEST_CASE("try catch and throw") {
  auto tu = parse_ok(R"(
    int main() {
      try {
        if (nondet())
          throw 20;
        else
          throw 10.0f;
      }
      catch (int i) { assert(i == 20); }
      catch (float f) { assert(f == 10.0f); }
      catch (...) {}
      return 0;
    }
  )");
  const auto &body = tu.decls[0].fn_decl->body;
  REQUIRE(body->stmts.size() == 2);
  const auto &tryst = body->stmts[0];
  REQUIRE(tryst->kind == ast::Stmt::Kind::Try);
  REQUIRE(tryst->handlers.size() == 3);
  CHECK(ast::to_string(*tryst->handlers[0].type) == "int");
  CHECK(tryst->handlers[0].var_name == "i");
  CHECK(ast::to_string(*tryst->handlers[1].type) == "float");
  CHECK(tryst->handlers[2].is_ellipsis);

  const auto &ifst = tryst->body->stmts[0];
  REQUIRE(ifst->kind == ast::Stmt::Kind::If);
  CHECK(ifst->then_stmt->kind == ast::Stmt::Kind::Throw);
  CHECK(ifst->else_stmt->kind == ast::Stmt::Kind::Throw);
}

TEST_CASE("bare re-throw parses with a null value") {
  auto tu = parse_ok("void f() { try { throw 1; } catch (int) { throw; } }");
  const auto &tryst = tu.decls[0].fn_decl->body->stmts[0];
  CHECK(tryst->handlers[0].var_name.empty());
  CHECK(tryst->handlers[0].body->stmts[0]->expr == nullptr);
}

TEST_CASE("exception specifications") {
  auto tu = parse_ok(R"(
    void func1() throw(int, float) { throw 1; }
    void func2() throw() {}
  )");
  const auto &f1 = *tu.decls[0].fn_decl;
  REQUIRE(f1.has_throw_spec);
  REQUIRE(f1.throw_types.size() == 2);
  CHECK(ast::to_string(*f1.throw_types[0]) == "int");
  const auto &f2 = *tu.decls[1].fn_decl;
  CHECK(f2.has_throw_spec);
  CHECK(f2.throw_types.empty());
}

TEST_CASE("container declarations, iterators and nested member types") {
  auto tu = parse_ok(R"(
    #include <vector>
    int main() {
      std::vector<int> v;
      v.push_back(1);
      vector<int>::iterator it = v.begin();
      int x = v[0];
      return 0;
    }
  )");
  const ast::FunctionDecl *mainfn = nullptr;
  for (const auto &d : tu.decls)
    if (d.kind == ast::Decl::Kind::Function && d.fn_decl->name == "main")
      mainfn = d.fn_decl.get();
  REQUIRE(mainfn != nullptr);
  const auto &s0 = mainfn->body->stmts[0];
  REQUIRE(s0->kind == ast::Stmt::Kind::Decl);
  CHECK(ast::to_string(*s0->decls[0].type) == "vector<int>");
  const auto &s2 = mainfn->body->stmts[2];
  REQUIRE(s2->kind == ast::Stmt::Kind::Decl);
  CHECK(ast::to_string(*s2->decls[0].type) == "vector<int>::iterator");
}

TEST_CASE("new, delete, casts and virtual dispatch expressions") {
  auto tu = parse_ok(R"(
    class Vehicle { public: virtual int n() { return 0; } };
    int main() {
      Vehicle* v;
      v = (Vehicle*)0;
      v = new Vehicle();
      int k = v->n();
      int j = v->Vehicle::n();
      delete v;
      return 0;
    }
  )");
  const auto &mainfn = tu.decls[1].fn_decl;
  const auto &cast = mainfn->body->stmts[1];
  REQUIRE(cast->kind == ast::Stmt::Kind::ExprStmt);
  CHECK(cast->expr->rhs->kind == ast::Expr::Kind::Cast);
  const auto &nw = mainfn->body->stmts[2];
  CHECK(nw->expr->rhs->kind == ast::Expr::Kind::New);
  const auto &qual = mainfn->body->stmts[4];
  const ast::Expr *call = qual->decls[0].init.get();
  REQUIRE(call->kind == ast::Expr::Kind::Call);
  CHECK(call->callee->kind == ast::Expr::Kind::Member);
  CHECK(call->callee->qualifier == "Vehicle");
  CHECK(mainfn->body->stmts[5]->kind == ast::Stmt::Kind::Delete);
}

TEST_CASE("control flow statements") {
  auto tu = parse_ok(R"(
    int main() {
      int x = 0;
      for (int i = 0; i < 5; i++) x += i;
      while (x > 0) { x--; if (x == 2) break; }
      switch (x) {
        case 0: x = 1; break;
        case 1:
        case 2: x = 3; break;
        default: x = 4;
      }
      return x;
    }
  )");
  const auto &body = tu.decls[0].fn_decl->body;
  CHECK(body->stmts[1]->kind == ast::Stmt::Kind::For);
  CHECK(body->stmts[2]->kind == ast::Stmt::Kind::While);
  const auto &sw = body->stmts[3];
  REQUIRE(sw->kind == ast::Stmt::Kind::Switch);
  REQUIRE(sw->cases.size() == 4);
  CHECK(sw->cases[1].stmts.empty()); // fallthrough group
  CHECK(sw->cases[3].is_default);
}

TEST_CASE("function pointer declarations and address-of-function") {
  auto tu = parse_ok(R"(
    void handler() {}
    int apply(int (*f)(int), int x) { return f(x); }
    int main() {
      void (*pf)() = handler;
      pf();
      return 0;
    }
  )");
  const auto &apply = tu.decls[1].fn_decl;
  REQUIRE(apply->params.size() == 2);
  CHECK(apply->params[0].type->kind == ast::TypeExpr::Kind::FunctionPtr);
  CHECK(apply->params[0].name == "f");
}

TEST_CASE("syntax errors carry expected token information") {
  DiagEngine diags;
  SourceUnit unit =
      load_program_from_string("bad.cpp", "int main() { return 0 }", {}, diags);
  parse(unit, diags);
  REQUIRE(diags.has_errors());
  CHECK(diags.all()[0].message.find("expected ';'") != std::string::npos);
}

TEST_CASE("model headers parse through include resolution") {
  const char *hdrs[] = {"vector", "map",   "set",    "deque",  "list",
                        "stack",  "queue", "string", "exception", "cassert",
                        "algorithm"};
  for (const char *h : hdrs) {
    CAPTURE(h);
    DiagEngine diags;
    std::string src = std::string("#include <") + h + ">\nint main() { return 0; }\n";
    SourceUnit unit = load_program_from_string("t.cpp", src, {}, diags);
    REQUIRE_FALSE(diags.has_errors());
    parse(unit, diags);
    INFO(diags.render(unit.files));
    CHECK_FALSE(diags.has_errors());
  }
}

TEST_CASE("missing include lists the searched paths") {
  DiagEngine diags;
  load_program_from_string("t.cpp", "#include \"nope.h\"\n", {"/tmp/xyz"}, diags);
  REQUIRE(diags.has_errors());
  CHECK(diags.all()[0].message.find("nope.h") != std::string::npos);
  CHECK(diags.all()[0].message.find("/tmp/xyz") != std::string::npos);
}

TEST_CASE("global variables and typedefs") {
  auto tu = parse_ok(R"(
    typedef unsigned long mysize;
    int counter = 0;
    void (*terminate_pf)() = 0;
  )");
  CHECK(tu.decls[0].kind == ast::Decl::Kind::Typedef);
  CHECK(tu.decls[1].kind == ast::Decl::Kind::GlobalVar);
  CHECK(tu.decls[2].kind == ast::Decl::Kind::GlobalVar);
  CHECK(tu.decls[2].var_decl->var.type->kind == ast::TypeExpr::Kind::FunctionPtr);
}
