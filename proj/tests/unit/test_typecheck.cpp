#include "doctest.h"

#include "minibmc/parser.hpp"
#include "minibmc/source_unit.hpp"
#include "minibmc/typecheck.hpp"

#include <algorithm>

using namespace minibmc;

namespace {

TypedProgram check_ok(const std::string &src) {
  DiagEngine diags;
  SourceUnit unit = load_program_from_string("test.cpp", src, {}, diags);
  REQUIRE_FALSE(diags.has_errors());
  auto tu = parse(unit, diags);
  INFO(diags.render(unit.files));
  REQUIRE_FALSE(diags.has_errors());
  TypedProgram prog;
  bool ok = typecheck(tu, unit.files, diags, prog);
  INFO(diags.render(unit.files));
  REQUIRE(ok);
  return prog;
}

// First error message produced by the typechecker.
std::string check_err(const std::string &src) {
  DiagEngine diags;
  SourceUnit unit = load_program_from_string("test.cpp", src, {}, diags);
  REQUIRE_FALSE(diags.has_errors());
  auto tu = parse(unit, diags);
  INFO(diags.render(unit.files));
  REQUIRE_FALSE(diags.has_errors());
  TypedProgram prog;
  bool ok = typecheck(tu, unit.files, diags, prog);
  REQUIRE_FALSE(ok);
  for (const auto &d : diags.all())
    if (d.severity == Severity::Error)
      return d.message;
  return "";
}

const ClassInfo *find_class(const TypedProgram &p, const std::string &name) {
  for (const auto &c : p.classes)
    if (c.name == name && c.layout_done)
      return &c;
  return nullptr;
}

} // namespace

// ---------------------------------------------------------------- templates

TEST_CASE("function template: explicit specialization wins, cache stable") {
  auto prog = check_ok(R"(
    template <typename T>
    bool qCompare(T a, T b);

    template <typename T>
    bool qCompare(T a, T b) { return a > b; }

    template <>
    bool qCompare(float a, float b) { return b > a; }

    int main() {
      bool f = qCompare(1.5f, 2.5f);
      bool i = qCompare<int>(1, 2);
      bool j = qCompare<int>(3, 4);
      return 0;
    }
  )");

  // Forward declaration and definition of the primary merge into one
  // template; one use per distinct argument list is materialised.
  REQUIRE(prog.instantiations.size() == 2);
  CHECK(prog.instantiations[0] == "qCompare<float> from explicit specialization");
  CHECK(prog.instantiations[1] == "qCompare<int> from primary");

  const FunctionInfo *ff = prog.find_function("qCompare<float>");
  REQUIRE(ff != nullptr);
  CHECK(ff->defined);
  REQUIRE(ff->params.size() == 2);
  CHECK(prog.type_name(ff->params[0].type) == "float");

  const FunctionInfo *fi = prog.find_function("qCompare<int>");
  REQUIRE(fi != nullptr);
  CHECK(prog.type_name(fi->params[0].type) == "int");

  // The generic definition is discarded: no bare qCompare symbol remains.
  CHECK(prog.find_function("qCompare") == nullptr);
}

TEST_CASE("implicit deduction picks float from the call arguments") {
  auto prog = check_ok(R"(
    template <typename T>
    T pick(T a, T b) { return a > b ? a : b; }

    int main() {
      float r = pick(1.5f, 2.5f);
      return 0;
    }
  )");
  REQUIRE(prog.instantiations.size() == 1);
  CHECK(prog.instantiations[0] == "pick<float> from primary");
}

TEST_CASE("conflicting deduction is a diagnostic") {
  std::string msg = check_err(R"(
    template <typename T>
    bool qCompare(T a, T b) { return a > b; }

    int main() {
      bool x = qCompare(1, 2.0f);
      return 0;
    }
  )");
  CHECK(msg.find("conflicting deduction") != std::string::npos);
}

TEST_CASE("specialization without a primary template is a diagnostic") {
  std::string msg = check_err(R"(
    template <>
    bool lonely(int a, int b) { return a > b; }

    int main() { return 0; }
  )");
  CHECK(msg.find("without a primary template") != std::string::npos);
}

TEST_CASE("class template: explicit > partial > primary selection") {
  auto prog = check_ok(R"(
    template <typename T>
    class Box { public: int tag() { return 0; } };

    template <typename T>
    class Box<T*> { public: int tag() { return 1; } };

    template <>
    class Box<int> { public: int tag() { return 2; } };

    int main() {
      Box<float> a;
      Box<char*> b;
      Box<int> c;
      Box<float> d;
      int x = a.tag() + b.tag() + c.tag() + d.tag();
      return 0;
    }
  )");
  REQUIRE(prog.instantiations.size() == 3);
  CHECK(prog.instantiations[0] == "class Box<float> from primary");
  CHECK(prog.instantiations[1] == "class Box<char*> from partial specialization");
  CHECK(prog.instantiations[2] == "class Box<int> from explicit specialization");
}

TEST_CASE("ambiguous partial specializations are a diagnostic") {
  std::string msg = check_err(R"(
    template <typename T, typename U>
    class P { };

    template <typename T>
    class P<T, int> { };

    template <typename U>
    class P<int, U> { };

    int main() {
      P<int, int> p;
      return 0;
    }
  )");
  CHECK(msg.find("ambiguous partial specializations") != std::string::npos);
}

TEST_CASE("no generic definitions survive typechecking") {
  auto prog = check_ok(R"(
    template <typename T>
    T twice(T x) { return x + x; }

    int main() {
      int a = twice(2);
      long b = twice(3l);
      return 0;
    }
  )");
  for (const auto &f : prog.functions) {
    if (!f.defined)
      continue;
    CHECK(f.body != nullptr);
    for (const auto &p : f.params)
      CHECK(p.type != kNoType);
  }
  CHECK(prog.instantiations.size() == 2);
}

// -------------------------------------------------------------- inheritance

static const char *kWheels = R"(
  class Vehicle {
  public:
    virtual int number_of_wheels() = 0;
  };

  class Car : public Vehicle {
  public:
    int number_of_wheels() { return 4; }
  };

  class Motorcycle : public Vehicle {
  public:
    int number_of_wheels() { return 2; }
  };

  int main() {
    Vehicle *v = new Car();
    int n = v->number_of_wheels();
    delete v;
    return 0;
  }
)";

TEST_CASE("hierarchy flattening: three classes, two filled vtables") {
  auto prog = check_ok(kWheels);

  const ClassInfo *veh = find_class(prog, "Vehicle");
  const ClassInfo *car = find_class(prog, "Car");
  const ClassInfo *mot = find_class(prog, "Motorcycle");
  REQUIRE(veh != nullptr);
  REQUIRE(car != nullptr);
  REQUIRE(mot != nullptr);

  CHECK(veh->is_abstract);
  CHECK_FALSE(car->is_abstract);
  CHECK_FALSE(mot->is_abstract);

  // One virtual slot each; the base slot is pure, the derived slots point at
  // the overrides.
  REQUIRE(veh->vslots.size() == 1);
  REQUIRE(car->vslots.size() == 1);
  REQUIRE(mot->vslots.size() == 1);
  CHECK(veh->vslots[0].pure);
  CHECK_FALSE(car->vslots[0].pure);
  CHECK_FALSE(mot->vslots[0].pure);
  CHECK(prog.functions[car->vslots[0].impl_fn].symbol ==
        "Car::number_of_wheels");
  CHECK(prog.functions[mot->vslots[0].impl_fn].symbol ==
        "Motorcycle::number_of_wheels");
  CHECK(car->vslots[0].slot == veh->vslots[0].slot);

  // Override correctness: the derived target differs from the base's.
  CHECK(car->vslots[0].impl_fn != mot->vslots[0].impl_fn);

  // The flattened derived view carries the inherited vtable ghost field.
  bool car_has_ghost = false;
  for (const auto &f : car->fields)
    if (f.is_ghost && f.key.rfind("Vehicle::", 0) == 0)
      car_has_ghost = true;
  CHECK(car_has_ghost);
}

TEST_CASE("instantiating an abstract class fails with CONVERSION ERROR") {
  std::string msg = check_err(R"(
    class Vehicle {
    public:
      virtual int number_of_wheels() = 0;
    };

    int main() {
      Vehicle *v = new Vehicle();
      return 0;
    }
  )");
  CHECK(msg == "CONVERSION ERROR");
}

TEST_CASE("three-level override chain updates every vtable") {
  auto prog = check_ok(R"(
    class A { public: virtual int f() { return 1; } };
    class B : public A { public: int f() { return 2; } };
    class C : public B { public: int f() { return 3; } };

    int main() {
      C c;
      A *a = &c;
      int r = a->f();
      return 0;
    }
  )");
  const ClassInfo *a = find_class(prog, "A");
  const ClassInfo *b = find_class(prog, "B");
  const ClassInfo *c = find_class(prog, "C");
  REQUIRE(a != nullptr);
  REQUIRE(b != nullptr);
  REQUIRE(c != nullptr);
  REQUIRE(a->vslots.size() == 1);
  REQUIRE(b->vslots.size() == 1);
  REQUIRE(c->vslots.size() == 1);
  CHECK(prog.functions[a->vslots[0].impl_fn].symbol == "A::f");
  CHECK(prog.functions[b->vslots[0].impl_fn].symbol == "B::f");
  CHECK(prog.functions[c->vslots[0].impl_fn].symbol == "C::f");
}

TEST_CASE("replicated bases duplicate fields; shared bases do not") {
  auto prog = check_ok(R"(
    class V { public: int v; };
    class A1 : public V { };
    class B1 : public V { };
    class R : public A1, public B1 { };

    class A2 : public virtual V { };
    class B2 : public virtual V { };
    class S : public A2, public B2 { };

    int main() {
      R r;
      r.A1::v = 1;
      r.B1::v = 2;
      S s;
      s.v = 3;
      return 0;
    }
  )");

  const ClassInfo *r = find_class(prog, "R");
  REQUIRE(r != nullptr);
  int copies = 0;
  for (const auto &f : r->fields)
    if (f.name == "v")
      ++copies;
  CHECK(copies == 2);

  const ClassInfo *s = find_class(prog, "S");
  REQUIRE(s != nullptr);
  copies = 0;
  std::string key;
  for (const auto &f : s->fields)
    if (f.name == "v") {
      ++copies;
      key = f.key;
    }
  CHECK(copies == 1);
  CHECK(key == "virtual::V::v");
  REQUIRE(s->vbases.size() == 1);
}

TEST_CASE("unqualified access to a replicated member is ambiguous") {
  std::string msg = check_err(R"(
    class V { public: int v; };
    class A : public V { };
    class B : public V { };
    class D : public A, public B { };
    int main() {
      D d;
      d.v = 1;
      return 0;
    }
  )");
  CHECK(msg.find("ambiguous member 'v'") != std::string::npos);
}

// ------------------------------------------------------------------- access

TEST_CASE("access filtering: private members stay private") {
  std::string msg = check_err(R"(
    class S {
      int secret;
    };
    int main() {
      S s;
      int x = s.secret;
      return 0;
    }
  )");
  CHECK(msg == "'secret' is a private member of 'S'");
}

TEST_CASE("friend classes see private members, others do not") {
  auto prog = check_ok(R"(
    class Grantor {
      friend class Buddy;
      int secret;
    public:
      Grantor() : secret(42) {}
    protected:
      int prot;
    };

    class Buddy {
    public:
      int peek(Grantor &g) { return g.secret; }
    };

    class Derived : public Grantor {
    public:
      int getp() { return prot; }
    };

    int main() {
      Grantor g;
      Buddy b;
      int x = b.peek(g);
      Derived d;
      int y = d.getp();
      return 0;
    }
  )");

  const ClassInfo *grantor = find_class(prog, "Grantor");
  REQUIRE(grantor != nullptr);
  uint32_t gid = 0, bid = 0, did = 0, none = 0xffffffffu;
  for (uint32_t i = 0; i < prog.classes.size(); ++i) {
    if (prog.classes[i].name == "Grantor") gid = i;
    if (prog.classes[i].name == "Buddy") bid = i;
    if (prog.classes[i].name == "Derived") did = i;
  }
  const FieldInfo *secret = nullptr, *prot = nullptr;
  for (const auto &f : prog.classes[gid].fields) {
    if (f.name == "secret") secret = &f;
    if (f.name == "prot") prot = &f;
  }
  REQUIRE(secret != nullptr);
  REQUIRE(prot != nullptr);

  CHECK(prog.field_accessible(gid, *secret, bid));        // friend
  CHECK_FALSE(prog.field_accessible(gid, *secret, did));  // derived, not friend
  CHECK_FALSE(prog.field_accessible(gid, *secret, none)); // free function
  CHECK(prog.field_accessible(gid, *prot, did));          // protected + derived
  CHECK_FALSE(prog.field_accessible(gid, *prot, none));
}

TEST_CASE("protected members are inaccessible outside the hierarchy") {
  std::string msg = check_err(R"(
    class S {
    protected:
      int p;
    };
    int main() {
      S s;
      int x = s.p;
      return 0;
    }
  )");
  CHECK(msg == "'p' is a protected member of 'S'");
}

// --------------------------------------------------------------- containers

TEST_CASE("operational models typecheck and classify containers") {
  auto prog = check_ok(R"(
    #include <vector>
    #include <map>
    #include <set>
    #include <string>
    #include <cassert>

    int main() {
      std::vector<int> v;
      v.push_back(1);
      assert(v[0] == 1);

      std::map<int, long> m;
      m[3] = 9l;

      std::multimap<int, int> mm;
      mm.insert(1, 2);

      std::set<char> s;
      s.insert('a');

      std::string str = "hi";
      return 0;
    }
  )");

  const ClassInfo *vec = find_class(prog, "vector<int>");
  REQUIRE(vec != nullptr);
  CHECK(vec->ckind == ContainerKind::Seq);
  CHECK(prog.type_name(vec->elem_type) == "int");

  const ClassInfo *map = find_class(prog, "map<int, long>");
  REQUIRE(map != nullptr);
  CHECK(map->ckind == ContainerKind::Assoc);
  CHECK(prog.type_name(map->key_type) == "int");
  CHECK(prog.type_name(map->elem_type) == "long");

  const ClassInfo *mm = find_class(prog, "multimap<int, int>");
  REQUIRE(mm != nullptr);
  CHECK(mm->ckind == ContainerKind::AssocMulti);

  const ClassInfo *set = find_class(prog, "set<char>");
  REQUIRE(set != nullptr);
  CHECK(set->ckind == ContainerKind::Assoc);
  CHECK(prog.type_name(set->key_type) == "char");

  const ClassInfo *str = find_class(prog, "string");
  REQUIRE(str != nullptr);
  CHECK(str->ckind == ContainerKind::Str);
  CHECK(prog.type_name(str->elem_type) == "char");
}

TEST_CASE("iterator first/second lower to key/element reads") {
  auto prog = check_ok(R"(
    #include <map>
    #include <cassert>

    int main() {
      std::map<int, int> m;
      m[1] = 1;
      for (std::map<int, int>::iterator it = m.begin(); it != m.end(); ++it) {
        assert(it->second == it->first);
      }
      return 0;
    }
  )");
  std::string dump = dump_typed_program(prog);
  CHECK(dump.find("__ESBMC_key_at(it.__c, it.__pos)") != std::string::npos);
  CHECK(dump.find("__ESBMC_elem(it.__c, it.__pos)") != std::string::npos);
}

TEST_CASE("container elements must be scalar") {
  std::string msg = check_err(R"(
    #include <vector>

    class Fat { public: int a; int b; };

    int main() {
      std::vector<Fat> v;
      return 0;
    }
  )");
  CHECK(msg.find("container elements must have scalar type") !=
        std::string::npos);
}

// ------------------------------------------------------------- constructors

TEST_CASE("constructor synthesis orders bases, ghosts, members, body") {
  auto prog = check_ok(R"(
    class Base {
    public:
      int b;
      Base() : b(1) {}
      virtual int id() { return 0; }
    };

    class Member {
    public:
      int m;
      Member() : m(2) {}
    };

    class Derived : public Base {
    public:
      Member mem;
      int d;
      Derived() : d(3) {}
      int id() { return 1; }
    };

    int main() {
      Derived x;
      int r = x.id();
      return 0;
    }
  )");
  std::string dump = dump_typed_program(prog);
  const FunctionInfo *ctor = prog.find_function("Derived::Derived");
  REQUIRE(ctor != nullptr);
  REQUIRE(ctor->body != nullptr);

  // Base constructor call precedes the vtable ghost store, which precedes
  // the member construction, which precedes the member-init assignment.
  size_t at_ctor = dump.find("Derived::Derived");
  std::string body = dump.substr(at_ctor);
  size_t base = body.find("->Base()");
  size_t ghost = body.find("vtable$id$");
  size_t member = body.find("->Member()");
  size_t init = body.find("this->d = 3");
  REQUIRE(base != std::string::npos);
  REQUIRE(ghost != std::string::npos);
  REQUIRE(member != std::string::npos);
  REQUIRE(init != std::string::npos);
  CHECK(base < ghost);
  CHECK(ghost < member);
  CHECK(member < init);
}

TEST_CASE("virtual bases are constructed once, at the creation site") {
  auto prog = check_ok(R"(
    class V { public: int v; V() : v(7) {} };
    class A : public virtual V { public: A() {} };
    class B : public virtual V { public: B() {} };
    class D : public A, public B { public: D() {} };

    int main() {
      D d;
      return 0;
    }
  )");
  std::string dump = dump_typed_program(prog);

  // Neither A's nor B's constructor calls V's.
  size_t a_at = dump.find("void A::A");
  size_t a_end = dump.find("void B::B");
  REQUIRE(a_at != std::string::npos);
  std::string mid = dump.substr(a_at, a_end - a_at);
  CHECK(mid.find("->V()") == std::string::npos);

  // The creation site calls V's constructor exactly once, before D's.
  size_t main_at = dump.find("int main");
  std::string main_body = dump.substr(main_at);
  size_t first_v = main_body.find("->V()");
  REQUIRE(first_v != std::string::npos);
  CHECK(main_body.find("->V()", first_v + 1) == std::string::npos);
  size_t d_ctor = main_body.find("->D()");
  REQUIRE(d_ctor != std::string::npos);
  CHECK(first_v < d_ctor);
}

TEST_CASE("destructors run members in reverse, then bases") {
  auto prog = check_ok(R"(
    class M1 { public: ~M1() {} };
    class M2 { public: ~M2() {} };
    class Base { public: ~Base() {} };

    class D : public Base {
    public:
      M1 a;
      M2 b;
      ~D() {}
    };

    int main() {
      D d;
      return 0;
    }
  )");
  std::string dump = dump_typed_program(prog);
  size_t at = dump.find("void D::~D");
  REQUIRE(at != std::string::npos);
  std::string body = dump.substr(at);
  size_t m2 = body.find("~M2");
  size_t m1 = body.find("~M1");
  size_t base = body.find("~Base");
  REQUIRE(m2 != std::string::npos);
  REQUIRE(m1 != std::string::npos);
  REQUIRE(base != std::string::npos);
  CHECK(m2 < m1);
  CHECK(m1 < base);
}

TEST_CASE("delete through a base pointer dispatches the virtual destructor") {
  auto prog = check_ok(R"(
    class B { public: virtual ~B() {} };
    class D : public B { public: ~D() {} };

    int main() {
      B *p = new D();
      delete p;
      return 0;
    }
  )");
  std::string dump = dump_typed_program(prog);
  size_t main_at = dump.find("int main");
  std::string body = dump.substr(main_at);
  CHECK(body.find("[virtual]") != std::string::npos);
}

// ------------------------------------------------------------- expressions

TEST_CASE("assignment type checks reject incompatible pointers") {
  std::string msg = check_err(R"(
    int main() {
      int *p;
      float f = 1.0f;
      p = f;
      return 0;
    }
  )");
  CHECK(msg.find("cannot convert") != std::string::npos);
}

TEST_CASE("references lower to pointers with automatic dereference") {
  auto prog = check_ok(R"(
    void bump(int &x) { x = x + 1; }

    int main() {
      int v = 1;
      int &r = v;
      r = 5;
      bump(v);
      return 0;
    }
  )");
  std::string dump = dump_typed_program(prog);
  CHECK(dump.find("*r = 5") != std::string::npos);
  CHECK(dump.find("bump(&v)") != std::string::npos);
  const FunctionInfo *bump = prog.find_function("bump");
  REQUIRE(bump != nullptr);
  REQUIRE(bump->params.size() == 1);
  CHECK(bump->params[0].is_ref);
  CHECK(prog.type_name(bump->params[0].type) == "int*");
}

TEST_CASE("main gains an implicit return 0") {
  auto prog = check_ok("int main() { }");
  REQUIRE(prog.main_fn != 0xffffffffu);
  const FunctionInfo &m = prog.functions[prog.main_fn];
  REQUIRE(m.body != nullptr);
  REQUIRE_FALSE(m.body->stmts.empty());
  CHECK(m.body->stmts.back()->kind == TypedStmt::Kind::Return);
}

TEST_CASE("missing main is a diagnostic") {
  std::string msg = check_err("int helper() { return 1; }");
  CHECK(msg == "main function not found");
}

TEST_CASE("overload resolution prefers exact over conversion") {
  auto prog = check_ok(R"(
    int pick(int x) { return 1; }
    int pick(double x) { return 2; }

    int main() {
      int a = pick(1);
      int b = pick(1.5);
      return 0;
    }
  )");
  std::string dump = dump_typed_program(prog);
  size_t main_at = dump.find("int main");
  std::string body = dump.substr(main_at);
  CHECK(body.find("pick(1)") != std::string::npos);
  CHECK(body.find("pick(1.5)") != std::string::npos);
}

TEST_CASE("nondet adopts the context type") {
  auto prog = check_ok(R"(
    int main() {
      int x = nondet();
      if (x > 0) { x = x - 1; }
      return 0;
    }
  )");
  const FunctionInfo &m = prog.functions[prog.main_fn];
  REQUIRE(m.body != nullptr);
  // first statement block -> decl with a Nondet init typed int
  const TypedStmt &decl = *m.body->stmts[0]->stmts[0];
  REQUIRE(decl.kind == TypedStmt::Kind::Decl);
  REQUIRE(decl.decls.size() == 1);
  REQUIRE(decl.decls[0].init != nullptr);
  CHECK(decl.decls[0].init->kind == TypedExpr::Kind::Nondet);
  CHECK(prog.type_name(decl.decls[0].init->type) == "int");
}

TEST_CASE("labels other than the hiding marker are rejected") {
  std::string msg = check_err(R"(
    int main() {
      retry:;
      return 0;
    }
  )");
  CHECK(msg == "labels are not supported");
}

TEST_CASE("indirect calls are rejected") {
  std::string msg = check_err(R"(
    int f() { return 1; }

    int main() {
      int (*fp)() = f;
      int x = fp();
      return 0;
    }
  )");
  CHECK(msg == "indirect calls are not supported");
}

TEST_CASE("exception specifications resolve their type lists") {
  auto prog = check_ok(R"(
    void f(int x) throw(int, float) {
      if (x > 0) throw 1;
    }

    int main() {
      try { f(1); } catch (int e) { }
      return 0;
    }
  )");
  const FunctionInfo *f = prog.find_function("f");
  REQUIRE(f != nullptr);
  CHECK(f->has_throw_spec);
  REQUIRE(f->throw_types.size() == 2);
  CHECK(prog.type_name(f->throw_types[0]) == "int");
  CHECK(prog.type_name(f->throw_types[1]) == "float");
}

TEST_CASE("catch by reference records indirection") {
  auto prog = check_ok(R"(
    class Ex { public: int c; Ex(int v) : c(v) {} };

    int main() {
      try {
        throw Ex(3);
      } catch (Ex &e) {
        int x = e.c;
      }
      return 0;
    }
  )");
  const FunctionInfo &m = prog.functions[prog.main_fn];
  const TypedStmt *tryst = nullptr;
  for (const auto &s : m.body->stmts)
    for (const auto &c : s->stmts)
      if (c->kind == TypedStmt::Kind::Try)
        tryst = c.get();
  REQUIRE(tryst != nullptr);
  REQUIRE(tryst->handlers.size() == 1);
  CHECK(tryst->handlers[0].by_ref);
  CHECK_FALSE(tryst->handlers[0].is_ellipsis);
  CHECK(prog.type_name(tryst->handlers[0].type) == "Ex");
}
