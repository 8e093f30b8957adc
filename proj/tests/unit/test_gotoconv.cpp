#include "doctest.h"

#include "minibmc/goto_program.hpp"
#include "minibmc/parser.hpp"
#include "minibmc/source_unit.hpp"
#include "minibmc/typecheck.hpp"

using namespace minibmc;

namespace {

struct Lowered {
  TypedProgram prog;
  GotoProgram gp;
};

// Whole-pipeline helper: parse, typecheck and lower, validating every
// produced function.
std::unique_ptr<Lowered> lower_ok(const std::string &src) {
  DiagEngine diags;
  SourceUnit unit = load_program_from_string("test.cpp", src, {}, diags);
  REQUIRE_FALSE(diags.has_errors());
  auto tu = parse(unit, diags);
  INFO(diags.render(unit.files));
  REQUIRE_FALSE(diags.has_errors());
  auto out = std::make_unique<Lowered>();
  bool ok = typecheck(tu, unit.files, diags, out->prog);
  INFO(diags.render(unit.files));
  REQUIRE(ok);
  out->gp = lower_to_goto(out->prog);
  for (const auto &kv : out->gp.functions) {
    INFO(kv.first);
    CHECK(validate_goto_function(kv.second) == "");
  }
  return out;
}

const GotoFunction &fn(const Lowered &l, const std::string &symbol) {
  auto it = l.gp.functions.find(symbol);
  REQUIRE(it != l.gp.functions.end());
  return it->second;
}

std::string dump(const Lowered &l, const std::string &symbol) {
  return dump_goto_function(fn(l, symbol), l.prog);
}

size_t count_kind(const GotoFunction &f, GotoInstr::Kind k) {
  size_t n = 0;
  for (const auto &in : f.body)
    if (in.kind == k)
      ++n;
  return n;
}

// Position of `needle` in `hay`; fails the test when absent.
size_t pos_of(const std::string &hay, const std::string &needle) {
  size_t p = hay.find(needle);
  INFO("looking for: " << needle << "\nin:\n" << hay);
  REQUIRE(p != std::string::npos);
  return p;
}

// Asserts the lines appear in this order (not necessarily adjacent).
void in_order(const std::string &hay,
              const std::vector<std::string> &needles) {
  size_t at = 0;
  for (const auto &n : needles) {
    INFO("looking for: " << n << "\nin:\n" << hay.substr(at));
    size_t p = hay.find(n, at);
    REQUIRE(p != std::string::npos);
    at = p + n.size();
  }
}

} // namespace

// ------------------------------------------------------------ try lowering

TEST_CASE("try/catch lowers to paired CATCH with handler map") {
  auto l = lower_ok(R"(
    int main() {
      int cond = 1;
      try {
        if (cond)
          throw 20;
        else
          throw 10.0f;
      } catch (int i) {
        cond = i;
      } catch (float f) {
        cond = 2;
      }
      return cond;
    }
  )");

  // The full shape is the format contract: a begin CATCH carrying the
  // handler map, the body, an empty end CATCH, a jump over the handlers,
  // one block per handler ending at the join.
  CHECK(dump(*l, "main") ==
        "      DECL cond : int\n"
        "      ASSIGN cond := 1\n"
        "      CATCH int->3, float->4\n"
        "      IF !cond GOTO 1\n"
        "      THROW int: 20\n"
        "      GOTO 2\n"
        "   1: THROW float: 10f\n"
        "   2: CATCH\n"
        "      GOTO 5\n"
        "   3: DECL i : int\n"
        "      ASSIGN cond := i\n"
        "      DEAD i\n"
        "      GOTO 5\n"
        "   4: DECL f : float\n"
        "      ASSIGN cond := 2\n"
        "      DEAD f\n"
        "      GOTO 5\n"
        "   5: DEAD cond\n"
        "      RETURN cond\n"
        "      DEAD cond\n"
        "      END_FUNCTION\n");

  const GotoFunction &m = fn(*l, "main");
  REQUIRE(count_kind(m, GotoInstr::Kind::Catch) == 2);
  const GotoInstr *begin = nullptr, *end = nullptr;
  for (const auto &in : m.body) {
    if (in.kind != GotoInstr::Kind::Catch)
      continue;
    if (!begin)
      begin = &in;
    else
      end = &in;
  }
  REQUIRE(begin->entries.size() == 2);
  CHECK(begin->entries[0].desc.kind == ExDesc::Kind::Plain);
  CHECK(begin->entries[0].var == "i");
  CHECK_FALSE(begin->entries[0].by_ref);
  CHECK(begin->entries[1].var == "f");
  CHECK(end->catch_end);
  CHECK(end->entries.empty());
}

TEST_CASE("handler variants: ellipsis, by-reference, pointers") {
  auto l = lower_ok(R"(
    int main() {
      int x = 0;
      try {
        throw 1;
      } catch (int &r) {
        x = r;
      } catch (const char *s) {
        x = 2;
      } catch (void *p) {
        x = 3;
      } catch (...) {
        x = 4;
      }
      return x;
    }
  )");

  const GotoFunction &m = fn(*l, "main");
  const GotoInstr *begin = nullptr;
  for (const auto &in : m.body)
    if (in.kind == GotoInstr::Kind::Catch && !in.catch_end) {
      begin = &in;
      break;
    }
  REQUIRE(begin->entries.size() == 4);
  CHECK(begin->entries[0].by_ref);
  CHECK(begin->entries[0].desc.kind == ExDesc::Kind::Plain);
  CHECK(begin->entries[1].desc.kind == ExDesc::Kind::Pointer);
  CHECK(begin->entries[2].desc.kind == ExDesc::Kind::VoidPtr);
  CHECK(begin->entries[3].desc.kind == ExDesc::Kind::Ellipsis);
  CHECK(begin->entries[3].var == "");
  pos_of(dump(*l, "main"), "CATCH int->1, const char*->2, void*->3, ...->4");
}

TEST_CASE("throw descriptors carry the array/pointer adjustments") {
  auto l = lower_ok(R"(
    int arr[3];
    int main(int argc) {
      if (argc == 1)
        throw arr;
      if (argc == 2)
        throw (void *)0;
      if (argc == 3) {
        const int *p = arr;
        throw p;
      }
      return 0;
    }
  )");

  std::string d = dump(*l, "main");
  pos_of(d, "THROW int[]: arr");
  pos_of(d, "THROW void*: 0");
  pos_of(d, "THROW const int*: p");

  const GotoFunction &m = fn(*l, "main");
  std::vector<ExDesc::Kind> kinds;
  for (const auto &in : m.body)
    if (in.kind == GotoInstr::Kind::Throw)
      kinds.push_back(in.ex.kind);
  REQUIRE(kinds.size() == 3);
  CHECK(kinds[0] == ExDesc::Kind::Array);
  CHECK(kinds[1] == ExDesc::Kind::VoidPtr);
  CHECK(kinds[2] == ExDesc::Kind::Pointer);
}

TEST_CASE("bare throw becomes a re-raise THROW with no operand") {
  auto l = lower_ok(R"(
    int main() {
      try {
        throw 5;
      } catch (int i) {
        throw;
      }
      return 0;
    }
  )");
  std::string d = dump(*l, "main");
  in_order(d, {"THROW int: 5", "THROW\n"});
  const GotoFunction &m = fn(*l, "main");
  bool saw_rethrow = false;
  for (const auto &in : m.body)
    if (in.kind == GotoInstr::Kind::Throw &&
        in.ex.kind == ExDesc::Kind::Rethrow) {
      saw_rethrow = true;
      CHECK(in.expr == nullptr);
    }
  CHECK(saw_rethrow);
}

TEST_CASE("throw specifications become a leading THROW_DECL") {
  auto l = lower_ok(R"(
    void risky() throw(int, float) { throw 3; }
    void safe() throw() {}
    void plain() {}
    int main() { plain(); return 0; }
  )");

  const GotoFunction &r = fn(*l, "risky");
  REQUIRE(r.body[0].kind == GotoInstr::Kind::ThrowDecl);
  REQUIRE(r.body[0].allowed.size() == 2);
  CHECK(r.body[0].allowed[0].kind == ExDesc::Kind::Plain);
  CHECK(dump(*l, "risky").rfind("      THROW_DECL (int, float)\n", 0) == 0);

  const GotoFunction &s = fn(*l, "safe");
  REQUIRE(s.body[0].kind == GotoInstr::Kind::ThrowDecl);
  CHECK(s.body[0].allowed.empty());
  CHECK(dump(*l, "safe").rfind("      THROW_DECL ()\n", 0) == 0);

  CHECK(count_kind(fn(*l, "plain"), GotoInstr::Kind::ThrowDecl) == 0);
}

// ----------------------------------------------------------- control flow

TEST_CASE("while loop: conditional exit, backward jump") {
  auto l = lower_ok(R"(
    int main() {
      int i = 0;
      int acc = 0;
      while (i < 10) {
        acc += i;
        i++;
      }
      return acc;
    }
  )");
  CHECK(dump(*l, "main") ==
        "      DECL i : int\n"
        "      ASSIGN i := 0\n"
        "      DECL acc : int\n"
        "      ASSIGN acc := 0\n"
        "   1: IF !(i < 10) GOTO 2\n"
        "      ASSIGN acc := acc + i\n"
        "      ASSIGN i := i + 1\n"
        "      GOTO 1\n"
        "   2: DEAD acc\n"
        "      DEAD i\n"
        "      RETURN acc\n"
        "      DEAD acc\n"
        "      DEAD i\n"
        "      END_FUNCTION\n");
}

TEST_CASE("for loop: continue targets the step, break exits") {
  auto l = lower_ok(R"(
    int main() {
      int acc = 0;
      for (int j = 0; j < 8; ++j) {
        if (j == 2)
          continue;
        if (j == 5)
          break;
        acc += j;
      }
      return acc;
    }
  )");
  std::string d = dump(*l, "main");
  in_order(d, {
    "DECL j : int",
    "ASSIGN j := 0",
    "IF !(j < 8) GOTO",
    "IF !(j == 2) GOTO",
    "GOTO",          // the continue
    "IF !(j == 5) GOTO",
    "GOTO",          // the break
    "ASSIGN acc := acc + j",
    "ASSIGN j := j + 1",
    "DEAD j",
  });

  // The continue jumps to the step assignment; the break past it.
  const GotoFunction &m = fn(*l, "main");
  size_t step_at = 0, dead_j = 0;
  for (size_t i = 0; i < m.body.size(); ++i) {
    const GotoInstr &in = m.body[i];
    if (in.kind == GotoInstr::Kind::Assign && in.lhs &&
        in.lhs->var == "j" && in.expr->kind == TypedExpr::Kind::Binary)
      step_at = i;
    if (in.kind == GotoInstr::Kind::Dead && in.var == "j")
      dead_j = i;
  }
  bool continue_ok = false, break_ok = false;
  for (const auto &in : m.body) {
    if (in.kind != GotoInstr::Kind::Goto)
      continue;
    if (in.target == step_at)
      continue_ok = true;
    if (in.target == dead_j)
      break_ok = true;
  }
  CHECK(continue_ok);
  CHECK(break_ok);
}

TEST_CASE("switch lowers to a comparison chain with fallthrough") {
  auto l = lower_ok(R"(
    int main(int argc) {
      int r = 0;
      switch (argc) {
      case 0:
        r = 1;
        break;
      case 5:
        r = 2;
      default:
        r = 3;
        break;
      }
      return r;
    }
  )");
  std::string d = dump(*l, "main");
  in_order(d, {
    "IF argc == 0 GOTO 1",
    "IF argc == 5 GOTO 2",
    "GOTO 3",
    "   1: ASSIGN r := 1",
    "GOTO 4",
    "   2: ASSIGN r := 2",
    "   3: ASSIGN r := 3",
    "GOTO 4",
    "   4: ",
  });
}

TEST_CASE("labels are assigned densely in program order") {
  auto l = lower_ok(R"(
    int main() {
      int x = 0;
      while (x < 3) {
        if (x == 1)
          x = 2;
        else
          x = x + 1;
      }
      return x;
    }
  )");
  const GotoFunction &m = fn(*l, "main");
  // Collect targets; the dump numbers them 1..n by instruction position.
  std::vector<size_t> targets;
  for (const auto &in : m.body)
    if ((in.kind == GotoInstr::Kind::Goto ||
         in.kind == GotoInstr::Kind::If) &&
        in.target != kNoTarget)
      targets.push_back(in.target);
  std::string d = dump(*l, "main");
  for (size_t n = 1; n <= 4; ++n) {
    size_t p = d.find(std::to_string(n) + ": ");
    if (p == std::string::npos)
      break;
    // every earlier label number appears earlier in the text
    for (size_t k = 1; k < n; ++k)
      CHECK(d.find(std::to_string(k) + ": ") < p);
  }
}

// ------------------------------------------------- expression purification

TEST_CASE("calls are hoisted onto FUNCTION_CALL instructions") {
  auto l = lower_ok(R"(
    int sq(int v) { return v * v; }
    int main() {
      int a = sq(2) + sq(3);
      return a;
    }
  )");
  CHECK(dump(*l, "main") ==
        "      DECL a : int\n"
        "      DECL $t1 : int\n"
        "      FUNCTION_CALL $t1 := sq(2)\n"
        "      DECL $t2 : int\n"
        "      FUNCTION_CALL $t2 := sq(3)\n"
        "      ASSIGN a := $t1 + $t2\n"
        "      DEAD a\n"
        "      RETURN a\n"
        "      DEAD a\n"
        "      END_FUNCTION\n");
}

TEST_CASE("short-circuit with effects lowers to guarded evaluation") {
  auto l = lower_ok(R"(
    int f(int v) { return v; }
    int main(int argc) {
      bool b = argc > 0 && f(argc) < 5;
      bool c = argc > 1 || argc > 2; // pure: stays an expression
      return b && c;
    }
  )");
  std::string d = dump(*l, "main");
  in_order(d, {
    "ASSIGN $t1 := argc > 0",
    "IF !$t1 GOTO 1",
    "FUNCTION_CALL $t2 := f(argc)",
    "ASSIGN $t1 := $t2 < 5",
    "   1: ASSIGN b := $t1",
    "ASSIGN c := argc > 1 || argc > 2",
    "RETURN (int)(b && c)",
  });
}

TEST_CASE("increments and compound assignment evaluate the place once") {
  auto l = lower_ok(R"(
    int main() {
      int i = 3;
      int a[4];
      int pre = ++i;
      int post = i++;
      a[2] += i;
      return pre + post;
    }
  )");
  std::string d = dump(*l, "main");
  in_order(d, {
    "ASSIGN i := i + 1",   // ++i
    "ASSIGN pre := i",
    "ASSIGN $t1 := i",     // old value of i++
    "ASSIGN i := i + 1",
    "ASSIGN post := $t1",
    "ASSIGN a[(long)2] := a[(long)2] + i",
  });
}

TEST_CASE("pure conditional survives as an ite expression") {
  auto l = lower_ok(R"(
    int main(int argc) {
      int m = argc > 2 ? argc : 2;
      return m;
    }
  )");
  pos_of(dump(*l, "main"), "ASSIGN m := argc > 2 ? argc : 2");
}

TEST_CASE("conditional with calls lowers to branches") {
  auto l = lower_ok(R"(
    int f(int v) { return v; }
    int main(int argc) {
      int m = argc > 2 ? f(argc) : 2;
      return m;
    }
  )");
  std::string d = dump(*l, "main");
  in_order(d, {
    "DECL $t1 : int",
    "IF !(argc > 2) GOTO 1",
    "FUNCTION_CALL $t2 := f(argc)",
    "ASSIGN $t1 := $t2",
    "GOTO 2",
    "   1: ASSIGN $t1 := 2",
    "   2: ASSIGN m := $t1",
  });
}

// -------------------------------------------------- objects and lifetimes

TEST_CASE("scope exit runs destructors then DEAD, value pinned first") {
  auto l = lower_ok(R"(
    class Guard {
    public:
      Guard() { live = 1; }
      ~Guard() { live = 0; }
      int live;
    };
    int use(int x) {
      Guard g;
      if (x > 0)
        return g.live + x;
      return 0;
    }
    int main() { return use(2); }
  )");
  std::string d = dump(*l, "use");
  in_order(d, {
    "DECL g : Guard",
    "FUNCTION_CALL (&g)->Guard()",
    "ASSIGN $t1 := g.live + x",
    "FUNCTION_CALL (&g)->~Guard()",
    "DEAD g",
    "RETURN $t1",
  });
}

TEST_CASE("heap allocation: NEW, virtual base, constructor, free") {
  auto l = lower_ok(R"(
    class V {
    public:
      V() { v = 1; }
      ~V() { v = 0; }
      int v;
    };
    class D : virtual public V {
    public:
      D() { d = 2; }
      int d;
    };
    int main() {
      D *h = new D();
      int r = h->v;
      delete h;
      return r;
    }
  )");
  std::string d = dump(*l, "main");
  in_order(d, {
    "ASSIGN $t1 := new D()",
    "FUNCTION_CALL ((V*)$t1)->V()",
    "FUNCTION_CALL $t1->D()",
    "ASSIGN h := $t1",
    "ASSIGN r := h->virtual::V::v",
    "FUNCTION_CALL ((V*)h)->~V()",
    "FUNCTION_CALL __ESBMC_free(h)",
  });
}

TEST_CASE("scalar new carries its initializer through a store") {
  auto l = lower_ok(R"(
    int main() {
      int *p = new int(5);
      int v = *p;
      delete p;
      return v;
    }
  )");
  std::string d = dump(*l, "main");
  in_order(d, {
    "ASSIGN $t1 := new int()",
    "ASSIGN *$t1 := 5",
    "ASSIGN p := $t1",
    "FUNCTION_CALL __ESBMC_free(p)",
  });
}

TEST_CASE("thrown class temporaries are materialised before THROW") {
  auto l = lower_ok(R"(
    class MyEx {
    public:
      MyEx(int c) { code = c; }
      int code;
    };
    int main() {
      try {
        throw MyEx(42);
      } catch (MyEx &e) {
        return e.code;
      }
      return 0;
    }
  )");
  std::string d = dump(*l, "main");
  in_order(d, {
    "DECL $t1 : MyEx",
    "FUNCTION_CALL (&$t1)->MyEx(42)",
    "THROW MyEx: $t1",
  });
}

// ------------------------------------------------------- program assembly

TEST_CASE("globals gather into an init function; main is the entry") {
  auto l = lower_ok(R"(
    int limit = 64;
    int zeroed;
    int main() { return limit + zeroed; }
  )");
  CHECK(l->gp.main_symbol == "main");
  REQUIRE(l->gp.init_symbol == "$globals_init");
  CHECK(dump(*l, "$globals_init") ==
        "      ASSIGN limit := 64\n"
        "      END_FUNCTION\n");
}

TEST_CASE("no init function when no global has an initializer") {
  auto l = lower_ok(R"(
    int zeroed;
    int main() { return zeroed; }
  )");
  CHECK(l->gp.init_symbol == "");
  CHECK(l->gp.functions.count("$globals_init") == 0);
}

TEST_CASE("model bodies lower with the hidden flag set") {
  auto l = lower_ok(R"(
    #include <vector>
    int main() {
      std::vector<int> v;
      v.push_back(1);
      return v.at(0);
    }
  )");
  const GotoFunction &at = fn(*l, "vector<int>::at");
  bool saw_assert = false;
  for (const auto &in : at.body) {
    CHECK(in.hidden);
    if (in.kind == GotoInstr::Kind::Assert) {
      saw_assert = true;
      CHECK(in.msg == "Out of bounds violation");
    }
  }
  CHECK(saw_assert);
  for (const auto &in : fn(*l, "main").body)
    CHECK_FALSE(in.hidden);
}

TEST_CASE("virtual dispatch sites keep the slot call") {
  auto l = lower_ok(R"(
    class Vehicle {
    public:
      Vehicle() {}
      virtual int wheels() = 0;
    };
    class Car : public Vehicle {
    public:
      virtual int wheels() { return 4; }
    };
    int main() {
      Car c;
      Vehicle *v = &c;
      return v->wheels();
    }
  )");
  std::string d = dump(*l, "main");
  pos_of(d, "FUNCTION_CALL $t1 := v->wheels [virtual]()");
  const GotoFunction &m = fn(*l, "main");
  bool saw_virtual = false;
  for (const auto &in : m.body)
    if (in.kind == GotoInstr::Kind::FunctionCall &&
        in.expr->kind == TypedExpr::Kind::VirtualCall)
      saw_virtual = true;
  CHECK(saw_virtual);
}

TEST_CASE("every lowered instruction stream is structurally sound") {
  // Exercises nesting: loops inside handlers inside loops.
  auto l = lower_ok(R"(
    int work(int n) throw(int) {
      int acc = 0;
      for (int i = 0; i < n; ++i) {
        try {
          if (i == 3)
            throw i;
          acc += i;
        } catch (int v) {
          while (v > 0) {
            acc += v;
            v = v - 1;
          }
        }
      }
      return acc;
    }
    int main() { return work(6); }
  )");
  // lower_ok validates every function already; pin the pairing depth too.
  const GotoFunction &w = fn(*l, "work");
  CHECK(count_kind(w, GotoInstr::Kind::Catch) == 2);
  CHECK(w.body[0].kind == GotoInstr::Kind::ThrowDecl);
  CHECK(w.body.back().kind == GotoInstr::Kind::EndFunction);
}
