#include "doctest.h"

#include "minibmc/lexer.hpp"

using namespace minibmc;

namespace {
std::vector<Token> lex_ok(const std::string &src) {
  DiagEngine diags;
  auto toks = tokenize(0, src, diags);
  REQUIRE_FALSE(diags.has_errors());
  return toks;
}
} // namespace

TEST_CASE("keywords, identifiers and punctuation with positions") {
  auto toks = lex_ok("int main() { return 0; }");
  REQUIRE(toks.size() == 9);
  CHECK(toks[0].kind == TokenKind::Keyword);
  CHECK(toks[0].text == "int");
  CHECK(toks[0].loc.line == 1);
  CHECK(toks[0].loc.column == 1);
  CHECK(toks[1].kind == TokenKind::Identifier);
  CHECK(toks[1].text == "main");
  CHECK(toks[1].loc.column == 5);
  CHECK(toks[2].is_punct("("));
  CHECK(toks[3].is_punct(")"));
  CHECK(toks[4].is_punct("{"));
  CHECK(toks[5].is_kw("return"));
  CHECK(toks[6].kind == TokenKind::IntLit);
  CHECK(toks[6].int_value == 0);
  CHECK(toks[7].is_punct(";"));
  CHECK(toks[8].is_punct("}"));
}

TEST_CASE("float literal with single-precision suffix") {
  auto toks = lex_ok("throw 10.0f;");
  REQUIRE(toks.size() == 3);
  CHECK(toks[0].is_kw("throw"));
  CHECK(toks[1].kind == TokenKind::FloatLit);
  CHECK(toks[1].float_value == doctest::Approx(10.0));
  CHECK(toks[1].float_is_single);
  CHECK(toks[2].is_punct(";"));
}

TEST_CASE("line tracking across newlines and comments") {
  auto toks = lex_ok("int a;\n// comment\nfloat b; /* block\n covers lines */ char c;");
  REQUIRE(toks.size() == 9);
  CHECK(toks[0].loc.line == 1);
  CHECK(toks[3].loc.line == 3); // float
  CHECK(toks[6].loc.line == 4); // char after multi-line block comment
}

TEST_CASE("unterminated block comment reports its start position") {
  DiagEngine diags;
  tokenize(0, "/* never closed", diags);
  REQUIRE(diags.has_errors());
  CHECK(diags.all()[0].loc.line == 1);
  CHECK(diags.all()[0].loc.column == 1);
  CHECK(diags.all()[0].message == "unterminated block comment");
}

TEST_CASE("char literals and escapes") {
  auto toks = lex_ok("'x' '\\n' '\\0'");
  REQUIRE(toks.size() == 3);
  CHECK(toks[0].int_value == 'x');
  CHECK(toks[1].int_value == '\n');
  CHECK(toks[2].int_value == 0);
}

TEST_CASE("string literals") {
  auto toks = lex_ok("\"ab\" \"c\\\"d\"");
  REQUIRE(toks.size() == 2);
  CHECK(toks[0].text == "ab");
  CHECK(toks[1].text == "c\"d");
}

TEST_CASE("integer suffixes and hex") {
  auto toks = lex_ok("10u 0xff 42ul 7L");
  REQUIRE(toks.size() == 4);
  CHECK(toks[0].int_is_unsigned);
  CHECK(toks[1].int_value == 255);
  CHECK(toks[2].int_is_unsigned);
  CHECK(toks[2].int_is_long);
  CHECK(toks[3].int_is_long);
}

TEST_CASE("multi-character punctuators use maximal munch") {
  auto toks = lex_ok("a->b :: <= >> && ... ++");
  CHECK(toks[1].is_punct("->"));
  CHECK(toks[3].is_punct("::"));
  CHECK(toks[4].is_punct("<="));
  CHECK(toks[5].is_punct(">>"));
  CHECK(toks[6].is_punct("&&"));
  CHECK(toks[7].is_punct("..."));
  CHECK(toks[8].is_punct("++"));
}

TEST_CASE("include directives are collapsed into one token") {
  auto toks = lex_ok("#include <vector>\n#include \"util.h\"\nint x;");
  REQUIRE(toks.size() >= 2);
  CHECK(toks[0].kind == TokenKind::IncludeDirective);
  CHECK(toks[0].text == "vector");
  CHECK(toks[0].include_is_angled);
  CHECK(toks[1].kind == TokenKind::IncludeDirective);
  CHECK(toks[1].text == "util.h");
  CHECK_FALSE(toks[1].include_is_angled);
}
