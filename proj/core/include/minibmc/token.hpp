#ifndef MINIBMC_TOKEN_HPP
#define MINIBMC_TOKEN_HPP

#include "minibmc/source.hpp"

#include <cstdint>
#include <string>

namespace minibmc {

enum class TokenKind : uint8_t {
  Eof,
  Identifier,
  Keyword,
  IntLit,
  FloatLit,
  CharLit,
  StringLit,
  Punct,
  // "#include <...>" or "#include \"...\"" collapsed into one token; the
  // include resolver replaces it with the tokens of the named file.
  IncludeDirective,
};

struct Token {
  TokenKind kind = TokenKind::Eof;
  std::string text;    // spelling (for literals: without quotes/suffix)
  SourceLoc loc;

  // Literal payloads.
  uint64_t int_value = 0;     // IntLit / CharLit
  bool int_is_unsigned = false;
  bool int_is_long = false;
  double float_value = 0.0;   // FloatLit
  bool float_is_single = false;
  bool include_is_angled = false; // IncludeDirective

  bool is(TokenKind k) const { return kind == k; }
  bool is_kw(const char *kw) const {
    return kind == TokenKind::Keyword && text == kw;
  }
  bool is_punct(const char *p) const {
    return kind == TokenKind::Punct && text == p;
  }
  bool is_ident() const { return kind == TokenKind::Identifier; }
};

const char *token_kind_name(TokenKind k);

} // namespace minibmc

#endif
