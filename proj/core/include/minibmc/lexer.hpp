#ifndef MINIBMC_LEXER_HPP
#define MINIBMC_LEXER_HPP

#include "minibmc/token.hpp"

#include <string_view>
#include <vector>

namespace minibmc {

// Tokenizes one file.  The returned stream does not end with an Eof token;
// the include resolver concatenates streams and appends a single Eof.
// Lexical errors (unterminated comment/literal, stray characters) are
// reported through `diags` at the position where the offending construct
// starts.
std::vector<Token> tokenize(uint32_t file_id, std::string_view text,
                            DiagEngine &diags);

bool is_keyword(std::string_view word);

} // namespace minibmc

#endif
