#ifndef MINIBMC_PARSER_HPP
#define MINIBMC_PARSER_HPP

#include "minibmc/ast.hpp"
#include "minibmc/source_unit.hpp"

namespace minibmc {

// Parses an include-resolved token stream.  On a syntax error a diagnostic
// naming the expected construct is emitted and the parser recovers at the
// next ';' or '}' so later errors are still reported.
ast::TranslationUnit parse(const SourceUnit &unit, DiagEngine &diags);

} // namespace minibmc

#endif
