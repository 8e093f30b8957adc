#ifndef MINIBMC_TYPECHECK_HPP
#define MINIBMC_TYPECHECK_HPP

#include "minibmc/ast.hpp"
#include "minibmc/typed_program.hpp"

namespace minibmc {

// Resolves names and types, instantiates every used template exactly once
// (instantiation cache), flattens class hierarchies, assigns vtable slots and
// synthesizes constructor/destructor bodies.  Returns false and reports
// diagnostics on any check failure; `files` is used to recognize built-in
// model headers.
bool typecheck(const ast::TranslationUnit &tu, const FileTable &files,
               DiagEngine &diags, TypedProgram &out);

} // namespace minibmc

#endif
