#ifndef MINIBMC_SOURCE_UNIT_HPP
#define MINIBMC_SOURCE_UNIT_HPP

#include "minibmc/token.hpp"

#include <string>
#include <vector>

namespace minibmc {

// A fully include-resolved token stream for one verification run.
struct SourceUnit {
  FileTable files;
  std::vector<Token> tokens; // ends with one Eof token
};

// Reads `main_path` from disk, tokenizes it and splices every #include:
// built-in model headers are resolved by name (<vector>, <cassert>, ...),
// user headers are searched in the including file's directory followed by
// `include_dirs`.  Each distinct file is spliced at most once.
SourceUnit load_program(const std::string &main_path,
                        const std::vector<std::string> &include_dirs,
                        DiagEngine &diags);

// Same pipeline over in-memory text (used heavily by the tests).
SourceUnit load_program_from_string(const std::string &name,
                                    const std::string &text,
                                    const std::vector<std::string> &include_dirs,
                                    DiagEngine &diags);

} // namespace minibmc

#endif
