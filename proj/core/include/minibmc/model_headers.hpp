#ifndef MINIBMC_MODEL_HEADERS_HPP
#define MINIBMC_MODEL_HEADERS_HPP

#include <map>
#include <string>

namespace minibmc {

// Source text of the built-in operational-model headers, keyed by the
// standard header name ("vector", "cassert", ...).  The bodies are ordinary
// MiniC++ amended with the reserved __ESBMC_* intrinsics; they are embedded
// in the binary so a verification run needs no external library files.
const std::map<std::string, std::string> &builtin_model_headers();

// True if `name` names a built-in header (with or without ".h").
bool is_builtin_header(const std::string &name);

} // namespace minibmc

#endif
