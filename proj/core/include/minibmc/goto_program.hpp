#ifndef MINIBMC_GOTO_PROGRAM_HPP
#define MINIBMC_GOTO_PROGRAM_HPP

#include "minibmc/typed_program.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace minibmc {

inline constexpr size_t kNoTarget = static_cast<size_t>(-1);

// Exception type descriptor.  Array, function and pointer adjustments are
// applied when the descriptor is built, so the dispatch rules later operate
// on a small closed domain.
struct ExDesc {
  enum class Kind : uint8_t {
    Plain,    // thrown value / handler of object type; `type` is the type
    Array,    // thrown array; `type` is the element type
    Function, // thrown function designator; `type` is the function pointer
    Pointer,  // typed pointer; `type` is the pointee (qualifiers kept)
    VoidPtr,  // pointer to void (either side)
    Ellipsis, // catch(...) (handler side only)
    Rethrow,  // bare `throw;` (throw side only)
  };
  Kind kind = Kind::Plain;
  TypeRef type = kNoType; // kNoType for VoidPtr/Ellipsis/Rethrow
};

// One handler of a try block: descriptor, the local bound on entry and the
// instruction index of the handler code.
struct CatchEntry {
  ExDesc desc;
  std::string var; // unique local name; "" when the handler is unnamed
  bool by_ref = false;
  size_t target = kNoTarget;
};

struct GotoInstr {
  enum class Kind : uint8_t {
    Assign,       // lhs := expr
    FunctionCall, // [lhs :=] expr (Call/VirtualCall/IntrinsicCall node)
    If,           // if expr, jump to target
    Goto,         // jump to target
    Assert,       // property: expr must hold; msg describes it
    Assume,       // constrain paths to expr
    Catch,        // begin (non-empty entries) / end (catch_end) of a try
    Throw,        // raise ex carrying expr (null for re-raise)
    ThrowDecl,    // declared throw specification for this function
    Return,       // return expr (null for void)
    Decl,         // var enters scope
    Dead,         // var leaves scope
    EndFunction,
  };

  Kind kind{};
  SourceLoc loc;
  bool hidden = false; // lowered from a model body; filtered from traces

  TypedExprPtr lhs;  // Assign place; FunctionCall result (may be null)
  TypedExprPtr expr; // Assign rhs; call; If/Assert/Assume condition;
                     // Throw value; Return value
  size_t target = kNoTarget;       // If/Goto
  std::vector<CatchEntry> entries; // Catch begin
  bool catch_end = false;          // Catch end marker
  ExDesc ex;                       // Throw
  std::vector<ExDesc> allowed;     // ThrowDecl; empty = throw()
  std::string var;                 // Decl/Dead
  TypeRef type = kNoType;          // Decl
  std::string msg;                 // Assert description
};

struct GotoFunction {
  std::string symbol;
  std::vector<GotoInstr> body; // last instruction is EndFunction
};

struct GotoProgram {
  std::map<std::string, GotoFunction> functions; // keyed by symbol
  std::string main_symbol;
  std::string init_symbol; // global initialiser; "" when nothing to run
};

// Lowers every defined function.  Total: a well-typed program always
// converts.  The program is mutable only because lowering may intern
// additional derived types (pointers for materialised temporaries).
GotoProgram lower_to_goto(TypedProgram &prog);

// Textual form used by --show-goto.  Targets print as dense numeric labels
// assigned in program order.
std::string dump_goto_function(const GotoFunction &fn,
                               const TypedProgram &prog);
std::string dump_goto_program(const GotoProgram &gp, const TypedProgram &prog);

// Structural well-formedness: targets in range, CATCH begin/end pairing,
// THROW_DECL only as the first instruction, terminating EndFunction.
// Returns a description of the first violation, or "" when clean.
std::string validate_goto_function(const GotoFunction &fn);

} // namespace minibmc

#endif
