// Container operational model: the abstract state kept per container object
// during symbolic execution and the contract builders for the core
// operations (insert, erase, search — sequential and associative — plus
// indexed access and the string helpers).
//
// Each builder is a pure function over terms.  It returns the asserted
// preconditions, the defining terms of the primed container/iterator state,
// and the asserted postconditions.  The caller binds fresh SSA symbols to
// the defining terms and assumes the equalities — that conjunction is the
// operation's transition constraint.  Positions and sizes are 64-bit values
// compared signed; all expansions over symbolic lengths are bounded by the
// model capacity.
#pragma once

#include "minibmc/term.hpp"

#include <string>
#include <vector>

namespace minibmc {

// Current SSA terms of one container object.
struct ContainerState {
  TermRef values;      // Array(BV64 -> elem)
  TermRef keys;        // Array(BV64 -> key); associative only (else invalid)
  TermRef size;        // BV64
  TermRef initialized; // Bool ghost: "not null" in the contract sense
  bool multi_keys = false;
};

// Current SSA terms of one iterator value.
struct IteratorState {
  TermRef values_ref;  // aliases the container's values
  TermRef keys_ref;    // associative only
  TermRef pos;         // BV64
  TermRef initialized; // Bool ghost
};

struct Condition {
  TermRef cond;
  std::string desc;
};

// One contract instance.  `pre` is asserted before the operation, `post`
// after it; `next`/`iter` carry the defining terms of the primed state.
struct OpResult {
  std::vector<Condition> pre;
  std::vector<Condition> post;
  ContainerState next;
  IteratorState iter;
};

struct OpModelCtx {
  TermFactory &f;
  uint64_t capacity; // model bound on container sizes
};

// ---------------------------------------------------------- sequential

OpResult seq_insert(OpModelCtx &ctx, const ContainerState &c,
                    const IteratorState &i, TermRef v);
OpResult seq_erase(OpModelCtx &ctx, const ContainerState &c,
                   const IteratorState &i);
OpResult seq_search(OpModelCtx &ctx, const ContainerState &c, TermRef v);

// ---------------------------------------------------------- associative

OpResult assoc_insert(OpModelCtx &ctx, const ContainerState &c, TermRef k,
                      TermRef v);
OpResult assoc_erase(OpModelCtx &ctx, const ContainerState &c,
                     const IteratorState &i);
OpResult assoc_search(OpModelCtx &ctx, const ContainerState &c, TermRef k);

// ------------------------------------------------------- element access

// Bounds property for indexed access; `cond` is 0 <= n < c.size and the
// message is the one counterexamples print for a violation.
Condition vector_index_property(TermFactory &f, const ContainerState &c,
                                TermRef n);
// The element term itself (select at n).
TermRef vector_index_element(TermFactory &f, const ContainerState &c,
                             TermRef n);

// ------------------------------------------------------------- strings

// Concatenation: `a` extended by `b` (byte-array append).
OpResult str_concat(OpModelCtx &ctx, const ContainerState &a,
                    const ContainerState &b);
// Equality: same length and elementwise equal below it.
TermRef str_equal(OpModelCtx &ctx, const ContainerState &a,
                  const ContainerState &b);

// --------------------------------------------------------------- shared

// First position j < size with arr[j] == needle, else size.
TermRef first_index_eq(OpModelCtx &ctx, TermRef arr, TermRef needle,
                       TermRef size);
// First position j < size with needle < arr[j] (signed), else size: the
// ordered insertion point, landing after any run of equal keys.
TermRef first_insert_point(OpModelCtx &ctx, TermRef keys, TermRef needle,
                           TermRef size);
// The sorted-chain formula over keys[0..size): strict for unique-key
// containers, non-strict when duplicates are allowed.
TermRef sorted_chain(OpModelCtx &ctx, TermRef keys, TermRef size,
                     bool strict);

} // namespace minibmc
