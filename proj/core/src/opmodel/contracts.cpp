#include "minibmc/opmodel.hpp"

namespace minibmc {

namespace {

constexpr const char *kCapacityMsg = "model capacity exceeded";

TermRef pos_const(TermFactory &f, uint64_t v) { return f.bv_const(v, 64); }

// 0 <= pos && pos < limit, compared signed.
TermRef in_bounds(TermFactory &f, TermRef pos, TermRef limit) {
  return f.and_(f.bv_sle(pos_const(f, 0), pos), f.bv_slt(pos, limit));
}

TermRef size_plus(TermFactory &f, TermRef size, uint64_t d) {
  return f.bv_add(size, pos_const(f, d));
}

TermRef size_minus(TermFactory &f, TermRef size, uint64_t d) {
  return f.bv_sub(size, pos_const(f, d));
}

} // namespace

TermRef first_index_eq(OpModelCtx &ctx, TermRef arr, TermRef needle,
                       TermRef size) {
  TermFactory &f = ctx.f;
  TermRef acc = size;
  for (uint64_t j = ctx.capacity; j-- > 0;) {
    TermRef jc = pos_const(f, j);
    TermRef hit = f.and_(f.bv_slt(jc, size), f.eq(f.select(arr, jc), needle));
    acc = f.ite(hit, jc, acc);
  }
  return acc;
}

TermRef first_insert_point(OpModelCtx &ctx, TermRef keys, TermRef needle,
                           TermRef size) {
  TermFactory &f = ctx.f;
  TermRef acc = size;
  for (uint64_t j = ctx.capacity; j-- > 0;) {
    TermRef jc = pos_const(f, j);
    TermRef precedes =
        f.and_(f.bv_slt(jc, size), f.bv_slt(needle, f.select(keys, jc)));
    acc = f.ite(precedes, jc, acc);
  }
  return acc;
}

TermRef sorted_chain(OpModelCtx &ctx, TermRef keys, TermRef size,
                     bool strict) {
  TermFactory &f = ctx.f;
  std::vector<TermRef> links;
  for (uint64_t j = 0; j + 1 < ctx.capacity; ++j) {
    TermRef a = f.select(keys, pos_const(f, j));
    TermRef b = f.select(keys, pos_const(f, j + 1));
    TermRef ordered = strict ? f.bv_slt(a, b) : f.bv_sle(a, b);
    links.push_back(
        f.implies(f.bv_slt(pos_const(f, j + 1), size), ordered));
  }
  return f.and_(links);
}

// ------------------------------------------------------------ sequential

OpResult seq_insert(OpModelCtx &ctx, const ContainerState &c,
                    const IteratorState &i, TermRef v) {
  TermFactory &f = ctx.f;
  OpResult r;
  TermRef new_size = size_plus(f, c.size, 1);

  r.pre.push_back({c.initialized, "insert precondition"});
  r.pre.push_back({i.initialized, "insert precondition"});
  r.pre.push_back({in_bounds(f, i.pos, new_size), "insert precondition"});
  r.pre.push_back({f.bv_slt(c.size, pos_const(f, ctx.capacity)),
                   kCapacityMsg});

  // Shift [pos, size) forward one slot, reading the pre-state, then place
  // the new element.
  TermRef shifted =
      f.memcpy_term(c.values, c.values, i.pos, size_plus(f, i.pos, 1),
                    f.bv_sub(c.size, i.pos), ctx.capacity);
  TermRef stored = f.store(shifted, i.pos, v);

  r.next = c;
  r.next.values = stored;
  r.next.size = new_size;
  r.next.initialized = f.tru();
  r.iter = IteratorState{r.next.values, TermRef{}, i.pos, f.tru()};

  r.post.push_back(
      {f.eq(f.select(r.iter.values_ref, r.iter.pos), v),
       "insert postcondition"});
  r.post.push_back({f.eq(r.iter.values_ref, r.next.values),
                    "insert postcondition"});
  r.post.push_back({f.eq(r.iter.pos, i.pos), "insert postcondition"});
  return r;
}

OpResult seq_erase(OpModelCtx &ctx, const ContainerState &c,
                   const IteratorState &i) {
  TermFactory &f = ctx.f;
  OpResult r;

  r.pre.push_back({i.initialized, "erase precondition"});
  r.pre.push_back({c.initialized, "erase precondition"});
  r.pre.push_back({in_bounds(f, i.pos, c.size), "erase precondition"});
  r.pre.push_back({f.implies(f.not_(f.eq(c.size, pos_const(f, 0))),
                             c.initialized),
                   "erase precondition"});

  TermRef next_pos = size_plus(f, i.pos, 1);
  TermRef shifted =
      f.memcpy_term(c.values, c.values, next_pos, i.pos,
                    f.bv_sub(c.size, next_pos), ctx.capacity);

  r.next = c;
  r.next.values = shifted;
  r.next.size = size_minus(f, c.size, 1);
  r.iter = IteratorState{r.next.values, TermRef{}, next_pos, f.tru()};

  // The erased slot now holds its old successor (whenever one existed);
  // the returned iterator aliases the primed values.
  r.post.push_back(
      {f.implies(f.bv_slt(next_pos, c.size),
                 f.eq(f.select(r.next.values, i.pos),
                      f.select(c.values, next_pos))),
       "erase postcondition"});
  r.post.push_back({f.eq(r.iter.values_ref, r.next.values),
                    "erase postcondition"});
  return r;
}

OpResult seq_search(OpModelCtx &ctx, const ContainerState &c, TermRef v) {
  TermFactory &f = ctx.f;
  OpResult r;

  r.pre.push_back({c.initialized, "search precondition"});

  TermRef pos = first_index_eq(ctx, c.values, v, c.size);
  r.next = c; // the container is unchanged
  r.iter = IteratorState{c.values, TermRef{}, pos, f.tru()};

  // Found: the iterator dereferences to v at the first occurrence;
  // absent: it denotes the one-past-end slot.
  r.post.push_back(
      {f.ite(f.bv_slt(pos, c.size), f.eq(f.select(c.values, pos), v),
             f.eq(pos, c.size)),
       "search postcondition"});
  r.post.push_back({f.eq(r.next.values, c.values), "search postcondition"});
  r.post.push_back({f.eq(r.next.size, c.size), "search postcondition"});
  return r;
}

// ----------------------------------------------------------- associative

OpResult assoc_insert(OpModelCtx &ctx, const ContainerState &c, TermRef k,
                      TermRef v) {
  TermFactory &f = ctx.f;
  OpResult r;

  r.pre.push_back({c.initialized, "insert precondition"});
  r.pre.push_back({sorted_chain(ctx, c.keys, c.size, !c.multi_keys),
                   "insert precondition"});

  TermRef found_pos = first_index_eq(ctx, c.keys, k, c.size);
  TermRef found = c.multi_keys ? f.fls() : f.bv_slt(found_pos, c.size);
  TermRef ins_pos = first_insert_point(ctx, c.keys, k, c.size);

  r.pre.push_back(
      {f.implies(f.not_(found), f.bv_slt(c.size, pos_const(f, ctx.capacity))),
       kCapacityMsg});

  TermRef shift_len = f.bv_sub(c.size, ins_pos);
  TermRef one_after = size_plus(f, ins_pos, 1);
  TermRef new_keys = f.store(
      f.memcpy_term(c.keys, c.keys, ins_pos, one_after, shift_len,
                    ctx.capacity),
      ins_pos, k);
  TermRef new_values = f.store(
      f.memcpy_term(c.values, c.values, ins_pos, one_after, shift_len,
                    ctx.capacity),
      ins_pos, v);

  r.next = c;
  r.next.keys = f.ite(found, c.keys, new_keys);
  r.next.values = f.ite(found, c.values, new_values);
  r.next.size = f.ite(found, c.size, size_plus(f, c.size, 1));
  r.next.initialized = f.tru();
  r.iter = IteratorState{r.next.values, r.next.keys,
                         f.ite(found, found_pos, ins_pos), f.tru()};

  r.post.push_back({f.eq(r.iter.keys_ref, r.next.keys),
                    "insert postcondition"});
  r.post.push_back({f.eq(r.iter.values_ref, r.next.values),
                    "insert postcondition"});
  // Key absence forces growth; duplicate-key containers skip the check
  // because they always grow.
  if (!c.multi_keys)
    r.post.push_back(
        {f.implies(f.not_(found),
                   f.eq(r.next.size, size_plus(f, c.size, 1))),
         "insert postcondition"});
  r.post.push_back(
      {sorted_chain(ctx, r.next.keys, r.next.size, !c.multi_keys),
       "insert postcondition"});
  return r;
}

OpResult assoc_erase(OpModelCtx &ctx, const ContainerState &c,
                     const IteratorState &i) {
  TermFactory &f = ctx.f;
  OpResult r;

  r.pre.push_back({i.initialized, "erase precondition"});
  r.pre.push_back({c.initialized, "erase precondition"});
  r.pre.push_back({in_bounds(f, i.pos, c.size), "erase precondition"});
  r.pre.push_back({f.implies(f.not_(f.eq(c.size, pos_const(f, 0))),
                             c.initialized),
                   "erase precondition"});

  TermRef next_pos = size_plus(f, i.pos, 1);
  TermRef rem = f.bv_sub(c.size, next_pos);
  r.next = c;
  r.next.keys =
      f.memcpy_term(c.keys, c.keys, next_pos, i.pos, rem, ctx.capacity);
  r.next.values =
      f.memcpy_term(c.values, c.values, next_pos, i.pos, rem, ctx.capacity);
  r.next.size = size_minus(f, c.size, 1);
  r.iter = IteratorState{r.next.values, r.next.keys, next_pos, f.tru()};

  TermRef had_successor = f.bv_slt(next_pos, c.size);
  r.post.push_back({f.implies(had_successor,
                              f.eq(f.select(r.next.keys, i.pos),
                                   f.select(c.keys, next_pos))),
                    "erase postcondition"});
  r.post.push_back({f.implies(had_successor,
                              f.eq(f.select(r.next.values, i.pos),
                                   f.select(c.values, next_pos))),
                    "erase postcondition"});
  r.post.push_back({f.eq(r.iter.keys_ref, r.next.keys),
                    "erase postcondition"});
  r.post.push_back({f.eq(r.iter.values_ref, r.next.values),
                    "erase postcondition"});
  return r;
}

OpResult assoc_search(OpModelCtx &ctx, const ContainerState &c, TermRef k) {
  TermFactory &f = ctx.f;
  OpResult r;

  r.pre.push_back({c.initialized, "search precondition"});

  TermRef pos = first_index_eq(ctx, c.keys, k, c.size);
  r.next = c;
  r.iter = IteratorState{c.values, c.keys, pos, f.tru()};

  r.post.push_back(
      {f.ite(f.bv_slt(pos, c.size), f.eq(f.select(c.keys, pos), k),
             f.eq(pos, c.size)),
       "search postcondition"});
  r.post.push_back({f.eq(r.next.keys, c.keys), "search postcondition"});
  r.post.push_back({f.eq(r.next.values, c.values), "search postcondition"});
  r.post.push_back({f.eq(r.next.size, c.size), "search postcondition"});
  return r;
}

// -------------------------------------------------------- element access

Condition vector_index_property(TermFactory &f, const ContainerState &c,
                                TermRef n) {
  return {in_bounds(f, n, c.size), "Out of bounds violation"};
}

TermRef vector_index_element(TermFactory &f, const ContainerState &c,
                             TermRef n) {
  return f.select(c.values, n);
}

// --------------------------------------------------------------- strings

OpResult str_concat(OpModelCtx &ctx, const ContainerState &a,
                    const ContainerState &b) {
  TermFactory &f = ctx.f;
  OpResult r;
  r.pre.push_back({a.initialized, "concat precondition"});
  r.pre.push_back({b.initialized, "concat precondition"});
  r.pre.push_back(
      {f.bv_sle(f.bv_add(a.size, b.size), pos_const(f, ctx.capacity)),
       kCapacityMsg});
  r.next = a;
  r.next.values = f.memcpy_term(b.values, a.values, pos_const(f, 0), a.size,
                                b.size, ctx.capacity);
  r.next.size = f.bv_add(a.size, b.size);
  r.next.initialized = f.tru();
  r.iter = IteratorState{r.next.values, TermRef{}, r.next.size, f.tru()};
  r.post.push_back({f.eq(r.next.size, f.bv_add(a.size, b.size)),
                    "concat postcondition"});
  return r;
}

TermRef str_equal(OpModelCtx &ctx, const ContainerState &a,
                  const ContainerState &b) {
  TermFactory &f = ctx.f;
  std::vector<TermRef> parts;
  parts.push_back(f.eq(a.size, b.size));
  for (uint64_t j = 0; j < ctx.capacity; ++j) {
    TermRef jc = pos_const(f, j);
    parts.push_back(f.implies(f.bv_slt(jc, a.size),
                              f.eq(f.select(a.values, jc),
                                   f.select(b.values, jc))));
  }
  return f.and_(parts);
}

} // namespace minibmc
