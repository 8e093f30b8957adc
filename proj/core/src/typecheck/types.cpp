#include "minibmc/types.hpp"

#include <sstream>

namespace minibmc {

TypeTable::TypeTable() {
  // Pre-intern the unqualified basic types so common refs are cheap.
  for (int k = 0; k <= static_cast<int>(TypeKind::Double); ++k)
    basic(static_cast<TypeKind>(k));
}

TypeRef TypeTable::intern(const TypeNode &n) {
  std::ostringstream key;
  key << static_cast<int>(n.kind) << "|" << int(n.quals) << "|" << n.inner
      << "|" << n.array_size << "|" << n.class_id << "|" << n.sig_id;
  auto it = node_index_.find(key.str());
  if (it != node_index_.end())
    return it->second;
  nodes_.push_back(n);
  TypeRef r = static_cast<TypeRef>(nodes_.size() - 1);
  node_index_[key.str()] = r;
  return r;
}

TypeRef TypeTable::basic(TypeKind k, uint8_t quals) {
  TypeNode n;
  n.kind = k;
  n.quals = quals;
  return intern(n);
}

TypeRef TypeTable::pointer_to(TypeRef t, uint8_t quals) {
  TypeNode n;
  n.kind = TypeKind::Pointer;
  n.inner = t;
  n.quals = quals;
  return intern(n);
}

TypeRef TypeTable::reference_to(TypeRef t) {
  TypeNode n;
  n.kind = TypeKind::Reference;
  n.inner = t;
  return intern(n);
}

TypeRef TypeTable::array_of(TypeRef t, uint64_t size) {
  TypeNode n;
  n.kind = TypeKind::Array;
  n.inner = t;
  n.array_size = size;
  return intern(n);
}

TypeRef TypeTable::function_ptr(const FnSig &s, uint8_t quals) {
  std::ostringstream key;
  key << s.ret;
  for (TypeRef p : s.params)
    key << "," << p;
  uint32_t sid;
  auto it = sig_index_.find(key.str());
  if (it != sig_index_.end()) {
    sid = it->second;
  } else {
    sigs_.push_back(s);
    sid = static_cast<uint32_t>(sigs_.size() - 1);
    sig_index_[key.str()] = sid;
  }
  TypeNode n;
  n.kind = TypeKind::FunctionPtr;
  n.sig_id = sid;
  n.quals = quals;
  return intern(n);
}

TypeRef TypeTable::class_type(uint32_t class_id, uint8_t quals) {
  TypeNode n;
  n.kind = TypeKind::Class;
  n.class_id = class_id;
  n.quals = quals;
  return intern(n);
}

TypeRef TypeTable::with_quals(TypeRef t, uint8_t quals) {
  TypeNode n = nodes_[t];
  n.quals = quals;
  return intern(n);
}

TypeRef TypeTable::strip_quals(TypeRef t) const {
  const TypeNode &n = nodes_[t];
  if (n.quals == 0)
    return t;
  TypeNode s = n;
  s.quals = 0;
  // const_cast-free lookup: recompute the key the same way intern does
  std::ostringstream key;
  key << static_cast<int>(s.kind) << "|" << 0 << "|" << s.inner << "|"
      << s.array_size << "|" << s.class_id << "|" << s.sig_id;
  auto it = node_index_.find(key.str());
  if (it != node_index_.end())
    return it->second;
  // Unqualified variant not interned yet; intern lazily.
  return const_cast<TypeTable *>(this)->intern(s);
}

bool TypeTable::is_integer(TypeRef t) const {
  switch (nodes_[t].kind) {
  case TypeKind::Bool:
  case TypeKind::Char:
  case TypeKind::SChar:
  case TypeKind::UChar:
  case TypeKind::Short:
  case TypeKind::UShort:
  case TypeKind::Int:
  case TypeKind::UInt:
  case TypeKind::Long:
  case TypeKind::ULong:
    return true;
  default:
    return false;
  }
}

bool TypeTable::is_floating(TypeRef t) const {
  TypeKind k = nodes_[t].kind;
  return k == TypeKind::Float || k == TypeKind::Double;
}

bool TypeTable::is_scalar(TypeRef t) const {
  TypeKind k = nodes_[t].kind;
  return is_arithmetic(t) || k == TypeKind::Pointer ||
         k == TypeKind::FunctionPtr;
}

bool TypeTable::is_signed(TypeRef t) const {
  switch (nodes_[t].kind) {
  case TypeKind::Char:
  case TypeKind::SChar:
  case TypeKind::Short:
  case TypeKind::Int:
  case TypeKind::Long:
    return true;
  default:
    return false;
  }
}

unsigned TypeTable::bit_width(TypeRef t) const {
  switch (nodes_[t].kind) {
  case TypeKind::Bool: return 1;
  case TypeKind::Char:
  case TypeKind::SChar:
  case TypeKind::UChar: return 8;
  case TypeKind::Short:
  case TypeKind::UShort: return 16;
  case TypeKind::Int:
  case TypeKind::UInt: return 32;
  case TypeKind::Long:
  case TypeKind::ULong: return 64;
  case TypeKind::Float: return 32;
  case TypeKind::Double: return 64;
  default: return 0;
  }
}

} // namespace minibmc
