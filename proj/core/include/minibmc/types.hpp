#ifndef MINIBMC_TYPES_HPP
#define MINIBMC_TYPES_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace minibmc {

// Semantic types, interned in a TypeTable.  TypeRef indexes are stable and
// comparable; structural equality of interned refs is pointer equality.
using TypeRef = uint32_t;
inline constexpr TypeRef kNoType = 0xffffffffu;

enum class TypeKind : uint8_t {
  Void,
  Bool,
  Char,   // signed 8-bit
  SChar,
  UChar,
  Short,
  UShort,
  Int,
  UInt,
  Long,   // 64-bit
  ULong,
  Float,
  Double,
  Pointer,
  Reference,
  Array,
  FunctionPtr,
  Class,
};

enum TypeQuals : uint8_t {
  kQualConst = 1,
  kQualVolatile = 2,
  kQualRestrict = 4, // carried for handler matching completeness; unused
};

struct TypeNode {
  TypeKind kind = TypeKind::Void;
  uint8_t quals = 0;
  TypeRef inner = kNoType;    // Pointer/Reference/Array element
  uint64_t array_size = 0;    // Array
  uint32_t class_id = 0;      // Class
  uint32_t sig_id = 0;        // FunctionPtr

  bool operator==(const TypeNode &o) const {
    return kind == o.kind && quals == o.quals && inner == o.inner &&
           array_size == o.array_size && class_id == o.class_id &&
           sig_id == o.sig_id;
  }
};

struct FnSig {
  TypeRef ret = kNoType;
  std::vector<TypeRef> params;

  bool operator==(const FnSig &o) const {
    return ret == o.ret && params == o.params;
  }
};

class TypeTable {
public:
  TypeTable();

  TypeRef basic(TypeKind k, uint8_t quals = 0);
  TypeRef pointer_to(TypeRef t, uint8_t quals = 0);
  TypeRef reference_to(TypeRef t);
  TypeRef array_of(TypeRef t, uint64_t n);
  TypeRef function_ptr(const FnSig &sig, uint8_t quals = 0);
  TypeRef class_type(uint32_t class_id, uint8_t quals = 0);
  TypeRef with_quals(TypeRef t, uint8_t quals);
  TypeRef strip_quals(TypeRef t) const;

  const TypeNode &operator[](TypeRef t) const { return nodes_[t]; }
  const FnSig &sig(uint32_t sig_id) const { return sigs_[sig_id]; }
  size_t size() const { return nodes_.size(); }

  bool is_integer(TypeRef t) const;
  bool is_floating(TypeRef t) const;
  bool is_arithmetic(TypeRef t) const {
    return is_integer(t) || is_floating(t);
  }
  bool is_scalar(TypeRef t) const; // arithmetic, pointer or function pointer
  bool is_signed(TypeRef t) const;
  // Width in bits of an arithmetic/bool type.
  unsigned bit_width(TypeRef t) const;

  // Identity ignoring top-level qualifiers.
  bool same_unqual(TypeRef a, TypeRef b) const {
    return strip_quals(a) == strip_quals(b);
  }

private:
  TypeRef intern(const TypeNode &n);
  std::vector<TypeNode> nodes_;
  std::vector<FnSig> sigs_;
  std::map<std::string, uint32_t> sig_index_;
  std::map<std::string, TypeRef> node_index_;
};

} // namespace minibmc

#endif
