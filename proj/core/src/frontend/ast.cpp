#include "minibmc/ast.hpp"

#include <sstream>

namespace minibmc::ast {

TypeExprPtr clone(const TypeExpr &t) {
  auto c = std::make_unique<TypeExpr>();
  c->kind = t.kind;
  c->name = t.name;
  for (const auto &a : t.targs)
    c->targs.push_back(clone(*a));
  if (t.inner)
    c->inner = clone(*t.inner);
  // Array sizes in cloned positions are always already-folded constants.
  if (t.array_size) {
    auto sz = std::make_unique<Expr>();
    *sz = Expr{};
    sz->kind = Expr::Kind::IntLit;
    sz->int_value = t.array_size->int_value;
    sz->loc = t.array_size->loc;
    c->array_size = std::move(sz);
  }
  for (const auto &p : t.fn_params)
    c->fn_params.push_back(clone(*p));
  c->is_const = t.is_const;
  c->is_volatile = t.is_volatile;
  c->loc = t.loc;
  return c;
}

std::string to_string(const TypeExpr &t) {
  std::ostringstream os;
  if (t.is_const)
    os << "const ";
  if (t.is_volatile)
    os << "volatile ";
  switch (t.kind) {
  case TypeExpr::Kind::Named:
    os << t.name;
    if (!t.targs.empty()) {
      os << "<";
      for (size_t i = 0; i < t.targs.size(); ++i) {
        if (i)
          os << ", ";
        os << to_string(*t.targs[i]);
      }
      os << ">";
    }
    break;
  case TypeExpr::Kind::Nested:
    os << to_string(*t.inner) << "::" << t.name;
    break;
  case TypeExpr::Kind::Pointer:
    os << to_string(*t.inner) << "*";
    break;
  case TypeExpr::Kind::Reference:
    os << to_string(*t.inner) << "&";
    break;
  case TypeExpr::Kind::Array:
    os << to_string(*t.inner) << "[]";
    break;
  case TypeExpr::Kind::FunctionPtr: {
    os << to_string(*t.inner) << " (*)(";
    for (size_t i = 0; i < t.fn_params.size(); ++i) {
      if (i)
        os << ", ";
      os << to_string(*t.fn_params[i]);
    }
    os << ")";
    break;
  }
  }
  return os.str();
}

} // namespace minibmc::ast
