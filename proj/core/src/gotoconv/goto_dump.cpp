// Textual form of goto programs (--show-goto) and structural validation.

#include "minibmc/goto_program.hpp"

#include <map>

namespace minibmc {

namespace {

std::string desc_str(const ExDesc &d, const TypedProgram &prog) {
  switch (d.kind) {
  case ExDesc::Kind::Plain:
    return prog.type_name(d.type);
  case ExDesc::Kind::Array:
    return prog.type_name(d.type) + "[]";
  case ExDesc::Kind::Function:
    return prog.type_name(d.type);
  case ExDesc::Kind::Pointer:
    return prog.type_name(d.type) + "*";
  case ExDesc::Kind::VoidPtr:
    return "void*";
  case ExDesc::Kind::Ellipsis:
    return "...";
  case ExDesc::Kind::Rethrow:
    return "";
  }
  return "";
}

} // namespace

std::string dump_goto_function(const GotoFunction &fn,
                               const TypedProgram &prog) {
  // Dense numeric labels in program order for every jump target.
  std::map<size_t, unsigned> labels;
  for (const GotoInstr &in : fn.body) {
    if ((in.kind == GotoInstr::Kind::If ||
         in.kind == GotoInstr::Kind::Goto) &&
        in.target != kNoTarget)
      labels[in.target] = 0;
    for (const CatchEntry &ce : in.entries)
      if (ce.target != kNoTarget)
        labels[ce.target] = 0;
  }
  unsigned next = 1;
  for (auto &kv : labels)
    kv.second = next++;
  auto lbl = [&](size_t t) { return std::to_string(labels.at(t)); };

  std::string o;
  for (size_t i = 0; i < fn.body.size(); ++i) {
    const GotoInstr &in = fn.body[i];
    auto it = labels.find(i);
    if (it != labels.end()) {
      std::string n = std::to_string(it->second);
      o += std::string(n.size() < 4 ? 4 - n.size() : 0, ' ') + n + ": ";
    } else {
      o += "      ";
    }
    switch (in.kind) {
    case GotoInstr::Kind::Assign:
      o += "ASSIGN " + print_typed_expr(prog, *in.lhs) + " := " +
           print_typed_expr(prog, *in.expr);
      break;
    case GotoInstr::Kind::FunctionCall:
      o += "FUNCTION_CALL ";
      if (in.lhs)
        o += print_typed_expr(prog, *in.lhs) + " := ";
      o += print_typed_expr(prog, *in.expr);
      break;
    case GotoInstr::Kind::If:
      o += "IF " + print_typed_expr(prog, *in.expr) + " GOTO " +
           lbl(in.target);
      break;
    case GotoInstr::Kind::Goto:
      o += "GOTO " + lbl(in.target);
      break;
    case GotoInstr::Kind::Assert:
      o += "ASSERT " + print_typed_expr(prog, *in.expr) + " \"" + in.msg +
           "\"";
      break;
    case GotoInstr::Kind::Assume:
      o += "ASSUME " + print_typed_expr(prog, *in.expr);
      break;
    case GotoInstr::Kind::Catch:
      o += "CATCH";
      for (size_t j = 0; j < in.entries.size(); ++j) {
        o += j ? ", " : " ";
        o += desc_str(in.entries[j].desc, prog) + "->" +
             lbl(in.entries[j].target);
      }
      break;
    case GotoInstr::Kind::Throw:
      o += "THROW";
      if (in.ex.kind != ExDesc::Kind::Rethrow) {
        o += " " + desc_str(in.ex, prog) + ":";
        if (in.expr)
          o += " " + print_typed_expr(prog, *in.expr);
      }
      break;
    case GotoInstr::Kind::ThrowDecl: {
      o += "THROW_DECL (";
      for (size_t j = 0; j < in.allowed.size(); ++j) {
        if (j)
          o += ", ";
        o += desc_str(in.allowed[j], prog);
      }
      o += ")";
      break;
    }
    case GotoInstr::Kind::Return:
      o += "RETURN";
      if (in.expr)
        o += " " + print_typed_expr(prog, *in.expr);
      break;
    case GotoInstr::Kind::Decl:
      o += "DECL " + in.var + " : " + prog.type_name(in.type);
      break;
    case GotoInstr::Kind::Dead:
      o += "DEAD " + in.var;
      break;
    case GotoInstr::Kind::EndFunction:
      o += "END_FUNCTION";
      break;
    }
    o += "\n";
  }
  return o;
}

std::string dump_goto_program(const GotoProgram &gp,
                              const TypedProgram &prog) {
  std::string o;
  for (const auto &kv : gp.functions) {
    o += kv.first + ":\n";
    o += dump_goto_function(kv.second, prog);
    o += "\n";
  }
  return o;
}

std::string validate_goto_function(const GotoFunction &fn) {
  const auto &b = fn.body;
  if (b.empty())
    return fn.symbol + ": empty body";
  if (b.back().kind != GotoInstr::Kind::EndFunction)
    return fn.symbol + ": missing END_FUNCTION";
  int catch_depth = 0;
  for (size_t i = 0; i < b.size(); ++i) {
    const GotoInstr &in = b[i];
    switch (in.kind) {
    case GotoInstr::Kind::EndFunction:
      if (i + 1 != b.size())
        return fn.symbol + ": END_FUNCTION before end";
      break;
    case GotoInstr::Kind::ThrowDecl:
      if (i != 0)
        return fn.symbol + ": THROW_DECL not first";
      break;
    case GotoInstr::Kind::If:
    case GotoInstr::Kind::Goto:
      if (in.target == kNoTarget || in.target >= b.size())
        return fn.symbol + ": jump target out of range";
      break;
    case GotoInstr::Kind::Catch:
      if (in.catch_end) {
        if (--catch_depth < 0)
          return fn.symbol + ": unmatched CATCH end";
      } else {
        if (in.entries.empty())
          return fn.symbol + ": CATCH begin with no handlers";
        ++catch_depth;
        for (const CatchEntry &ce : in.entries)
          if (ce.target == kNoTarget || ce.target >= b.size() ||
              ce.target <= i)
            return fn.symbol + ": handler target must be forward";
      }
      break;
    default:
      break;
    }
  }
  if (catch_depth != 0)
    return fn.symbol + ": unbalanced CATCH pairing";
  return "";
}

} // namespace minibmc
