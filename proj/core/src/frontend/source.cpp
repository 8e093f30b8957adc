#include "minibmc/source.hpp"

#include <sstream>

namespace minibmc {

std::string DiagEngine::render(const FileTable &files) const {
  std::ostringstream os;
  for (const auto &d : diags_) {
    if (d.loc.valid() && d.loc.file < files.size())
      os << files.path(d.loc.file) << ":" << d.loc.line << ":" << d.loc.column
         << ": ";
    switch (d.severity) {
    case Severity::Error: os << "error: "; break;
    case Severity::Warning: os << "warning: "; break;
    case Severity::Note: os << "note: "; break;
    }
    os << d.message << "\n";
  }
  return os.str();
}

} // namespace minibmc
