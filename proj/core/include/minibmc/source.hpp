#ifndef MINIBMC_SOURCE_HPP
#define MINIBMC_SOURCE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace minibmc {

// A position in some source file. File identity is an index into the
// FileTable of the owning SourceUnit; line/column are 1-based.
struct SourceLoc {
  uint32_t file = 0;
  uint32_t line = 0;
  uint32_t column = 0;

  bool valid() const { return line != 0; }
};

class FileTable {
public:
  uint32_t add(std::string path) {
    paths_.push_back(std::move(path));
    return static_cast<uint32_t>(paths_.size() - 1);
  }

  const std::string &path(uint32_t id) const { return paths_.at(id); }
  size_t size() const { return paths_.size(); }

private:
  std::vector<std::string> paths_;
};

enum class Severity { Error, Warning, Note };

struct Diagnostic {
  Severity severity = Severity::Error;
  SourceLoc loc;
  std::string message;
};

// Collects diagnostics across pipeline stages.  Stages keep going where
// recovery is cheap and bail out where it is not; the driver checks
// has_errors() between stages.
class DiagEngine {
public:
  void error(SourceLoc loc, std::string msg) {
    diags_.push_back({Severity::Error, loc, std::move(msg)});
  }
  void warning(SourceLoc loc, std::string msg) {
    diags_.push_back({Severity::Warning, loc, std::move(msg)});
  }
  void note(SourceLoc loc, std::string msg) {
    diags_.push_back({Severity::Note, loc, std::move(msg)});
  }

  bool has_errors() const {
    for (const auto &d : diags_)
      if (d.severity == Severity::Error)
        return true;
    return false;
  }

  const std::vector<Diagnostic> &all() const { return diags_; }

  // Renders "path:line:col: error: message" lines.
  std::string render(const FileTable &files) const;

private:
  std::vector<Diagnostic> diags_;
};

} // namespace minibmc

#endif
