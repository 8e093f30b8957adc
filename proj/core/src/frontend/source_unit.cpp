#include "minibmc/source_unit.hpp"

#include "minibmc/lexer.hpp"
#include "minibmc/model_headers.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace minibmc {

namespace {

struct Resolver {
  FileTable files;
  std::vector<Token> out;
  DiagEngine &diags;
  std::vector<std::string> include_dirs;
  std::set<std::string> loaded; // canonical keys of spliced files/headers

  explicit Resolver(DiagEngine &d) : diags(d) {}

  static std::string strip_header_suffix(const std::string &name) {
    if (name.size() > 2 && name.substr(name.size() - 2) == ".h")
      return name.substr(0, name.size() - 2);
    return name;
  }

  bool read_file(const std::string &path, std::string &text) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
      return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
    return true;
  }

  void splice_text(const std::string &display_path, const std::string &text,
                   const std::string &dir_of_file) {
    uint32_t id = files.add(display_path);
    std::vector<Token> toks = tokenize(id, text, diags);
    for (auto &t : toks) {
      if (t.kind == TokenKind::IncludeDirective) {
        resolve_include(t, dir_of_file);
        continue;
      }
      out.push_back(std::move(t));
    }
  }

  void resolve_include(const Token &inc, const std::string &dir_of_file) {
    const std::string base = strip_header_suffix(inc.text);
    if (is_builtin_header(base)) {
      std::string key = "<" + base + ">";
      if (!loaded.insert(key).second)
        return;
      const auto &hdrs = builtin_model_headers();
      splice_text(key, hdrs.at(base), "");
      return;
    }

    // User header: current file's directory first, then -I paths.
    std::vector<std::string> tried;
    std::vector<std::string> search;
    if (!inc.include_is_angled && !dir_of_file.empty())
      search.push_back(dir_of_file);
    for (const auto &d : include_dirs)
      search.push_back(d);
    for (const auto &dir : search) {
      fs::path cand = fs::path(dir) / inc.text;
      tried.push_back(cand.string());
      std::string text;
      if (read_file(cand.string(), text)) {
        std::error_code ec;
        fs::path canon = fs::weakly_canonical(cand, ec);
        std::string key = ec ? cand.string() : canon.string();
        if (!loaded.insert(key).second)
          return;
        splice_text(cand.string(), text, cand.parent_path().string());
        return;
      }
    }

    std::ostringstream msg;
    msg << "include '" << inc.text << "' not found; searched:";
    if (tried.empty())
      msg << " (no search paths)";
    for (const auto &p : tried)
      msg << " " << p;
    diags.error(inc.loc, msg.str());
  }

  void finish() {
    Token eof;
    eof.kind = TokenKind::Eof;
    if (!out.empty())
      eof.loc = out.back().loc;
    out.push_back(eof);
  }
};

} // namespace

SourceUnit load_program(const std::string &main_path,
                        const std::vector<std::string> &include_dirs,
                        DiagEngine &diags) {
  Resolver r(diags);
  r.include_dirs = include_dirs;
  std::string text;
  if (!r.read_file(main_path, text)) {
    diags.error({}, "cannot open input file '" + main_path + "'");
    r.finish();
    return {std::move(r.files), std::move(r.out)};
  }
  std::error_code ec;
  fs::path canon = fs::weakly_canonical(main_path, ec);
  r.loaded.insert(ec ? main_path : canon.string());
  r.splice_text(main_path, text, fs::path(main_path).parent_path().string());
  r.finish();
  return {std::move(r.files), std::move(r.out)};
}

SourceUnit load_program_from_string(const std::string &name,
                                    const std::string &text,
                                    const std::vector<std::string> &include_dirs,
                                    DiagEngine &diags) {
  Resolver r(diags);
  r.include_dirs = include_dirs;
  r.loaded.insert(name);
  r.splice_text(name, text, "");
  r.finish();
  return {std::move(r.files), std::move(r.out)};
}

} // namespace minibmc
