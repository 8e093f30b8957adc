#include "minibmc/lexer.hpp"

#include <array>
#include <cctype>
#include <cstdlib>
#include <cstring>
#include <unordered_set>

namespace minibmc {

const char *token_kind_name(TokenKind k) {
  switch (k) {
  case TokenKind::Eof: return "eof";
  case TokenKind::Identifier: return "identifier";
  case TokenKind::Keyword: return "keyword";
  case TokenKind::IntLit: return "int-literal";
  case TokenKind::FloatLit: return "float-literal";
  case TokenKind::CharLit: return "char-literal";
  case TokenKind::StringLit: return "string-literal";
  case TokenKind::Punct: return "punctuator";
  case TokenKind::IncludeDirective: return "include-directive";
  }
  return "?";
}

bool is_keyword(std::string_view word) {
  static const std::unordered_set<std::string_view> kws = {
      "bool",     "break",   "case",     "catch",   "char",   "class",
      "const",    "continue","default",  "delete",  "do",     "double",
      "else",     "false",   "float",    "for",     "friend", "if",
      "int",      "long",    "namespace","new",     "operator","private",
      "protected","public",  "return",   "short",   "signed", "sizeof",
      "struct",   "switch",  "template", "this",    "throw",  "true",
      "try",      "typedef", "typename", "unsigned","using",  "virtual",
      "void",     "volatile","while",
  };
  return kws.count(word) != 0;
}

namespace {

class Lexer {
public:
  Lexer(uint32_t file, std::string_view text, DiagEngine &diags)
      : file_(file), text_(text), diags_(diags) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_ws_and_comments();
      if (at_end())
        break;
      Token t = next_token();
      if (t.kind != TokenKind::Eof)
        out.push_back(std::move(t));
    }
    return out;
  }

private:
  uint32_t file_;
  std::string_view text_;
  DiagEngine &diags_;
  size_t pos_ = 0;
  uint32_t line_ = 1;
  uint32_t col_ = 1;

  bool at_end() const { return pos_ >= text_.size(); }
  char peek(size_t off = 0) const {
    return pos_ + off < text_.size() ? text_[pos_ + off] : '\0';
  }
  SourceLoc here() const { return {file_, line_, col_}; }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  bool match(char c) {
    if (!at_end() && peek() == c) {
      advance();
      return true;
    }
    return false;
  }

  void skip_ws_and_comments() {
    for (;;) {
      while (!at_end() && std::isspace(static_cast<unsigned char>(peek())))
        advance();
      if (peek() == '/' && peek(1) == '/') {
        while (!at_end() && peek() != '\n')
          advance();
        continue;
      }
      if (peek() == '/' && peek(1) == '*') {
        SourceLoc start = here();
        advance();
        advance();
        bool closed = false;
        while (!at_end()) {
          if (peek() == '*' && peek(1) == '/') {
            advance();
            advance();
            closed = true;
            break;
          }
          advance();
        }
        if (!closed)
          diags_.error(start, "unterminated block comment");
        continue;
      }
      break;
    }
  }

  Token next_token() {
    SourceLoc loc = here();
    char c = peek();

    if (c == '#')
      return lex_directive(loc);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return lex_word(loc);
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))))
      return lex_number(loc);
    if (c == '\'')
      return lex_char(loc);
    if (c == '"')
      return lex_string(loc);
    return lex_punct(loc);
  }

  Token lex_directive(SourceLoc loc) {
    advance(); // '#'
    std::string word;
    while (!at_end() &&
           std::isalpha(static_cast<unsigned char>(peek())))
      word.push_back(advance());
    if (word != "include") {
      diags_.error(loc, "unsupported preprocessor directive '#" + word + "'");
      // Skip rest of line so parsing can continue.
      while (!at_end() && peek() != '\n')
        advance();
      return Token{TokenKind::Eof, "", loc};
    }
    while (!at_end() && (peek() == ' ' || peek() == '\t'))
      advance();
    Token t;
    t.kind = TokenKind::IncludeDirective;
    t.loc = loc;
    char open = peek();
    char close = 0;
    if (open == '<')
      close = '>';
    else if (open == '"')
      close = '"';
    if (!close) {
      diags_.error(here(), "expected <path> or \"path\" after #include");
      while (!at_end() && peek() != '\n')
        advance();
      return Token{TokenKind::Eof, "", loc};
    }
    t.include_is_angled = (open == '<');
    advance();
    std::string path;
    while (!at_end() && peek() != close && peek() != '\n')
      path.push_back(advance());
    if (peek() == close)
      advance();
    else
      diags_.error(loc, "unterminated #include path");
    t.text = path;
    return t;
  }

  Token lex_word(SourceLoc loc) {
    std::string word;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                         peek() == '_'))
      word.push_back(advance());
    Token t;
    t.loc = loc;
    t.kind = is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier;
    t.text = std::move(word);
    return t;
  }

  Token lex_number(SourceLoc loc) {
    std::string digits;
    bool is_float = false;
    bool is_hex = false;

    if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
      is_hex = true;
      digits.push_back(advance());
      digits.push_back(advance());
      while (std::isxdigit(static_cast<unsigned char>(peek())))
        digits.push_back(advance());
    } else {
      while (std::isdigit(static_cast<unsigned char>(peek())))
        digits.push_back(advance());
      if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
        is_float = true;
        digits.push_back(advance());
        while (std::isdigit(static_cast<unsigned char>(peek())))
          digits.push_back(advance());
      } else if (peek() == '.' &&
                 !std::isalpha(static_cast<unsigned char>(peek(1)))) {
        is_float = true;
        digits.push_back(advance());
      }
      if (peek() == 'e' || peek() == 'E') {
        size_t save = pos_;
        std::string exp;
        exp.push_back(advance());
        if (peek() == '+' || peek() == '-')
          exp.push_back(advance());
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
          is_float = true;
          while (std::isdigit(static_cast<unsigned char>(peek())))
            exp.push_back(advance());
          digits += exp;
        } else {
          pos_ = save; // not an exponent after all
        }
      }
    }

    Token t;
    t.loc = loc;
    if (is_float) {
      t.kind = TokenKind::FloatLit;
      t.float_value = std::strtod(digits.c_str(), nullptr);
      if (peek() == 'f' || peek() == 'F') {
        advance();
        t.float_is_single = true;
        t.float_value = static_cast<double>(static_cast<float>(t.float_value));
      }
      t.text = digits;
      return t;
    }
    t.kind = TokenKind::IntLit;
    t.int_value = std::strtoull(digits.c_str(), nullptr, is_hex ? 16 : 10);
    // Suffixes: u, l, ul, lu in any case.
    for (int i = 0; i < 2; ++i) {
      if (peek() == 'u' || peek() == 'U') {
        advance();
        t.int_is_unsigned = true;
      } else if (peek() == 'l' || peek() == 'L') {
        advance();
        t.int_is_long = true;
      }
    }
    t.text = digits;
    return t;
  }

  int read_escape(SourceLoc loc) {
    advance(); // backslash
    char e = at_end() ? '\0' : advance();
    switch (e) {
    case 'n': return '\n';
    case 't': return '\t';
    case 'r': return '\r';
    case '0': return '\0';
    case '\\': return '\\';
    case '\'': return '\'';
    case '"': return '"';
    default:
      diags_.error(loc, std::string("unknown escape sequence '\\") + e + "'");
      return e;
    }
  }

  Token lex_char(SourceLoc loc) {
    advance(); // opening quote
    Token t;
    t.loc = loc;
    t.kind = TokenKind::CharLit;
    if (at_end() || peek() == '\n') {
      diags_.error(loc, "unterminated character literal");
      return t;
    }
    int value;
    if (peek() == '\\')
      value = read_escape(loc);
    else
      value = static_cast<unsigned char>(advance());
    if (!match('\''))
      diags_.error(loc, "unterminated character literal");
    t.int_value = static_cast<uint64_t>(value);
    t.text = std::string(1, static_cast<char>(value));
    return t;
  }

  Token lex_string(SourceLoc loc) {
    advance(); // opening quote
    Token t;
    t.loc = loc;
    t.kind = TokenKind::StringLit;
    std::string value;
    for (;;) {
      if (at_end() || peek() == '\n') {
        diags_.error(loc, "unterminated string literal");
        break;
      }
      if (peek() == '"') {
        advance();
        break;
      }
      if (peek() == '\\')
        value.push_back(static_cast<char>(read_escape(loc)));
      else
        value.push_back(advance());
    }
    t.text = std::move(value);
    return t;
  }

  Token lex_punct(SourceLoc loc) {
    // Longest-match against the punctuator inventory.
    static const std::array<const char *, 48> puncts = {
        "...", "<<=", ">>=",
        "::", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&",
        "||", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
        "{", "}", "(", ")", "[", "]", ";", ",", ":", ".", "+", "-", "*",
        "/", "%", "!", "~", "&", "|", "^", "=", "<", ">", "?", "@"};
    for (const char *p : puncts) {
      size_t n = std::strlen(p);
      if (text_.substr(pos_, n) == p) {
        Token t;
        t.loc = loc;
        t.kind = TokenKind::Punct;
        t.text = p;
        for (size_t i = 0; i < n; ++i)
          advance();
        return t;
      }
    }
    char c = advance();
    diags_.error(loc, std::string("stray character '") + c + "' in input");
    return Token{TokenKind::Eof, "", loc};
  }
};

} // namespace

std::vector<Token> tokenize(uint32_t file_id, std::string_view text,
                            DiagEngine &diags) {
  return Lexer(file_id, text, diags).run();
}

} // namespace minibmc
