// Copyright 2026 The VPE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lexer.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <utility>

#include "vpe/lang/error.hpp"

namespace vpe::lang::detail {

namespace {

constexpr std::array<std::string_view, 13> kAllowedKeywords{
    "if", "elif", "else", "for", "in", "return", "and",
    "or", "not", "True", "False", "None", "pass"};

constexpr std::array<std::pair<std::string_view, std::string_view>, 22> kForbidden{{
    {"import", "import"},
    {"from", "import"},
    {"while", "while-loop"},
    {"def", "function definition"},
    {"lambda", "lambda"},
    {"class", "class definition"},
    {"try", "exception handling"},
    {"except", "exception handling"},
    {"finally", "exception handling"},
    {"raise", "exception handling"},
    {"with", "with-statement"},
    {"global", "global declaration"},
    {"nonlocal", "global declaration"},
    {"del", "del"},
    {"yield", "generator"},
    {"async", "async"},
    {"await", "async"},
    {"assert", "assert"},
    {"break", "loop control"},
    {"continue", "loop control"},
    {"is", "identity comparison"},
    {"as", "as"},
}};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

[[noreturn]] void fail(std::string message, Span span) {
  throw VplException(VplError::parse(std::move(message), span));
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    indents_.push_back(0);
    while (pos_ < src_.size()) {
      if (at_line_start_ && depth_ == 0) {
        if (!handle_indentation()) continue;
      }
      lex_token();
    }
    if (line_has_tokens_) emit(TokenKind::Newline, "", here());
    while (indents_.size() > 1) {
      indents_.pop_back();
      emit(TokenKind::Dedent, "", here());
    }
    emit(TokenKind::End, "", here());
    return std::move(tokens_);
  }

 private:
  Span here() const { return {line_, col_}; }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void emit(TokenKind kind, std::string text, Span span, LiteralValue lit = NoneLit{}) {
    tokens_.push_back(Token{kind, std::move(text), std::move(lit), span});
    if (kind != TokenKind::Newline && kind != TokenKind::Indent &&
        kind != TokenKind::Dedent && kind != TokenKind::End) {
      line_has_tokens_ = true;
    }
  }

  // Measures leading whitespace of a physical line. Returns false when the
  // line was blank or comment-only and has been consumed.
  bool handle_indentation() {
    int width = 0;
    while (peek() == ' ' || peek() == '\t' || peek() == '\f') {
      width += peek() == '\t' ? 4 : (peek() == ' ' ? 1 : 0);
      advance();
    }
    if (peek() == '#') {
      while (pos_ < src_.size() && peek() != '\n') advance();
    }
    if (peek() == '\r') advance();
    if (pos_ >= src_.size()) return false;
    if (peek() == '\n') {
      advance();
      return false;
    }
    at_line_start_ = false;
    const Span span = here();
    if (width > indents_.back()) {
      indents_.push_back(width);
      emit(TokenKind::Indent, "", span);
    } else {
      while (width < indents_.back()) {
        indents_.pop_back();
        emit(TokenKind::Dedent, "", span);
      }
      if (width != indents_.back()) fail("inconsistent indentation", span);
    }
    return true;
  }

  void lex_token() {
    const char c = peek();
    const Span span = here();
    if (c == '\n') {
      advance();
      if (depth_ == 0) {
        if (line_has_tokens_) emit(TokenKind::Newline, "", span);
        line_has_tokens_ = false;
        at_line_start_ = true;
      }
      return;
    }
    if (c == ' ' || c == '\t' || c == '\r' || c == '\f') {
      advance();
      return;
    }
    if (c == '#') {
      while (pos_ < src_.size() && peek() != '\n') advance();
      return;
    }
    if (c == '\\') {
      advance();
      if (peek() == '\r') advance();
      if (peek() != '\n') fail("unexpected character '\\'", span);
      advance();  // explicit line joining
      return;
    }
    if (ident_start(c)) {
      lex_word(span);
      return;
    }
    if (digit(c) || (c == '.' && digit(peek(1)))) {
      lex_number(span);
      return;
    }
    if (c == '\'' || c == '"') {
      lex_string(span, /*raw=*/false);
      return;
    }
    lex_operator(span);
  }

  void lex_word(Span span) {
    std::size_t start = pos_;
    while (pos_ < src_.size() && ident_char(peek())) advance();
    std::string word(src_.substr(start, pos_ - start));
    if (peek() == '\'' || peek() == '"') {
      std::string prefix;
      for (char ch : word) prefix.push_back(static_cast<char>(std::tolower(ch)));
      if (prefix.find('f') != std::string::npos && prefix.size() <= 2) {
        fail("construct not allowed: string formatting", span);
      }
      if (prefix == "r" || prefix == "u") {
        lex_string(span, prefix == "r");
        return;
      }
      if (prefix == "b" || prefix == "rb" || prefix == "br") {
        fail("construct not allowed: bytes literal", span);
      }
    }
    if (is_keyword(word)) {
      if (word == "True") {
        emit(TokenKind::Keyword, word, span, true);
      } else if (word == "False") {
        emit(TokenKind::Keyword, word, span, false);
      } else {
        emit(TokenKind::Keyword, word, span);
      }
      return;
    }
    emit(TokenKind::Name, std::move(word), span);
  }

  void lex_number(Span span) {
    std::size_t start = pos_;
    bool is_float = false;
    while (digit(peek())) advance();
    if (peek() == '.') {
      is_float = true;
      advance();
      while (digit(peek())) advance();
    }
    if (peek() == 'e' || peek() == 'E') {
      const char next = peek(1);
      if (digit(next) || ((next == '+' || next == '-') && digit(peek(2)))) {
        is_float = true;
        advance();
        if (peek() == '+' || peek() == '-') advance();
        while (digit(peek())) advance();
      }
    }
    if (ident_char(peek())) fail("invalid numeric literal", span);
    std::string text(src_.substr(start, pos_ - start));
    if (is_float) {
      double v = 0;
      // from_chars rejects a leading '.', so parse with a zero prefix.
      std::string buf = text.front() == '.' ? "0" + text : text;
      auto [p, ec] = std::from_chars(buf.data(), buf.data() + buf.size(), v);
      if (ec != std::errc() || p != buf.data() + buf.size()) {
        fail("numeric literal out of range", span);
      }
      emit(TokenKind::Float, std::move(text), span, v);
    } else {
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc() || p != text.data() + text.size()) {
        fail("numeric literal out of range", span);
      }
      emit(TokenKind::Int, std::move(text), span, v);
    }
  }

  void lex_string(Span span, bool raw) {
    const char quote = peek();
    const bool triple = peek(1) == quote && peek(2) == quote;
    for (int i = 0; i < (triple ? 3 : 1); ++i) advance();
    std::string value;
    while (true) {
      if (pos_ >= src_.size()) fail("unterminated string literal", span);
      const char ch = peek();
      if (ch == quote) {
        if (!triple) {
          advance();
          break;
        }
        if (peek(1) == quote && peek(2) == quote) {
          advance();
          advance();
          advance();
          break;
        }
      }
      if (ch == '\n' && !triple) fail("unterminated string literal", span);
      if (ch == '\\' && !raw) {
        advance();
        if (pos_ >= src_.size()) fail("unterminated string literal", span);
        const char esc = peek();
        advance();
        switch (esc) {
          case 'n': value.push_back('\n'); break;
          case 't': value.push_back('\t'); break;
          case 'r': value.push_back('\r'); break;
          case '0': value.push_back('\0'); break;
          case '\\': value.push_back('\\'); break;
          case '\'': value.push_back('\''); break;
          case '"': value.push_back('"'); break;
          case '\n': break;
          case 'x': {
            int code = 0;
            for (int i = 0; i < 2; ++i) {
              const char h = peek();
              if (!std::isxdigit(static_cast<unsigned char>(h))) {
                fail("invalid \\x escape", span);
              }
              code = code * 16 + (digit(h) ? h - '0' : std::tolower(h) - 'a' + 10);
              advance();
            }
            value.push_back(static_cast<char>(code));
            break;
          }
          default:
            value.push_back('\\');
            value.push_back(esc);
        }
        continue;
      }
      value.push_back(ch);
      advance();
    }
    // Adjacent literals concatenate.
    if (!tokens_.empty() && tokens_.back().kind == TokenKind::String &&
        last_string_end_ == tokens_.size()) {
      std::get<std::string>(tokens_.back().literal) += value;
      return;
    }
    emit(TokenKind::String, "", span, std::move(value));
    last_string_end_ = tokens_.size();
  }

  void lex_operator(Span span) {
    static constexpr std::array<std::string_view, 13> kTwo{
        "**", "//", "==", "!=", "<=", ">=", "+=", "-=", "*=", "/=", "->", "%=", ":="};
    const std::string_view rest = src_.substr(pos_);
    if (rest.substr(0, 3) == "**=" || rest.substr(0, 3) == "//=") {
      fail("construct not allowed: augmented assignment '" +
               std::string(rest.substr(0, 3)) + "'",
           span);
    }
    for (auto op : kTwo) {
      if (rest.substr(0, 2) == op) {
        if (op == ":=") fail("construct not allowed: assignment expression", span);
        advance();
        advance();
        emit(TokenKind::Op, std::string(op), span);
        return;
      }
    }
    const char c = peek();
    switch (c) {
      case '(': case '[':
        ++depth_;
        break;
      case ')': case ']':
        if (depth_ > 0) --depth_;
        break;
      case '+': case '-': case '*': case '/': case '%': case '<': case '>':
      case '=': case ',': case ':': case '.':
        break;
      case '{': case '}':
        fail("construct not allowed: dict or set literal", span);
      case '@':
        fail("construct not allowed: decorator", span);
      case ';':
        fail("construct not allowed: semicolon", span);
      default: {
        std::string shown = std::isprint(static_cast<unsigned char>(c))
                                ? std::string(1, c)
                                : "\\x" + std::to_string(static_cast<unsigned char>(c));
        fail("unexpected character '" + shown + "'", span);
      }
    }
    advance();
    emit(TokenKind::Op, std::string(1, c), span);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  int depth_ = 0;
  bool at_line_start_ = true;
  bool line_has_tokens_ = false;
  std::size_t last_string_end_ = 0;
  std::vector<int> indents_;
  std::vector<Token> tokens_;
};

}  // namespace

bool is_keyword(std::string_view word) {
  for (auto k : kAllowedKeywords)
    if (k == word) return true;
  for (const auto& [k, _] : kForbidden)
    if (k == word) return true;
  return false;
}

std::string_view forbidden_construct(std::string_view keyword) {
  for (const auto& [k, name] : kForbidden)
    if (k == keyword) return name;
  return {};
}

std::vector<Token> tokenize(std::string_view source) {
  return Lexer(source).run();
}

}  // namespace vpe::lang::detail
