// Copyright 2026 The MistForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mistforge/lexer.h"

#include <algorithm>
#include <array>
#include <unordered_set>

namespace mistforge {
namespace {

const std::unordered_set<std::string_view>& JavaKeywords() {
  static const std::unordered_set<std::string_view> kWords = {
      "abstract", "assert",     "boolean",   "break",        "byte",
      "case",     "catch",      "char",      "class",        "const",
      "continue", "default",    "do",        "double",       "else",
      "enum",     "extends",    "final",     "finally",      "float",
      "for",      "goto",       "if",        "implements",   "import",
      "instanceof", "int",      "interface", "long",         "native",
      "new",      "package",    "private",   "protected",    "public",
      "return",   "short",      "static",    "strictfp",     "super",
      "switch",   "synchronized", "this",    "throw",        "throws",
      "transient", "try",       "void",      "volatile",     "while",
      "true",     "false",      "null",
  };
  return kWords;
}

const std::unordered_set<std::string_view>& PythonKeywords() {
  static const std::unordered_set<std::string_view> kWords = {
      "False",  "None",   "True",    "and",      "as",     "assert",
      "async",  "await",  "break",   "class",    "continue", "def",
      "del",    "elif",   "else",    "except",   "finally", "for",
      "from",   "global", "if",      "import",   "in",     "is",
      "lambda", "nonlocal", "not",   "or",       "pass",   "raise",
      "return", "try",    "while",   "with",     "yield",
  };
  return kWords;
}

bool IsIdentStart(unsigned char c, Language language) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
         c >= 0x80 || (language == Language::kJava && c == '$');
}

bool IsIdentPart(unsigned char c, Language language) {
  return IsIdentStart(c, language) || (c >= '0' && c <= '9');
}

bool IsDigit(char c) { return c >= '0' && c <= '9'; }

bool IsHexDigit(char c) {
  return IsDigit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

// Longest-match punctuation tables, longest entries first.
constexpr std::array<std::string_view, 38> kJavaPunct = {
    "<<=", "...", "->", "::", "++", "--", "&&", "||", "==", "!=",
    "<=",  "+=",  "-=", "*=", "/=", "&=", "|=", "^=", "%=", "<<",
    "(",   ")",   "{",  "}",  "[",  "]",  ";",  ",",  ".",  "@",
    "=",   "<",   ">",  "!",  "~",  "?",  ":",  "+"};
constexpr std::array<std::string_view, 7> kJavaPunctTail = {"-", "*", "/",
                                                           "&", "|", "^",
                                                           "%"};

constexpr std::array<std::string_view, 47> kPythonPunct = {
    "**=", "//=", ">>=", "<<=", "...", "->", ":=", "**", "//", ">>",
    "<<",  "<=",  ">=",  "==",  "!=",  "+=", "-=", "*=", "/=", "%=",
    "&=",  "|=",  "^=",  "@=",  "+",   "-",  "*",  "/",  "%",  "@",
    "&",   "|",   "^",   "~",   "<",   ">",  "(",  ")",  "[",  "]",
    "{",   "}",   ",",   ":",   ";",   ".",  "="};

class LexerBase {
 public:
  LexerBase(std::string_view src, Language language, bool tolerant)
      : src_(src), language_(language), tolerant_(tolerant) {}

 protected:
  char Peek(size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }
  bool AtEnd() const { return pos_ >= src_.size(); }

  void Emit(TokenKind kind, size_t begin, size_t end) {
    tokens_.push_back(Token{kind, static_cast<uint32_t>(begin),
                            static_cast<uint32_t>(end),
                            src_.substr(begin, end - begin)});
  }

  [[noreturn]] void Fail(const std::string& what) const {
    throw SyntaxError(static_cast<uint32_t>(pos_), what);
  }

  void LexWord() {
    size_t begin = pos_;
    while (!AtEnd() && IsIdentPart(static_cast<unsigned char>(Peek()),
                                   language_)) {
      ++pos_;
    }
    std::string_view word = src_.substr(begin, pos_ - begin);
    Emit(IsKeyword(word, language_) ? TokenKind::kKeyword
                                    : TokenKind::kIdentifier,
         begin, pos_);
  }

  void SkipDigits(bool hex) {
    while (!AtEnd() && (Peek() == '_' || (hex ? IsHexDigit(Peek())
                                              : IsDigit(Peek())))) {
      ++pos_;
    }
  }

  // Numbers shared by both languages; suffix letters differ.
  void LexNumber() {
    size_t begin = pos_;
    if (Peek() == '0' && (Peek(1) == 'x' || Peek(1) == 'X')) {
      pos_ += 2;
      SkipDigits(true);
    } else if (Peek() == '0' && (Peek(1) == 'b' || Peek(1) == 'B' ||
                                 Peek(1) == 'o' || Peek(1) == 'O')) {
      pos_ += 2;
      SkipDigits(false);
    } else {
      SkipDigits(false);
      if (Peek() == '.' && IsDigit(Peek(1))) {
        ++pos_;
        SkipDigits(false);
      } else if (Peek() == '.' && !IsIdentStart(static_cast<unsigned char>(
                                      Peek(1)), language_) &&
                 Peek(1) != '.') {
        ++pos_;
      }
      if (Peek() == 'e' || Peek() == 'E') {
        size_t save = pos_;
        ++pos_;
        if (Peek() == '+' || Peek() == '-') ++pos_;
        if (IsDigit(Peek())) {
          SkipDigits(false);
        } else {
          pos_ = save;
        }
      }
    }
    const std::string_view suffixes =
        language_ == Language::kJava ? "lLfFdD" : "jJ";
    if (!AtEnd() && suffixes.find(Peek()) != std::string_view::npos) ++pos_;
    if (!AtEnd() && IsIdentPart(static_cast<unsigned char>(Peek()),
                                language_)) {
      if (!tolerant_) Fail("malformed number");
      while (!AtEnd() && IsIdentPart(static_cast<unsigned char>(Peek()),
                                     language_)) {
        ++pos_;
      }
    }
    Emit(TokenKind::kNumber, begin, pos_);
  }

  template <size_t N>
  bool LexPunct(const std::array<std::string_view, N>& table) {
    for (std::string_view p : table) {
      if (src_.substr(pos_, p.size()) == p) {
        Emit(TokenKind::kPunct, pos_, pos_ + p.size());
        pos_ += p.size();
        return true;
      }
    }
    return false;
  }

  std::string_view src_;
  Language language_;
  bool tolerant_;
  size_t pos_ = 0;
  std::vector<Token> tokens_;
};

class JavaLexer : public LexerBase {
 public:
  using LexerBase::LexerBase;

  std::vector<Token> Run() {
    while (true) {
      SkipTrivia();
      if (AtEnd()) break;
      unsigned char c = static_cast<unsigned char>(Peek());
      if (IsIdentStart(c, language_)) {
        LexWord();
      } else if (IsDigit(Peek()) || (Peek() == '.' && IsDigit(Peek(1)))) {
        LexNumber();
      } else if (Peek() == '"') {
        LexString();
      } else if (Peek() == '\'') {
        LexChar();
      } else if (!LexPunct(kJavaPunct) && !LexPunct(kJavaPunctTail)) {
        if (!tolerant_) Fail("unexpected character");
        ++pos_;
      }
    }
    Emit(TokenKind::kEnd, src_.size(), src_.size());
    return std::move(tokens_);
  }

 private:
  void SkipTrivia() {
    while (!AtEnd()) {
      char c = Peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f') {
        ++pos_;
      } else if (c == '/' && Peek(1) == '/') {
        while (!AtEnd() && Peek() != '\n') ++pos_;
      } else if (c == '/' && Peek(1) == '*') {
        size_t close = src_.find("*/", pos_ + 2);
        if (close == std::string_view::npos) {
          if (!tolerant_) Fail("unterminated comment");
          pos_ = src_.size();
        } else {
          pos_ = close + 2;
        }
      } else {
        break;
      }
    }
  }

  void LexString() {
    size_t begin = pos_;
    if (src_.substr(pos_, 3) == "\"\"\"") {
      pos_ += 3;
      while (!AtEnd() && src_.substr(pos_, 3) != "\"\"\"") {
        pos_ += Peek() == '\\' ? 2 : 1;
      }
      if (AtEnd()) {
        if (!tolerant_) Fail("unterminated text block");
        pos_ = src_.size();
      } else {
        pos_ += 3;
      }
      Emit(TokenKind::kString, begin, std::min(pos_, src_.size()));
      return;
    }
    ++pos_;
    while (!AtEnd() && Peek() != '"' && Peek() != '\n') {
      pos_ += Peek() == '\\' ? 2 : 1;
    }
    if (Peek() != '"') {
      if (!tolerant_) Fail("unterminated string");
    } else {
      ++pos_;
    }
    pos_ = std::min(pos_, src_.size());
    Emit(TokenKind::kString, begin, pos_);
  }

  void LexChar() {
    size_t begin = pos_;
    ++pos_;
    while (!AtEnd() && Peek() != '\'' && Peek() != '\n') {
      pos_ += Peek() == '\\' ? 2 : 1;
    }
    if (Peek() != '\'' || pos_ == begin + 1) {
      if (!tolerant_) Fail("malformed character literal");
    } else {
      ++pos_;
    }
    pos_ = std::min(pos_, src_.size());
    Emit(TokenKind::kChar, begin, pos_);
  }
};

class PythonLexer : public LexerBase {
 public:
  using LexerBase::LexerBase;

  std::vector<Token> Run() {
    indents_.push_back(0);
    bool at_line_start = true;
    while (true) {
      if (at_line_start && depth_ == 0) {
        if (!HandleIndentation()) break;
        at_line_start = false;
      }
      SkipSpaces();
      if (AtEnd()) break;
      char c = Peek();
      if (c == '#') {
        while (!AtEnd() && Peek() != '\n') ++pos_;
        continue;
      }
      if (c == '\\' && (Peek(1) == '\n' ||
                        (Peek(1) == '\r' && Peek(2) == '\n'))) {
        pos_ += Peek(1) == '\n' ? 2 : 3;
        continue;
      }
      if (c == '\n' || c == '\r') {
        size_t begin = pos_;
        pos_ += (c == '\r' && Peek(1) == '\n') ? 2 : 1;
        if (depth_ == 0) {
          Emit(TokenKind::kNewline, begin, pos_);
          at_line_start = true;
        }
        continue;
      }
      unsigned char uc = static_cast<unsigned char>(c);
      if (StringPrefixLength() >= 0) {
        LexString();
      } else if (IsIdentStart(uc, language_)) {
        LexWord();
      } else if (IsDigit(c) || (c == '.' && IsDigit(Peek(1)))) {
        LexNumber();
      } else if (LexPunct(kPythonPunct)) {
        std::string_view p = tokens_.back().text;
        if (p == "(" || p == "[" || p == "{") {
          ++depth_;
        } else if (p == ")" || p == "]" || p == "}") {
          if (depth_ == 0) {
            if (!tolerant_) Fail("unbalanced bracket");
          } else {
            --depth_;
          }
        }
      } else {
        if (!tolerant_) Fail("unexpected character");
        ++pos_;
      }
    }
    if (depth_ != 0 && !tolerant_) Fail("unclosed bracket at end of input");
    if (!tokens_.empty() && tokens_.back().kind != TokenKind::kNewline &&
        tokens_.back().kind != TokenKind::kDedent &&
        tokens_.back().kind != TokenKind::kIndent) {
      Emit(TokenKind::kNewline, src_.size(), src_.size());
    }
    while (indents_.size() > 1) {
      indents_.pop_back();
      Emit(TokenKind::kDedent, src_.size(), src_.size());
    }
    Emit(TokenKind::kEnd, src_.size(), src_.size());
    return std::move(tokens_);
  }

 private:
  void SkipSpaces() {
    while (!AtEnd() && (Peek() == ' ' || Peek() == '\t' || Peek() == '\f')) {
      ++pos_;
    }
  }

  // Consumes indentation at a logical line start. Blank and comment-only
  // lines produce no tokens. Returns false at end of input.
  bool HandleIndentation() {
    while (true) {
      size_t line_begin = pos_;
      int column = 0;
      while (!AtEnd()) {
        if (Peek() == ' ') {
          ++column;
        } else if (Peek() == '\t') {
          column = (column / 8 + 1) * 8;
        } else if (Peek() == '\f') {
          column = 0;
        } else {
          break;
        }
        ++pos_;
      }
      if (AtEnd()) return false;
      char c = Peek();
      if (c == '#') {
        while (!AtEnd() && Peek() != '\n') ++pos_;
      }
      if (AtEnd()) return false;
      if (Peek() == '\n' || Peek() == '\r') {
        pos_ += (Peek() == '\r' && Peek(1) == '\n') ? 2 : 1;
        continue;
      }
      if (column > indents_.back()) {
        if (tokens_.empty() && !tolerant_) {
          pos_ = line_begin;
          Fail("unexpected indent");
        }
        indents_.push_back(column);
        Emit(TokenKind::kIndent, line_begin, pos_);
      } else {
        while (column < indents_.back()) {
          indents_.pop_back();
          Emit(TokenKind::kDedent, pos_, pos_);
        }
        if (column != indents_.back()) {
          if (!tolerant_) Fail("inconsistent dedent");
          indents_.push_back(column);
        }
      }
      return true;
    }
  }

  // Length of a string prefix at pos_ if a string literal starts here, -1
  // otherwise.
  int StringPrefixLength() const {
    int n = 0;
    while (n < 3) {
      char c = static_cast<char>(Peek(n) | 0x20);
      if (Peek(n) == '"' || Peek(n) == '\'') return n;
      if (c != 'r' && c != 'b' && c != 'u' && c != 'f') return -1;
      ++n;
    }
    return -1;
  }

  void LexString() {
    size_t begin = pos_;
    pos_ += StringPrefixLength();
    char quote = Peek();
    bool triple = Peek(1) == quote && Peek(2) == quote;
    pos_ += triple ? 3 : 1;
    while (true) {
      if (AtEnd()) {
        if (!tolerant_) Fail("unterminated string");
        break;
      }
      char c = Peek();
      if (c == '\\') {
        pos_ += 2;
        continue;
      }
      if (!triple && (c == '\n' || c == '\r')) {
        if (!tolerant_) Fail("unterminated string");
        break;
      }
      if (c == quote) {
        if (!triple) {
          ++pos_;
          break;
        }
        if (Peek(1) == quote && Peek(2) == quote) {
          pos_ += 3;
          break;
        }
      }
      ++pos_;
    }
    pos_ = std::min(pos_, src_.size());
    Emit(TokenKind::kString, begin, pos_);
  }

  std::vector<int> indents_;
  int depth_ = 0;
};

}  // namespace

bool IsKeyword(std::string_view word, Language language) {
  return language == Language::kJava ? JavaKeywords().count(word) > 0
                                     : PythonKeywords().count(word) > 0;
}

bool IsReservedLiteral(std::string_view word, Language language) {
  if (language == Language::kJava) {
    return word == "true" || word == "false" || word == "null";
  }
  return word == "True" || word == "False" || word == "None";
}

std::vector<Token> Lex(std::string_view source, Language language,
                       bool tolerant) {
  if (language == Language::kJava) {
    return JavaLexer(source, language, tolerant).Run();
  }
  return PythonLexer(source, language, tolerant).Run();
}

}  // namespace mistforge
