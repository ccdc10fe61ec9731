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

#ifndef MISTFORGE_LEXER_H_
#define MISTFORGE_LEXER_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mistforge/language.h"

namespace mistforge {

enum class TokenKind {
  kIdentifier,
  kKeyword,
  kNumber,
  kString,
  kChar,
  kPunct,
  kNewline,
  kIndent,
  kDedent,
  kEnd,
};

struct Token {
  TokenKind kind;
  uint32_t begin;
  uint32_t end;
  std::string_view text;

  bool Is(TokenKind k, std::string_view t) const {
    return kind == k && text == t;
  }
  bool IsPunct(std::string_view t) const { return Is(TokenKind::kPunct, t); }
  bool IsKeyword(std::string_view t) const {
    return Is(TokenKind::kKeyword, t);
  }
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(uint32_t offset, const std::string& what)
      : std::runtime_error(what + " at byte " + std::to_string(offset)),
        offset_(offset) {}

  uint32_t offset() const { return offset_; }

 private:
  uint32_t offset_;
};

// Splits source text into tokens. Comments and insignificant whitespace are
// dropped; Python additionally gets NEWLINE/INDENT/DEDENT tokens. Java '>'
// is always a single-character token so that generic closers can be split
// by the parser; adjacency recovers '>>', '>=', '>>>=' and friends.
//
// In strict mode lexical errors throw SyntaxError. In tolerant mode the
// offending byte is skipped, which is what classifiers fed with masked text
// need.
std::vector<Token> Lex(std::string_view source, Language language,
                       bool tolerant = false);

bool IsKeyword(std::string_view word, Language language);

// Literal-like reserved words that are not keywords in the grammar sense
// but still cannot name a variable: true/false/null, True/False/None.
bool IsReservedLiteral(std::string_view word, Language language);

}  // namespace mistforge

#endif  // MISTFORGE_LEXER_H_
