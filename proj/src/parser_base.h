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

#ifndef MISTFORGE_SRC_PARSER_BASE_H_
#define MISTFORGE_SRC_PARSER_BASE_H_

#include <string>
#include <string_view>
#include <vector>

#include "mistforge/lexer.h"
#include "mistforge/syntax_tree.h"

namespace mistforge::internal {

// Token cursor and node-building helpers shared by both grammars.
class ParserBase {
 protected:
  ParserBase(std::string_view source, Language language)
      : source_(source), tokens_(Lex(source, language)) {}

  const Token& Cur() const { return tokens_[pos_]; }
  const Token& At(size_t i) const {
    return tokens_[std::min(i, tokens_.size() - 1)];
  }
  const Token& Ahead(size_t k) const { return At(pos_ + k); }

  bool IsPunct(std::string_view p) const { return Cur().IsPunct(p); }
  bool IsKeyword(std::string_view k) const { return Cur().IsKeyword(k); }
  bool IsIdent() const { return Cur().kind == TokenKind::kIdentifier; }
  bool IsEnd() const { return Cur().kind == TokenKind::kEnd; }

  bool AcceptPunct(std::string_view p) {
    if (!IsPunct(p)) return false;
    ++pos_;
    return true;
  }
  bool AcceptKeyword(std::string_view k) {
    if (!IsKeyword(k)) return false;
    ++pos_;
    return true;
  }

  void ExpectPunct(std::string_view p) {
    if (!AcceptPunct(p)) Fail("expected '" + std::string(p) + "'");
  }
  void ExpectKeyword(std::string_view k) {
    if (!AcceptKeyword(k)) Fail("expected '" + std::string(k) + "'");
  }

  [[noreturn]] void Fail(const std::string& what) const {
    std::string got(Cur().text);
    if (Cur().kind == TokenKind::kEnd) got = "end of input";
    if (Cur().kind == TokenKind::kNewline) got = "newline";
    if (Cur().kind == TokenKind::kIndent) got = "indent";
    if (Cur().kind == TokenKind::kDedent) got = "dedent";
    throw SyntaxError(Cur().begin, what + ", got '" + got + "'");
  }

  // Opens a node starting at the current token.
  NodeId Open(NodeKind kind) {
    return tree_.Add(kind, Cur().begin, Cur().begin);
  }
  NodeId OpenAt(NodeKind kind, uint32_t begin) {
    return tree_.Add(kind, begin, begin);
  }
  // Closes a node at the end of the previously consumed token.
  NodeId Close(NodeId id) {
    uint32_t end = pos_ > 0 ? tokens_[pos_ - 1].end : 0;
    Node& n = tree_.mutable_node(id);
    n.end = std::max(end, n.begin);
    return id;
  }

  // Consumes the current token as a leaf node.
  NodeId Leaf(NodeKind kind) {
    NodeId id = tree_.Add(kind, Cur().begin, Cur().end);
    ++pos_;
    return id;
  }
  // A leaf spanning tokens [first, last] (used for split operators).
  NodeId LeafSpan(NodeKind kind, size_t first, size_t last) {
    NodeId id = tree_.Add(kind, tokens_[first].begin, tokens_[last].end);
    pos_ = last + 1;
    return id;
  }

  NodeId ExpectIdentifier() {
    if (!IsIdent()) Fail("expected identifier");
    return Leaf(NodeKind::kIdentifier);
  }

  void Attach(NodeId parent, NodeId child, Field field = Field::kNone) {
    tree_.AddChild(parent, child, field);
  }

  // Wraps `inner` into a new node of `kind` that starts where inner starts.
  NodeId Wrap(NodeKind kind, NodeId inner, Field field) {
    NodeId id = tree_.Add(kind, tree_.node(inner).begin,
                          tree_.node(inner).begin);
    Attach(id, inner, field);
    return id;
  }

  std::string_view source_;
  std::vector<Token> tokens_;
  size_t pos_ = 0;
  SyntaxTree tree_;
};

}  // namespace mistforge::internal

#endif  // MISTFORGE_SRC_PARSER_BASE_H_
