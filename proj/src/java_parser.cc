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

// Recursive-descent parser for Java source. Accepts full compilation units
// as well as the loose snippet forms found in code corpora: bare method
// declarations, bare field declarations and bare statements at top level.

#include <array>
#include <string_view>

#include "parser_base.h"

namespace mistforge {
namespace {

constexpr std::array<std::string_view, 8> kPrimitiveTypes = {
    "boolean", "byte", "char", "short", "int", "long", "float", "double"};

constexpr std::array<std::string_view, 12> kModifierKeywords = {
    "public",    "private",  "protected", "static",
    "final",     "abstract", "native",    "synchronized",
    "transient", "volatile", "strictfp",  "default"};

bool IsPrimitive(const Token& t) {
  if (t.kind != TokenKind::kKeyword) return false;
  for (auto p : kPrimitiveTypes) {
    if (t.text == p) return true;
  }
  return false;
}

bool IsModifierToken(const Token& t) {
  if (t.kind == TokenKind::kKeyword) {
    for (auto m : kModifierKeywords) {
      if (t.text == m) return true;
    }
  }
  return t.kind == TokenKind::kIdentifier &&
         (t.text == "sealed" || t.text == "non");
}

class JavaParser : public internal::ParserBase {
 public:
  explicit JavaParser(std::string_view source)
      : ParserBase(source, Language::kJava) {}

  SyntaxTree Run() {
    NodeId root = Open(NodeKind::kModule);
    while (!IsEnd()) {
      if (IsKeyword("package")) {
        Attach(root, ParsePackageOrImport(NodeKind::kPackage));
      } else if (IsKeyword("import")) {
        Attach(root, ParsePackageOrImport(NodeKind::kImport));
      } else if (LooksLikeMemberDeclaration(pos_, /*top_level=*/true)) {
        Attach(root, ParseMember());
      } else {
        Attach(root, ParseStatement());
      }
    }
    tree_.mutable_node(root).begin = 0;
    tree_.mutable_node(root).end = static_cast<uint32_t>(source_.size());
    tree_.SortChildren();
    tree_.SetTokens(std::move(tokens_));
    return std::move(tree_);
  }

 private:
  // ---------------------------------------------------------------------
  // Token-level lookahead scanners. These never build nodes.
  // ---------------------------------------------------------------------

  // Skips an annotation starting at i ('@' Name [ '(' ... ')' ]).
  bool SkipAnnotation(size_t& i) const {
    if (!At(i).IsPunct("@") || At(i + 1).IsKeyword("interface")) return false;
    ++i;
    if (At(i).kind != TokenKind::kIdentifier) return false;
    ++i;
    while (At(i).IsPunct(".") && At(i + 1).kind == TokenKind::kIdentifier) {
      i += 2;
    }
    if (At(i).IsPunct("(")) return SkipBalanced(i, "(", ")");
    return true;
  }

  bool SkipBalanced(size_t& i, std::string_view open,
                    std::string_view close) const {
    int depth = 0;
    while (At(i).kind != TokenKind::kEnd) {
      if (At(i).IsPunct(open)) ++depth;
      if (At(i).IsPunct(close)) {
        --depth;
        if (depth == 0) {
          ++i;
          return true;
        }
      }
      ++i;
    }
    return false;
  }

  void SkipModifiers(size_t& i) const {
    while (true) {
      if (IsModifierToken(At(i))) {
        if (At(i).text == "non") {
          // non-sealed
          if (At(i + 1).IsPunct("-") && At(i + 2).text == "sealed") {
            i += 3;
            continue;
          }
          return;
        }
        ++i;
      } else if (At(i).IsPunct("@") && !At(i + 1).IsKeyword("interface")) {
        if (!SkipAnnotation(i)) return;
      } else {
        return;
      }
    }
  }

  bool SkipTypeArguments(size_t& i) const {
    if (!At(i).IsPunct("<")) return false;
    ++i;
    if (At(i).IsPunct(">")) {
      ++i;
      return true;
    }
    while (true) {
      while (At(i).IsPunct("@")) {
        if (!SkipAnnotation(i)) return false;
      }
      if (At(i).IsPunct("?")) {
        ++i;
        if (At(i).IsKeyword("extends") || At(i).IsKeyword("super")) {
          ++i;
          if (!SkipType(i)) return false;
        }
      } else if (!SkipType(i)) {
        return false;
      }
      if (At(i).IsPunct(",")) {
        ++i;
        continue;
      }
      if (At(i).IsPunct(">")) {
        ++i;
        return true;
      }
      return false;
    }
  }

  // Skips a (possibly generic, possibly array) type.
  bool SkipType(size_t& i) const {
    while (At(i).IsPunct("@")) {
      if (!SkipAnnotation(i)) return false;
    }
    if (IsPrimitive(At(i))) {
      ++i;
    } else if (At(i).kind == TokenKind::kIdentifier) {
      ++i;
      if (At(i).IsPunct("<") && !SkipTypeArguments(i)) return false;
      while (At(i).IsPunct(".") && At(i + 1).kind == TokenKind::kIdentifier) {
        i += 2;
        if (At(i).IsPunct("<") && !SkipTypeArguments(i)) return false;
      }
    } else {
      return false;
    }
    while (At(i).IsPunct("[") && At(i + 1).IsPunct("]")) i += 2;
    return true;
  }

  bool LooksLikeTypeDeclarationKeyword(size_t i) const {
    const Token& t = At(i);
    if (t.IsKeyword("class") || t.IsKeyword("interface") ||
        t.IsKeyword("enum")) {
      return true;
    }
    if (t.IsPunct("@") && At(i + 1).IsKeyword("interface")) return true;
    return t.kind == TokenKind::kIdentifier && t.text == "record" &&
           At(i + 1).kind == TokenKind::kIdentifier &&
           (At(i + 2).IsPunct("(") || At(i + 2).IsPunct("<"));
  }

  // Decides whether tokens at i start a class member (method, field, type,
  // initializer). At top level a modifier-less `Type name = ...;` is treated
  // as a statement instead.
  bool LooksLikeMemberDeclaration(size_t i, bool top_level) const {
    size_t start = i;
    SkipModifiers(i);
    bool had_modifiers = i != start;
    if (LooksLikeTypeDeclarationKeyword(i)) return true;
    if (At(i).IsPunct("<")) return true;  // generic method
    if (!top_level && At(i).IsPunct("{")) return true;  // initializer
    if (At(i).IsKeyword("void")) return true;
    if (At(i).kind == TokenKind::kIdentifier && At(i + 1).IsPunct("(")) {
      // Constructor inside a class body; a call statement at top level.
      return !top_level;
    }
    size_t j = i;
    if (!SkipType(j)) return false;
    if (At(j).kind != TokenKind::kIdentifier) return false;
    if (At(j + 1).IsPunct("(")) return true;
    return !top_level || had_modifiers;
  }

  bool LooksLikeLocalVariable(size_t i) const {
    SkipModifiers(i);
    if (!SkipType(i)) return false;
    if (At(i).kind != TokenKind::kIdentifier) return false;
    const Token& next = At(i + 1);
    return next.IsPunct("=") || next.IsPunct(";") || next.IsPunct(",") ||
           next.IsPunct("[") || next.IsPunct(":");
  }

  bool LooksLikeLambda(size_t i) const {
    if (At(i).kind == TokenKind::kIdentifier && At(i + 1).IsPunct("->")) {
      return true;
    }
    if (!At(i).IsPunct("(")) return false;
    size_t j = i;
    if (!SkipBalanced(j, "(", ")")) return false;
    return At(j).IsPunct("->");
  }

  bool LooksLikeCast(size_t i) const {
    if (!At(i).IsPunct("(")) return false;
    size_t j = i + 1;
    bool primitive = IsPrimitive(At(j));
    if (!SkipType(j)) return false;
    while (At(j).IsPunct("&")) {
      ++j;
      if (!SkipType(j)) return false;
    }
    if (!At(j).IsPunct(")")) return false;
    const Token& next = At(j + 1);
    if (primitive) {
      // (int) -x is a cast; (a) - x is not, but primitives cannot be values.
      return next.kind != TokenKind::kPunct || next.IsPunct("(") ||
             next.IsPunct("-") || next.IsPunct("+") || next.IsPunct("!") ||
             next.IsPunct("~") || next.IsPunct("++") || next.IsPunct("--");
    }
    switch (next.kind) {
      case TokenKind::kIdentifier:
      case TokenKind::kNumber:
      case TokenKind::kString:
      case TokenKind::kChar:
        return true;
      case TokenKind::kKeyword:
        return next.text == "this" || next.text == "super" ||
               next.text == "new" || next.text == "true" ||
               next.text == "false" || next.text == "null" ||
               next.text == "switch" || IsPrimitive(next);
      case TokenKind::kPunct:
        return next.text == "(" || next.text == "!" || next.text == "~";
      default:
        return false;
    }
  }

  // ---------------------------------------------------------------------
  // Declarations.
  // ---------------------------------------------------------------------

  NodeId ParsePackageOrImport(NodeKind kind) {
    NodeId id = Open(kind);
    ++pos_;
    if (kind == NodeKind::kImport) AcceptKeyword("static");
    ParseQualifiedNameInto(id);
    if (AcceptPunct(".")) ExpectPunct("*");
    ExpectPunct(";");
    return Close(id);
  }

  void ParseQualifiedNameInto(NodeId parent) {
    Attach(parent, ExpectIdentifier(), Field::kName);
    while (IsPunct(".") && Ahead(1).kind == TokenKind::kIdentifier) {
      ++pos_;
      Attach(parent, ExpectIdentifier(), Field::kName);
    }
  }

  NodeId ParseAnnotation() {
    NodeId id = Open(NodeKind::kAnnotation);
    ExpectPunct("@");
    NodeId name = Open(NodeKind::kType);
    ParseQualifiedNameInto(name);
    Attach(id, Close(name), Field::kName);
    if (AcceptPunct("(")) {
      if (!IsPunct(")")) {
        do {
          if (IsIdent() && Ahead(1).IsPunct("=")) {
            NodeId pair = Open(NodeKind::kPair);
            Attach(pair, ExpectIdentifier(), Field::kName);
            ExpectPunct("=");
            Attach(pair, ParseElementValue(), Field::kValue);
            Attach(id, Close(pair), Field::kArguments);
          } else {
            Attach(id, ParseElementValue(), Field::kArguments);
          }
        } while (AcceptPunct(","));
      }
      ExpectPunct(")");
    }
    return Close(id);
  }

  NodeId ParseElementValue() {
    if (IsPunct("@")) return ParseAnnotation();
    if (IsPunct("{")) return ParseArrayInitializer();
    return ParseTernary();
  }

  // Returns kNoNode when no modifiers are present.
  NodeId ParseModifiers() {
    if (!(IsModifierToken(Cur()) || (IsPunct("@") &&
                                     !Ahead(1).IsKeyword("interface")))) {
      return kNoNode;
    }
    NodeId id = Open(NodeKind::kModifiers);
    while (true) {
      if (IsPunct("@") && !Ahead(1).IsKeyword("interface")) {
        Attach(id, ParseAnnotation(), Field::kAnnotation);
      } else if (IsModifierToken(Cur())) {
        if (Cur().text == "non") {
          if (!(Ahead(1).IsPunct("-") && Ahead(2).text == "sealed")) break;
          pos_ += 3;
        } else {
          ++pos_;
        }
      } else {
        break;
      }
    }
    return Close(id);
  }

  NodeId ParseType() {
    NodeId id = Open(NodeKind::kType);
    while (IsPunct("@")) Attach(id, ParseAnnotation(), Field::kAnnotation);
    if (IsPrimitive(Cur()) || IsKeyword("void")) {
      ++pos_;
    } else {
      Attach(id, ExpectIdentifier(), Field::kName);
      if (IsPunct("<")) ParseTypeArgumentsInto(id);
      while (IsPunct(".") && Ahead(1).kind == TokenKind::kIdentifier) {
        ++pos_;
        Attach(id, ExpectIdentifier(), Field::kName);
        if (IsPunct("<")) ParseTypeArgumentsInto(id);
      }
    }
    while (IsPunct("[") && Ahead(1).IsPunct("]")) pos_ += 2;
    return Close(id);
  }

  void ParseTypeArgumentsInto(NodeId parent) {
    ExpectPunct("<");
    if (AcceptPunct(">")) return;
    do {
      while (IsPunct("@")) Attach(parent, ParseAnnotation(), Field::kAnnotation);
      if (IsPunct("?")) {
        NodeId wildcard = Open(NodeKind::kType);
        ++pos_;
        if (AcceptKeyword("extends") || AcceptKeyword("super")) {
          Attach(wildcard, ParseType());
        }
        Attach(parent, Close(wildcard));
      } else {
        Attach(parent, ParseType());
      }
    } while (AcceptPunct(","));
    ExpectPunct(">");
  }

  NodeId ParseTypeParameters() {
    NodeId id = Open(NodeKind::kTypeParameters);
    ExpectPunct("<");
    do {
      while (IsPunct("@")) Attach(id, ParseAnnotation(), Field::kAnnotation);
      NodeId param = Open(NodeKind::kType);
      Attach(param, ExpectIdentifier(), Field::kName);
      if (AcceptKeyword("extends")) {
        Attach(param, ParseType());
        while (AcceptPunct("&")) Attach(param, ParseType());
      }
      Attach(id, Close(param));
    } while (AcceptPunct(","));
    ExpectPunct(">");
    return Close(id);
  }

  void ParseTypeListInto(NodeId parent, Field field) {
    do {
      Attach(parent, ParseType(), field);
    } while (AcceptPunct(","));
  }

  NodeId ParseMember() {
    uint32_t begin = Cur().begin;
    NodeId modifiers = ParseModifiers();
    NodeId id;
    if (LooksLikeTypeDeclarationKeyword(pos_)) {
      id = ParseTypeDeclaration(begin);
    } else if (IsPunct("{")) {
      id = OpenAt(NodeKind::kInitializerBlock, begin);
      Attach(id, ParseBlock(), Field::kBody);
    } else if (IsPunct(";")) {
      id = OpenAt(NodeKind::kEmpty, begin);
      ++pos_;
    } else {
      NodeId type_params = kNoNode;
      if (IsPunct("<")) type_params = ParseTypeParameters();
      if (IsIdent() && (Ahead(1).IsPunct("(") || Ahead(1).IsPunct("{"))) {
        // Constructor, or compact record constructor.
        id = OpenAt(NodeKind::kMethodDecl, begin);
        if (type_params != kNoNode) Attach(id, type_params);
        Attach(id, ExpectIdentifier(), Field::kName);
        if (IsPunct("(")) Attach(id, ParseFormalParameters(), Field::kParameters);
        ParseMethodRest(id);
      } else {
        NodeId type = ParseType();
        if (IsIdent() && Ahead(1).IsPunct("(")) {
          id = OpenAt(NodeKind::kMethodDecl, begin);
          if (type_params != kNoNode) Attach(id, type_params);
          Attach(id, type, Field::kType);
          Attach(id, ExpectIdentifier(), Field::kName);
          Attach(id, ParseFormalParameters(), Field::kParameters);
          while (IsPunct("[") && Ahead(1).IsPunct("]")) pos_ += 2;
          ParseMethodRest(id);
        } else {
          if (type_params != kNoNode) Fail("unexpected type parameters");
          id = OpenAt(NodeKind::kFieldDecl, begin);
          Attach(id, type, Field::kType);
          ParseDeclaratorsInto(id);
          ExpectPunct(";");
        }
      }
    }
    if (modifiers != kNoNode) Attach(id, modifiers, Field::kModifiers);
    return Close(id);
  }

  void ParseMethodRest(NodeId method) {
    if (AcceptKeyword("throws")) ParseTypeListInto(method, Field::kNone);
    if (IsPunct("{")) {
      Attach(method, ParseBlock(), Field::kBody);
    } else if (AcceptKeyword("default")) {
      Attach(method, ParseElementValue(), Field::kValue);
      ExpectPunct(";");
    } else {
      ExpectPunct(";");
    }
  }

  NodeId ParseFormalParameters() {
    NodeId id = Open(NodeKind::kParameters);
    ExpectPunct("(");
    if (!IsPunct(")")) {
      do {
        NodeId param = Open(NodeKind::kParameter);
        NodeId modifiers = ParseModifiers();
        if (modifiers != kNoNode) Attach(param, modifiers, Field::kModifiers);
        Attach(param, ParseType(), Field::kType);
        while (IsPunct("@")) Attach(param, ParseAnnotation(), Field::kAnnotation);
        AcceptPunct("...");
        if (IsKeyword("this")) {
          Attach(param, Leaf(NodeKind::kKeywordLiteral), Field::kName);
        } else {
          Attach(param, ExpectIdentifier(), Field::kName);
        }
        while (IsPunct("[") && Ahead(1).IsPunct("]")) pos_ += 2;
        Attach(id, Close(param));
      } while (AcceptPunct(","));
    }
    ExpectPunct(")");
    return Close(id);
  }

  void ParseDeclaratorsInto(NodeId parent) {
    do {
      NodeId decl = Open(NodeKind::kVariableDeclarator);
      Attach(decl, ExpectIdentifier(), Field::kName);
      while (IsPunct("[") && Ahead(1).IsPunct("]")) pos_ += 2;
      if (AcceptPunct("=")) {
        Attach(decl, IsPunct("{") ? ParseArrayInitializer() : ParseExpression(),
               Field::kValue);
      }
      Attach(parent, Close(decl), Field::kDeclarator);
    } while (AcceptPunct(","));
  }

  NodeId ParseTypeDeclaration(uint32_t begin) {
    NodeId id = OpenAt(NodeKind::kClassDecl, begin);
    if (IsPunct("@")) {
      pos_ += 2;  // @interface
      Attach(id, ExpectIdentifier(), Field::kName);
      Attach(id, ParseClassBody(false), Field::kBody);
      return Close(id);
    }
    bool is_enum = IsKeyword("enum");
    bool is_record = IsIdent();
    ++pos_;
    Attach(id, ExpectIdentifier(), Field::kName);
    if (IsPunct("<")) Attach(id, ParseTypeParameters());
    if (is_record) Attach(id, ParseFormalParameters(), Field::kParameters);
    while (true) {
      if (AcceptKeyword("extends") || AcceptKeyword("implements")) {
        ParseTypeListInto(id, Field::kSuperclass);
      } else if (IsIdent() && Cur().text == "permits") {
        ++pos_;
        ParseTypeListInto(id, Field::kSuperclass);
      } else {
        break;
      }
    }
    Attach(id, ParseClassBody(is_enum), Field::kBody);
    return Close(id);
  }

  NodeId ParseClassBody(bool is_enum) {
    NodeId id = Open(NodeKind::kBlock);
    ExpectPunct("{");
    if (is_enum) {
      while (!IsPunct(";") && !IsPunct("}")) {
        NodeId constant = Open(NodeKind::kEnumConstant);
        while (IsPunct("@")) {
          Attach(constant, ParseAnnotation(), Field::kAnnotation);
        }
        Attach(constant, ExpectIdentifier(), Field::kName);
        if (IsPunct("(")) Attach(constant, ParseArguments(), Field::kArguments);
        if (IsPunct("{")) Attach(constant, ParseClassBody(false), Field::kBody);
        Attach(id, Close(constant));
        if (!AcceptPunct(",")) break;
      }
      AcceptPunct(";");
    }
    while (!IsPunct("}")) {
      if (IsEnd()) Fail("unterminated class body");
      Attach(id, ParseMember());
    }
    ExpectPunct("}");
    return Close(id);
  }

  // ---------------------------------------------------------------------
  // Statements.
  // ---------------------------------------------------------------------

  NodeId ParseBlock() {
    NodeId id = Open(NodeKind::kBlock);
    ExpectPunct("{");
    while (!IsPunct("}")) {
      if (IsEnd()) Fail("unterminated block");
      Attach(id, ParseBlockStatement());
    }
    ExpectPunct("}");
    return Close(id);
  }

  NodeId ParseBlockStatement() {
    size_t i = pos_;
    SkipModifiers(i);
    if (LooksLikeTypeDeclarationKeyword(i)) return ParseMember();
    return ParseStatement();
  }

  NodeId ParseLocalVariableDeclaration(bool expect_semicolon) {
    NodeId id = Open(NodeKind::kLocalVarDecl);
    NodeId modifiers = ParseModifiers();
    if (modifiers != kNoNode) Attach(id, modifiers, Field::kModifiers);
    Attach(id, ParseType(), Field::kType);
    ParseDeclaratorsInto(id);
    if (expect_semicolon) ExpectPunct(";");
    return Close(id);
  }

  bool IsYieldStatement() const {
    if (!IsIdent() || Cur().text != "yield") return false;
    const Token& next = Ahead(1);
    if (next.kind == TokenKind::kPunct) {
      return next.text == "(" || next.text == "-" || next.text == "+" ||
             next.text == "!" || next.text == "~";
    }
    return next.kind != TokenKind::kEnd;
  }

  NodeId ParseStatement() {
    if (IsPunct("{")) return ParseBlock();
    if (IsPunct(";")) return Leaf(NodeKind::kEmpty);
    if (Cur().kind == TokenKind::kKeyword) {
      std::string_view k = Cur().text;
      if (k == "if") return ParseIf();
      if (k == "while") return ParseWhile();
      if (k == "do") return ParseDo();
      if (k == "for") return ParseFor();
      if (k == "try") return ParseTry();
      if (k == "switch") return ParseSwitch(NodeKind::kSwitch);
      if (k == "return") return ParseJump(NodeKind::kReturn, true);
      if (k == "break") return ParseJump(NodeKind::kBreak, false);
      if (k == "continue") return ParseJump(NodeKind::kContinue, false);
      if (k == "throw") return ParseJump(NodeKind::kThrow, true);
      if (k == "synchronized" && Ahead(1).IsPunct("(")) {
        NodeId id = Open(NodeKind::kSynchronized);
        ++pos_;
        Attach(id, ParseParenthesized(), Field::kCondition);
        Attach(id, ParseBlock(), Field::kBody);
        return Close(id);
      }
      if (k == "assert") {
        NodeId id = Open(NodeKind::kAssert);
        ++pos_;
        Attach(id, ParseExpression(), Field::kCondition);
        if (AcceptPunct(":")) Attach(id, ParseExpression(), Field::kValue);
        ExpectPunct(";");
        return Close(id);
      }
      if ((k == "this" || k == "super") && Ahead(1).IsPunct("(")) {
        NodeId id = Open(NodeKind::kExplicitConstructorCall);
        Attach(id, ParseExpression());
        ExpectPunct(";");
        return Close(id);
      }
    }
    if (IsIdent() && Ahead(1).IsPunct(":")) {
      NodeId id = Open(NodeKind::kLabeled);
      Attach(id, ExpectIdentifier(), Field::kName);
      ExpectPunct(":");
      Attach(id, ParseStatement(), Field::kBody);
      return Close(id);
    }
    if (IsYieldStatement()) return ParseJump(NodeKind::kYield, true);
    if (LooksLikeLocalVariable(pos_)) return ParseLocalVariableDeclaration(true);
    NodeId id = Open(NodeKind::kExpressionStatement);
    Attach(id, ParseExpression());
    ExpectPunct(";");
    return Close(id);
  }

  NodeId ParseJump(NodeKind kind, bool expression) {
    NodeId id = Open(kind);
    ++pos_;
    if (expression) {
      if (!IsPunct(";")) Attach(id, ParseExpression(), Field::kValue);
    } else if (IsIdent()) {
      Attach(id, ExpectIdentifier(), Field::kName);
    }
    ExpectPunct(";");
    return Close(id);
  }

  NodeId ParseParenthesized() {
    NodeId id = Open(NodeKind::kParenthesized);
    ExpectPunct("(");
    Attach(id, ParseExpression());
    ExpectPunct(")");
    return Close(id);
  }

  NodeId ParseIf() {
    NodeId id = Open(NodeKind::kIf);
    ExpectKeyword("if");
    Attach(id, ParseParenthesized(), Field::kCondition);
    Attach(id, ParseStatement(), Field::kConsequence);
    if (AcceptKeyword("else")) {
      Attach(id, ParseStatement(), Field::kAlternative);
    }
    return Close(id);
  }

  NodeId ParseWhile() {
    NodeId id = Open(NodeKind::kWhile);
    ExpectKeyword("while");
    Attach(id, ParseParenthesized(), Field::kCondition);
    Attach(id, ParseStatement(), Field::kBody);
    return Close(id);
  }

  NodeId ParseDo() {
    NodeId id = Open(NodeKind::kDo);
    ExpectKeyword("do");
    Attach(id, ParseStatement(), Field::kBody);
    ExpectKeyword("while");
    Attach(id, ParseParenthesized(), Field::kCondition);
    ExpectPunct(";");
    return Close(id);
  }

  NodeId ParseFor() {
    uint32_t begin = Cur().begin;
    ExpectKeyword("for");
    ExpectPunct("(");
    size_t i = pos_;
    SkipModifiers(i);
    size_t j = i;
    if (SkipType(j) && At(j).kind == TokenKind::kIdentifier &&
        At(j + 1).IsPunct(":")) {
      NodeId id = OpenAt(NodeKind::kForEach, begin);
      NodeId param = Open(NodeKind::kParameter);
      NodeId modifiers = ParseModifiers();
      if (modifiers != kNoNode) Attach(param, modifiers, Field::kModifiers);
      Attach(param, ParseType(), Field::kType);
      Attach(param, ExpectIdentifier(), Field::kName);
      Attach(id, Close(param), Field::kTarget);
      ExpectPunct(":");
      Attach(id, ParseExpression(), Field::kIterable);
      ExpectPunct(")");
      Attach(id, ParseStatement(), Field::kBody);
      return Close(id);
    }
    NodeId id = OpenAt(NodeKind::kFor, begin);
    if (!IsPunct(";")) {
      if (LooksLikeLocalVariable(pos_)) {
        Attach(id, ParseLocalVariableDeclaration(false), Field::kInit);
      } else {
        do {
          Attach(id, ParseExpression(), Field::kInit);
        } while (AcceptPunct(","));
      }
    }
    ExpectPunct(";");
    if (!IsPunct(";")) Attach(id, ParseExpression(), Field::kCondition);
    ExpectPunct(";");
    if (!IsPunct(")")) {
      do {
        Attach(id, ParseExpression(), Field::kUpdate);
      } while (AcceptPunct(","));
    }
    ExpectPunct(")");
    Attach(id, ParseStatement(), Field::kBody);
    return Close(id);
  }

  NodeId ParseTry() {
    NodeId id = Open(NodeKind::kTry);
    ExpectKeyword("try");
    if (IsPunct("(")) {
      NodeId resources = Open(NodeKind::kResources);
      ++pos_;
      while (!IsPunct(")")) {
        if (LooksLikeLocalVariable(pos_)) {
          NodeId decl = Open(NodeKind::kLocalVarDecl);
          NodeId modifiers = ParseModifiers();
          if (modifiers != kNoNode) Attach(decl, modifiers, Field::kModifiers);
          Attach(decl, ParseType(), Field::kType);
          NodeId declarator = Open(NodeKind::kVariableDeclarator);
          Attach(declarator, ExpectIdentifier(), Field::kName);
          ExpectPunct("=");
          Attach(declarator, ParseExpression(), Field::kValue);
          Attach(decl, Close(declarator), Field::kDeclarator);
          Attach(resources, Close(decl));
        } else {
          Attach(resources, ParseExpression());
        }
        if (!AcceptPunct(";")) break;
      }
      ExpectPunct(")");
      Attach(id, Close(resources), Field::kInit);
    }
    Attach(id, ParseBlock(), Field::kBody);
    bool handled = tree_.ChildByField(id, Field::kInit) != kNoNode;
    while (IsKeyword("catch")) {
      NodeId c = Open(NodeKind::kCatch);
      ++pos_;
      ExpectPunct("(");
      NodeId param = Open(NodeKind::kParameter);
      NodeId modifiers = ParseModifiers();
      if (modifiers != kNoNode) Attach(param, modifiers, Field::kModifiers);
      Attach(param, ParseType(), Field::kType);
      while (AcceptPunct("|")) Attach(param, ParseType(), Field::kType);
      Attach(param, ExpectIdentifier(), Field::kName);
      Attach(c, Close(param), Field::kParameters);
      ExpectPunct(")");
      Attach(c, ParseBlock(), Field::kBody);
      Attach(id, Close(c));
      handled = true;
    }
    if (IsKeyword("finally")) {
      NodeId f = Open(NodeKind::kFinally);
      ++pos_;
      Attach(f, ParseBlock(), Field::kBody);
      Attach(id, Close(f));
      handled = true;
    }
    if (!handled) Fail("expected 'catch' or 'finally'");
    return Close(id);
  }

  NodeId ParseSwitch(NodeKind kind) {
    NodeId id = Open(kind);
    ExpectKeyword("switch");
    Attach(id, ParseParenthesized(), Field::kCondition);
    NodeId block = Open(NodeKind::kSwitchBlock);
    ExpectPunct("{");
    while (!IsPunct("}")) {
      if (IsEnd()) Fail("unterminated switch");
      NodeId label = ParseSwitchLabel();
      if (AcceptPunct("->")) {
        NodeId rule = OpenAt(NodeKind::kSwitchRule, tree_.node(label).begin);
        Attach(rule, label);
        if (IsPunct("{")) {
          Attach(rule, ParseBlock(), Field::kBody);
        } else if (IsKeyword("throw")) {
          Attach(rule, ParseJump(NodeKind::kThrow, true), Field::kBody);
        } else {
          NodeId stmt = Open(NodeKind::kExpressionStatement);
          Attach(stmt, ParseExpression());
          ExpectPunct(";");
          Attach(rule, Close(stmt), Field::kBody);
        }
        Attach(block, Close(rule));
        continue;
      }
      ExpectPunct(":");
      NodeId group = OpenAt(NodeKind::kSwitchGroup, tree_.node(label).begin);
      Attach(group, label);
      while (IsKeyword("case") || IsKeyword("default")) {
        if (IsKeyword("default") && !Ahead(1).IsPunct(":")) break;
        Attach(group, ParseSwitchLabel());
        ExpectPunct(":");
      }
      while (!IsPunct("}") && !IsKeyword("case") &&
             !(IsKeyword("default") &&
               (Ahead(1).IsPunct(":") || Ahead(1).IsPunct("->")))) {
        if (IsEnd()) Fail("unterminated switch");
        Attach(group, ParseBlockStatement(), Field::kBody);
      }
      Attach(block, Close(group));
    }
    ExpectPunct("}");
    Attach(id, Close(block), Field::kBody);
    return Close(id);
  }

  NodeId ParseSwitchLabel() {
    NodeId id = Open(NodeKind::kSwitchLabel);
    if (AcceptKeyword("default")) return Close(id);
    ExpectKeyword("case");
    do {
      if (IsKeyword("default")) {
        ++pos_;
        continue;
      }
      size_t j = pos_;
      if (SkipType(j) && At(j).kind == TokenKind::kIdentifier &&
          (At(j + 1).IsPunct("->") || At(j + 1).IsPunct(":") ||
           (At(j + 1).kind == TokenKind::kIdentifier && At(j + 1).text == "when"))) {
        NodeId pattern = Open(NodeKind::kParameter);
        Attach(pattern, ParseType(), Field::kType);
        Attach(pattern, ExpectIdentifier(), Field::kName);
        Attach(id, Close(pattern), Field::kValue);
        if (IsIdent() && Cur().text == "when") {
          ++pos_;
          Attach(id, ParseExpression(), Field::kCondition);
        }
      } else {
        Attach(id, ParseTernary(), Field::kValue);
      }
    } while (AcceptPunct(","));
    return Close(id);
  }

  // ---------------------------------------------------------------------
  // Expressions.
  // ---------------------------------------------------------------------

  NodeId ParseExpression() { return ParseAssignment(); }

  // Reads an operator made of '>' tokens plus optional '=' at position i.
  // Returns the number of tokens consumed (0 if none) and sets op.
  size_t ReadGreaterOperator(size_t i, std::string& op) const {
    if (!At(i).IsPunct(">")) return 0;
    size_t count = 1;
    op = ">";
    while (count < 3 && At(i + count).IsPunct(">") &&
           At(i + count).begin == At(i + count - 1).end) {
      op += ">";
      ++count;
    }
    if (At(i + count).IsPunct("=") &&
        At(i + count).begin == At(i + count - 1).end) {
      op += "=";
      ++count;
    }
    return count;
  }

  // Recognizes an assignment operator at the cursor, returning the token
  // count (0 if none).
  size_t AssignmentOperatorAt(std::string& op) const {
    const Token& t = Cur();
    if (t.kind != TokenKind::kPunct) return 0;
    static constexpr std::array<std::string_view, 10> kOps = {
        "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<="};
    for (auto o : kOps) {
      if (t.text == o) {
        op = o;
        return 1;
      }
    }
    std::string g;
    size_t n = ReadGreaterOperator(pos_, g);
    if (n > 0 && (g == ">>=" || g == ">>>=")) {
      op = g;
      return n;
    }
    return 0;
  }

  NodeId ParseAssignment() {
    if (LooksLikeLambda(pos_)) return ParseLambda();
    NodeId lhs = ParseTernary();
    std::string op;
    size_t n = AssignmentOperatorAt(op);
    if (n == 0) return lhs;
    NodeKind k = tree_.node(lhs).kind;
    if (k != NodeKind::kIdentifier && k != NodeKind::kFieldAccess &&
        k != NodeKind::kSubscript && k != NodeKind::kParenthesized) {
      Fail("invalid assignment target");
    }
    NodeId id = Wrap(NodeKind::kAssignment, lhs, Field::kLeft);
    Attach(id, LeafSpan(NodeKind::kOperator, pos_, pos_ + n - 1),
           Field::kOperator);
    Attach(id, ParseAssignment(), Field::kRight);
    return Close(id);
  }

  NodeId ParseLambda() {
    NodeId id = Open(NodeKind::kLambda);
    if (IsIdent()) {
      NodeId params = Open(NodeKind::kParameters);
      NodeId p = Open(NodeKind::kParameter);
      Attach(p, ExpectIdentifier(), Field::kName);
      Attach(params, Close(p));
      Attach(id, Close(params), Field::kParameters);
    } else {
      NodeId params = Open(NodeKind::kParameters);
      ExpectPunct("(");
      if (!IsPunct(")")) {
        do {
          NodeId p = Open(NodeKind::kParameter);
          if (IsIdent() && (Ahead(1).IsPunct(",") || Ahead(1).IsPunct(")"))) {
            Attach(p, ExpectIdentifier(), Field::kName);
          } else {
            NodeId modifiers = ParseModifiers();
            if (modifiers != kNoNode) Attach(p, modifiers, Field::kModifiers);
            Attach(p, ParseType(), Field::kType);
            AcceptPunct("...");
            Attach(p, ExpectIdentifier(), Field::kName);
          }
          Attach(params, Close(p));
        } while (AcceptPunct(","));
      }
      ExpectPunct(")");
      Attach(id, Close(params), Field::kParameters);
    }
    ExpectPunct("->");
    if (IsPunct("{")) {
      Attach(id, ParseBlock(), Field::kBody);
    } else {
      Attach(id, ParseExpression(), Field::kBody);
    }
    return Close(id);
  }

  NodeId ParseTernary() {
    NodeId cond = ParseBinary(1);
    if (!IsPunct("?")) return cond;
    NodeId id = Wrap(NodeKind::kConditional, cond, Field::kCondition);
    ++pos_;
    Attach(id, ParseExpression(), Field::kConsequence);
    ExpectPunct(":");
    Attach(id, LooksLikeLambda(pos_) ? ParseLambda() : ParseTernary(),
           Field::kAlternative);
    return Close(id);
  }

  // Binary operator precedence at the cursor (0 if not a binary operator);
  // sets op and token count.
  int BinaryPrecedence(std::string& op, size_t& count) const {
    const Token& t = Cur();
    count = 1;
    if (t.IsKeyword("instanceof")) {
      op = "instanceof";
      return 7;
    }
    if (t.kind != TokenKind::kPunct) return 0;
    if (t.text == ">") {
      count = ReadGreaterOperator(pos_, op);
      if (op == ">" || op == ">=") return 7;
      if (op == ">>" || op == ">>>") return 8;
      return 0;  // >>= and >>>= are assignments
    }
    op = t.text;
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "|") return 3;
    if (op == "^") return 4;
    if (op == "&") return 5;
    if (op == "==" || op == "!=") return 6;
    if (op == "<" || op == "<=") return 7;
    if (op == "<<") return 8;
    if (op == "+" || op == "-") return 9;
    if (op == "*" || op == "/" || op == "%") return 10;
    return 0;
  }

  NodeId ParseBinary(int min_prec) {
    NodeId lhs = ParseUnary();
    while (true) {
      std::string op;
      size_t count = 0;
      int prec = BinaryPrecedence(op, count);
      if (prec == 0 || prec < min_prec) return lhs;
      if (op == "instanceof") {
        NodeId id = Wrap(NodeKind::kInstanceof, lhs, Field::kLeft);
        ++pos_;
        AcceptKeyword("final");
        Attach(id, ParseType(), Field::kType);
        if (IsIdent()) Attach(id, ExpectIdentifier(), Field::kName);
        lhs = Close(id);
        continue;
      }
      NodeId id = Wrap(NodeKind::kBinary, lhs, Field::kLeft);
      Attach(id, LeafSpan(NodeKind::kOperator, pos_, pos_ + count - 1),
             Field::kOperator);
      Attach(id, ParseBinary(prec + 1), Field::kRight);
      lhs = Close(id);
    }
  }

  NodeId ParseUnary() {
    if (IsPunct("++") || IsPunct("--")) {
      NodeId id = Open(NodeKind::kUpdate);
      Attach(id, Leaf(NodeKind::kOperator), Field::kOperator);
      Attach(id, ParseUnary(), Field::kOperand);
      return Close(id);
    }
    if (IsPunct("+") || IsPunct("-") || IsPunct("!") || IsPunct("~")) {
      NodeId id = Open(NodeKind::kUnary);
      Attach(id, Leaf(NodeKind::kOperator), Field::kOperator);
      Attach(id, ParseUnary(), Field::kOperand);
      return Close(id);
    }
    if (LooksLikeCast(pos_)) {
      NodeId id = Open(NodeKind::kCast);
      ExpectPunct("(");
      Attach(id, ParseType(), Field::kType);
      while (AcceptPunct("&")) Attach(id, ParseType(), Field::kType);
      ExpectPunct(")");
      Attach(id, LooksLikeLambda(pos_) ? ParseLambda() : ParseUnary(),
             Field::kValue);
      return Close(id);
    }
    NodeId expr = ParsePostfix(ParsePrimary());
    while (IsPunct("++") || IsPunct("--")) {
      NodeId id = Wrap(NodeKind::kUpdate, expr, Field::kOperand);
      Attach(id, Leaf(NodeKind::kOperator), Field::kOperator);
      expr = Close(id);
    }
    return expr;
  }

  NodeId ParseArguments() {
    NodeId id = Open(NodeKind::kArguments);
    ExpectPunct("(");
    if (!IsPunct(")")) {
      do {
        Attach(id, ParseExpression());
      } while (AcceptPunct(","));
    }
    ExpectPunct(")");
    return Close(id);
  }

  NodeId ParseArrayInitializer() {
    NodeId id = Open(NodeKind::kArrayInitializer);
    ExpectPunct("{");
    while (!IsPunct("}")) {
      Attach(id, IsPunct("{") ? ParseArrayInitializer() : ParseExpression());
      if (!AcceptPunct(",")) break;
    }
    ExpectPunct("}");
    return Close(id);
  }

  NodeId ParseCreation() {
    uint32_t begin = Cur().begin;
    ExpectKeyword("new");
    NodeId type_args = kNoNode;
    if (IsPunct("<")) {
      type_args = Open(NodeKind::kType);
      ParseTypeArgumentsInto(type_args);
      Close(type_args);
    }
    NodeId type = Open(NodeKind::kType);
    while (IsPunct("@")) Attach(type, ParseAnnotation(), Field::kAnnotation);
    if (IsPrimitive(Cur())) {
      ++pos_;
    } else {
      Attach(type, ExpectIdentifier(), Field::kName);
      if (IsPunct("<")) ParseTypeArgumentsInto(type);
      while (IsPunct(".") && Ahead(1).kind == TokenKind::kIdentifier) {
        ++pos_;
        Attach(type, ExpectIdentifier(), Field::kName);
        if (IsPunct("<")) ParseTypeArgumentsInto(type);
      }
    }
    Close(type);
    if (IsPunct("[")) {
      NodeId id = OpenAt(NodeKind::kArrayCreation, begin);
      Attach(id, type, Field::kType);
      bool sized = false;
      while (IsPunct("[")) {
        ++pos_;
        if (AcceptPunct("]")) continue;
        sized = true;
        Attach(id, ParseExpression(), Field::kIndex);
        ExpectPunct("]");
      }
      if (IsPunct("{")) {
        Attach(id, ParseArrayInitializer(), Field::kValue);
      } else if (!sized) {
        Fail("array creation needs a size or initializer");
      }
      return Close(id);
    }
    NodeId id = OpenAt(NodeKind::kObjectCreation, begin);
    if (type_args != kNoNode) Attach(id, type_args);
    Attach(id, type, Field::kType);
    Attach(id, ParseArguments(), Field::kArguments);
    if (IsPunct("{")) Attach(id, ParseClassBody(false), Field::kBody);
    return Close(id);
  }

  NodeId ParsePrimary() {
    const Token& t = Cur();
    switch (t.kind) {
      case TokenKind::kNumber:
        return Leaf(NodeKind::kNumber);
      case TokenKind::kString:
        return Leaf(NodeKind::kString);
      case TokenKind::kChar:
        return Leaf(NodeKind::kChar);
      case TokenKind::kIdentifier: {
        if (Ahead(1).IsPunct("[") && Ahead(2).IsPunct("]")) {
          return ParseTypeExpression();
        }
        NodeId name = Leaf(NodeKind::kIdentifier);
        if (IsPunct("(")) {
          NodeId call = Wrap(NodeKind::kCall, name, Field::kFunction);
          Attach(call, ParseArguments(), Field::kArguments);
          return Close(call);
        }
        return name;
      }
      case TokenKind::kKeyword: {
        if (t.text == "true" || t.text == "false" || t.text == "null") {
          return Leaf(NodeKind::kKeywordLiteral);
        }
        if (t.text == "this" || t.text == "super") {
          NodeId self = Leaf(NodeKind::kKeywordLiteral);
          if (IsPunct("(")) {
            NodeId call = Wrap(NodeKind::kCall, self, Field::kFunction);
            Attach(call, ParseArguments(), Field::kArguments);
            return Close(call);
          }
          return self;
        }
        if (t.text == "new") return ParseCreation();
        if (t.text == "switch") return ParseSwitch(NodeKind::kSwitchExpression);
        if (IsPrimitive(t) || t.text == "void") return ParseTypeExpression();
        break;
      }
      case TokenKind::kPunct:
        if (t.text == "(") return ParseParenthesized();
        break;
      default:
        break;
    }
    Fail("expected expression");
  }

  // `int.class`, `String[].class`, `int[]::new` and friends.
  NodeId ParseTypeExpression() {
    NodeId type = ParseType();
    if (AcceptPunct(".")) {
      NodeId id = Wrap(NodeKind::kClassLiteral, type, Field::kType);
      ExpectKeyword("class");
      return Close(id);
    }
    if (IsPunct("::")) return type;
    Fail("expected '.class' or '::'");
  }

  NodeId ParsePostfix(NodeId expr) {
    while (true) {
      if (IsPunct(".")) {
        ++pos_;
        if (IsKeyword("new")) {
          NodeId creation = ParseCreation();
          NodeId id = Wrap(NodeKind::kFieldAccess, expr, Field::kObject);
          Attach(id, creation, Field::kMember);
          expr = Close(id);
          continue;
        }
        if (IsKeyword("class")) {
          NodeId id = Wrap(NodeKind::kClassLiteral, expr, Field::kType);
          ++pos_;
          expr = Close(id);
          continue;
        }
        if (IsKeyword("this") || IsKeyword("super")) {
          NodeId id = Wrap(NodeKind::kFieldAccess, expr, Field::kObject);
          Attach(id, Leaf(NodeKind::kKeywordLiteral), Field::kMember);
          expr = Close(id);
          continue;
        }
        NodeId type_args = kNoNode;
        if (IsPunct("<")) {
          type_args = Open(NodeKind::kType);
          ParseTypeArgumentsInto(type_args);
          Close(type_args);
        }
        NodeId access = Wrap(NodeKind::kFieldAccess, expr, Field::kObject);
        if (type_args != kNoNode) Attach(access, type_args);
        Attach(access, ExpectIdentifier(), Field::kMember);
        expr = Close(access);
        if (IsPunct("(")) {
          NodeId call = Wrap(NodeKind::kCall, expr, Field::kFunction);
          Attach(call, ParseArguments(), Field::kArguments);
          expr = Close(call);
        }
      } else if (IsPunct("[")) {
        NodeId id = Wrap(NodeKind::kSubscript, expr, Field::kObject);
        ++pos_;
        Attach(id, ParseExpression(), Field::kIndex);
        ExpectPunct("]");
        expr = Close(id);
      } else if (IsPunct("::")) {
        NodeId id = Wrap(NodeKind::kMethodReference, expr, Field::kObject);
        ++pos_;
        if (IsPunct("<")) {
          NodeId type_args = Open(NodeKind::kType);
          ParseTypeArgumentsInto(type_args);
          Attach(id, Close(type_args));
        }
        if (IsKeyword("new")) {
          Attach(id, Leaf(NodeKind::kKeywordLiteral), Field::kMember);
        } else {
          Attach(id, ExpectIdentifier(), Field::kMember);
        }
        expr = Close(id);
      } else {
        return expr;
      }
    }
  }
};

}  // namespace

SyntaxTree ParseJava(std::string_view source) {
  return JavaParser(source).Run();
}

}  // namespace mistforge
