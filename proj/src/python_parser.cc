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

// Recursive-descent parser for Python 3 (match statements excepted).

#include <string_view>

#include "parser_base.h"

namespace mistforge {
namespace {

class PythonParser : public internal::ParserBase {
 public:
  explicit PythonParser(std::string_view source)
      : ParserBase(source, Language::kPython) {}

  SyntaxTree Run() {
    NodeId root = Open(NodeKind::kModule);
    while (!IsEnd()) {
      if (Cur().kind == TokenKind::kNewline) {
        ++pos_;
        continue;
      }
      ParseStatementInto(root);
    }
    tree_.mutable_node(root).begin = 0;
    tree_.mutable_node(root).end = static_cast<uint32_t>(source_.size());
    tree_.SortChildren();
    tree_.SetTokens(std::move(tokens_));
    return std::move(tree_);
  }

 private:
  bool IsNewline() const { return Cur().kind == TokenKind::kNewline; }

  void ExpectNewline() {
    if (IsNewline()) {
      ++pos_;
    } else if (!IsEnd()) {
      Fail("expected end of line");
    }
  }

  // ---------------------------------------------------------------------
  // Statements.
  // ---------------------------------------------------------------------

  void ParseStatementInto(NodeId parent) {
    if (Cur().kind == TokenKind::kIndent) Fail("unexpected indent");
    if (Cur().kind == TokenKind::kDedent) Fail("unexpected dedent");
    if (IsCompoundStart()) {
      Attach(parent, ParseCompound());
      return;
    }
    ParseSimpleLineInto(parent);
  }

  bool IsCompoundStart() const {
    const Token& t = Cur();
    if (t.IsPunct("@")) return true;
    if (t.kind != TokenKind::kKeyword) return false;
    std::string_view k = t.text;
    if (k == "async") {
      const Token& n = Ahead(1);
      return n.IsKeyword("def") || n.IsKeyword("for") || n.IsKeyword("with");
    }
    return k == "if" || k == "while" || k == "for" || k == "try" ||
           k == "with" || k == "def" || k == "class";
  }

  void ParseSimpleLineInto(NodeId parent) {
    while (true) {
      Attach(parent, ParseSmallStatement());
      if (!AcceptPunct(";")) break;
      if (IsNewline() || IsEnd()) break;
    }
    ExpectNewline();
  }

  NodeId ParseSuite() {
    if (!IsNewline()) {
      NodeId block = Open(NodeKind::kBlock);
      ParseSimpleLineInto(block);
      CloseBlock(block);
      return block;
    }
    ++pos_;
    if (Cur().kind != TokenKind::kIndent) Fail("expected an indented block");
    ++pos_;
    NodeId block = Open(NodeKind::kBlock);
    while (Cur().kind != TokenKind::kDedent) {
      if (IsEnd()) Fail("unterminated block");
      if (IsNewline()) {
        ++pos_;
        continue;
      }
      ParseStatementInto(block);
    }
    ++pos_;
    CloseBlock(block);
    return block;
  }

  // A block spans its first to its last statement.
  void CloseBlock(NodeId block) {
    Node& n = tree_.mutable_node(block);
    if (n.children.empty()) return;
    n.begin = tree_.node(n.children.front()).begin;
    n.end = tree_.node(n.children.back()).end;
  }

  // The span of a compound statement ends at the end of its last suite.
  NodeId CloseCompound(NodeId id) {
    Node& n = tree_.mutable_node(id);
    if (!n.children.empty()) n.end = tree_.node(n.children.back()).end;
    return id;
  }

  NodeId ParseCompound() {
    if (IsPunct("@")) return ParseDecorated();
    uint32_t begin = Cur().begin;
    bool async = AcceptKeyword("async");
    std::string_view k = Cur().text;
    if (k == "if") return ParseIf(begin);
    if (k == "while") return ParseWhile(begin);
    if (k == "for") return ParseFor(begin);
    if (k == "try") return ParseTry(begin);
    if (k == "with") return ParseWith(begin);
    if (k == "def") return ParseFunction(begin);
    if (k == "class" && !async) return ParseClass(begin);
    Fail("expected compound statement");
  }

  NodeId ParseDecorated() {
    uint32_t begin = Cur().begin;
    std::vector<NodeId> decorators;
    while (IsPunct("@")) {
      NodeId d = Open(NodeKind::kDecorator);
      ++pos_;
      Attach(d, ParseNamedExpressionTest(), Field::kValue);
      Close(d);
      ExpectNewline();
      decorators.push_back(d);
    }
    AcceptKeyword("async");
    NodeId target;
    if (IsKeyword("def")) {
      target = ParseFunction(begin);
    } else if (IsKeyword("class")) {
      target = ParseClass(begin);
    } else {
      Fail("expected 'def' or 'class' after decorator");
    }
    for (NodeId d : decorators) Attach(target, d, Field::kAnnotation);
    return target;
  }

  NodeId ParseIf(uint32_t begin) {
    NodeId id = OpenAt(NodeKind::kIf, begin);
    ExpectKeyword("if");
    Attach(id, ParseNamedExpressionTest(), Field::kCondition);
    ExpectPunct(":");
    Attach(id, ParseSuite(), Field::kConsequence);
    while (IsKeyword("elif")) {
      NodeId e = Open(NodeKind::kElif);
      ++pos_;
      Attach(e, ParseNamedExpressionTest(), Field::kCondition);
      ExpectPunct(":");
      Attach(e, ParseSuite(), Field::kConsequence);
      Attach(id, CloseCompound(e), Field::kAlternative);
    }
    if (IsKeyword("else")) Attach(id, ParseElse(), Field::kAlternative);
    return CloseCompound(id);
  }

  NodeId ParseElse() {
    NodeId e = Open(NodeKind::kElse);
    ExpectKeyword("else");
    ExpectPunct(":");
    Attach(e, ParseSuite(), Field::kBody);
    return CloseCompound(e);
  }

  NodeId ParseWhile(uint32_t begin) {
    NodeId id = OpenAt(NodeKind::kWhile, begin);
    ExpectKeyword("while");
    Attach(id, ParseNamedExpressionTest(), Field::kCondition);
    ExpectPunct(":");
    Attach(id, ParseSuite(), Field::kBody);
    if (IsKeyword("else")) Attach(id, ParseElse(), Field::kAlternative);
    return CloseCompound(id);
  }

  NodeId ParseFor(uint32_t begin) {
    NodeId id = OpenAt(NodeKind::kForEach, begin);
    ExpectKeyword("for");
    Attach(id, ParseTargetList(), Field::kTarget);
    ExpectKeyword("in");
    Attach(id, ParseStarExpressions(), Field::kIterable);
    ExpectPunct(":");
    Attach(id, ParseSuite(), Field::kBody);
    if (IsKeyword("else")) Attach(id, ParseElse(), Field::kAlternative);
    return CloseCompound(id);
  }

  NodeId ParseTry(uint32_t begin) {
    NodeId id = OpenAt(NodeKind::kTry, begin);
    ExpectKeyword("try");
    ExpectPunct(":");
    Attach(id, ParseSuite(), Field::kBody);
    bool handled = false;
    while (IsKeyword("except")) {
      NodeId e = Open(NodeKind::kExcept);
      ++pos_;
      AcceptPunct("*");
      if (!IsPunct(":")) {
        Attach(e, ParseTest(), Field::kType);
        if (AcceptKeyword("as")) Attach(e, ExpectIdentifier(), Field::kName);
      }
      ExpectPunct(":");
      Attach(e, ParseSuite(), Field::kBody);
      Attach(id, CloseCompound(e));
      handled = true;
    }
    if (handled && IsKeyword("else")) {
      Attach(id, ParseElse(), Field::kAlternative);
    }
    if (IsKeyword("finally")) {
      NodeId f = Open(NodeKind::kFinally);
      ++pos_;
      ExpectPunct(":");
      Attach(f, ParseSuite(), Field::kBody);
      Attach(id, CloseCompound(f));
      handled = true;
    }
    if (!handled) Fail("expected 'except' or 'finally'");
    return CloseCompound(id);
  }

  NodeId ParseWith(uint32_t begin) {
    NodeId id = OpenAt(NodeKind::kWith, begin);
    ExpectKeyword("with");
    // Parenthesized item lists: `with (a as b, c as d):`.
    bool grouped = false;
    if (IsPunct("(")) {
      size_t i = pos_;
      int depth = 0;
      bool has_as = false;
      for (; At(i).kind != TokenKind::kEnd; ++i) {
        if (At(i).IsPunct("(") || At(i).IsPunct("[") || At(i).IsPunct("{")) {
          ++depth;
        } else if (At(i).IsPunct(")") || At(i).IsPunct("]") ||
                   At(i).IsPunct("}")) {
          if (--depth == 0) break;
        } else if (depth == 1 && At(i).IsKeyword("as")) {
          has_as = true;
        }
      }
      grouped = has_as && At(i + 1).IsPunct(":");
    }
    if (grouped) ++pos_;
    do {
      if (grouped && IsPunct(")")) break;
      NodeId item = Open(NodeKind::kWithItem);
      Attach(item, ParseTest(), Field::kValue);
      if (AcceptKeyword("as")) Attach(item, ParseTarget(), Field::kTarget);
      Attach(id, Close(item));
    } while (AcceptPunct(","));
    if (grouped) ExpectPunct(")");
    ExpectPunct(":");
    Attach(id, ParseSuite(), Field::kBody);
    return CloseCompound(id);
  }

  NodeId ParseFunction(uint32_t begin) {
    NodeId id = OpenAt(NodeKind::kMethodDecl, begin);
    ExpectKeyword("def");
    Attach(id, ExpectIdentifier(), Field::kName);
    ExpectPunct("(");
    Attach(id, ParseParameterList(")", true), Field::kParameters);
    ExpectPunct(")");
    if (AcceptPunct("->")) Attach(id, ParseTest(), Field::kType);
    ExpectPunct(":");
    Attach(id, ParseSuite(), Field::kBody);
    return CloseCompound(id);
  }

  NodeId ParseClass(uint32_t begin) {
    NodeId id = OpenAt(NodeKind::kClassDecl, begin);
    ExpectKeyword("class");
    Attach(id, ExpectIdentifier(), Field::kName);
    if (IsPunct("(")) Attach(id, ParseArguments(), Field::kSuperclass);
    ExpectPunct(":");
    Attach(id, ParseSuite(), Field::kBody);
    return CloseCompound(id);
  }

  // Parameters for def (annotated) and lambda (unannotated).
  NodeId ParseParameterList(std::string_view close, bool annotated) {
    NodeId id = Open(NodeKind::kParameters);
    while (!IsPunct(close)) {
      NodeId p = Open(NodeKind::kParameter);
      if (IsPunct("/") || (IsPunct("*") && (Ahead(1).IsPunct(",") ||
                                            Ahead(1).IsPunct(close)))) {
        Attach(p, Leaf(NodeKind::kOperator), Field::kOperator);
      } else {
        if (IsPunct("*") || IsPunct("**")) {
          Attach(p, Leaf(NodeKind::kOperator), Field::kOperator);
        }
        Attach(p, ExpectIdentifier(), Field::kName);
        if (annotated && AcceptPunct(":")) {
          Attach(p, ParseTest(), Field::kType);
        }
        if (AcceptPunct("=")) Attach(p, ParseTest(), Field::kValue);
      }
      Attach(id, Close(p));
      if (!AcceptPunct(",")) break;
    }
    return Close(id);
  }

  NodeId ParseSmallStatement() {
    const Token& t = Cur();
    if (t.kind == TokenKind::kKeyword) {
      std::string_view k = t.text;
      if (k == "pass") return Leaf(NodeKind::kPass);
      if (k == "break") return Leaf(NodeKind::kBreak);
      if (k == "continue") return Leaf(NodeKind::kContinue);
      if (k == "return") {
        NodeId id = Open(NodeKind::kReturn);
        ++pos_;
        if (!AtStatementEnd()) {
          Attach(id, ParseStarExpressions(), Field::kValue);
        }
        return Close(id);
      }
      if (k == "raise") {
        NodeId id = Open(NodeKind::kRaise);
        ++pos_;
        if (!AtStatementEnd()) {
          Attach(id, ParseTest(), Field::kValue);
          if (AcceptKeyword("from")) Attach(id, ParseTest(), Field::kValue);
        }
        return Close(id);
      }
      if (k == "global" || k == "nonlocal") {
        NodeId id = Open(k == "global" ? NodeKind::kGlobal
                                       : NodeKind::kNonlocal);
        ++pos_;
        do {
          Attach(id, ExpectIdentifier(), Field::kName);
        } while (AcceptPunct(","));
        return Close(id);
      }
      if (k == "del") {
        NodeId id = Open(NodeKind::kDel);
        ++pos_;
        Attach(id, ParseTargetList(), Field::kTarget);
        return Close(id);
      }
      if (k == "assert") {
        NodeId id = Open(NodeKind::kAssert);
        ++pos_;
        Attach(id, ParseTest(), Field::kCondition);
        if (AcceptPunct(",")) Attach(id, ParseTest(), Field::kValue);
        return Close(id);
      }
      if (k == "import") return ParseImport();
      if (k == "from") return ParseImportFrom();
    }
    return ParseExpressionStatement();
  }

  bool AtStatementEnd() const {
    return IsNewline() || IsEnd() || IsPunct(";");
  }

  NodeId ParseDottedNameInto(NodeId parent, Field field) {
    Attach(parent, ExpectIdentifier(), field);
    while (AcceptPunct(".")) Attach(parent, ExpectIdentifier(), field);
    return parent;
  }

  NodeId ParseImport() {
    NodeId id = Open(NodeKind::kImport);
    ExpectKeyword("import");
    do {
      NodeId alias = Open(NodeKind::kAlias);
      ParseDottedNameInto(alias, Field::kName);
      if (AcceptKeyword("as")) Attach(alias, ExpectIdentifier(), Field::kTarget);
      Attach(id, Close(alias));
    } while (AcceptPunct(","));
    return Close(id);
  }

  NodeId ParseImportFrom() {
    NodeId id = Open(NodeKind::kImportFrom);
    ExpectKeyword("from");
    bool relative = false;
    while (IsPunct(".") || IsPunct("...")) {
      ++pos_;
      relative = true;
    }
    if (!IsKeyword("import")) {
      NodeId module = Open(NodeKind::kAlias);
      ParseDottedNameInto(module, Field::kName);
      Attach(id, Close(module), Field::kObject);
    } else if (!relative) {
      Fail("expected module name");
    }
    ExpectKeyword("import");
    if (AcceptPunct("*")) return Close(id);
    bool paren = AcceptPunct("(");
    do {
      if (paren && IsPunct(")")) break;
      NodeId alias = Open(NodeKind::kAlias);
      Attach(alias, ExpectIdentifier(), Field::kName);
      if (AcceptKeyword("as")) Attach(alias, ExpectIdentifier(), Field::kTarget);
      Attach(id, Close(alias));
    } while (AcceptPunct(","));
    if (paren) ExpectPunct(")");
    return Close(id);
  }

  bool IsAugmentedOperator() const {
    const Token& t = Cur();
    if (t.kind != TokenKind::kPunct || t.text.size() < 2) return false;
    if (t.text.back() != '=') return false;
    return t.text != "==" && t.text != "!=" && t.text != "<=" &&
           t.text != ">=" && t.text != ":=";
  }

  NodeId ParseExpressionStatement() {
    uint32_t begin = Cur().begin;
    NodeId first = IsKeyword("yield") ? ParseYield() : ParseStarExpressions();
    if (IsPunct(":")) {
      // Annotated assignment.
      CheckTarget(first, /*allow_multiple=*/false);
      NodeId stmt = OpenAt(NodeKind::kExpressionStatement, begin);
      NodeId assign = Wrap(NodeKind::kAssignment, first, Field::kLeft);
      ++pos_;
      Attach(assign, ParseTest(), Field::kType);
      if (IsPunct("=")) {
        Attach(assign, Leaf(NodeKind::kOperator), Field::kOperator);
        Attach(assign, IsKeyword("yield") ? ParseYield()
                                          : ParseStarExpressions(),
               Field::kRight);
      }
      Attach(stmt, Close(assign));
      return Close(stmt);
    }
    if (IsAugmentedOperator()) {
      CheckTarget(first, /*allow_multiple=*/false);
      NodeId stmt = OpenAt(NodeKind::kExpressionStatement, begin);
      NodeId assign = Wrap(NodeKind::kAssignment, first, Field::kLeft);
      Attach(assign, Leaf(NodeKind::kOperator), Field::kOperator);
      Attach(assign, IsKeyword("yield") ? ParseYield() : ParseStarExpressions(),
             Field::kRight);
      Attach(stmt, Close(assign));
      return Close(stmt);
    }
    if (IsPunct("=")) {
      NodeId stmt = OpenAt(NodeKind::kExpressionStatement, begin);
      NodeId assign = Wrap(NodeKind::kAssignment, first, Field::kLeft);
      CheckTarget(first, true);
      NodeId value = kNoNode;
      while (IsPunct("=")) {
        Attach(assign, Leaf(NodeKind::kOperator), Field::kOperator);
        value = IsKeyword("yield") ? ParseYield() : ParseStarExpressions();
        if (IsPunct("=")) {
          CheckTarget(value, true);
          Attach(assign, value, Field::kLeft);
        }
      }
      Attach(assign, value, Field::kRight);
      Attach(stmt, Close(assign));
      return Close(stmt);
    }
    NodeId stmt = OpenAt(NodeKind::kExpressionStatement, begin);
    Attach(stmt, first);
    return Close(stmt);
  }

  // Rejects assignment to expressions that cannot be bound.
  void CheckTarget(NodeId id, bool allow_multiple) {
    const Node& n = tree_.node(id);
    switch (n.kind) {
      case NodeKind::kIdentifier:
      case NodeKind::kFieldAccess:
      case NodeKind::kSubscript:
        return;
      case NodeKind::kParenthesized:
        CheckTarget(n.children.front(), allow_multiple);
        return;
      case NodeKind::kStarred:
        if (!allow_multiple) break;
        CheckTarget(n.children.front(), allow_multiple);
        return;
      case NodeKind::kTuple:
      case NodeKind::kList:
      case NodeKind::kExpressionList:
        if (!allow_multiple) break;
        for (NodeId c : n.children) CheckTarget(c, allow_multiple);
        return;
      default:
        break;
    }
    throw SyntaxError(n.begin, "cannot assign to expression");
  }

  // ---------------------------------------------------------------------
  // Targets.
  // ---------------------------------------------------------------------

  NodeId ParseTarget() {
    NodeId t = ParseStarOr([this] { return ParseOrExpression(); });
    CheckTarget(t, true);
    return t;
  }

  // Comma-separated targets, as in `for a, b in ...`.
  NodeId ParseTargetList() {
    NodeId first = ParseTarget();
    if (!IsPunct(",")) return first;
    NodeId list = Wrap(NodeKind::kExpressionList, first, Field::kNone);
    while (AcceptPunct(",")) {
      if (IsKeyword("in") || IsPunct("=") || AtStatementEnd()) break;
      Attach(list, ParseTarget());
    }
    return Close(list);
  }

  // ---------------------------------------------------------------------
  // Expressions.
  // ---------------------------------------------------------------------

  template <typename F>
  NodeId ParseStarOr(F inner) {
    if (IsPunct("*")) {
      NodeId id = Open(NodeKind::kStarred);
      ++pos_;
      Attach(id, ParseOrExpression(), Field::kValue);
      return Close(id);
    }
    return inner();
  }

  bool StartsExpression() const {
    const Token& t = Cur();
    switch (t.kind) {
      case TokenKind::kIdentifier:
      case TokenKind::kNumber:
      case TokenKind::kString:
        return true;
      case TokenKind::kKeyword:
        return t.text == "not" || t.text == "lambda" || t.text == "await" ||
               t.text == "True" || t.text == "False" || t.text == "None";
      case TokenKind::kPunct:
        return t.text == "(" || t.text == "[" || t.text == "{" ||
               t.text == "-" || t.text == "+" || t.text == "~" ||
               t.text == "*" || t.text == "...";
      default:
        return false;
    }
  }

  // star_expressions: a bare tuple of (possibly starred) tests.
  NodeId ParseStarExpressions() {
    NodeId first = ParseStarOr([this] { return ParseTest(); });
    if (!IsPunct(",")) return first;
    NodeId list = Wrap(NodeKind::kExpressionList, first, Field::kNone);
    while (AcceptPunct(",")) {
      if (!StartsExpression()) break;
      Attach(list, ParseStarOr([this] { return ParseTest(); }));
    }
    return Close(list);
  }

  NodeId ParseYield() {
    NodeId id = Open(NodeKind::kYield);
    ExpectKeyword("yield");
    if (AcceptKeyword("from")) {
      Attach(id, ParseTest(), Field::kIterable);
    } else if (StartsExpression()) {
      Attach(id, ParseStarExpressions(), Field::kValue);
    }
    return Close(id);
  }

  NodeId ParseNamedExpressionTest() {
    if (IsIdent() && Ahead(1).IsPunct(":=")) {
      NodeId id = Open(NodeKind::kNamedExpr);
      Attach(id, ExpectIdentifier(), Field::kLeft);
      ++pos_;
      Attach(id, ParseTest(), Field::kRight);
      return Close(id);
    }
    return ParseTest();
  }

  NodeId ParseTest() {
    if (IsKeyword("lambda")) return ParseLambda(/*allow_conditional=*/true);
    NodeId body = ParseOrTest();
    if (!IsKeyword("if")) return body;
    // Inside a comprehension `x for x in y if c`, the `if` belongs to the
    // comprehension; that case never reaches here because comprehension
    // iterables are parsed with ParseOrTest.
    NodeId id = Wrap(NodeKind::kConditional, body, Field::kConsequence);
    ++pos_;
    Attach(id, ParseOrTest(), Field::kCondition);
    ExpectKeyword("else");
    Attach(id, ParseTest(), Field::kAlternative);
    return Close(id);
  }

  NodeId ParseTestNoConditional() {
    if (IsKeyword("lambda")) return ParseLambda(false);
    return ParseOrTest();
  }

  NodeId ParseLambda(bool allow_conditional) {
    NodeId id = Open(NodeKind::kLambda);
    ExpectKeyword("lambda");
    Attach(id, ParseParameterList(":", false), Field::kParameters);
    ExpectPunct(":");
    Attach(id, allow_conditional ? ParseTest() : ParseTestNoConditional(),
           Field::kBody);
    return Close(id);
  }

  NodeId ParseOrTest() {
    NodeId lhs = ParseAndTest();
    while (IsKeyword("or")) {
      NodeId id = Wrap(NodeKind::kBinary, lhs, Field::kLeft);
      Attach(id, Leaf(NodeKind::kOperator), Field::kOperator);
      Attach(id, ParseAndTest(), Field::kRight);
      lhs = Close(id);
    }
    return lhs;
  }

  NodeId ParseAndTest() {
    NodeId lhs = ParseNotTest();
    while (IsKeyword("and")) {
      NodeId id = Wrap(NodeKind::kBinary, lhs, Field::kLeft);
      Attach(id, Leaf(NodeKind::kOperator), Field::kOperator);
      Attach(id, ParseNotTest(), Field::kRight);
      lhs = Close(id);
    }
    return lhs;
  }

  NodeId ParseNotTest() {
    if (IsKeyword("not")) {
      NodeId id = Open(NodeKind::kUnary);
      Attach(id, Leaf(NodeKind::kOperator), Field::kOperator);
      Attach(id, ParseNotTest(), Field::kOperand);
      return Close(id);
    }
    return ParseComparison();
  }

  // Number of tokens making up a comparison operator at the cursor.
  size_t ComparisonOperatorLength() const {
    const Token& t = Cur();
    if (t.kind == TokenKind::kPunct) {
      if (t.text == "<" || t.text == ">" || t.text == "==" ||
          t.text == ">=" || t.text == "<=" || t.text == "!=") {
        return 1;
      }
      return 0;
    }
    if (t.IsKeyword("in")) return 1;
    if (t.IsKeyword("not") && Ahead(1).IsKeyword("in")) return 2;
    if (t.IsKeyword("is")) return Ahead(1).IsKeyword("not") ? 2 : 1;
    return 0;
  }

  NodeId ParseComparison() {
    NodeId lhs = ParseOrExpression();
    size_t n = ComparisonOperatorLength();
    if (n == 0) return lhs;
    NodeId id = Wrap(NodeKind::kComparison, lhs, Field::kLeft);
    while (n > 0) {
      Attach(id, LeafSpan(NodeKind::kOperator, pos_, pos_ + n - 1),
             Field::kOperator);
      Attach(id, ParseOrExpression(), Field::kRight);
      n = ComparisonOperatorLength();
    }
    return Close(id);
  }

  static int BinaryPrecedence(const Token& t) {
    if (t.kind != TokenKind::kPunct) return 0;
    std::string_view op = t.text;
    if (op == "|") return 1;
    if (op == "^") return 2;
    if (op == "&") return 3;
    if (op == "<<" || op == ">>") return 4;
    if (op == "+" || op == "-") return 5;
    if (op == "*" || op == "/" || op == "//" || op == "%" || op == "@") {
      return 6;
    }
    return 0;
  }

  NodeId ParseOrExpression() { return ParseBinary(1); }

  NodeId ParseBinary(int min_prec) {
    NodeId lhs = ParseFactor();
    while (true) {
      int prec = BinaryPrecedence(Cur());
      if (prec == 0 || prec < min_prec) return lhs;
      NodeId id = Wrap(NodeKind::kBinary, lhs, Field::kLeft);
      Attach(id, Leaf(NodeKind::kOperator), Field::kOperator);
      Attach(id, ParseBinary(prec + 1), Field::kRight);
      lhs = Close(id);
    }
  }

  NodeId ParseFactor() {
    if (IsPunct("+") || IsPunct("-") || IsPunct("~")) {
      NodeId id = Open(NodeKind::kUnary);
      Attach(id, Leaf(NodeKind::kOperator), Field::kOperator);
      Attach(id, ParseFactor(), Field::kOperand);
      return Close(id);
    }
    return ParsePower();
  }

  NodeId ParsePower() {
    NodeId base;
    if (IsKeyword("await")) {
      base = Open(NodeKind::kAwait);
      ++pos_;
      Attach(base, ParsePostfix(ParseAtom()), Field::kValue);
      Close(base);
    } else {
      base = ParsePostfix(ParseAtom());
    }
    if (!IsPunct("**")) return base;
    NodeId id = Wrap(NodeKind::kBinary, base, Field::kLeft);
    Attach(id, Leaf(NodeKind::kOperator), Field::kOperator);
    Attach(id, ParseFactor(), Field::kRight);
    return Close(id);
  }

  NodeId ParsePostfix(NodeId expr) {
    while (true) {
      if (IsPunct(".")) {
        NodeId id = Wrap(NodeKind::kFieldAccess, expr, Field::kObject);
        ++pos_;
        Attach(id, ExpectIdentifier(), Field::kMember);
        expr = Close(id);
      } else if (IsPunct("(")) {
        NodeId id = Wrap(NodeKind::kCall, expr, Field::kFunction);
        Attach(id, ParseArguments(), Field::kArguments);
        expr = Close(id);
      } else if (IsPunct("[")) {
        NodeId id = Wrap(NodeKind::kSubscript, expr, Field::kObject);
        ++pos_;
        Attach(id, ParseSubscriptList(), Field::kIndex);
        ExpectPunct("]");
        expr = Close(id);
      } else {
        return expr;
      }
    }
  }

  NodeId ParseSubscriptList() {
    NodeId first = ParseSubscriptItem();
    if (!IsPunct(",")) return first;
    NodeId list = Wrap(NodeKind::kExpressionList, first, Field::kNone);
    while (AcceptPunct(",")) {
      if (IsPunct("]")) break;
      Attach(list, ParseSubscriptItem());
    }
    return Close(list);
  }

  NodeId ParseSubscriptItem() {
    if (IsPunct("*")) return ParseStarOr([this] { return ParseTest(); });
    uint32_t begin = Cur().begin;
    NodeId lower = kNoNode;
    if (!IsPunct(":")) {
      lower = ParseNamedExpressionTest();
      if (!IsPunct(":")) return lower;
    }
    NodeId id = OpenAt(NodeKind::kSlice, begin);
    if (lower != kNoNode) Attach(id, lower, Field::kLeft);
    ExpectPunct(":");
    if (!IsPunct(":") && !IsPunct("]") && !IsPunct(",")) {
      Attach(id, ParseTest(), Field::kRight);
    }
    if (AcceptPunct(":")) {
      if (!IsPunct("]") && !IsPunct(",")) {
        Attach(id, ParseTest(), Field::kValue);
      }
    }
    return Close(id);
  }

  NodeId ParseArguments() {
    NodeId id = Open(NodeKind::kArguments);
    ExpectPunct("(");
    while (!IsPunct(")")) {
      if (IsPunct("*") || IsPunct("**")) {
        NodeId s = Open(NodeKind::kStarred);
        Attach(s, Leaf(NodeKind::kOperator), Field::kOperator);
        Attach(s, ParseTest(), Field::kValue);
        Attach(id, Close(s));
      } else if (IsIdent() && Ahead(1).IsPunct("=")) {
        NodeId kw = Open(NodeKind::kKeywordArgument);
        Attach(kw, ExpectIdentifier(), Field::kName);
        ++pos_;
        Attach(kw, ParseTest(), Field::kValue);
        Attach(id, Close(kw));
      } else {
        NodeId arg = ParseNamedExpressionTest();
        if (IsKeyword("for") || (IsKeyword("async") &&
                                 Ahead(1).IsKeyword("for"))) {
          arg = ParseComprehensionTail(arg);
        }
        Attach(id, arg);
      }
      if (!AcceptPunct(",")) break;
    }
    ExpectPunct(")");
    return Close(id);
  }

  NodeId ParseComprehensionTail(NodeId element) {
    NodeId id = Wrap(NodeKind::kComprehension, element, Field::kValue);
    while (IsKeyword("for") || IsKeyword("async") || IsKeyword("if")) {
      if (IsKeyword("if")) {
        NodeId c = Open(NodeKind::kComprehensionIf);
        ++pos_;
        Attach(c, ParseTestNoConditional(), Field::kCondition);
        Attach(id, Close(c));
        continue;
      }
      NodeId f = Open(NodeKind::kComprehensionFor);
      AcceptKeyword("async");
      ExpectKeyword("for");
      Attach(f, ParseTargetList(), Field::kTarget);
      ExpectKeyword("in");
      Attach(f, ParseOrTest(), Field::kIterable);
      Attach(id, Close(f));
    }
    return Close(id);
  }

  NodeId ParseAtom() {
    const Token& t = Cur();
    switch (t.kind) {
      case TokenKind::kIdentifier:
        return Leaf(NodeKind::kIdentifier);
      case TokenKind::kNumber:
        return Leaf(NodeKind::kNumber);
      case TokenKind::kString: {
        if (Ahead(1).kind != TokenKind::kString) {
          return Leaf(NodeKind::kString);
        }
        NodeId id = Open(NodeKind::kConcatenatedString);
        while (Cur().kind == TokenKind::kString) {
          Attach(id, Leaf(NodeKind::kString));
        }
        return Close(id);
      }
      case TokenKind::kKeyword:
        if (t.text == "True" || t.text == "False" || t.text == "None") {
          return Leaf(NodeKind::kKeywordLiteral);
        }
        break;
      case TokenKind::kPunct:
        if (t.text == "...") return Leaf(NodeKind::kKeywordLiteral);
        if (t.text == "(") return ParseParenAtom();
        if (t.text == "[") return ParseListAtom();
        if (t.text == "{") return ParseBraceAtom();
        break;
      default:
        break;
    }
    Fail("expected expression");
  }

  bool AtComprehensionFor() const {
    return IsKeyword("for") ||
           (IsKeyword("async") && Ahead(1).IsKeyword("for"));
  }

  NodeId ParseParenAtom() {
    uint32_t begin = Cur().begin;
    ExpectPunct("(");
    if (AcceptPunct(")")) {
      NodeId id = OpenAt(NodeKind::kTuple, begin);
      return Close(id);
    }
    NodeId first;
    if (IsKeyword("yield")) {
      first = ParseYield();
    } else {
      first = ParseStarOr([this] { return ParseNamedExpressionTest(); });
    }
    if (AtComprehensionFor()) {
      NodeId comp = ParseComprehensionTail(first);
      ExpectPunct(")");
      NodeId id = OpenAt(NodeKind::kParenthesized, begin);
      Attach(id, comp);
      return Close(id);
    }
    if (AcceptPunct(")")) {
      NodeId id = OpenAt(NodeKind::kParenthesized, begin);
      Attach(id, first);
      return Close(id);
    }
    NodeId id = OpenAt(NodeKind::kTuple, begin);
    Attach(id, first);
    while (AcceptPunct(",")) {
      if (IsPunct(")")) break;
      Attach(id, ParseStarOr([this] { return ParseNamedExpressionTest(); }));
    }
    ExpectPunct(")");
    return Close(id);
  }

  NodeId ParseListAtom() {
    uint32_t begin = Cur().begin;
    ExpectPunct("[");
    if (!IsPunct("]")) {
      NodeId first = ParseStarOr([this] { return ParseNamedExpressionTest(); });
      if (AtComprehensionFor()) {
        NodeId comp = ParseComprehensionTail(first);
        ExpectPunct("]");
        NodeId id = OpenAt(NodeKind::kList, begin);
        Attach(id, comp);
        return Close(id);
      }
      NodeId id = OpenAt(NodeKind::kList, begin);
      Attach(id, first);
      while (AcceptPunct(",")) {
        if (IsPunct("]")) break;
        Attach(id, ParseStarOr([this] { return ParseNamedExpressionTest(); }));
      }
      ExpectPunct("]");
      return Close(id);
    }
    ++pos_;
    return Close(OpenAt(NodeKind::kList, begin));
  }

  NodeId ParseDictItem() {
    if (IsPunct("**")) {
      NodeId s = Open(NodeKind::kStarred);
      Attach(s, Leaf(NodeKind::kOperator), Field::kOperator);
      Attach(s, ParseOrExpression(), Field::kValue);
      return Close(s);
    }
    NodeId key = ParseTest();
    NodeId pair = Wrap(NodeKind::kPair, key, Field::kLeft);
    ExpectPunct(":");
    Attach(pair, ParseTest(), Field::kRight);
    return Close(pair);
  }

  NodeId ParseBraceAtom() {
    uint32_t begin = Cur().begin;
    ExpectPunct("{");
    if (AcceptPunct("}")) return Close(OpenAt(NodeKind::kDict, begin));
    bool is_dict = IsPunct("**");
    NodeId first;
    if (!is_dict) {
      first = ParseStarOr([this] { return ParseNamedExpressionTest(); });
      if (IsPunct(":")) {
        is_dict = true;
        NodeId pair = Wrap(NodeKind::kPair, first, Field::kLeft);
        ++pos_;
        Attach(pair, ParseTest(), Field::kRight);
        first = Close(pair);
      }
    } else {
      first = ParseDictItem();
    }
    NodeId id = OpenAt(is_dict ? NodeKind::kDict : NodeKind::kSet, begin);
    if (AtComprehensionFor()) {
      Attach(id, ParseComprehensionTail(first));
      ExpectPunct("}");
      return Close(id);
    }
    Attach(id, first);
    while (AcceptPunct(",")) {
      if (IsPunct("}")) break;
      Attach(id, is_dict ? ParseDictItem()
                         : ParseStarOr([this] {
                             return ParseNamedExpressionTest();
                           }));
    }
    ExpectPunct("}");
    return Close(id);
  }
};

}  // namespace

SyntaxTree ParsePython(std::string_view source) {
  return PythonParser(source).Run();
}

}  // namespace mistforge
