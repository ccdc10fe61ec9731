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

#include <algorithm>
#include <cctype>

#include "rules_internal.h"

namespace mistforge::internal {
namespace {

constexpr int kMaxTypeDepth = 12;

bool IsFormatString(std::string_view literal) {
  for (char c : literal) {
    if (c == '"' || c == '\'') return false;
    if (c == 'f' || c == 'F') return true;
  }
  return false;
}

bool IsBytesString(std::string_view literal) {
  for (char c : literal) {
    if (c == '"' || c == '\'') return false;
    if (c == 'b' || c == 'B') return true;
  }
  return false;
}

std::string StripSpaces(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r') out += c;
  }
  return out;
}

std::string Unbox(const std::string& type) {
  if (type == "Integer") return "int";
  if (type == "Long") return "long";
  if (type == "Double") return "double";
  if (type == "Float") return "float";
  if (type == "Character") return "char";
  if (type == "Short") return "short";
  if (type == "Byte") return "byte";
  if (type == "Boolean") return "boolean";
  return type;
}

int NumericRank(const std::string& type) {
  if (type == "byte" || type == "short" || type == "char" || type == "int") {
    return 1;
  }
  if (type == "long") return 2;
  if (type == "float") return 3;
  if (type == "double") return 4;
  return 0;
}

std::string RankType(int rank) {
  switch (rank) {
    case 1:
      return "int";
    case 2:
      return "long";
    case 3:
      return "float";
    case 4:
      return "double";
    default:
      return "";
  }
}

}  // namespace

TokenEdit Replace(uint32_t begin, uint32_t end, std::string text) {
  return TokenEdit{ByteRange{begin, end}, std::move(text)};
}

bool IsCoveredCompoundOperator(std::string_view op, Language language) {
  static constexpr std::string_view kShared[] = {
      "+=", "-=", "*=", "/=", "%=", "<<=", ">>=", "&=", "|=", "^="};
  for (auto o : kShared) {
    if (op == o) return true;
  }
  if (language == Language::kJava) return op == ">>>=";
  return op == "//=" || op == "**=";
}

RuleContext::RuleContext(const CodeSnippet& snippet)
    : source_(snippet.source()),
      language_(snippet.language()),
      tree_(snippet.tree()) {
  all_ = tree_.Descendants(tree_.root());
  for (const Token& t : tree_.tokens()) {
    if (t.kind == TokenKind::kIdentifier) all_names_.insert(std::string(t.text));
  }
  if (!IsJava()) IndexPythonBindings();
}

uint32_t RuleContext::LineStart(uint32_t offset) const {
  while (offset > 0 && source_[offset - 1] != '\n') --offset;
  return offset;
}

uint32_t RuleContext::LineEnd(uint32_t offset) const {
  size_t nl = source_.find('\n', offset);
  return nl == std::string_view::npos ? static_cast<uint32_t>(source_.size())
                                      : static_cast<uint32_t>(nl + 1);
}

std::string RuleContext::Indent(uint32_t offset) const {
  uint32_t start = LineStart(offset);
  uint32_t i = start;
  while (i < source_.size() && (source_[i] == ' ' || source_[i] == '\t')) ++i;
  return std::string(source_.substr(start, i - start));
}

bool RuleContext::FirstOnLine(uint32_t offset) const {
  for (uint32_t i = LineStart(offset); i < offset; ++i) {
    if (source_[i] != ' ' && source_[i] != '\t') return false;
  }
  return true;
}

bool RuleContext::LastOnLine(uint32_t offset) const {
  uint32_t i = offset;
  while (i < source_.size() && (source_[i] == ' ' || source_[i] == '\t' ||
                                source_[i] == '\r')) {
    ++i;
  }
  if (i >= source_.size() || source_[i] == '\n') return true;
  if (IsJava()) return source_.substr(i, 2) == "//";
  return source_[i] == '#';
}

bool RuleContext::SameLine(uint32_t a, uint32_t b) const {
  if (a > b) std::swap(a, b);
  return source_.substr(a, b - a).find('\n') == std::string_view::npos;
}

bool RuleContext::IsStatementList(NodeId id) const {
  NodeKind k = Kind(id);
  return k == NodeKind::kBlock || k == NodeKind::kModule ||
         k == NodeKind::kSwitchGroup;
}

bool RuleContext::IsClassBody(NodeId id) const {
  if (Kind(id) != NodeKind::kBlock) return false;
  NodeId owner = Parent(id);
  if (owner == kNoNode) return false;
  NodeKind k = Kind(owner);
  return k == NodeKind::kClassDecl || k == NodeKind::kObjectCreation ||
         k == NodeKind::kEnumConstant;
}

NodeId RuleContext::NextSibling(NodeId id) const {
  NodeId p = Parent(id);
  if (p == kNoNode) return kNoNode;
  const auto& kids = node(p).children;
  auto it = std::find(kids.begin(), kids.end(), id);
  if (it == kids.end() || it + 1 == kids.end()) return kNoNode;
  return *(it + 1);
}

NodeId RuleContext::PrevSibling(NodeId id) const {
  NodeId p = Parent(id);
  if (p == kNoNode) return kNoNode;
  const auto& kids = node(p).children;
  auto it = std::find(kids.begin(), kids.end(), id);
  if (it == kids.end() || it == kids.begin()) return kNoNode;
  return *(it - 1);
}

bool RuleContext::IsLoop(NodeId id) const {
  NodeKind k = Kind(id);
  return k == NodeKind::kFor || k == NodeKind::kForEach ||
         k == NodeKind::kWhile || k == NodeKind::kDo;
}

NodeId RuleContext::Unparen(NodeId id) const {
  while (id != kNoNode && Kind(id) == NodeKind::kParenthesized &&
         node(id).children.size() == 1) {
    id = node(id).children.front();
  }
  return id;
}

std::pair<size_t, size_t> RuleContext::TokenRange(NodeId id) const {
  const auto& toks = tree_.tokens();
  uint32_t b = node(id).begin;
  uint32_t e = node(id).end;
  auto first = std::lower_bound(
      toks.begin(), toks.end(), b,
      [](const Token& t, uint32_t off) { return t.begin < off; });
  auto last = std::lower_bound(
      first, toks.end(), e,
      [](const Token& t, uint32_t off) { return t.begin < off; });
  return {static_cast<size_t>(first - toks.begin()),
          static_cast<size_t>(last - toks.begin())};
}

bool RuleContext::SameTokens(NodeId a, NodeId b) const {
  auto significant = [this](NodeId id) {
    std::vector<std::string_view> out;
    auto [first, last] = TokenRange(id);
    for (size_t i = first; i < last; ++i) {
      const Token& t = tokens()[i];
      if (t.kind == TokenKind::kNewline || t.kind == TokenKind::kIndent ||
          t.kind == TokenKind::kDedent) {
        continue;
      }
      out.push_back(t.text);
    }
    return out;
  };
  return significant(a) == significant(b);
}

std::set<std::string> RuleContext::NamesIn(NodeId id) const {
  std::set<std::string> out;
  auto [first, last] = TokenRange(id);
  for (size_t i = first; i < last; ++i) {
    if (tokens()[i].kind == TokenKind::kIdentifier) {
      out.insert(std::string(tokens()[i].text));
    }
  }
  return out;
}

std::set<std::string> RuleContext::AssignedIn(NodeId id) const {
  std::set<std::string> out;
  // Adds the bound name, or for member and element targets the root object
  // and the member name.
  auto add_target = [&](auto&& self, NodeId t) -> void {
    if (t == kNoNode) return;
    switch (Kind(t)) {
      case NodeKind::kIdentifier:
        out.insert(std::string(Text(t)));
        break;
      case NodeKind::kFieldAccess:
      case NodeKind::kSubscript:
        for (NodeId c : node(t).children) {
          if (Kind(c) == NodeKind::kIdentifier) {
            out.insert(std::string(Text(c)));
          } else {
            self(self, c);
          }
        }
        break;
      case NodeKind::kTuple:
      case NodeKind::kList:
      case NodeKind::kExpressionList:
      case NodeKind::kParenthesized:
      case NodeKind::kStarred:
        for (NodeId c : node(t).children) self(self, c);
        break;
      default:
        break;
    }
  };
  for (NodeId d : tree_.Descendants(id)) {
    switch (Kind(d)) {
      case NodeKind::kAssignment:
        for (NodeId left : tree_.ChildrenByField(d, Field::kLeft)) {
          add_target(add_target, left);
        }
        break;
      case NodeKind::kUpdate:
        add_target(add_target, Child(d, Field::kOperand));
        break;
      case NodeKind::kForEach:
      case NodeKind::kComprehensionFor:
      case NodeKind::kWithItem:
      case NodeKind::kDel:
        add_target(add_target, Child(d, Field::kTarget));
        break;
      case NodeKind::kNamedExpr:
        add_target(add_target, Child(d, Field::kLeft));
        break;
      case NodeKind::kVariableDeclarator:
      case NodeKind::kParameter:
      case NodeKind::kMethodDecl:
      case NodeKind::kClassDecl:
      case NodeKind::kExcept:
      case NodeKind::kInstanceof:
        add_target(add_target, Child(d, Field::kName));
        break;
      case NodeKind::kImport:
      case NodeKind::kImportFrom:
      case NodeKind::kGlobal:
      case NodeKind::kNonlocal: {
        std::set<std::string> names = NamesIn(d);
        out.insert(names.begin(), names.end());
        break;
      }
      default:
        break;
    }
  }
  return out;
}

bool RuleContext::HasCall(NodeId id) const {
  for (NodeId d : tree_.Descendants(id)) {
    switch (Kind(d)) {
      case NodeKind::kCall:
      case NodeKind::kObjectCreation:
      case NodeKind::kArrayCreation:
      case NodeKind::kExplicitConstructorCall:
      case NodeKind::kYield:
      case NodeKind::kAwait:
        return true;
      case NodeKind::kString:
        if (!IsJava() && IsFormatString(Text(d))) return true;
        break;
      default:
        break;
    }
  }
  return false;
}

bool RuleContext::IsPureExpression(NodeId id) const {
  for (NodeId d : tree_.Descendants(id)) {
    switch (Kind(d)) {
      case NodeKind::kIdentifier:
      case NodeKind::kNumber:
      case NodeKind::kChar:
      case NodeKind::kKeywordLiteral:
      case NodeKind::kOperator:
      case NodeKind::kBinary:
      case NodeKind::kComparison:
      case NodeKind::kParenthesized:
      case NodeKind::kFieldAccess:
      case NodeKind::kSubscript:
      case NodeKind::kConditional:
      case NodeKind::kConcatenatedString:
        break;
      case NodeKind::kUnary:
        break;
      case NodeKind::kString:
        if (!IsJava() && IsFormatString(Text(d))) return false;
        break;
      default:
        return false;
    }
  }
  return true;
}

bool RuleContext::IsLiteral(NodeId id) const {
  NodeKind k = Kind(id);
  if (k == NodeKind::kNumber) return true;
  if (k != NodeKind::kString) return false;
  if (IsJava()) return true;
  std::string_view text = Text(id);
  return !IsFormatString(text) && !IsBytesString(text);
}

void RuleContext::BindTarget(NodeId t) {
  if (t == kNoNode) return;
  switch (Kind(t)) {
    case NodeKind::kIdentifier:
      binding_offsets_.insert(node(t).begin);
      break;
    case NodeKind::kTuple:
    case NodeKind::kList:
    case NodeKind::kExpressionList:
    case NodeKind::kParenthesized:
    case NodeKind::kStarred:
      for (NodeId c : node(t).children) {
        if (Kind(c) == NodeKind::kIdentifier) {
          py_opaque_bindings_.insert(std::string(Text(c)));
        }
        BindTarget(c);
      }
      break;
    default:
      break;
  }
}

void RuleContext::IndexPythonBindings() {
  auto opaque = [this](NodeId name) {
    if (name == kNoNode || Kind(name) != NodeKind::kIdentifier) return;
    binding_offsets_.insert(node(name).begin);
    py_opaque_bindings_.insert(std::string(Text(name)));
  };
  for (NodeId d : all_) {
    switch (Kind(d)) {
      case NodeKind::kAssignment: {
        auto lefts = tree_.ChildrenByField(d, Field::kLeft);
        NodeId right = Child(d, Field::kRight);
        NodeId op = Child(d, Field::kOperator);
        bool augmented = op != kNoNode && Text(op) != "=";
        for (NodeId left : lefts) {
          if (!augmented) BindTarget(left);
          if (Kind(left) == NodeKind::kIdentifier && !augmented) {
            if (right == kNoNode) {
              py_opaque_bindings_.insert(std::string(Text(left)));
            } else {
              py_assignments_.emplace_back(std::string(Text(left)), right);
            }
          }
        }
        break;
      }
      case NodeKind::kForEach:
      case NodeKind::kComprehensionFor: {
        NodeId target = Child(d, Field::kTarget);
        NodeId iter = Child(d, Field::kIterable);
        BindTarget(target);
        bool range_loop = false;
        if (target != kNoNode && Kind(target) == NodeKind::kIdentifier &&
            iter != kNoNode && Kind(iter) == NodeKind::kCall) {
          NodeId fn = Child(iter, Field::kFunction);
          range_loop = fn != kNoNode && Text(fn) == "range";
        }
        if (range_loop) {
          // Recorded with the loop node itself as the value expression.
          py_assignments_.emplace_back(std::string(Text(target)), d);
        } else if (target != kNoNode &&
                   Kind(target) == NodeKind::kIdentifier) {
          py_opaque_bindings_.insert(std::string(Text(target)));
        }
        break;
      }
      case NodeKind::kWithItem:
      case NodeKind::kDel: {
        NodeId target = Child(d, Field::kTarget);
        if (Kind(d) == NodeKind::kWithItem) BindTarget(target);
        if (target != kNoNode && Kind(target) == NodeKind::kIdentifier) {
          py_opaque_bindings_.insert(std::string(Text(target)));
        }
        break;
      }
      case NodeKind::kNamedExpr:
        opaque(Child(d, Field::kLeft));
        break;
      case NodeKind::kParameter:
      case NodeKind::kMethodDecl:
      case NodeKind::kClassDecl:
      case NodeKind::kExcept:
        opaque(Child(d, Field::kName));
        break;
      case NodeKind::kImport:
      case NodeKind::kImportFrom:
        for (NodeId c : tree_.Descendants(d)) {
          if (Kind(c) == NodeKind::kIdentifier) opaque(c);
        }
        break;
      case NodeKind::kGlobal:
      case NodeKind::kNonlocal:
        for (NodeId c : node(d).children) {
          escapes_.insert(std::string(Text(c)));
          py_opaque_bindings_.insert(std::string(Text(c)));
        }
        break;
      default:
        break;
    }
  }
}

NodeId RuleContext::ScopeOf(NodeId id) const {
  for (NodeId p = Parent(id); p != kNoNode; p = Parent(p)) {
    NodeKind k = Kind(p);
    if (k == NodeKind::kMethodDecl || k == NodeKind::kLambda ||
        k == NodeKind::kClassDecl || k == NodeKind::kComprehension) {
      return p;
    }
  }
  return kNoNode;
}

NodeId RuleContext::ScopeOfOffset(uint32_t offset) const {
  NodeId best = kNoNode;
  for (NodeId d : all_) {
    NodeKind k = Kind(d);
    if (k != NodeKind::kMethodDecl && k != NodeKind::kLambda &&
        k != NodeKind::kClassDecl && k != NodeKind::kComprehension) {
      continue;
    }
    if (offset >= node(d).begin && offset < node(d).end &&
        (best == kNoNode || node(d).begin >= node(best).begin)) {
      best = d;
    }
  }
  return best;
}

std::string RuleContext::JavaLiteralType(NodeId literal) const {
  std::string_view text = Text(literal);
  if (Kind(literal) == NodeKind::kString) return "String";
  if (Kind(literal) == NodeKind::kChar) return "char";
  if (Kind(literal) != NodeKind::kNumber || text.empty()) return "";
  char last = text.back();
  if (last == 'L' || last == 'l') return "long";
  bool hex = text.size() > 1 && text[0] == '0' &&
             (text[1] == 'x' || text[1] == 'X');
  if (hex) {
    return text.find_first_of("pP") != std::string_view::npos ? "double"
                                                               : "int";
  }
  if (last == 'f' || last == 'F') return "float";
  if (last == 'd' || last == 'D') return "double";
  if (text.find_first_of(".eE") != std::string_view::npos) return "double";
  return "int";
}

std::string RuleContext::JavaDeclaredType(std::string_view name) const {
  std::string found;
  bool any = false;
  for (NodeId d : all_) {
    NodeKind k = Kind(d);
    std::string type;
    if (k == NodeKind::kVariableDeclarator) {
      NodeId n = Child(d, Field::kName);
      if (n == kNoNode || Text(n) != name) continue;
      NodeId decl = Parent(d);
      NodeId t = Child(decl, Field::kType);
      if (t == kNoNode) return "";
      type = StripSpaces(Text(t));
      auto [first, last] = TokenRange(n);
      if (last < tokens().size() && tokens()[last].IsPunct("[")) type += "[]";
      if (type == "var") {
        NodeId init = Child(d, Field::kValue);
        type = init == kNoNode ? "" : JavaExpressionType(init);
      }
    } else if (k == NodeKind::kParameter) {
      NodeId n = Child(d, Field::kName);
      if (n == kNoNode || Text(n) != name) continue;
      NodeId t = Child(d, Field::kType);
      if (t == kNoNode) return "";
      type = StripSpaces(Text(t));
      if (Text(d).find("...") != std::string_view::npos) type += "[]";
    } else {
      continue;
    }
    if (type.empty()) return "";
    if (any && type != found) return "";
    found = type;
    any = true;
  }
  return found;
}

std::string RuleContext::JavaExpressionType(NodeId id) const {
  if (id == kNoNode) return "";
  switch (Kind(id)) {
    case NodeKind::kNumber:
    case NodeKind::kString:
    case NodeKind::kChar:
      return JavaLiteralType(id);
    case NodeKind::kKeywordLiteral:
      return Text(id) == "true" || Text(id) == "false" ? "boolean" : "";
    case NodeKind::kIdentifier:
      return JavaDeclaredType(Text(id));
    case NodeKind::kParenthesized:
      return JavaExpressionType(Unparen(id));
    case NodeKind::kCast:
      return StripSpaces(Text(Child(id, Field::kType)));
    case NodeKind::kFieldAccess: {
      NodeId member = Child(id, Field::kMember);
      return member != kNoNode && Text(member) == "length" ? "int" : "";
    }
    case NodeKind::kSubscript: {
      std::string array = JavaExpressionType(node(id).children.front());
      if (array.size() < 2 || array.substr(array.size() - 2) != "[]") return "";
      return array.substr(0, array.size() - 2);
    }
    case NodeKind::kUnary: {
      std::string_view op = Text(Child(id, Field::kOperator));
      std::string t = Unbox(JavaExpressionType(Child(id, Field::kOperand)));
      if (op == "!") return "boolean";
      return RankType(NumericRank(t));
    }
    case NodeKind::kBinary: {
      std::string_view op = Text(Child(id, Field::kOperator));
      std::string l = Unbox(JavaExpressionType(Child(id, Field::kLeft)));
      std::string r = Unbox(JavaExpressionType(Child(id, Field::kRight)));
      if (op == "==" || op == "!=" || op == "<" || op == ">" || op == "<=" ||
          op == ">=" || op == "&&" || op == "||") {
        return "boolean";
      }
      if (op == "+" && (l == "String" || r == "String")) return "String";
      if (op == "<<" || op == ">>" || op == ">>>") {
        return RankType(NumericRank(l));
      }
      if ((op == "&" || op == "|" || op == "^") && l == "boolean" &&
          r == "boolean") {
        return "boolean";
      }
      int lr = NumericRank(l);
      int rr = NumericRank(r);
      if (lr == 0 || rr == 0) return "";
      return RankType(std::max(lr, rr));
    }
    case NodeKind::kConditional: {
      std::string a = JavaExpressionType(Child(id, Field::kConsequence));
      std::string b = JavaExpressionType(Child(id, Field::kAlternative));
      return a == b ? a : "";
    }
    default:
      return "";
  }
}

ValueType RuleContext::PythonNameType(std::string_view name, int depth) const {
  if (depth > kMaxTypeDepth) return ValueType::kUnknown;
  std::string key(name);
  if (auto it = assumed_.find(key); it != assumed_.end()) return it->second;
  if (py_opaque_bindings_.count(key)) return ValueType::kUnknown;
  ValueType result = ValueType::kUnknown;
  bool any = false;
  auto merge = [&](ValueType t) {
    if (t == ValueType::kUnknown) return false;
    if (!any || t == result) {
      result = t;
      any = true;
      return true;
    }
    bool numeric = (t == ValueType::kInt || t == ValueType::kFloat) &&
                   (result == ValueType::kInt || result == ValueType::kFloat);
    if (!numeric) return false;
    result = ValueType::kFloat;
    return true;
  };
  // Values that mention the name itself are checked afterwards under the
  // type the other bindings give it.
  std::vector<NodeId> self_referencing;
  for (const auto& [n, value] : py_assignments_) {
    if (n != key) continue;
    if (Kind(value) == NodeKind::kForEach) {
      if (!merge(ValueType::kInt)) return ValueType::kUnknown;
      continue;
    }
    if (NamesIn(value).count(key)) {
      self_referencing.push_back(value);
      continue;
    }
    if (!merge(PythonExpressionType(value, depth + 1))) {
      return ValueType::kUnknown;
    }
  }
  if (!any) return ValueType::kUnknown;
  for (NodeId value : self_referencing) {
    assumed_[key] = result;
    ValueType t = PythonExpressionType(value, depth + 1);
    assumed_.erase(key);
    if (t != result) return ValueType::kUnknown;
  }
  return result;
}

ValueType RuleContext::PythonExpressionType(NodeId id, int depth) const {
  if (id == kNoNode || depth > kMaxTypeDepth) return ValueType::kUnknown;
  std::string_view text = Text(id);
  switch (Kind(id)) {
    case NodeKind::kNumber: {
      bool hex = text.size() > 1 && text[0] == '0' &&
                 std::string_view("xXoObB").find(text[1]) !=
                     std::string_view::npos;
      if (text.find_first_of("jJ") != std::string_view::npos) {
        return ValueType::kUnknown;
      }
      if (!hex && text.find_first_of(".eE") != std::string_view::npos) {
        return ValueType::kFloat;
      }
      return ValueType::kInt;
    }
    case NodeKind::kString:
      return IsBytesString(text) ? ValueType::kUnknown : ValueType::kStr;
    case NodeKind::kConcatenatedString:
      return ValueType::kStr;
    case NodeKind::kKeywordLiteral:
      return text == "True" || text == "False" ? ValueType::kBool
                                               : ValueType::kUnknown;
    case NodeKind::kIdentifier:
      return PythonNameType(text, depth + 1);
    case NodeKind::kParenthesized:
      return PythonExpressionType(Unparen(id), depth + 1);
    case NodeKind::kComparison:
      return ValueType::kBool;
    case NodeKind::kUnary: {
      std::string_view op = Text(Child(id, Field::kOperator));
      if (op == "not") return ValueType::kBool;
      ValueType t = PythonExpressionType(Child(id, Field::kOperand), depth + 1);
      if (t == ValueType::kBool) return ValueType::kInt;
      if (op == "~" && t != ValueType::kInt) return ValueType::kUnknown;
      return t == ValueType::kStr ? ValueType::kUnknown : t;
    }
    case NodeKind::kBinary: {
      std::string_view op = Text(Child(id, Field::kOperator));
      ValueType l = PythonExpressionType(Child(id, Field::kLeft), depth + 1);
      ValueType r = PythonExpressionType(Child(id, Field::kRight), depth + 1);
      if (l == ValueType::kUnknown || r == ValueType::kUnknown) {
        return ValueType::kUnknown;
      }
      if (op == "and" || op == "or") {
        return l == r ? l : ValueType::kUnknown;
      }
      auto intish = [](ValueType t) {
        return t == ValueType::kInt || t == ValueType::kBool;
      };
      auto numeric = [&](ValueType t) {
        return intish(t) || t == ValueType::kFloat;
      };
      if (l == ValueType::kStr || r == ValueType::kStr) {
        if (op == "+" && l == r) return ValueType::kStr;
        if (op == "*" && (intish(l) || intish(r))) return ValueType::kStr;
        if (op == "%" && l == ValueType::kStr) return ValueType::kStr;
        return ValueType::kUnknown;
      }
      if (!numeric(l) || !numeric(r)) return ValueType::kUnknown;
      if (op == "/") return ValueType::kFloat;
      if (op == "**") {
        return l == ValueType::kFloat || r == ValueType::kFloat
                   ? ValueType::kFloat
                   : ValueType::kUnknown;  // negative exponents give floats
      }
      if (l == ValueType::kFloat || r == ValueType::kFloat) {
        if (op == "<<" || op == ">>" || op == "&" || op == "|" ||
            op == "^") {
          return ValueType::kUnknown;
        }
        return ValueType::kFloat;
      }
      return ValueType::kInt;
    }
    case NodeKind::kCall: {
      NodeId fn = Child(id, Field::kFunction);
      if (fn == kNoNode || Kind(fn) != NodeKind::kIdentifier) {
        return ValueType::kUnknown;
      }
      std::string name(Text(fn));
      if (py_opaque_bindings_.count(name)) return ValueType::kUnknown;
      for (const auto& [n, v] : py_assignments_) {
        if (n == name) return ValueType::kUnknown;
      }
      if (name == "len" || name == "int" || name == "ord") {
        return ValueType::kInt;
      }
      if (name == "float") return ValueType::kFloat;
      if (name == "str" || name == "repr" || name == "chr") {
        return ValueType::kStr;
      }
      if (name == "bool" || name == "isinstance") return ValueType::kBool;
      return ValueType::kUnknown;
    }
    case NodeKind::kConditional: {
      ValueType a =
          PythonExpressionType(Child(id, Field::kConsequence), depth + 1);
      ValueType b =
          PythonExpressionType(Child(id, Field::kAlternative), depth + 1);
      return a == b ? a : ValueType::kUnknown;
    }
    default:
      return ValueType::kUnknown;
  }
}

std::vector<uint32_t> NameOccurrences(const RuleContext& ctx,
                                      std::string_view name) {
  std::set<uint32_t> keyword_names;
  for (NodeId d : ctx.AllNodes()) {
    if (ctx.Kind(d) == NodeKind::kKeywordArgument) {
      NodeId n = ctx.Child(d, Field::kName);
      if (n != kNoNode) keyword_names.insert(ctx.node(n).begin);
    }
  }
  std::vector<uint32_t> out;
  const auto& toks = ctx.tokens();
  for (size_t i = 0; i < toks.size(); ++i) {
    const Token& t = toks[i];
    if (t.kind == TokenKind::kString && !ctx.IsJava() &&
        IsFormatString(t.text)) {
      size_t at = t.text.find(name);
      while (at != std::string_view::npos) {
        auto word = [](char c) {
          return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
        };
        bool left = at == 0 || !word(t.text[at - 1]);
        bool right = at + name.size() >= t.text.size() ||
                     !word(t.text[at + name.size()]);
        if (left && right) {
          out.push_back(t.begin);
          break;
        }
        at = t.text.find(name, at + 1);
      }
      continue;
    }
    if (t.kind != TokenKind::kIdentifier || t.text != name) continue;
    if (i > 0 && (toks[i - 1].IsPunct(".") || toks[i - 1].IsPunct("::"))) {
      continue;
    }
    if (keyword_names.count(t.begin)) continue;
    out.push_back(t.begin);
  }
  return out;
}

bool IsNegationOf(const RuleContext& ctx, NodeId negated, NodeId cond) {
  NodeId n = ctx.Unparen(negated);
  if (n == kNoNode || ctx.Kind(n) != NodeKind::kUnary) return false;
  std::string_view op = ctx.Text(ctx.Child(n, Field::kOperator));
  if (op != (ctx.IsJava() ? "!" : "not")) return false;
  NodeId operand = ctx.Unparen(ctx.Child(n, Field::kOperand));
  NodeId base = ctx.Unparen(cond);
  return operand != kNoNode && base != kNoNode && ctx.SameTokens(operand, base);
}

}  // namespace mistforge::internal
