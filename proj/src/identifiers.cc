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
#include <map>
#include <set>
#include <string>
#include <unordered_set>

#include "mistforge/code_model.h"
#include "mistforge/errors.h"
#include "mistforge/lexer.h"

namespace mistforge {
namespace {

// Java methods that commonly implement library contracts even without an
// @Override annotation.
const std::unordered_set<std::string_view>& ContractMethodNames() {
  static const std::unordered_set<std::string_view> kNames = {
      "main",     "toString", "equals",   "hashCode", "compareTo",
      "compare",  "run",      "call",     "get",      "apply",
      "accept",   "test",     "close",    "iterator", "hasNext",
      "next",     "remove",   "clone",    "finalize", "size",
      "isEmpty",  "contains", "add",      "put",      "length",
      "charAt",   "subSequence", "getMessage", "handle", "invoke",
      "actionPerformed", "onCreate", "init",   "destroy", "start",
      "stop",
  };
  return kNames;
}

bool IsDunder(std::string_view name) {
  return name.size() > 4 && name.substr(0, 2) == "__" &&
         name.substr(name.size() - 2) == "__";
}

class Extractor {
 public:
  explicit Extractor(const CodeSnippet& snippet)
      : source_(snippet.source()),
        language_(snippet.language()),
        tree_(snippet.tree()) {}

  IdentifierTable Run() {
    CollectDeclarations();
    CollectSpans();
    return Build();
  }

 private:
  bool IsJava() const { return language_ == Language::kJava; }

  std::string_view Text(NodeId id) const { return tree_.Text(id, source_); }

  NodeId NameOf(NodeId id) const {
    NodeId name = tree_.ChildByField(id, Field::kName);
    if (name == kNoNode || tree_.node(name).kind != NodeKind::kIdentifier) {
      return kNoNode;
    }
    return name;
  }

  void Declare(NodeId name_node, bool member) {
    if (name_node == kNoNode) return;
    std::string name(Text(name_node));
    declared_.insert(name);
    if (member) members_.insert(name);
  }

  void Exclude(std::string_view name) { excluded_.insert(std::string(name)); }

  // The class declaration whose body directly contains id, or kNoNode.
  NodeId EnclosingClassOfMember(NodeId id) const {
    NodeId parent = tree_.node(id).parent;
    if (parent == kNoNode || tree_.node(parent).kind != NodeKind::kBlock) {
      return kNoNode;
    }
    NodeId owner = tree_.node(parent).parent;
    if (owner == kNoNode) return kNoNode;
    NodeKind k = tree_.node(owner).kind;
    if (k == NodeKind::kClassDecl || k == NodeKind::kObjectCreation ||
        k == NodeKind::kEnumConstant) {
      return owner;
    }
    return kNoNode;
  }

  // True when the class derives from a type not declared in the snippet,
  // so its methods may override library methods.
  bool HasExternalBase(NodeId cls) const {
    if (tree_.node(cls).kind != NodeKind::kClassDecl) return true;
    for (NodeId base : tree_.ChildrenByField(cls, Field::kSuperclass)) {
      for (NodeId d : tree_.Descendants(base)) {
        const Node& n = tree_.node(d);
        if (n.kind == NodeKind::kKeywordArgument) return true;
        if (n.kind != NodeKind::kIdentifier) continue;
        if (!IsJava() && Text(d) == "object") continue;
        if (!class_names_.count(std::string(Text(d)))) return true;
      }
    }
    return false;
  }

  bool HasOverrideAnnotation(NodeId method) const {
    NodeId mods = tree_.ChildByField(method, Field::kModifiers);
    if (mods == kNoNode) return false;
    for (NodeId a : tree_.ChildrenByField(mods, Field::kAnnotation)) {
      if (Text(a).find("Override") != std::string_view::npos) return true;
    }
    return false;
  }

  bool HasModifier(NodeId decl, std::string_view word) const {
    NodeId mods = tree_.ChildByField(decl, Field::kModifiers);
    if (mods == kNoNode) return false;
    for (const Token& t : tree_.tokens()) {
      if (t.begin >= tree_.node(mods).end) break;
      if (t.begin >= tree_.node(mods).begin && t.IsKeyword(word)) return true;
    }
    return false;
  }

  // Binds every plain name inside an assignment-like target.
  void DeclareTarget(NodeId target, bool member) {
    const Node& n = tree_.node(target);
    switch (n.kind) {
      case NodeKind::kIdentifier:
        Declare(target, member);
        break;
      case NodeKind::kTuple:
      case NodeKind::kList:
      case NodeKind::kExpressionList:
      case NodeKind::kParenthesized:
      case NodeKind::kStarred:
        for (NodeId c : n.children) DeclareTarget(c, member);
        break;
      default:
        break;
    }
  }

  void CollectDeclarations() {
    std::vector<NodeId> all = tree_.Descendants(tree_.root());
    for (NodeId id : all) {
      if (tree_.node(id).kind == NodeKind::kClassDecl) {
        if (NodeId name = NameOf(id); name != kNoNode) {
          class_names_.insert(std::string(Text(name)));
        }
      }
    }
    for (NodeId id : all) {
      const Node& n = tree_.node(id);
      switch (n.kind) {
        case NodeKind::kClassDecl: {
          NodeId name = NameOf(id);
          Declare(name, EnclosingClassOfMember(id) != kNoNode);
          if (IsJava() && name != kNoNode && HasModifier(id, "public") &&
              EnclosingClassOfMember(id) == kNoNode) {
            Exclude(Text(name));
          }
          break;
        }
        case NodeKind::kMethodDecl:
          DeclareMethod(id);
          break;
        case NodeKind::kVariableDeclarator: {
          NodeId decl = n.parent;
          bool member = decl != kNoNode &&
                        tree_.node(decl).kind == NodeKind::kFieldDecl;
          Declare(NameOf(id), member);
          break;
        }
        case NodeKind::kParameter:
          DeclareParameter(id);
          break;
        case NodeKind::kInstanceof:
          Declare(NameOf(id), false);
          break;
        case NodeKind::kTypeParameters:
        case NodeKind::kEnumConstant:
        case NodeKind::kLabeled:
          if (n.kind == NodeKind::kTypeParameters) {
            for (NodeId c : n.children) {
              if (NodeId name = NameOf(c); name != kNoNode) Exclude(Text(name));
            }
          } else if (NodeId name = NameOf(id); name != kNoNode) {
            Exclude(Text(name));
          }
          break;
        case NodeKind::kPackage:
          excluded_ranges_.push_back({n.begin, n.end});
          break;
        case NodeKind::kImport:
        case NodeKind::kImportFrom:
          excluded_ranges_.push_back({n.begin, n.end});
          if (IsJava()) {
            // Only the simple name at the end of an import is bound.
            NodeId last = n.children.empty() ? kNoNode : n.children.back();
            if (last != kNoNode) Exclude(Text(last));
            break;
          }
          for (NodeId d : tree_.Descendants(id)) {
            if (tree_.node(d).kind == NodeKind::kIdentifier) Exclude(Text(d));
          }
          break;
        case NodeKind::kAssignment: {
          bool member = false;
          NodeId stmt = n.parent;
          if (stmt != kNoNode) member = EnclosingClassOfMember(stmt) != kNoNode;
          for (NodeId left : tree_.ChildrenByField(id, Field::kLeft)) {
            if (!IsJava()) DeclareTarget(left, member);
          }
          break;
        }
        case NodeKind::kForEach:
        case NodeKind::kComprehensionFor:
        case NodeKind::kWithItem:
          if (!IsJava()) {
            NodeId target = tree_.ChildByField(id, Field::kTarget);
            if (target != kNoNode) DeclareTarget(target, false);
          }
          break;
        case NodeKind::kExcept:
          Declare(NameOf(id), false);
          break;
        case NodeKind::kNamedExpr:
          Declare(tree_.ChildByField(id, Field::kLeft), false);
          break;
        case NodeKind::kKeywordArgument:
          if (NodeId name = NameOf(id); name != kNoNode) {
            Exclude(Text(name));
            kwarg_positions_.insert(tree_.node(name).begin);
          }
          break;
        case NodeKind::kAnnotation:
          excluded_ranges_.push_back({n.begin, n.end});
          break;
        default:
          break;
      }
    }
  }

  void DeclareMethod(NodeId id) {
    NodeId name = NameOf(id);
    if (name == kNoNode) return;
    std::string_view text = Text(name);
    NodeId cls = EnclosingClassOfMember(id);
    if (IsJava()) {
      bool constructor = tree_.ChildByField(id, Field::kType) == kNoNode;
      if (constructor) return;
      Declare(name, true);
      if (HasOverrideAnnotation(id) || ContractMethodNames().count(text) ||
          (cls != kNoNode && HasExternalBase(cls))) {
        Exclude(text);
      }
      return;
    }
    Declare(name, cls != kNoNode);
    if (IsDunder(text) || (cls != kNoNode && HasExternalBase(cls))) {
      Exclude(text);
    }
  }

  void DeclareParameter(NodeId id) {
    NodeId name = NameOf(id);
    if (name == kNoNode) return;
    NodeId params = tree_.node(id).parent;
    bool record_component =
        params != kNoNode && tree_.node(params).parent != kNoNode &&
        tree_.node(tree_.node(params).parent).kind == NodeKind::kClassDecl;
    Declare(name, record_component);
    std::string_view text = Text(name);
    if (!IsJava() && (text == "self" || text == "cls")) Exclude(text);
  }

  bool InExcludedRange(uint32_t offset) const {
    for (const ByteRange& r : excluded_ranges_) {
      if (offset >= r.begin && offset < r.end) return true;
    }
    return false;
  }

  void AddSpan(std::string_view name, uint32_t begin) {
    auto& spans = spans_[std::string(name)];
    spans.push_back({begin, begin + static_cast<uint32_t>(name.size())});
  }

  void CollectSpans() {
    const std::vector<Token>& tokens = tree_.tokens();
    for (size_t i = 0; i < tokens.size(); ++i) {
      const Token& t = tokens[i];
      if (t.kind == TokenKind::kString && !IsJava()) {
        ScanFormatString(t);
        continue;
      }
      if (t.kind != TokenKind::kIdentifier) continue;
      if (i > 0 && (tokens[i - 1].IsPunct(".") || tokens[i - 1].IsPunct("::"))) {
        dotted_.insert(std::string(t.text));
        continue;
      }
      if (kwarg_positions_.count(t.begin) || InExcludedRange(t.begin)) {
        continue;
      }
      AddSpan(t.text, t.begin);
    }
  }

  // Finds the identifiers referenced inside replacement fields of an
  // f-string literal.
  void ScanFormatString(const Token& t) {
    std::string_view text = t.text;
    size_t q = 0;
    bool formatted = false;
    while (q < text.size() && text[q] != '"' && text[q] != '\'') {
      if (text[q] == 'f' || text[q] == 'F') formatted = true;
      ++q;
    }
    if (!formatted || q >= text.size()) return;
    size_t quote_len =
        text.size() >= q + 6 && text[q + 1] == text[q] && text[q + 2] == text[q]
            ? 3
            : 1;
    size_t body_begin = q + quote_len;
    size_t body_end = text.size() - quote_len;
    ScanReplacementFields(t.begin, text, body_begin, body_end);
  }

  void ScanReplacementFields(uint32_t base, std::string_view text,
                             size_t begin, size_t end) {
    size_t i = begin;
    while (i < end) {
      if (text[i] == '{') {
        if (i + 1 < end && text[i + 1] == '{') {
          i += 2;
          continue;
        }
        i = ScanField(base, text, i + 1, end);
      } else {
        ++i;
      }
    }
  }

  // Scans one replacement field starting after '{'; returns the offset
  // after its closing '}'.
  size_t ScanField(uint32_t base, std::string_view text, size_t begin,
                   size_t end) {
    int depth = 0;
    char quote = 0;
    size_t i = begin;
    size_t expr_end = end;
    for (; i < end; ++i) {
      char c = text[i];
      if (quote) {
        if (c == quote) quote = 0;
        continue;
      }
      if (c == '\'' || c == '"') {
        quote = c;
      } else if (c == '(' || c == '[' || c == '{') {
        ++depth;
      } else if ((c == ')' || c == ']' || c == '}') && depth > 0) {
        --depth;
      } else if (depth == 0 &&
                 (c == '}' || c == ':' ||
                  (c == '!' && i + 1 < end && text[i + 1] != '='))) {
        expr_end = i;
        break;
      }
    }
    std::string_view expr = text.substr(begin, expr_end - begin);
    size_t last = expr.find_last_not_of(" \t");
    bool self_documenting =
        last != std::string_view::npos && expr[last] == '=' &&
        (last == 0 || std::string_view("=!<>").find(expr[last - 1]) ==
                          std::string_view::npos);
    ScanExpression(base + static_cast<uint32_t>(begin), expr,
                   self_documenting);
    // Skip conversion and format specifier, which may hold nested fields.
    i = expr_end;
    while (i < end) {
      if (text[i] == '{') {
        i = ScanField(base, text, i + 1, end);
        continue;
      }
      if (text[i] == '}') return i + 1;
      ++i;
    }
    return end;
  }

  void ScanExpression(uint32_t offset, std::string_view expr,
                      bool self_documenting) {
    std::vector<Token> tokens;
    try {
      tokens = Lex(expr, Language::kPython, /*tolerant=*/true);
    } catch (const SyntaxError&) {
      return;
    }
    for (size_t i = 0; i < tokens.size(); ++i) {
      const Token& t = tokens[i];
      if (t.kind != TokenKind::kIdentifier) continue;
      if (i > 0 && tokens[i - 1].IsPunct(".")) {
        dotted_.insert(std::string(t.text));
        continue;
      }
      if (i + 1 < tokens.size() && tokens[i + 1].IsPunct("=")) {
        Exclude(t.text);
        continue;
      }
      if (self_documenting) Exclude(t.text);
      AddSpan(t.text, offset + t.begin);
    }
  }

  bool Renameable(const std::string& name) const {
    if (excluded_.count(name)) return false;
    if (members_.count(name) && dotted_.count(name)) return false;
    if (!IsValidIdentifier(name, language_)) return false;
    if (!IsJava() && (IsPythonBuiltin(name) || IsDunder(name))) return false;
    return true;
  }

  IdentifierTable Build() const {
    std::vector<IdentifierEntry> entries;
    for (const std::string& name : declared_) {
      if (!Renameable(name)) continue;
      auto it = spans_.find(name);
      if (it == spans_.end()) continue;
      IdentifierEntry e;
      e.name = name;
      e.spans = it->second;
      std::sort(e.spans.begin(), e.spans.end(),
                [](const ByteRange& a, const ByteRange& b) {
                  return a.begin < b.begin;
                });
      entries.push_back(std::move(e));
    }
    std::sort(entries.begin(), entries.end(),
              [](const IdentifierEntry& a, const IdentifierEntry& b) {
                return a.spans.front().begin < b.spans.front().begin;
              });
    return IdentifierTable(std::move(entries));
  }

  std::string_view source_;
  Language language_;
  const SyntaxTree& tree_;
  std::set<std::string> declared_;
  std::set<std::string> members_;
  std::set<std::string> excluded_;
  std::set<std::string> dotted_;
  std::set<std::string> class_names_;
  std::set<uint32_t> kwarg_positions_;
  std::vector<ByteRange> excluded_ranges_;
  std::map<std::string, std::vector<ByteRange>> spans_;
};

}  // namespace

IdentifierTable ExtractIdentifiers(const CodeSnippet& snippet) {
  if (!snippet.parse_ok()) {
    throw PreconditionError("identifier extraction requires a parsed snippet");
  }
  return Extractor(snippet).Run();
}

}  // namespace mistforge
