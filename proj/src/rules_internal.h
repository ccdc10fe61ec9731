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

#ifndef MISTFORGE_SRC_RULES_INTERNAL_H_
#define MISTFORGE_SRC_RULES_INTERNAL_H_

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mistforge/code_model.h"
#include "mistforge/transform_rules.h"

namespace mistforge::internal {

// Stands in for a fresh variable name inside planned edits.
inline constexpr std::string_view kFreshPlaceholder = "\x01mist_fresh\x01";

struct SitePlan {
  TransformSite site;
  std::vector<TokenEdit> edits;
  int fresh_count = 0;
};

// Coarse value types for the conservative checks the rules need.
enum class ValueType { kUnknown, kInt, kFloat, kStr, kBool };

// Read-only queries over one parsed snippet shared by all rules.
class RuleContext {
 public:
  explicit RuleContext(const CodeSnippet& snippet);

  bool IsJava() const { return language_ == Language::kJava; }
  std::string_view source() const { return source_; }
  const SyntaxTree& tree() const { return tree_; }
  const Node& node(NodeId id) const { return tree_.node(id); }
  NodeKind Kind(NodeId id) const { return tree_.node(id).kind; }
  NodeId Parent(NodeId id) const { return tree_.node(id).parent; }
  std::string_view Text(NodeId id) const { return tree_.Text(id, source_); }
  NodeId Child(NodeId id, Field field) const {
    return tree_.ChildByField(id, field);
  }
  const std::vector<NodeId>& AllNodes() const { return all_; }

  // Layout.
  uint32_t LineStart(uint32_t offset) const;
  // Offset just past the newline ending the line containing offset.
  uint32_t LineEnd(uint32_t offset) const;
  std::string Indent(uint32_t offset) const;
  bool FirstOnLine(uint32_t offset) const;
  // Only whitespace or a comment follows offset on its line.
  bool LastOnLine(uint32_t offset) const;
  bool SameLine(uint32_t a, uint32_t b) const;

  // Structure.
  bool IsStatementList(NodeId id) const;
  bool IsClassBody(NodeId id) const;
  NodeId NextSibling(NodeId id) const;
  NodeId PrevSibling(NodeId id) const;
  bool Contains(NodeId outer, NodeId inner) const {
    return node(inner).begin >= node(outer).begin &&
           node(inner).end <= node(outer).end;
  }
  bool IsLoop(NodeId id) const;
  // Strips any number of enclosing parentheses.
  NodeId Unparen(NodeId id) const;
  // Token-level equality of two subtrees' text.
  bool SameTokens(NodeId a, NodeId b) const;
  // Indices [first, last) of the tokens inside the node.
  std::pair<size_t, size_t> TokenRange(NodeId id) const;
  const std::vector<Token>& tokens() const { return tree_.tokens(); }

  // Names.
  // Identifier tokens within the node (member names after '.' included).
  std::set<std::string> NamesIn(NodeId id) const;
  // Names that are assigned, updated or bound anywhere inside the node.
  std::set<std::string> AssignedIn(NodeId id) const;
  // True if the node contains a call, allocation, yield or await.
  bool HasCall(NodeId id) const;
  // Only identifiers, literals, operators, parentheses and member access.
  bool IsPureExpression(NodeId id) const;
  bool IsLiteral(NodeId id) const;
  // Identifier tokens of the whole snippet.
  const std::set<std::string>& AllNames() const { return all_names_; }
  // Names mentioned by global/nonlocal statements.
  const std::set<std::string>& ScopeEscapes() const { return escapes_; }
  // Offsets of identifier tokens that bind a name (Python).
  bool IsBindingOccurrence(uint32_t offset) const {
    return binding_offsets_.count(offset) > 0;
  }
  // Nearest enclosing function, lambda, class or comprehension (Python) or
  // kNoNode for module scope.
  NodeId ScopeOf(NodeId id) const;
  NodeId ScopeOfOffset(uint32_t offset) const;

  // Types.
  // Declared type text of a Java variable, or "" when unknown/ambiguous.
  std::string JavaDeclaredType(std::string_view name) const;
  std::string JavaExpressionType(NodeId id) const;
  ValueType PythonNameType(std::string_view name, int depth = 0) const;
  ValueType PythonExpressionType(NodeId id, int depth = 0) const;
  std::string JavaLiteralType(NodeId literal) const;

 private:
  void IndexPythonBindings();
  void BindTarget(NodeId target);

  std::string_view source_;
  Language language_;
  const SyntaxTree& tree_;
  std::vector<NodeId> all_;
  std::set<std::string> all_names_;
  std::set<std::string> escapes_;
  std::set<uint32_t> binding_offsets_;
  // Python: (name, value expression) of simple assignments.
  std::vector<std::pair<std::string, NodeId>> py_assignments_;
  std::set<std::string> py_opaque_bindings_;
  mutable std::map<std::string, ValueType> assumed_;
};

void LoopSites(const RuleContext& ctx, std::vector<SitePlan>& out);
void BranchSites(const RuleContext& ctx, std::vector<SitePlan>& out);
void IncDecSites(const RuleContext& ctx, std::vector<SitePlan>& out);
void CompoundSites(const RuleContext& ctx, std::vector<SitePlan>& out);
void ConstSites(const RuleContext& ctx, std::vector<SitePlan>& out);

RuleCounts CountLoops(const RuleContext& ctx);
RuleCounts CountBranches(const RuleContext& ctx);
RuleCounts CountIncDec(const RuleContext& ctx);
RuleCounts CountCompound(const RuleContext& ctx);
RuleCounts CountConst(const RuleContext& ctx);

// Helpers shared by the rule files.
// Offsets of every use of a variable name: identifier tokens that are not
// member names or keyword argument names, plus Python f-strings that
// mention the name (at the string's offset).
std::vector<uint32_t> NameOccurrences(const RuleContext& ctx,
                                      std::string_view name);
bool IsNegationOf(const RuleContext& ctx, NodeId negated, NodeId cond);
// Compound operators covered by the rule, per language.
bool IsCoveredCompoundOperator(std::string_view op, Language language);
TokenEdit Replace(uint32_t begin, uint32_t end, std::string text);

}  // namespace mistforge::internal

#endif  // MISTFORGE_SRC_RULES_INTERNAL_H_
