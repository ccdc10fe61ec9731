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

#include "mistforge/syntax_tree.h"

#include <algorithm>

namespace mistforge {

NodeId SyntaxTree::Add(NodeKind kind, uint32_t begin, uint32_t end) {
  Node n;
  n.kind = kind;
  n.begin = begin;
  n.end = end;
  nodes_.push_back(std::move(n));
  return static_cast<NodeId>(nodes_.size() - 1);
}

void SyntaxTree::AddChild(NodeId parent, NodeId child, Field field) {
  nodes_[child].parent = parent;
  nodes_[child].field = field;
  nodes_[parent].children.push_back(child);
}

NodeId SyntaxTree::ChildByField(NodeId id, Field field) const {
  for (NodeId c : nodes_[id].children) {
    if (nodes_[c].field == field) return c;
  }
  return kNoNode;
}

std::vector<NodeId> SyntaxTree::ChildrenByField(NodeId id, Field field) const {
  std::vector<NodeId> out;
  for (NodeId c : nodes_[id].children) {
    if (nodes_[c].field == field) out.push_back(c);
  }
  return out;
}

void SyntaxTree::SortChildren() {
  for (Node& n : nodes_) {
    std::stable_sort(n.children.begin(), n.children.end(),
                     [this](NodeId a, NodeId b) {
                       return nodes_[a].begin < nodes_[b].begin;
                     });
  }
}

std::vector<NodeId> SyntaxTree::Descendants(NodeId id) const {
  std::vector<NodeId> out;
  std::vector<NodeId> stack = {id};
  while (!stack.empty()) {
    NodeId cur = stack.back();
    stack.pop_back();
    out.push_back(cur);
    const auto& kids = nodes_[cur].children;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

std::string_view NodeKindName(NodeKind kind) {
  switch (kind) {
#define MISTFORGE_KIND(k) \
  case NodeKind::k:       \
    return #k;
    MISTFORGE_KIND(kModule)
    MISTFORGE_KIND(kBlock)
    MISTFORGE_KIND(kIdentifier)
    MISTFORGE_KIND(kNumber)
    MISTFORGE_KIND(kString)
    MISTFORGE_KIND(kChar)
    MISTFORGE_KIND(kKeywordLiteral)
    MISTFORGE_KIND(kOperator)
    MISTFORGE_KIND(kPackage)
    MISTFORGE_KIND(kImport)
    MISTFORGE_KIND(kImportFrom)
    MISTFORGE_KIND(kAlias)
    MISTFORGE_KIND(kClassDecl)
    MISTFORGE_KIND(kEnumConstant)
    MISTFORGE_KIND(kMethodDecl)
    MISTFORGE_KIND(kParameters)
    MISTFORGE_KIND(kParameter)
    MISTFORGE_KIND(kFieldDecl)
    MISTFORGE_KIND(kLocalVarDecl)
    MISTFORGE_KIND(kVariableDeclarator)
    MISTFORGE_KIND(kAnnotation)
    MISTFORGE_KIND(kModifiers)
    MISTFORGE_KIND(kType)
    MISTFORGE_KIND(kTypeParameters)
    MISTFORGE_KIND(kInitializerBlock)
    MISTFORGE_KIND(kDecorator)
    MISTFORGE_KIND(kExpressionStatement)
    MISTFORGE_KIND(kIf)
    MISTFORGE_KIND(kElif)
    MISTFORGE_KIND(kElse)
    MISTFORGE_KIND(kWhile)
    MISTFORGE_KIND(kFor)
    MISTFORGE_KIND(kForEach)
    MISTFORGE_KIND(kDo)
    MISTFORGE_KIND(kTry)
    MISTFORGE_KIND(kCatch)
    MISTFORGE_KIND(kExcept)
    MISTFORGE_KIND(kFinally)
    MISTFORGE_KIND(kResources)
    MISTFORGE_KIND(kWith)
    MISTFORGE_KIND(kWithItem)
    MISTFORGE_KIND(kSwitch)
    MISTFORGE_KIND(kSwitchBlock)
    MISTFORGE_KIND(kSwitchGroup)
    MISTFORGE_KIND(kSwitchLabel)
    MISTFORGE_KIND(kSwitchRule)
    MISTFORGE_KIND(kReturn)
    MISTFORGE_KIND(kBreak)
    MISTFORGE_KIND(kContinue)
    MISTFORGE_KIND(kThrow)
    MISTFORGE_KIND(kRaise)
    MISTFORGE_KIND(kYield)
    MISTFORGE_KIND(kAssert)
    MISTFORGE_KIND(kSynchronized)
    MISTFORGE_KIND(kLabeled)
    MISTFORGE_KIND(kEmpty)
    MISTFORGE_KIND(kPass)
    MISTFORGE_KIND(kGlobal)
    MISTFORGE_KIND(kNonlocal)
    MISTFORGE_KIND(kDel)
    MISTFORGE_KIND(kExplicitConstructorCall)
    MISTFORGE_KIND(kAssignment)
    MISTFORGE_KIND(kBinary)
    MISTFORGE_KIND(kUnary)
    MISTFORGE_KIND(kUpdate)
    MISTFORGE_KIND(kComparison)
    MISTFORGE_KIND(kConditional)
    MISTFORGE_KIND(kParenthesized)
    MISTFORGE_KIND(kCast)
    MISTFORGE_KIND(kInstanceof)
    MISTFORGE_KIND(kCall)
    MISTFORGE_KIND(kArguments)
    MISTFORGE_KIND(kKeywordArgument)
    MISTFORGE_KIND(kFieldAccess)
    MISTFORGE_KIND(kSubscript)
    MISTFORGE_KIND(kSlice)
    MISTFORGE_KIND(kMethodReference)
    MISTFORGE_KIND(kLambda)
    MISTFORGE_KIND(kObjectCreation)
    MISTFORGE_KIND(kArrayCreation)
    MISTFORGE_KIND(kArrayInitializer)
    MISTFORGE_KIND(kClassLiteral)
    MISTFORGE_KIND(kTuple)
    MISTFORGE_KIND(kList)
    MISTFORGE_KIND(kDict)
    MISTFORGE_KIND(kSet)
    MISTFORGE_KIND(kPair)
    MISTFORGE_KIND(kStarred)
    MISTFORGE_KIND(kComprehension)
    MISTFORGE_KIND(kComprehensionFor)
    MISTFORGE_KIND(kComprehensionIf)
    MISTFORGE_KIND(kAwait)
    MISTFORGE_KIND(kNamedExpr)
    MISTFORGE_KIND(kConcatenatedString)
    MISTFORGE_KIND(kSwitchExpression)
    MISTFORGE_KIND(kExpressionList)
#undef MISTFORGE_KIND
  }
  return "unknown";
}

}  // namespace mistforge
