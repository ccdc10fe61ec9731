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

#ifndef MISTFORGE_SYNTAX_TREE_H_
#define MISTFORGE_SYNTAX_TREE_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mistforge/language.h"
#include "mistforge/lexer.h"

namespace mistforge {

// Concrete syntax node kinds. Java and Python share kinds where the
// construct means the same thing (loops, branches, calls, assignments);
// language-specific kinds carry a prefix-free name describing the construct.
enum class NodeKind : uint8_t {
  kModule,
  kBlock,
  // Leaves.
  kIdentifier,
  kNumber,
  kString,
  kChar,
  kKeywordLiteral,  // true/false/null/None/True/False/this/super
  kOperator,
  // Declarations.
  kPackage,
  kImport,
  kImportFrom,
  kAlias,
  kClassDecl,
  kEnumConstant,
  kMethodDecl,
  kParameters,
  kParameter,
  kFieldDecl,
  kLocalVarDecl,
  kVariableDeclarator,
  kAnnotation,
  kModifiers,
  kType,
  kTypeParameters,
  kInitializerBlock,
  kDecorator,
  // Statements.
  kExpressionStatement,
  kIf,
  kElif,
  kElse,
  kWhile,
  kFor,          // Java classic for
  kForEach,      // Java enhanced for / Python for-in
  kDo,
  kTry,
  kCatch,
  kExcept,
  kFinally,
  kResources,
  kWith,
  kWithItem,
  kSwitch,
  kSwitchBlock,
  kSwitchGroup,
  kSwitchLabel,
  kSwitchRule,
  kReturn,
  kBreak,
  kContinue,
  kThrow,
  kRaise,
  kYield,
  kAssert,
  kSynchronized,
  kLabeled,
  kEmpty,
  kPass,
  kGlobal,
  kNonlocal,
  kDel,
  kExplicitConstructorCall,
  // Expressions.
  kAssignment,
  kBinary,
  kUnary,
  kUpdate,  // ++ / --
  kComparison,
  kConditional,
  kParenthesized,
  kCast,
  kInstanceof,
  kCall,
  kArguments,
  kKeywordArgument,
  kFieldAccess,
  kSubscript,
  kSlice,
  kMethodReference,
  kLambda,
  kObjectCreation,
  kArrayCreation,
  kArrayInitializer,
  kClassLiteral,
  kTuple,
  kList,
  kDict,
  kSet,
  kPair,
  kStarred,
  kComprehension,
  kComprehensionFor,
  kComprehensionIf,
  kAwait,
  kNamedExpr,
  kConcatenatedString,
  kSwitchExpression,
  kExpressionList,
};

// Role of a node relative to its parent.
enum class Field : uint8_t {
  kNone,
  kName,
  kType,
  kBody,
  kCondition,
  kConsequence,
  kAlternative,
  kInit,
  kUpdate,
  kLeft,
  kRight,
  kOperator,
  kOperand,
  kValue,
  kArguments,
  kFunction,
  kObject,
  kMember,
  kTarget,
  kIterable,
  kParameters,
  kIndex,
  kDeclarator,
  kSuperclass,
  kModifiers,
  kAnnotation,
};

using NodeId = int32_t;
constexpr NodeId kNoNode = -1;

struct Node {
  NodeKind kind;
  Field field = Field::kNone;
  uint32_t begin = 0;
  uint32_t end = 0;
  NodeId parent = kNoNode;
  std::vector<NodeId> children;
};

// Arena-allocated concrete syntax tree. Node 0 is the root; byte offsets
// index into the source the tree was parsed from.
class SyntaxTree {
 public:
  SyntaxTree() = default;

  const Node& node(NodeId id) const { return nodes_[id]; }
  Node& mutable_node(NodeId id) { return nodes_[id]; }
  NodeId root() const { return nodes_.empty() ? kNoNode : 0; }
  size_t size() const { return nodes_.size(); }
  const std::vector<Token>& tokens() const { return tokens_; }

  NodeId Add(NodeKind kind, uint32_t begin, uint32_t end);
  void AddChild(NodeId parent, NodeId child, Field field = Field::kNone);
  void SetTokens(std::vector<Token> tokens) { tokens_ = std::move(tokens); }
  // Orders every child list by source position.
  void SortChildren();
  // Drops every node created after the tree had `count` nodes. Used by the
  // parsers to discard a speculative subtree that was never attached.
  void Truncate(size_t count) { nodes_.resize(count); }

  // First child with the given field, or kNoNode.
  NodeId ChildByField(NodeId id, Field field) const;
  std::vector<NodeId> ChildrenByField(NodeId id, Field field) const;

  // Pre-order traversal of the subtree rooted at id (inclusive).
  std::vector<NodeId> Descendants(NodeId id) const;

  std::string_view Text(NodeId id, std::string_view source) const {
    const Node& n = nodes_[id];
    return source.substr(n.begin, n.end - n.begin);
  }

 private:
  std::vector<Node> nodes_;
  std::vector<Token> tokens_;
};

// Parses source with the grammar of the given language. Throws SyntaxError
// on the first syntax error.
SyntaxTree ParseJava(std::string_view source);
SyntaxTree ParsePython(std::string_view source);

std::string_view NodeKindName(NodeKind kind);

}  // namespace mistforge

#endif  // MISTFORGE_SYNTAX_TREE_H_
