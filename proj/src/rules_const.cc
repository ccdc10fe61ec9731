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

#include "rules_internal.h"

namespace mistforge::internal {
namespace {

bool IsConstLiteral(const RuleContext& ctx, NodeId id) {
  if (!ctx.IsLiteral(id)) return false;
  if (!ctx.IsJava()) return true;
  std::string t = ctx.JavaLiteralType(id);
  return t == "String" || t == "int" || t == "long" || t == "float" ||
         t == "double";
}

// The call a direct argument belongs to, or kNoNode.
NodeId CallOfArgument(const RuleContext& ctx, NodeId arg) {
  NodeId args = ctx.Parent(arg);
  if (args == kNoNode || ctx.Kind(args) != NodeKind::kArguments) {
    return kNoNode;
  }
  NodeId call = ctx.Parent(args);
  if (call == kNoNode || ctx.Kind(call) != NodeKind::kCall) return kNoNode;
  return call;
}

// Statement whose whole expression is the call.
NodeId CallStatement(const RuleContext& ctx, NodeId call) {
  NodeId stmt = ctx.Parent(call);
  if (stmt == kNoNode || ctx.Kind(stmt) != NodeKind::kExpressionStatement) {
    return kNoNode;
  }
  return stmt;
}

bool InPlainStatementList(const RuleContext& ctx, NodeId stmt) {
  NodeId block = ctx.Parent(stmt);
  return block != kNoNode && ctx.IsStatementList(block) &&
         !ctx.IsClassBody(block) && ctx.FirstOnLine(ctx.node(stmt).begin);
}

struct NamedConstant {
  NodeId decl = kNoNode;
  std::string name;
  NodeId value = kNoNode;
};

bool MatchNamedConstant(const RuleContext& ctx, NodeId id, NamedConstant& m) {
  if (ctx.IsJava()) {
    if (ctx.Kind(id) != NodeKind::kLocalVarDecl) return false;
    NodeId mods = ctx.Child(id, Field::kModifiers);
    if (mods != kNoNode && ctx.Text(mods) != "final") return false;
    auto decls = ctx.tree().ChildrenByField(id, Field::kDeclarator);
    if (decls.size() != 1) return false;
    NodeId value = ctx.Child(decls[0], Field::kValue);
    NodeId type = ctx.Child(id, Field::kType);
    if (value == kNoNode || !IsConstLiteral(ctx, value) ||
        ctx.Text(type) != ctx.JavaLiteralType(value)) {
      return false;
    }
    // Reject array declarators such as `int a[] = ...`.
    NodeId name = ctx.Child(decls[0], Field::kName);
    auto [first, last] = ctx.TokenRange(name);
    if (last < ctx.tokens().size() && ctx.tokens()[last].IsPunct("[")) {
      return false;
    }
    m = {id, std::string(ctx.Text(name)), value};
    return true;
  }
  if (ctx.Kind(id) != NodeKind::kExpressionStatement) return false;
  NodeId assign = ctx.node(id).children.front();
  if (ctx.Kind(assign) != NodeKind::kAssignment) return false;
  auto lefts = ctx.tree().ChildrenByField(assign, Field::kLeft);
  NodeId op = ctx.Child(assign, Field::kOperator);
  NodeId value = ctx.Child(assign, Field::kRight);
  if (lefts.size() != 1 || ctx.Kind(lefts[0]) != NodeKind::kIdentifier ||
      op == kNoNode || ctx.Text(op) != "=" ||
      ctx.Child(assign, Field::kType) != kNoNode || value == kNoNode ||
      !IsConstLiteral(ctx, value)) {
    return false;
  }
  m = {id, std::string(ctx.Text(lefts[0])), value};
  return true;
}

// Direct call arguments in the statement that are the bare name.
std::vector<NodeId> ArgumentUses(const RuleContext& ctx, NodeId stmt,
                                 const std::string& name) {
  std::vector<NodeId> out;
  for (NodeId d : ctx.tree().Descendants(stmt)) {
    if (ctx.Kind(d) == NodeKind::kIdentifier && ctx.Text(d) == name &&
        CallOfArgument(ctx, d) != kNoNode) {
      out.push_back(d);
    }
  }
  return out;
}

void LiteralToConstant(const RuleContext& ctx, NodeId lit,
                       std::vector<SitePlan>& out) {
  if (!IsConstLiteral(ctx, lit)) return;
  NodeId call = CallOfArgument(ctx, lit);
  if (call == kNoNode) return;
  NodeId stmt = CallStatement(ctx, call);
  if (stmt == kNoNode || !InPlainStatementList(ctx, stmt)) return;
  std::string fresh(kFreshPlaceholder);
  std::string ind = ctx.Indent(ctx.node(stmt).begin);
  std::string decl = ctx.IsJava() ? ctx.JavaLiteralType(lit) + " " + fresh +
                                        " = " + std::string(ctx.Text(lit)) +
                                        ";\n" + ind
                                  : fresh + " = " +
                                        std::string(ctx.Text(lit)) + "\n" +
                                        ind;
  SitePlan plan;
  plan.site = {TransformRule::kConstToVar, Direction::kBtoA,
               ByteRange{ctx.node(lit).begin, ctx.node(lit).end}, 0};
  plan.edits.push_back(
      Replace(ctx.node(stmt).begin, ctx.node(stmt).begin, decl));
  plan.edits.push_back(
      Replace(ctx.node(lit).begin, ctx.node(lit).end, fresh));
  plan.fresh_count = 1;
  out.push_back(std::move(plan));
}

// The named constant and the single use it can be folded into.
NodeId FoldableUse(const RuleContext& ctx, const NamedConstant& m,
                   bool strict) {
  NodeId next = ctx.NextSibling(m.decl);
  if (next == kNoNode || ctx.Kind(next) != NodeKind::kExpressionStatement) {
    return kNoNode;
  }
  auto uses = ArgumentUses(ctx, next, m.name);
  if (uses.size() != 1) return kNoNode;
  if (!strict) return uses[0];
  NodeId block = ctx.Parent(m.decl);
  if (!ctx.IsStatementList(block) || ctx.IsClassBody(block)) return kNoNode;
  if (!ctx.FirstOnLine(ctx.node(m.decl).begin) ||
      !ctx.LastOnLine(ctx.node(m.decl).end) ||
      ctx.LineEnd(ctx.node(m.decl).end) !=
          ctx.LineStart(ctx.node(next).begin) ||
      !ctx.FirstOnLine(ctx.node(next).begin)) {
    return kNoNode;
  }
  if (ctx.ScopeEscapes().count(m.name)) return kNoNode;
  if (NameOccurrences(ctx, m.name).size() != 2) return kNoNode;
  NodeId call = CallOfArgument(ctx, uses[0]);
  if (CallStatement(ctx, call) != next) return kNoNode;
  return uses[0];
}

void ConstantToLiteral(const RuleContext& ctx, NodeId id,
                       std::vector<SitePlan>& out) {
  NamedConstant m;
  if (!MatchNamedConstant(ctx, id, m)) return;
  NodeId use = FoldableUse(ctx, m, /*strict=*/true);
  if (use == kNoNode) return;
  SitePlan plan;
  plan.site = {TransformRule::kConstToVar, Direction::kAtoB,
               ByteRange{ctx.node(id).begin, ctx.node(id).end}, 0};
  plan.edits.push_back(Replace(ctx.LineStart(ctx.node(id).begin),
                               ctx.LineEnd(ctx.node(id).end), ""));
  plan.edits.push_back(Replace(ctx.node(use).begin, ctx.node(use).end,
                               std::string(ctx.Text(m.value))));
  out.push_back(std::move(plan));
}

}  // namespace

void ConstSites(const RuleContext& ctx, std::vector<SitePlan>& out) {
  for (NodeId id : ctx.AllNodes()) {
    NodeKind k = ctx.Kind(id);
    if (k == NodeKind::kNumber || k == NodeKind::kString) {
      LiteralToConstant(ctx, id, out);
    } else {
      ConstantToLiteral(ctx, id, out);
    }
  }
}

RuleCounts CountConst(const RuleContext& ctx) {
  RuleCounts counts;
  for (NodeId id : ctx.AllNodes()) {
    NodeKind k = ctx.Kind(id);
    if (k == NodeKind::kNumber || k == NodeKind::kString) {
      if (IsConstLiteral(ctx, id) && CallOfArgument(ctx, id) != kNoNode) {
        ++counts.count_b;
      }
      continue;
    }
    NamedConstant m;
    if (MatchNamedConstant(ctx, id, m) &&
        FoldableUse(ctx, m, /*strict=*/false) != kNoNode) {
      ++counts.count_a;
    }
  }
  return counts;
}

}  // namespace mistforge::internal
