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

bool JavaEndsAbruptly(const RuleContext& ctx, NodeId id) {
  switch (ctx.Kind(id)) {
    case NodeKind::kReturn:
    case NodeKind::kThrow:
    case NodeKind::kBreak:
    case NodeKind::kContinue:
    case NodeKind::kYield:
      return true;
    case NodeKind::kBlock: {
      const auto& kids = ctx.node(id).children;
      return !kids.empty() && JavaEndsAbruptly(ctx, kids.back());
    }
    case NodeKind::kIf: {
      NodeId alt = ctx.Child(id, Field::kAlternative);
      return alt != kNoNode &&
             JavaEndsAbruptly(ctx, ctx.Child(id, Field::kConsequence)) &&
             JavaEndsAbruptly(ctx, alt);
    }
    default:
      return false;
  }
}

// Every declaration of the name is a local variable or parameter.
bool IsJavaLocal(const RuleContext& ctx, std::string_view name) {
  bool any = false;
  for (NodeId d : ctx.AllNodes()) {
    NodeKind k = ctx.Kind(d);
    if (k != NodeKind::kVariableDeclarator && k != NodeKind::kParameter) {
      continue;
    }
    NodeId n = ctx.Child(d, Field::kName);
    if (n == kNoNode || ctx.Text(n) != name) continue;
    if (k == NodeKind::kVariableDeclarator &&
        ctx.Kind(ctx.Parent(d)) != NodeKind::kLocalVarDecl) {
      return false;
    }
    if (k == NodeKind::kParameter) {
      NodeId owner = ctx.Parent(d);
      if (owner != kNoNode && ctx.Kind(owner) == NodeKind::kParameters) {
        NodeId decl = ctx.Parent(owner);
        if (decl != kNoNode && ctx.Kind(decl) == NodeKind::kClassDecl) {
          return false;  // record component
        }
      }
    }
    any = true;
  }
  return any;
}

bool HasMemberAccess(const RuleContext& ctx, NodeId id) {
  for (NodeId d : ctx.tree().Descendants(id)) {
    NodeKind k = ctx.Kind(d);
    if (k == NodeKind::kFieldAccess || k == NodeKind::kSubscript) return true;
  }
  return false;
}

// Names the condition reads cannot change while `body` runs.
bool ConditionStableAcross(const RuleContext& ctx, NodeId cond, NodeId body) {
  if (!ctx.IsPureExpression(cond)) return false;
  std::set<std::string> names = ctx.NamesIn(cond);
  std::set<std::string> assigned = ctx.AssignedIn(body);
  for (const auto& n : names) {
    if (assigned.count(n)) return false;
  }
  if (!ctx.HasCall(body)) return true;
  if (HasMemberAccess(ctx, cond)) return false;
  for (NodeId d : ctx.tree().Descendants(cond)) {
    if (ctx.Kind(d) != NodeKind::kIdentifier) continue;
    std::string_view n = ctx.Text(d);
    if (ctx.IsJava()) {
      if (!IsJavaLocal(ctx, n)) return false;
    } else {
      if (ctx.ScopeEscapes().count(std::string(n)) ||
          ctx.PythonNameType(n) == ValueType::kUnknown) {
        return false;
      }
    }
  }
  return true;
}

// Java: a branch assigns a variable whose declaration has no initializer.
bool AssignsUninitialized(const RuleContext& ctx, NodeId branch) {
  std::set<std::string> uninitialized;
  for (NodeId d : ctx.AllNodes()) {
    if (ctx.Kind(d) != NodeKind::kVariableDeclarator) continue;
    if (ctx.Child(d, Field::kValue) == kNoNode) {
      uninitialized.insert(std::string(ctx.Text(ctx.Child(d, Field::kName))));
    }
  }
  for (const auto& n : ctx.AssignedIn(branch)) {
    if (uninitialized.count(n)) return true;
  }
  return false;
}

bool PlainIf(const RuleContext& ctx, NodeId id) {
  return ctx.Kind(id) == NodeKind::kIf &&
         ctx.Child(id, Field::kAlternative) == kNoNode;
}

bool SafeBeforeElse(const RuleContext& ctx, NodeId stmt) {
  switch (ctx.Kind(stmt)) {
    case NodeKind::kBlock:
    case NodeKind::kExpressionStatement:
    case NodeKind::kReturn:
    case NodeKind::kThrow:
    case NodeKind::kBreak:
    case NodeKind::kContinue:
    case NodeKind::kEmpty:
      return true;
    default:
      return false;
  }
}

void IfElseToIfIf(const RuleContext& ctx, NodeId id,
                  std::vector<SitePlan>& out) {
  NodeId parent = ctx.Parent(id);
  if (parent == kNoNode || !ctx.IsStatementList(parent)) return;
  NodeId cond = ctx.Child(id, Field::kCondition);
  NodeId a = ctx.Child(id, Field::kConsequence);
  auto alts = ctx.tree().ChildrenByField(id, Field::kAlternative);
  if (alts.size() != 1) return;
  NodeId b = alts[0];
  if (!ConditionStableAcross(ctx, cond, a)) return;
  SitePlan plan;
  plan.site = {TransformRule::kBranchIfElseIfIf, Direction::kBtoA,
               ByteRange{ctx.node(id).begin, ctx.node(id).end}, 0};
  if (ctx.IsJava()) {
    if (ctx.Kind(b) == NodeKind::kIf) return;
    if (JavaEndsAbruptly(ctx, a) && JavaEndsAbruptly(ctx, b)) return;
    if (AssignsUninitialized(ctx, a) || AssignsUninitialized(ctx, b)) return;
    std::string inner(ctx.Text(ctx.node(cond).children.front()));
    plan.edits.push_back(Replace(ctx.node(a).end, ctx.node(b).begin,
                                 "\n" + ctx.Indent(ctx.node(id).begin) +
                                     "if (!(" + inner + ")) "));
  } else {
    if (ctx.Kind(b) != NodeKind::kElse) return;
    uint32_t at = ctx.node(b).begin;
    plan.edits.push_back(
        Replace(at, at + 4, "if not (" + std::string(ctx.Text(cond)) + ")"));
  }
  out.push_back(std::move(plan));
}

// Second if of an adjacent pair whose condition negates the first's.
NodeId NegatedPartner(const RuleContext& ctx, NodeId id) {
  if (!PlainIf(ctx, id)) return kNoNode;
  NodeId parent = ctx.Parent(id);
  if (parent == kNoNode || !ctx.IsStatementList(parent)) return kNoNode;
  NodeId next = ctx.NextSibling(id);
  if (next == kNoNode || !PlainIf(ctx, next)) return kNoNode;
  NodeId c1 = ctx.Child(id, Field::kCondition);
  NodeId c2 = ctx.Child(next, Field::kCondition);
  if (!IsNegationOf(ctx, c2, c1)) return kNoNode;
  return next;
}

void IfIfToIfElse(const RuleContext& ctx, NodeId id,
                  std::vector<SitePlan>& out) {
  NodeId second = NegatedPartner(ctx, id);
  if (second == kNoNode) return;
  NodeId cond = ctx.Child(id, Field::kCondition);
  NodeId a = ctx.Child(id, Field::kConsequence);
  NodeId b = ctx.Child(second, Field::kConsequence);
  if (!ConditionStableAcross(ctx, cond, a)) return;
  SitePlan plan;
  plan.site = {TransformRule::kBranchIfElseIfIf, Direction::kAtoB,
               ByteRange{ctx.node(id).begin, ctx.node(second).end}, 0};
  if (ctx.IsJava()) {
    if (!SafeBeforeElse(ctx, a)) return;
    if (JavaEndsAbruptly(ctx, a) && JavaEndsAbruptly(ctx, b)) return;
    std::string sep = ctx.Kind(a) == NodeKind::kBlock
                          ? " else "
                          : "\n" + ctx.Indent(ctx.node(id).begin) + "else ";
    plan.edits.push_back(Replace(ctx.node(a).end, ctx.node(b).begin, sep));
  } else {
    if (!ctx.FirstOnLine(ctx.node(second).begin) ||
        ctx.Indent(ctx.node(second).begin) != ctx.Indent(ctx.node(id).begin)) {
      return;
    }
    NodeId c2 = ctx.Child(second, Field::kCondition);
    plan.edits.push_back(
        Replace(ctx.node(second).begin, ctx.node(c2).end, "else"));
  }
  out.push_back(std::move(plan));
}

}  // namespace

void BranchSites(const RuleContext& ctx, std::vector<SitePlan>& out) {
  for (NodeId id : ctx.AllNodes()) {
    if (ctx.Kind(id) != NodeKind::kIf) continue;
    if (ctx.Child(id, Field::kAlternative) != kNoNode) {
      IfElseToIfIf(ctx, id, out);
    } else {
      IfIfToIfElse(ctx, id, out);
    }
  }
}

RuleCounts CountBranches(const RuleContext& ctx) {
  RuleCounts counts;
  for (NodeId id : ctx.AllNodes()) {
    if (ctx.Kind(id) != NodeKind::kIf) continue;
    if (ctx.Child(id, Field::kAlternative) != kNoNode) {
      ++counts.count_b;
    } else if (NegatedPartner(ctx, id) != kNoNode) {
      ++counts.count_a;
    }
  }
  return counts;
}

}  // namespace mistforge::internal
