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

std::string Unboxed(std::string type) {
  if (type == "Integer") return "int";
  if (type == "Long") return "long";
  if (type == "Double") return "double";
  if (type == "Float") return "float";
  if (type == "Short") return "short";
  if (type == "Byte") return "byte";
  if (type == "Character") return "char";
  if (type == "Boolean") return "boolean";
  return type;
}

int Rank(const std::string& t) {
  if (t == "byte" || t == "short" || t == "char" || t == "int") return 1;
  if (t == "long") return 2;
  if (t == "float") return 3;
  if (t == "double") return 4;
  return 0;
}

bool IsWideNumeric(const std::string& t) {
  return t == "int" || t == "long" || t == "float" || t == "double";
}

// The node's value is discarded: a whole expression statement or a classic
// for update.
bool InStatementPosition(const RuleContext& ctx, NodeId id) {
  NodeId p = ctx.Parent(id);
  if (p == kNoNode) return false;
  if (ctx.Kind(p) == NodeKind::kExpressionStatement) return true;
  return ctx.Kind(p) == NodeKind::kFor &&
         ctx.node(id).field == Field::kUpdate;
}

bool IsAtomic(const RuleContext& ctx, NodeId id) {
  switch (ctx.Kind(id)) {
    case NodeKind::kIdentifier:
    case NodeKind::kNumber:
    case NodeKind::kString:
    case NodeKind::kChar:
    case NodeKind::kKeywordLiteral:
    case NodeKind::kParenthesized:
    case NodeKind::kCall:
    case NodeKind::kFieldAccess:
    case NodeKind::kSubscript:
      return true;
    default:
      return false;
  }
}

struct SelfBinary {
  NodeId assign = kNoNode;
  std::string name;
  std::string op;  // binary operator
  NodeId operand = kNoNode;
};

// `x = x OP y` with a single plain target.
bool MatchSelfBinary(const RuleContext& ctx, NodeId id, SelfBinary& m) {
  if (ctx.Kind(id) != NodeKind::kAssignment) return false;
  auto lefts = ctx.tree().ChildrenByField(id, Field::kLeft);
  NodeId op = ctx.Child(id, Field::kOperator);
  NodeId right = ctx.Child(id, Field::kRight);
  if (lefts.size() != 1 || ctx.Kind(lefts[0]) != NodeKind::kIdentifier ||
      op == kNoNode || ctx.Text(op) != "=" || right == kNoNode ||
      ctx.Child(id, Field::kType) != kNoNode ||
      ctx.Kind(right) != NodeKind::kBinary) {
    return false;
  }
  NodeId rl = ctx.Child(right, Field::kLeft);
  if (ctx.Kind(rl) != NodeKind::kIdentifier ||
      ctx.Text(rl) != ctx.Text(lefts[0])) {
    return false;
  }
  m.assign = id;
  m.name = std::string(ctx.Text(lefts[0]));
  m.op = std::string(ctx.Text(ctx.Child(right, Field::kOperator)));
  m.operand = ctx.Child(right, Field::kRight);
  return true;
}

struct CompoundForm {
  std::string name;
  std::string op;  // compound operator, e.g. "+="
  NodeId operand = kNoNode;
};

bool MatchCompound(const RuleContext& ctx, NodeId id, CompoundForm& m) {
  if (ctx.Kind(id) != NodeKind::kAssignment) return false;
  NodeId op = ctx.Child(id, Field::kOperator);
  if (op == kNoNode || ctx.Text(op) == "=") return false;
  if (!IsCoveredCompoundOperator(ctx.Text(op), ctx.IsJava() ? Language::kJava
                                                            : Language::kPython)) {
    return false;
  }
  NodeId left = ctx.Child(id, Field::kLeft);
  m.name = ctx.Kind(left) == NodeKind::kIdentifier
               ? std::string(ctx.Text(left))
               : std::string();
  m.op = std::string(ctx.Text(op));
  m.operand = ctx.Child(id, Field::kRight);
  return true;
}

bool JavaCompoundTypesAgree(const RuleContext& ctx, const CompoundForm& m) {
  std::string tx = Unboxed(ctx.JavaDeclaredType(m.name));
  std::string ty = Unboxed(ctx.JavaExpressionType(m.operand));
  std::string op = m.op.substr(0, m.op.size() - 1);
  if (op == "+" && tx == "String") return true;
  if (op == "<<" || op == ">>" || op == ">>>") {
    return (tx == "int" || tx == "long") && (Rank(ty) == 1 || Rank(ty) == 2);
  }
  if ((op == "&" || op == "|" || op == "^") && tx == "boolean") {
    return ty == "boolean";
  }
  if (op == "&" || op == "|" || op == "^") {
    if (tx != "int" && tx != "long") return false;
    if (Rank(ty) != 1 && Rank(ty) != 2) return false;
    return std::max(Rank(tx), Rank(ty)) == Rank(tx);
  }
  if (!IsWideNumeric(tx) || Rank(ty) == 0) return false;
  return std::max(Rank(tx), Rank(ty)) == Rank(tx);
}

bool PythonImmutable(const RuleContext& ctx, const std::string& name) {
  return ctx.PythonNameType(name) != ValueType::kUnknown;
}

}  // namespace

void IncDecSites(const RuleContext& ctx, std::vector<SitePlan>& out) {
  if (!ctx.IsJava()) return;
  for (NodeId id : ctx.AllNodes()) {
    if (ctx.Kind(id) == NodeKind::kUpdate) {
      NodeId operand = ctx.Child(id, Field::kOperand);
      if (ctx.Kind(operand) != NodeKind::kIdentifier ||
          !InStatementPosition(ctx, id)) {
        continue;
      }
      std::string name(ctx.Text(operand));
      if (!IsWideNumeric(Unboxed(ctx.JavaDeclaredType(name)))) continue;
      bool inc = ctx.Text(ctx.Child(id, Field::kOperator)) == "++";
      SitePlan plan;
      plan.site = {TransformRule::kIncDecExpand, Direction::kBtoA,
                   ByteRange{ctx.node(id).begin, ctx.node(id).end}, 0};
      plan.edits.push_back(Replace(ctx.node(id).begin, ctx.node(id).end,
                                   name + " = " + name +
                                       (inc ? " + 1" : " - 1")));
      out.push_back(std::move(plan));
      continue;
    }
    SelfBinary m;
    if (!MatchSelfBinary(ctx, id, m) || (m.op != "+" && m.op != "-") ||
        ctx.Kind(m.operand) != NodeKind::kNumber ||
        ctx.Text(m.operand) != "1" || !InStatementPosition(ctx, id)) {
      continue;
    }
    if (Rank(Unboxed(ctx.JavaDeclaredType(m.name))) == 0) continue;
    SitePlan plan;
    plan.site = {TransformRule::kIncDecExpand, Direction::kAtoB,
                 ByteRange{ctx.node(id).begin, ctx.node(id).end}, 0};
    plan.edits.push_back(Replace(ctx.node(id).begin, ctx.node(id).end,
                                 m.name + (m.op == "+" ? "++" : "--")));
    out.push_back(std::move(plan));
  }
}

RuleCounts CountIncDec(const RuleContext& ctx) {
  RuleCounts counts;
  if (!ctx.IsJava()) return counts;
  for (NodeId id : ctx.AllNodes()) {
    if (ctx.Kind(id) == NodeKind::kUpdate) {
      ++counts.count_b;
      continue;
    }
    SelfBinary m;
    if (MatchSelfBinary(ctx, id, m) && (m.op == "+" || m.op == "-") &&
        ctx.Kind(m.operand) == NodeKind::kNumber &&
        ctx.Text(m.operand) == "1") {
      ++counts.count_a;
    }
  }
  return counts;
}

void CompoundSites(const RuleContext& ctx, std::vector<SitePlan>& out) {
  Language lang = ctx.IsJava() ? Language::kJava : Language::kPython;
  for (NodeId id : ctx.AllNodes()) {
    if (ctx.Kind(id) != NodeKind::kAssignment ||
        !InStatementPosition(ctx, id)) {
      continue;
    }
    ByteRange span{ctx.node(id).begin, ctx.node(id).end};
    CompoundForm c;
    if (MatchCompound(ctx, id, c)) {
      if (c.name.empty()) continue;
      bool ok = ctx.IsJava() ? JavaCompoundTypesAgree(ctx, c)
                             : PythonImmutable(ctx, c.name);
      if (!ok) continue;
      std::string y(ctx.Text(c.operand));
      if (!IsAtomic(ctx, c.operand)) y = "(" + y + ")";
      SitePlan plan;
      plan.site = {TransformRule::kCompoundAssignExpand, Direction::kBtoA,
                   span, 0};
      plan.edits.push_back(Replace(span.begin, span.end,
                                   c.name + " = " + c.name + " " +
                                       c.op.substr(0, c.op.size() - 1) + " " +
                                       y));
      out.push_back(std::move(plan));
      continue;
    }
    SelfBinary m;
    if (!MatchSelfBinary(ctx, id, m) ||
        !IsCoveredCompoundOperator(m.op + "=", lang)) {
      continue;
    }
    if (!ctx.IsJava() && !PythonImmutable(ctx, m.name)) continue;
    SitePlan plan;
    plan.site = {TransformRule::kCompoundAssignExpand, Direction::kAtoB, span,
                 0};
    plan.edits.push_back(Replace(span.begin, span.end,
                                 m.name + " " + m.op + "= " +
                                     std::string(ctx.Text(m.operand))));
    out.push_back(std::move(plan));
  }
}

RuleCounts CountCompound(const RuleContext& ctx) {
  RuleCounts counts;
  Language lang = ctx.IsJava() ? Language::kJava : Language::kPython;
  for (NodeId id : ctx.AllNodes()) {
    CompoundForm c;
    SelfBinary m;
    if (MatchCompound(ctx, id, c)) {
      ++counts.count_b;
    } else if (MatchSelfBinary(ctx, id, m) &&
               IsCoveredCompoundOperator(m.op + "=", lang)) {
      ++counts.count_a;
    }
  }
  return counts;
}

}  // namespace mistforge::internal
