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

#include <charconv>
#include <string>

#include "rules_internal.h"

namespace mistforge::internal {
namespace {

constexpr std::string_view kDefaultUnit = "    ";

bool IntLiteral(const RuleContext& ctx, NodeId id, long long& value) {
  bool negative = false;
  if (ctx.Kind(id) == NodeKind::kUnary &&
      ctx.Text(ctx.Child(id, Field::kOperator)) == "-") {
    negative = true;
    id = ctx.Child(id, Field::kOperand);
  }
  if (id == kNoNode || ctx.Kind(id) != NodeKind::kNumber) return false;
  std::string digits;
  for (char c : ctx.Text(id)) {
    if (c == '_') continue;
    if (c < '0' || c > '9') return false;
    digits += c;
  }
  if (digits.size() > 1 && digits[0] == '0') return false;
  auto [ptr, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) return false;
  if (negative) value = -value;
  return true;
}

// Nearest loop statement enclosing id, stopping at function boundaries.
NodeId EnclosingLoop(const RuleContext& ctx, NodeId id) {
  for (NodeId p = ctx.Parent(id); p != kNoNode; p = ctx.Parent(p)) {
    NodeKind k = ctx.Kind(p);
    if (ctx.IsLoop(p)) return p;
    if (k == NodeKind::kMethodDecl || k == NodeKind::kLambda ||
        k == NodeKind::kClassDecl || k == NodeKind::kObjectCreation) {
      return kNoNode;
    }
  }
  return kNoNode;
}

// True if an unlabeled continue inside the loop resumes this loop.
bool HasOwnContinue(const RuleContext& ctx, NodeId loop) {
  for (NodeId d : ctx.tree().Descendants(loop)) {
    if (ctx.Kind(d) != NodeKind::kContinue) continue;
    if (ctx.Child(d, Field::kName) != kNoNode) continue;
    if (EnclosingLoop(ctx, d) == loop) return true;
  }
  return false;
}

bool IsTrueLiteral(const RuleContext& ctx, NodeId cond) {
  return cond == kNoNode || ctx.Text(ctx.Unparen(cond)) == "true";
}

bool HasBreak(const RuleContext& ctx, NodeId id) {
  for (NodeId d : ctx.tree().Descendants(id)) {
    if (ctx.Kind(d) == NodeKind::kBreak) return true;
  }
  return false;
}

// Java statements after which appended code would be unreachable.
bool EndsAbruptly(const RuleContext& ctx, NodeId id) {
  switch (ctx.Kind(id)) {
    case NodeKind::kReturn:
    case NodeKind::kThrow:
    case NodeKind::kBreak:
    case NodeKind::kContinue:
    case NodeKind::kYield:
      return true;
    case NodeKind::kBlock: {
      const auto& kids = ctx.node(id).children;
      return !kids.empty() && EndsAbruptly(ctx, kids.back());
    }
    case NodeKind::kIf: {
      NodeId alt = ctx.Child(id, Field::kAlternative);
      return alt != kNoNode &&
             EndsAbruptly(ctx, ctx.Child(id, Field::kConsequence)) &&
             EndsAbruptly(ctx, alt);
    }
    case NodeKind::kWhile:
    case NodeKind::kFor:
    case NodeKind::kDo:
      return IsTrueLiteral(ctx, ctx.Child(id, Field::kCondition)) &&
             !HasBreak(ctx, id);
    case NodeKind::kTry: {
      NodeId fin = kNoNode;
      bool all = EndsAbruptly(ctx, ctx.Child(id, Field::kBody));
      for (NodeId c : ctx.node(id).children) {
        if (ctx.Kind(c) == NodeKind::kCatch) {
          all = all && EndsAbruptly(ctx, ctx.Child(c, Field::kBody));
        } else if (ctx.Kind(c) == NodeKind::kFinally) {
          fin = c;
        }
      }
      if (fin != kNoNode) {
        const auto& kids = ctx.node(fin).children;
        if (!kids.empty() && EndsAbruptly(ctx, kids.back())) return true;
      }
      return all;
    }
    case NodeKind::kSynchronized:
    case NodeKind::kLabeled:
      return EndsAbruptly(ctx, ctx.Child(id, Field::kBody));
    default:
      return false;
  }
}

void JavaForToWhile(const RuleContext& ctx, NodeId loop,
                    std::vector<SitePlan>& out) {
  NodeId parent = ctx.Parent(loop);
  if (parent == kNoNode || ctx.Kind(parent) == NodeKind::kLabeled) return;
  if (HasOwnContinue(ctx, loop)) return;
  NodeId body = ctx.Child(loop, Field::kBody);
  NodeId cond = ctx.Child(loop, Field::kCondition);
  auto inits = ctx.tree().ChildrenByField(loop, Field::kInit);
  auto updates = ctx.tree().ChildrenByField(loop, Field::kUpdate);
  if (!updates.empty() && EndsAbruptly(ctx, body)) return;

  std::string init_text;
  bool needs_scope = !ctx.IsStatementList(parent);
  for (NodeId init : inits) {
    if (!init_text.empty()) init_text += " ";
    init_text += std::string(ctx.Text(init)) + ";";
    if (ctx.Kind(init) != NodeKind::kLocalVarDecl) continue;
    for (NodeId decl : ctx.tree().ChildrenByField(init, Field::kDeclarator)) {
      NodeId name = ctx.Child(decl, Field::kName);
      for (uint32_t off : NameOccurrences(ctx, ctx.Text(name))) {
        if (off < ctx.node(loop).begin || off >= ctx.node(loop).end) {
          needs_scope = true;
        }
      }
    }
  }
  std::string update_text;
  for (NodeId u : updates) {
    update_text += std::string(ctx.Text(u)) + ";";
  }

  uint32_t begin = ctx.node(loop).begin;
  uint32_t end = ctx.node(loop).end;
  std::string ind = ctx.Indent(begin);
  std::string head;
  if (needs_scope) head = "{\n" + ind;
  if (!init_text.empty()) head += init_text + "\n" + ind;
  head += "while (" +
          (cond == kNoNode ? std::string("true") : std::string(ctx.Text(cond))) +
          ") ";

  SitePlan plan;
  plan.site = {TransformRule::kLoopForWhile, Direction::kBtoA,
               ByteRange{begin, end}, 0};
  std::string tail = needs_scope ? "\n" + ind + "}" : "";
  if (ctx.Kind(body) == NodeKind::kBlock) {
    plan.edits.push_back(Replace(begin, ctx.node(body).begin, head));
    uint32_t close = ctx.node(body).end - 1;
    if (!update_text.empty()) {
      const auto& kids = ctx.node(body).children;
      if (ctx.FirstOnLine(close)) {
        std::string body_ind =
            !kids.empty() && !ctx.SameLine(ctx.node(body).begin,
                                           ctx.node(kids.front()).begin)
                ? ctx.Indent(ctx.node(kids.front()).begin)
                : ctx.Indent(close) + std::string(kDefaultUnit);
        std::string text;
        for (NodeId u : updates) {
          text += body_ind + std::string(ctx.Text(u)) + ";\n";
        }
        plan.edits.push_back(Replace(ctx.LineStart(close),
                                     ctx.LineStart(close), text));
      } else {
        plan.edits.push_back(Replace(close, close, " " + update_text + " "));
      }
    }
    if (!tail.empty()) plan.edits.push_back(Replace(end, end, tail));
  } else {
    plan.edits.push_back(Replace(begin, ctx.node(body).begin, head + "{ "));
    std::string text = update_text.empty() ? " }" : " " + update_text + " }";
    plan.edits.push_back(Replace(end, end, text + tail));
  }
  out.push_back(std::move(plan));
}

void JavaWhileToFor(const RuleContext& ctx, NodeId loop,
                    std::vector<SitePlan>& out) {
  NodeId cond = ctx.Child(loop, Field::kCondition);
  NodeId inner = ctx.node(cond).children.front();
  SitePlan plan;
  plan.site = {TransformRule::kLoopForWhile, Direction::kAtoB,
               ByteRange{ctx.node(loop).begin, ctx.node(loop).end}, 0};
  plan.edits.push_back(Replace(ctx.node(loop).begin, ctx.node(cond).end,
                               "for (; " + std::string(ctx.Text(inner)) +
                                   ";)"));
  out.push_back(std::move(plan));
}

bool NameRebound(const RuleContext& ctx, std::string_view name) {
  for (uint32_t off : NameOccurrences(ctx, name)) {
    if (ctx.IsBindingOccurrence(off)) return true;
  }
  return ctx.ScopeEscapes().count(std::string(name)) > 0;
}

// A loop bound built from literals and names the region never rebinds.
bool StableBound(const RuleContext& ctx, NodeId expr, NodeId region,
                 std::string_view counter) {
  std::set<std::string> assigned = ctx.AssignedIn(region);
  for (NodeId d : ctx.tree().Descendants(expr)) {
    switch (ctx.Kind(d)) {
      case NodeKind::kNumber:
      case NodeKind::kBinary:
      case NodeKind::kUnary:
      case NodeKind::kOperator:
      case NodeKind::kParenthesized:
        break;
      case NodeKind::kIdentifier: {
        std::string name(ctx.Text(d));
        if (name == counter || assigned.count(name) ||
            ctx.ScopeEscapes().count(name)) {
          return false;
        }
        break;
      }
      default:
        return false;
    }
  }
  return true;
}

bool BindsLocally(const RuleContext& ctx, NodeId scope,
                  std::string_view name) {
  for (uint32_t off : NameOccurrences(ctx, name)) {
    if (ctx.IsBindingOccurrence(off) && ctx.ScopeOfOffset(off) == scope) {
      return true;
    }
  }
  return false;
}

NodeId InnermostBinder(const RuleContext& ctx, uint32_t offset) {
  NodeId best = kNoNode;
  for (NodeId d : ctx.AllNodes()) {
    if (ctx.Kind(d) != NodeKind::kAssignment) continue;
    if (offset >= ctx.node(d).begin && offset < ctx.node(d).end &&
        (best == kNoNode || ctx.node(d).begin >= ctx.node(best).begin)) {
      best = d;
    }
  }
  return best;
}

// The counter's value at the end of [begin, end) is never observed: later
// reads in the scope are preceded by an unconditional plain assignment,
// nothing outside reads it through a closure, and no enclosing loop carries
// it into the next iteration.
bool CounterDeadOutside(const RuleContext& ctx, std::string_view name,
                        NodeId loop, uint32_t begin, uint32_t end) {
  if (ctx.ScopeEscapes().count(std::string(name))) return false;
  NodeId scope = ctx.ScopeOf(loop);
  std::vector<NodeId> outer_loops;
  for (NodeId p = ctx.Parent(loop); p != kNoNode && p != scope;
       p = ctx.Parent(p)) {
    if (ctx.IsLoop(p)) outer_loops.push_back(p);
  }
  uint32_t first_after = UINT32_MAX;
  for (uint32_t off : NameOccurrences(ctx, name)) {
    NodeId s = ctx.ScopeOfOffset(off);
    bool inside = off >= begin && off < end;
    if (s != scope) {
      if (s == kNoNode || ctx.Kind(s) == NodeKind::kClassDecl) return false;
      if (ctx.Kind(s) == NodeKind::kComprehension && inside) continue;
      if (!BindsLocally(ctx, s, name)) return false;
      continue;
    }
    if (inside) continue;
    for (NodeId o : outer_loops) {
      if (off >= ctx.node(o).begin && off < ctx.node(o).end) return false;
    }
    if (off >= end) first_after = std::min(first_after, off);
  }
  if (first_after == UINT32_MAX) return true;
  if (!ctx.IsBindingOccurrence(first_after)) return false;
  NodeId assign = InnermostBinder(ctx, first_after);
  if (assign == kNoNode) return false;
  NodeId op = ctx.Child(assign, Field::kOperator);
  if (op == kNoNode || ctx.Text(op) != "=") return false;
  NodeId right = ctx.Child(assign, Field::kRight);
  if (right != kNoNode && ctx.NamesIn(right).count(std::string(name))) {
    return false;
  }
  NodeId stmt = ctx.Parent(assign);
  if (stmt == kNoNode || ctx.Kind(stmt) != NodeKind::kExpressionStatement) {
    return false;
  }
  // The assignment must run whenever control leaves the loop normally.
  NodeId block = ctx.Parent(stmt);
  return block != kNoNode && ctx.IsStatementList(block) &&
         ctx.Contains(block, loop);
}

bool IndentedSuite(const RuleContext& ctx, NodeId owner, NodeId body) {
  return body != kNoNode && !ctx.SameLine(ctx.node(owner).begin,
                                          ctx.node(body).begin);
}

std::string BoundText(const RuleContext& ctx, NodeId expr) {
  NodeKind k = ctx.Kind(expr);
  std::string text(ctx.Text(expr));
  if (k == NodeKind::kIdentifier || k == NodeKind::kNumber ||
      k == NodeKind::kParenthesized) {
    return text;
  }
  return "(" + text + ")";
}

bool PythonRangeForToWhile(const RuleContext& ctx, NodeId loop,
                           std::vector<SitePlan>& out) {
  NodeId target = ctx.Child(loop, Field::kTarget);
  NodeId iter = ctx.Child(loop, Field::kIterable);
  NodeId body = ctx.Child(loop, Field::kBody);
  if (ctx.Kind(target) != NodeKind::kIdentifier ||
      ctx.Kind(iter) != NodeKind::kCall) {
    return false;
  }
  NodeId fn = ctx.Child(iter, Field::kFunction);
  if (ctx.Kind(fn) != NodeKind::kIdentifier || ctx.Text(fn) != "range" ||
      NameRebound(ctx, "range")) {
    return false;
  }
  NodeId args = ctx.Child(iter, Field::kArguments);
  const auto& a = ctx.node(args).children;
  if (a.empty() || a.size() > 3) return false;
  for (NodeId arg : a) {
    NodeKind k = ctx.Kind(arg);
    if (k == NodeKind::kStarred || k == NodeKind::kKeywordArgument ||
        k == NodeKind::kComprehension) {
      return false;
    }
  }
  std::string_view v = ctx.Text(target);
  NodeId start = a.size() >= 2 ? a[0] : kNoNode;
  NodeId stop = a.size() >= 2 ? a[1] : a[0];
  long long step = 1;
  if (a.size() == 3 && (!IntLiteral(ctx, a[2], step) || step == 0)) {
    return false;
  }
  if (!StableBound(ctx, stop, loop, v)) return false;
  if (start != kNoNode && ctx.NamesIn(start).count(std::string(v))) {
    return false;
  }
  if (ctx.AssignedIn(body).count(std::string(v))) return false;
  if (HasOwnContinue(ctx, loop)) return false;
  if (!CounterDeadOutside(ctx, v, loop, ctx.node(loop).begin,
                          ctx.node(loop).end)) {
    return false;
  }
  uint32_t begin = ctx.node(loop).begin;
  std::string ind = ctx.Indent(begin);
  std::string body_ind = ctx.Indent(ctx.node(body).begin);
  std::string name(v);
  std::string head = name + " = " +
                     (start == kNoNode ? "0" : std::string(ctx.Text(start))) +
                     "\n" + ind + "while " + name +
                     (step > 0 ? " < " : " > ") + BoundText(ctx, stop);
  std::string inc = "\n" + body_ind + name +
                    (step > 0 ? " += " + std::to_string(step)
                              : " -= " + std::to_string(-step));
  SitePlan plan;
  plan.site = {TransformRule::kLoopForWhile, Direction::kBtoA,
               ByteRange{begin, ctx.node(loop).end}, 0};
  plan.edits.push_back(Replace(begin, ctx.node(iter).end, head));
  uint32_t last_end = ctx.node(ctx.node(body).children.back()).end;
  plan.edits.push_back(Replace(last_end, last_end, inc));
  out.push_back(std::move(plan));
  return true;
}

void PythonIterForToWhile(const RuleContext& ctx, NodeId loop,
                          std::vector<SitePlan>& out) {
  if (ctx.Child(loop, Field::kAlternative) != kNoNode) return;
  for (std::string_view n : {"iter", "next", "StopIteration"}) {
    if (NameRebound(ctx, n)) return;
  }
  NodeId target = ctx.Child(loop, Field::kTarget);
  NodeId iter = ctx.Child(loop, Field::kIterable);
  NodeId body = ctx.Child(loop, Field::kBody);
  uint32_t begin = ctx.node(loop).begin;
  std::string ind = ctx.Indent(begin);
  std::string body_ind = ctx.Indent(ctx.node(body).begin);
  if (body_ind.size() <= ind.size() || body_ind.compare(0, ind.size(), ind)) {
    return;
  }
  std::string unit = body_ind.substr(ind.size());
  std::string xs(ctx.Text(iter));
  if (ctx.Kind(iter) == NodeKind::kExpressionList ||
      ctx.Kind(iter) == NodeKind::kStarred) {
    xs = "(" + xs + ")";
  }
  std::string fresh(kFreshPlaceholder);
  std::string text = fresh + " = iter(" + xs + ")\n" + ind + "while True:\n" +
                     body_ind + "try:\n" + body_ind + unit +
                     std::string(ctx.Text(target)) + " = next(" + fresh +
                     ")\n" + body_ind + "except StopIteration:\n" + body_ind +
                     unit + "break\n" + body_ind;
  SitePlan plan;
  plan.site = {TransformRule::kLoopForWhile, Direction::kBtoA,
               ByteRange{begin, ctx.node(loop).end}, 0};
  plan.edits.push_back(Replace(begin, ctx.node(body).begin, text));
  plan.fresh_count = 1;
  out.push_back(std::move(plan));
}

bool AloneOnLine(const RuleContext& ctx, NodeId id) {
  return ctx.FirstOnLine(ctx.node(id).begin) &&
         ctx.LastOnLine(ctx.node(id).end);
}

// `v <op>= literal` as the whole statement.
NodeId CounterStep(const RuleContext& ctx, NodeId stmt, std::string_view v,
                   std::string_view op, long long& amount) {
  if (ctx.Kind(stmt) != NodeKind::kExpressionStatement) return kNoNode;
  NodeId assign = ctx.node(stmt).children.front();
  if (ctx.Kind(assign) != NodeKind::kAssignment) return kNoNode;
  NodeId left = ctx.Child(assign, Field::kLeft);
  NodeId oper = ctx.Child(assign, Field::kOperator);
  NodeId right = ctx.Child(assign, Field::kRight);
  if (ctx.Kind(left) != NodeKind::kIdentifier || ctx.Text(left) != v ||
      oper == kNoNode || ctx.Text(oper) != op || right == kNoNode ||
      !IntLiteral(ctx, right, amount) || amount <= 0) {
    return kNoNode;
  }
  return assign;
}

void PythonWhileToFor(const RuleContext& ctx, NodeId loop,
                      std::vector<SitePlan>& out) {
  if (ctx.Child(loop, Field::kAlternative) != kNoNode) return;
  if (NameRebound(ctx, "range")) return;
  NodeId body = ctx.Child(loop, Field::kBody);
  if (!IndentedSuite(ctx, loop, body)) return;
  const auto& stmts = ctx.node(body).children;
  if (stmts.size() < 2) return;
  NodeId init = ctx.PrevSibling(loop);
  if (init == kNoNode || ctx.Kind(init) != NodeKind::kExpressionStatement ||
      !AloneOnLine(ctx, init)) {
    return;
  }
  NodeId assign = ctx.node(init).children.front();
  if (ctx.Kind(assign) != NodeKind::kAssignment) return;
  auto lefts = ctx.tree().ChildrenByField(assign, Field::kLeft);
  NodeId op = ctx.Child(assign, Field::kOperator);
  NodeId start = ctx.Child(assign, Field::kRight);
  long long start_value = 0;
  if (lefts.size() != 1 || ctx.Kind(lefts[0]) != NodeKind::kIdentifier ||
      op == kNoNode || ctx.Text(op) != "=" ||
      ctx.Child(assign, Field::kType) != kNoNode || start == kNoNode ||
      !IntLiteral(ctx, start, start_value)) {
    return;
  }
  std::string v(ctx.Text(lefts[0]));
  NodeId cond = ctx.Child(loop, Field::kCondition);
  if (ctx.Kind(cond) != NodeKind::kComparison) return;
  const auto& ck = ctx.node(cond).children;
  if (ck.size() != 3 || ctx.Kind(ck[0]) != NodeKind::kIdentifier ||
      ctx.Text(ck[0]) != v) {
    return;
  }
  std::string_view cmp = ctx.Text(ck[1]);
  if (cmp != "<" && cmp != ">") return;
  NodeId stop = ck[2];
  long long amount = 0;
  NodeId last = stmts.back();
  if (CounterStep(ctx, last, v, cmp == "<" ? "+=" : "-=", amount) ==
          kNoNode ||
      !AloneOnLine(ctx, last)) {
    return;
  }
  long long ignored = 0;
  if (!IntLiteral(ctx, stop, ignored) &&
      ctx.PythonExpressionType(stop) != ValueType::kInt) {
    return;
  }
  if (!StableBound(ctx, stop, loop, v)) return;
  if (HasOwnContinue(ctx, loop)) return;
  for (NodeId s : stmts) {
    if (s != last && ctx.AssignedIn(s).count(v)) return;
  }
  if (!CounterDeadOutside(ctx, v, loop, ctx.node(init).begin,
                          ctx.node(loop).end)) {
    return;
  }
  std::string range = "for " + v + " in range(" + std::string(ctx.Text(start)) +
                      ", " + std::string(ctx.Text(stop));
  long long step = cmp == "<" ? amount : -amount;
  if (step != 1) range += ", " + std::to_string(step);
  range += ")";
  SitePlan plan;
  plan.site = {TransformRule::kLoopForWhile, Direction::kAtoB,
               ByteRange{ctx.node(loop).begin, ctx.node(loop).end}, 0};
  uint32_t init_line = ctx.LineStart(ctx.node(init).begin);
  plan.edits.push_back(
      Replace(init_line, ctx.LineEnd(ctx.node(init).end), ""));
  plan.edits.push_back(
      Replace(ctx.node(loop).begin, ctx.node(cond).end, range));
  uint32_t last_line = ctx.LineStart(ctx.node(last).begin);
  uint32_t last_end = ctx.LineEnd(ctx.node(last).end);
  if (last_end == ctx.source().size() && last_line > 0) {
    // No trailing newline: drop the one before the line instead.
    plan.edits.push_back(Replace(last_line - 1, last_end, ""));
  } else {
    plan.edits.push_back(Replace(last_line, last_end, ""));
  }
  out.push_back(std::move(plan));
}

}  // namespace

void LoopSites(const RuleContext& ctx, std::vector<SitePlan>& out) {
  for (NodeId id : ctx.AllNodes()) {
    NodeKind k = ctx.Kind(id);
    if (ctx.IsJava()) {
      if (k == NodeKind::kFor) JavaForToWhile(ctx, id, out);
      if (k == NodeKind::kWhile) JavaWhileToFor(ctx, id, out);
      continue;
    }
    if (k == NodeKind::kForEach) {
      if (ctx.Text(id).substr(0, 5) == "async") continue;
      NodeId body = ctx.Child(id, Field::kBody);
      if (!IndentedSuite(ctx, id, body)) continue;
      if (!PythonRangeForToWhile(ctx, id, out)) {
        PythonIterForToWhile(ctx, id, out);
      }
    } else if (k == NodeKind::kWhile) {
      PythonWhileToFor(ctx, id, out);
    }
  }
}

RuleCounts CountLoops(const RuleContext& ctx) {
  RuleCounts counts;
  for (NodeId id : ctx.AllNodes()) {
    NodeKind k = ctx.Kind(id);
    if (k == NodeKind::kFor || k == NodeKind::kForEach) ++counts.count_b;
    if (k == NodeKind::kWhile) ++counts.count_a;
  }
  return counts;
}

}  // namespace mistforge::internal
