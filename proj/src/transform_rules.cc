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

#include "mistforge/transform_rules.h"

#include <algorithm>
#include <map>

#include "mistforge/errors.h"
#include "rules_internal.h"

namespace mistforge {
namespace {

using internal::SitePlan;

std::vector<SitePlan> Plans(const CodeSnippet& snippet) {
  if (!snippet.parse_ok()) {
    throw PreconditionError("transform rules require a parsed snippet");
  }
  internal::RuleContext ctx(snippet);
  std::vector<SitePlan> plans;
  internal::LoopSites(ctx, plans);
  internal::BranchSites(ctx, plans);
  internal::IncDecSites(ctx, plans);
  internal::CompoundSites(ctx, plans);
  internal::ConstSites(ctx, plans);
  std::stable_sort(plans.begin(), plans.end(),
                   [](const SitePlan& a, const SitePlan& b) {
                     const TransformSite& x = a.site;
                     const TransformSite& y = b.site;
                     return std::tie(x.node_span.begin, x.rule, x.direction,
                                     x.node_span.end) <
                            std::tie(y.node_span.begin, y.rule, y.direction,
                                     y.node_span.end);
                   });
  std::map<std::pair<TransformRule, Direction>, int> next;
  for (SitePlan& p : plans) {
    p.site.ordinal = next[{p.site.rule, p.site.direction}]++;
  }
  return plans;
}

const SitePlan* FindPlan(const std::vector<SitePlan>& plans,
                         const TransformSite& site) {
  for (const SitePlan& p : plans) {
    if (p.site == site) return &p;
  }
  return nullptr;
}

std::string SubstituteFresh(std::string text, const std::string& name) {
  size_t at = 0;
  while ((at = text.find(internal::kFreshPlaceholder, at)) !=
         std::string::npos) {
    text.replace(at, internal::kFreshPlaceholder.size(), name);
    at += name.size();
  }
  return text;
}

}  // namespace

RuleCategory CategoryOf(TransformRule rule) {
  switch (rule) {
    case TransformRule::kLoopForWhile:
    case TransformRule::kBranchIfElseIfIf:
      return RuleCategory::kControlFlow;
    case TransformRule::kIncDecExpand:
    case TransformRule::kCompoundAssignExpand:
      return RuleCategory::kExpression;
    case TransformRule::kConstToVar:
      return RuleCategory::kConstVar;
  }
  return RuleCategory::kControlFlow;
}

std::string_view RuleName(TransformRule rule) {
  switch (rule) {
    case TransformRule::kLoopForWhile:
      return "LoopForWhile";
    case TransformRule::kBranchIfElseIfIf:
      return "BranchIfElseIfIf";
    case TransformRule::kIncDecExpand:
      return "IncDecExpand";
    case TransformRule::kCompoundAssignExpand:
      return "CompoundAssignExpand";
    case TransformRule::kConstToVar:
      return "ConstToVar";
  }
  return "unknown";
}

TransformRule ParseRule(std::string_view name) {
  for (TransformRule r : kAllRules) {
    if (RuleName(r) == name) return r;
  }
  throw ConfigurationError("unknown transform rule: " + std::string(name));
}

std::string_view DirectionName(Direction direction) {
  return direction == Direction::kBtoA ? "BtoA" : "AtoB";
}

Direction ParseDirection(std::string_view name) {
  if (name == "BtoA") return Direction::kBtoA;
  if (name == "AtoB") return Direction::kAtoB;
  throw ConfigurationError("unknown direction: " + std::string(name));
}

std::vector<TransformSite> EnumerateSites(const CodeSnippet& snippet) {
  std::vector<TransformSite> out;
  for (const SitePlan& p : Plans(snippet)) out.push_back(p.site);
  return out;
}

std::string FreshName(const CodeSnippet& snippet,
                      const std::set<std::string>& reserved) {
  for (int k = 0;; ++k) {
    std::string name = "mist_tmp_" + std::to_string(k);
    if (reserved.count(name)) continue;
    if (snippet.source().find(name) != std::string::npos) continue;
    return name;
  }
}

StructureEdit PrepareEdit(const CodeSnippet& snippet, const TransformSite& site,
                          const std::set<std::string>& reserved) {
  std::vector<SitePlan> plans = Plans(snippet);
  const SitePlan* plan = FindPlan(plans, site);
  if (plan == nullptr) throw InputError("site is not applicable");
  StructureEdit edit{site, {}};
  std::set<std::string> taken = reserved;
  for (int i = 0; i < plan->fresh_count; ++i) {
    std::string name = FreshName(snippet, taken);
    taken.insert(name);
    edit.fresh_names.push_back(name);
  }
  return edit;
}

CodeSnippet ApplyTransform(const CodeSnippet& snippet,
                           const StructureEdit& edit) {
  std::vector<SitePlan> plans = Plans(snippet);
  const SitePlan* plan = FindPlan(plans, edit.site);
  if (plan == nullptr) throw InputError("stale transform site");
  if (static_cast<int>(edit.fresh_names.size()) != plan->fresh_count) {
    throw InputError("wrong number of fresh names for the site");
  }
  for (const std::string& name : edit.fresh_names) {
    if (!IsValidIdentifier(name, snippet.language()) ||
        snippet.source().find(name) != std::string::npos) {
      throw InputError("fresh name collides: " + name);
    }
  }
  std::vector<TokenEdit> edits = plan->edits;
  if (!edit.fresh_names.empty()) {
    for (TokenEdit& e : edits) {
      e.replacement = SubstituteFresh(e.replacement, edit.fresh_names[0]);
    }
  }
  CodeSnippet out =
      Parse(ApplyEditsToText(snippet.source(), edits), snippet.language());
  if (!out.parse_ok()) {
    throw TransformFailed(std::string(RuleName(edit.site.rule)) +
                          " produced code that does not parse: " +
                          out.parse_error());
  }
  return out;
}

StructureCounts CountStructures(const CodeSnippet& snippet) {
  if (!snippet.parse_ok()) {
    throw PreconditionError("structure counts require a parsed snippet");
  }
  internal::RuleContext ctx(snippet);
  StructureCounts counts;
  counts[RuleIndex(TransformRule::kLoopForWhile)] = internal::CountLoops(ctx);
  counts[RuleIndex(TransformRule::kBranchIfElseIfIf)] =
      internal::CountBranches(ctx);
  counts[RuleIndex(TransformRule::kIncDecExpand)] = internal::CountIncDec(ctx);
  counts[RuleIndex(TransformRule::kCompoundAssignExpand)] =
      internal::CountCompound(ctx);
  counts[RuleIndex(TransformRule::kConstToVar)] = internal::CountConst(ctx);
  return counts;
}

CodeSnippet ReplayStructureLog(const CodeSnippet& original,
                               const std::vector<StructureEdit>& log) {
  CodeSnippet current = original;
  for (const StructureEdit& entry : log) {
    std::vector<TransformSite> sites = EnumerateSites(current);
    auto it = std::find_if(sites.begin(), sites.end(),
                           [&](const TransformSite& s) {
                             return s.rule == entry.site.rule &&
                                    s.direction == entry.site.direction &&
                                    s.ordinal == entry.site.ordinal;
                           });
    if (it == sites.end()) {
      throw InputError("structure log entry no longer matches a site");
    }
    current = ApplyTransform(current, StructureEdit{*it, entry.fresh_names});
  }
  return current;
}

}  // namespace mistforge
