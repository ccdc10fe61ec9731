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

#ifndef MISTFORGE_TRANSFORM_RULES_H_
#define MISTFORGE_TRANSFORM_RULES_H_

#include <array>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mistforge/code_model.h"

namespace mistforge {

enum class TransformRule : uint8_t {
  kLoopForWhile,
  kBranchIfElseIfIf,
  kIncDecExpand,
  kCompoundAssignExpand,
  kConstToVar,
};

inline constexpr int kRuleCount = 5;
inline constexpr std::array<TransformRule, kRuleCount> kAllRules = {
    TransformRule::kLoopForWhile, TransformRule::kBranchIfElseIfIf,
    TransformRule::kIncDecExpand, TransformRule::kCompoundAssignExpand,
    TransformRule::kConstToVar};

enum class RuleCategory { kControlFlow, kExpression, kConstVar };

RuleCategory CategoryOf(TransformRule rule);
std::string_view RuleName(TransformRule rule);
// Throws ConfigurationError for unknown names.
TransformRule ParseRule(std::string_view name);
inline int RuleIndex(TransformRule rule) { return static_cast<int>(rule); }

// BtoA rewrites the original form S^b (for, if-else, j--, x+=y, literal
// argument) into S^a (while, if-if, j=j-1, x=x+y, named constant); AtoB is
// the reverse.
enum class Direction : uint8_t { kBtoA, kAtoB };

std::string_view DirectionName(Direction direction);
Direction ParseDirection(std::string_view name);

struct TransformSite {
  TransformRule rule = TransformRule::kLoopForWhile;
  Direction direction = Direction::kBtoA;
  ByteRange node_span;
  // Position among the sites of the same rule and direction, in
  // enumeration order. Lets a site be found again after renames.
  int ordinal = 0;

  bool operator==(const TransformSite& other) const = default;
};

struct StructureEdit {
  TransformSite site;
  // Names of variables the rewrite introduces.
  std::vector<std::string> fresh_names;
};

struct RuleCounts {
  int count_b = 0;
  int count_a = 0;

  bool operator==(const RuleCounts& other) const = default;
};

using StructureCounts = std::array<RuleCounts, kRuleCount>;

// All applicable sites of both directions of every rule, ordered by span
// start. Throws PreconditionError unless snippet.parse_ok().
std::vector<TransformSite> EnumerateSites(const CodeSnippet& snippet);

// Picks fresh names for the site (if the rule needs any) that collide
// neither with names in the snippet nor with `reserved`.
StructureEdit PrepareEdit(const CodeSnippet& snippet, const TransformSite& site,
                          const std::set<std::string>& reserved = {});

// Rewrites the site. Throws InputError if the site is not among the
// snippet's current sites or a fresh name collides, and TransformFailed if
// the result does not reparse.
CodeSnippet ApplyTransform(const CodeSnippet& snippet,
                           const StructureEdit& edit);

// Occurrences of both structural forms of every rule.
StructureCounts CountStructures(const CodeSnippet& snippet);

// `mist_tmp_<k>` with the smallest k not used in the snippet or reserved.
std::string FreshName(const CodeSnippet& snippet,
                      const std::set<std::string>& reserved);

// Re-applies a structure log to the snippet it was recorded on, locating
// each site by rule, direction and ordinal.
CodeSnippet ReplayStructureLog(const CodeSnippet& original,
                               const std::vector<StructureEdit>& log);

}  // namespace mistforge

#endif  // MISTFORGE_TRANSFORM_RULES_H_
