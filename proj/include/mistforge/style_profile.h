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

#ifndef MISTFORGE_STYLE_PROFILE_H_
#define MISTFORGE_STYLE_PROFILE_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mistforge/code_model.h"
#include "mistforge/language.h"
#include "mistforge/transform_rules.h"

namespace mistforge {

// Occurrence counts of the two forms of one rule within one
// (language, origin) subset.
struct StyleCell {
  int64_t n_b = 0;
  int64_t n_a = 0;

  // Relative frequency of the transformed form; 0.5 for an empty cell.
  double p_a() const;
  double p_b() const;

  bool operator==(const StyleCell& other) const = default;
};

// Style reference table. Immutable once built; concurrent reads are safe.
class StyleTable {
 public:
  StyleTable() = default;

  // Aggregates CountStructures over every snippet of each (language,
  // origin) subset. Throws PreconditionError for an unparsed snippet.
  static StyleTable Build(
      const std::vector<std::pair<CodeSnippet, OriginLabel>>& corpus);

  const StyleCell& cell(Language language, OriginLabel origin,
                        TransformRule rule) const;
  void Add(Language language, OriginLabel origin,
           const StructureCounts& counts);

  // Nested object keyed language → origin → rule holding n_b and n_a.
  std::string ToJson() const;
  // Throws InputError on malformed input or negative counts.
  static StyleTable FromJson(std::string_view text);
  void Save(const std::string& path) const;
  static StyleTable Load(const std::string& path);

  bool operator==(const StyleTable& other) const = default;

 private:
  static size_t Index(Language language, OriginLabel origin,
                      TransformRule rule);

  std::array<StyleCell, 2 * 2 * kRuleCount> cells_{};
};

// Probability of rewriting an S^b site of `rule` in a sample labeled
// `target_label`, read from the cell of the same language and the opposite
// origin.
double TransformProbability(const StyleTable& table, Language language,
                            OriginLabel target_label, TransformRule rule);

// Probability for a site in the given direction: p_a of the reference cell
// for BtoA, p_b for AtoB.
double SiteProbability(const StyleTable& table, Language language,
                       OriginLabel target_label, TransformRule rule,
                       Direction direction);

}  // namespace mistforge

#endif  // MISTFORGE_STYLE_PROFILE_H_
