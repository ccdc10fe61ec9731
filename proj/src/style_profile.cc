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

#include "mistforge/style_profile.h"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mistforge/errors.h"

namespace mistforge {

double StyleCell::p_a() const {
  int64_t total = n_a + n_b;
  return total == 0 ? 0.5 : static_cast<double>(n_a) / total;
}

double StyleCell::p_b() const {
  int64_t total = n_a + n_b;
  return total == 0 ? 0.5 : static_cast<double>(n_b) / total;
}

size_t StyleTable::Index(Language language, OriginLabel origin,
                         TransformRule rule) {
  size_t lang = language == Language::kJava ? 0 : 1;
  size_t org = static_cast<size_t>(LabelIndex(origin));
  return (lang * 2 + org) * kRuleCount + static_cast<size_t>(RuleIndex(rule));
}

StyleTable StyleTable::Build(
    const std::vector<std::pair<CodeSnippet, OriginLabel>>& corpus) {
  StyleTable table;
  for (const auto& [snippet, origin] : corpus) {
    if (!snippet.parse_ok()) {
      throw PreconditionError("style table corpus contains unparsed code");
    }
    table.Add(snippet.language(), origin, CountStructures(snippet));
  }
  return table;
}

const StyleCell& StyleTable::cell(Language language, OriginLabel origin,
                                  TransformRule rule) const {
  return cells_[Index(language, origin, rule)];
}

void StyleTable::Add(Language language, OriginLabel origin,
                     const StructureCounts& counts) {
  for (TransformRule rule : kAllRules) {
    StyleCell& c = cells_[Index(language, origin, rule)];
    c.n_b += counts[RuleIndex(rule)].count_b;
    c.n_a += counts[RuleIndex(rule)].count_a;
  }
}

std::string StyleTable::ToJson() const {
  nlohmann::json root = nlohmann::json::object();
  for (Language language : {Language::kJava, Language::kPython}) {
    for (OriginLabel origin : {OriginLabel::kHuman, OriginLabel::kLlm}) {
      for (TransformRule rule : kAllRules) {
        const StyleCell& c = cell(language, origin, rule);
        root[std::string(LanguageName(language))][std::string(
            OriginName(origin))][std::string(RuleName(rule))] = {
            {"n_b", c.n_b}, {"n_a", c.n_a}, {"p_a", c.p_a()},
            {"p_b", c.p_b()}};
      }
    }
  }
  return root.dump(2) + "\n";
}

StyleTable StyleTable::FromJson(std::string_view text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("style table is not valid JSON: ") +
                     e.what());
  }
  if (!root.is_object()) throw InputError("style table must be an object");
  StyleTable table;
  for (const auto& [lang_name, by_origin] : root.items()) {
    Language language;
    try {
      language = ParseLanguage(lang_name);
    } catch (const ConfigurationError& e) {
      throw InputError(e.what());
    }
    if (!by_origin.is_object()) throw InputError("bad style table entry");
    for (const auto& [origin_name, by_rule] : by_origin.items()) {
      OriginLabel origin = ParseOrigin(origin_name);
      if (!by_rule.is_object()) throw InputError("bad style table entry");
      for (const auto& [rule_name, counts] : by_rule.items()) {
        TransformRule rule;
        try {
          rule = ParseRule(rule_name);
        } catch (const ConfigurationError& e) {
          throw InputError(e.what());
        }
        if (!counts.is_object() || !counts.contains("n_b") ||
            !counts.contains("n_a") ||
            !counts["n_b"].is_number_integer() ||
            !counts["n_a"].is_number_integer()) {
          throw InputError("style table cell needs integer n_b and n_a");
        }
        StyleCell c{counts["n_b"].get<int64_t>(),
                    counts["n_a"].get<int64_t>()};
        if (c.n_b < 0 || c.n_a < 0) {
          throw InputError("style table counts must be non-negative");
        }
        table.cells_[Index(language, origin, rule)] = c;
      }
    }
  }
  return table;
}

void StyleTable::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << ToJson();
}

StyleTable StyleTable::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FromJson(buffer.str());
}

double TransformProbability(const StyleTable& table, Language language,
                            OriginLabel target_label, TransformRule rule) {
  return table.cell(language, Opposite(target_label), rule).p_a();
}

double SiteProbability(const StyleTable& table, Language language,
                       OriginLabel target_label, TransformRule rule,
                       Direction direction) {
  const StyleCell& c = table.cell(language, Opposite(target_label), rule);
  return direction == Direction::kBtoA ? c.p_a() : c.p_b();
}

}  // namespace mistforge
