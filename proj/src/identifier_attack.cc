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

#include "mistforge/identifier_attack.h"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "mistforge/errors.h"

namespace mistforge {

namespace {

std::string WithSpansReplaced(const CodeSnippet& snippet,
                              const std::vector<ByteRange>& spans,
                              std::string_view text) {
  std::vector<TokenEdit> edits;
  edits.reserve(spans.size());
  for (const ByteRange& span : spans) {
    edits.push_back(TokenEdit{span, std::string(text)});
  }
  return ApplyEditsToText(snippet.source(), std::move(edits));
}

std::unordered_set<std::string> SourceIdentifierTokens(
    const CodeSnippet& snippet) {
  std::unordered_set<std::string> names;
  if (snippet.parse_ok()) {
    for (const Token& tok : snippet.tree().tokens()) {
      if (tok.kind == TokenKind::kIdentifier) names.emplace(tok.text);
    }
  } else {
    for (const Token& tok : Lex(snippet.source(), snippet.language(), true)) {
      if (tok.kind == TokenKind::kIdentifier) names.emplace(tok.text);
    }
  }
  return names;
}

bool IsBlockedName(std::string_view name, Language language) {
  if (!IsValidIdentifier(name, language)) return true;
  if (language == Language::kPython && IsPythonBuiltin(name)) return true;
  return false;
}

}  // namespace

RenameMap RenameMap::Identity(const IdentifierTable& table) {
  RenameMap map;
  map.pairs.reserve(table.size());
  for (const IdentifierEntry& e : table.entries()) {
    map.pairs.emplace_back(e.name, e.name);
  }
  return map;
}

int RenameMap::ChangedCount() const {
  int n = 0;
  for (const auto& [from, to] : pairs) n += from != to;
  return n;
}

std::string MaskIdentifier(const CodeSnippet& snippet, int index,
                           std::string_view mask) {
  const IdentifierTable& table = snippet.identifiers();
  if (index < 0 || static_cast<size_t>(index) >= table.size()) {
    throw InputError("identifier index out of range");
  }
  return WithSpansReplaced(snippet, table[index].spans, mask);
}

std::vector<double> SelectionProbabilities(const std::vector<double>& scores) {
  std::vector<double> probs(scores.size(), 0.0);
  if (scores.empty()) return probs;
  double total = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    probs[i] = scores[i] > 0.0 ? scores[i] : 0.0;
    total += probs[i];
  }
  if (total <= 0.0) {
    std::fill(probs.begin(), probs.end(), 1.0 / scores.size());
    return probs;
  }
  for (double& p : probs) p /= total;
  return probs;
}

ImportanceVector ImportanceScores(const CodeSnippet& snippet,
                                  TargetModel& model, OriginLabel y_truth) {
  if (!snippet.parse_ok()) {
    throw PreconditionError("importance scoring needs a parsed snippet");
  }
  const IdentifierTable& table = snippet.identifiers();
  if (table.empty()) {
    throw PreconditionError("snippet has no renameable identifiers");
  }
  const double base =
      model.Classify(snippet.language(), snippet.source()).prob(y_truth);
  ImportanceVector iv;
  for (size_t i = 0; i < table.size(); ++i) {
    std::string masked =
        MaskIdentifier(snippet, static_cast<int>(i), kImportanceMask);
    double p = model.Classify(snippet.language(), masked).prob(y_truth);
    iv.names.push_back(table[i].name);
    iv.scores.push_back(base - p);
  }
  iv.probs = SelectionProbabilities(iv.scores);
  return iv;
}

int SampleRenameTarget(const ImportanceVector& iv, Rng& rng) {
  if (iv.probs.empty()) throw PreconditionError("empty importance vector");
  double u = rng.Uniform();
  double acc = 0.0;
  int last_positive = 0;
  for (size_t i = 0; i < iv.probs.size(); ++i) {
    if (iv.probs[i] <= 0.0) continue;
    last_positive = static_cast<int>(i);
    acc += iv.probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  return last_positive;
}

FrequencyCandidateProvider FrequencyCandidateProvider::Build(
    const std::vector<CodeSnippet>& corpus) {
  std::map<Language, std::unordered_map<std::string, int64_t>> counts;
  for (const CodeSnippet& snippet : corpus) {
    if (!snippet.parse_ok()) continue;
    auto& lang_counts = counts[snippet.language()];
    for (const IdentifierEntry& e : snippet.identifiers().entries()) {
      lang_counts[e.name] += static_cast<int64_t>(e.spans.size());
    }
  }
  FrequencyCandidateProvider provider;
  for (auto& [lang, by_name] : counts) {
    std::vector<std::pair<std::string, int64_t>> items(by_name.begin(),
                                                       by_name.end());
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    auto& ranked = provider.ranked_[lang];
    for (auto& item : items) ranked.push_back(std::move(item.first));
  }
  return provider;
}

const std::vector<std::string>& FrequencyCandidateProvider::Ranked(
    Language language) const {
  static const std::vector<std::string> kEmpty;
  auto it = ranked_.find(language);
  return it == ranked_.end() ? kEmpty : it->second;
}

std::vector<std::string> FrequencyCandidateProvider::Predict(
    std::string_view, Language language, int k) {
  const auto& ranked = Ranked(language);
  size_t n = std::min(ranked.size(), static_cast<size_t>(std::max(k, 0)));
  return {ranked.begin(), ranked.begin() + n};
}

std::vector<std::string> RemoteCandidateProvider::Predict(
    std::string_view masked_code, Language, int k) {
  nlohmann::json body = {{"code", std::string(masked_code)}, {"k", k}};
  nlohmann::json reply =
      PostJson(endpoint_, "/predict_identifiers", body, policy_);
  auto it = reply.find("candidates");
  if (it == reply.end() || !it->is_array()) {
    throw ProtocolError("/predict_identifiers reply lacks a candidates array");
  }
  std::vector<std::string> out;
  for (const auto& c : *it) {
    if (!c.is_string()) {
      throw ProtocolError("/predict_identifiers candidate is not a string");
    }
    out.push_back(c.get<std::string>());
  }
  return out;
}

bool IsUsableReplacement(const CodeSnippet& snippet, std::string_view name) {
  if (IsBlockedName(name, snippet.language())) return false;
  return !SourceIdentifierTokens(snippet).contains(std::string(name));
}

std::vector<std::string> ProposeCandidates(const CodeSnippet& snippet,
                                           int target_index,
                                           CandidateProvider& provider,
                                           int k) {
  std::string masked = MaskIdentifier(snippet, target_index, kCandidateMask);
  std::vector<std::string> raw =
      provider.Predict(masked, snippet.language(), k);
  std::unordered_set<std::string> taken = SourceIdentifierTokens(snippet);
  std::vector<std::string> out;
  for (std::string& name : raw) {
    if (static_cast<int>(out.size()) >= k) break;
    if (IsBlockedName(name, snippet.language())) continue;
    if (!taken.insert(name).second) continue;
    out.push_back(std::move(name));
  }
  if (out.empty()) {
    throw AttackStepSkipped("no usable rename candidate for '" +
                            snippet.identifiers()[target_index].name + "'");
  }
  return out;
}

std::string ChooseCandidate(
    const std::vector<std::string>& candidates, Rng& rng,
    const std::function<bool(const std::string&)>& accept, int max_attempts) {
  if (!candidates.empty()) {
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
      const std::string& pick = candidates[rng.Index(candidates.size())];
      if (!accept || accept(pick)) return pick;
    }
  }
  throw AttackStepSkipped("every drawn rename candidate was rejected");
}

std::pair<CodeSnippet, std::pair<std::string, std::string>> Rename(
    const CodeSnippet& snippet, int target_index, const std::string& new_name) {
  if (!snippet.parse_ok()) {
    throw PreconditionError("renaming needs a parsed snippet");
  }
  const IdentifierTable& table = snippet.identifiers();
  if (target_index < 0 || static_cast<size_t>(target_index) >= table.size()) {
    throw InputError("identifier index out of range");
  }
  const IdentifierEntry& entry = table[target_index];
  if (entry.name == new_name) return {snippet, {entry.name, new_name}};
  if (!IsUsableReplacement(snippet, new_name)) {
    throw InputError("'" + new_name + "' cannot replace '" + entry.name + "'");
  }
  std::vector<TokenEdit> edits;
  for (const ByteRange& span : entry.spans) {
    edits.push_back(TokenEdit{span, new_name});
  }
  return {ApplyEdits(snippet, std::move(edits)), {entry.name, new_name}};
}

CodeSnippet ApplyRenameMap(const CodeSnippet& snippet, const RenameMap& map) {
  if (!snippet.parse_ok()) {
    throw PreconditionError("renaming needs a parsed snippet");
  }
  const IdentifierTable& table = snippet.identifiers();
  std::unordered_set<std::string> tokens = SourceIdentifierTokens(snippet);
  std::unordered_set<std::string> targets;
  std::vector<TokenEdit> edits;
  for (const auto& [from, to] : map.pairs) {
    if (from == to) continue;
    int idx = table.Find(from);
    if (idx < 0) continue;
    if (IsBlockedName(to, snippet.language()) || tokens.contains(to) ||
        !targets.insert(to).second) {
      throw InputError("'" + to + "' cannot replace '" + from + "'");
    }
    for (const ByteRange& span : table[idx].spans) {
      edits.push_back(TokenEdit{span, to});
    }
  }
  if (edits.empty()) return snippet;
  return ApplyEdits(snippet, std::move(edits));
}

std::unique_ptr<CandidateProvider> OpenCandidateProvider(
    std::string_view locator, const std::vector<CodeSnippet>& corpus,
    RetryPolicy policy) {
  if (locator == "builtin-frequency") {
    return std::make_unique<FrequencyCandidateProvider>(
        FrequencyCandidateProvider::Build(corpus));
  }
  if (locator.starts_with("http:") && !locator.starts_with("http://")) {
    locator.remove_prefix(5);
  }
  if (locator.starts_with("http://")) {
    return std::make_unique<RemoteCandidateProvider>(locator, policy);
  }
  throw ConfigurationError("unknown candidate provider '" + std::string(locator) +
                           "'");
}

}  // namespace mistforge
