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

#ifndef MISTFORGE_IDENTIFIER_ATTACK_H_
#define MISTFORGE_IDENTIFIER_ATTACK_H_

#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mistforge/code_model.h"
#include "mistforge/http_json.h"
#include "mistforge/language.h"
#include "mistforge/model_interface.h"
#include "mistforge/random.h"

namespace mistforge {

inline constexpr std::string_view kImportanceMask = "<UNK>";
inline constexpr std::string_view kCandidateMask = "<extra_id_0>";
inline constexpr int kDefaultTopK = 40;

struct ImportanceVector {
  std::vector<std::string> names;  // IdentifierTable order
  std::vector<double> scores;
  std::vector<double> probs;
};

// Pairs aligned with the original snippet's IdentifierTable; identity pairs
// mean "not renamed".
struct RenameMap {
  std::vector<std::pair<std::string, std::string>> pairs;

  static RenameMap Identity(const IdentifierTable& table);
  int ChangedCount() const;
  bool operator==(const RenameMap& other) const = default;
};

// Source text with every occurrence of identifier `index` replaced by the
// raw mask text. The result is not expected to parse.
std::string MaskIdentifier(const CodeSnippet& snippet, int index,
                           std::string_view mask);

// Clamps scores at zero and normalizes; uniform when nothing is positive.
std::vector<double> SelectionProbabilities(const std::vector<double>& scores);

// One query for the snippet plus one per identifier. Throws
// PreconditionError for unparsed snippets or an empty identifier table.
ImportanceVector ImportanceScores(const CodeSnippet& snippet,
                                  TargetModel& model, OriginLabel y_truth);

int SampleRenameTarget(const ImportanceVector& iv, Rng& rng);

// Context-aware rename suggestions for a masked snippet.
class CandidateProvider {
 public:
  virtual ~CandidateProvider() = default;
  // Up to k names, best first. May be called concurrently.
  virtual std::vector<std::string> Predict(std::string_view masked_code,
                                           Language language, int k) = 0;
};

// Offline provider: the most frequent identifier names of a corpus per
// language, ties broken alphabetically. Ignores the context.
class FrequencyCandidateProvider final : public CandidateProvider {
 public:
  static FrequencyCandidateProvider Build(
      const std::vector<CodeSnippet>& corpus);

  std::vector<std::string> Predict(std::string_view masked_code,
                                   Language language, int k) override;
  const std::vector<std::string>& Ranked(Language language) const;

 private:
  std::map<Language, std::vector<std::string>> ranked_;
};

// Provider behind `POST /predict_identifiers` {code, k} → {candidates}.
class RemoteCandidateProvider final : public CandidateProvider {
 public:
  explicit RemoteCandidateProvider(std::string_view url,
                                   RetryPolicy policy = {})
      : endpoint_(url), policy_(policy) {}

  std::vector<std::string> Predict(std::string_view masked_code,
                                   Language language, int k) override;

 private:
  HttpEndpoint endpoint_;
  RetryPolicy policy_;
};

// True if `name` could replace an identifier of the snippet: lexically
// valid, not a builtin, and not any identifier already in the source.
bool IsUsableReplacement(const CodeSnippet& snippet, std::string_view name);

// Masks identifier `target_index` with kCandidateMask, queries the provider
// and keeps usable, distinct names (at most k). Throws AttackStepSkipped if
// none survive.
std::vector<std::string> ProposeCandidates(const CodeSnippet& snippet,
                                           int target_index,
                                           CandidateProvider& provider,
                                           int k = kDefaultTopK);

// Draws candidates uniformly, redrawing while `accept` rejects them, for at
// most `max_attempts` draws. Throws AttackStepSkipped when none is accepted.
std::string ChooseCandidate(
    const std::vector<std::string>& candidates, Rng& rng,
    const std::function<bool(const std::string&)>& accept, int max_attempts);

// Replaces every span of identifier `target_index`. Renaming to the same
// name returns the snippet unchanged. Throws InputError if the name is not
// usable.
std::pair<CodeSnippet, std::pair<std::string, std::string>> Rename(
    const CodeSnippet& snippet, int target_index, const std::string& new_name);

// Applies all non-identity pairs at once. Pairs whose original name no
// longer occurs are skipped. Throws InputError if a replacement is not
// usable or two replacements coincide.
CodeSnippet ApplyRenameMap(const CodeSnippet& snippet, const RenameMap& map);

// Opens "builtin-frequency" (needs a corpus) or "http:<service url>".
std::unique_ptr<CandidateProvider> OpenCandidateProvider(
    std::string_view locator, const std::vector<CodeSnippet>& corpus,
    RetryPolicy policy = {});

}  // namespace mistforge

#endif  // MISTFORGE_IDENTIFIER_ATTACK_H_
