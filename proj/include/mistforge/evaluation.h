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

#ifndef MISTFORGE_EVALUATION_H_
#define MISTFORGE_EVALUATION_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mistforge/dataset.h"
#include "mistforge/mist_engine.h"
#include "mistforge/model_interface.h"

namespace mistforge {

enum class Exclusion { kParse, kNoIdentifier, kWrongPrediction };

std::string_view ExclusionName(Exclusion reason);

struct SubsetX {
  std::vector<LabeledSample> kept;
  std::vector<std::pair<std::string, Exclusion>> excluded;
};

// Keeps samples that parse, have an identifier and are classified
// correctly. Queries the model once per parsed sample with identifiers.
SubsetX FilterSubsetX(const std::vector<LabeledSample>& samples,
                      TargetModel& model);

// Result of attacking one sample; `outcome` is empty when the attack was
// skipped.
struct AttackRecord {
  std::string id;
  std::optional<AttackOutcome> outcome;
  std::string skip_reason;
};

// Attacks every sample with `jobs` workers. Each sample's engine seed is
// DeriveSeed(seed, id), so results do not depend on `jobs`. Precondition
// failures become skipped records; other errors propagate.
std::vector<AttackRecord> RunAttacks(const std::vector<LabeledSample>& samples,
                                     const EngineConfig& config,
                                     const AttackContext& ctx, uint64_t seed,
                                     int jobs);

// Flat per-sample summary, one line of the attack output JSONL.
struct SampleOutcome {
  std::string id;
  Language language = Language::kJava;
  OriginLabel label = OriginLabel::kHuman;
  bool skipped = false;
  std::string skip_reason;
  bool success = false;
  std::optional<int64_t> queries_to_first_success;
  int64_t total_queries = 0;
  int n_var = 0;
  int changed_identifiers = 0;
  double semantic_distance = 0.0;
  int64_t edit_distance = 0;
  double original_confidence = 0.0;
  double best_confidence_drop = 0.0;
  int iterations = 0;
  // First success, else empty.
  std::optional<std::string> adversarial_code;
  // First success, else largest confidence drop.
  std::optional<std::string> training_code;

  bool operator==(const SampleOutcome& other) const = default;
};

// Distances and identifier counts describe the first success; they stay
// zero for failed attacks.
SampleOutcome Summarize(const LabeledSample& sample,
                        const AttackRecord& record);
nlohmann::json OutcomeToJson(const SampleOutcome& outcome);
// Throws InputError on missing or mistyped fields.
SampleOutcome OutcomeFromJson(const nlohmann::json& json);
std::vector<SampleOutcome> ReadOutcomes(const std::string& path);
std::string OutcomesToJsonl(const std::vector<SampleOutcome>& outcomes);

struct MetricsReport {
  double asr = 0.0;
  // Empty without successes.
  std::optional<double> amq;
  std::optional<double> icr;
  std::optional<double> sd_mean;
  std::optional<double> ed_mean;
  int n_samples = 0;
  int n_success = 0;
  int n_skipped = 0;
};

// ASR over attacked (non-skipped) samples; the rest average over successes.
// AMQ counts importance-scoring queries. Throws InputError when no sample
// was attacked.
MetricsReport ComputeMetrics(const std::vector<SampleOutcome>& outcomes);
nlohmann::json MetricsToJson(const MetricsReport& report);

// Columns in order: ASR (benefit), ICR, SD, ED, AMQ (costs).
inline constexpr std::array<std::string_view, 5> kTopsisColumns = {
    "asr", "icr", "sd", "ed", "amq"};
using TopsisWeights = std::array<double, 5>;
inline constexpr TopsisWeights kEqualWeights = {0.2, 0.2, 0.2, 0.2, 0.2};
inline constexpr TopsisWeights kAsrPriorityWeights = {0.6, 0.1, 0.1, 0.1, 0.1};

// "a,b,c,d,e" summing to 1 within 1e-9. Throws ConfigurationError.
TopsisWeights ParseWeights(std::string_view text);

struct TopsisAlternative {
  std::string name;
  std::array<double, 5> values{};  // kTopsisColumns order
};

struct TopsisScore {
  std::string name;
  double score = 0.0;
  // 1 is best; equal scores share a rank.
  int rank = 0;
};

// Scores in input order. Throws InputError for fewer than two
// alternatives, negative or non-finite values, or an all-zero column
// (named in the message); ConfigurationError for bad weights.
std::vector<TopsisScore> TopsisRank(
    const std::vector<TopsisAlternative>& alternatives,
    const TopsisWeights& weights);
// Header "name,score,rank", rows sorted by rank then name.
std::string TopsisToCsv(const std::vector<TopsisScore>& scores);
// Reads "name,asr,icr,sd,ed,amq" CSV with a header row.
std::vector<TopsisAlternative> ReadTopsisInput(const std::string& csv);
TopsisAlternative AlternativeFromMetrics(std::string name,
                                         const MetricsReport& report);

struct AugmentedSet {
  std::vector<LabeledSample> samples;  // adversarial first, then originals
  int n_attacked = 0;
  int n_adversarial = 0;
  int n_original = 0;
};

inline constexpr double kAttackFraction = 0.10;

// round(7/3 × n_adversarial), the originals count of a 70/30 mix.
int OriginalsForMix(int n_adversarial);

// Attacks a seeded 10% of the training set, keeps one sample per attacked
// record (first success, else largest confidence drop) with the record's
// label, and adds round(7/3 × |adversarial|) originals drawn without
// replacement. Without any attacked record the set is the training set.
AugmentedSet BuildAugmentedSet(const std::vector<LabeledSample>& training,
                               const EngineConfig& config,
                               const AttackContext& ctx, uint64_t seed,
                               int jobs);

// Stratified by label: each label's samples are shuffled and halved, the
// odd one going to the first half.
std::pair<std::vector<LabeledSample>, std::vector<LabeledSample>> SplitHalves(
    const std::vector<LabeledSample>& samples, uint64_t seed);

struct Attacker {
  std::string name;
  EngineConfig config;
};

struct Rq3Result {
  std::vector<std::string> train_sources;  // "none", then attackers
  std::vector<std::string> eval_sources;   // attackers
  // [train][eval]; empty when the attacker had no success on S2.
  std::vector<std::vector<std::optional<double>>> accuracy;
  std::vector<std::string> s1_ids;
  std::vector<std::string> s2_ids;
  std::vector<int> eval_sizes;
};

// Fine-tunes `model` once per attacker on its S1 samples and scores every
// fine-tuned model on every attacker's S2 successes. Attacks target
// `model`; ctx.model is not used.
Rq3Result RunRq3(const std::vector<LabeledSample>& test_set,
                 const std::vector<Attacker>& attackers,
                 const ReferenceClassifier& model, const AttackContext& ctx,
                 uint64_t seed, int jobs);
std::string Rq3ToCsv(const Rq3Result& result);

}  // namespace mistforge

#endif  // MISTFORGE_EVALUATION_H_
