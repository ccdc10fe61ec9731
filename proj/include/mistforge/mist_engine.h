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

#ifndef MISTFORGE_MIST_ENGINE_H_
#define MISTFORGE_MIST_ENGINE_H_

#include <cstdint>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "mistforge/code_model.h"
#include "mistforge/identifier_attack.h"
#include "mistforge/model_interface.h"
#include "mistforge/objectives.h"
#include "mistforge/random.h"
#include "mistforge/style_profile.h"
#include "mistforge/transform_rules.h"

namespace mistforge {

struct EngineConfig {
  int population_size = 30;
  // 0 means 5 × N_var.
  int max_iter = 0;
  double rename_rate = 0.5;
  int top_k = kDefaultTopK;
  uint64_t rng_seed = 7;
  bool stop_on_first_success = true;

  // Throws ConfigurationError for an odd or non-positive population, a rate
  // outside [0, 1], or a non-positive top_k.
  void Validate() const;
  int MaxIterFor(int n_var) const { return max_iter > 0 ? max_iter : 5 * n_var; }
};

struct Individual {
  CodeSnippet snippet;
  RenameMap gene;
  std::vector<StructureEdit> structure_log;
  std::optional<ObjectiveVector> objectives;
  bool first_flip = false;

  // Renamed identifiers whose replacement is present in the snippet.
  int ChangedIdentifiers() const;
};

// Rebuilds an individual's text: replays the structure log on the
// original, then applies the gene.
CodeSnippet Materialize(const CodeSnippet& original,
                        const std::vector<StructureEdit>& structure_log,
                        const RenameMap& gene);

// Caches verdicts by exact source text. Only cache misses reach the inner
// model, so the inner model's meter counts real queries.
class CachingModel final : public TargetModel {
 public:
  explicit CachingModel(TargetModel& inner) : inner_(inner) {}

 protected:
  ClassifierVerdict DoClassify(Language language,
                               std::string_view source) override;

 private:
  TargetModel& inner_;
  std::mutex mu_;
  std::unordered_map<std::string, ClassifierVerdict> cache_;
};

struct AttackContext {
  TargetModel* model = nullptr;
  CandidateProvider* provider = nullptr;
  EmbeddingProvider* embedder = nullptr;
  // Null means every cell falls back to 0.5.
  const StyleTable* style = nullptr;
};

// State of one attack on one snippet. Exposed so the operators can be
// exercised on their own.
class AttackState {
 public:
  // Queries the original and scores its identifiers. Throws
  // PreconditionError if the snippet does not parse, has no identifiers or
  // is misclassified.
  AttackState(const CodeSnippet& original, OriginLabel y_truth,
              const EngineConfig& config, const AttackContext& ctx);

  const CodeSnippet& original() const { return original_; }
  OriginLabel y_truth() const { return y_truth_; }
  const ImportanceVector& importance() const { return importance_; }
  double original_confidence() const { return original_confidence_; }
  Rng& rng() { return rng_; }
  // Real model queries so far, including importance scoring.
  int64_t queries() const { return metered_.query_count(); }

  Individual Seed() const;
  // One rename with probability r, otherwise one style-driven structure
  // transformation; falls back to a rename when there is no structure site.
  // Code-level failures return the input unchanged.
  Individual Mutate(const Individual& ind);
  Individual MutateRename(const Individual& ind);
  // nullopt when the snippet has no structure site.
  std::optional<Individual> MutateStructure(const Individual& ind);
  std::pair<Individual, Individual> Crossover(const Individual& a,
                                              const Individual& b);
  // Fills objectives and first_flip.
  void Evaluate(Individual& ind);

 private:
  std::set<std::string> ReservedNames(const Individual& ind) const;

  CodeSnippet original_;
  OriginLabel y_truth_;
  EngineConfig config_;
  AttackContext ctx_;
  MeteredModel metered_;
  CachingModel cached_;
  Rng rng_;
  ImportanceVector importance_;
  double original_confidence_ = 0.0;
  std::set<std::string> original_tokens_;
};

// Pareto fronts by non-dominated sorting; indices within a front keep
// input order.
std::vector<std::vector<int>> NonDominatedFronts(
    const std::vector<ObjectiveVector>& points);

// Crowding distance of each member of `front` (aligned with it). The
// extremes of every objective that varies within the front get infinity, as
// does every member of a front of at most two.
std::vector<double> CrowdingDistances(const std::vector<ObjectiveVector>& points,
                                      const std::vector<int>& front);

// Indices of the n survivors in input order: whole fronts by rank, then the
// boundary front by decreasing crowding distance, ties by input order.
std::vector<int> SelectIndices(const std::vector<ObjectiveVector>& points,
                               int n);

// Throws PreconditionError if an individual is unevaluated.
std::vector<Individual> Select(std::vector<Individual> pool, int n);

struct AttackOutcome {
  bool success = false;
  std::optional<Individual> adversarial;
  std::optional<int64_t> queries_to_first_success;
  int64_t total_queries = 0;
  double original_confidence = 0.0;
  double best_confidence_drop = 0.0;
  // Evaluated individual with the lowest true-label confidence.
  std::optional<Individual> best;
  std::vector<Individual> final_population;
  int iterations = 0;

  // The first success, else the largest confidence drop.
  const Individual* TrainingSample() const;
};

AttackOutcome Attack(const CodeSnippet& original, OriginLabel y_truth,
                     const EngineConfig& config, const AttackContext& ctx);

}  // namespace mistforge

#endif  // MISTFORGE_MIST_ENGINE_H_
