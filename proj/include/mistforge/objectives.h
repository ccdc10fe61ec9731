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

#ifndef MISTFORGE_OBJECTIVES_H_
#define MISTFORGE_OBJECTIVES_H_

#include <cstdint>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mistforge/code_model.h"
#include "mistforge/http_json.h"
#include "mistforge/identifier_attack.h"
#include "mistforge/model_interface.h"

namespace mistforge {

struct ObjectiveVector {
  double f1_adversarial_loss = 0.0;
  double f2_semantic_distance = 0.0;
  int64_t f3_edit_distance = 0;

  bool operator==(const ObjectiveVector& other) const = default;
};

// All three objectives are minimized.
bool Dominates(const ObjectiveVector& a, const ObjectiveVector& b);

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual size_t dimension() const = 0;
  // Deterministic per name, unit length.
  virtual std::vector<double> Embed(std::string_view name) = 0;
};

// Hashes the character trigrams of "^name$" (FNV-1a, 32 bit) into
// kDimension buckets and L2-normalizes the counts.
class TrigramEmbedder final : public EmbeddingProvider {
 public:
  static constexpr size_t kDimension = 256;

  size_t dimension() const override { return kDimension; }
  std::vector<double> Embed(std::string_view name) override;
};

// Embeddings from `POST /embed` {token} → {vector}, cached per token and
// normalized locally. The dimension is fixed by the first reply.
class RemoteEmbedder final : public EmbeddingProvider {
 public:
  explicit RemoteEmbedder(std::string_view url, RetryPolicy policy = {})
      : endpoint_(url), policy_(policy) {}

  size_t dimension() const override;
  std::vector<double> Embed(std::string_view name) override;

 private:
  HttpEndpoint endpoint_;
  RetryPolicy policy_;
  mutable std::mutex mu_;
  size_t dimension_ = 0;
  std::unordered_map<std::string, std::vector<double>> cache_;
};

// Opens "trigram" or "http:<service url>".
std::unique_ptr<EmbeddingProvider> OpenEmbedder(std::string_view locator,
                                                RetryPolicy policy = {});

double CosineSimilarity(const std::vector<double>& a,
                        const std::vector<double>& b);

// Confidence of the model in the true label; one query.
double AdversarialLoss(TargetModel& model, const CodeSnippet& candidate,
                       OriginLabel y_truth);

// Sum of 1 - cos over the gene's pairs; identity pairs add nothing.
double SemanticDistance(const RenameMap& gene, EmbeddingProvider& embedder);

// Levenshtein distance over Unicode code points.
int64_t Levenshtein(std::string_view a, std::string_view b);

inline int64_t EditDistance(const CodeSnippet& original,
                            const CodeSnippet& candidate) {
  return Levenshtein(original.source(), candidate.source());
}

}  // namespace mistforge

#endif  // MISTFORGE_OBJECTIVES_H_
