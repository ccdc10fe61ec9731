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

#ifndef MISTFORGE_MODEL_INTERFACE_H_
#define MISTFORGE_MODEL_INTERFACE_H_

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mistforge/code_model.h"
#include "mistforge/http_json.h"
#include "mistforge/language.h"
#include "mistforge/transform_rules.h"

namespace mistforge {

inline constexpr double kDecisionThreshold = 0.5;
inline constexpr double kProbabilityTolerance = 1e-6;

struct ClassifierVerdict {
  double prob_human = 0.5;
  double prob_llm = 0.5;
  OriginLabel predicted = OriginLabel::kLlm;

  double prob(OriginLabel label) const {
    return label == OriginLabel::kHuman ? prob_human : prob_llm;
  }
};

// Validates a probability pair and applies the decision threshold. Throws
// ProtocolError if a value is outside [0, 1] or the pair does not sum to 1.
ClassifierVerdict MakeVerdict(double prob_human, double prob_llm);
// Parses {"prob_human": x, "prob_llm": y}. Throws ProtocolError.
ClassifierVerdict VerdictFromJson(const nlohmann::json& body);

// Black-box detector. Classify may be called concurrently.
class TargetModel {
 public:
  virtual ~TargetModel() = default;

  ClassifierVerdict Classify(Language language, std::string_view source) {
    query_count_.fetch_add(1, std::memory_order_relaxed);
    return DoClassify(language, source);
  }
  int64_t query_count() const {
    return query_count_.load(std::memory_order_relaxed);
  }

 protected:
  virtual ClassifierVerdict DoClassify(Language language,
                                       std::string_view source) = 0;

 private:
  std::atomic<int64_t> query_count_{0};
};

// Forwards to another model and counts the queries of one attack.
class MeteredModel final : public TargetModel {
 public:
  explicit MeteredModel(TargetModel& inner) : inner_(inner) {}

 protected:
  ClassifierVerdict DoClassify(Language language,
                               std::string_view source) override {
    return inner_.Classify(language, source);
  }

 private:
  TargetModel& inner_;
};

// Detector behind `POST /classify`.
class RemoteModel final : public TargetModel {
 public:
  explicit RemoteModel(std::string_view url, RetryPolicy policy = {})
      : endpoint_(url), policy_(policy) {}

 protected:
  ClassifierVerdict DoClassify(Language language,
                               std::string_view source) override;

 private:
  HttpEndpoint endpoint_;
  RetryPolicy policy_;
};

using SparseVector = std::vector<std::pair<uint32_t, double>>;
using LabeledCorpus = std::vector<std::pair<CodeSnippet, OriginLabel>>;

struct TrainOptions {
  double learning_rate = 0.5;
  int epochs = 40;
  int batch_size = 16;
  double l2 = 0.0;
  uint64_t seed = 7;
};

struct TrainReport {
  double accuracy = 0.0;
  double loss = 0.0;
};

// Logistic regression over hashed identifier names, the ten structure-form
// counts and snippet length. Inference is deterministic.
class ReferenceClassifier {
 public:
  static constexpr uint32_t kHashBuckets = 4096;
  static constexpr uint32_t kStructureOffset = kHashBuckets;
  static constexpr uint32_t kLengthIndex = kHashBuckets + 2 * kRuleCount;
  static constexpr uint32_t kDimension = kLengthIndex + 1;

  ReferenceClassifier() : weights_(kDimension, 0.0) {}

  // Features of a snippet; unparsable code contributes its identifier
  // tokens and length only.
  static SparseVector Featurize(const CodeSnippet& snippet);
  static SparseVector Featurize(Language language, std::string_view source);

  double Logit(const SparseVector& x) const;
  double ProbLlm(const SparseVector& x) const;
  ClassifierVerdict Predict(const CodeSnippet& snippet) const;
  ClassifierVerdict Predict(Language language, std::string_view source) const;

  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }
  // Throws InputError unless weights has kDimension entries.
  void SetParameters(std::vector<double> weights, double bias);

  // Mean cross-entropy over the examples (labels: 1 = LLM) plus the L2
  // term, and its gradient with respect to (weights..., bias).
  double Loss(const std::vector<SparseVector>& xs,
              const std::vector<int>& labels, double l2 = 0.0) const;
  std::vector<double> LossGradient(const std::vector<SparseVector>& xs,
                                   const std::vector<int>& labels,
                                   double l2 = 0.0) const;

  // Runs mini-batch gradient descent over the examples for
  // options.epochs passes in a seeded order.
  void Fit(const std::vector<SparseVector>& xs, const std::vector<int>& labels,
           const TrainOptions& options);

  std::string ToJson() const;
  static ReferenceClassifier FromJson(std::string_view text);
  void Save(const std::string& path) const;
  static ReferenceClassifier Load(const std::string& path);

 private:
  std::vector<double> weights_;
  double bias_ = 0.0;
};

// Trains from zero weights. Throws InputError unless both labels occur.
ReferenceClassifier TrainReference(const LabeledCorpus& corpus,
                                   const TrainOptions& options,
                                   TrainReport* report = nullptr);

// Defaults for fine-tuning: a single epoch of per-sample SGD.
TrainOptions FineTuneOptions();

// Continues training on the augmented set. An empty set returns the model
// unchanged; otherwise throws InputError unless both labels occur.
ReferenceClassifier FineTuneReference(const ReferenceClassifier& model,
                                      const LabeledCorpus& augmented,
                                      const TrainOptions& options =
                                          FineTuneOptions());

double Accuracy(const ReferenceClassifier& model, const LabeledCorpus& corpus);

// In-process TargetModel backed by a reference classifier.
class ReferenceModel final : public TargetModel {
 public:
  explicit ReferenceModel(std::shared_ptr<const ReferenceClassifier> model)
      : model_(std::move(model)) {}

  const ReferenceClassifier& classifier() const { return *model_; }

 protected:
  ClassifierVerdict DoClassify(Language language,
                               std::string_view source) override {
    return model_->Predict(language, source);
  }

 private:
  std::shared_ptr<const ReferenceClassifier> model_;
};

// Opens "builtin:<path to classifier json>" or "http:<service url>".
// Throws ConfigurationError for any other form.
std::unique_ptr<TargetModel> OpenModel(std::string_view locator,
                                       RetryPolicy policy = {});

}  // namespace mistforge

#endif  // MISTFORGE_MODEL_INTERFACE_H_
