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

#include "mistforge/model_interface.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "mistforge/errors.h"
#include "mistforge/lexer.h"

namespace mistforge {
namespace {

constexpr std::string_view kModelFormat = "mistforge.reference_classifier";

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + e^z) without overflow.
double Softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

uint64_t Fnv1a(std::string_view text) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Lower-cased pieces of a name split at underscores, case changes and
// letter/digit boundaries.
std::vector<std::string> Subtokens(std::string_view name) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(cur);
    cur.clear();
  };
  for (size_t i = 0; i < name.size(); ++i) {
    char c = name[i];
    if (c == '_' || c == '$') {
      flush();
      continue;
    }
    bool upper = std::isupper(static_cast<unsigned char>(c));
    bool digit = std::isdigit(static_cast<unsigned char>(c));
    if (!cur.empty()) {
      char prev = name[i - 1];
      bool prev_digit = std::isdigit(static_cast<unsigned char>(prev));
      bool prev_lower = std::islower(static_cast<unsigned char>(prev));
      if ((upper && prev_lower) || digit != prev_digit) flush();
    }
    cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  flush();
  return out;
}

SparseVector FeaturesFrom(const std::set<std::string>& names,
                          const StructureCounts* counts, size_t length) {
  std::map<uint32_t, double> bag;
  size_t n = 0;
  auto add = [&](const std::string& key) {
    bag[static_cast<uint32_t>(Fnv1a(key) %
                              ReferenceClassifier::kHashBuckets)] += 1.0;
    ++n;
  };
  for (const std::string& name : names) {
    add("n:" + name);
    std::set<std::string> pieces;
    for (std::string& piece : Subtokens(name)) pieces.insert(piece);
    for (const std::string& piece : pieces) add("s:" + piece);
  }
  SparseVector x;
  double scale = n == 0 ? 0.0 : 1.0 / std::sqrt(static_cast<double>(n));
  for (const auto& [index, value] : bag) x.emplace_back(index, value * scale);
  if (counts != nullptr) {
    for (int r = 0; r < kRuleCount; ++r) {
      const RuleCounts& c = (*counts)[r];
      if (c.count_b > 0) {
        x.emplace_back(ReferenceClassifier::kStructureOffset + 2 * r,
                       std::log1p(c.count_b));
      }
      if (c.count_a > 0) {
        x.emplace_back(ReferenceClassifier::kStructureOffset + 2 * r + 1,
                       std::log1p(c.count_a));
      }
    }
  }
  x.emplace_back(ReferenceClassifier::kLengthIndex,
                 std::log1p(static_cast<double>(length)) / 8.0);
  return x;
}

std::vector<int> LabelsOf(const LabeledCorpus& corpus) {
  std::vector<int> labels;
  for (const auto& [snippet, label] : corpus) {
    labels.push_back(LabelIndex(label));
  }
  return labels;
}

void RequireBothLabels(const std::vector<int>& labels) {
  bool human = std::count(labels.begin(), labels.end(), 0) > 0;
  bool llm = std::count(labels.begin(), labels.end(), 1) > 0;
  if (!human || !llm) {
    throw InputError("training needs samples of both origins");
  }
}

// Masked sources carry "<UNK>" or "<extra_id_0>" in identifier position.
// They are featurized as an anonymous identifier so the text still parses.
constexpr std::string_view kMaskPlaceholder = "mist_mask_";

std::string UnmaskSource(std::string_view source) {
  std::string out(source);
  for (std::string_view mask : {std::string_view("<UNK>"),
                                std::string_view("<extra_id_0>")}) {
    size_t pos = 0;
    while ((pos = out.find(mask, pos)) != std::string::npos) {
      out.replace(pos, mask.size(), kMaskPlaceholder);
      pos += kMaskPlaceholder.size();
    }
  }
  return out;
}

std::vector<SparseVector> FeaturizeAll(const LabeledCorpus& corpus) {
  std::vector<SparseVector> xs;
  xs.reserve(corpus.size());
  for (const auto& [snippet, label] : corpus) {
    xs.push_back(ReferenceClassifier::Featurize(snippet));
  }
  return xs;
}

}  // namespace

ClassifierVerdict MakeVerdict(double prob_human, double prob_llm) {
  auto valid = [](double p) { return std::isfinite(p) && p >= 0 && p <= 1; };
  if (!valid(prob_human) || !valid(prob_llm)) {
    throw ProtocolError("class probabilities must lie in [0, 1]");
  }
  if (std::abs(prob_human + prob_llm - 1.0) > kProbabilityTolerance) {
    throw ProtocolError("class probabilities must sum to 1, got " +
                        std::to_string(prob_human + prob_llm));
  }
  return ClassifierVerdict{prob_human, prob_llm,
                           prob_llm >= kDecisionThreshold
                               ? OriginLabel::kLlm
                               : OriginLabel::kHuman};
}

ClassifierVerdict VerdictFromJson(const nlohmann::json& body) {
  if (!body.is_object() || !body.contains("prob_human") ||
      !body.contains("prob_llm") || !body["prob_human"].is_number() ||
      !body["prob_llm"].is_number()) {
    throw ProtocolError("classify reply needs numeric prob_human and prob_llm");
  }
  return MakeVerdict(body["prob_human"].get<double>(),
                     body["prob_llm"].get<double>());
}

ClassifierVerdict RemoteModel::DoClassify(Language language,
                                          std::string_view source) {
  nlohmann::json body = {{"language", std::string(LanguageName(language))},
                         {"code", std::string(source)}};
  return VerdictFromJson(PostJson(endpoint_, "/classify", body, policy_));
}

SparseVector ReferenceClassifier::Featurize(const CodeSnippet& snippet) {
  std::set<std::string> names;
  if (snippet.parse_ok()) {
    for (const IdentifierEntry& e : snippet.identifiers().entries()) {
      if (e.name != kMaskPlaceholder) names.insert(e.name);
    }
    StructureCounts counts = CountStructures(snippet);
    return FeaturesFrom(names, &counts, snippet.source().size());
  }
  for (const Token& t : Lex(snippet.source(), snippet.language(), true)) {
    if (t.kind == TokenKind::kIdentifier && t.text != kMaskPlaceholder) {
      names.insert(std::string(t.text));
    }
  }
  return FeaturesFrom(names, nullptr, snippet.source().size());
}

SparseVector ReferenceClassifier::Featurize(Language language,
                                            std::string_view source) {
  return Featurize(Parse(UnmaskSource(source), language));
}

double ReferenceClassifier::Logit(const SparseVector& x) const {
  double z = bias_;
  for (const auto& [i, v] : x) z += weights_[i] * v;
  return z;
}

double ReferenceClassifier::ProbLlm(const SparseVector& x) const {
  return Sigmoid(Logit(x));
}

ClassifierVerdict ReferenceClassifier::Predict(
    const CodeSnippet& snippet) const {
  double p = ProbLlm(Featurize(snippet));
  return MakeVerdict(1.0 - p, p);
}

ClassifierVerdict ReferenceClassifier::Predict(Language language,
                                               std::string_view source) const {
  double p = ProbLlm(Featurize(language, source));
  return MakeVerdict(1.0 - p, p);
}

void ReferenceClassifier::SetParameters(std::vector<double> weights,
                                        double bias) {
  if (weights.size() != kDimension) {
    throw InputError("reference classifier expects " +
                     std::to_string(kDimension) + " weights");
  }
  weights_ = std::move(weights);
  bias_ = bias;
}

double ReferenceClassifier::Loss(const std::vector<SparseVector>& xs,
                                 const std::vector<int>& labels,
                                 double l2) const {
  if (xs.empty()) return 0.0;
  double total = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    double z = Logit(xs[i]);
    total += Softplus(z) - labels[i] * z;
  }
  double penalty = 0.0;
  if (l2 > 0) {
    for (double w : weights_) penalty += w * w;
    penalty *= 0.5 * l2;
  }
  return total / static_cast<double>(xs.size()) + penalty;
}

std::vector<double> ReferenceClassifier::LossGradient(
    const std::vector<SparseVector>& xs, const std::vector<int>& labels,
    double l2) const {
  std::vector<double> grad(kDimension + 1, 0.0);
  if (xs.empty()) return grad;
  double inv = 1.0 / static_cast<double>(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    double err = (Sigmoid(Logit(xs[i])) - labels[i]) * inv;
    for (const auto& [j, v] : xs[i]) grad[j] += err * v;
    grad[kDimension] += err;
  }
  if (l2 > 0) {
    for (uint32_t j = 0; j < kDimension; ++j) grad[j] += l2 * weights_[j];
  }
  return grad;
}

void ReferenceClassifier::Fit(const std::vector<SparseVector>& xs,
                              const std::vector<int>& labels,
                              const TrainOptions& options) {
  if (xs.empty() || options.epochs <= 0) return;
  std::mt19937_64 rng(options.seed);
  std::vector<size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  size_t batch = static_cast<size_t>(std::max(1, options.batch_size));
  std::vector<SparseVector> bx;
  std::vector<int> by;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (size_t start = 0; start < order.size(); start += batch) {
      bx.clear();
      by.clear();
      for (size_t k = start; k < std::min(order.size(), start + batch); ++k) {
        bx.push_back(xs[order[k]]);
        by.push_back(labels[order[k]]);
      }
      std::vector<double> grad = LossGradient(bx, by, options.l2);
      for (uint32_t j = 0; j < kDimension; ++j) {
        weights_[j] -= options.learning_rate * grad[j];
      }
      bias_ -= options.learning_rate * grad[kDimension];
    }
  }
}

std::string ReferenceClassifier::ToJson() const {
  nlohmann::json root = {{"format", std::string(kModelFormat)},
                         {"version", 1},
                         {"hash_buckets", kHashBuckets},
                         {"bias", bias_},
                         {"weights", weights_}};
  return root.dump() + "\n";
}

ReferenceClassifier ReferenceClassifier::FromJson(std::string_view text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("classifier file is not valid JSON: ") +
                     e.what());
  }
  if (!root.is_object() || root.value("format", "") != kModelFormat ||
      root.value("hash_buckets", 0u) != kHashBuckets ||
      !root.contains("weights") || !root["weights"].is_array() ||
      !root.contains("bias") || !root["bias"].is_number()) {
    throw InputError("not a reference classifier file");
  }
  ReferenceClassifier model;
  std::vector<double> weights;
  for (const auto& w : root["weights"]) {
    if (!w.is_number()) throw InputError("classifier weights must be numbers");
    weights.push_back(w.get<double>());
  }
  model.SetParameters(std::move(weights), root["bias"].get<double>());
  return model;
}

void ReferenceClassifier::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << ToJson();
}

ReferenceClassifier ReferenceClassifier::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FromJson(buffer.str());
}

ReferenceClassifier TrainReference(const LabeledCorpus& corpus,
                                   const TrainOptions& options,
                                   TrainReport* report) {
  std::vector<int> labels = LabelsOf(corpus);
  RequireBothLabels(labels);
  std::vector<SparseVector> xs = FeaturizeAll(corpus);
  ReferenceClassifier model;
  model.Fit(xs, labels, options);
  if (report != nullptr) {
    report->loss = model.Loss(xs, labels, options.l2);
    report->accuracy = Accuracy(model, corpus);
  }
  return model;
}

TrainOptions FineTuneOptions() {
  TrainOptions options;
  options.epochs = 1;
  options.batch_size = 1;
  return options;
}

ReferenceClassifier FineTuneReference(const ReferenceClassifier& model,
                                      const LabeledCorpus& augmented,
                                      const TrainOptions& options) {
  if (augmented.empty()) return model;
  std::vector<int> labels = LabelsOf(augmented);
  RequireBothLabels(labels);
  ReferenceClassifier tuned = model;
  tuned.Fit(FeaturizeAll(augmented), labels, options);
  return tuned;
}

double Accuracy(const ReferenceClassifier& model, const LabeledCorpus& corpus) {
  if (corpus.empty()) return 0.0;
  size_t correct = 0;
  for (const auto& [snippet, label] : corpus) {
    if (model.Predict(snippet).predicted == label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(corpus.size());
}

std::unique_ptr<TargetModel> OpenModel(std::string_view locator,
                                       RetryPolicy policy) {
  constexpr std::string_view kBuiltin = "builtin:";
  constexpr std::string_view kHttp = "http:";
  if (locator.substr(0, kBuiltin.size()) == kBuiltin) {
    auto model = std::make_shared<const ReferenceClassifier>(
        ReferenceClassifier::Load(std::string(locator.substr(kBuiltin.size()))));
    return std::make_unique<ReferenceModel>(std::move(model));
  }
  if (locator.substr(0, 7) == "http://") {
    return std::make_unique<RemoteModel>(locator, policy);
  }
  if (locator.substr(0, kHttp.size()) == kHttp) {
    return std::make_unique<RemoteModel>(locator.substr(kHttp.size()), policy);
  }
  throw ConfigurationError("model must be builtin:<path> or http:<url>, got " +
                           std::string(locator));
}

}  // namespace mistforge
