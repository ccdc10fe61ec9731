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

#include "mistforge/evaluation.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <thread>

#include "mistforge/errors.h"
#include "mistforge/random.h"

namespace mistforge {

namespace {

// Sums in sorted order so the result does not depend on sample order.
double SortedMean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double total = 0.0;
  for (double v : values) total += v;
  return total / static_cast<double>(values.size());
}

std::string FormatDouble(double value, const char* format) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, value);
  return buf;
}

template <typename T>
T JsonField(const nlohmann::json& json, const char* name) {
  auto it = json.find(name);
  if (it == json.end()) {
    throw InputError(std::string("outcome record lacks '") + name + "'");
  }
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string("outcome field '") + name +
                     "' has the wrong type");
  }
}

template <typename T>
std::optional<T> OptionalJsonField(const nlohmann::json& json, const char* name) {
  auto it = json.find(name);
  if (it == json.end() || it->is_null()) return std::nullopt;
  return JsonField<T>(json, name);
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) {
      cell.pop_back();
    }
    size_t start = cell.find_first_not_of(' ');
    cells.push_back(start == std::string::npos ? "" : cell.substr(start));
  }
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

double ParseNumber(const std::string& text, const std::string& what) {
  size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(value)) {
    throw InputError("bad number '" + text + "' in " + what);
  }
  return value;
}

}  // namespace

std::string_view ExclusionName(Exclusion reason) {
  switch (reason) {
    case Exclusion::kParse:
      return "parse";
    case Exclusion::kNoIdentifier:
      return "no-identifier";
    case Exclusion::kWrongPrediction:
      return "wrong-prediction";
  }
  return "unknown";
}

SubsetX FilterSubsetX(const std::vector<LabeledSample>& samples,
                      TargetModel& model) {
  SubsetX out;
  for (const LabeledSample& s : samples) {
    if (!s.snippet.parse_ok()) {
      out.excluded.emplace_back(s.id, Exclusion::kParse);
    } else if (s.snippet.identifiers().empty()) {
      out.excluded.emplace_back(s.id, Exclusion::kNoIdentifier);
    } else if (model.Classify(s.snippet.language(), s.snippet.source())
                   .predicted != s.label) {
      out.excluded.emplace_back(s.id, Exclusion::kWrongPrediction);
    } else {
      out.kept.push_back(s);
    }
  }
  return out;
}

std::vector<AttackRecord> RunAttacks(const std::vector<LabeledSample>& samples,
                                     const EngineConfig& config,
                                     const AttackContext& ctx, uint64_t seed,
                                     int jobs) {
  config.Validate();
  std::vector<AttackRecord> records(samples.size());
  std::vector<std::exception_ptr> errors(samples.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < samples.size(); i = next++) {
      const LabeledSample& s = samples[i];
      records[i].id = s.id;
      EngineConfig cfg = config;
      cfg.rng_seed = DeriveSeed(seed, s.id);
      try {
        records[i].outcome = Attack(s.snippet, s.label, cfg, ctx);
      } catch (const PreconditionError& e) {
        records[i].skip_reason = e.what();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::clamp<int>(jobs, 1, std::max<int>(1, samples.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int j = 0; j < jobs; ++j) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return records;
}

SampleOutcome Summarize(const LabeledSample& sample,
                        const AttackRecord& record) {
  SampleOutcome out;
  out.id = sample.id;
  out.language = sample.snippet.language();
  out.label = sample.label;
  out.n_var = static_cast<int>(sample.snippet.identifiers().size());
  if (!record.outcome) {
    out.skipped = true;
    out.skip_reason = record.skip_reason;
    return out;
  }
  const AttackOutcome& o = *record.outcome;
  out.success = o.success;
  out.queries_to_first_success = o.queries_to_first_success;
  out.total_queries = o.total_queries;
  out.original_confidence = o.original_confidence;
  out.best_confidence_drop = o.best_confidence_drop;
  out.iterations = o.iterations;
  if (o.adversarial) {
    out.changed_identifiers = o.adversarial->ChangedIdentifiers();
    out.semantic_distance = o.adversarial->objectives->f2_semantic_distance;
    out.edit_distance = o.adversarial->objectives->f3_edit_distance;
    out.adversarial_code = o.adversarial->snippet.source();
  }
  if (const Individual* t = o.TrainingSample()) {
    out.training_code = t->snippet.source();
  }
  return out;
}

nlohmann::json OutcomeToJson(const SampleOutcome& o) {
  auto opt = [](const auto& v) -> nlohmann::json {
    if (v) return *v;
    return nullptr;
  };
  return {{"id", o.id},
          {"language", std::string(LanguageName(o.language))},
          {"label", std::string(OriginName(o.label))},
          {"skipped", o.skipped},
          {"skip_reason", o.skip_reason},
          {"success", o.success},
          {"queries_to_first_success", opt(o.queries_to_first_success)},
          {"total_queries", o.total_queries},
          {"n_var", o.n_var},
          {"changed_identifiers", o.changed_identifiers},
          {"semantic_distance", o.semantic_distance},
          {"edit_distance", o.edit_distance},
          {"original_confidence", o.original_confidence},
          {"best_confidence_drop", o.best_confidence_drop},
          {"iterations", o.iterations},
          {"adversarial_code", opt(o.adversarial_code)},
          {"training_code", opt(o.training_code)}};
}

SampleOutcome OutcomeFromJson(const nlohmann::json& json) {
  if (!json.is_object()) throw InputError("outcome record is not an object");
  SampleOutcome o;
  o.id = JsonField<std::string>(json, "id");
  try {
    o.language = ParseLanguage(JsonField<std::string>(json, "language"));
  } catch (const ConfigurationError& e) {
    throw InputError(e.what());
  }
  o.label = ParseOrigin(JsonField<std::string>(json, "label"));
  o.skipped = JsonField<bool>(json, "skipped");
  o.skip_reason = JsonField<std::string>(json, "skip_reason");
  o.success = JsonField<bool>(json, "success");
  o.queries_to_first_success =
      OptionalJsonField<int64_t>(json, "queries_to_first_success");
  o.total_queries = JsonField<int64_t>(json, "total_queries");
  o.n_var = JsonField<int>(json, "n_var");
  o.changed_identifiers = JsonField<int>(json, "changed_identifiers");
  o.semantic_distance = JsonField<double>(json, "semantic_distance");
  o.edit_distance = JsonField<int64_t>(json, "edit_distance");
  o.original_confidence = JsonField<double>(json, "original_confidence");
  o.best_confidence_drop = JsonField<double>(json, "best_confidence_drop");
  o.iterations = JsonField<int>(json, "iterations");
  o.adversarial_code = OptionalJsonField<std::string>(json, "adversarial_code");
  o.training_code = OptionalJsonField<std::string>(json, "training_code");
  return o;
}

std::vector<SampleOutcome> ReadOutcomes(const std::string& path) {
  std::istringstream in(ReadTextFile(path));
  std::vector<SampleOutcome> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(OutcomeFromJson(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError(path + ":" + std::to_string(n) + ": " + e.what());
    } catch (const InputError& e) {
      throw InputError(path + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

std::string OutcomesToJsonl(const std::vector<SampleOutcome>& outcomes) {
  std::string text;
  for (const SampleOutcome& o : outcomes) {
    text += OutcomeToJson(o).dump();
    text += '\n';
  }
  return text;
}

MetricsReport ComputeMetrics(const std::vector<SampleOutcome>& outcomes) {
  MetricsReport r;
  std::vector<double> queries, icr, sd, ed;
  for (const SampleOutcome& o : outcomes) {
    if (o.skipped) {
      ++r.n_skipped;
      continue;
    }
    ++r.n_samples;
    if (!o.success) continue;
    ++r.n_success;
    if (o.queries_to_first_success) {
      queries.push_back(static_cast<double>(*o.queries_to_first_success));
    }
    if (o.n_var <= 0) throw InputError("successful sample '" + o.id +
                                       "' reports no identifiers");
    icr.push_back(static_cast<double>(o.changed_identifiers) / o.n_var);
    sd.push_back(o.semantic_distance);
    ed.push_back(static_cast<double>(o.edit_distance));
  }
  if (r.n_samples == 0) throw InputError("no attacked samples to aggregate");
  r.asr = static_cast<double>(r.n_success) / r.n_samples;
  if (!queries.empty()) r.amq = SortedMean(queries);
  if (!icr.empty()) {
    r.icr = SortedMean(icr);
    r.sd_mean = SortedMean(sd);
    r.ed_mean = SortedMean(ed);
  }
  return r;
}

nlohmann::json MetricsToJson(const MetricsReport& r) {
  auto opt = [](const std::optional<double>& v) -> nlohmann::json {
    if (v) return *v;
    return nullptr;
  };
  return {{"asr", r.asr},
          {"amq", opt(r.amq)},
          {"amq_includes_importance_queries", true},
          {"icr", opt(r.icr)},
          {"sd_mean", opt(r.sd_mean)},
          {"ed_mean", opt(r.ed_mean)},
          {"n_samples", r.n_samples},
          {"n_success", r.n_success},
          {"n_skipped", r.n_skipped}};
}

TopsisWeights ParseWeights(std::string_view text) {
  std::vector<std::string> cells = SplitCsvLine(std::string(text));
  if (cells.size() != 5) {
    throw ConfigurationError("weights need 5 comma-separated values");
  }
  TopsisWeights w{};
  double total = 0.0;
  for (int i = 0; i < 5; ++i) {
    try {
      w[i] = ParseNumber(cells[i], "weights");
    } catch (const InputError& e) {
      throw ConfigurationError(e.what());
    }
    if (w[i] < 0) throw ConfigurationError("weights must not be negative");
    total += w[i];
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ConfigurationError("weights must sum to 1, got " +
                             FormatDouble(total, "%.12g"));
  }
  return w;
}

std::vector<TopsisScore> TopsisRank(
    const std::vector<TopsisAlternative>& alternatives,
    const TopsisWeights& weights) {
  double wsum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ConfigurationError("weights must not be negative");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-9) {
    throw ConfigurationError("weights must sum to 1");
  }
  const size_t n = alternatives.size();
  if (n < 2) throw InputError("TOPSIS needs at least two alternatives");
  std::array<double, 5> norms{};
  for (const TopsisAlternative& a : alternatives) {
    for (int j = 0; j < 5; ++j) {
      double v = a.values[j];
      if (!std::isfinite(v) || v < 0) {
        throw InputError("alternative '" + a.name + "' has a bad " +
                         std::string(kTopsisColumns[j]) + " value");
      }
      norms[j] += v * v;
    }
  }
  for (int j = 0; j < 5; ++j) {
    if (norms[j] == 0.0) {
      throw InputError("cannot normalize all-zero column '" +
                       std::string(kTopsisColumns[j]) + "'");
    }
    norms[j] = std::sqrt(norms[j]);
  }
  std::vector<std::array<double, 5>> v(n);
  for (size_t i = 0; i < n; ++i) {
    for (int j = 0; j < 5; ++j) {
      v[i][j] = weights[j] * alternatives[i].values[j] / norms[j];
    }
  }
  std::array<double, 5> best{}, worst{};
  for (int j = 0; j < 5; ++j) {
    double lo = v[0][j], hi = v[0][j];
    for (size_t i = 1; i < n; ++i) {
      lo = std::min(lo, v[i][j]);
      hi = std::max(hi, v[i][j]);
    }
    const bool benefit = j == 0;
    best[j] = benefit ? hi : lo;
    worst[j] = benefit ? lo : hi;
  }
  std::vector<TopsisScore> out(n);
  for (size_t i = 0; i < n; ++i) {
    double dp = 0.0, dn = 0.0;
    for (int j = 0; j < 5; ++j) {
      dp += (v[i][j] - best[j]) * (v[i][j] - best[j]);
      dn += (v[i][j] - worst[j]) * (v[i][j] - worst[j]);
    }
    dp = std::sqrt(dp);
    dn = std::sqrt(dn);
    out[i].name = alternatives[i].name;
    out[i].score = dp + dn > 0.0 ? dn / (dp + dn) : 0.5;
  }
  for (size_t i = 0; i < n; ++i) {
    int better = 0;
    for (size_t k = 0; k < n; ++k) better += out[k].score > out[i].score;
    out[i].rank = better + 1;
  }
  return out;
}

std::string TopsisToCsv(const std::vector<TopsisScore>& scores) {
  std::vector<TopsisScore> sorted = scores;
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.rank != b.rank) return a.rank < b.rank;
    return a.name < b.name;
  });
  std::string csv = "name,score,rank\n";
  for (const TopsisScore& s : sorted) {
    csv += s.name + "," + FormatDouble(s.score, "%.12f") + "," +
           std::to_string(s.rank) + "\n";
  }
  return csv;
}

std::vector<TopsisAlternative> ReadTopsisInput(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty TOPSIS input");
  std::vector<std::string> header = SplitCsvLine(line);
  const std::vector<std::string> expected = {"name", "asr", "icr",
                                             "sd",   "ed",  "amq"};
  if (header != expected) {
    throw InputError("TOPSIS input header must be name,asr,icr,sd,ed,amq");
  }
  std::vector<TopsisAlternative> out;
  int n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> cells = SplitCsvLine(line);
    if (cells.size() != 6) {
      throw InputError("TOPSIS input line " + std::to_string(n) +
                       " needs 6 cells");
    }
    TopsisAlternative a;
    a.name = cells[0];
    for (int j = 0; j < 5; ++j) {
      a.values[j] =
          ParseNumber(cells[j + 1], "TOPSIS input line " + std::to_string(n));
    }
    out.push_back(std::move(a));
  }
  return out;
}

TopsisAlternative AlternativeFromMetrics(std::string name,
                                         const MetricsReport& report) {
  TopsisAlternative a;
  a.name = std::move(name);
  a.values = {report.asr, report.icr.value_or(0.0), report.sd_mean.value_or(0.0),
              report.ed_mean.value_or(0.0), report.amq.value_or(0.0)};
  return a;
}

int OriginalsForMix(int n_adversarial) {
  return static_cast<int>(std::llround(7.0 * n_adversarial / 3.0));
}

AugmentedSet BuildAugmentedSet(const std::vector<LabeledSample>& training,
                               const EngineConfig& config,
                               const AttackContext& ctx, uint64_t seed,
                               int jobs) {
  AugmentedSet out;
  if (training.empty()) return out;
  Rng rng(DeriveSeed(seed, "augment"));
  std::vector<size_t> order(training.size());
  std::iota(order.begin(), order.end(), 0);
  rng.Shuffle(order);
  const size_t n_attack = std::max<size_t>(
      1, static_cast<size_t>(std::llround(kAttackFraction * training.size())));
  std::vector<size_t> picked(order.begin(), order.begin() + n_attack);
  std::sort(picked.begin(), picked.end());
  std::vector<LabeledSample> targets;
  for (size_t i : picked) targets.push_back(training[i]);
  std::vector<AttackRecord> records = RunAttacks(targets, config, ctx, seed, jobs);
  for (size_t i = 0; i < records.size(); ++i) {
    if (!records[i].outcome) continue;
    ++out.n_attacked;
    const Individual* sample = records[i].outcome->TrainingSample();
    if (sample == nullptr) continue;
    out.samples.push_back(
        LabeledSample{targets[i].id + "#adv", targets[i].label, sample->snippet});
  }
  out.n_adversarial = static_cast<int>(out.samples.size());
  if (out.n_adversarial == 0) {
    out.samples = training;
    out.n_original = static_cast<int>(training.size());
    return out;
  }
  rng.Shuffle(order);
  const size_t n_orig = std::min<size_t>(
      training.size(), static_cast<size_t>(OriginalsForMix(out.n_adversarial)));
  std::vector<size_t> drawn(order.begin(), order.begin() + n_orig);
  std::sort(drawn.begin(), drawn.end());
  for (size_t i : drawn) out.samples.push_back(training[i]);
  out.n_original = static_cast<int>(n_orig);
  return out;
}

std::pair<std::vector<LabeledSample>, std::vector<LabeledSample>> SplitHalves(
    const std::vector<LabeledSample>& samples, uint64_t seed) {
  std::vector<char> first(samples.size(), 0);
  for (OriginLabel label : {OriginLabel::kHuman, OriginLabel::kLlm}) {
    std::vector<size_t> idx;
    for (size_t i = 0; i < samples.size(); ++i) {
      if (samples[i].label == label) idx.push_back(i);
    }
    Rng rng(DeriveSeed(seed, "split/" + std::string(OriginName(label))));
    rng.Shuffle(idx);
    for (size_t k = 0; k < (idx.size() + 1) / 2; ++k) first[idx[k]] = 1;
  }
  std::pair<std::vector<LabeledSample>, std::vector<LabeledSample>> out;
  for (size_t i = 0; i < samples.size(); ++i) {
    (first[i] ? out.first : out.second).push_back(samples[i]);
  }
  return out;
}

Rq3Result RunRq3(const std::vector<LabeledSample>& test_set,
                 const std::vector<Attacker>& attackers,
                 const ReferenceClassifier& model, const AttackContext& ctx,
                 uint64_t seed, int jobs) {
  if (attackers.empty()) throw ConfigurationError("RQ3 needs an attacker");
  ReferenceModel target(std::make_shared<const ReferenceClassifier>(model));
  AttackContext c = ctx;
  c.model = &target;
  auto [s1, s2] = SplitHalves(test_set, seed);
  Rq3Result result;
  for (const LabeledSample& s : s1) result.s1_ids.push_back(s.id);
  for (const LabeledSample& s : s2) result.s2_ids.push_back(s.id);
  result.train_sources.push_back("none");
  std::vector<ReferenceClassifier> models = {model};
  std::vector<LabeledCorpus> eval_sets;
  for (const Attacker& a : attackers) {
    const uint64_t run_seed = DeriveSeed(seed, "rq3/" + a.name);
    LabeledCorpus tune;
    std::vector<AttackRecord> r1 = RunAttacks(s1, a.config, c, run_seed, jobs);
    for (size_t i = 0; i < r1.size(); ++i) {
      if (!r1[i].outcome) continue;
      if (const Individual* t = r1[i].outcome->TrainingSample()) {
        tune.emplace_back(t->snippet, s1[i].label);
      }
    }
    LabeledCorpus eval;
    std::vector<AttackRecord> r2 = RunAttacks(s2, a.config, c, run_seed, jobs);
    for (size_t i = 0; i < r2.size(); ++i) {
      if (r2[i].outcome && r2[i].outcome->adversarial) {
        eval.emplace_back(r2[i].outcome->adversarial->snippet, s2[i].label);
      }
    }
    result.train_sources.push_back(a.name);
    result.eval_sources.push_back(a.name);
    result.eval_sizes.push_back(static_cast<int>(eval.size()));
    models.push_back(FineTuneReference(model, tune));
    eval_sets.push_back(std::move(eval));
  }
  for (const ReferenceClassifier& m : models) {
    std::vector<std::optional<double>> row;
    for (const LabeledCorpus& eval : eval_sets) {
      if (eval.empty()) {
        row.push_back(std::nullopt);
      } else {
        row.push_back(Accuracy(m, eval));
      }
    }
    result.accuracy.push_back(std::move(row));
  }
  return result;
}

std::string Rq3ToCsv(const Rq3Result& result) {
  std::string csv = "train\\eval";
  for (const std::string& name : result.eval_sources) csv += "," + name;
  csv += "\n";
  for (size_t r = 0; r < result.train_sources.size(); ++r) {
    csv += result.train_sources[r];
    for (const std::optional<double>& cell : result.accuracy[r]) {
      csv += ",";
      csv += cell ? FormatDouble(*cell, "%.6f") : "absent";
    }
    csv += "\n";
  }
  return csv;
}

}  // namespace mistforge
