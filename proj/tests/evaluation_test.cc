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

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "mistforge/errors.h"
#include "mistforge/evaluation.h"
#include "mistforge/random.h"
#include "mistforge/style_profile.h"
#include "test_support.h"

namespace mistforge {
namespace {

using testing::StubModel;

LabeledSample Sample(std::string id, OriginLabel label, std::string code,
                     Language lang = Language::kPython) {
  return LabeledSample{std::move(id), label, Parse(std::move(code), lang)};
}

SampleOutcome Outcome(std::string id, bool success, int n_var, int changed,
                      int64_t queries) {
  SampleOutcome o;
  o.id = std::move(id);
  o.success = success;
  o.n_var = n_var;
  o.total_queries = queries + 10;
  if (success) {
    o.changed_identifiers = changed;
    o.queries_to_first_success = queries;
    o.semantic_distance = 0.1 * changed;
    o.edit_distance = 3 * changed;
    o.adversarial_code = "x";
    o.training_code = "x";
  }
  return o;
}

struct Desk {
  Desk()
      : model(testing::TrainedReference()),
        provider(FrequencyCandidateProvider::Build(
            testing::Snippets(testing::TrainingSet()))),
        style(StyleTable::Build(ToCorpus(testing::TrainingSet()))) {}
  AttackContext Context() {
    return AttackContext{&model, &provider, &embedder, &style};
  }
  ReferenceModel model;
  FrequencyCandidateProvider provider;
  TrigramEmbedder embedder;
  StyleTable style;
};

TEST_SUITE("evaluation") {

TEST_CASE("subset x exclusions") {
  StubModel model([](std::string_view src) {
    return src.find("wrong") != std::string_view::npos ? 0.2 : 0.8;
  });
  std::vector<LabeledSample> samples = {
      Sample("ok", OriginLabel::kLlm, "a = 1\nprint(a)\n"),
      Sample("broken", OriginLabel::kLlm, "int x = ;", Language::kJava),
      Sample("empty", OriginLabel::kLlm, "pass\n"),
      Sample("miss", OriginLabel::kLlm, "wrong = 1\n"),
  };
  SubsetX x = FilterSubsetX(samples, model);
  REQUIRE(x.kept.size() == 1);
  CHECK(x.kept[0].id == "ok");
  std::map<std::string, Exclusion> why(x.excluded.begin(), x.excluded.end());
  CHECK(why.at("broken") == Exclusion::kParse);
  CHECK(why.at("empty") == Exclusion::kNoIdentifier);
  CHECK(why.at("miss") == Exclusion::kWrongPrediction);
  CHECK(ExclusionName(Exclusion::kParse) == "parse");
  CHECK(ExclusionName(Exclusion::kNoIdentifier) == "no-identifier");
  CHECK(ExclusionName(Exclusion::kWrongPrediction) == "wrong-prediction");
  CHECK(model.query_count() == 2);
}

TEST_CASE("metric arithmetic") {
  std::vector<SampleOutcome> five = {
      Outcome("a", true, 8, 2, 10), Outcome("b", true, 4, 1, 20),
      Outcome("c", false, 3, 0, 0), Outcome("d", true, 2, 2, 30),
      Outcome("e", false, 5, 0, 0)};
  MetricsReport r = ComputeMetrics(five);
  CHECK(r.asr == doctest::Approx(0.6));
  CHECK(r.n_samples == 5);
  CHECK(r.n_success == 3);
  CHECK(*r.amq == doctest::Approx(20.0));
  CHECK(*r.icr == doctest::Approx((0.25 + 0.25 + 1.0) / 3));
  CHECK(*r.sd_mean == doctest::Approx(0.5 / 3));
  CHECK(*r.ed_mean == doctest::Approx(5.0));

  MetricsReport single = ComputeMetrics({Outcome("a", true, 8, 2, 4)});
  CHECK(*single.icr == 0.25);
  CHECK(single.asr == 1.0);

  SampleOutcome skipped = Outcome("s", false, 0, 0, 0);
  skipped.skipped = true;
  skipped.skip_reason = "parse";
  MetricsReport with_skip = ComputeMetrics({skipped, Outcome("a", false, 3, 0, 0)});
  CHECK(with_skip.n_skipped == 1);
  CHECK(with_skip.asr == 0.0);
  CHECK_FALSE(with_skip.amq.has_value());
  CHECK_THROWS_AS(ComputeMetrics({}), InputError);
  CHECK_THROWS_AS(ComputeMetrics({skipped}), InputError);
}

TEST_CASE("fixture metrics match a re-aggregation of the outcome file") {
  Desk desk;
  std::vector<LabeledSample> fixtures = testing::Fixtures(Language::kJava);
  SubsetX x = FilterSubsetX(fixtures, desk.model);
  EngineConfig config;
  std::vector<AttackRecord> records =
      RunAttacks(x.kept, config, desk.Context(), 7, 2);
  std::vector<SampleOutcome> outcomes;
  for (size_t i = 0; i < records.size(); ++i) {
    outcomes.push_back(Summarize(x.kept[i], records[i]));
  }
  std::string jsonl = OutcomesToJsonl(outcomes);

  // Independent aggregation straight from the serialized lines.
  double n = 0, wins = 0, queries = 0, icr = 0, sd = 0, ed = 0;
  std::istringstream lines(jsonl);
  std::string line;
  while (std::getline(lines, line)) {
    nlohmann::json j = nlohmann::json::parse(line);
    if (j.at("skipped").get<bool>()) continue;
    ++n;
    if (!j.at("success").get<bool>()) continue;
    ++wins;
    queries += j.at("queries_to_first_success").get<double>();
    icr += j.at("changed_identifiers").get<double>() / j.at("n_var").get<double>();
    sd += j.at("semantic_distance").get<double>();
    ed += j.at("edit_distance").get<double>();
  }
  REQUIRE(wins > 0);
  MetricsReport r = ComputeMetrics(outcomes);
  CHECK(r.asr == doctest::Approx(wins / n).epsilon(1e-12));
  CHECK(*r.amq == doctest::Approx(queries / wins).epsilon(1e-12));
  CHECK(*r.icr == doctest::Approx(icr / wins).epsilon(1e-12));
  CHECK(*r.sd_mean == doctest::Approx(sd / wins).epsilon(1e-12));
  CHECK(*r.ed_mean == doctest::Approx(ed / wins).epsilon(1e-12));
  CHECK(r.asr >= 0.0);
  CHECK(r.asr <= 1.0);
  CHECK(*r.icr <= 1.0);
  CHECK(*r.amq >= 1.0);

  std::vector<SampleOutcome> reversed(outcomes.rbegin(), outcomes.rend());
  MetricsReport p = ComputeMetrics(reversed);
  CHECK(p.asr == r.asr);
  CHECK(*p.amq == *r.amq);
  CHECK(*p.icr == *r.icr);
  CHECK(*p.sd_mean == *r.sd_mean);
  CHECK(*p.ed_mean == *r.ed_mean);

  for (const SampleOutcome& o : outcomes) {
    CHECK(OutcomeFromJson(OutcomeToJson(o)) == o);
  }
  std::vector<AttackRecord> again =
      RunAttacks(x.kept, config, desk.Context(), 7, 1);
  for (size_t i = 0; i < records.size(); ++i) {
    CHECK(Summarize(x.kept[i], again[i]) == outcomes[i]);
  }
}

TEST_CASE("topsis with a dominating alternative") {
  std::vector<TopsisAlternative> alts = {
      {"a", {0.9, 0.1, 0.2, 10, 50}}, {"b", {0.5, 0.4, 0.9, 40, 300}}};
  auto scores = TopsisRank(alts, kEqualWeights);
  CHECK(scores[0].score == doctest::Approx(1.0));
  CHECK(scores[1].score == doctest::Approx(0.0));
  CHECK(scores[0].rank == 1);
  CHECK(scores[1].rank == 2);
}

TEST_CASE("topsis reproduces the worksheet") {
  // Values from tests/oracles/topsis_oracle.py.
  std::vector<TopsisAlternative> alts = {
      {"mist", {0.90, 0.10, 1.5, 40.0, 120.0}},
      {"alert", {0.70, 0.30, 2.0, 25.0, 300.0}},
      {"coda", {0.80, 0.20, 0.5, 60.0, 200.0}}};
  auto equal = TopsisRank(alts, kEqualWeights);
  CHECK(equal[0].score == doctest::Approx(0.6454428006385271).epsilon(1e-9));
  CHECK(equal[1].score == doctest::Approx(0.3287360981155483).epsilon(1e-9));
  CHECK(equal[2].score == doctest::Approx(0.5493041571241194).epsilon(1e-9));
  CHECK(std::abs(equal[0].score - 0.6454428006385271) < 1e-9);
  CHECK(equal[0].rank == 1);
  CHECK(equal[2].rank == 2);
  CHECK(equal[1].rank == 3);
  auto asr = TopsisRank(alts, kAsrPriorityWeights);
  CHECK(std::abs(asr[0].score - 0.7266029752830697) < 1e-9);
  CHECK(std::abs(asr[1].score - 0.26616926419509407) < 1e-9);
  CHECK(std::abs(asr[2].score - 0.5341067857236418) < 1e-9);
  CHECK(ParseWeights("0.6,0.1,0.1,0.1,0.1") == kAsrPriorityWeights);

  std::vector<TopsisAlternative> permuted = {alts[2], alts[0], alts[1]};
  auto p = TopsisRank(permuted, kEqualWeights);
  CHECK(p[0].score == doctest::Approx(equal[2].score).epsilon(1e-15));
  CHECK(p[1].score == doctest::Approx(equal[0].score).epsilon(1e-15));
  CHECK(p[2].score == doctest::Approx(equal[1].score).epsilon(1e-15));

  CHECK(TopsisToCsv(equal) ==
        "name,score,rank\nmist,0.645442800639,1\ncoda,0.549304157124,2\n"
        "alert,0.328736098116,3\n");
}

TEST_CASE("topsis ranks ignore positive column scaling") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<TopsisAlternative> alts;
    for (int i = 0; i < 4; ++i) {
      TopsisAlternative a{"alt" + std::to_string(i), {}};
      for (double& v : a.values) v = 0.05 + rng.Uniform();
      alts.push_back(a);
    }
    auto base = TopsisRank(alts, kEqualWeights);
    std::vector<TopsisAlternative> scaled = alts;
    size_t column = rng.Index(5);
    double factor = 0.01 + 100 * rng.Uniform();
    for (TopsisAlternative& a : scaled) a.values[column] *= factor;
    auto after = TopsisRank(scaled, kEqualWeights);
    for (size_t i = 0; i < base.size(); ++i) {
      CHECK(after[i].rank == base[i].rank);
      CHECK(after[i].score == doctest::Approx(base[i].score).epsilon(1e-9));
      CHECK(base[i].score >= 0.0);
      CHECK(base[i].score <= 1.0);
    }
  }
}

TEST_CASE("topsis input errors") {
  std::vector<TopsisAlternative> zero = {{"a", {0.5, 0, 1, 1, 1}},
                                         {"b", {0.4, 0, 2, 1, 1}}};
  try {
    TopsisRank(zero, kEqualWeights);
    FAIL("expected an input error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("icr") != std::string::npos);
  }
  CHECK_THROWS_AS(TopsisRank({zero[0]}, kEqualWeights), InputError);
  CHECK_THROWS_AS(ParseWeights("0.5,0.5"), ConfigurationError);
  CHECK_THROWS_AS(ParseWeights("0.3,0.3,0.3,0.3,0.3"), ConfigurationError);
  CHECK_THROWS_AS(ParseWeights("a,b,c,d,e"), ConfigurationError);
  auto parsed = ReadTopsisInput("name,asr,icr,sd,ed,amq\nx,1,2,3,4,5\n");
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0].values == std::array<double, 5>{1, 2, 3, 4, 5});
  CHECK_THROWS_AS(ReadTopsisInput("name,asr\nx,1\n"), InputError);
}

TEST_CASE("seventy-thirty arithmetic") {
  CHECK(OriginalsForMix(100) == 233);
  CHECK(OriginalsForMix(3) == 7);
  CHECK(OriginalsForMix(0) == 0);
  CHECK(100.0 / (100 + OriginalsForMix(100)) == doctest::Approx(0.3).epsilon(0.01));
}

TEST_CASE("augmented set is seeded and keeps labels") {
  Desk desk;
  const std::vector<LabeledSample>& training = testing::TrainingSet();
  EngineConfig config;
  AugmentedSet a = BuildAugmentedSet(training, config, desk.Context(), 7, 2);
  AugmentedSet b = BuildAugmentedSet(training, config, desk.Context(), 7, 4);
  CHECK(a.n_attacked <= 120);
  CHECK(a.n_attacked >= 100);
  CHECK(a.n_adversarial > 0);
  CHECK(a.n_original == OriginalsForMix(a.n_adversarial));
  CHECK(a.samples.size() ==
        static_cast<size_t>(a.n_adversarial + a.n_original));
  REQUIRE(a.samples.size() == b.samples.size());
  for (size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(SampleToJson(a.samples[i]) == SampleToJson(b.samples[i]));
  }
  std::map<std::string, OriginLabel> labels;
  for (const LabeledSample& s : training) labels[s.id] = s.label;
  std::set<std::string> ids;
  for (int i = 0; i < a.n_adversarial; ++i) {
    const LabeledSample& s = a.samples[i];
    REQUIRE(s.id.size() > 4);
    CHECK(s.id.substr(s.id.size() - 4) == "#adv");
    std::string source = s.id.substr(0, s.id.size() - 4);
    REQUIRE(labels.count(source) == 1);
    CHECK(s.label == labels[source]);
    CHECK(s.snippet.parse_ok());
  }
  for (const LabeledSample& s : a.samples) CHECK(ids.insert(s.id).second);
}

TEST_CASE("no attackable sample returns the training set") {
  StubModel model([](std::string_view) { return 0.9; });
  TrigramEmbedder embedder;
  FrequencyCandidateProvider provider = FrequencyCandidateProvider::Build({});
  AttackContext ctx{&model, &provider, &embedder, nullptr};
  std::vector<LabeledSample> training = {
      Sample("p1", OriginLabel::kLlm, "pass\n"),
      Sample("p2", OriginLabel::kHuman, "pass\n")};
  AugmentedSet set = BuildAugmentedSet(training, EngineConfig{}, ctx, 7, 1);
  CHECK(set.n_adversarial == 0);
  CHECK(set.samples.size() == 2);
}

TEST_CASE("halves are stratified and disjoint") {
  std::vector<LabeledSample> samples;
  for (int i = 0; i < 7; ++i) {
    samples.push_back(Sample("h" + std::to_string(i), OriginLabel::kHuman,
                             "a = 1\n"));
  }
  for (int i = 0; i < 4; ++i) {
    samples.push_back(Sample("l" + std::to_string(i), OriginLabel::kLlm,
                             "a = 1\n"));
  }
  auto [s1, s2] = SplitHalves(samples, 7);
  CHECK(s1.size() == 6);
  CHECK(s2.size() == 5);
  auto count = [](const std::vector<LabeledSample>& v, OriginLabel l) {
    return std::count_if(v.begin(), v.end(),
                         [&](const LabeledSample& s) { return s.label == l; });
  };
  CHECK(count(s1, OriginLabel::kHuman) == 4);
  CHECK(count(s1, OriginLabel::kLlm) == 2);
  std::set<std::string> ids;
  for (const auto& s : s1) ids.insert(s.id);
  for (const auto& s : s2) CHECK(ids.insert(s.id).second);
  CHECK(ids.size() == samples.size());
  auto [t1, t2] = SplitHalves(samples, 7);
  for (size_t i = 0; i < s1.size(); ++i) CHECK(t1[i].id == s1[i].id);
}

TEST_CASE("rq3 matrix shape and reproducibility") {
  Desk desk;
  std::vector<LabeledSample> test_set;
  for (Language lang : {Language::kJava, Language::kPython}) {
    SubsetX x = FilterSubsetX(testing::Fixtures(lang), desk.model);
    test_set.insert(test_set.end(), x.kept.begin(), x.kept.end());
  }
  EngineConfig base;
  EngineConfig rename_only = base;
  rename_only.rename_rate = 1.0;
  rename_only.population_size = 10;
  rename_only.max_iter = 3;
  std::vector<Attacker> attackers = {{"mist", base},
                                     {"mist-rename", rename_only}};
  Rq3Result r = RunRq3(test_set, attackers, *testing::TrainedReference(),
                       desk.Context(), 7, 2);
  CHECK(r.train_sources ==
        std::vector<std::string>{"none", "mist", "mist-rename"});
  CHECK(r.eval_sources == std::vector<std::string>{"mist", "mist-rename"});
  std::set<std::string> s1(r.s1_ids.begin(), r.s1_ids.end());
  for (const std::string& id : r.s2_ids) CHECK(s1.count(id) == 0);
  CHECK(s1.size() + r.s2_ids.size() == test_set.size());
  REQUIRE(r.accuracy.size() == 3);
  for (size_t e = 0; e < r.eval_sources.size(); ++e) {
    REQUIRE(r.accuracy[0][e].has_value());
    CHECK(*r.accuracy[0][e] == 0.0);
    CHECK(r.eval_sizes[e] > 0);
  }
  Rq3Result again = RunRq3(test_set, attackers, *testing::TrainedReference(),
                           desk.Context(), 7, 3);
  CHECK(Rq3ToCsv(again) == Rq3ToCsv(r));
  std::string csv = Rq3ToCsv(r);
  CHECK(csv.rfind("train\\eval,mist,mist-rename\nnone,0.000000,0.000000\n", 0) ==
        0);
}

TEST_CASE("rq3 marks an attacker without successes as absent") {
  Rq3Result r;
  r.train_sources = {"none", "weak"};
  r.eval_sources = {"weak"};
  r.accuracy = {{std::nullopt}, {std::nullopt}};
  CHECK(Rq3ToCsv(r) == "train\\eval,weak\nnone,absent\nweak,absent\n");
}

}  // TEST_SUITE

}  // namespace
}  // namespace mistforge
