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
#include <regex>
#include <set>
#include <string>
#include <vector>

#include <doctest.h>

#include "mistforge/errors.h"
#include "mistforge/identifier_attack.h"
#include "mistforge/random.h"
#include "test_support.h"

namespace mistforge {
namespace {

using testing::FixedProvider;
using testing::StubModel;

const char* kThree = "v1 = 1\nv2 = v1 + 1\nv3 = v2 * v1\nprint(v3)\n";

CodeSnippet Py(const std::string& source) {
  CodeSnippet s = Parse(source, Language::kPython);
  REQUIRE(s.parse_ok());
  return s;
}

TEST_SUITE("identifier_attack") {

TEST_CASE("masking replaces every occurrence") {
  CodeSnippet s = Py(kThree);
  CHECK(MaskIdentifier(s, 0, kImportanceMask) ==
        "<UNK> = 1\nv2 = <UNK> + 1\nv3 = v2 * <UNK>\nprint(v3)\n");
  CHECK(MaskIdentifier(s, 2, kCandidateMask) ==
        "v1 = 1\nv2 = v1 + 1\n<extra_id_0> = v2 * v1\nprint(<extra_id_0>)\n");
}

TEST_CASE("a model blind to names scores every identifier zero") {
  StubModel model([](std::string_view) { return 0.8; });
  ImportanceVector iv = ImportanceScores(Py(kThree), model, OriginLabel::kLlm);
  CHECK(iv.names == std::vector<std::string>{"v1", "v2", "v3"});
  for (double score : iv.scores) CHECK(score == 0.0);
  for (double p : iv.probs) CHECK(p == doctest::Approx(1.0 / 3));
}

TEST_CASE("masking a keyed name drops confidence by one half") {
  CodeSnippet s = Py("llm_helper = 2\ntotal = llm_helper * 3\nprint(total)\n");
  StubModel model([](std::string_view src) {
    return src.find("llm_helper") != std::string_view::npos ? 0.9 : 0.4;
  });
  ImportanceVector iv = ImportanceScores(s, model, OriginLabel::kLlm);
  REQUIRE(iv.names.size() == 2);
  CHECK(iv.names[0] == "llm_helper");
  CHECK(iv.scores[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(iv.scores[1] == doctest::Approx(0.0));
  CHECK(iv.probs == std::vector<double>{1.0, 0.0});
}

TEST_CASE("importance on the complementary class is negated") {
  CodeSnippet s = Py(kThree);
  StubModel model([](std::string_view src) {
    double p = 0.5;
    if (src.find("v1") != std::string_view::npos) p += 0.2;
    if (src.find("v3") != std::string_view::npos) p -= 0.1;
    return p;
  });
  ImportanceVector llm = ImportanceScores(s, model, OriginLabel::kLlm);
  ImportanceVector human = ImportanceScores(s, model, OriginLabel::kHuman);
  for (size_t i = 0; i < llm.scores.size(); ++i) {
    CHECK(human.scores[i] == doctest::Approx(-llm.scores[i]).epsilon(1e-12));
  }
  CHECK(llm.scores[0] > 0);
  CHECK(llm.scores[2] < 0);
}

TEST_CASE("importance scoring costs one query per identifier plus one") {
  for (const LabeledSample& sample : testing::Fixtures(Language::kJava)) {
    StubModel model([](std::string_view src) {
      return static_cast<double>(src.size() % 7) / 7.0;
    });
    ImportanceScores(sample.snippet, model, sample.label);
    CHECK(model.query_count() ==
          static_cast<int64_t>(sample.snippet.identifiers().size()) + 1);
  }
  StubModel model([](std::string_view) { return 0.5; });
  CHECK_THROWS_AS(ImportanceScores(Py("pass\n"), model, OriginLabel::kLlm),
                  PreconditionError);
  CHECK_THROWS_AS(ImportanceScores(Parse("int x = ;", Language::kJava), model,
                                   OriginLabel::kLlm),
                  PreconditionError);
}

TEST_CASE("selection probabilities") {
  CHECK(SelectionProbabilities({0.5, 0.5, 0.0}) ==
        std::vector<double>{0.5, 0.5, 0.0});
  std::vector<double> clamped = SelectionProbabilities({-0.2, 0.3, 0.1});
  REQUIRE(clamped.size() == 3);
  CHECK(clamped[0] == 0.0);
  CHECK(clamped[1] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(clamped[2] == doctest::Approx(0.25).epsilon(1e-12));
  std::vector<double> uniform = SelectionProbabilities({-1.0, 0.0, -0.5, 0.0});
  for (double p : uniform) CHECK(p == 0.25);
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> scores;
    for (size_t i = 0, n = 1 + rng.Index(8); i < n; ++i) {
      scores.push_back(rng.Uniform() * 2 - 1);
    }
    std::vector<double> probs = SelectionProbabilities(scores);
    double sum = 0;
    for (double p : probs) {
      CHECK(p >= 0.0);
      sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("sampling follows the probabilities") {
  ImportanceVector certain{{"a", "b", "c"}, {1, 0, 0}, {1, 0, 0}};
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) CHECK(SampleRenameTarget(certain, rng) == 0);

  ImportanceVector skewed{{"a", "b"}, {0.25, 0.75}, {0.25, 0.75}};
  int second = 0;
  for (int i = 0; i < 10000; ++i) second += SampleRenameTarget(skewed, rng);
  CHECK(second / 10000.0 == doctest::Approx(0.75).epsilon(0.02 / 0.75));
  CHECK(std::abs(second / 10000.0 - 0.75) <= 0.02);

  ImportanceVector flat{{"a", "b", "c", "d"}, {-1, 0, -2, 0}, {}};
  flat.probs = SelectionProbabilities(flat.scores);
  std::vector<int> counts(4, 0);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) ++counts[SampleRenameTarget(flat, rng)];
  double chi2 = 0;
  for (int c : counts) {
    double expected = draws / 4.0;
    chi2 += (c - expected) * (c - expected) / expected;
  }
  // Critical value of chi-square with 3 degrees of freedom at p = 0.001.
  CHECK(chi2 < 16.266);
}

TEST_CASE("frequency provider offers the most common corpus name") {
  std::vector<CodeSnippet> corpus = {
      Py("count = 0\nfor item in range(3):\n    count += item\nprint(count)\n"),
      Py("def f(count, size):\n    return count + size\n"),
      Py("size = 4\nprint(size)\n"),
  };
  // Occurrence oracle over the raw text.
  std::map<std::string, int> occurrences;
  std::regex word("[A-Za-z_][A-Za-z0-9_]*");
  const std::set<std::string> not_names = {"for", "in", "range", "print",
                                           "def", "return"};
  for (const CodeSnippet& s : corpus) {
    for (auto it = std::sregex_iterator(s.source().begin(), s.source().end(),
                                        word);
         it != std::sregex_iterator(); ++it) {
      if (!not_names.count(it->str())) ++occurrences[it->str()];
    }
  }
  auto top = std::max_element(
      occurrences.begin(), occurrences.end(),
      [](const auto& a, const auto& b) { return a.second < b.second; });
  REQUIRE(top->first == "count");

  FrequencyCandidateProvider provider = FrequencyCandidateProvider::Build(corpus);
  CHECK(provider.Ranked(Language::kPython).front() == "count");
  CHECK(provider.Ranked(Language::kJava).empty());
  CodeSnippet target = Py("total = 1\nprint(total)\n");
  std::vector<std::string> cands = ProposeCandidates(target, 0, provider, 40);
  CHECK(std::find(cands.begin(), cands.end(), "count") != cands.end());
  CHECK(ProposeCandidates(target, 0, provider, 1) ==
        std::vector<std::string>{"count"});
}

TEST_CASE("keywords and existing names are filtered out") {
  CodeSnippet s = Py(kThree);
  FixedProvider keyword({"for"});
  CHECK_THROWS_AS(ProposeCandidates(s, 0, keyword), AttackStepSkipped);
  FixedProvider existing({"v2", "a1", "print", "a1", "2x", "v1"});
  CHECK(ProposeCandidates(s, 0, existing) == std::vector<std::string>{"a1"});
  FixedProvider many({"a", "b", "c", "d"});
  CHECK(ProposeCandidates(s, 0, many, 2).size() == 2);
}

TEST_CASE("candidate choice retries and gives up") {
  Rng rng(4);
  std::vector<std::string> cands = {"a", "b", "c"};
  for (int i = 0; i < 50; ++i) {
    CHECK(ChooseCandidate(cands, rng,
                          [](const std::string& n) { return n == "c"; },
                          1000) == "c");
  }
  CHECK_THROWS_AS(
      ChooseCandidate(cands, rng, [](const std::string&) { return false; }, 3),
      AttackStepSkipped);
}

TEST_CASE("rename every occurrence") {
  CodeSnippet s = Py("for j in range(3): print(j)\n");
  auto [renamed, pair] = Rename(s, 0, "n");
  CHECK(renamed.source() == "for n in range(3): print(n)\n");
  CHECK(pair == std::make_pair(std::string("j"), std::string("n")));

  auto [same, identity] = Rename(s, 0, "j");
  CHECK(same.source() == s.source());
  CHECK(identity.first == identity.second);

  CHECK_THROWS_AS(Rename(s, 0, "print"), InputError);
  CHECK_THROWS_AS(Rename(s, 0, "class"), InputError);
}

TEST_CASE("gene delta of one rename") {
  CodeSnippet s = Py(kThree);
  RenameMap gene = RenameMap::Identity(s.identifiers());
  CHECK(gene.ChangedCount() == 0);
  gene.pairs[0].second = "a1";
  CHECK(gene.ChangedCount() == 1);
  CodeSnippet r = ApplyRenameMap(s, gene);
  CHECK(r.source() == "a1 = 1\nv2 = a1 + 1\nv3 = v2 * a1\nprint(v3)\n");
  RenameMap swap = RenameMap::Identity(s.identifiers());
  swap.pairs[0].second = "v2";
  swap.pairs[1].second = "v1";
  CHECK_THROWS_AS(ApplyRenameMap(s, swap), InputError);
  RenameMap clash = RenameMap::Identity(s.identifiers());
  clash.pairs[0].second = "z";
  clash.pairs[1].second = "z";
  CHECK_THROWS_AS(ApplyRenameMap(s, clash), InputError);
}

TEST_CASE("renames keep names unique and python behavior intact") {
  Rng rng(21);
  FrequencyCandidateProvider provider = FrequencyCandidateProvider::Build(
      testing::Snippets(testing::TrainingSet()));
  bool run = testing::PythonAvailable();
  for (Language lang : {Language::kJava, Language::kPython}) {
    for (const LabeledSample& sample : testing::Fixtures(lang)) {
      CodeSnippet cur = sample.snippet;
      for (int step = 0; step < 4; ++step) {
        int target = static_cast<int>(rng.Index(cur.identifiers().size()));
        try {
          auto cands = ProposeCandidates(cur, target, provider);
          cur = Rename(cur, target, cands[rng.Index(cands.size())]).first;
        } catch (const AttackStepSkipped&) {
        }
        REQUIRE(cur.parse_ok());
        std::set<std::string> names;
        for (const IdentifierEntry& e : cur.identifiers().entries()) {
          CHECK(names.insert(e.name).second);
        }
        CHECK(cur.identifiers().size() == sample.snippet.identifiers().size());
      }
      if (run && lang == Language::kPython) {
        INFO(sample.id, "\n", cur.source());
        testing::ProcessResult a = testing::RunPython(sample.snippet.source());
        testing::ProcessResult b = testing::RunPython(cur.source());
        CHECK(a.output == b.output);
        CHECK(a.status == b.status);
      }
    }
  }
}

TEST_CASE("remote provider speaks the predict_identifiers contract") {
  testing::MockServer mock;
  nlohmann::json seen;
  mock.server().Post("/predict_identifiers",
                     [&](const httplib::Request& req, httplib::Response& res) {
                       seen = nlohmann::json::parse(req.body);
                       testing::ReplyJson(
                           res, {{"candidates", {"total", "for", "acc", "v2"}}});
                     });
  mock.server().Post("/bad", [](const httplib::Request&, httplib::Response& res) {
    testing::ReplyJson(res, {{"candidates", "total"}});
  });
  mock.Start();
  std::unique_ptr<CandidateProvider> provider =
      OpenCandidateProvider("http:" + mock.url(), {});
  CodeSnippet s = Py(kThree);
  std::vector<std::string> cands = ProposeCandidates(s, 0, *provider, 5);
  CHECK(cands == std::vector<std::string>{"total", "acc"});
  CHECK(seen == nlohmann::json{{"code", MaskIdentifier(s, 0, kCandidateMask)},
                               {"k", 5}});

  RemoteCandidateProvider bad(mock.url() + "/bad");
  CHECK_THROWS_AS(bad.Predict("x", Language::kPython, 3), ProtocolError);
  mock.Stop();

  RetryPolicy quick;
  quick.attempts = 2;
  quick.initial_backoff = std::chrono::milliseconds(1);
  RemoteCandidateProvider down(mock.url(), quick);
  CHECK_THROWS_AS(down.Predict("x", Language::kPython, 3), TransportError);
  CHECK_THROWS_AS(OpenCandidateProvider("codet5", {Py(kThree)}),
                  ConfigurationError);
}

}  // TEST_SUITE

}  // namespace
}  // namespace mistforge
