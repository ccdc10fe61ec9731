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
#include <cmath>
#include <mutex>
#include <string>
#include <vector>

#include <doctest.h>

#include "mistforge/errors.h"
#include "mistforge/objectives.h"
#include "mistforge/random.h"
#include "oracles.h"
#include "test_support.h"

namespace mistforge {
namespace {

using oracle::LevenshteinOracle;
using oracle::RandomText;
using oracle::Utf8;
using testing::StubModel;

class AxisEmbedder final : public EmbeddingProvider {
 public:
  size_t dimension() const override { return 2; }
  std::vector<double> Embed(std::string_view name) override {
    return name.front() < 'n' ? std::vector<double>{1, 0}
                              : std::vector<double>{0, 1};
  }
};

TEST_SUITE("objectives") {

TEST_CASE("adversarial loss is the true-class confidence") {
  CodeSnippet s = Parse("x = 1\n", Language::kPython);
  StubModel even([](std::string_view) { return 0.5; });
  CHECK(AdversarialLoss(even, s, OriginLabel::kLlm) == 0.5);
  CHECK(AdversarialLoss(even, s, OriginLabel::kHuman) == 0.5);
  StubModel wrong([](std::string_view) { return 0.01; });
  CHECK(AdversarialLoss(wrong, s, OriginLabel::kLlm) ==
        doctest::Approx(0.01).epsilon(1e-12));
  StubModel fooled([](std::string_view) { return 1.0 - 0.999; });
  CHECK(AdversarialLoss(fooled, s, OriginLabel::kLlm) ==
        doctest::Approx(0.001).epsilon(1e-9));
  CHECK(fooled.query_count() == 1);
}

TEST_CASE("semantic distance") {
  CodeSnippet s = Parse("count = 1\nprint(count)\n", Language::kPython);
  TrigramEmbedder trigram;
  RenameMap identity = RenameMap::Identity(s.identifiers());
  CHECK(SemanticDistance(identity, trigram) == 0.0);

  AxisEmbedder axis;
  RenameMap orthogonal{{{"alpha", "zeta"}}};
  CHECK(SemanticDistance(orthogonal, axis) == doctest::Approx(1.0));

  // Computed by tests/oracles/trigram_oracle.py.
  RenameMap counter{{{"count", "counter"}}};
  CHECK(SemanticDistance(counter, trigram) ==
        doctest::Approx(0.3238765962171868).epsilon(1e-12));
}

TEST_CASE("identity genes cost nothing on every fixture") {
  TrigramEmbedder trigram;
  for (Language lang : {Language::kJava, Language::kPython}) {
    for (const LabeledSample& sample : testing::Fixtures(lang)) {
      CHECK(SemanticDistance(RenameMap::Identity(sample.snippet.identifiers()),
                             trigram) == 0.0);
    }
  }
}

TEST_CASE("trigram embeddings are unit, deterministic and nonzero") {
  TrigramEmbedder trigram;
  for (const char* name : {"a", "count", "counter", "x", "mist_tmp_0", "é"}) {
    std::vector<double> v = trigram.Embed(name);
    CHECK(v.size() == TrigramEmbedder::kDimension);
    double norm = 0;
    for (double x : v) norm += x * x;
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(trigram.Embed(name) == v);
    CHECK(CosineSimilarity(v, v) == doctest::Approx(1.0));
  }
  CHECK(CosineSimilarity(trigram.Embed("count"), trigram.Embed("counter")) >
        CosineSimilarity(trigram.Embed("count"), trigram.Embed("zebra")));
}

TEST_CASE("semantic distance per pair stays within two") {
  TrigramEmbedder trigram;
  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    RenameMap gene;
    for (int i = 0; i < 3; ++i) {
      std::string a(1 + rng.Index(6), 'a'), b(1 + rng.Index(6), 'b');
      for (char& c : a) c = static_cast<char>('a' + rng.Index(26));
      for (char& c : b) c = static_cast<char>('a' + rng.Index(26));
      gene.pairs.emplace_back(a, b);
    }
    double d = SemanticDistance(gene, trigram);
    CHECK(d >= 0.0);
    CHECK(d <= 6.0);
  }
}

TEST_CASE("levenshtein examples") {
  CHECK(Levenshtein("", "") == 0);
  CHECK(Levenshtein("same text", "same text") == 0);
  CHECK(Levenshtein("kitten", "sitting") == 3);
  CHECK(Levenshtein("abc", "") == 3);
  CHECK(Levenshtein("x+=y", "x=x+y") ==
        LevenshteinOracle(U"x+=y", U"x=x+y"));
  CHECK(Levenshtein("x+=y", "x=x+y") == 3);
  CHECK(Levenshtein("été", "ete") == 2);
}

TEST_CASE("levenshtein matches the dynamic program") {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    size_t max_len = trial % 10 == 0 ? 300 : 40;
    std::u32string a = RandomText(rng, max_len);
    std::u32string b = rng.Bernoulli(0.5) ? RandomText(rng, max_len) : a;
    if (!b.empty() && rng.Bernoulli(0.5)) b[rng.Index(b.size())] = U'q';
    INFO(Utf8(a), " | ", Utf8(b));
    int64_t d = Levenshtein(Utf8(a), Utf8(b));
    CHECK(d == LevenshteinOracle(a, b));
    CHECK(d == Levenshtein(Utf8(b), Utf8(a)));
  }
}

TEST_CASE("dominance examples") {
  CHECK(Dominates({0.1, 0.2, 3}, {0.2, 0.2, 3}));
  CHECK_FALSE(Dominates({0.1, 0.5, 3}, {0.2, 0.2, 3}));
  CHECK_FALSE(Dominates({0.2, 0.2, 3}, {0.1, 0.5, 3}));
  ObjectiveVector a{0.3, 0.1, 7};
  CHECK_FALSE(Dominates(a, a));
}

TEST_CASE("dominance is irreflexive and transitive") {
  Rng rng(99);
  auto draw = [&] {
    return ObjectiveVector{static_cast<double>(rng.Index(3)) / 2,
                           static_cast<double>(rng.Index(3)),
                           static_cast<int64_t>(rng.Index(3))};
  };
  std::vector<ObjectiveVector> points;
  for (int i = 0; i < 60; ++i) points.push_back(draw());
  int chains = 0;
  for (const ObjectiveVector& a : points) {
    CHECK_FALSE(Dominates(a, a));
    for (const ObjectiveVector& b : points) {
      if (Dominates(a, b)) CHECK_FALSE(Dominates(b, a));
      for (const ObjectiveVector& c : points) {
        if (Dominates(a, b) && Dominates(b, c)) {
          ++chains;
          CHECK(Dominates(a, c));
        }
      }
    }
  }
  CHECK(chains > 0);
}

TEST_CASE("remote embedder speaks the embed contract") {
  testing::MockServer mock;
  std::vector<std::string> tokens;
  std::mutex mu;
  mock.server().Post("/embed",
                     [&](const httplib::Request& req, httplib::Response& res) {
                       nlohmann::json body = nlohmann::json::parse(req.body);
                       std::string token = body.at("token");
                       {
                         std::lock_guard<std::mutex> lock(mu);
                         tokens.push_back(token);
                       }
                       if (token == "zero") {
                         testing::ReplyJson(res, {{"vector", {0.0, 0.0}}});
                       } else if (token == "wide") {
                         testing::ReplyJson(res, {{"vector", {1.0, 2.0, 3.0}}});
                       } else {
                         testing::ReplyJson(
                             res, {{"vector", {3.0, static_cast<double>(token.size())}}});
                       }
                     });
  mock.Start();
  std::unique_ptr<EmbeddingProvider> remote = OpenEmbedder("http:" + mock.url());
  std::vector<double> v = remote->Embed("abcd");
  REQUIRE(v.size() == 2);
  CHECK(v[0] == doctest::Approx(0.6));
  CHECK(v[1] == doctest::Approx(0.8));
  CHECK(remote->dimension() == 2);
  CHECK(remote->Embed("abcd") == v);
  CHECK(tokens == std::vector<std::string>{"abcd"});
  CHECK_THROWS_AS(remote->Embed("zero"), ProtocolError);
  CHECK_THROWS_AS(remote->Embed("wide"), ProtocolError);
  CHECK_THROWS_AS(OpenEmbedder("word2vec"), ConfigurationError);
}

}  // TEST_SUITE

}  // namespace
}  // namespace mistforge
