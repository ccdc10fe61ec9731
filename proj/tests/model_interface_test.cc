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

#include <atomic>
#include <cmath>
#include <string>
#include <vector>

#include <doctest.h>

#include "mistforge/errors.h"
#include "mistforge/model_interface.h"
#include "mistforge/random.h"
#include "test_support.h"

namespace mistforge {
namespace {

RetryPolicy Quick() {
  RetryPolicy p;
  p.attempts = 3;
  p.initial_backoff = std::chrono::milliseconds(1);
  p.timeout = std::chrono::milliseconds(2000);
  return p;
}

LabeledCorpus SeparableCorpus() {
  LabeledCorpus corpus;
  for (int i = 0; i < 20; ++i) {
    std::string n = std::to_string(i);
    corpus.emplace_back(
        Parse("def helper_fn(a" + n + "):\n    return a" + n + " + 1\n",
              Language::kPython),
        OriginLabel::kLlm);
    corpus.emplace_back(
        Parse("def work(b" + n + "):\n    return b" + n + " - 1\n",
              Language::kPython),
        OriginLabel::kHuman);
  }
  return corpus;
}

TEST_SUITE("model_interface") {

TEST_CASE("verdict threshold and validation") {
  ClassifierVerdict v = MakeVerdict(0.3, 0.7);
  CHECK(v.predicted == OriginLabel::kLlm);
  CHECK(v.prob(OriginLabel::kHuman) == 0.3);
  CHECK(MakeVerdict(0.5, 0.5).predicted == OriginLabel::kLlm);
  CHECK(MakeVerdict(0.5000001, 0.4999999).predicted == OriginLabel::kHuman);
  CHECK_THROWS_AS(MakeVerdict(0.3, 0.5), ProtocolError);
  CHECK_THROWS_AS(MakeVerdict(-0.1, 1.1), ProtocolError);
  CHECK_THROWS_AS(MakeVerdict(NAN, 0.5), ProtocolError);
  CHECK_THROWS_AS(VerdictFromJson({{"prob_human", 0.5}}), ProtocolError);
  CHECK_THROWS_AS(VerdictFromJson({{"prob_human", "0.5"}, {"prob_llm", 0.5}}),
                  ProtocolError);
  ClassifierVerdict j = VerdictFromJson({{"prob_human", 0.9}, {"prob_llm", 0.1}});
  CHECK(j.predicted == OriginLabel::kHuman);
}

TEST_CASE("remote model speaks the classify contract") {
  testing::MockServer mock;
  nlohmann::json seen;
  std::atomic<int> flaky_calls{0};
  mock.server().Post("/classify",
                     [&](const httplib::Request& req, httplib::Response& res) {
                       seen = nlohmann::json::parse(req.body);
                       testing::ReplyJson(res, {{"prob_human", 0.3},
                                                {"prob_llm", 0.7}});
                     });
  mock.server().Post("/short/classify",
                     [](const httplib::Request&, httplib::Response& res) {
                       testing::ReplyJson(res, {{"prob_human", 0.3},
                                                {"prob_llm", 0.5}});
                     });
  mock.server().Post("/flaky/classify",
                     [&](const httplib::Request&, httplib::Response& res) {
                       if (++flaky_calls < 3) {
                         testing::ReplyJson(res, {{"error", "busy"}}, 503);
                       } else {
                         testing::ReplyJson(res, {{"prob_human", 0.8},
                                                  {"prob_llm", 0.2}});
                       }
                     });
  mock.server().Post("/down/classify",
                     [](const httplib::Request&, httplib::Response& res) {
                       testing::ReplyJson(res, {{"error", "down"}}, 500);
                     });
  mock.server().Post("/reject/classify",
                     [](const httplib::Request&, httplib::Response& res) {
                       testing::ReplyJson(res, {{"error", "bad"}}, 400);
                     });
  mock.server().Post("/text/classify",
                     [](const httplib::Request&, httplib::Response& res) {
                       res.set_content("not json", "text/plain");
                     });
  mock.Start();

  RemoteModel model(mock.url(), Quick());
  ClassifierVerdict v = model.Classify(Language::kJava, "class A {}");
  CHECK(v.prob_llm == 0.7);
  CHECK(v.predicted == OriginLabel::kLlm);
  CHECK(seen == nlohmann::json{{"language", "java"}, {"code", "class A {}"}});
  CHECK(model.query_count() == 1);

  RemoteModel short_sum(mock.url() + "/short", Quick());
  CHECK_THROWS_AS(short_sum.Classify(Language::kPython, "x"), ProtocolError);

  RemoteModel flaky(mock.url() + "/flaky", Quick());
  CHECK(flaky.Classify(Language::kPython, "x").predicted == OriginLabel::kHuman);
  CHECK(flaky_calls == 3);

  RemoteModel down(mock.url() + "/down", Quick());
  try {
    down.Classify(Language::kPython, "x");
    FAIL("expected a transport error");
  } catch (const TransportError& e) {
    CHECK(e.endpoint() == mock.url() + "/down/classify");
  }

  RemoteModel reject(mock.url() + "/reject", Quick());
  CHECK_THROWS_AS(reject.Classify(Language::kPython, "x"), ProtocolError);
  RemoteModel text(mock.url() + "/text", Quick());
  CHECK_THROWS_AS(text.Classify(Language::kPython, "x"), ProtocolError);

  std::string url = mock.url();
  mock.Stop();
  RemoteModel gone(url, Quick());
  CHECK_THROWS_AS(gone.Classify(Language::kPython, "x"), TransportError);
}

TEST_CASE("model locators") {
  CHECK_THROWS_AS(OpenModel("onnx:model.bin"), ConfigurationError);
  CHECK_THROWS_AS(OpenModel("http:ftp://host"), ConfigurationError);
  CHECK_THROWS_AS(HttpEndpoint("https://example.com"), ConfigurationError);
  CHECK(HttpEndpoint("http://127.0.0.1:8080/api").PathFor("/classify") ==
        "/api/classify");
}

TEST_CASE("separable corpus is learned exactly") {
  LabeledCorpus corpus = SeparableCorpus();
  TrainReport report;
  ReferenceClassifier model = TrainReference(corpus, TrainOptions{}, &report);
  CHECK(report.accuracy == 1.0);
  CHECK(Accuracy(model, corpus) == 1.0);
}

TEST_CASE("zero epochs leave the classifier undecided") {
  TrainOptions options;
  options.epochs = 0;
  ReferenceClassifier model = TrainReference(SeparableCorpus(), options);
  ClassifierVerdict v = model.Predict(SeparableCorpus()[0].first);
  CHECK(v.prob_llm == 0.5);
  CHECK(v.prob_human == 0.5);
}

TEST_CASE("single-label corpus is rejected") {
  LabeledCorpus corpus = SeparableCorpus();
  LabeledCorpus llm_only;
  for (const auto& item : corpus) {
    if (item.second == OriginLabel::kLlm) llm_only.push_back(item);
  }
  CHECK_THROWS_AS(TrainReference(llm_only, TrainOptions{}), InputError);
  CHECK_THROWS_AS(TrainReference({}, TrainOptions{}), InputError);
}

TEST_CASE("cross-entropy gradient matches central differences") {
  Rng rng(17);
  std::vector<double> w(ReferenceClassifier::kDimension);
  for (double& x : w) x = (rng.Uniform() - 0.5) * 0.2;
  ReferenceClassifier model;
  model.SetParameters(w, 0.1);
  std::vector<SparseVector> xs;
  std::vector<int> ys;
  for (size_t i = 0; i < testing::TrainingSet().size(); i += 37) {
    const LabeledSample& s = testing::TrainingSet()[i];
    xs.push_back(ReferenceClassifier::Featurize(s.snippet));
    ys.push_back(LabelIndex(s.label));
  }
  for (double l2 : {0.0, 0.01}) {
    std::vector<double> grad = model.LossGradient(xs, ys, l2);
    REQUIRE(grad.size() == ReferenceClassifier::kDimension + 1);
    std::vector<size_t> coords = {ReferenceClassifier::kDimension};
    for (const auto& [index, value] : xs[0]) coords.push_back(index);
    for (const auto& [index, value] : xs[1]) coords.push_back(index);
    coords.push_back(ReferenceClassifier::kLengthIndex);
    coords.push_back(7);
    const double h = 1e-5;
    double worst = 0;
    for (size_t c : coords) {
      auto loss_at = [&](double delta) {
        ReferenceClassifier m;
        std::vector<double> wc = w;
        double b = 0.1;
        if (c == ReferenceClassifier::kDimension) {
          b += delta;
        } else {
          wc[c] += delta;
        }
        m.SetParameters(wc, b);
        return m.Loss(xs, ys, l2);
      };
      double numeric = (loss_at(h) - loss_at(-h)) / (2 * h);
      worst = std::max(worst, std::abs(numeric - grad[c]));
    }
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("inference is pure and survives serialization") {
  auto model = testing::TrainedReference();
  ReferenceClassifier copy = ReferenceClassifier::FromJson(model->ToJson());
  CHECK(copy.ToJson() == model->ToJson());
  for (const LabeledSample& s : testing::Fixtures(Language::kJava)) {
    ClassifierVerdict a = model->Predict(s.snippet);
    ClassifierVerdict b = copy.Predict(s.snippet);
    CHECK(a.prob_llm == b.prob_llm);
    CHECK(a.predicted == b.predicted);
    CHECK(a.prob_human + a.prob_llm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((a.predicted == OriginLabel::kLlm) == (a.prob_llm >= 0.5));
  }
  CHECK_THROWS_AS(ReferenceClassifier::FromJson("{\"bias\": 1}"), InputError);
  ClassifierVerdict broken = model->Predict(Language::kJava, "class A {");
  CHECK(broken.prob_human + broken.prob_llm ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("reference model meters every query") {
  ReferenceModel model(testing::TrainedReference());
  MeteredModel metered(model);
  for (int i = 0; i < 5; ++i) metered.Classify(Language::kPython, "x = 1\n");
  CHECK(metered.query_count() == 5);
  CHECK(model.query_count() == 5);
}

TEST_CASE("fine-tuning") {
  auto model = testing::TrainedReference();
  ReferenceClassifier same = FineTuneReference(*model, {});
  CHECK(same.ToJson() == model->ToJson());
  TrainOptions defaults = FineTuneOptions();
  CHECK(defaults.epochs == 1);

  LabeledCorpus originals = ToCorpus(testing::TrainingSet());
  LabeledCorpus fixtures = ToCorpus(testing::Fixtures(Language::kJava));
  LabeledCorpus py = ToCorpus(testing::Fixtures(Language::kPython));
  fixtures.insert(fixtures.end(), py.begin(), py.end());
  double before = Accuracy(*model, fixtures);
  ReferenceClassifier tuned = FineTuneReference(*model, originals);
  CHECK(Accuracy(tuned, fixtures) >= before - 0.02);
  CHECK_THROWS_AS(FineTuneReference(*model, {originals[0]}), InputError);
}

}  // TEST_SUITE

}  // namespace
}  // namespace mistforge
