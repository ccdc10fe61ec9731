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

#ifndef MISTFORGE_TESTS_TEST_SUPPORT_H_
#define MISTFORGE_TESTS_TEST_SUPPORT_H_

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <httplib.h>
#include <unistd.h>

#include "mistforge/dataset.h"
#include "mistforge/errors.h"
#include "mistforge/identifier_attack.h"
#include "mistforge/model_interface.h"

namespace mistforge::testing {

inline std::string DataPath(const std::string& name) {
  return std::string(MISTFORGE_TEST_DATA_DIR) + "/" + name;
}

inline const std::vector<LabeledSample>& Fixtures(Language language) {
  static const auto* java =
      new std::vector<LabeledSample>(ReadSamples(DataPath("fixtures_java.jsonl")));
  static const auto* python = new std::vector<LabeledSample>(
      ReadSamples(DataPath("fixtures_python.jsonl")));
  return language == Language::kJava ? *java : *python;
}

inline const std::vector<LabeledSample>& TrainingSet() {
  static const auto* train =
      new std::vector<LabeledSample>(ReadSamples(DataPath("train.jsonl")));
  return *train;
}

// Reference classifier trained once per process with default options.
inline std::shared_ptr<const ReferenceClassifier> TrainedReference() {
  static const auto model = std::make_shared<const ReferenceClassifier>(
      TrainReference(ToCorpus(TrainingSet()), TrainOptions{}));
  return model;
}

inline std::vector<CodeSnippet> Snippets(
    const std::vector<LabeledSample>& samples) {
  std::vector<CodeSnippet> out;
  for (const LabeledSample& s : samples) out.push_back(s.snippet);
  return out;
}

// TargetModel whose verdict is computed by a function of the source.
class StubModel final : public TargetModel {
 public:
  explicit StubModel(std::function<double(std::string_view)> prob_llm)
      : prob_llm_(std::move(prob_llm)) {}

 protected:
  ClassifierVerdict DoClassify(Language, std::string_view source) override {
    double p = prob_llm_(source);
    return MakeVerdict(1.0 - p, p);
  }

 private:
  std::function<double(std::string_view)> prob_llm_;
};

class FixedProvider final : public CandidateProvider {
 public:
  explicit FixedProvider(std::vector<std::string> names)
      : names_(std::move(names)) {}
  std::vector<std::string> Predict(std::string_view, Language, int k) override {
    std::vector<std::string> out = names_;
    if (out.size() > static_cast<size_t>(k)) out.resize(k);
    return out;
  }

 private:
  std::vector<std::string> names_;
};

// httplib server on an ephemeral localhost port, stopped on destruction.
class MockServer {
 public:
  MockServer() = default;
  MockServer(const MockServer&) = delete;
  MockServer& operator=(const MockServer&) = delete;
  ~MockServer() { Stop(); }

  httplib::Server& server() { return server_; }

  void Start() {
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void Stop() {
    if (thread_.joinable()) {
      server_.stop();
      thread_.join();
    }
  }
  std::string url() const {
    return "http://127.0.0.1:" + std::to_string(port_);
  }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

// Reply helper for mock routes.
inline void ReplyJson(httplib::Response& res, const nlohmann::json& body,
                      int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

struct ProcessResult {
  int status = -1;
  std::string output;
};

// Runs a Python program with python3 and captures stdout and stderr.
inline ProcessResult RunPython(const std::string& source) {
  static std::atomic<int> counter{0};
  std::filesystem::path dir = std::filesystem::temp_directory_path();
  std::filesystem::path file =
      dir / ("mistforge_run_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++) + ".py");
  WriteTextFile(file.string(), source);
  std::string command = "python3 '" + file.string() + "' 2>&1";
  ProcessResult result;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (pipe == nullptr) return result;
  char buffer[4096];
  size_t n = 0;
  while ((n = std::fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
    result.output.append(buffer, n);
  }
  result.status = ::pclose(pipe);
  std::filesystem::remove(file);
  return result;
}

inline bool PythonAvailable() {
  return RunPython("print(1)\n").output == "1\n";
}

}  // namespace mistforge::testing

#endif  // MISTFORGE_TESTS_TEST_SUPPORT_H_
