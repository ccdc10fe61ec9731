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

#ifndef MISTFORGE_DATASET_H_
#define MISTFORGE_DATASET_H_

#include <string>
#include <vector>

#include <json.hpp>

#include "mistforge/code_model.h"
#include "mistforge/language.h"
#include "mistforge/model_interface.h"

namespace mistforge {

// One JSONL record: {"id", "language", "label", "code"}.
struct LabeledSample {
  std::string id;
  OriginLabel label = OriginLabel::kHuman;
  CodeSnippet snippet;
};

// Throws InputError naming the line for malformed records or duplicate ids.
std::vector<LabeledSample> ReadSamples(const std::string& path);
std::vector<LabeledSample> ParseSamples(const std::string& jsonl);

nlohmann::json SampleToJson(const LabeledSample& sample);
void WriteSamples(const std::string& path,
                  const std::vector<LabeledSample>& samples);

LabeledCorpus ToCorpus(const std::vector<LabeledSample>& samples);

// Writes `text` to `path`, throwing InputError if the file cannot be
// written.
void WriteTextFile(const std::string& path, const std::string& text);
std::string ReadTextFile(const std::string& path);

}  // namespace mistforge

#endif  // MISTFORGE_DATASET_H_
