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

#include "mistforge/dataset.h"

#include <fstream>
#include <set>
#include <sstream>

#include "mistforge/errors.h"

namespace mistforge {

namespace {

std::string RequireString(const nlohmann::json& record, const char* field,
                          int line) {
  auto it = record.find(field);
  if (it == record.end() || !it->is_string()) {
    throw InputError("line " + std::to_string(line) + ": missing string field '" +
                     field + "'");
  }
  return it->get<std::string>();
}

}  // namespace

std::vector<LabeledSample> ParseSamples(const std::string& jsonl) {
  std::vector<LabeledSample> out;
  std::set<std::string> ids;
  std::istringstream in(jsonl);
  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError("line " + std::to_string(line) + ": " + e.what());
    }
    if (!record.is_object()) {
      throw InputError("line " + std::to_string(line) + ": not a JSON object");
    }
    LabeledSample sample;
    sample.id = RequireString(record, "id", line);
    Language language;
    try {
      language = ParseLanguage(RequireString(record, "language", line));
      sample.label = ParseOrigin(RequireString(record, "label", line));
    } catch (const ConfigurationError& e) {
      throw InputError("line " + std::to_string(line) + ": " + e.what());
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(line) + ": " + e.what());
    }
    std::string code = RequireString(record, "code", line);
    try {
      sample.snippet = Parse(std::move(code), language);
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(line) + ": " + e.what());
    }
    if (!ids.insert(sample.id).second) {
      throw InputError("line " + std::to_string(line) + ": duplicate id '" +
                       sample.id + "'");
    }
    out.push_back(std::move(sample));
  }
  return out;
}

std::vector<LabeledSample> ReadSamples(const std::string& path) {
  try {
    return ParseSamples(ReadTextFile(path));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

nlohmann::json SampleToJson(const LabeledSample& sample) {
  return {{"id", sample.id},
          {"language", std::string(LanguageName(sample.snippet.language()))},
          {"label", std::string(OriginName(sample.label))},
          {"code", sample.snippet.source()}};
}

void WriteSamples(const std::string& path,
                  const std::vector<LabeledSample>& samples) {
  std::string text;
  for (const LabeledSample& sample : samples) {
    text += SampleToJson(sample).dump();
    text += '\n';
  }
  WriteTextFile(path, text);
}

LabeledCorpus ToCorpus(const std::vector<LabeledSample>& samples) {
  LabeledCorpus corpus;
  corpus.reserve(samples.size());
  for (const LabeledSample& s : samples) corpus.emplace_back(s.snippet, s.label);
  return corpus;
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  if (!out) throw InputError("cannot write " + path);
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace mistforge
