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

#include "mistforge/language.h"

#include "mistforge/errors.h"

namespace mistforge {

std::string_view LanguageName(Language language) {
  return language == Language::kJava ? "java" : "python";
}

Language ParseLanguage(std::string_view name) {
  if (name == "java" || name == "Java") return Language::kJava;
  if (name == "python" || name == "Python") return Language::kPython;
  throw ConfigurationError("no grammar for language '" + std::string(name) +
                           "'");
}

std::string_view OriginName(OriginLabel label) {
  return label == OriginLabel::kHuman ? "human" : "llm";
}

OriginLabel ParseOrigin(std::string_view name) {
  if (name == "human" || name == "Human" || name == "0") {
    return OriginLabel::kHuman;
  }
  if (name == "llm" || name == "LLM" || name == "1") return OriginLabel::kLlm;
  throw InputError("unknown origin label '" + std::string(name) + "'");
}

}  // namespace mistforge
