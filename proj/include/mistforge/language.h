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

#ifndef MISTFORGE_LANGUAGE_H_
#define MISTFORGE_LANGUAGE_H_

#include <string>
#include <string_view>

namespace mistforge {

enum class Language { kJava, kPython };

// Human-written code maps to class 0, LLM-generated code to class 1.
enum class OriginLabel { kHuman = 0, kLlm = 1 };

std::string_view LanguageName(Language language);
Language ParseLanguage(std::string_view name);

std::string_view OriginName(OriginLabel label);
OriginLabel ParseOrigin(std::string_view name);

inline int LabelIndex(OriginLabel label) { return static_cast<int>(label); }

inline OriginLabel Opposite(OriginLabel label) {
  return label == OriginLabel::kHuman ? OriginLabel::kLlm
                                      : OriginLabel::kHuman;
}

}  // namespace mistforge

#endif  // MISTFORGE_LANGUAGE_H_
