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

#ifndef MISTFORGE_CODE_MODEL_H_
#define MISTFORGE_CODE_MODEL_H_

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mistforge/language.h"
#include "mistforge/syntax_tree.h"

namespace mistforge {

// Half-open byte range [begin, end) into a source text.
struct ByteRange {
  uint32_t begin = 0;
  uint32_t end = 0;

  uint32_t size() const { return end - begin; }
  bool operator==(const ByteRange& other) const = default;
};

struct IdentifierEntry {
  std::string name;
  std::vector<ByteRange> spans;
};

// Renameable identifiers of a snippet, deduplicated by surface name and
// ordered by first occurrence.
class IdentifierTable {
 public:
  IdentifierTable() = default;
  explicit IdentifierTable(std::vector<IdentifierEntry> entries)
      : entries_(std::move(entries)) {}

  const std::vector<IdentifierEntry>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const IdentifierEntry& operator[](size_t i) const { return entries_[i]; }

  // Index of the entry with the given name, or -1.
  int Find(std::string_view name) const;

 private:
  std::vector<IdentifierEntry> entries_;
};

struct TokenEdit {
  ByteRange span;
  std::string replacement;
};

// An immutable parsed source text. Copies share state.
class CodeSnippet {
 public:
  const std::string& source() const { return data_->source; }
  Language language() const { return data_->language; }
  bool parse_ok() const { return data_->parse_ok; }
  // Empty when parse_ok.
  const std::string& parse_error() const { return data_->parse_error; }
  // Requires parse_ok.
  const SyntaxTree& tree() const;
  // Empty unless parse_ok.
  const IdentifierTable& identifiers() const { return data_->identifiers; }

 private:
  friend CodeSnippet Parse(std::string source, Language language);

  struct Data {
    std::string source;
    Language language = Language::kJava;
    bool parse_ok = false;
    std::string parse_error;
    SyntaxTree tree;
    IdentifierTable identifiers;
  };

  std::shared_ptr<const Data> data_;
};

// Parses source; a syntax error yields parse_ok=false rather than an
// exception. Throws InputError on malformed UTF-8.
CodeSnippet Parse(std::string source, Language language);

// Declared variable, parameter, function and class names of the snippet
// with every renameable occurrence. Throws PreconditionError unless
// snippet.parse_ok().
IdentifierTable ExtractIdentifiers(const CodeSnippet& snippet);

// Applies non-overlapping edits to the text. Throws InputError on overlap
// or out-of-range spans.
std::string ApplyEditsToText(std::string_view source,
                             std::vector<TokenEdit> edits);

// Applies edits and reparses. Throws PreconditionError unless
// snippet.parse_ok(); the caller checks parse_ok() of the result.
CodeSnippet ApplyEdits(const CodeSnippet& snippet,
                       std::vector<TokenEdit> edits);

// Lexical identifier rule of the language, excluding reserved words.
bool IsValidIdentifier(std::string_view name, Language language);

// Python builtin names (never offered for renaming, never used as a
// replacement).
bool IsPythonBuiltin(std::string_view name);

bool IsValidUtf8(std::string_view text);

}  // namespace mistforge

#endif  // MISTFORGE_CODE_MODEL_H_
