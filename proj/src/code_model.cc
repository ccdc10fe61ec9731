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

#include "mistforge/code_model.h"

#include <algorithm>
#include <unordered_set>

#include "mistforge/errors.h"
#include "mistforge/lexer.h"

namespace mistforge {

int IdentifierTable::Find(std::string_view name) const {
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

const SyntaxTree& CodeSnippet::tree() const {
  if (!data_->parse_ok) {
    throw PreconditionError("snippet did not parse: " + data_->parse_error);
  }
  return data_->tree;
}

bool IsValidUtf8(std::string_view text) {
  size_t i = 0;
  while (i < text.size()) {
    auto c = static_cast<unsigned char>(text[i]);
    size_t extra;
    uint32_t cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= text.size()) return false;
    for (size_t k = 1; k <= extra; ++k) {
      auto cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Overlong forms, surrogates and out-of-range code points.
    if ((extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) ||
        (extra == 3 && cp < 0x10000) || cp > 0x10FFFF ||
        (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += extra + 1;
  }
  return true;
}

CodeSnippet Parse(std::string source, Language language) {
  if (!IsValidUtf8(source)) throw InputError("source is not valid UTF-8");
  auto data = std::make_shared<CodeSnippet::Data>();
  data->source = std::move(source);
  data->language = language;
  try {
    data->tree = language == Language::kJava ? ParseJava(data->source)
                                             : ParsePython(data->source);
    data->parse_ok = true;
  } catch (const SyntaxError& e) {
    data->parse_ok = false;
    data->parse_error = e.what();
  }
  CodeSnippet snippet;
  snippet.data_ = data;
  if (data->parse_ok) data->identifiers = ExtractIdentifiers(snippet);
  return snippet;
}

std::string ApplyEditsToText(std::string_view source,
                             std::vector<TokenEdit> edits) {
  std::stable_sort(edits.begin(), edits.end(),
                   [](const TokenEdit& a, const TokenEdit& b) {
                     return a.span.begin < b.span.begin;
                   });
  for (size_t i = 0; i < edits.size(); ++i) {
    const ByteRange& s = edits[i].span;
    if (s.begin > s.end || s.end > source.size()) {
      throw InputError("edit span out of range");
    }
    if (i > 0) {
      const ByteRange& prev = edits[i - 1].span;
      if (s.begin < prev.end || (s.begin == prev.begin && s.size() == 0 &&
                                 prev.size() == 0)) {
        throw InputError("overlapping edits");
      }
    }
  }
  std::string out(source);
  for (auto it = edits.rbegin(); it != edits.rend(); ++it) {
    out.replace(it->span.begin, it->span.size(), it->replacement);
  }
  return out;
}

CodeSnippet ApplyEdits(const CodeSnippet& snippet,
                       std::vector<TokenEdit> edits) {
  if (!snippet.parse_ok()) {
    throw PreconditionError("edits require a parsed snippet");
  }
  if (edits.empty()) return snippet;
  return Parse(ApplyEditsToText(snippet.source(), std::move(edits)),
               snippet.language());
}

bool IsPythonBuiltin(std::string_view name) {
  static const std::unordered_set<std::string_view> kBuiltins = {
      "ArithmeticError", "AssertionError", "AttributeError", "BaseException",
      "BlockingIOError", "BrokenPipeError", "BufferError", "BytesWarning",
      "ChildProcessError", "ConnectionAbortedError", "ConnectionError",
      "ConnectionRefusedError", "ConnectionResetError", "DeprecationWarning",
      "EOFError", "Ellipsis", "EncodingWarning", "EnvironmentError",
      "Exception", "False", "FileExistsError", "FileNotFoundError",
      "FloatingPointError", "FutureWarning", "GeneratorExit", "IOError",
      "ImportError", "ImportWarning", "IndentationError", "IndexError",
      "InterruptedError", "IsADirectoryError", "KeyError", "KeyboardInterrupt",
      "LookupError", "MemoryError", "ModuleNotFoundError", "NameError", "None",
      "NotADirectoryError", "NotImplemented", "NotImplementedError", "OSError",
      "OverflowError", "PendingDeprecationWarning", "PermissionError",
      "ProcessLookupError", "RecursionError", "ReferenceError",
      "ResourceWarning", "RuntimeError", "RuntimeWarning", "StopAsyncIteration",
      "StopIteration", "SyntaxError", "SyntaxWarning", "SystemError",
      "SystemExit", "TabError", "TimeoutError", "True", "TypeError",
      "UnboundLocalError", "UnicodeDecodeError", "UnicodeEncodeError",
      "UnicodeError", "UnicodeTranslateError", "UnicodeWarning", "UserWarning",
      "ValueError", "Warning", "ZeroDivisionError", "abs", "aiter", "all",
      "anext", "any", "ascii", "bin", "bool", "breakpoint", "bytearray",
      "bytes", "callable", "chr", "classmethod", "compile", "complex",
      "copyright", "credits", "delattr", "dict", "dir", "divmod", "enumerate",
      "eval", "exec", "exit", "filter", "float", "format", "frozenset",
      "getattr", "globals", "hasattr", "hash", "help", "hex", "id", "input",
      "int", "isinstance", "issubclass", "iter", "len", "license", "list",
      "locals", "map", "max", "memoryview", "min", "next", "object", "oct",
      "open", "ord", "pow", "print", "property", "quit", "range", "repr",
      "reversed", "round", "set", "setattr", "slice", "sorted", "staticmethod",
      "str", "sum", "super", "tuple", "type", "vars", "zip",
  };
  return kBuiltins.count(name) > 0;
}

bool IsValidIdentifier(std::string_view name, Language language) {
  if (name.empty()) return false;
  auto start = [&](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
           (language == Language::kJava && c == '$');
  };
  if (!start(name[0])) return false;
  for (char c : name.substr(1)) {
    if (!start(c) && !(c >= '0' && c <= '9')) return false;
  }
  if (IsKeyword(name, language) || IsReservedLiteral(name, language)) {
    return false;
  }
  if (language == Language::kJava) {
    // Restricted identifiers and the underscore keyword.
    return name != "_" && name != "var" && name != "yield" &&
           name != "record" && name != "sealed" && name != "permits";
  }
  return true;
}

}  // namespace mistforge
