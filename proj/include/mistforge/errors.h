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

#ifndef MISTFORGE_ERRORS_H_
#define MISTFORGE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace mistforge {

// Malformed caller input: bad UTF-8, overlapping edits, invalid names.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operation was invoked on a value that does not satisfy its contract,
// e.g. extracting identifiers from a snippet that failed to parse.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The remote endpoint could not be reached or kept failing after retries.
class TransportError : public std::runtime_error {
 public:
  TransportError(const std::string& endpoint, const std::string& what)
      : std::runtime_error(endpoint + ": " + what), endpoint_(endpoint) {}

  const std::string& endpoint() const { return endpoint_; }

 private:
  std::string endpoint_;
};

// The endpoint answered, but the body violates the wire contract.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A structure transformation produced code that does not reparse.
class TransformFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No usable rename candidate was found for the selected identifier.
class AttackStepSkipped : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mistforge

#endif  // MISTFORGE_ERRORS_H_
