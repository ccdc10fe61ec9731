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

#ifndef MISTFORGE_HTTP_JSON_H_
#define MISTFORGE_HTTP_JSON_H_

#include <chrono>
#include <string>
#include <string_view>

#include "json.hpp"

namespace mistforge {

// Transport settings for model services.
struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{200};
  std::chrono::milliseconds timeout{10000};
};

// Base URL of a model service, e.g. "http://127.0.0.1:8080/api".
class HttpEndpoint {
 public:
  // Throws ConfigurationError unless the URL is plain http://host[:port].
  explicit HttpEndpoint(std::string_view url);

  const std::string& url() const { return url_; }
  const std::string& origin() const { return origin_; }
  std::string PathFor(std::string_view route) const;

 private:
  std::string url_;
  std::string origin_;
  std::string base_path_;
};

// POSTs a JSON body to endpoint + route and parses the JSON reply.
// Connection failures, timeouts and 5xx replies are retried with
// exponential backoff; when attempts run out a TransportError naming
// the route's URL is thrown. A 4xx reply or a body that is not JSON
// throws ProtocolError.
nlohmann::json PostJson(const HttpEndpoint& endpoint, std::string_view route,
                        const nlohmann::json& body,
                        const RetryPolicy& policy = {});

}  // namespace mistforge

#endif  // MISTFORGE_HTTP_JSON_H_
