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

#include "mistforge/http_json.h"

#include <thread>

#include "httplib.h"
#include "mistforge/errors.h"

namespace mistforge {

HttpEndpoint::HttpEndpoint(std::string_view url) : url_(url) {
  constexpr std::string_view kScheme = "http://";
  if (url.substr(0, kScheme.size()) != kScheme) {
    throw ConfigurationError("model service URL must start with http://: " +
                             std::string(url));
  }
  std::string_view rest = url.substr(kScheme.size());
  size_t slash = rest.find('/');
  std::string_view authority = rest.substr(0, slash);
  if (authority.empty()) {
    throw ConfigurationError("model service URL has no host: " +
                             std::string(url));
  }
  origin_ = std::string(kScheme) + std::string(authority);
  if (slash != std::string_view::npos) {
    base_path_ = std::string(rest.substr(slash));
    while (!base_path_.empty() && base_path_.back() == '/') {
      base_path_.pop_back();
    }
  }
}

std::string HttpEndpoint::PathFor(std::string_view route) const {
  return base_path_ + std::string(route);
}

nlohmann::json PostJson(const HttpEndpoint& endpoint, std::string_view route,
                        const nlohmann::json& body,
                        const RetryPolicy& policy) {
  std::string path = endpoint.PathFor(route);
  std::string where = endpoint.origin() + path;
  std::string payload = body.dump();
  auto seconds = std::chrono::duration_cast<std::chrono::seconds>(policy.timeout);
  auto micros = std::chrono::duration_cast<std::chrono::microseconds>(
      policy.timeout - seconds);
  std::string last_error = "no attempt made";
  auto backoff = policy.initial_backoff;
  for (int attempt = 0; attempt < policy.attempts; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client client(endpoint.origin());
    client.set_connection_timeout(seconds.count(), micros.count());
    client.set_read_timeout(seconds.count(), micros.count());
    client.set_write_timeout(seconds.count(), micros.count());
    httplib::Result res = client.Post(path, payload, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status >= 400) {
      throw ProtocolError(where + " rejected the request with HTTP " +
                          std::to_string(res->status));
    }
    try {
      return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception&) {
      throw ProtocolError(where + " returned a body that is not JSON");
    }
  }
  throw TransportError(where, last_error + " after " +
                                  std::to_string(policy.attempts) +
                                  " attempts");
}

}  // namespace mistforge
