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

#include "mistforge/objectives.h"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "mistforge/errors.h"

namespace mistforge {

namespace {

uint32_t Fnv1a32(std::string_view text) {
  uint32_t h = 2166136261u;
  for (unsigned char c : text) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

std::vector<double> Normalized(std::vector<double> v) {
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ProtocolError("embedding has zero or non-finite norm");
  }
  for (double& x : v) x /= norm;
  return v;
}

// Code points of valid UTF-8; stray bytes count as one unit each.
std::u32string CodePoints(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    unsigned char c = text[i];
    int len = c < 0x80 ? 1 : (c >> 5) == 6 ? 2 : (c >> 4) == 14 ? 3
              : (c >> 3) == 30 ? 4 : 0;
    if (len <= 1 || i + len > text.size()) {
      out.push_back(c);
      ++i;
      continue;
    }
    char32_t cp = c & (0x7f >> len);
    for (int k = 1; k < len; ++k) cp = (cp << 6) | (text[i + k] & 0x3f);
    out.push_back(cp);
    i += len;
  }
  return out;
}

// Bit-parallel Levenshtein (Hyyrö 2003, block variant) with the shorter
// string as the pattern.
int64_t BitParallelLevenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() > b.size()) std::swap(a, b);
  const size_t m = a.size();
  if (m == 0) return static_cast<int64_t>(b.size());
  const size_t words = (m + 63) / 64;
  std::unordered_map<char32_t, std::vector<uint64_t>> peq;
  for (size_t i = 0; i < m; ++i) {
    auto& mask = peq[a[i]];
    if (mask.empty()) mask.assign(words, 0);
    mask[i / 64] |= uint64_t{1} << (i % 64);
  }
  const std::vector<uint64_t> zero(words, 0);
  std::vector<uint64_t> vp(words, ~uint64_t{0});
  std::vector<uint64_t> vn(words, 0);
  const uint64_t last = uint64_t{1} << ((m - 1) % 64);
  int64_t dist = static_cast<int64_t>(m);
  for (char32_t c : b) {
    auto it = peq.find(c);
    const std::vector<uint64_t>& pm = it == peq.end() ? zero : it->second;
    uint64_t hp_carry = 1;
    uint64_t hn_carry = 0;
    for (size_t w = 0; w < words; ++w) {
      uint64_t x = pm[w] | hn_carry;
      uint64_t d0 = (((x & vp[w]) + vp[w]) ^ vp[w]) | x | vn[w];
      uint64_t hp = vn[w] | ~(d0 | vp[w]);
      uint64_t hn = d0 & vp[w];
      uint64_t hp_in = hp_carry;
      uint64_t hn_in = hn_carry;
      if (w + 1 < words) {
        hp_carry = hp >> 63;
        hn_carry = hn >> 63;
      } else {
        hp_carry = (hp & last) != 0;
        hn_carry = (hn & last) != 0;
      }
      hp = (hp << 1) | hp_in;
      hn = (hn << 1) | hn_in;
      vp[w] = hn | ~(d0 | hp);
      vn[w] = hp & d0;
    }
    dist += static_cast<int64_t>(hp_carry) - static_cast<int64_t>(hn_carry);
  }
  return dist;
}

}  // namespace

bool Dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  if (a.f1_adversarial_loss > b.f1_adversarial_loss ||
      a.f2_semantic_distance > b.f2_semantic_distance ||
      a.f3_edit_distance > b.f3_edit_distance) {
    return false;
  }
  return a.f1_adversarial_loss < b.f1_adversarial_loss ||
         a.f2_semantic_distance < b.f2_semantic_distance ||
         a.f3_edit_distance < b.f3_edit_distance;
}

std::vector<double> TrigramEmbedder::Embed(std::string_view name) {
  std::string padded = "^" + std::string(name) + "$";
  std::vector<double> v(kDimension, 0.0);
  for (size_t i = 0; i + 3 <= padded.size(); ++i) {
    v[Fnv1a32(std::string_view(padded).substr(i, 3)) % kDimension] += 1.0;
  }
  if (padded.size() < 3) v[Fnv1a32(padded) % kDimension] += 1.0;
  return Normalized(std::move(v));
}

size_t RemoteEmbedder::dimension() const {
  std::lock_guard<std::mutex> lock(mu_);
  return dimension_;
}

std::vector<double> RemoteEmbedder::Embed(std::string_view name) {
  std::string key(name);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  nlohmann::json reply =
      PostJson(endpoint_, "/embed", {{"token", key}}, policy_);
  auto field = reply.find("vector");
  if (field == reply.end() || !field->is_array() || field->empty()) {
    throw ProtocolError("/embed reply lacks a non-empty vector");
  }
  std::vector<double> v;
  for (const auto& x : *field) {
    if (!x.is_number()) throw ProtocolError("/embed vector is not numeric");
    v.push_back(x.get<double>());
  }
  v = Normalized(std::move(v));
  std::lock_guard<std::mutex> lock(mu_);
  if (dimension_ == 0) dimension_ = v.size();
  if (v.size() != dimension_) {
    throw ProtocolError("/embed returned " + std::to_string(v.size()) +
                        " dimensions, expected " + std::to_string(dimension_));
  }
  return cache_.emplace(std::move(key), std::move(v)).first->second;
}

std::unique_ptr<EmbeddingProvider> OpenEmbedder(std::string_view locator,
                                                RetryPolicy policy) {
  if (locator == "trigram") return std::make_unique<TrigramEmbedder>();
  if (locator.starts_with("http:") && !locator.starts_with("http://")) {
    locator.remove_prefix(5);
  }
  if (locator.starts_with("http://")) {
    return std::make_unique<RemoteEmbedder>(locator, policy);
  }
  throw ConfigurationError("unknown embedder '" + std::string(locator) + "'");
}

double CosineSimilarity(const std::vector<double>& a,
                        const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw InputError("cosine of vectors with different dimensions");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw InputError("cosine of a zero vector");
  return dot / std::sqrt(na * nb);
}

double AdversarialLoss(TargetModel& model, const CodeSnippet& candidate,
                       OriginLabel y_truth) {
  if (!candidate.parse_ok()) {
    throw PreconditionError("adversarial loss needs a parsed candidate");
  }
  return model.Classify(candidate.language(), candidate.source()).prob(y_truth);
}

double SemanticDistance(const RenameMap& gene, EmbeddingProvider& embedder) {
  double total = 0.0;
  for (const auto& [from, to] : gene.pairs) {
    if (from == to) continue;
    total += 1.0 - CosineSimilarity(embedder.Embed(from), embedder.Embed(to));
  }
  return total;
}

int64_t Levenshtein(std::string_view a, std::string_view b) {
  std::u32string ca = CodePoints(a);
  std::u32string cb = CodePoints(b);
  std::u32string_view va(ca), vb(cb);
  while (!va.empty() && !vb.empty() && va.front() == vb.front()) {
    va.remove_prefix(1);
    vb.remove_prefix(1);
  }
  while (!va.empty() && !vb.empty() && va.back() == vb.back()) {
    va.remove_suffix(1);
    vb.remove_suffix(1);
  }
  return BitParallelLevenshtein(va, vb);
}

}  // namespace mistforge
