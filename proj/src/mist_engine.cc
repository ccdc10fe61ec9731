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

#include "mistforge/mist_engine.h"

#include <algorithm>
#include <limits>
#include <numeric>

#include "mistforge/errors.h"

namespace mistforge {

namespace {

std::set<std::string> IdentifierTokens(const CodeSnippet& snippet) {
  std::set<std::string> names;
  for (const Token& tok : snippet.tree().tokens()) {
    if (tok.kind == TokenKind::kIdentifier) names.emplace(tok.text);
  }
  return names;
}

double Objective(const ObjectiveVector& v, int m) {
  switch (m) {
    case 0:
      return v.f1_adversarial_loss;
    case 1:
      return v.f2_semantic_distance;
    default:
      return static_cast<double>(v.f3_edit_distance);
  }
}

}  // namespace

void EngineConfig::Validate() const {
  if (population_size <= 0 || population_size % 2 != 0) {
    throw ConfigurationError("population size must be positive and even");
  }
  if (!(rename_rate >= 0.0 && rename_rate <= 1.0)) {
    throw ConfigurationError("rename rate must lie in [0, 1]");
  }
  if (top_k <= 0) throw ConfigurationError("top_k must be positive");
  if (max_iter < 0) throw ConfigurationError("max_iter must not be negative");
}

int Individual::ChangedIdentifiers() const {
  int n = 0;
  for (const auto& [from, to] : gene.pairs) {
    if (from != to && snippet.identifiers().Find(to) >= 0) ++n;
  }
  return n;
}

CodeSnippet Materialize(const CodeSnippet& original,
                        const std::vector<StructureEdit>& structure_log,
                        const RenameMap& gene) {
  CodeSnippet structured = structure_log.empty()
                               ? original
                               : ReplayStructureLog(original, structure_log);
  return ApplyRenameMap(structured, gene);
}

ClassifierVerdict CachingModel::DoClassify(Language language,
                                           std::string_view source) {
  std::string key(source);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  ClassifierVerdict verdict = inner_.Classify(language, source);
  std::lock_guard<std::mutex> lock(mu_);
  cache_.emplace(std::move(key), verdict);
  return verdict;
}

AttackState::AttackState(const CodeSnippet& original, OriginLabel y_truth,
                         const EngineConfig& config, const AttackContext& ctx)
    : original_(original),
      y_truth_(y_truth),
      config_(config),
      ctx_(ctx),
      metered_(*ctx.model),
      cached_(metered_),
      rng_(config.rng_seed) {
  if (ctx.model == nullptr || ctx.provider == nullptr ||
      ctx.embedder == nullptr) {
    throw ConfigurationError("attack needs a model, a candidate provider "
                             "and an embedder");
  }
  if (!original.parse_ok()) {
    throw PreconditionError("snippet does not parse: " + original.parse_error());
  }
  if (original.identifiers().empty()) {
    throw PreconditionError("snippet has no renameable identifiers");
  }
  ClassifierVerdict verdict =
      cached_.Classify(original.language(), original.source());
  if (verdict.predicted != y_truth) {
    throw PreconditionError("snippet is misclassified by the target model");
  }
  original_confidence_ = verdict.prob(y_truth);
  importance_ = ImportanceScores(original, cached_, y_truth);
  original_tokens_ = IdentifierTokens(original);
}

Individual AttackState::Seed() const {
  Individual ind;
  ind.snippet = original_;
  ind.gene = RenameMap::Identity(original_.identifiers());
  return ind;
}

std::set<std::string> AttackState::ReservedNames(const Individual& ind) const {
  std::set<std::string> reserved = original_tokens_;
  for (const auto& [from, to] : ind.gene.pairs) reserved.insert(to);
  for (const StructureEdit& edit : ind.structure_log) {
    reserved.insert(edit.fresh_names.begin(), edit.fresh_names.end());
  }
  return reserved;
}

Individual AttackState::Mutate(const Individual& ind) {
  try {
    if (rng_.Uniform() < config_.rename_rate) return MutateRename(ind);
    if (std::optional<Individual> out = MutateStructure(ind)) return *out;
    return MutateRename(ind);
  } catch (const AttackStepSkipped&) {
  } catch (const TransformFailed&) {
  } catch (const InputError&) {
  }
  return ind;
}

Individual AttackState::MutateRename(const Individual& ind) {
  const int target = SampleRenameTarget(importance_, rng_);
  const std::string& current = ind.gene.pairs[target].second;
  const int current_index = ind.snippet.identifiers().Find(current);
  if (current_index < 0) {
    throw AttackStepSkipped("identifier '" + current + "' is gone");
  }
  std::vector<std::string> candidates = ProposeCandidates(
      ind.snippet, current_index, *ctx_.provider, config_.top_k);
  const std::set<std::string> reserved = ReservedNames(ind);
  std::string pick = ChooseCandidate(
      candidates, rng_,
      [&](const std::string& name) { return !reserved.contains(name); },
      config_.top_k);
  Individual out = ind;
  out.gene.pairs[target].second = std::move(pick);
  out.snippet = Materialize(original_, out.structure_log, out.gene);
  if (!out.snippet.parse_ok()) throw TransformFailed("rename broke parsing");
  out.objectives.reset();
  out.first_flip = false;
  return out;
}

std::optional<Individual> AttackState::MutateStructure(const Individual& ind) {
  std::vector<TransformSite> sites = EnumerateSites(ind.snippet);
  if (sites.empty()) return std::nullopt;
  const Language lang = original_.language();
  std::vector<TransformSite> chosen;
  for (const TransformSite& site : sites) {
    double p = ctx_.style != nullptr
                   ? SiteProbability(*ctx_.style, lang, y_truth_, site.rule,
                                     site.direction)
                   : 0.5;
    if (rng_.Bernoulli(p)) chosen.push_back(site);
  }
  if (chosen.empty()) return ind;
  // Rewriting from the back keeps the start offsets of earlier sites valid.
  std::stable_sort(chosen.begin(), chosen.end(),
                   [](const TransformSite& a, const TransformSite& b) {
                     return a.node_span.begin > b.node_span.begin;
                   });
  Individual out = ind;
  std::set<std::string> reserved = ReservedNames(ind);
  CodeSnippet current = ind.snippet;
  bool changed = false;
  for (const TransformSite& wanted : chosen) {
    std::vector<TransformSite> now = EnumerateSites(current);
    auto it = std::find_if(now.begin(), now.end(), [&](const TransformSite& s) {
      return s.rule == wanted.rule && s.direction == wanted.direction &&
             s.node_span.begin == wanted.node_span.begin;
    });
    if (it == now.end()) continue;
    try {
      StructureEdit edit = PrepareEdit(current, *it, reserved);
      CodeSnippet next = ApplyTransform(current, edit);
      reserved.insert(edit.fresh_names.begin(), edit.fresh_names.end());
      out.structure_log.push_back(std::move(edit));
      current = std::move(next);
      changed = true;
    } catch (const TransformFailed&) {
    }
  }
  if (!changed) return ind;
  out.snippet = Materialize(original_, out.structure_log, out.gene);
  if (out.snippet.source() != current.source()) {
    throw TransformFailed("structure log does not replay on the original");
  }
  out.objectives.reset();
  out.first_flip = false;
  return out;
}

std::pair<Individual, Individual> AttackState::Crossover(const Individual& a,
                                                         const Individual& b) {
  const size_t n = a.gene.pairs.size();
  if (n < 2 || b.gene.pairs.size() != n) return {a, b};
  const size_t h = 1 + rng_.Index(n - 1);
  auto make = [&](const Individual& head, const Individual& tail) {
    Individual child;
    child.structure_log = head.structure_log;
    child.gene.pairs = head.gene.pairs;
    std::copy(tail.gene.pairs.begin() + h, tail.gene.pairs.end(),
              child.gene.pairs.begin() + h);
    std::set<std::string> taken = original_tokens_;
    for (const StructureEdit& edit : child.structure_log) {
      taken.insert(edit.fresh_names.begin(), edit.fresh_names.end());
    }
    for (auto& [from, to] : child.gene.pairs) {
      if (from == to) continue;
      if (!taken.insert(to).second) to = from;
    }
    try {
      child.snippet = Materialize(original_, child.structure_log, child.gene);
    } catch (const InputError&) {
      return head;
    } catch (const TransformFailed&) {
      return head;
    }
    if (!child.snippet.parse_ok()) return head;
    return child;
  };
  return {make(a, b), make(b, a)};
}

void AttackState::Evaluate(Individual& ind) {
  if (ind.objectives) return;
  ClassifierVerdict verdict =
      cached_.Classify(ind.snippet.language(), ind.snippet.source());
  ObjectiveVector v;
  v.f1_adversarial_loss = verdict.prob(y_truth_);
  v.f2_semantic_distance = SemanticDistance(ind.gene, *ctx_.embedder);
  v.f3_edit_distance = EditDistance(original_, ind.snippet);
  ind.objectives = v;
  ind.first_flip = verdict.predicted != y_truth_;
}

std::vector<std::vector<int>> NonDominatedFronts(
    const std::vector<ObjectiveVector>& points) {
  const int n = static_cast<int>(points.size());
  std::vector<std::vector<int>> dominated(n);
  std::vector<int> dominators(n, 0);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      if (p == q) continue;
      if (Dominates(points[p], points[q])) {
        dominated[p].push_back(q);
      } else if (Dominates(points[q], points[p])) {
        ++dominators[p];
      }
    }
  }
  std::vector<std::vector<int>> fronts;
  std::vector<int> current;
  for (int p = 0; p < n; ++p) {
    if (dominators[p] == 0) current.push_back(p);
  }
  while (!current.empty()) {
    std::vector<int> next;
    for (int p : current) {
      for (int q : dominated[p]) {
        if (--dominators[q] == 0) next.push_back(q);
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(current));
    current = std::move(next);
  }
  return fronts;
}

std::vector<double> CrowdingDistances(const std::vector<ObjectiveVector>& points,
                                      const std::vector<int>& front) {
  const size_t k = front.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(k, 0.0);
  if (k <= 2) {
    std::fill(dist.begin(), dist.end(), kInf);
    return dist;
  }
  std::vector<size_t> order(k);
  for (int m = 0; m < 3; ++m) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return Objective(points[front[a]], m) < Objective(points[front[b]], m);
    });
    const double lo = Objective(points[front[order.front()]], m);
    const double hi = Objective(points[front[order.back()]], m);
    if (!(hi > lo)) continue;
    dist[order.front()] = kInf;
    dist[order.back()] = kInf;
    for (size_t i = 1; i + 1 < k; ++i) {
      double gap = Objective(points[front[order[i + 1]]], m) -
                   Objective(points[front[order[i - 1]]], m);
      dist[order[i]] += gap / (hi - lo);
    }
  }
  return dist;
}

std::vector<int> SelectIndices(const std::vector<ObjectiveVector>& points,
                               int n) {
  std::vector<int> chosen;
  if (n >= static_cast<int>(points.size())) {
    chosen.resize(points.size());
    std::iota(chosen.begin(), chosen.end(), 0);
    return chosen;
  }
  for (const std::vector<int>& front : NonDominatedFronts(points)) {
    const int room = n - static_cast<int>(chosen.size());
    if (room <= 0) break;
    if (static_cast<int>(front.size()) <= room) {
      chosen.insert(chosen.end(), front.begin(), front.end());
      continue;
    }
    std::vector<double> dist = CrowdingDistances(points, front);
    std::vector<size_t> order(front.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return dist[a] > dist[b]; });
    for (int i = 0; i < room; ++i) chosen.push_back(front[order[i]]);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::vector<Individual> Select(std::vector<Individual> pool, int n) {
  std::vector<ObjectiveVector> points;
  points.reserve(pool.size());
  for (const Individual& ind : pool) {
    if (!ind.objectives) {
      throw PreconditionError("selection needs evaluated individuals");
    }
    points.push_back(*ind.objectives);
  }
  std::vector<Individual> out;
  for (int i : SelectIndices(points, n)) out.push_back(std::move(pool[i]));
  return out;
}

const Individual* AttackOutcome::TrainingSample() const {
  if (adversarial) return &*adversarial;
  if (best) return &*best;
  return nullptr;
}

AttackOutcome Attack(const CodeSnippet& original, OriginLabel y_truth,
                     const EngineConfig& config, const AttackContext& ctx) {
  config.Validate();
  AttackState state(original, y_truth, config, ctx);
  AttackOutcome out;
  out.original_confidence = state.original_confidence();
  const int n = config.population_size;

  // Evaluates and records; true when the attack should stop.
  auto consider = [&](Individual& ind) {
    state.Evaluate(ind);
    if (!out.best || ind.objectives->f1_adversarial_loss <
                         out.best->objectives->f1_adversarial_loss) {
      out.best = ind;
    }
    if (ind.first_flip && !out.success) {
      out.success = true;
      out.adversarial = ind;
      out.queries_to_first_success = state.queries();
    }
    return out.success && config.stop_on_first_success;
  };

  std::vector<Individual> population;
  bool stop = false;
  for (int i = 0; i < n && !stop; ++i) {
    population.push_back(state.Mutate(state.Seed()));
    stop = consider(population.back());
  }
  const int max_iter = config.MaxIterFor(
      static_cast<int>(original.identifiers().size()));
  for (int iter = 0; iter < max_iter && !stop; ++iter) {
    std::vector<Individual> pool = population;
    for (int c = 0; c < n / 2 && !stop; ++c) {
      size_t i = state.rng().Index(population.size());
      size_t j = state.rng().Index(population.size() - 1);
      if (j >= i) ++j;
      auto [x, y] = state.Crossover(population[i], population[j]);
      pool.push_back(state.Mutate(x));
      stop = consider(pool.back());
      if (stop) break;
      pool.push_back(state.Mutate(y));
      stop = consider(pool.back());
    }
    if (stop) {
      population = std::move(pool);
      break;
    }
    population = Select(std::move(pool), n);
    out.iterations = iter + 1;
  }
  out.final_population = std::move(population);
  out.total_queries = state.queries();
  out.best_confidence_drop =
      std::max(0.0, out.original_confidence -
                        out.best->objectives->f1_adversarial_loss);
  return out;
}

}  // namespace mistforge
