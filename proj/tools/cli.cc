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

#include "cli.h"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "mistforge/dataset.h"
#include "mistforge/errors.h"
#include "mistforge/evaluation.h"
#include "mistforge/identifier_attack.h"
#include "mistforge/mist_engine.h"
#include "mistforge/model_interface.h"
#include "mistforge/objectives.h"
#include "mistforge/style_profile.h"

namespace mistforge::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

void Log(std::string_view level, const std::string& message) {
  std::cerr << "mistforge level=" << level
            << " msg=" << nlohmann::json(message).dump() << "\n";
}

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

uint64_t DefaultSeed() {
  const char* env = std::getenv("MISTFORGE_SEED");
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  char* end = nullptr;
  errno = 0;
  unsigned long long value = std::strtoull(env, &end, 10);
  if (errno != 0 || end == env || *end != '\0' || env[0] == '-') {
    throw UsageError(std::string("MISTFORGE_SEED is not an unsigned integer: ") +
                     env);
  }
  return value;
}

int DefaultJobs() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

void WriteManifest(const std::string& primary_output,
                   const std::string& command, const nlohmann::json& options,
                   uint64_t seed, int jobs) {
  std::filesystem::path dir =
      std::filesystem::path(primary_output).parent_path();
  if (dir.empty()) dir = ".";
  nlohmann::json manifest = {{"tool", "mistforge"},
                             {"version", kVersion},
                             {"command", command},
                             {"seed", seed},
                             {"jobs", jobs},
                             {"options", options}};
  WriteTextFile((dir / "run-manifest.json").string(), manifest.dump(2) + "\n");
}

std::string Pretty(const nlohmann::json& json) { return json.dump(2) + "\n"; }

struct EngineFlags {
  int population = 30;
  int max_iter = 0;
  double rename_rate = 0.5;
  int top_k = kDefaultTopK;
  bool pool_mode = false;

  void Register(CLI::App* app) {
    app->add_option("--population", population, "Population size N (even)")
        ->capture_default_str();
    app->add_option("--max-iter", max_iter,
                    "Iterations; 0 means 5 x identifier count")
        ->capture_default_str();
    app->add_option("--rename-rate", rename_rate,
                    "Probability r of a rename mutation")
        ->capture_default_str();
    app->add_option("--top-k", top_k, "Rename candidates per query")
        ->capture_default_str();
    app->add_flag("--pool", pool_mode,
                  "Keep evolving after the first success");
  }

  EngineConfig Config() const {
    EngineConfig c;
    c.population_size = population;
    c.max_iter = max_iter;
    c.rename_rate = rename_rate;
    c.top_k = top_k;
    c.stop_on_first_success = !pool_mode;
    c.Validate();
    return c;
  }

  nlohmann::json ToJson() const {
    return {{"population", population}, {"max_iter", max_iter},
            {"rename_rate", rename_rate}, {"top_k", top_k},
            {"pool", pool_mode}};
  }
};

struct ResourceFlags {
  std::string model;
  std::string style;
  std::string provider = "builtin-frequency";
  std::string corpus;
  std::string embedder = "trigram";

  void Register(CLI::App* app, bool need_model) {
    auto* m = app->add_option("--model", model,
                              "builtin:<classifier.json> or http:<url>");
    if (need_model) m->required();
    app->add_option("--style", style, "Style table JSON");
    app->add_option("--provider", provider,
                    "builtin-frequency or http:<url>")
        ->capture_default_str();
    app->add_option("--corpus", corpus,
                    "JSONL corpus for the frequency provider");
    app->add_option("--embedder", embedder, "trigram or http:<url>")
        ->capture_default_str();
  }

  nlohmann::json ToJson() const {
    return {{"model", model}, {"style", style}, {"provider", provider},
            {"corpus", corpus}, {"embedder", embedder}};
  }
};

struct Resources {
  std::unique_ptr<TargetModel> model;
  std::unique_ptr<CandidateProvider> provider;
  std::unique_ptr<EmbeddingProvider> embedder;
  std::optional<StyleTable> style;

  AttackContext Context() {
    return AttackContext{model.get(), provider.get(), embedder.get(),
                         style ? &*style : nullptr};
  }
};

Resources Open(const ResourceFlags& flags, bool open_model) {
  Resources r;
  if (open_model) r.model = OpenModel(flags.model);
  std::vector<CodeSnippet> corpus;
  if (flags.provider == "builtin-frequency") {
    if (flags.corpus.empty()) {
      throw UsageError("--provider builtin-frequency needs --corpus");
    }
    for (const LabeledSample& s : ReadSamples(flags.corpus)) {
      corpus.push_back(s.snippet);
    }
  }
  r.provider = OpenCandidateProvider(flags.provider, corpus);
  r.embedder = OpenEmbedder(flags.embedder);
  if (!flags.style.empty()) {
    r.style = StyleTable::Load(flags.style);
  } else {
    Log("warn", "no --style given; every transformation uses probability 0.5");
  }
  return r;
}

ReferenceClassifier LoadBuiltin(const std::string& locator) {
  constexpr std::string_view kPrefix = "builtin:";
  if (locator.rfind(kPrefix, 0) != 0) {
    throw UsageError("this command needs --model builtin:<path>");
  }
  return ReferenceClassifier::Load(locator.substr(kPrefix.size()));
}

std::vector<Attacker> ParseAttackers(const std::string& list,
                                     const EngineConfig& base) {
  std::vector<Attacker> out;
  std::stringstream in(list);
  std::string name;
  while (std::getline(in, name, ',')) {
    EngineConfig c = base;
    if (name == "mist") {
    } else if (name == "mist-rename") {
      c.rename_rate = 1.0;
    } else if (name == "mist-structure") {
      c.rename_rate = 0.0;
    } else {
      throw UsageError("unknown attacker '" + name +
                       "' (mist, mist-rename, mist-structure)");
    }
    out.push_back(Attacker{name, c});
  }
  if (out.empty()) throw UsageError("--attackers is empty");
  return out;
}

TopsisWeights ResolveWeights(const std::string& text) {
  if (text == "equal") return kEqualWeights;
  if (text == "asr-priority") return kAsrPriorityWeights;
  return ParseWeights(text);
}

}  // namespace

int Run(const std::vector<std::string>& args) {
  CLI::App app{"Multi-objective adversarial attacks on code-origin detectors",
               "mistforge"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  uint64_t seed = 0;
  int jobs = DefaultJobs();
  try {
    seed = DefaultSeed();
  } catch (const UsageError& e) {
    Log("error", e.what());
    return kExitUsage;
  }
  app.add_option("--seed", seed, "Run seed (default 7 or $MISTFORGE_SEED)")
      ->capture_default_str();
  app.add_option("--jobs", jobs, "Worker threads")->capture_default_str();

  // style build
  auto* style_cmd = app.add_subcommand("style", "Style reference table");
  style_cmd->require_subcommand(1);
  auto* style_build = style_cmd->add_subcommand("build", "Build from a corpus");
  std::string sb_corpus, sb_out;
  style_build->add_option("--corpus", sb_corpus, "Labeled JSONL")->required();
  style_build->add_option("--out", sb_out, "Output style-table.json")
      ->required();

  // attack
  auto* attack_cmd = app.add_subcommand("attack", "Attack every sample");
  std::string at_input, at_out;
  ResourceFlags at_res;
  EngineFlags at_engine;
  attack_cmd->add_option("--input", at_input, "Samples JSONL")->required();
  attack_cmd->add_option("--out", at_out, "Outcome JSONL")->required();
  at_res.Register(attack_cmd, true);
  at_engine.Register(attack_cmd);

  // eval metrics / topsis / rq3
  auto* eval_cmd = app.add_subcommand("eval", "Evaluation");
  eval_cmd->require_subcommand(1);
  auto* metrics_cmd = eval_cmd->add_subcommand("metrics", "ASR, AMQ, ICR, SD, ED");
  std::string me_input, me_out;
  metrics_cmd->add_option("--input", me_input, "Outcome JSONL")->required();
  metrics_cmd->add_option("--out", me_out, "Output metrics.json")->required();

  auto* topsis_cmd = eval_cmd->add_subcommand("topsis", "TOPSIS ranking");
  std::string tp_input, tp_out, tp_weights = "equal";
  std::vector<std::string> tp_metrics;
  auto* tp_in_opt = topsis_cmd->add_option(
      "--input", tp_input, "CSV with header name,asr,icr,sd,ed,amq");
  auto* tp_me_opt = topsis_cmd->add_option(
      "--metrics", tp_metrics, "NAME=metrics.json, repeatable");
  tp_in_opt->excludes(tp_me_opt);
  topsis_cmd->add_option("--weights", tp_weights,
                         "equal, asr-priority or five comma-separated weights")
      ->capture_default_str();
  topsis_cmd->add_option("--out", tp_out, "Output topsis.csv")->required();

  auto* rq3_cmd = eval_cmd->add_subcommand("rq3", "Cross-attack robustness");
  std::string rq_input, rq_out, rq_attackers = "mist,mist-rename,mist-structure";
  ResourceFlags rq_res;
  EngineFlags rq_engine;
  rq3_cmd->add_option("--input", rq_input, "Test set JSONL")->required();
  rq3_cmd->add_option("--out", rq_out, "Output rq3_matrix.csv")->required();
  rq3_cmd->add_option("--attackers", rq_attackers, "Comma-separated attackers")
      ->capture_default_str();
  rq_res.Register(rq3_cmd, true);
  rq_engine.Register(rq3_cmd);

  // dataset augment
  auto* dataset_cmd = app.add_subcommand("dataset", "Datasets");
  dataset_cmd->require_subcommand(1);
  auto* augment_cmd =
      dataset_cmd->add_subcommand("augment", "Adversarial 70/30 training mix");
  std::string ag_input, ag_out;
  ResourceFlags ag_res;
  EngineFlags ag_engine;
  augment_cmd->add_option("--input", ag_input, "Training JSONL")->required();
  augment_cmd->add_option("--out", ag_out, "Augmented JSONL")->required();
  ag_res.Register(augment_cmd, true);
  ag_engine.Register(augment_cmd);

  // model train-ref / serve-check
  auto* model_cmd = app.add_subcommand("model", "Target models");
  model_cmd->require_subcommand(1);
  auto* train_cmd = model_cmd->add_subcommand(
      "train-ref", "Train or fine-tune the reference classifier");
  std::string tr_corpus, tr_out, tr_init;
  TrainOptions tr_options;
  train_cmd->add_option("--corpus", tr_corpus, "Labeled JSONL")->required();
  train_cmd->add_option("--out", tr_out, "Output classifier JSON")->required();
  train_cmd->add_option("--init", tr_init,
                        "Classifier to fine-tune (one epoch by default)");
  auto* tr_epochs = train_cmd->add_option("--epochs", tr_options.epochs);
  auto* tr_lr = train_cmd->add_option("--lr", tr_options.learning_rate);
  auto* tr_batch = train_cmd->add_option("--batch-size", tr_options.batch_size);

  auto* check_cmd =
      model_cmd->add_subcommand("serve-check", "Query a model endpoint");
  std::string sc_model, sc_input, sc_out = "serve-check.jsonl";
  check_cmd->add_option("--model", sc_model, "builtin:<path> or http:<url>")
      ->required();
  check_cmd->add_option("--input", sc_input, "Samples JSONL (default: probe)");
  check_cmd->add_option("--out", sc_out, "Verdict JSONL")->capture_default_str();

  std::vector<std::string> argv_storage = {"mistforge"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : argv_storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (jobs <= 0) throw UsageError("--jobs must be positive");

    if (*style_build) {
      StyleTable table = StyleTable::Build(ToCorpus(ReadSamples(sb_corpus)));
      table.Save(sb_out);
      WriteManifest(sb_out, "style build",
                    {{"corpus", sb_corpus}, {"out", sb_out}}, seed, jobs);
      Log("info", "wrote " + sb_out);
      return kExitOk;
    }

    if (*attack_cmd) {
      EngineConfig config = at_engine.Config();
      std::vector<LabeledSample> samples = ReadSamples(at_input);
      Resources res = Open(at_res, true);
      SubsetX subset = FilterSubsetX(samples, *res.model);
      std::vector<AttackRecord> records =
          RunAttacks(subset.kept, config, res.Context(), seed, jobs);
      std::map<std::string, const AttackRecord*> by_id;
      for (const AttackRecord& r : records) by_id[r.id] = &r;
      std::map<std::string, Exclusion> excluded(subset.excluded.begin(),
                                                subset.excluded.end());
      std::vector<SampleOutcome> outcomes;
      for (const LabeledSample& s : samples) {
        auto it = by_id.find(s.id);
        if (it != by_id.end()) {
          outcomes.push_back(Summarize(s, *it->second));
        } else {
          AttackRecord skipped{s.id, std::nullopt,
                               std::string(ExclusionName(excluded.at(s.id)))};
          outcomes.push_back(Summarize(s, skipped));
        }
      }
      WriteTextFile(at_out, OutcomesToJsonl(outcomes));
      nlohmann::json options = at_res.ToJson();
      options.update(at_engine.ToJson());
      options["input"] = at_input;
      options["out"] = at_out;
      WriteManifest(at_out, "attack", options, seed, jobs);
      int success = 0;
      for (const SampleOutcome& o : outcomes) success += o.success;
      Log("info", "attacked " + std::to_string(records.size()) + " of " +
                      std::to_string(samples.size()) + " samples, " +
                      std::to_string(success) + " successes");
      return kExitOk;
    }

    if (*metrics_cmd) {
      MetricsReport report = ComputeMetrics(ReadOutcomes(me_input));
      WriteTextFile(me_out, Pretty(MetricsToJson(report)));
      WriteManifest(me_out, "eval metrics",
                    {{"input", me_input}, {"out", me_out}}, seed, jobs);
      Log("info", "wrote " + me_out);
      return kExitOk;
    }

    if (*topsis_cmd) {
      TopsisWeights weights = ResolveWeights(tp_weights);
      std::vector<TopsisAlternative> alternatives;
      if (!tp_input.empty()) {
        alternatives = ReadTopsisInput(ReadTextFile(tp_input));
      } else if (!tp_metrics.empty()) {
        for (const std::string& item : tp_metrics) {
          size_t eq = item.find('=');
          if (eq == std::string::npos || eq == 0) {
            throw UsageError("--metrics expects NAME=path, got " + item);
          }
          nlohmann::json m = nlohmann::json::parse(ReadTextFile(item.substr(eq + 1)));
          MetricsReport r;
          r.asr = m.at("asr").get<double>();
          auto opt = [&](const char* key) -> std::optional<double> {
            if (!m.contains(key) || m[key].is_null()) return std::nullopt;
            return m[key].get<double>();
          };
          r.icr = opt("icr");
          r.sd_mean = opt("sd_mean");
          r.ed_mean = opt("ed_mean");
          r.amq = opt("amq");
          alternatives.push_back(AlternativeFromMetrics(item.substr(0, eq), r));
        }
      } else {
        throw UsageError("eval topsis needs --input or --metrics");
      }
      std::vector<TopsisScore> scores = TopsisRank(alternatives, weights);
      WriteTextFile(tp_out, TopsisToCsv(scores));
      WriteManifest(tp_out, "eval topsis",
                    {{"input", tp_input},
                     {"metrics", tp_metrics},
                     {"weights", weights},
                     {"out", tp_out}},
                    seed, jobs);
      Log("info", "wrote " + tp_out);
      return kExitOk;
    }

    if (*rq3_cmd) {
      EngineConfig config = rq_engine.Config();
      std::vector<Attacker> attackers = ParseAttackers(rq_attackers, config);
      ReferenceClassifier model = LoadBuiltin(rq_res.model);
      Resources res = Open(rq_res, false);
      ReferenceModel target(std::make_shared<const ReferenceClassifier>(model));
      SubsetX subset = FilterSubsetX(ReadSamples(rq_input), target);
      Rq3Result result =
          RunRq3(subset.kept, attackers, model, res.Context(), seed, jobs);
      WriteTextFile(rq_out, Rq3ToCsv(result));
      nlohmann::json options = rq_res.ToJson();
      options.update(rq_engine.ToJson());
      options["input"] = rq_input;
      options["out"] = rq_out;
      options["attackers"] = rq_attackers;
      WriteManifest(rq_out, "eval rq3", options, seed, jobs);
      Log("info", "wrote " + rq_out);
      return kExitOk;
    }

    if (*augment_cmd) {
      EngineConfig config = ag_engine.Config();
      ResourceFlags flags = ag_res;
      if (flags.corpus.empty()) flags.corpus = ag_input;
      std::vector<LabeledSample> training = ReadSamples(ag_input);
      Resources res = Open(flags, true);
      AugmentedSet set =
          BuildAugmentedSet(training, config, res.Context(), seed, jobs);
      if (set.n_adversarial == 0) {
        Log("warn", "no adversarial sample collected; writing originals only");
      }
      WriteSamples(ag_out, set.samples);
      nlohmann::json options = flags.ToJson();
      options.update(ag_engine.ToJson());
      options["input"] = ag_input;
      options["out"] = ag_out;
      WriteManifest(ag_out, "dataset augment", options, seed, jobs);
      Log("info", "attacked " + std::to_string(set.n_attacked) + ", kept " +
                      std::to_string(set.n_adversarial) + " adversarial and " +
                      std::to_string(set.n_original) + " original samples");
      return kExitOk;
    }

    if (*train_cmd) {
      LabeledCorpus corpus = ToCorpus(ReadSamples(tr_corpus));
      TrainOptions options = tr_options;
      ReferenceClassifier model;
      if (!tr_init.empty()) {
        TrainOptions tune = FineTuneOptions();
        if (tr_epochs->count() > 0) tune.epochs = options.epochs;
        if (tr_lr->count() > 0) tune.learning_rate = options.learning_rate;
        if (tr_batch->count() > 0) tune.batch_size = options.batch_size;
        tune.seed = seed;
        options = tune;
        model = FineTuneReference(ReferenceClassifier::Load(tr_init), corpus,
                                  options);
      } else {
        options.seed = seed;
        model = TrainReference(corpus, options);
      }
      model.Save(tr_out);
      WriteManifest(tr_out, "model train-ref",
                    {{"corpus", tr_corpus},
                     {"init", tr_init},
                     {"out", tr_out},
                     {"epochs", options.epochs},
                     {"lr", options.learning_rate},
                     {"batch_size", options.batch_size}},
                    seed, jobs);
      Log("info", "training accuracy " +
                      std::to_string(Accuracy(model, corpus)));
      return kExitOk;
    }

    if (*check_cmd) {
      std::unique_ptr<TargetModel> model = OpenModel(sc_model);
      std::vector<LabeledSample> samples;
      if (sc_input.empty()) {
        samples.push_back(LabeledSample{
            "probe", OriginLabel::kHuman,
            Parse("def probe(x):\n    return x\n", Language::kPython)});
      } else {
        samples = ReadSamples(sc_input);
      }
      std::string text;
      for (const LabeledSample& s : samples) {
        ClassifierVerdict v =
            model->Classify(s.snippet.language(), s.snippet.source());
        nlohmann::json line = {{"id", s.id},
                               {"prob_human", v.prob_human},
                               {"prob_llm", v.prob_llm},
                               {"predicted", std::string(OriginName(v.predicted))}};
        text += line.dump() + "\n";
      }
      WriteTextFile(sc_out, text);
      Log("info", "classified " + std::to_string(samples.size()) +
                      " samples into " + sc_out);
      WriteManifest(sc_out, "model serve-check",
                    {{"model", sc_model}, {"input", sc_input}, {"out", sc_out}},
                    seed, jobs);
      return kExitOk;
    }
  } catch (const TransportError& e) {
    Log("error", "transport failure at " + e.endpoint() + ": " + e.what());
    return kExitTransport;
  } catch (const UsageError& e) {
    Log("error", e.what());
    return kExitUsage;
  } catch (const ConfigurationError& e) {
    Log("error", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    Log("error", e.what());
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace mistforge::cli
