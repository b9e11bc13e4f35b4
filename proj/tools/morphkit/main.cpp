// Copyright 2026 The MorphKit Authors.
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
// Command-line front end. Talks to the library only through the C API.

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "morphkit/morphkit.h"

namespace {

// Carries a status out of a subcommand; the message is already recorded.
struct Failure {
  mk_status status;
  std::string message;
};

void check(mk_status status) {
  if (status != MK_OK) throw Failure{status, mk_last_error()};
}

[[noreturn]] void usage_failure(const std::string& message) { throw Failure{MK_USAGE_ERROR, message}; }

using OptionsPtr = std::unique_ptr<mk_options, decltype(&mk_options_destroy)>;

OptionsPtr make_options() {
  mk_options* raw = nullptr;
  check(mk_options_create(&raw));
  return {raw, &mk_options_destroy};
}

std::string take_string(mk_options* options, const char* key) {
  char* raw = nullptr;
  check(mk_options_take(options, key, &raw));
  std::string value = raw ? raw : "";
  mk_string_free(raw);
  return value;
}

const char* c_str_or_null(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

std::string percent(uint64_t num, uint64_t den) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", den ? 100.0 * static_cast<double>(num) / static_cast<double>(den) : 0.0);
  return buf;
}

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// Training settings shared by "train" and "ner train". Path flags may also
// come from the config file under the flag's name; flags win.
struct TrainArgs {
  std::map<std::string, std::string> paths;
  std::string config;
  std::vector<std::string> sets;
  std::optional<std::string> mode;
  std::optional<unsigned long long> seed;
  std::optional<int> epochs;

  void add_path(CLI::App* app, const std::string& name, const std::string& help) {
    app->add_option("--" + name, paths[name], help)->type_name("FILE");
  }

  void add_common(CLI::App* app) {
    app->add_option("--config", config, "Flat key=value file; '#' starts a comment");
    app->add_option("--set", sets, "Override one hyperparameter as key=value (repeatable)");
    app->add_option("--seed", seed, "Random seed for every component (default 42)");
    app->add_option("--epochs", epochs, "Number of training epochs");
  }

  // Builds the hyperparameter options and resolves path flags.
  OptionsPtr resolve() {
    auto options = make_options();
    if (!config.empty()) {
      check(mk_options_load_file(options.get(), config.c_str()));
      for (auto& [name, value] : paths) {
        const std::string from_file = take_string(options.get(), name.c_str());
        if (value.empty()) value = from_file;
      }
    }
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) usage_failure("--set expects key=value, got '" + kv + "'");
      check(mk_options_set(options.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
    }
    if (mode) check(mk_options_set(options.get(), "mode", mode->c_str()));
    if (seed) check(mk_options_set(options.get(), "seed", std::to_string(*seed).c_str()));
    if (epochs) check(mk_options_set(options.get(), "epochs", std::to_string(*epochs).c_str()));
    return options;
  }

  const char* path(const std::string& name) const { return c_str_or_null(paths.at(name)); }

  void require(const std::string& name) const {
    if (paths.at(name).empty()) usage_failure("--" + name + " is required (as a flag or in the config file)");
  }
};

void print_metrics(const mk_metrics& m) {
  const std::pair<const char*, const mk_score*> rows[] = {{"UPOS", &m.upos},     {"XPOS", &m.xpos}, {"UFeats", &m.ufeats},
                                                          {"Lemmas", &m.lemmas}, {"UAS", &m.uas},   {"LAS", &m.las},
                                                          {"MLAS", &m.mlas},     {"BLEX", &m.blex}};
  std::printf("%-8s %9s %9s %9s\n", "Metric", "Correct", "Gold", "Score");
  for (const auto& [name, s] : rows)
    std::printf("%-8s %9llu %9llu %9s\n", name, static_cast<unsigned long long>(s->correct),
                static_cast<unsigned long long>(s->total), percent(s->correct, s->total).c_str());
  std::printf("\n");
  for (const auto& [name, s] : rows) {
    std::string key = name;
    for (auto& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const double ratio = s->total ? static_cast<double>(s->correct) / static_cast<double>(s->total) : 0.0;
    std::printf("%s=%s\n%s.correct=%llu\n%s.total=%llu\n", key.c_str(), fixed6(ratio).c_str(), key.c_str(),
                static_cast<unsigned long long>(s->correct), key.c_str(), static_cast<unsigned long long>(s->total));
  }
}

void print_prf(const char* level, const mk_prf& p) {
  std::printf("%-11s %9s %9s %9s %9s %9s %9s\n", "Level", "Correct", "Gold", "Predicted", "Precision", "Recall", "F1");
  std::printf("%-11s %9llu %9llu %9llu %9.2f %9.2f %9.2f\n\n", level, static_cast<unsigned long long>(p.correct),
              static_cast<unsigned long long>(p.gold), static_cast<unsigned long long>(p.predicted), p.precision,
              p.recall, p.f1);
  std::printf("level=%s\nprecision=%s\nrecall=%s\nf1=%s\ncorrect=%llu\ngold=%llu\npredicted=%llu\n", level,
              fixed6(p.precision).c_str(), fixed6(p.recall).c_str(), fixed6(p.f1).c_str(),
              static_cast<unsigned long long>(p.correct), static_cast<unsigned long long>(p.gold),
              static_cast<unsigned long long>(p.predicted));
}

int exit_code(mk_status status) { return static_cast<int>(status); }

}  // namespace

int main(int argc, char** argv) {
  if (const char* level = std::getenv("MORPHKIT_LOG")) {
    const std::string v = level;
    if (v != "error" && v != "info" && v != "debug") {
      std::cerr << "error: MORPHKIT_LOG must be one of error, info, debug\n";
      return exit_code(MK_USAGE_ERROR);
    }
  }

  CLI::App app{"MorphKit: Czech tagging, lemmatization, parsing and nested NER", "morphkit"};
  app.set_version_flag("--version", mk_version());
  app.require_subcommand(1);
  app.footer("Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric error, 4 internal error.\n"
             "Set MORPHKIT_LOG to error, info or debug to control diagnostics on standard error.");
  std::function<void()> action;

  // train
  TrainArgs tagger_train;
  auto* train = app.add_subcommand("train", "Train a tagger, a parser or both");
  train->add_option("--mode", tagger_train.mode, "tag, parse, parse-predicted or joint (default joint)")
      ->check(CLI::IsMember({"tag", "parse", "parse-predicted", "joint", "tag_only", "parse_only",
                             "parse_with_predicted_tags"}));
  tagger_train.add_path(train, "train", "Training CoNLL-U file");
  tagger_train.add_path(train, "dev", "Development CoNLL-U file; logs per-epoch dev metrics");
  tagger_train.add_path(train, "we", "Pretrained word embeddings (word2vec text format)");
  tagger_train.add_path(train, "cvec", "Contextual vectors A for the training file (CVEC)");
  tagger_train.add_path(train, "cvec-b", "Contextual vectors B for the training file (CVEC)");
  tagger_train.add_path(train, "dev-cvec", "Contextual vectors A for the dev file");
  tagger_train.add_path(train, "dev-cvec-b", "Contextual vectors B for the dev file");
  tagger_train.add_path(train, "dict", "Morphological dictionary TSV (form, lemma, tag) used on dev predictions");
  tagger_train.add_path(train, "out", "Output model checkpoint");
  tagger_train.add_common(train);
  train->callback([&] {
    action = [&] {
      auto options = tagger_train.resolve();
      tagger_train.require("train");
      tagger_train.require("out");
      mk_tagger_files files{tagger_train.path("train"), tagger_train.path("dev"),      tagger_train.path("we"),
                            tagger_train.path("cvec"),  tagger_train.path("cvec-b"),   tagger_train.path("dev-cvec"),
                            tagger_train.path("dev-cvec-b"), tagger_train.path("dict")};
      mk_tagger* model = nullptr;
      check(mk_tagger_train(&files, options.get(), &model));
      std::unique_ptr<mk_tagger, decltype(&mk_tagger_destroy)> guard(model, &mk_tagger_destroy);
      check(mk_tagger_save(model, tagger_train.path("out")));
    };
  });

  // predict
  std::string model_path, input_path, output_path, dict_path, cvec_a, cvec_b;
  auto* predict = app.add_subcommand("predict", "Tag and/or parse a CoNLL-U file with a trained model");
  predict->add_option("--model", model_path, "Model checkpoint")->required();
  predict->add_option("--input", input_path, "Input CoNLL-U file")->required();
  predict->add_option("--output", output_path, "Output CoNLL-U file")->required();
  predict->add_option("--dict", dict_path, "Morphological dictionary TSV for constrained decoding");
  predict->add_option("--cvec", cvec_a, "Contextual vectors A for the input file");
  predict->add_option("--cvec-b", cvec_b, "Contextual vectors B for the input file");
  predict->callback([&] {
    action = [&] {
      mk_tagger* model = nullptr;
      check(mk_tagger_load(model_path.c_str(), &model));
      std::unique_ptr<mk_tagger, decltype(&mk_tagger_destroy)> guard(model, &mk_tagger_destroy);
      mk_predict_files files{input_path.c_str(), output_path.c_str(), c_str_or_null(cvec_a), c_str_or_null(cvec_b),
                             c_str_or_null(dict_path)};
      check(mk_tagger_predict_file(model, &files));
    };
  });

  // eval
  std::string gold_path, system_path, eval_mode = "ud";
  auto* evaluate = app.add_subcommand("eval", "Score a system CoNLL-U file against gold (gold tokenization)");
  evaluate->add_option("--gold", gold_path, "Gold CoNLL-U file")->required();
  evaluate->add_option("--system", system_path, "System CoNLL-U file")->required();
  evaluate->add_option("--mode", eval_mode, "Lemma comparison: ud drops PDT lemma suffixes, pdt keeps them")
      ->check(CLI::IsMember({"ud", "pdt"}))
      ->capture_default_str();
  evaluate->callback([&] {
    action = [&] {
      mk_metrics m{};
      check(mk_evaluate_files(gold_path.c_str(), system_path.c_str(), eval_mode == "pdt" ? MK_LEMMAS_PDT : MK_LEMMAS_UD,
                              &m));
      print_metrics(m);
    };
  });

  // rules dump
  std::string rules_input, rules_output;
  auto* rules = app.add_subcommand("rules", "Inspect lemma generation rules");
  rules->require_subcommand(1);
  auto* dump = rules->add_subcommand("dump", "Print form, lemma and rule as TSV for every word of a CoNLL-U file");
  dump->add_option("--input", rules_input, "CoNLL-U file with gold lemmas")->required();
  dump->add_option("--output", rules_output, "Write the TSV here instead of standard output");
  dump->callback([&] {
    action = [&] {
      char* tsv = nullptr;
      check(mk_rules_dump_file(rules_input.c_str(), &tsv));
      std::unique_ptr<char, decltype(&mk_string_free)> guard(tsv, &mk_string_free);
      if (rules_output.empty()) {
        std::fputs(tsv, stdout);
        return;
      }
      std::ofstream out(rules_output, std::ios::binary);
      out << tsv;
      if (!out) throw Failure{MK_DATA_ERROR, "cannot write " + rules_output};
    };
  });

  // ner
  auto* ner = app.add_subcommand("ner", "Nested named entity recognition");
  ner->require_subcommand(1);
  TrainArgs ner_train_args;
  auto* ner_train = ner->add_subcommand("train", "Train a nested NER model");
  ner_train_args.add_path(ner_train, "train", "Training CoNLL-U file with lemma and UPOS columns");
  ner_train_args.add_path(ner_train, "entities", "Entity file parallel to the training file");
  ner_train_args.add_path(ner_train, "dev", "Development CoNLL-U file; logs per-epoch dev F1");
  ner_train_args.add_path(ner_train, "dev-entities", "Entity file parallel to the dev file");
  ner_train_args.add_path(ner_train, "we", "Pretrained word embeddings (word2vec text format)");
  ner_train_args.add_path(ner_train, "cvec", "Contextual vectors A for the training file (CVEC)");
  ner_train_args.add_path(ner_train, "cvec-b", "Contextual vectors B for the training file (CVEC)");
  ner_train_args.add_path(ner_train, "dev-cvec", "Contextual vectors A for the dev file");
  ner_train_args.add_path(ner_train, "dev-cvec-b", "Contextual vectors B for the dev file");
  ner_train_args.add_path(ner_train, "out", "Output model checkpoint");
  ner_train_args.add_common(ner_train);
  ner_train->callback([&] {
    action = [&] {
      auto options = ner_train_args.resolve();
      ner_train_args.require("train");
      ner_train_args.require("entities");
      ner_train_args.require("out");
      const auto& a = ner_train_args;
      mk_ner_files files{a.path("train"), a.path("entities"), a.path("dev"),        a.path("dev-entities"),
                         a.path("we"),    a.path("cvec"),     a.path("cvec-b"),     a.path("dev-cvec"),
                         a.path("dev-cvec-b")};
      mk_ner* model = nullptr;
      check(mk_ner_train(&files, options.get(), &model));
      std::unique_ptr<mk_ner, decltype(&mk_ner_destroy)> guard(model, &mk_ner_destroy);
      check(mk_ner_save(model, a.path("out")));
    };
  });

  std::string ner_model, ner_input, ner_output, ner_cvec_a, ner_cvec_b;
  auto* ner_predict = ner->add_subcommand("predict", "Predict nested entities for a CoNLL-U file");
  ner_predict->add_option("--model", ner_model, "NER model checkpoint")->required();
  ner_predict->add_option("--input", ner_input, "Input CoNLL-U file with lemma and UPOS columns")->required();
  ner_predict->add_option("--output", ner_output, "Output entity file")->required();
  ner_predict->add_option("--cvec", ner_cvec_a, "Contextual vectors A for the input file");
  ner_predict->add_option("--cvec-b", ner_cvec_b, "Contextual vectors B for the input file");
  ner_predict->callback([&] {
    action = [&] {
      mk_ner* model = nullptr;
      check(mk_ner_load(ner_model.c_str(), &model));
      std::unique_ptr<mk_ner, decltype(&mk_ner_destroy)> guard(model, &mk_ner_destroy);
      mk_predict_files files{ner_input.c_str(), ner_output.c_str(), c_str_or_null(ner_cvec_a),
                             c_str_or_null(ner_cvec_b), nullptr};
      check(mk_ner_predict_file(model, &files));
    };
  });

  std::string ner_gold, ner_system, ner_level = "types", ner_classes, ner_supertypes;
  auto* ner_eval = ner->add_subcommand("eval", "Score predicted entities with exact span matching");
  ner_eval->add_option("--gold", ner_gold, "Gold entity file")->required();
  ner_eval->add_option("--system", ner_system, "System entity file")->required();
  ner_eval->add_option("--level", ner_level, "types or supertypes")
      ->check(CLI::IsMember({"types", "supertypes"}))
      ->capture_default_str();
  ner_eval->add_option("--classes", ner_classes, "Keep only these entity types (whitespace-separated list)");
  ner_eval->add_option("--supertype-map", ner_supertypes,
                       "Lines 'type supertype' overriding the first-character supertype");
  ner_eval->callback([&] {
    action = [&] {
      mk_prf types{}, supertypes{};
      check(mk_ner_evaluate_files(ner_gold.c_str(), ner_system.c_str(), MK_NER_TYPES, c_str_or_null(ner_classes),
                                  c_str_or_null(ner_supertypes), &types));
      check(mk_ner_evaluate_files(ner_gold.c_str(), ner_system.c_str(), MK_NER_SUPERTYPES,
                                  c_str_or_null(ner_classes), c_str_or_null(ner_supertypes), &supertypes));
      // Coarsening can only merge classes, so this never fires on a correct scorer.
      if (supertypes.f1 < types.f1)
        throw Failure{MK_INTERNAL_ERROR, "supertype F1 is below type F1; the scorer is inconsistent"};
      print_prf(ner_level.c_str(), ner_level == "supertypes" ? supertypes : types);
    };
  });

  if (argc <= 1) {
    std::cerr << app.help();
    return exit_code(MK_USAGE_ERROR);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    return app.exit(CLI::CallForHelp());
  } catch (const CLI::CallForAllHelp&) {
    return app.exit(CLI::CallForAllHelp());
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const CLI::App* failing = &app;
    for (const CLI::App* sub = &app; sub;) {
      failing = sub;
      const auto subs = sub->get_subcommands();
      sub = subs.empty() ? nullptr : subs.front();
    }
    std::cerr << failing->help();
    return exit_code(MK_USAGE_ERROR);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return exit_code(f.status);
  }

  try {
    if (action) action();
    std::fflush(stdout);
    return 0;
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return exit_code(f.status);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(MK_INTERNAL_ERROR);
  }
}
