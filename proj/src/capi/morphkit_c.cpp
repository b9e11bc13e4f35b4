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
#include "morphkit/morphkit.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "morphkit/common/error.hpp"
#include "morphkit/conllu/conllu.hpp"
#include "morphkit/embed/embeddings.hpp"
#include "morphkit/eval/metrics.hpp"
#include "morphkit/lemma/lemma_rules.hpp"
#include "morphkit/ner/model.hpp"
#include "morphkit/ner/scoring.hpp"
#include "morphkit/tagger/model.hpp"

struct mk_options {
  std::vector<std::pair<std::string, std::string>> entries;
};

struct mk_tagger {
  morphkit::tagger::TaggerParser model;
  std::string mode;
};

struct mk_ner {
  morphkit::ner::NerModel model;
};

namespace {

using namespace morphkit;

thread_local std::string last_error;

mk_status fail(mk_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs body and maps every exception onto a status code.
template <typename F>
mk_status guarded(F&& body) {
  try {
    body();
    return MK_OK;
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::usage: return fail(MK_USAGE_ERROR, e.what());
      case ErrorKind::data: return fail(MK_DATA_ERROR, e.what());
      case ErrorKind::numeric: return fail(MK_NUMERIC_ERROR, e.what());
      case ErrorKind::internal: break;
    }
    return fail(MK_INTERNAL_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return fail(MK_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(MK_INTERNAL_ERROR, e.what());
  }
}

void require(const void* p, const char* what) {
  if (!p) throw UsageError(std::string(what) + " must not be null");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::optional<std::filesystem::path> optional_path(const char* p) {
  if (!p || !*p) return std::nullopt;
  return std::filesystem::path(p);
}

// Fails before any work starts when an input is missing.
void check_inputs(std::initializer_list<const char*> paths) {
  for (const char* p : paths)
    if (p && *p && !std::filesystem::is_regular_file(p)) throw DataError(std::string("input file not found: ") + p);
}

void check_output(const char* p) {
  if (!p || !*p) throw UsageError("an output path is required");
  const auto parent = std::filesystem::path(p).parent_path();
  if (!parent.empty() && !std::filesystem::is_directory(parent))
    throw DataError("output directory does not exist: " + parent.string());
}

std::optional<embed::ContextualVectors> load_contextual(const char* path, const conllu::Document& doc) {
  if (auto p = optional_path(path)) return embed::read_contextual_vectors(*p, doc);
  return std::nullopt;
}

embed::ContextualInputs inputs_of(const std::optional<embed::ContextualVectors>& a,
                                  const std::optional<embed::ContextualVectors>& b) {
  return {a ? &*a : nullptr, b ? &*b : nullptr};
}

void require_feature(bool enabled, const char* path, const char* key) {
  if (enabled && !optional_path(path))
    throw UsageError(std::string(key) + " is enabled but no matching input file was given");
}

void fill(mk_score& out, const eval::Score& s) {
  out.correct = s.correct;
  out.total = s.total;
  out.system_total = s.system_total;
}

}  // namespace

extern "C" {

const char* mk_version(void) { return MORPHKIT_VERSION; }
const char* mk_last_error(void) { return last_error.c_str(); }
void mk_string_free(char* text) { std::free(text); }

mk_status mk_options_create(mk_options** out) {
  return guarded([&] {
    require(out, "output pointer");
    *out = new mk_options();
  });
}

void mk_options_destroy(mk_options* options) { delete options; }

mk_status mk_options_set(mk_options* options, const char* key, const char* value) {
  return guarded([&] {
    require(options, "options");
    require(key, "key");
    require(value, "value");
    if (!*key) throw UsageError("option keys must not be empty");
    options->entries.emplace_back(key, value);
  });
}

mk_status mk_options_take(mk_options* options, const char* key, char** out) {
  return guarded([&] {
    require(options, "options");
    require(key, "key");
    require(out, "output pointer");
    *out = nullptr;
    std::optional<std::string> value;
    auto& e = options->entries;
    for (const auto& [k, v] : e)
      if (k == key) value = v;
    e.erase(std::remove_if(e.begin(), e.end(), [&](const auto& kv) { return kv.first == key; }), e.end());
    if (value) *out = copy_string(*value);
  });
}

mk_status mk_options_load_file(mk_options* options, const char* path) {
  return guarded([&] {
    require(options, "options");
    require(path, "path");
    std::ifstream in(path);
    if (!in) throw DataError(std::string("cannot open config file ") + path);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
    };
    std::string line;
    for (size_t line_no = 1; std::getline(in, line); ++line_no) {
      line = trim(line.substr(0, line.find('#')));
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos || trim(line.substr(0, eq)).empty())
        throw UsageError(std::string(path) + ":" + std::to_string(line_no) + ": expected key=value");
      options->entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
  });
}

mk_status mk_tagger_train(const mk_tagger_files* files, const mk_options* options, mk_tagger** out) {
  return guarded([&] {
    require(files, "files");
    require(out, "output pointer");
    if (!files->train_path) throw UsageError("a training file is required");
    tagger::TaggerParserConfig cfg;
    if (options)
      for (const auto& [k, v] : options->entries) cfg.set(k, v);
    require_feature(cfg.use_pretrained_we, files->word_embeddings_path, "use_pretrained_we");
    require_feature(cfg.use_contextual_a, files->contextual_a_path, "use_contextual_a");
    require_feature(cfg.use_contextual_b, files->contextual_b_path, "use_contextual_b");
    cfg.validate();
    check_inputs({files->train_path, files->dev_path, files->word_embeddings_path, files->contextual_a_path,
                  files->contextual_b_path, files->dev_contextual_a_path, files->dev_contextual_b_path,
                  files->dictionary_path});
    if (files->dev_path && (!!files->contextual_a_path != !!files->dev_contextual_a_path ||
                            !!files->contextual_b_path != !!files->dev_contextual_b_path))
      throw UsageError("contextual vectors must be given for both the training and the dev data");

    const auto train = conllu::read_conllu_file(files->train_path);
    std::optional<conllu::Document> dev;
    if (auto p = optional_path(files->dev_path)) dev = conllu::read_conllu_file(*p);
    std::optional<embed::WordEmbeddingTable> we;
    if (auto p = optional_path(files->word_embeddings_path)) we = embed::load_word_embeddings(*p);
    const auto ca = load_contextual(files->contextual_a_path, train);
    const auto cb = load_contextual(files->contextual_b_path, train);
    std::optional<embed::ContextualVectors> dca, dcb;
    if (dev) {
      dca = load_contextual(files->dev_contextual_a_path, *dev);
      dcb = load_contextual(files->dev_contextual_b_path, *dev);
    }
    std::optional<tagger::MorphDictionary> dict;
    if (auto p = optional_path(files->dictionary_path)) dict = tagger::load_dictionary(*p);

    tagger::TrainOptions opt;
    opt.dev = dev ? &*dev : nullptr;
    opt.train_inputs = inputs_of(ca, cb);
    opt.dev_inputs = inputs_of(dca, dcb);
    opt.pretrained = we ? &*we : nullptr;
    opt.dictionary = dict ? &*dict : nullptr;
    auto model = tagger::TaggerParser::train(train, cfg, opt);
    const auto mode = tagger::mode_name(model.config().mode);
    *out = new mk_tagger{std::move(model), mode};
  });
}

mk_status mk_tagger_load(const char* path, mk_tagger** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "output pointer");
    auto model = tagger::TaggerParser::from_checkpoint(nn::load_checkpoint(path));
    const auto mode = tagger::mode_name(model.config().mode);
    *out = new mk_tagger{std::move(model), mode};
  });
}

mk_status mk_tagger_save(const mk_tagger* model, const char* path) {
  return guarded([&] {
    require(model, "model");
    check_output(path);
    nn::save_checkpoint(model->model.to_checkpoint(), path);
  });
}

void mk_tagger_destroy(mk_tagger* model) { delete model; }

mk_status mk_tagger_parameter_count(const mk_tagger* model, size_t* out) {
  return guarded([&] {
    require(model, "model");
    require(out, "output pointer");
    *out = model->model.parameter_count();
  });
}

const char* mk_tagger_mode(const mk_tagger* model) { return model ? model->mode.c_str() : ""; }

mk_status mk_tagger_predict_file(const mk_tagger* model, const mk_predict_files* files) {
  return guarded([&] {
    require(model, "model");
    require(files, "files");
    if (!files->input_path) throw UsageError("an input file is required");
    check_output(files->output_path);
    check_inputs({files->input_path, files->contextual_a_path, files->contextual_b_path, files->dictionary_path});
    const auto doc = conllu::read_conllu_file(files->input_path);
    const auto ca = load_contextual(files->contextual_a_path, doc);
    const auto cb = load_contextual(files->contextual_b_path, doc);
    std::optional<tagger::MorphDictionary> dict;
    if (auto p = optional_path(files->dictionary_path)) dict = tagger::load_dictionary(*p);
    const auto predicted = model->model.predict(doc, inputs_of(ca, cb), dict ? &*dict : nullptr);
    conllu::write_conllu_file(predicted, files->output_path);
  });
}

mk_status mk_tagger_predict_text(const mk_tagger* model, const char* text, const char* dictionary_path, char** out) {
  return guarded([&] {
    require(model, "model");
    require(text, "text");
    require(out, "output pointer");
    check_inputs({dictionary_path});
    std::optional<tagger::MorphDictionary> dict;
    if (auto p = optional_path(dictionary_path)) dict = tagger::load_dictionary(*p);
    const auto predicted = model->model.predict(conllu::parse_conllu(text), {}, dict ? &*dict : nullptr);
    *out = copy_string(conllu::write_conllu(predicted));
  });
}

mk_status mk_evaluate_files(const char* gold_path, const char* system_path, mk_lemma_mode mode, mk_metrics* out) {
  return guarded([&] {
    require(gold_path, "gold path");
    require(system_path, "system path");
    require(out, "output pointer");
    if (mode != MK_LEMMAS_UD && mode != MK_LEMMAS_PDT) throw UsageError("unknown lemma mode");
    check_inputs({gold_path, system_path});
    eval::EvalOptions opt;
    opt.lemma_mode = mode == MK_LEMMAS_PDT ? eval::LemmaMode::pdt : eval::LemmaMode::ud;
    const auto r = eval::evaluate(conllu::read_conllu_file(gold_path), conllu::read_conllu_file(system_path), opt);
    fill(out->upos, r.upos);
    fill(out->xpos, r.xpos);
    fill(out->ufeats, r.ufeats);
    fill(out->lemmas, r.lemmas);
    fill(out->uas, r.uas);
    fill(out->las, r.las);
    fill(out->mlas, r.mlas);
    fill(out->blex, r.blex);
  });
}

mk_status mk_rules_dump_file(const char* conllu_path, char** out) {
  return guarded([&] {
    require(conllu_path, "path");
    require(out, "output pointer");
    check_inputs({conllu_path});
    std::string tsv;
    for (const auto& s : conllu::read_conllu_file(conllu_path).sentences)
      for (const auto& t : s.tokens) tsv += t.form + "\t" + t.lemma + "\t" + lemma::build_rule(t.form, t.lemma).serialize() + "\n";
    *out = copy_string(tsv);
  });
}

mk_status mk_ner_train(const mk_ner_files* files, const mk_options* options, mk_ner** out) {
  return guarded([&] {
    require(files, "files");
    require(out, "output pointer");
    if (!files->train_path || !files->entities_path) throw UsageError("training and entity files are required");
    if (!!files->dev_path != !!files->dev_entities_path)
      throw UsageError("a dev corpus needs its entity file and vice versa");
    ner::NerConfig cfg;
    if (options)
      for (const auto& [k, v] : options->entries) cfg.set(k, v);
    require_feature(cfg.use_pretrained_we, files->word_embeddings_path, "use_pretrained_we");
    require_feature(cfg.use_contextual_a, files->contextual_a_path, "use_contextual_a");
    require_feature(cfg.use_contextual_b, files->contextual_b_path, "use_contextual_b");
    cfg.validate();
    check_inputs({files->train_path, files->entities_path, files->dev_path, files->dev_entities_path,
                  files->word_embeddings_path, files->contextual_a_path, files->contextual_b_path,
                  files->dev_contextual_a_path, files->dev_contextual_b_path});
    if (files->dev_path && (!!files->contextual_a_path != !!files->dev_contextual_a_path ||
                            !!files->contextual_b_path != !!files->dev_contextual_b_path))
      throw UsageError("contextual vectors must be given for both the training and the dev data");

    const auto train = conllu::read_conllu_file(files->train_path);
    const auto entities = ner::read_entity_file(files->entities_path);
    std::optional<conllu::Document> dev;
    std::optional<std::vector<ner::SentenceEntities>> dev_entities;
    if (files->dev_path) {
      dev = conllu::read_conllu_file(files->dev_path);
      dev_entities = ner::read_entity_file(files->dev_entities_path);
    }
    std::optional<embed::WordEmbeddingTable> we;
    if (auto p = optional_path(files->word_embeddings_path)) we = embed::load_word_embeddings(*p);
    const auto ca = load_contextual(files->contextual_a_path, train);
    const auto cb = load_contextual(files->contextual_b_path, train);
    std::optional<embed::ContextualVectors> dca, dcb;
    if (dev) {
      dca = load_contextual(files->dev_contextual_a_path, *dev);
      dcb = load_contextual(files->dev_contextual_b_path, *dev);
    }
    ner::NerTrainOptions opt;
    opt.dev = dev ? &*dev : nullptr;
    opt.dev_entities = dev_entities ? &*dev_entities : nullptr;
    opt.train_inputs = inputs_of(ca, cb);
    opt.dev_inputs = inputs_of(dca, dcb);
    opt.pretrained = we ? &*we : nullptr;
    *out = new mk_ner{ner::NerModel::train(train, entities, cfg, opt)};
  });
}

mk_status mk_ner_load(const char* path, mk_ner** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "output pointer");
    *out = new mk_ner{ner::NerModel::from_checkpoint(nn::load_checkpoint(path))};
  });
}

mk_status mk_ner_save(const mk_ner* model, const char* path) {
  return guarded([&] {
    require(model, "model");
    check_output(path);
    nn::save_checkpoint(model->model.to_checkpoint(), path);
  });
}

void mk_ner_destroy(mk_ner* model) { delete model; }

mk_status mk_ner_predict_file(const mk_ner* model, const mk_predict_files* files) {
  return guarded([&] {
    require(model, "model");
    require(files, "files");
    if (!files->input_path) throw UsageError("an input file is required");
    check_output(files->output_path);
    check_inputs({files->input_path, files->contextual_a_path, files->contextual_b_path});
    const auto doc = conllu::read_conllu_file(files->input_path);
    const auto ca = load_contextual(files->contextual_a_path, doc);
    const auto cb = load_contextual(files->contextual_b_path, doc);
    ner::write_entity_file(files->output_path, model->model.predict(doc, inputs_of(ca, cb)));
  });
}

mk_status mk_ner_evaluate_files(const char* gold_path, const char* system_path, mk_ner_level level,
                                const char* classes_path, const char* supertype_map_path, mk_prf* out) {
  return guarded([&] {
    require(gold_path, "gold path");
    require(system_path, "system path");
    require(out, "output pointer");
    if (level != MK_NER_TYPES && level != MK_NER_SUPERTYPES) throw UsageError("unknown NER level");
    check_inputs({gold_path, system_path, classes_path, supertype_map_path});
    std::optional<std::set<std::string>> classes;
    if (auto p = optional_path(classes_path)) classes = ner::load_class_filter(*p);
    ner::SupertypeMap supertypes;
    if (auto p = optional_path(supertype_map_path)) supertypes = ner::load_supertype_map(*p);
    const auto s = ner::cnec_f1(ner::read_entity_file(gold_path), ner::read_entity_file(system_path),
                                level == MK_NER_SUPERTYPES ? ner::CnecLevel::supertypes : ner::CnecLevel::types,
                                classes ? &*classes : nullptr, supertypes);
    out->correct = s.correct;
    out->gold = s.gold;
    out->predicted = s.predicted;
    out->precision = s.precision();
    out->recall = s.recall();
    out->f1 = s.f1();
  });
}

}  // extern "C"
