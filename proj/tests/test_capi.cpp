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
// Exercises the shared library through its C header only.

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "morphkit/morphkit.h"

namespace {

std::string data(const std::string& name) { return std::string(MORPHKIT_TEST_DATA) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "morphkit_capi_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

mk_options* small_options() {
  mk_options* o = nullptr;
  REQUIRE(mk_options_create(&o) == MK_OK);
  const char* settings[][2] = {{"char_dim", "16"}, {"char_gru_dim", "16"}, {"word_dim", "16"}, {"lstm_dim", "16"},
                               {"arc_dim", "16"},  {"label_dim", "8"},     {"tag_input_dim", "8"}, {"epochs", "1"},
                               {"batch_size", "16"}};
  for (const auto& kv : settings) REQUIRE(mk_options_set(o, kv[0], kv[1]) == MK_OK);
  return o;
}

}  // namespace

TEST_CASE("version and error reporting") {
  CHECK(std::strlen(mk_version()) > 0);
  mk_metrics m;
  CHECK(mk_evaluate_files(nullptr, "x", MK_LEMMAS_UD, &m) == MK_USAGE_ERROR);
  CHECK(std::string(mk_last_error()).find("null") != std::string::npos);
  CHECK(mk_evaluate_files("/no/such/file", "/no/such/file", MK_LEMMAS_UD, &m) == MK_DATA_ERROR);
  CHECK(std::string(mk_last_error()).find("/no/such/file") != std::string::npos);
}

TEST_CASE("options") {
  mk_options* o = nullptr;
  REQUIRE(mk_options_create(&o) == MK_OK);
  CHECK(mk_options_set(o, "", "1") == MK_USAGE_ERROR);
  CHECK(mk_options_set(o, "a", "1") == MK_OK);
  CHECK(mk_options_set(o, "a", "2") == MK_OK);
  char* value = nullptr;
  CHECK(mk_options_take(o, "a", &value) == MK_OK);
  REQUIRE(value != nullptr);
  CHECK(std::string(value) == "2");
  mk_string_free(value);
  CHECK(mk_options_take(o, "a", &value) == MK_OK);
  CHECK(value == nullptr);

  const auto cfg = scratch("options.cfg");
  std::ofstream(cfg) << "# comment\n  epochs = 3  # trailing\n\nmode=tag\n";
  CHECK(mk_options_load_file(o, cfg.c_str()) == MK_OK);
  CHECK(mk_options_take(o, "epochs", &value) == MK_OK);
  CHECK(std::string(value) == "3");
  mk_string_free(value);
  std::ofstream(cfg) << "no equals sign\n";
  CHECK(mk_options_load_file(o, cfg.c_str()) == MK_USAGE_ERROR);
  CHECK(std::string(mk_last_error()).find(":1:") != std::string::npos);
  mk_options_destroy(o);
}

TEST_CASE("evaluation through the C interface matches the fixture") {
  mk_metrics m;
  REQUIRE(mk_evaluate_files(data("golden/metrics_gold.conllu").c_str(), data("golden/metrics_system.conllu").c_str(),
                            MK_LEMMAS_PDT, &m) == MK_OK);
  CHECK(m.lemmas.correct == 11);
  CHECK(m.lemmas.total == 13);
  CHECK(m.blex.correct == 4);
  CHECK(m.blex.total == 8);
  mk_prf p;
  REQUIRE(mk_ner_evaluate_files(data("golden/cnec_gold.entities").c_str(), data("golden/cnec_system.entities").c_str(),
                                MK_NER_SUPERTYPES, nullptr, nullptr, &p) == MK_OK);
  CHECK(p.correct == 5);
  CHECK(p.gold == 6);
}

TEST_CASE("rules dump") {
  char* tsv = nullptr;
  REQUIRE(mk_rules_dump_file(data("toy_train.conllu").c_str(), &tsv) == MK_OK);
  std::istringstream lines(tsv);
  std::string line;
  size_t count = 0;
  while (std::getline(lines, line)) {
    CHECK(std::count(line.begin(), line.end(), '\t') == 2);
    ++count;
  }
  CHECK(count == 344);
  mk_string_free(tsv);
}

TEST_CASE("tagger train, save, load and predict") {
  mk_options* o = small_options();
  const std::string train = data("toy_train.conllu");
  mk_tagger_files files{};
  files.train_path = nullptr;
  mk_tagger* model = nullptr;
  CHECK(mk_tagger_train(&files, o, &model) == MK_USAGE_ERROR);
  files.train_path = train.c_str();
  files.dictionary_path = "/missing/dict.tsv";
  CHECK(mk_tagger_train(&files, o, &model) == MK_DATA_ERROR);
  CHECK(std::string(mk_last_error()).find("/missing/dict.tsv") != std::string::npos);
  files.dictionary_path = nullptr;
  REQUIRE(mk_options_set(o, "use_pretrained_we", "true") == MK_OK);
  CHECK(mk_tagger_train(&files, o, &model) == MK_USAGE_ERROR);
  REQUIRE(mk_options_set(o, "use_pretrained_we", "false") == MK_OK);
  REQUIRE(mk_options_set(o, "mode", "joint") == MK_OK);
  REQUIRE(mk_tagger_train(&files, o, &model) == MK_OK);
  CHECK(std::string(mk_tagger_mode(model)) == "joint");
  size_t count = 0;
  CHECK(mk_tagger_parameter_count(model, &count) == MK_OK);
  CHECK(count > 0);

  const auto path = scratch("tagger.mskt");
  REQUIRE(mk_tagger_save(model, path.c_str()) == MK_OK);
  CHECK(mk_tagger_save(model, "/no/such/dir/model.mskt") == MK_DATA_ERROR);
  mk_tagger* loaded = nullptr;
  REQUIRE(mk_tagger_load(path.c_str(), &loaded) == MK_OK);

  const std::string text = slurp(train);
  char* a = nullptr;
  char* b = nullptr;
  REQUIRE(mk_tagger_predict_text(model, text.c_str(), nullptr, &a) == MK_OK);
  REQUIRE(mk_tagger_predict_text(loaded, text.c_str(), nullptr, &b) == MK_OK);
  CHECK(std::string(a) == std::string(b));
  mk_string_free(a);
  mk_string_free(b);
  CHECK(mk_tagger_predict_text(model, "1\tbroken\n\n", nullptr, &a) == MK_DATA_ERROR);

  const auto out = scratch("predicted.conllu");
  mk_predict_files pf{train.c_str(), out.c_str(), nullptr, nullptr, nullptr};
  CHECK(mk_tagger_predict_file(loaded, &pf) == MK_OK);
  CHECK(std::filesystem::file_size(out) > 0);

  mk_tagger* bogus = nullptr;
  CHECK(mk_tagger_load(train.c_str(), &bogus) == MK_DATA_ERROR);
  mk_tagger_destroy(model);
  mk_tagger_destroy(loaded);
  mk_options_destroy(o);
}

TEST_CASE("NER train, save, load and predict") {
  mk_options* o = nullptr;
  REQUIRE(mk_options_create(&o) == MK_OK);
  for (const char* key : {"form_dim", "lemma_dim", "char_dim", "char_gru_dim", "encoder_dim", "decoder_dim", "label_dim"})
    REQUIRE(mk_options_set(o, key, "8") == MK_OK);
  REQUIRE(mk_options_set(o, "epochs", "1") == MK_OK);
  const std::string train = data("ner_toy.conllu"), entities = data("ner_toy.entities");
  mk_ner_files files{};
  files.train_path = train.c_str();
  mk_ner* model = nullptr;
  CHECK(mk_ner_train(&files, o, &model) == MK_USAGE_ERROR);
  files.entities_path = entities.c_str();
  REQUIRE(mk_ner_train(&files, o, &model) == MK_OK);
  const auto path = scratch("ner.mskt");
  REQUIRE(mk_ner_save(model, path.c_str()) == MK_OK);
  mk_ner* loaded = nullptr;
  REQUIRE(mk_ner_load(path.c_str(), &loaded) == MK_OK);
  const auto out = scratch("ner.entities");
  mk_predict_files pf{train.c_str(), out.c_str(), nullptr, nullptr, nullptr};
  CHECK(mk_ner_predict_file(loaded, &pf) == MK_OK);
  mk_prf p;
  CHECK(mk_ner_evaluate_files(entities.c_str(), out.c_str(), MK_NER_TYPES, nullptr, nullptr, &p) == MK_OK);
  CHECK(p.gold > 0);
  // a tagger checkpoint is not a NER model
  mk_tagger* tagger = nullptr;
  CHECK(mk_tagger_load(path.c_str(), &tagger) == MK_DATA_ERROR);
  mk_ner_destroy(model);
  mk_ner_destroy(loaded);
  mk_options_destroy(o);
}
