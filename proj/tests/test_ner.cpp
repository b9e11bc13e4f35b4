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
#include <set>

#include "doctest.h"
#include "morphkit/ner/model.hpp"
#include "morphkit/ner/scoring.hpp"
#include "oracles.hpp"

using namespace morphkit;
using namespace morphkit::ner;

namespace {

const std::vector<std::string> kTypes{"pf", "ps", "gu", "gc", "if", "P"};

NerConfig small_config() {
  NerConfig c;
  c.form_dim = 32;
  c.lemma_dim = 32;
  c.char_dim = 16;
  c.char_gru_dim = 32;
  c.encoder_dim = 64;
  c.decoder_dim = 64;
  c.label_dim = 16;
  c.dropout = 0.1;
  c.word_dropout = 0.0;
  c.learning_rate = 3e-3;
  return c;
}

}  // namespace

TEST_CASE("encoding examples") {
  CHECK(encode_entities(3, {}) == LinearizedLabels{{"O"}, {"O"}, {"O"}});
  const SentenceEntities nested{{1, 2, "A"}, {2, 2, "B"}};
  const LinearizedLabels labels{{"B-A"}, {"I-A", "B-B"}};
  CHECK(encode_entities(2, nested) == labels);
  CHECK(decode_entities(labels) == nested);
  // longer span first on equal starts, then by type
  CHECK(encode_entities(2, {{1, 1, "b"}, {1, 1, "a"}, {1, 2, "c"}}) ==
        LinearizedLabels{{"B-c", "B-a", "B-b"}, {"I-c"}});
}

TEST_CASE("encoding rejects crossing and out-of-range spans") {
  CHECK_THROWS_AS(encode_entities(3, {{1, 2, "A"}, {2, 3, "B"}}), DataError);
  CHECK_THROWS_AS(encode_entities(2, {{1, 3, "A"}}), DataError);
  CHECK_THROWS_AS(encode_entities(2, {{2, 1, "A"}}), DataError);
  CHECK_THROWS_AS(encode_entities(2, {{0, 1, "A"}}), DataError);
}

TEST_CASE("decoding repairs malformed sequences") {
  CHECK(decode_entities({{"O"}, {"O"}}).empty());
  CHECK(decode_entities({{"I-X"}}) == SentenceEntities{{1, 1, "X"}});
  // a type change under the same depth opens a new span
  CHECK(decode_entities({{"B-A"}, {"I-B"}}) == SentenceEntities{{1, 1, "A"}, {2, 2, "B"}});
  // a broken outer continuation closes the inner span too
  CHECK(decode_entities({{"B-A", "B-B"}, {"B-C", "I-B"}}) ==
        SentenceEntities{{1, 1, "A"}, {1, 1, "B"}, {2, 2, "B"}, {2, 2, "C"}});
}

TEST_CASE("encode/decode roundtrip on random nestings") {
  Rng rng(8, "ner-roundtrip");
  for (int trial = 0; trial < 1000; ++trial) {
    const size_t n = 1 + rng.below(10);
    const auto spans = testing::random_nesting(rng, n, 4, kTypes);
    REQUIRE(testing::nested_or_disjoint(spans));
    CHECK(decode_entities(encode_entities(n, spans)) == spans);
  }
}

TEST_CASE("decoding is total and always nested") {
  Rng rng(9, "ner-totality");
  for (int trial = 0; trial < 1000; ++trial) {
    const auto labels = testing::random_labels(rng, 1 + rng.below(8), kTypes);
    SentenceEntities spans;
    CHECK_NOTHROW(spans = decode_entities(labels));
    CHECK(testing::nested_or_disjoint(spans));
    CHECK(satisfies_nesting(spans));
    for (const auto& s : spans) CHECK(s.end <= labels.size());
  }
}

TEST_CASE("entity file roundtrip and errors") {
  const std::vector<SentenceEntities> sentences{{{1, 2, "P"}, {1, 1, "pf"}}, {}, {{3, 3, "gu"}}};
  const auto text = serialize_entity_file(sentences);
  CHECK(parse_entity_file(text) == sentences);
  CHECK(parse_entity_file("1 1 pf") == std::vector<SentenceEntities>{{{1, 1, "pf"}}});
  try {
    parse_entity_file("1 1 pf\n\n2 x gu\n");
    FAIL("expected a data error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_entity_file("1 3 A\n2 4 B\n"), DataError);
}

TEST_CASE("CNEC fixture matches hand-computed golden values") {
  const auto gold = read_entity_file(testing::data_path("golden/cnec_gold.entities"));
  const auto sys = read_entity_file(testing::data_path("golden/cnec_system.entities"));
  const auto classes = load_class_filter(testing::data_path("golden/cnec_classes.txt"));
  auto fractions = [](const PrfScore& s) {
    return std::vector<testing::Fraction>{{s.correct, s.predicted}, {s.correct, s.gold}, {2 * s.correct, s.gold + s.predicted}};
  };
  using F = testing::Fraction;
  CHECK(fractions(cnec_f1(gold, sys, CnecLevel::types)) == std::vector<F>{{3, 6}, {3, 6}, {1, 2}});
  CHECK(fractions(cnec_f1(gold, sys, CnecLevel::supertypes)) == std::vector<F>{{5, 6}, {5, 6}, {5, 6}});
  CHECK(fractions(cnec_f1(gold, sys, CnecLevel::types, &classes)) == std::vector<F>{{2, 4}, {2, 4}, {1, 2}});
}

TEST_CASE("CNEC F1 examples") {
  const std::vector<SentenceEntities> gold{{{1, 1, "pf"}, {3, 3, "gu"}}};
  CHECK(cnec_f1(gold, gold, CnecLevel::types).f1() == 100.0);
  const std::vector<SentenceEntities> half{{{1, 1, "pf"}}};
  const auto s = cnec_f1(gold, half, CnecLevel::types);
  CHECK(s.precision() == 100.0);
  CHECK(s.recall() == 50.0);
  CHECK(s.f1() == doctest::Approx(200.0 / 3.0));
  const std::vector<SentenceEntities> wrong_type{{{1, 1, "ps"}, {3, 3, "gu"}}};
  CHECK(cnec_f1(gold, wrong_type, CnecLevel::types).correct == 1);
  CHECK(cnec_f1(gold, wrong_type, CnecLevel::supertypes).correct == 2);
  CHECK(cnec_f1({{}}, {{}}, CnecLevel::types).f1() == 0.0);
  CHECK_THROWS_AS(cnec_f1(gold, {}, CnecLevel::types), DataError);
  const SupertypeMap overrides(std::map<std::string, std::string>{{"pf", "x"}});
  CHECK(overrides("pf") == "x");
  CHECK(overrides("ps") == "p");
}

TEST_CASE("F1 symmetry and supertype dominance on random predictions") {
  Rng rng(10, "cnec-random");
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<SentenceEntities> gold, sys;
    for (int s = 0; s < 5; ++s) {
      const size_t n = 1 + rng.below(8);
      gold.push_back(testing::random_nesting(rng, n, 3, kTypes));
      sys.push_back(testing::random_nesting(rng, n, 3, kTypes));
    }
    const auto forward = cnec_f1(gold, sys, CnecLevel::types);
    const auto backward = cnec_f1(sys, gold, CnecLevel::types);
    CHECK(forward.precision() == backward.recall());
    CHECK(forward.f1() == backward.f1());
    CHECK(cnec_f1(gold, sys, CnecLevel::supertypes).f1() >= forward.f1());
  }
}

TEST_CASE("NER configuration") {
  NerConfig c;
  CHECK(c.form_dim == 256);
  CHECK(c.char_gru_dim == 128);
  CHECK(c.batch_size == 8);
  CHECK(c.max_labels_per_token == 8);
  CHECK(c.lemma_dim == 256);
  CHECK(c.char_dim == 128);
  CHECK(c.pretrained_we_dim == 300);
  CHECK(c.dropout == 0.5);
  CHECK(c.word_dropout == 0.2);
  CHECK(c.beta1 == 0.9);
  CHECK(c.beta2 == 0.98);
  CHECK(c.lazy_adam);
  c.set("dropout", "0.3");
  CHECK(c.dropout == 0.3);
  CHECK_THROWS_AS(c.set("dropout", "lots"), UsageError);
  CHECK_THROWS_AS(c.set("beam", "4"), UsageError);
  c.dropout = 1.0;
  CHECK_THROWS_AS(c.validate(), UsageError);
  CHECK(NerConfig::from_json(NerConfig().to_json()).to_json() == NerConfig().to_json());
}

TEST_CASE("NER overfits the toy corpus and predicts deterministically") {
  const auto doc = conllu::read_conllu_file(testing::data_path("ner_toy.conllu"));
  const auto entities = read_entity_file(testing::data_path("ner_toy.entities"));
  auto cfg = small_config();
  cfg.epochs = 60;
  NerTrainOptions opt;
  opt.dev = &doc;
  opt.dev_entities = &entities;
  double f1 = 0.0;
  opt.on_epoch = [&](const NerEpochReport& r, const NerModel&) {
    f1 = r.dev_f1;
    return f1 < 99.0;
  };
  const auto model = NerModel::train(doc, entities, cfg, opt);
  CHECK(f1 >= 95.0);
  const auto p = model.predict(doc);
  CHECK(model.predict(doc) == p);
  CHECK(cnec_f1(entities, p, CnecLevel::types).f1() >= 95.0);

  const auto bytes = nn::serialize_checkpoint(model.to_checkpoint());
  const auto restored = NerModel::from_checkpoint(nn::parse_checkpoint(bytes));
  CHECK(restored.predict(doc) == p);
  CHECK(nn::serialize_checkpoint(restored.to_checkpoint()) == bytes);
  CHECK(model.predict(conllu::Document{}).empty());
}

TEST_CASE("NER training is seed-deterministic") {
  const auto doc = conllu::read_conllu_file(testing::data_path("ner_toy.conllu"));
  const auto entities = read_entity_file(testing::data_path("ner_toy.entities"));
  auto cfg = small_config();
  cfg.epochs = 2;
  const auto a = nn::serialize_checkpoint(NerModel::train(doc, entities, cfg).to_checkpoint());
  CHECK(a == nn::serialize_checkpoint(NerModel::train(doc, entities, cfg).to_checkpoint()));
}

TEST_CASE("NER training input errors") {
  const auto doc = conllu::read_conllu_file(testing::data_path("ner_toy.conllu"));
  auto entities = read_entity_file(testing::data_path("ner_toy.entities"));
  entities.pop_back();
  CHECK_THROWS_AS(NerModel::train(doc, entities, small_config()), DataError);
  CHECK_THROWS_AS(NerModel::train(conllu::Document{}, {}, small_config()), DataError);
}

TEST_CASE("the decoder stops after eight labels per token") {
  const auto doc = conllu::read_conllu_file(testing::data_path("ner_toy.conllu"));
  const auto entities = read_entity_file(testing::data_path("ner_toy.entities"));
  auto cfg = small_config();
  cfg.epochs = 1;
  auto ck = NerModel::train(doc, entities, cfg).to_checkpoint();
  // Make one entity label overwhelm every other output, end-of-word included.
  const auto labels = NerModel::from_checkpoint(ck).labels();
  const auto b_label = std::find_if(labels.begin(), labels.end(), [](const std::string& l) { return l.rfind("B-", 0) == 0; });
  REQUIRE(b_label != labels.end());
  bool edited = false;
  for (auto& t : ck.tensors)
    if (t.name == "ner/output.b") {
      t.data.assign(t.data.size(), 0.0f);
      t.data[static_cast<size_t>(b_label - labels.begin())] = 1e4f;
      edited = true;
    }
  REQUIRE(edited);
  const auto adversarial = NerModel::from_checkpoint(ck);
  const auto out = adversarial.predict_labels(doc);
  REQUIRE(out.size() == doc.sentences.size());
  for (size_t i = 0; i < out.size(); ++i) {
    REQUIRE(out[i].size() == doc.sentences[i].size());
    for (const auto& token : out[i]) {
      CHECK(token.size() == 8);
      for (const auto& l : token) CHECK(l == *b_label);
    }
  }
  for (const auto& spans : adversarial.predict(doc)) CHECK(satisfies_nesting(spans));
}
