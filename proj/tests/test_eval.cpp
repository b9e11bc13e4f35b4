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
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "morphkit/eval/metrics.hpp"
#include "oracles.hpp"

using namespace morphkit;
using namespace morphkit::eval;

namespace {

conllu::Document doc(const char* text) { return conllu::parse_conllu(text); }

// Five tokens, three content words (nsubj, root, obj) and two functional.
const char* kFive =
    "1\tten\tten\tDET\tPD\tGender=Masc\t2\tdet\t_\t_\n"
    "2\tpes\tpes\tNOUN\tNN\tCase=Nom|Gender=Masc\t3\tnsubj\t_\t_\n"
    "3\tvidí\tvidět\tVERB\tVB\tPerson=3\t0\troot\t_\t_\n"
    "4\tkočku\tkočka\tNOUN\tNN\tCase=Acc\t3\tobj\t_\t_\n"
    "5\t.\t.\tPUNCT\tZ\t_\t3\tpunct\t_\t_\n\n";

std::map<std::string, testing::Fraction> read_golden(const std::string& name) {
  std::ifstream in(testing::data_path(name));
  std::map<std::string, testing::Fraction> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string mode, metric, value;
    fields >> mode >> metric >> value;
    out[mode + " " + metric] = testing::parse_fraction(value);
  }
  return out;
}

testing::Fraction as_fraction(const Score& s) { return {s.correct, s.total}; }

std::map<std::string, Score> named(const MetricReport& r) {
  return {{"upos", r.upos}, {"xpos", r.xpos}, {"ufeats", r.ufeats}, {"lemmas", r.lemmas},
          {"uas", r.uas},   {"las", r.las},   {"mlas", r.mlas},     {"blex", r.blex}};
}

// Random corruption of a gold document; heads stay a valid tree only by
// accident, which the metrics do not require.
conllu::Document corrupt(const conllu::Document& gold, Rng& rng, double p) {
  auto sys = gold;
  for (auto& s : sys.sentences)
    for (auto& t : s.tokens) {
      if (rng.bernoulli(p)) t.upos = "X";
      if (rng.bernoulli(p)) t.lemma += "x";
      if (rng.bernoulli(p)) t.head = static_cast<int>(rng.below(s.size() + 1));
      if (rng.bernoulli(p)) t.deprel = rng.bernoulli(0.5) ? "obl" : "case";
      if (rng.bernoulli(p)) t.feats.clear();
    }
  return sys;
}

}  // namespace

TEST_CASE("metric fixture matches hand-computed golden values") {
  const auto gold = conllu::read_conllu_file(testing::data_path("golden/metrics_gold.conllu"));
  const auto sys = conllu::read_conllu_file(testing::data_path("golden/metrics_system.conllu"));
  const auto golden = read_golden("golden/metrics.golden");
  for (auto [mode_name, mode] : {std::pair{"ud", LemmaMode::ud}, std::pair{"pdt", LemmaMode::pdt}}) {
    EvalOptions opt;
    opt.lemma_mode = mode;
    for (const auto& [metric, score] : named(evaluate(gold, sys, opt))) {
      const std::string key = std::string(mode_name) + " " + metric;
      INFO(key, " got ", score.correct, "/", score.total);
      REQUIRE(golden.count(key) == 1);
      CHECK(as_fraction(score) == golden.at(key));
    }
  }
}

TEST_CASE("self comparison scores one everywhere") {
  const auto gold = conllu::read_conllu_file(testing::data_path("toy_train.conllu"));
  for (const auto& [metric, score] : named(evaluate(gold, gold))) {
    INFO(metric);
    CHECK(score.correct == score.total);
    CHECK(score.total > 0);
  }
}

TEST_CASE("one wrong tag of four tokens") {
  auto gold = doc("1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n2\tb\tb\tX\t_\t_\t1\tdep\t_\t_\n"
                  "3\tc\tc\tX\t_\t_\t1\tdep\t_\t_\n4\td\td\tX\t_\t_\t1\tdep\t_\t_\n\n");
  auto sys = gold;
  sys.sentences[0].tokens[2].upos = "Y";
  CHECK(tagging_accuracy(gold, sys, TagField::upos).ratio() == 0.75);
}

TEST_CASE("feats compare as sets") {
  auto gold = doc(kFive);
  auto sys = gold;
  std::reverse(sys.sentences[0].tokens[1].feats.begin(), sys.sentences[0].tokens[1].feats.end());
  CHECK(tagging_accuracy(gold, sys, TagField::ufeats).ratio() == 1.0);
}

TEST_CASE("one wrong label of five") {
  auto gold = doc(kFive);
  auto sys = gold;
  sys.sentences[0].tokens[3].deprel = "obl";
  auto [uas, las] = attachment_scores(gold, sys);
  CHECK(uas.ratio() == 1.0);
  CHECK(las.ratio() == 0.8);
}

TEST_CASE("one wrong content UPOS costs MLAS but not BLEX") {
  auto gold = doc(kFive);
  auto sys = gold;
  sys.sentences[0].tokens[3].upos = "PROPN";
  auto [mlas, blex] = mlas_blex(gold, sys);
  CHECK(as_fraction(mlas) == testing::Fraction{2, 3});
  CHECK(blex.ratio() == 1.0);
}

TEST_CASE("deprel subtypes are ignored") {
  auto gold = doc(kFive);
  auto sys = gold;
  sys.sentences[0].tokens[1].deprel = "nsubj:pass";
  CHECK(attachment_scores(gold, sys).second.ratio() == 1.0);
}

TEST_CASE("an underscore gold lemma matches anything") {
  auto gold = doc(kFive);
  gold.sentences[0].tokens[0].lemma = "_";
  auto sys = doc(kFive);
  sys.sentences[0].tokens[0].lemma = "whatever";
  CHECK(tagging_accuracy(gold, sys, TagField::lemmas).ratio() == 1.0);
}

TEST_CASE("tokenization mismatches name the sentence") {
  auto gold = doc(kFive);
  auto sys = gold;
  sys.sentences[0].tokens.pop_back();
  try {
    evaluate(gold, sys);
    FAIL("expected a data error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("sentence 1") != std::string::npos);
  }
  sys = gold;
  sys.sentences.push_back(gold.sentences[0]);
  CHECK_THROWS_AS(evaluate(gold, sys), DataError);
}

TEST_CASE("LAS never exceeds UAS and MLAS/BLEX never exceed LAS") {
  const auto gold = conllu::read_conllu_file(testing::data_path("toy_train.conllu"));
  Rng rng(3, "eval-invariants");
  for (int trial = 0; trial < 100; ++trial) {
    auto sys = corrupt(gold, rng, 0.2);
    const auto r = evaluate(gold, sys);
    CHECK(r.las.correct <= r.uas.correct);
    // with deprels left intact the content-word sets coincide
    auto same_labels = sys;
    for (size_t i = 0; i < gold.sentences.size(); ++i)
      for (size_t k = 0; k < gold.sentences[i].size(); ++k)
        same_labels.sentences[i].tokens[k].deprel = gold.sentences[i].tokens[k].deprel;
    const auto r2 = evaluate(gold, same_labels);
    CHECK(r2.mlas.correct * r2.las.total <= r2.las.correct * r2.mlas.total);
    CHECK(r2.blex.correct * r2.las.total <= r2.las.correct * r2.blex.total);
  }
}

TEST_CASE("flipping one correct token never raises a metric") {
  const auto gold = conllu::read_conllu_file(testing::data_path("toy_train.conllu"));
  Rng rng(4, "eval-monotone");
  for (int trial = 0; trial < 200; ++trial) {
    auto sys = corrupt(gold, rng, 0.1);
    const auto before = named(evaluate(gold, sys));
    const size_t i = rng.below(sys.sentences.size());
    const size_t k = rng.below(sys.sentences[i].size());
    const auto& g = gold.sentences[i].tokens[k];
    auto& t = sys.sentences[i].tokens[k];
    // Only a fully correct token may be flipped. A wrong token can still
    // raise MLAS when its head moves, e.g. a spurious functional child
    // leaving a parent.
    if (!(t == g)) continue;
    switch (rng.below(4)) {
      case 0: t.upos = "NONE"; break;
      case 1: t.lemma = "none"; break;
      case 2: t.head = g.head == 0 ? static_cast<int>(k == 0 ? 2 : 1) : 0; break;
      default: t.deprel = g.deprel == "dep" ? "obj" : "dep"; break;
    }
    const auto after = named(evaluate(gold, sys));
    for (const auto& [metric, score] : after) {
      INFO(metric);
      CHECK(score.correct <= before.at(metric).correct);
    }
  }
}
