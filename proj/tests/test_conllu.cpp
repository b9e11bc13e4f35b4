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
#include "doctest.h"
#include "morphkit/conllu/conllu.hpp"

using namespace morphkit::conllu;

namespace {

const char* kTwoTokens =
    "# sent_id = 1\n"
    "# text = Pes štěká\n"
    "1\tPes\tpes\tNOUN\tNNMS1-----A----\tAnimacy=Anim|Case=Nom\t2\tnsubj\t_\t_\n"
    "2\tštěká\tštěkat\tVERB\tVB-S---3P-AA---\t_\t0\troot\t_\tSpaceAfter=No\n"
    "\n";

}  // namespace

TEST_CASE("empty input parses to an empty document") {
  auto doc = parse_conllu("");
  CHECK(doc.sentences.empty());
  CHECK(write_conllu(doc).empty());
}

TEST_CASE("minimal tree") {
  auto doc = parse_conllu(kTwoTokens);
  REQUIRE(doc.sentences.size() == 1);
  const auto& s = doc.sentences[0];
  REQUIRE(s.size() == 2);
  CHECK(*s.tokens[0].head == 2);
  CHECK(*s.tokens[1].head == 0);
  CHECK(s.comments.size() == 2);
  CHECK(s.tokens[0].feats.size() == 2);
  CHECK(is_well_formed_tree(s));
}

TEST_CASE("write reproduces canonical input byte for byte") {
  const std::string text = std::string(kTwoTokens) +
                           "1-2\tdoň\t_\t_\t_\t_\t_\t_\t_\t_\n"
                           "1\tdo\tdo\tADP\t_\t_\t2\tcase\t_\t_\n"
                           "2\tněj\ton\tPRON\t_\tCase=Gen\t0\troot\t_\t_\n"
                           "\n";
  auto doc = parse_conllu(text);
  CHECK(doc.sentences.size() == 2);
  CHECK(doc.sentences[1].opaque.size() == 1);
  CHECK(write_conllu(doc) == text);
  CHECK(parse_conllu(write_conllu(doc)) == doc);
}

TEST_CASE("empty feats serialize as underscore") {
  Document doc;
  Sentence s;
  Token t;
  t.id = 1;
  t.form = "a";
  t.head = 0;
  s.tokens.push_back(t);
  doc.sentences.push_back(s);
  CHECK(write_conllu(doc) == "1\ta\t_\t_\t_\t_\t0\t_\t_\t_\n\n");
}

TEST_CASE("feats are sorted by key when parsed") {
  auto feats = parse_feats("Number=Sing|Case=Nom");
  REQUIRE(feats.size() == 2);
  CHECK(feats[0].key == "Case");
  CHECK(feats_to_string(feats) == "Case=Nom|Number=Sing");
  CHECK_THROWS_AS(parse_feats("Case=Nom|Case=Gen"), morphkit::DataError);
}

TEST_CASE("malformed lines report their line number") {
  // nine columns on line 3
  const char* text =
      "# c\n"
      "1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n"
      "2\tb\tb\tX\t_\t_\t1\tdep\t_\n"
      "\n";
  try {
    parse_conllu(text);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_conllu("x\ta\ta\tX\t_\t_\t0\troot\t_\t_\n"), ParseError);
  CHECK_THROWS_AS(parse_conllu("1\ta\ta\tX\t_\t_\tz\troot\t_\t_\n"), ParseError);
}

TEST_CASE("head out of range is rejected") {
  try {
    parse_conllu("1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n2\tb\tb\tX\t_\t_\t7\tdep\t_\t_\n\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_conllu("1\ta\ta\tX\t_\t_\t1\troot\t_\t_\n\n"), ParseError);
}

TEST_CASE("unparsed sentences keep the no-head sentinel") {
  auto doc = parse_conllu("1\ta\t_\t_\t_\t_\t_\t_\t_\t_\n\n");
  CHECK_FALSE(doc.sentences[0].tokens[0].head.has_value());
  CHECK_FALSE(is_well_formed_tree(doc.sentences[0]));
  CHECK(write_conllu(doc) == "1\ta\t_\t_\t_\t_\t_\t_\t_\t_\n\n");
}

TEST_CASE("tree validity") {
  CHECK(is_well_formed_tree(std::vector<int>{2, 0}));
  CHECK_FALSE(is_well_formed_tree(std::vector<int>{0, 0}));     // two roots
  CHECK_FALSE(is_well_formed_tree(std::vector<int>{2, 3, 2}));  // cycle, no root
  CHECK_FALSE(is_well_formed_tree(std::vector<int>{0, 3, 2}));  // cycle detached from root
}

TEST_CASE("PDT lemma suffixes") {
  CHECK(split_pdt_lemma("can-1") == PdtLemma{"can", 1});
  CHECK(split_pdt_lemma("pes") == PdtLemma{"pes", std::nullopt});
  CHECK(split_pdt_lemma("x-23") == PdtLemma{"x", 23});
  CHECK(split_pdt_lemma("-1") == PdtLemma{"-1", std::nullopt});
  CHECK(split_pdt_lemma("a-b-7").text == "a-b");
  CHECK(split_pdt_lemma("x-07").suffix == std::nullopt);
  for (const char* raw : {"can-1", "x-23", "pes", "-1", "a-", "1-2-3"}) {
    auto split = split_pdt_lemma(raw);
    CHECK(!split.text.empty());
    CHECK(split.raw() == raw);
  }
}
