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
#include <algorithm>

#include "doctest.h"
#include "morphkit/common/rng.hpp"
#include "morphkit/common/unicode.hpp"
#include "morphkit/lemma/lemma_rules.hpp"

using namespace morphkit;
using namespace morphkit::lemma;

namespace {

// Brute force over all substring pairs, first found wins under the
// (a_start, b_start) ordering.
std::optional<CommonSubstring> lcs_oracle(std::u32string_view a, std::u32string_view b) {
  std::optional<CommonSubstring> best;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) {
      size_t k = 0;
      while (i + k < a.size() && j + k < b.size() && a[i + k] == b[j + k]) ++k;
      if (k > 0 && (!best || k > best->length)) best = CommonSubstring{i, j, k};
    }
  return best;
}

std::u32string apply_script(const EditScript& s, std::u32string_view src) {
  std::u32string out;
  size_t pos = 0;
  for (auto op : s) {
    if (op.kind == EditKind::copy) out.push_back(src[pos++]);
    else if (op.kind == EditKind::delete_char) ++pos;
    else out.push_back(op.ch);
  }
  CHECK(pos == src.size());
  return out;
}

std::u32string u32(const char* s) { return unicode::decode(s); }

}  // namespace

TEST_CASE("longest common substring") {
  CHECK(*longest_common_substring(U"abc", U"abc") == CommonSubstring{0, 0, 3});
  CHECK_FALSE(longest_common_substring(U"xyz", U"abc").has_value());
  CHECK(*longest_common_substring(u32("koček"), u32("kočka")) == CommonSubstring{0, 0, 3});
  // tie on length: smallest a_start, then smallest b_start
  CHECK(*longest_common_substring(U"abxab", U"ab") == CommonSubstring{0, 0, 2});
  CHECK(*longest_common_substring(U"ab", U"xabab") == CommonSubstring{0, 1, 2});

  Rng rng(7, "lcs");
  for (int trial = 0; trial < 500; ++trial) {
    std::u32string a, b;
    for (uint64_t i = rng.below(8); i > 0; --i) a.push_back(U'a' + static_cast<char32_t>(rng.below(3)));
    for (uint64_t i = rng.below(8); i > 0; --i) b.push_back(U'a' + static_cast<char32_t>(rng.below(3)));
    CHECK(longest_common_substring(a, b) == lcs_oracle(a, b));
  }
}

TEST_CASE("shortest edit script") {
  CHECK(shortest_edit_script(U"", U"").empty());
  CHECK(shortest_edit_script(U"e", U"") == EditScript{EditOp::erase()});
  auto s = shortest_edit_script(U"ek", U"ka");
  CHECK(s == EditScript{EditOp::erase(), EditOp::copy(), EditOp::insert(U'a')});
  CHECK(edit_cost(s) == 2);
  // deletes come before inserts at the same position
  CHECK(shortest_edit_script(U"a", U"b") == EditScript{EditOp::erase(), EditOp::insert(U'b')});
}

TEST_CASE("casing encoding") {
  using M = CasingMark;
  CHECK(encode_casing(U"iphone") == std::vector<M>{{Anchor::from_start, 0, LetterCase::lower}});
  CHECK(encode_casing(U"iPhone") == std::vector<M>{{Anchor::from_start, 0, LetterCase::lower},
                                                    {Anchor::from_start, 1, LetterCase::upper},
                                                    {Anchor::from_start, 2, LetterCase::lower}});
  CHECK(encode_casing(U"aB") ==
        std::vector<M>{{Anchor::from_start, 0, LetterCase::lower}, {Anchor::from_end, 0, LetterCase::upper}});
  // caseless characters extend the current segment
  CHECK(encode_casing(U"1A") == std::vector<M>{{Anchor::from_start, 0, LetterCase::upper}});
  CHECK(encode_casing(U"ab-CD").size() == 2);
  CHECK(encode_casing(U"ab-CD")[1] == M{Anchor::from_end, 1, LetterCase::upper});
}

TEST_CASE("rule construction") {
  auto identity = build_rule("can", "can");
  CHECK(identity.kind == LemmaRule::Kind::edit);
  CHECK(identity.prefix_script.empty());
  CHECK(identity.suffix_script.empty());
  CHECK(identity.casing == std::vector<CasingMark>{{Anchor::from_start, 0, LetterCase::lower}});

  auto literal = build_rule("xyz", "abc");
  CHECK(literal.kind == LemmaRule::Kind::literal);
  CHECK(literal.literal_lemma == "abc");
  CHECK(apply_rule(literal, "anything") == "abc");

  auto kocka = build_rule("koček", "kočka");
  CHECK(kocka.prefix_script.empty());
  CHECK(kocka.suffix_script == shortest_edit_script(U"ek", U"ka"));
  CHECK(kocka.serialize() == "^0l;~|-.+a");
  CHECK(apply_rule(kocka, "koček") == "kočka");
  // the rule generalizes to other forms with the same ending
  CHECK(apply_rule(kocka, "Pešek") == "peška");
}

TEST_CASE("casing application") {
  LemmaRule rule;
  rule.casing = {{Anchor::from_start, 0, LetterCase::upper}, {Anchor::from_start, 1, LetterCase::lower}};
  CHECK(apply_rule(rule, "Praha") == "Praha");
  CHECK(apply_rule(rule, "PRAHA") == "Praha");
  CHECK(apply_rule(build_rule("PRAZE", "Praha"), "praze") == "Praha");
  CHECK(apply_rule(build_rule("iPhonu", "iPhone"), "IPHONU") == "iPhone");
}

TEST_CASE("rule application errors on too-short forms") {
  // suffix script "def" -> "" consumes three characters
  CHECK_THROWS_AS(apply_rule(build_rule("abcdef", "abc"), "ab"), RuleMismatch);
  CHECK_FALSE(try_apply_rule(build_rule("abcdef", "abc"), "ab").has_value());
  CHECK(apply_rule(build_rule("abcdef", "abc"), "xyzdef") == "xyz");
}

TEST_CASE("serialization is canonical and parseable") {
  const std::pair<const char*, const char*> pairs[] = {
      {"koček", "kočka"}, {"xyz", "abc"}, {"Praze", "Praha"}, {"nejlepší", "dobrý"},
      {"a|b", "a;b"},     {"x", "x+|.-"}, {"iPhony", "iPhone"}, {"DNA", "DNA"}};
  for (auto [form, lemma] : pairs) {
    auto rule = build_rule(form, lemma);
    auto text = rule.serialize();
    CHECK(LemmaRule::parse(text) == rule);
    CHECK(build_rule(form, lemma).serialize() == text);
    CHECK(apply_rule(LemmaRule::parse(text), form) == lemma);
  }
  CHECK_THROWS_AS(LemmaRule::parse("no body"), DataError);
  CHECK_THROWS_AS(LemmaRule::parse("^0x;~|"), DataError);
}

TEST_CASE("edit rule output case depends only on the rule") {
  auto rule = build_rule("Koček", "kočka");
  CHECK(apply_rule(rule, "KOČEK") == apply_rule(rule, "koček"));
  CHECK(apply_rule(rule, "KoČeK") == "kočka");
}
