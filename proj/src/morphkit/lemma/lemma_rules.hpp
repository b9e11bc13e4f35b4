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
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "morphkit/common/error.hpp"

namespace morphkit::lemma {

// Edit scripts walk the source left to right. A copy emits the current source
// character; delete skips it; insert emits a new character without consuming
// source. Copies cost nothing, so the script length in the edit-distance
// sense is the number of deletes and inserts.
enum class EditKind { copy, delete_char, insert_char };

struct EditOp {
  EditKind kind = EditKind::copy;
  char32_t ch = 0;  // only meaningful for insert_char

  static EditOp copy() { return {EditKind::copy, 0}; }
  static EditOp erase() { return {EditKind::delete_char, 0}; }
  static EditOp insert(char32_t c) { return {EditKind::insert_char, c}; }

  friend bool operator==(const EditOp&, const EditOp&) = default;
};

using EditScript = std::vector<EditOp>;

// Number of delete and insert operations.
size_t edit_cost(const EditScript& script);
// Number of source characters the script consumes (copies + deletes).
size_t source_length(const EditScript& script);

enum class Anchor { from_start, from_end };
enum class LetterCase { lower, upper };

struct CasingMark {
  Anchor anchor = Anchor::from_start;
  size_t offset = 0;
  LetterCase letter_case = LetterCase::lower;

  friend bool operator==(const CasingMark&, const CasingMark&) = default;
};

struct CommonSubstring {
  size_t a_start = 0;
  size_t b_start = 0;
  size_t length = 0;

  friend bool operator==(const CommonSubstring&, const CommonSubstring&) = default;
};

// A lemma generation rule. Rules are classifier classes, so the canonical
// string from serialize() is their identity:
//
//   <casing> ';' <body>
//   casing := mark (',' mark)*        mark := ('^' | '$') <offset> ('l' | 'u')
//   body   := '=' <literal lemma>     literal rule
//           | '~' <ops> '|' <ops>     prefix script, suffix script
//   ops    := ( '.' | '-' | '+' <char> )*
//
// '^' offsets count from the start of the lemma, '$' offsets from its end.
struct LemmaRule {
  enum class Kind { literal, edit };

  Kind kind = Kind::edit;
  std::string literal_lemma;
  EditScript prefix_script;
  EditScript suffix_script;
  std::vector<CasingMark> casing;

  std::string serialize() const;
  static LemmaRule parse(std::string_view text);

  friend bool operator==(const LemmaRule&, const LemmaRule&) = default;
};

// Raised when an edit rule cannot be applied to a form (the scripts consume
// more characters than the form has, or a casing mark falls outside the
// produced lemma).
class RuleMismatch : public DataError {
 public:
  using DataError::DataError;
};

// Ties: smallest a_start, then smallest b_start.
std::optional<CommonSubstring> longest_common_substring(std::u32string_view a, std::u32string_view b);

// Minimal insert/delete script from src to dst. Among minimal scripts the
// backtrace prefers delete, then copy, then insert at every position.
EditScript shortest_edit_script(std::u32string_view src, std::u32string_view dst);

std::vector<CasingMark> encode_casing(std::u32string_view lemma);

LemmaRule build_rule(std::string_view form, std::string_view lemma);

std::string apply_rule(const LemmaRule& rule, std::string_view form);
std::optional<std::string> try_apply_rule(const LemmaRule& rule, std::string_view form);

}  // namespace morphkit::lemma
