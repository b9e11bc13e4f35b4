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

#include <compare>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace morphkit::ner {

// Token span with 1-based inclusive bounds.
struct EntitySpan {
  size_t start = 0;
  size_t end = 0;
  std::string type;

  friend bool operator==(const EntitySpan&, const EntitySpan&) = default;
};

// Outermost first: earlier start, then longer span, then type.
bool span_order(const EntitySpan& a, const EntitySpan& b);

using SentenceEntities = std::vector<EntitySpan>;

// Per token: labels outermost first ("B-type"/"I-type"), or the single label
// "O". The end-of-word symbol is implicit.
using LinearizedLabels = std::vector<std::vector<std::string>>;

inline constexpr const char* kOutside = "O";

// True when every pair of spans is disjoint or nested.
bool satisfies_nesting(const SentenceEntities& spans);

// Throws DataError for bounds outside [1, sentence_length], start > end or
// partially overlapping spans.
void validate_entities(size_t sentence_length, const SentenceEntities& spans);

LinearizedLabels encode_entities(size_t sentence_length, SentenceEntities spans);

// Total inverse of encode_entities. A B label opens a span; an I label
// continues the open span at its depth when the type matches and all outer
// spans continue too, otherwise it opens a new span. "O" and empty labels
// are skipped. The result is sorted by span_order.
SentenceEntities decode_entities(const LinearizedLabels& labels);

// Entity files hold one block per sentence: lines "start end type", each
// block terminated by a blank line.
std::vector<SentenceEntities> parse_entity_file(std::string_view text);
std::vector<SentenceEntities> read_entity_file(const std::filesystem::path& path);
std::string serialize_entity_file(const std::vector<SentenceEntities>& sentences);
void write_entity_file(const std::filesystem::path& path, const std::vector<SentenceEntities>& sentences);

}  // namespace morphkit::ner
