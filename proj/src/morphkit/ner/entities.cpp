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
#include "morphkit/ner/entities.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <tuple>

#include "morphkit/common/error.hpp"

namespace morphkit::ner {

bool span_order(const EntitySpan& a, const EntitySpan& b) {
  return std::forward_as_tuple(a.start, b.end, a.type) < std::forward_as_tuple(b.start, a.end, b.type);
}

bool satisfies_nesting(const SentenceEntities& spans) {
  for (size_t i = 0; i < spans.size(); ++i) {
    for (size_t j = i + 1; j < spans.size(); ++j) {
      const auto& a = spans[i];
      const auto& b = spans[j];
      const bool disjoint = a.end < b.start || b.end < a.start;
      const bool nested = (a.start <= b.start && b.end <= a.end) || (b.start <= a.start && a.end <= b.end);
      if (!disjoint && !nested) return false;
    }
  }
  return true;
}

void validate_entities(size_t sentence_length, const SentenceEntities& spans) {
  for (const auto& s : spans) {
    if (s.start < 1 || s.start > s.end || s.end > sentence_length)
      throw DataError("entity " + std::to_string(s.start) + "-" + std::to_string(s.end) + " " + s.type +
                      " lies outside a sentence of " + std::to_string(sentence_length) + " tokens");
    if (s.type.empty()) throw DataError("entity without a type");
  }
  if (!satisfies_nesting(spans)) throw DataError("partially overlapping entities");
}

LinearizedLabels encode_entities(size_t sentence_length, SentenceEntities spans) {
  validate_entities(sentence_length, spans);
  std::sort(spans.begin(), spans.end(), span_order);
  LinearizedLabels labels(sentence_length);
  for (const auto& s : spans)
    for (size_t i = s.start; i <= s.end; ++i) labels[i - 1].push_back((i == s.start ? "B-" : "I-") + s.type);
  for (auto& l : labels)
    if (l.empty()) l.push_back(kOutside);
  return labels;
}

SentenceEntities decode_entities(const LinearizedLabels& labels) {
  SentenceEntities spans;
  std::vector<size_t> open;  // indices into spans, outermost first
  for (size_t i = 0; i < labels.size(); ++i) {
    const size_t token = i + 1;
    std::vector<size_t> next;
    bool continuing = true;
    for (const auto& label : labels[i]) {
      if (label.empty() || label == kOutside) continue;
      const bool inside = label.rfind("I-", 0) == 0;
      const std::string type = (inside || label.rfind("B-", 0) == 0) ? label.substr(2) : label;
      if (type.empty()) continue;
      const size_t depth = next.size();
      if (inside && continuing && depth < open.size() && spans[open[depth]].type == type) {
        spans[open[depth]].end = token;
        next.push_back(open[depth]);
      } else {
        // Anything opened at this token nests inside the spans continued so
        // far, so deeper spans of the previous token must close.
        continuing = false;
        spans.push_back({token, token, type});
        next.push_back(spans.size() - 1);
      }
    }
    open = std::move(next);
  }
  std::sort(spans.begin(), spans.end(), span_order);
  return spans;
}

std::vector<SentenceEntities> parse_entity_file(std::string_view text) {
  std::vector<SentenceEntities> out;
  SentenceEntities current;
  bool pending = false;
  size_t pos = 0, line_no = 0, block_start = 1;
  auto close_block = [&] {
    if (!satisfies_nesting(current))
      throw DataError("entity file line " + std::to_string(block_start) + ": sentence " +
                      std::to_string(out.size() + 1) + " has partially overlapping spans");
    out.push_back(std::move(current));
    current.clear();
    pending = false;
    block_start = line_no + 1;
  };
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      close_block();
      continue;
    }
    std::istringstream in{std::string(line)};
    EntitySpan span;
    std::string extra;
    if (!(in >> span.start >> span.end >> span.type) || (in >> extra))
      throw DataError("entity file line " + std::to_string(line_no) + ": expected 'start end type'");
    if (span.start < 1 || span.start > span.end)
      throw DataError("entity file line " + std::to_string(line_no) + ": invalid span bounds");
    current.push_back(std::move(span));
    pending = true;
  }
  if (pending) close_block();
  return out;
}

std::vector<SentenceEntities> read_entity_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open entity file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_entity_file(buf.str());
}

std::string serialize_entity_file(const std::vector<SentenceEntities>& sentences) {
  std::string out;
  for (const auto& sentence : sentences) {
    for (const auto& s : sentence) out += std::to_string(s.start) + " " + std::to_string(s.end) + " " + s.type + "\n";
    out += "\n";
  }
  return out;
}

void write_entity_file(const std::filesystem::path& path, const std::vector<SentenceEntities>& sentences) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write entity file " + path.string());
  out << serialize_entity_file(sentences);
  if (!out) throw DataError("failed writing entity file " + path.string());
}

}  // namespace morphkit::ner
