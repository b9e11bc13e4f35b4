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
#include "morphkit/conllu/conllu.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace morphkit::conllu {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::optional<int> to_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

bool is_opaque_id(std::string_view id) {
  return id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos;
}

void finish_sentence(Document& doc, Sentence& current, std::vector<size_t>& token_lines,
                     size_t first_line, bool& open) {
  if (!open) return;
  const int n = static_cast<int>(current.tokens.size());
  if (n == 0) throw ParseError(first_line, "sentence without tokens");
  for (size_t i = 0; i < current.tokens.size(); ++i) {
    const auto& token = current.tokens[i];
    if (token.head && *token.head > n)
      throw ParseError(token_lines[i], "head " + std::to_string(*token.head) + " out of range");
  }
  doc.sentences.push_back(std::move(current));
  current = Sentence{};
  token_lines.clear();
  open = false;
}

}  // namespace

bool Sentence::has_heads() const {
  return !tokens.empty() &&
         std::all_of(tokens.begin(), tokens.end(), [](const Token& t) { return t.head.has_value(); });
}

size_t Document::token_count() const {
  size_t n = 0;
  for (const auto& s : sentences) n += s.tokens.size();
  return n;
}

std::vector<Feature> parse_feats(std::string_view column) {
  std::vector<Feature> feats;
  if (column == "_") return feats;
  for (auto item : split(column, '|')) {
    auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw DataError("malformed feature '" + std::string(item) + "'");
    feats.push_back({std::string(item.substr(0, eq)), std::string(item.substr(eq + 1))});
  }
  std::sort(feats.begin(), feats.end(),
            [](const Feature& a, const Feature& b) { return a.key < b.key; });
  for (size_t i = 1; i < feats.size(); ++i)
    if (feats[i].key == feats[i - 1].key) throw DataError("duplicate feature '" + feats[i].key + "'");
  return feats;
}

std::string feats_to_string(const std::vector<Feature>& feats) {
  if (feats.empty()) return "_";
  std::vector<const Feature*> sorted;
  for (const auto& f : feats) sorted.push_back(&f);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->key < b->key; });
  std::string out;
  for (const auto* f : sorted) {
    if (!out.empty()) out += '|';
    out += f->key;
    out += '=';
    out += f->value;
  }
  return out;
}

Document parse_conllu(std::string_view text) {
  Document doc;
  Sentence current;
  std::vector<size_t> token_lines;
  bool open = false;
  size_t first_line = 0;
  size_t line_no = 0;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.empty()) {
      finish_sentence(doc, current, token_lines, first_line, open);
      continue;
    }
    if (!open) {
      open = true;
      first_line = line_no;
    }
    if (line.front() == '#') {
      if (!current.tokens.empty() || !current.opaque.empty())
        throw ParseError(line_no, "comment line inside a sentence");
      current.comments.emplace_back(line);
      continue;
    }

    auto cols = split(line, '\t');
    if (cols.size() != 10)
      throw ParseError(line_no, "expected 10 tab-separated columns, found " + std::to_string(cols.size()));
    for (size_t c = 0; c < cols.size(); ++c)
      if (cols[c].empty()) throw ParseError(line_no, "empty column " + std::to_string(c + 1));

    if (is_opaque_id(cols[0])) {
      current.opaque.push_back({current.tokens.size(), std::string(line)});
      continue;
    }
    auto id = to_int(cols[0]);
    if (!id) throw ParseError(line_no, "non-integer id '" + std::string(cols[0]) + "'");
    if (*id != static_cast<int>(current.tokens.size()) + 1)
      throw ParseError(line_no, "id " + std::to_string(*id) + " is not consecutive");

    Token token;
    token.id = *id;
    token.form = cols[1];
    token.lemma = cols[2];
    token.upos = cols[3];
    token.xpos = cols[4];
    try {
      token.feats = parse_feats(cols[5]);
    } catch (const DataError& e) {
      throw ParseError(line_no, e.what());
    }
    if (cols[6] != "_") {
      auto head = to_int(cols[6]);
      if (!head) throw ParseError(line_no, "non-integer head '" + std::string(cols[6]) + "'");
      if (*head < 0) throw ParseError(line_no, "head out of range");
      if (*head == *id) throw ParseError(line_no, "token is its own head");
      token.head = *head;
    }
    token.deprel = cols[7];
    token.deps = cols[8];
    token.misc = cols[9];
    current.tokens.push_back(std::move(token));
    token_lines.push_back(line_no);
  }
  finish_sentence(doc, current, token_lines, first_line, open);
  return doc;
}

std::string write_conllu(const Document& doc) {
  std::string out;
  for (const auto& sentence : doc.sentences) {
    for (const auto& c : sentence.comments) {
      out += c;
      out += '\n';
    }
    size_t next_opaque = 0;
    auto flush_opaque = [&](size_t before) {
      while (next_opaque < sentence.opaque.size() && sentence.opaque[next_opaque].before_token <= before) {
        out += sentence.opaque[next_opaque++].text;
        out += '\n';
      }
    };
    for (size_t i = 0; i < sentence.tokens.size(); ++i) {
      flush_opaque(i);
      const auto& t = sentence.tokens[i];
      out += std::to_string(t.id);
      for (const std::string* col : {&t.form, &t.lemma, &t.upos, &t.xpos}) {
        out += '\t';
        out += *col;
      }
      out += '\t';
      out += feats_to_string(t.feats);
      out += '\t';
      out += t.head ? std::to_string(*t.head) : std::string("_");
      for (const std::string* col : {&t.deprel, &t.deps, &t.misc}) {
        out += '\t';
        out += *col;
      }
      out += '\n';
    }
    flush_opaque(sentence.tokens.size());
    out += '\n';
  }
  return out;
}

Document read_conllu_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_conllu(buffer.str());
  } catch (const ParseError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_conllu_file(const Document& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << write_conllu(doc);
}

bool is_well_formed_tree(const std::vector<int>& heads) {
  const int n = static_cast<int>(heads.size());
  if (n == 0) return false;
  int root_children = 0;
  for (int d = 1; d <= n; ++d) {
    int h = heads[d - 1];
    if (h < 0 || h > n || h == d) return false;
    if (h == 0) ++root_children;
  }
  if (root_children != 1) return false;
  // Every node must reach the root within n steps.
  for (int d = 1; d <= n; ++d) {
    int node = d;
    int steps = 0;
    while (node != 0 && steps <= n) {
      node = heads[node - 1];
      ++steps;
    }
    if (node != 0) return false;
  }
  return true;
}

bool is_well_formed_tree(const Sentence& sentence) {
  if (!sentence.has_heads()) return false;
  std::vector<int> heads;
  for (const auto& t : sentence.tokens) heads.push_back(*t.head);
  return is_well_formed_tree(heads);
}

std::string PdtLemma::raw() const {
  return suffix ? text + "-" + std::to_string(*suffix) : text;
}

PdtLemma split_pdt_lemma(std::string_view raw) {
  size_t digits = 0;
  while (digits < raw.size() && raw[raw.size() - 1 - digits] >= '0' && raw[raw.size() - 1 - digits] <= '9')
    ++digits;
  const size_t dash = raw.size() - digits - 1;
  // Needs at least one digit, a dash, and a non-empty remainder; the digit
  // group must round-trip through an integer (no leading zeros, value >= 1).
  if (digits == 0 || digits > 9 || raw.size() < digits + 2 || raw[dash] != '-' || raw[raw.size() - digits] == '0')
    return {std::string(raw), std::nullopt};
  unsigned value = 0;
  std::from_chars(raw.data() + dash + 1, raw.data() + raw.size(), value);
  return {std::string(raw.substr(0, dash)), value};
}

}  // namespace morphkit::conllu
