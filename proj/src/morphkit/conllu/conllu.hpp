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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "morphkit/common/error.hpp"

namespace morphkit::conllu {

// Column 6 entry. Keys are unique within a token; the parser keeps them
// sorted so a parsed document always serializes canonically.
struct Feature {
  std::string key;
  std::string value;

  friend bool operator==(const Feature&, const Feature&) = default;
};

struct Token {
  int id = 0;
  std::string form = "_";
  std::string lemma = "_";
  std::string upos = "_";
  std::string xpos = "_";
  std::vector<Feature> feats;
  std::optional<int> head;  // nullopt is "_" (not parsed); 0 is the artificial root
  std::string deprel = "_";
  std::string deps = "_";
  std::string misc = "_";

  friend bool operator==(const Token&, const Token&) = default;
};

// Multiword-token ranges ("3-4") and empty nodes ("5.1") are carried verbatim
// and placed before the token with index before_token (0-based).
struct OpaqueLine {
  size_t before_token = 0;
  std::string text;

  friend bool operator==(const OpaqueLine&, const OpaqueLine&) = default;
};

struct Sentence {
  std::vector<std::string> comments;  // raw lines including the leading '#'
  std::vector<Token> tokens;
  std::vector<OpaqueLine> opaque;

  size_t size() const { return tokens.size(); }
  bool has_heads() const;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct Document {
  std::vector<Sentence> sentences;

  size_t token_count() const;

  friend bool operator==(const Document&, const Document&) = default;
};

class ParseError : public DataError {
 public:
  ParseError(size_t line, const std::string& message)
      : DataError("line " + std::to_string(line) + ": " + message), line_(line) {}
  size_t line() const noexcept { return line_; }

 private:
  size_t line_;
};

Document parse_conllu(std::string_view text);
std::string write_conllu(const Document& doc);

Document read_conllu_file(const std::filesystem::path& path);
void write_conllu_file(const Document& doc, const std::filesystem::path& path);

std::vector<Feature> parse_feats(std::string_view column);
std::string feats_to_string(const std::vector<Feature>& feats);

// True when every token has a head and the heads form one tree rooted at 0
// with exactly one root child.
bool is_well_formed_tree(const Sentence& sentence);
bool is_well_formed_tree(const std::vector<int>& heads);

struct PdtLemma {
  std::string text;
  std::optional<unsigned> suffix;

  std::string raw() const;
  friend bool operator==(const PdtLemma&, const PdtLemma&) = default;
};

// "can-1" -> ("can", 1). Only one trailing "-<digits>" group is recognized,
// and only when something non-empty precedes it.
PdtLemma split_pdt_lemma(std::string_view raw);

}  // namespace morphkit::conllu
