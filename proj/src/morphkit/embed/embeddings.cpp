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
#include "morphkit/embed/embeddings.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace morphkit::embed {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f32(std::string& out, float f) { put_u32(out, std::bit_cast<uint32_t>(f)); }

class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

  bool at_end() const { return pos_ == bytes_.size(); }

  uint32_t u32(const char* what) {
    need(4, what);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }

  float f32(const char* what) { return std::bit_cast<float>(u32(what)); }

  std::string_view take(size_t n, const char* what) {
    need(n, what);
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  void need(size_t n, const char* what) {
    if (bytes_.size() - pos_ < n) throw DataError(std::string("CVEC: truncated ") + what);
  }

  std::string_view bytes_;
  size_t pos_ = 0;
};

}  // namespace

WordEmbeddingTable::WordEmbeddingTable(std::vector<std::string> words, RowMatrix<float> vectors)
    : words_(std::move(words)), vectors_(std::move(vectors)) {
  if (static_cast<size_t>(vectors_.rows()) != words_.size())
    throw DataError("embedding table: word count does not match vector rows");
  for (size_t i = 0; i < words_.size(); ++i)
    if (!index_.emplace(words_[i], i).second) throw DataError("embedding table: duplicate word '" + words_[i] + "'");
}

std::optional<size_t> WordEmbeddingTable::index(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Eigen::RowVectorXf WordEmbeddingTable::lookup(std::string_view word) const {
  if (auto i = index(word)) return vectors_.row(*i);
  return Eigen::RowVectorXf::Zero(vectors_.cols());
}

WordEmbeddingTable parse_word_embeddings(std::string_view text) {
  size_t pos = 0;
  size_t line_no = 0;
  auto next_line = [&]() -> std::optional<std::string_view> {
    if (pos >= text.size()) return std::nullopt;
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
  };

  auto header = next_line();
  if (!header) throw DataError("embeddings: empty file");
  auto head = split_ws(*header);
  size_t count = 0, dim = 0;
  auto parse_size = [](std::string_view s, size_t& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
  };
  if (head.size() != 2 || !parse_size(head[0], count) || !parse_size(head[1], dim) || dim == 0)
    throw DataError("embeddings: line 1: expected header 'count dim'");

  std::vector<std::string> words;
  RowMatrix<float> vectors(count, dim);
  while (auto line = next_line()) {
    auto fields = split_ws(*line);
    if (fields.empty()) continue;
    if (words.size() == count)
      throw DataError("embeddings: line " + std::to_string(line_no) + ": more entries than the header count");
    if (fields.size() != dim + 1)
      throw DataError("embeddings: line " + std::to_string(line_no) + ": expected " + std::to_string(dim) +
                      " values, found " + std::to_string(fields.size() - 1));
    for (size_t d = 0; d < dim; ++d) {
      float v = 0;
      auto f = fields[d + 1];
      auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || p != f.data() + f.size())
        throw DataError("embeddings: line " + std::to_string(line_no) + ": bad number '" + std::string(f) + "'");
      vectors(static_cast<Eigen::Index>(words.size()), static_cast<Eigen::Index>(d)) = v;
    }
    words.emplace_back(fields[0]);
  }
  if (words.size() != count)
    throw DataError("embeddings: header promises " + std::to_string(count) + " entries, found " +
                    std::to_string(words.size()));
  std::unordered_map<std::string, size_t> seen;
  for (size_t i = 0; i < words.size(); ++i)
    if (!seen.emplace(words[i], i).second)
      throw DataError("embeddings: line " + std::to_string(i + 2) + ": duplicate word '" + words[i] + "'");
  return WordEmbeddingTable(std::move(words), std::move(vectors));
}

WordEmbeddingTable load_word_embeddings(const std::filesystem::path& path) {
  try {
    return parse_word_embeddings(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

ContextualVectors parse_contextual_vectors(std::string_view bytes, const conllu::Document& doc) {
  ByteReader in(bytes);
  if (in.take(4, "magic") != "CVEC") throw DataError("CVEC: bad magic");
  if (in.take(1, "version")[0] != 1) throw DataError("CVEC: unsupported version");
  ContextualVectors out;
  out.dim = in.u32("dimension");
  if (out.dim == 0) throw DataError("CVEC: zero dimension");
  for (size_t s = 0; s < doc.sentences.size(); ++s) {
    if (in.at_end())
      throw DataError("CVEC: file ends before sentence " + std::to_string(s + 1));
    const uint32_t n = in.u32("token count");
    if (n != doc.sentences[s].size())
      throw DataError("CVEC: sentence " + std::to_string(s + 1) + " has " + std::to_string(n) +
                      " vectors but " + std::to_string(doc.sentences[s].size()) + " tokens");
    RowMatrix<float> m(n, out.dim);
    for (uint32_t r = 0; r < n; ++r)
      for (size_t c = 0; c < out.dim; ++c) m(r, static_cast<Eigen::Index>(c)) = in.f32("vector data");
    out.per_sentence.push_back(std::move(m));
  }
  if (!in.at_end()) throw DataError("CVEC: trailing data after the last sentence");
  return out;
}

ContextualVectors read_contextual_vectors(const std::filesystem::path& path, const conllu::Document& doc) {
  try {
    return parse_contextual_vectors(read_file(path), doc);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string serialize_contextual_vectors(const ContextualVectors& vectors) {
  std::string out = "CVEC";
  out.push_back(1);
  put_u32(out, static_cast<uint32_t>(vectors.dim));
  for (const auto& m : vectors.per_sentence) {
    if (static_cast<size_t>(m.cols()) != vectors.dim) throw DataError("CVEC: matrix width differs from dim");
    put_u32(out, static_cast<uint32_t>(m.rows()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) put_f32(out, m(r, c));
  }
  return out;
}

void write_contextual_vectors(const std::filesystem::path& path, const ContextualVectors& vectors) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << serialize_contextual_vectors(vectors);
}

void validate_alignment(const SubwordAlignment& alignment, size_t subword_count) {
  size_t expected = 0;
  for (size_t w = 0; w < alignment.ranges.size(); ++w) {
    auto [begin, end] = alignment.ranges[w];
    if (begin != expected || end <= begin)
      throw DataError("subword alignment: word " + std::to_string(w) + " range is empty or not contiguous");
    expected = end;
  }
  if (expected != subword_count)
    throw DataError("subword alignment covers " + std::to_string(expected) + " of " +
                    std::to_string(subword_count) + " subwords");
}

}  // namespace morphkit::embed
