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

#include <Eigen/Dense>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "morphkit/common/error.hpp"
#include "morphkit/conllu/conllu.hpp"

namespace morphkit::embed {

template <typename T>
using RowMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Frozen pretrained word vectors. Unknown words map to the zero vector.
class WordEmbeddingTable {
 public:
  WordEmbeddingTable() = default;
  WordEmbeddingTable(std::vector<std::string> words, RowMatrix<float> vectors);

  size_t dim() const { return static_cast<size_t>(vectors_.cols()); }
  size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }
  const RowMatrix<float>& vectors() const { return vectors_; }

  std::optional<size_t> index(std::string_view word) const;
  Eigen::RowVectorXf lookup(std::string_view word) const;

 private:
  std::vector<std::string> words_;
  RowMatrix<float> vectors_;
  std::unordered_map<std::string, size_t> index_;
};

// Text format: "count dim" header, then "word v1 ... vdim" per line.
WordEmbeddingTable load_word_embeddings(const std::filesystem::path& path);
WordEmbeddingTable parse_word_embeddings(std::string_view text);

struct ContextualVectors {
  size_t dim = 0;
  std::vector<RowMatrix<float>> per_sentence;  // n_tokens x dim each
};

// The optional contextual inputs of one document (either may be absent).
struct ContextualInputs {
  const ContextualVectors* a = nullptr;
  const ContextualVectors* b = nullptr;
};

// CVEC container: "CVEC", version byte 1, u32 dim, then per sentence a u32
// token count followed by n_tokens*dim float32 values. Little-endian.
ContextualVectors read_contextual_vectors(const std::filesystem::path& path, const conllu::Document& doc);
ContextualVectors parse_contextual_vectors(std::string_view bytes, const conllu::Document& doc);
std::string serialize_contextual_vectors(const ContextualVectors& vectors);
void write_contextual_vectors(const std::filesystem::path& path, const ContextualVectors& vectors);

// Subword index ranges [begin, end) per word.
struct SubwordAlignment {
  std::vector<std::pair<size_t, size_t>> ranges;
};

void validate_alignment(const SubwordAlignment& alignment, size_t subword_count);

// Elementwise mean of the final k layers.
template <typename T>
RowMatrix<T> average_last_layers(const std::vector<RowMatrix<T>>& layers, size_t k) {
  if (k == 0 || layers.size() < k)
    throw DataError("cannot average the last " + std::to_string(k) + " of " + std::to_string(layers.size()) +
                    " layers");
  const auto& first = layers[layers.size() - k];
  RowMatrix<T> sum = RowMatrix<T>::Zero(first.rows(), first.cols());
  for (size_t i = layers.size() - k; i < layers.size(); ++i) {
    if (layers[i].rows() != first.rows() || layers[i].cols() != first.cols())
      throw DataError("layer " + std::to_string(i) + " has a different shape");
    sum += layers[i];
  }
  return sum / static_cast<T>(k);
}

// One row per word: the mean of that word's subword rows.
template <typename T>
RowMatrix<T> aggregate_subwords(const RowMatrix<T>& subword_vectors, const SubwordAlignment& alignment) {
  validate_alignment(alignment, static_cast<size_t>(subword_vectors.rows()));
  RowMatrix<T> out(alignment.ranges.size(), subword_vectors.cols());
  for (size_t w = 0; w < alignment.ranges.size(); ++w) {
    auto [begin, end] = alignment.ranges[w];
    out.row(w) = subword_vectors.middleRows(begin, end - begin).colwise().sum() / static_cast<T>(end - begin);
  }
  return out;
}

}  // namespace morphkit::embed
