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

#include <map>
#include <string>
#include <vector>

#include "morphkit/nn/layers.hpp"

namespace morphkit::nn {

// Character-level word embeddings: a bidirectional GRU over character
// embeddings whose final forward and backward states form the word vector.
// Each distinct spelling in a batch is encoded once.
template <typename T>
class CharWordEncoder {
 public:
  CharWordEncoder() = default;
  CharWordEncoder(ParameterStore<T>& store, const std::string& name, Index alphabet, Index char_dim, Index gru_dim,
                  Rng& rng)
      : chars_(store, name + ".chars", alphabet, char_dim, rng), gru_(store, name + ".gru", char_dim, gru_dim, rng) {}

  Index out_dim() const { return gru_.out_dim(); }

  Expr operator()(Graph<T>& g, const std::vector<const std::vector<int>*>& words) const {
    std::map<std::vector<int>, int> distinct;
    std::vector<int> rows;
    std::vector<int> flat;
    std::vector<size_t> lengths;
    for (const auto* w : words) {
      auto [it, inserted] = distinct.emplace(*w, static_cast<int>(lengths.size()));
      if (inserted) {
        flat.insert(flat.end(), w->begin(), w->end());
        lengths.push_back(w->size());
      }
      rows.push_back(it->second);
    }
    if (words.empty()) return g.constant(Matrix<T>::Zero(0, out_dim()));
    SequenceLayout layout(lengths);
    Expr encoded = gru_.final_states(g, chars_(g, flat), layout);
    return g.gather_rows(encoded, rows);
  }

 private:
  Embedding<T> chars_;
  BiGru<T> gru_;
};

}  // namespace morphkit::nn
