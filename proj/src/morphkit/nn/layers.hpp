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

#include <string>
#include <utility>
#include <vector>

#include "morphkit/nn/graph.hpp"

namespace morphkit::nn {

// Packs variable-length sequences (stored back to back as rows of one
// matrix) into step-major batches: row t*batch + b holds step t of
// sequence b. Shorter sequences are right-padded with zero rows, so padding
// never influences the states of real positions.
class SequenceLayout {
 public:
  explicit SequenceLayout(std::vector<size_t> lengths) : lengths_(std::move(lengths)) {
    size_t offset = 0;
    for (size_t len : lengths_) {
      offsets_.push_back(offset);
      offset += len;
      steps_ = std::max(steps_, len);
    }
    total_ = offset;
  }

  size_t batch() const { return lengths_.size(); }
  size_t steps() const { return steps_; }
  size_t total() const { return total_; }
  const std::vector<size_t>& lengths() const { return lengths_; }
  const std::vector<size_t>& offsets() const { return offsets_; }

  // Flat row for each step-major slot (or -1 for padding).
  std::vector<int> gather(bool reverse) const {
    std::vector<int> idx(steps_ * batch(), -1);
    for (size_t b = 0; b < batch(); ++b)
      for (size_t t = 0; t < lengths_[b]; ++t)
        idx[t * batch() + b] = static_cast<int>(offsets_[b] + (reverse ? lengths_[b] - 1 - t : t));
    return idx;
  }

  // Step-major slot for each flat row.
  std::vector<int> scatter(bool reverse) const {
    std::vector<int> idx(total_);
    for (size_t b = 0; b < batch(); ++b)
      for (size_t p = 0; p < lengths_[b]; ++p)
        idx[offsets_[b] + p] = static_cast<int>((reverse ? lengths_[b] - 1 - p : p) * batch() + b);
    return idx;
  }

  // Step-major slot of each sequence's final step (-1 for empty sequences).
  std::vector<int> last() const {
    std::vector<int> idx(batch(), -1);
    for (size_t b = 0; b < batch(); ++b)
      if (lengths_[b] > 0) idx[b] = static_cast<int>((lengths_[b] - 1) * batch() + b);
    return idx;
  }

 private:
  std::vector<size_t> lengths_;
  std::vector<size_t> offsets_;
  size_t steps_ = 0;
  size_t total_ = 0;
};

template <typename T>
class Linear {
 public:
  Linear() = default;
  Linear(ParameterStore<T>& store, const std::string& name, Index in, Index out, Rng& rng)
      : w_(&store.add(name + ".w", in, out, Init::glorot, rng)),
        b_(&store.add(name + ".b", 1, out, Init::zeros, rng)) {}

  Expr operator()(Graph<T>& g, Expr x) const { return g.add_row(g.matmul(x, g.param(*w_)), g.param(*b_)); }
  Index out_dim() const { return w_->value.cols(); }

 private:
  Parameter<T>* w_ = nullptr;
  Parameter<T>* b_ = nullptr;
};

template <typename T>
class Embedding {
 public:
  Embedding() = default;
  Embedding(ParameterStore<T>& store, const std::string& name, Index rows, Index dim, Rng& rng)
      : table_(&store.add(name, rows, dim, Init::uniform_embedding, rng, /*row_sparse=*/true)) {}

  Expr operator()(Graph<T>& g, std::vector<int> ids) const { return g.lookup(*table_, std::move(ids)); }
  Index dim() const { return table_->value.cols(); }
  Index rows() const { return table_->value.rows(); }

 private:
  Parameter<T>* table_ = nullptr;
};

// Single-direction LSTM over step-major input.
template <typename T>
class Lstm {
 public:
  Lstm() = default;
  Lstm(ParameterStore<T>& store, const std::string& name, Index in, Index hidden, Rng& rng)
      : hidden_(hidden),
        wx_(&store.add(name + ".wx", in, 4 * hidden, Init::glorot, rng)),
        wh_(&store.add(name + ".wh", hidden, 4 * hidden, Init::glorot, rng)),
        b_(&store.add(name + ".b", 1, 4 * hidden, Init::zeros, rng)) {
    // gate order: input, forget, candidate, output
    b_->value.middleCols(hidden, hidden).setOnes();
  }

  Index hidden() const { return hidden_; }

  // One step for a batch of rows; returns the new hidden and cell states.
  std::pair<Expr, Expr> step(Graph<T>& g, Expr x, Expr h, Expr c) const {
    const Index H = hidden_;
    Expr gates = g.add(g.add_row(g.matmul(x, g.param(*wx_)), g.param(*b_)), g.matmul(h, g.param(*wh_)));
    Expr i = g.sigmoid(g.slice_cols(gates, 0, H));
    Expr f = g.sigmoid(g.slice_cols(gates, H, H));
    Expr cand = g.tanh(g.slice_cols(gates, 2 * H, H));
    Expr o = g.sigmoid(g.slice_cols(gates, 3 * H, H));
    Expr c_next = g.add(g.mul(f, c), g.mul(i, cand));
    return {g.mul(o, g.tanh(c_next)), c_next};
  }

  Expr run(Graph<T>& g, Expr inputs, size_t steps, size_t batch) const {
    const Index B = static_cast<Index>(batch), H = hidden_;
    if (steps == 0 || batch == 0) return g.constant(Matrix<T>::Zero(0, H));
    Expr pre = g.add_row(g.matmul(inputs, g.param(*wx_)), g.param(*b_));
    Expr wh = g.param(*wh_);
    Expr h = g.constant(Matrix<T>::Zero(B, H));
    Expr c = g.constant(Matrix<T>::Zero(B, H));
    std::vector<Expr> outputs;
    for (size_t t = 0; t < steps; ++t) {
      Expr gates = g.add(g.slice_rows(pre, static_cast<Index>(t) * B, B), g.matmul(h, wh));
      Expr i = g.sigmoid(g.slice_cols(gates, 0, H));
      Expr f = g.sigmoid(g.slice_cols(gates, H, H));
      Expr cand = g.tanh(g.slice_cols(gates, 2 * H, H));
      Expr o = g.sigmoid(g.slice_cols(gates, 3 * H, H));
      c = g.add(g.mul(f, c), g.mul(i, cand));
      h = g.mul(o, g.tanh(c));
      outputs.push_back(h);
    }
    return g.concat_rows(outputs);
  }

 private:
  Index hidden_ = 0;
  Parameter<T>* wx_ = nullptr;
  Parameter<T>* wh_ = nullptr;
  Parameter<T>* b_ = nullptr;
};

// Single-direction GRU over step-major input.
template <typename T>
class Gru {
 public:
  Gru() = default;
  Gru(ParameterStore<T>& store, const std::string& name, Index in, Index hidden, Rng& rng)
      : hidden_(hidden),
        wx_(&store.add(name + ".wx", in, 3 * hidden, Init::glorot, rng)),
        wh_(&store.add(name + ".wh", hidden, 3 * hidden, Init::glorot, rng)),
        bx_(&store.add(name + ".bx", 1, 3 * hidden, Init::zeros, rng)),
        bh_(&store.add(name + ".bh", 1, 3 * hidden, Init::zeros, rng)) {}

  Index hidden() const { return hidden_; }

  Expr run(Graph<T>& g, Expr inputs, size_t steps, size_t batch) const {
    const Index B = static_cast<Index>(batch), H = hidden_;
    if (steps == 0 || batch == 0) return g.constant(Matrix<T>::Zero(0, H));
    Expr pre = g.add_row(g.matmul(inputs, g.param(*wx_)), g.param(*bx_));
    Expr wh = g.param(*wh_);
    Expr bh = g.param(*bh_);
    Expr h = g.constant(Matrix<T>::Zero(B, H));
    std::vector<Expr> outputs;
    for (size_t t = 0; t < steps; ++t) {
      Expr x = g.slice_rows(pre, static_cast<Index>(t) * B, B);
      Expr r_h = g.add_row(g.matmul(h, wh), bh);
      Expr r = g.sigmoid(g.add(g.slice_cols(x, 0, H), g.slice_cols(r_h, 0, H)));
      Expr z = g.sigmoid(g.add(g.slice_cols(x, H, H), g.slice_cols(r_h, H, H)));
      Expr n = g.tanh(g.add(g.slice_cols(x, 2 * H, H), g.mul(r, g.slice_cols(r_h, 2 * H, H))));
      h = g.add(g.mul(g.one_minus(z), n), g.mul(z, h));
      outputs.push_back(h);
    }
    return g.concat_rows(outputs);
  }

 private:
  Index hidden_ = 0;
  Parameter<T>* wx_ = nullptr;
  Parameter<T>* wh_ = nullptr;
  Parameter<T>* bx_ = nullptr;
  Parameter<T>* bh_ = nullptr;
};

// Runs a recurrent cell over flat sequences (rows in sequence order) and
// returns per-position outputs in the same flat order.
template <typename T, typename Cell>
Expr run_sequences(Graph<T>& g, const Cell& cell, Expr flat, const SequenceLayout& layout, bool reverse) {
  if (layout.total() == 0) return g.constant(Matrix<T>::Zero(0, cell.hidden()));
  Expr step_major = g.gather_rows(flat, layout.gather(reverse));
  Expr out = cell.run(g, step_major, layout.steps(), layout.batch());
  return g.gather_rows(out, layout.scatter(reverse));
}

template <typename T>
class BiLstm {
 public:
  BiLstm() = default;
  BiLstm(ParameterStore<T>& store, const std::string& name, Index in, Index hidden, Rng& rng)
      : forward_(store, name + ".fw", in, hidden, rng), backward_(store, name + ".bw", in, hidden, rng) {}

  Index out_dim() const { return 2 * forward_.hidden(); }

  Expr operator()(Graph<T>& g, Expr flat, const SequenceLayout& layout) const {
    if (layout.total() == 0) return g.constant(Matrix<T>::Zero(0, out_dim()));
    return g.concat_cols({run_sequences(g, forward_, flat, layout, false),
                          run_sequences(g, backward_, flat, layout, true)});
  }

 private:
  Lstm<T> forward_;
  Lstm<T> backward_;
};

template <typename T>
class BiGru {
 public:
  BiGru() = default;
  BiGru(ParameterStore<T>& store, const std::string& name, Index in, Index hidden, Rng& rng)
      : forward_(store, name + ".fw", in, hidden, rng), backward_(store, name + ".bw", in, hidden, rng) {}

  Index out_dim() const { return 2 * forward_.hidden(); }

  // Per-position outputs, forward and backward concatenated.
  Expr operator()(Graph<T>& g, Expr flat, const SequenceLayout& layout) const {
    if (layout.total() == 0) return g.constant(Matrix<T>::Zero(0, out_dim()));
    return g.concat_cols({run_sequences(g, forward_, flat, layout, false),
                          run_sequences(g, backward_, flat, layout, true)});
  }

  // One row per sequence: final forward state and final backward state.
  Expr final_states(Graph<T>& g, Expr flat, const SequenceLayout& layout) const {
    if (layout.total() == 0) return g.constant(Matrix<T>::Zero(static_cast<Index>(layout.batch()), out_dim()));
    Expr fw = forward_.run(g, g.gather_rows(flat, layout.gather(false)), layout.steps(), layout.batch());
    Expr bw = backward_.run(g, g.gather_rows(flat, layout.gather(true)), layout.steps(), layout.batch());
    return g.concat_cols({g.gather_rows(fw, layout.last()), g.gather_rows(bw, layout.last())});
  }

 private:
  Gru<T> forward_;
  Gru<T> backward_;
};

// score(d, h) = dep_d W head_h^T + u head_h^T, returned as a
// (dependents x heads) matrix.
template <typename T>
class Biaffine {
 public:
  Biaffine() = default;
  Biaffine(ParameterStore<T>& store, const std::string& name, Index dim, Rng& rng)
      : w_(&store.add(name + ".w", dim, dim, Init::glorot, rng)),
        u_(&store.add(name + ".u", 1, dim, Init::zeros, rng)) {}

  Expr operator()(Graph<T>& g, Expr heads, Expr deps) const {
    Expr bilinear = g.matmul_nt(g.matmul(deps, g.param(*w_)), heads);
    return g.add_row(bilinear, g.matmul_nt(g.param(*u_), heads));
  }

 private:
  Parameter<T>* w_ = nullptr;
  Parameter<T>* u_ = nullptr;
};

// Inverted-dropout mask: kept units are scaled by 1/(1-rate).
template <typename T>
Matrix<T> dropout_mask(Index rows, Index cols, double rate, Rng& rng) {
  Matrix<T> mask(rows, cols);
  const T keep = rate >= 1.0 ? T(0) : static_cast<T>(1.0 / (1.0 - rate));
  for (Index i = 0; i < mask.size(); ++i) mask.data()[i] = rng.bernoulli(rate) ? T(0) : keep;
  return mask;
}

template <typename T>
Expr maybe_dropout(Graph<T>& g, Expr x, double rate, Rng* rng) {
  if (!g.recording() || rate <= 0.0 || rng == nullptr) return x;
  const auto& v = g.value(x);
  return g.dropout(x, dropout_mask<T>(v.rows(), v.cols(), rate, *rng));
}

// Replaces each id independently with unknown_id with probability rate.
inline std::vector<int> word_dropout(std::vector<int> ids, double rate, int unknown_id, Rng& rng) {
  if (rate < 0.0 || rate > 1.0) throw UsageError("word dropout rate outside [0, 1]");
  if (rate == 0.0) return ids;
  for (auto& id : ids)
    if (rng.bernoulli(rate)) id = unknown_id;
  return ids;
}

template <typename T>
Matrix<T> softmax_rows(const Matrix<T>& logits) {
  Matrix<T> out(logits.rows(), logits.cols());
  for (Index r = 0; r < logits.rows(); ++r) {
    const T mx = logits.row(r).maxCoeff();
    out.row(r) = (logits.row(r).array() - mx).exp().matrix();
    out.row(r) /= out.row(r).sum();
  }
  return out;
}

}  // namespace morphkit::nn
