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

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "morphkit/conllu/conllu.hpp"
#include "morphkit/embed/embeddings.hpp"
#include "morphkit/ner/entities.hpp"
#include "morphkit/nn/checkpoint.hpp"

namespace morphkit::ner {

struct NerConfig {
  int form_dim = 256;
  int lemma_dim = 256;
  int char_dim = 128;
  int char_gru_dim = 128;
  // Expected pretrained vector size; the loaded table decides the actual one.
  int pretrained_we_dim = 300;
  int encoder_dim = 256;
  int decoder_dim = 256;
  int label_dim = 64;
  int max_labels_per_token = 8;

  bool use_pretrained_we = false;
  bool use_contextual_a = false;
  bool use_contextual_b = false;

  int epochs = 20;
  int batch_size = 8;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.98;
  double epsilon = 1e-8;
  bool lazy_adam = true;
  double clip_norm = 5.0;
  double dropout = 0.5;
  double word_dropout = 0.2;
  uint64_t seed = 42;

  void set(const std::string& key, const std::string& value);
  void validate() const;
  nlohmann::json to_json() const;
  static NerConfig from_json(const nlohmann::json& j);
};

struct NerEpochReport {
  int epoch = 0;
  double loss = 0.0;          // mean per-step training loss
  double dev_f1 = -1.0;       // type-level F1 in percent, -1 without a dev set
};

class NerModel;

struct NerTrainOptions {
  const conllu::Document* dev = nullptr;
  const std::vector<SentenceEntities>* dev_entities = nullptr;
  embed::ContextualInputs train_inputs;
  embed::ContextualInputs dev_inputs;
  const embed::WordEmbeddingTable* pretrained = nullptr;
  // Called after each epoch; returning false stops training.
  std::function<bool(const NerEpochReport&, const NerModel&)> on_epoch;
};

// Encoder: bi-LSTM over form, lemma, one-hot UPOS and character-level
// inputs. Decoder: an LSTM that reads the encoder state of the current word
// only (hard attention) and the previous label, emitting labels until the
// end-of-word symbol moves it to the next word.
class NerModel {
 public:
  NerModel(NerModel&&) noexcept;
  NerModel& operator=(NerModel&&) noexcept;
  ~NerModel();

  static NerModel train(const conllu::Document& corpus, const std::vector<SentenceEntities>& entities,
                        const NerConfig& config, const NerTrainOptions& options = {});

  // Raw greedy decoder output, without the end-of-word symbols.
  std::vector<LinearizedLabels> predict_labels(const conllu::Document& doc,
                                               const embed::ContextualInputs& inputs = {}) const;
  std::vector<SentenceEntities> predict(const conllu::Document& doc, const embed::ContextualInputs& inputs = {}) const;

  nn::Checkpoint to_checkpoint() const;
  static NerModel from_checkpoint(const nn::Checkpoint& checkpoint);

  const NerConfig& config() const;
  const std::vector<std::string>& labels() const;

 private:
  struct Impl;
  explicit NerModel(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

}  // namespace morphkit::ner
