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
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "morphkit/conllu/conllu.hpp"
#include "morphkit/embed/embeddings.hpp"
#include "morphkit/lemma/lemma_rules.hpp"
#include "morphkit/nn/checkpoint.hpp"
#include "morphkit/tagger/config.hpp"
#include "morphkit/tagger/dictionary.hpp"

namespace morphkit::tagger {

using ExtraInputs = embed::ContextualInputs;

struct EpochReport {
  // parse_with_predicted_tags trains the tagger (stage 0) before the parser
  // (stage 1); all other modes have a single stage.
  int stage = 0;
  int epoch = 0;
  double loss = 0.0;  // mean per-token training loss
  std::map<std::string, double> dev_metrics;
};

class TaggerParser;

struct TrainOptions {
  const conllu::Document* dev = nullptr;
  ExtraInputs train_inputs;
  ExtraInputs dev_inputs;
  const embed::WordEmbeddingTable* pretrained = nullptr;
  // Used for dev predictions and for the predicted tags fed to the parser.
  const MorphDictionary* dictionary = nullptr;
  // Called after each epoch; returning false ends the current stage early.
  std::function<bool(const EpochReport&, const TaggerParser&)> on_epoch;
};

class TaggerParser {
 public:
  TaggerParser(TaggerParser&&) noexcept;
  TaggerParser& operator=(TaggerParser&&) noexcept;
  ~TaggerParser();

  static TaggerParser train(const conllu::Document& corpus, const TaggerParserConfig& config,
                            const TrainOptions& options = {});

  // Fills upos/xpos/feats/lemma when the model tags and head/deprel when it
  // parses; every other column is copied from the input.
  conllu::Document predict(const conllu::Document& doc, const ExtraInputs& inputs = {},
                           const MorphDictionary* dictionary = nullptr) const;

  nn::Checkpoint to_checkpoint() const;
  static TaggerParser from_checkpoint(const nn::Checkpoint& checkpoint);

  const TaggerParserConfig& config() const;
  const std::vector<lemma::LemmaRule>& rules() const;
  std::vector<std::string> parameter_names() const;
  size_t parameter_count() const;

 private:
  struct Impl;
  explicit TaggerParser(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

}  // namespace morphkit::tagger
