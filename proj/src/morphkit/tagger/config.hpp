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

#include <cstdint>
#include <string>

#include "json.hpp"

namespace morphkit::tagger {

enum class Mode { tag_only, parse_only, parse_with_predicted_tags, joint };

// Accepts both the CLI spellings (tag, parse, parse-predicted, joint) and the
// long names.
Mode parse_mode(const std::string& text);
std::string mode_name(Mode mode);

struct TaggerParserConfig {
  Mode mode = Mode::joint;

  int char_dim = 256;
  int char_gru_dim = 256;
  int word_dim = 512;
  int lstm_dim = 512;
  int lstm_layers = 3;
  // Only used in joint mode; other modes run all layers in one stack.
  int shared_lstm_layers_in_joint = 2;
  int tag_input_dim = 64;
  int arc_dim = 512;
  int label_dim = 128;

  bool use_pretrained_we = false;
  bool use_contextual_a = false;
  bool use_contextual_b = false;

  int epochs = 40;
  int batch_size = 32;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.98;
  double epsilon = 1e-8;
  bool lazy_adam = true;
  double clip_norm = 5.0;
  double dropout = 0.5;
  double word_dropout = 0.2;
  uint64_t seed = 42;

  bool has_tagger() const { return mode != Mode::parse_only; }
  bool has_parser() const { return mode != Mode::tag_only; }

  // Throws UsageError for an unknown key or a malformed value.
  void set(const std::string& key, const std::string& value);
  void validate() const;

  nlohmann::json to_json() const;
  static TaggerParserConfig from_json(const nlohmann::json& j);
};

}  // namespace morphkit::tagger
