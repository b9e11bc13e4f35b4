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
#include "morphkit/tagger/config.hpp"

#include <map>

#include "morphkit/common/error.hpp"
#include "morphkit/common/options.hpp"

namespace morphkit::tagger {

namespace {

// Field table shared by set(), to_json() and from_json().
template <typename Config, typename Visitor>
void visit_fields(Config& c, Visitor&& v) {
  v("char_dim", c.char_dim);
  v("char_gru_dim", c.char_gru_dim);
  v("word_dim", c.word_dim);
  v("lstm_dim", c.lstm_dim);
  v("lstm_layers", c.lstm_layers);
  v("shared_lstm_layers_in_joint", c.shared_lstm_layers_in_joint);
  v("tag_input_dim", c.tag_input_dim);
  v("arc_dim", c.arc_dim);
  v("label_dim", c.label_dim);
  v("use_pretrained_we", c.use_pretrained_we);
  v("use_contextual_a", c.use_contextual_a);
  v("use_contextual_b", c.use_contextual_b);
  v("epochs", c.epochs);
  v("batch_size", c.batch_size);
  v("learning_rate", c.learning_rate);
  v("beta1", c.beta1);
  v("beta2", c.beta2);
  v("epsilon", c.epsilon);
  v("lazy_adam", c.lazy_adam);
  v("clip_norm", c.clip_norm);
  v("dropout", c.dropout);
  v("word_dropout", c.word_dropout);
  v("seed", c.seed);
}

}  // namespace

Mode parse_mode(const std::string& text) {
  static const std::map<std::string, Mode> names{
      {"tag", Mode::tag_only},         {"tag_only", Mode::tag_only},
      {"parse", Mode::parse_only},     {"parse_only", Mode::parse_only},
      {"parse-predicted", Mode::parse_with_predicted_tags},
      {"parse_with_predicted_tags", Mode::parse_with_predicted_tags},
      {"joint", Mode::joint}};
  auto it = names.find(text);
  if (it == names.end()) throw UsageError("unknown mode '" + text + "' (tag, parse, parse-predicted, joint)");
  return it->second;
}

std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::tag_only:
      return "tag_only";
    case Mode::parse_only:
      return "parse_only";
    case Mode::parse_with_predicted_tags:
      return "parse_with_predicted_tags";
    case Mode::joint:
      return "joint";
  }
  return "joint";
}

void TaggerParserConfig::set(const std::string& key, const std::string& value) {
  if (key == "mode") {
    mode = parse_mode(value);
    return;
  }
  bool found = false;
  visit_fields(*this, [&](const char* name, auto& field) {
    if (key != name) return;
    found = true;
    assign_option(key, value, field);
  });
  if (!found) throw UsageError("unknown tagger option '" + key + "'");
}

void TaggerParserConfig::validate() const {
  auto positive = [](const char* name, long v) {
    if (v <= 0) throw UsageError(std::string(name) + " must be positive");
  };
  positive("char_dim", char_dim);
  positive("char_gru_dim", char_gru_dim);
  positive("word_dim", word_dim);
  positive("lstm_dim", lstm_dim);
  positive("lstm_layers", lstm_layers);
  positive("tag_input_dim", tag_input_dim);
  positive("arc_dim", arc_dim);
  positive("label_dim", label_dim);
  positive("epochs", epochs);
  positive("batch_size", batch_size);
  if (shared_lstm_layers_in_joint < 1 || shared_lstm_layers_in_joint >= lstm_layers)
    throw UsageError("shared_lstm_layers_in_joint must be in [1, lstm_layers)");
  if (dropout < 0.0 || dropout >= 1.0) throw UsageError("dropout must be in [0, 1)");
  if (word_dropout < 0.0 || word_dropout > 1.0) throw UsageError("word_dropout must be in [0, 1]");
  if (!(learning_rate > 0.0) || !(clip_norm > 0.0) || !(epsilon > 0.0))
    throw UsageError("learning_rate, clip_norm and epsilon must be positive");
  if (beta1 < 0.0 || beta1 >= 1.0 || beta2 < 0.0 || beta2 >= 1.0) throw UsageError("Adam betas must be in [0, 1)");
}

nlohmann::json TaggerParserConfig::to_json() const {
  nlohmann::json j;
  j["mode"] = mode_name(mode);
  visit_fields(*this, [&](const char* name, const auto& field) { j[name] = field; });
  return j;
}

TaggerParserConfig TaggerParserConfig::from_json(const nlohmann::json& j) {
  TaggerParserConfig c;
  c.mode = parse_mode(j.at("mode").get<std::string>());
  visit_fields(c, [&](const char* name, auto& field) { field = j.at(name).get<std::decay_t<decltype(field)>>(); });
  return c;
}

}  // namespace morphkit::tagger
