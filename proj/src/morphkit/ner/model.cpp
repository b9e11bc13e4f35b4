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
#include "morphkit/ner/model.hpp"

#include <algorithm>
#include <cmath>

#include "morphkit/common/log.hpp"
#include "morphkit/common/options.hpp"
#include "morphkit/common/unicode.hpp"
#include "morphkit/ner/scoring.hpp"
#include "morphkit/nn/adam.hpp"
#include "morphkit/nn/char_encoder.hpp"
#include "morphkit/tagger/vocabulary.hpp"

namespace morphkit::ner {

namespace {

using nn::Expr;
using nn::Index;
using Graph = nn::Graph<float>;
using Mat = nn::Matrix<float>;
using tagger::Vocabulary;

constexpr const char* kFormat = "morphkit-ner";
constexpr const char* kUnknown = "<unk>";
constexpr int kBos = 0;
constexpr int kEow = 1;

template <typename Config, typename Visitor>
void visit_fields(Config& c, Visitor&& v) {
  v("form_dim", c.form_dim);
  v("lemma_dim", c.lemma_dim);
  v("char_dim", c.char_dim);
  v("char_gru_dim", c.char_gru_dim);
  v("pretrained_we_dim", c.pretrained_we_dim);
  v("encoder_dim", c.encoder_dim);
  v("decoder_dim", c.decoder_dim);
  v("label_dim", c.label_dim);
  v("max_labels_per_token", c.max_labels_per_token);
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

struct SentenceData {
  std::vector<int> forms, lemmas, upos;
  std::vector<std::vector<int>> chars;
  Mat pretrained, contextual_a, contextual_b;
  // Teacher-forcing targets: per decoder step, the word it reads and the
  // label it must emit (the end-of-word symbol included).
  std::vector<int> step_words, step_targets;
  size_t size() const { return forms.size(); }
};

struct InputDims {
  Index pretrained = 0, contextual_a = 0, contextual_b = 0;
};

}  // namespace

void NerConfig::set(const std::string& key, const std::string& value) {
  bool found = false;
  visit_fields(*this, [&](const char* name, auto& field) {
    if (key != name) return;
    found = true;
    assign_option(key, value, field);
  });
  if (!found) throw UsageError("unknown NER option '" + key + "'");
}

void NerConfig::validate() const {
  for (int v : {form_dim, lemma_dim, char_dim, char_gru_dim, encoder_dim, decoder_dim, label_dim,
                max_labels_per_token, epochs, batch_size})
    if (v <= 0) throw UsageError("NER dimensions, label cap, epochs and batch size must be positive");
  if (dropout < 0.0 || dropout >= 1.0) throw UsageError("dropout must be in [0, 1)");
  if (word_dropout < 0.0 || word_dropout > 1.0) throw UsageError("word_dropout must be in [0, 1]");
  if (!(learning_rate > 0.0) || !(clip_norm > 0.0) || !(epsilon > 0.0))
    throw UsageError("learning_rate, clip_norm and epsilon must be positive");
  if (beta1 < 0.0 || beta1 >= 1.0 || beta2 < 0.0 || beta2 >= 1.0) throw UsageError("Adam betas must be in [0, 1)");
}

nlohmann::json NerConfig::to_json() const {
  nlohmann::json j;
  visit_fields(*this, [&](const char* name, const auto& field) { j[name] = field; });
  return j;
}

NerConfig NerConfig::from_json(const nlohmann::json& j) {
  NerConfig c;
  visit_fields(c, [&](const char* name, auto& field) { field = j.at(name).get<std::decay_t<decltype(field)>>(); });
  return c;
}

struct NerModel::Impl {
  NerConfig cfg;
  Vocabulary forms, lemmas, upos, chars, labels;
  embed::WordEmbeddingTable pretrained;
  InputDims dims;
  nn::ParameterStore<float> params;
  nn::Embedding<float> form_emb, lemma_emb, label_emb;
  nn::CharWordEncoder<float> char_enc;
  nn::BiLstm<float> encoder;
  nn::Lstm<float> decoder;
  nn::Linear<float> output;

  void build() {
    Rng rng(cfg.seed, "init/ner");
    form_emb = nn::Embedding<float>(params, "form_emb", static_cast<Index>(forms.size()), cfg.form_dim, rng);
    lemma_emb = nn::Embedding<float>(params, "lemma_emb", static_cast<Index>(lemmas.size()), cfg.lemma_dim, rng);
    char_enc = nn::CharWordEncoder<float>(params, "char", static_cast<Index>(chars.size()), cfg.char_dim,
                                          cfg.char_gru_dim, rng);
    const Index in = cfg.form_dim + cfg.lemma_dim + static_cast<Index>(upos.size()) + char_enc.out_dim() +
                     dims.pretrained + dims.contextual_a + dims.contextual_b;
    encoder = nn::BiLstm<float>(params, "encoder", in, cfg.encoder_dim, rng);
    label_emb = nn::Embedding<float>(params, "label_emb", static_cast<Index>(labels.size()), cfg.label_dim, rng);
    decoder = nn::Lstm<float>(params, "decoder", encoder.out_dim() + cfg.label_dim, cfg.decoder_dim, rng);
    output = nn::Linear<float>(params, "output", cfg.decoder_dim + encoder.out_dim(),
                               static_cast<Index>(labels.size()), rng);
  }

  std::vector<SentenceData> prepare(const conllu::Document& doc, const embed::ContextualInputs& inputs,
                                    const std::vector<SentenceEntities>* entities) const {
    auto check = [&](const embed::ContextualVectors* cv, Index dim, const char* name) {
      if (dim == 0) return;
      if (!cv) throw UsageError(std::string("the model needs contextual vectors ") + name);
      if (static_cast<Index>(cv->dim) != dim || cv->per_sentence.size() != doc.sentences.size())
        throw DataError(std::string("contextual vectors ") + name + " do not match the model or the document");
    };
    check(inputs.a, dims.contextual_a, "A");
    check(inputs.b, dims.contextual_b, "B");
    std::vector<SentenceData> data(doc.sentences.size());
    for (size_t i = 0; i < doc.sentences.size(); ++i) {
      const auto& s = doc.sentences[i];
      auto& sd = data[i];
      const Index n = static_cast<Index>(s.size());
      if (dims.pretrained) sd.pretrained.resize(n, dims.pretrained);
      for (Index k = 0; k < n; ++k) {
        const auto& t = s.tokens[static_cast<size_t>(k)];
        sd.forms.push_back(forms.id_or(t.form, 0));
        sd.lemmas.push_back(lemmas.id_or(t.lemma, 0));
        sd.upos.push_back(upos.id_or(t.upos, 0));
        std::vector<int> ids;
        for (const auto& c : unicode::characters(t.form)) ids.push_back(chars.id_or(c, 0));
        sd.chars.push_back(std::move(ids));
        if (dims.pretrained) sd.pretrained.row(k) = pretrained.lookup(t.form);
      }
      if (dims.contextual_a) sd.contextual_a = inputs.a->per_sentence[i];
      if (dims.contextual_b) sd.contextual_b = inputs.b->per_sentence[i];
      if (entities) {
        const auto encoded = encode_entities(s.size(), (*entities)[i]);
        for (size_t w = 0; w < encoded.size(); ++w) {
          for (const auto& label : encoded[w]) {
            sd.step_words.push_back(static_cast<int>(w));
            sd.step_targets.push_back(labels.id_or(label, -1));
          }
          sd.step_words.push_back(static_cast<int>(w));
          sd.step_targets.push_back(kEow);
        }
      }
    }
    return data;
  }

  // Encoder states, one row per word of the batch (sentence order).
  Expr encode(Graph& g, const std::vector<const SentenceData*>& batch, Rng* dropout_rng, Rng* word_rng) const {
    std::vector<size_t> lengths;
    std::vector<int> form_ids, lemma_ids;
    std::vector<const std::vector<int>*> char_ids;
    for (const auto* s : batch) {
      lengths.push_back(s->size());
      form_ids.insert(form_ids.end(), s->forms.begin(), s->forms.end());
      lemma_ids.insert(lemma_ids.end(), s->lemmas.begin(), s->lemmas.end());
      for (const auto& c : s->chars) char_ids.push_back(&c);
    }
    const nn::SequenceLayout layout(lengths);
    if (word_rng) {
      form_ids = nn::word_dropout(std::move(form_ids), cfg.word_dropout, 0, *word_rng);
      lemma_ids = nn::word_dropout(std::move(lemma_ids), cfg.word_dropout, 0, *word_rng);
    }
    Mat one_hot = Mat::Zero(static_cast<Index>(layout.total()), static_cast<Index>(upos.size()));
    Index row = 0;
    for (const auto* s : batch)
      for (int u : s->upos) one_hot(row++, u) = 1.0f;
    std::vector<Expr> parts{form_emb(g, form_ids), lemma_emb(g, lemma_ids), g.constant(std::move(one_hot)),
                            char_enc(g, char_ids)};
    auto stacked = [&](Mat SentenceData::*field, Index dim) {
      Mat m(static_cast<Index>(layout.total()), dim);
      for (size_t b = 0; b < batch.size(); ++b)
        if (batch[b]->size()) m.middleRows(static_cast<Index>(layout.offsets()[b]), (batch[b]->*field).rows()) = batch[b]->*field;
      parts.push_back(g.constant(std::move(m)));
    };
    if (dims.pretrained) stacked(&SentenceData::pretrained, dims.pretrained);
    if (dims.contextual_a) stacked(&SentenceData::contextual_a, dims.contextual_a);
    if (dims.contextual_b) stacked(&SentenceData::contextual_b, dims.contextual_b);
    Expr x = nn::maybe_dropout(g, g.concat_cols(parts), cfg.dropout, dropout_rng);
    return nn::maybe_dropout(g, encoder(g, x, layout), cfg.dropout, dropout_rng);
  }

  Expr loss(Graph& g, const std::vector<const SentenceData*>& batch, Rng* dropout_rng, Rng* word_rng,
            size_t& steps) const {
    Expr enc = encode(g, batch, dropout_rng, word_rng);
    std::vector<int> rows, previous, targets;
    std::vector<size_t> lengths;
    size_t offset = 0;
    for (const auto* s : batch) {
      int prev = kBos;
      for (size_t k = 0; k < s->step_words.size(); ++k) {
        rows.push_back(static_cast<int>(offset) + s->step_words[k]);
        previous.push_back(prev);
        targets.push_back(s->step_targets[k]);
        prev = s->step_targets[k];
      }
      lengths.push_back(s->step_words.size());
      offset += s->size();
    }
    steps = targets.size();
    const nn::SequenceLayout layout(lengths);
    Expr attended = g.gather_rows(enc, rows);
    Expr states = nn::run_sequences(g, decoder, g.concat_cols({attended, label_emb(g, previous)}), layout, false);
    Expr logits = output(g, g.concat_cols({states, attended}));
    return g.scale(g.softmax_cross_entropy(logits, targets), 1.0f / static_cast<float>(std::max<size_t>(steps, 1)));
  }

  std::vector<LinearizedLabels> decode(const std::vector<const SentenceData*>& batch) const {
    Graph encoder_graph(false);
    const Mat enc = encoder_graph.value(encode(encoder_graph, batch, nullptr, nullptr));
    const size_t B = batch.size();
    std::vector<LinearizedLabels> out(B);
    std::vector<size_t> offset(B), word(B, 0), emitted(B, 0);
    std::vector<int> previous(B, kBos);
    size_t active = 0;
    for (size_t b = 0, o = 0; b < B; o += batch[b]->size(), ++b) {
      offset[b] = o;
      out[b].resize(batch[b]->size());
      if (batch[b]->size()) ++active;
    }
    Mat h = Mat::Zero(static_cast<Index>(B), cfg.decoder_dim);
    Mat c = Mat::Zero(static_cast<Index>(B), cfg.decoder_dim);
    while (active > 0) {
      Graph g(false);
      std::vector<int> rows(B);
      for (size_t b = 0; b < B; ++b)
        rows[b] = static_cast<int>(offset[b] + std::min(word[b], std::max<size_t>(batch[b]->size(), 1) - 1));
      Expr attended = g.gather_rows(g.constant(enc), rows);
      auto [hn, cn] = decoder.step(g, g.concat_cols({attended, label_emb(g, previous)}), g.constant(h), g.constant(c));
      const Mat& logits = g.value(output(g, g.concat_cols({hn, attended})));
      h = g.value(hn);
      c = g.value(cn);
      for (size_t b = 0; b < B; ++b) {
        if (word[b] >= batch[b]->size()) continue;
        int label = kEow;
        if (emitted[b] < static_cast<size_t>(cfg.max_labels_per_token)) {
          label = kEow;
          for (Index k = kEow + 1; k < logits.cols(); ++k)
            if (logits(static_cast<Index>(b), k) > logits(static_cast<Index>(b), label)) label = static_cast<int>(k);
        }
        previous[b] = label;
        if (label == kEow) {
          emitted[b] = 0;
          if (++word[b] == batch[b]->size()) --active;
        } else {
          out[b][word[b]].push_back(labels.item(label));
          ++emitted[b];
        }
      }
    }
    return out;
  }

  std::vector<std::vector<const SentenceData*>> batches(const std::vector<SentenceData>& data,
                                                        const std::vector<size_t>& order) const {
    std::vector<std::vector<const SentenceData*>> out;
    const size_t size = static_cast<size_t>(cfg.batch_size);
    for (size_t start = 0; start < order.size(); start += size) {
      std::vector<const SentenceData*> batch;
      for (size_t k = start; k < std::min(order.size(), start + size); ++k) batch.push_back(&data[order[k]]);
      out.push_back(std::move(batch));
    }
    return out;
  }

  std::vector<LinearizedLabels> predict_labels(const conllu::Document& doc,
                                               const embed::ContextualInputs& inputs) const {
    const auto data = prepare(doc, inputs, nullptr);
    std::vector<size_t> order(data.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<LinearizedLabels> out;
    for (const auto& batch : batches(data, order))
      for (auto& labels_of_sentence : decode(batch)) out.push_back(std::move(labels_of_sentence));
    return out;
  }
};

NerModel::NerModel(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
NerModel::NerModel(NerModel&&) noexcept = default;
NerModel& NerModel::operator=(NerModel&&) noexcept = default;
NerModel::~NerModel() = default;

const NerConfig& NerModel::config() const { return impl_->cfg; }
const std::vector<std::string>& NerModel::labels() const { return impl_->labels.items(); }

std::vector<LinearizedLabels> NerModel::predict_labels(const conllu::Document& doc,
                                                       const embed::ContextualInputs& inputs) const {
  return impl_->predict_labels(doc, inputs);
}

std::vector<SentenceEntities> NerModel::predict(const conllu::Document& doc,
                                                const embed::ContextualInputs& inputs) const {
  std::vector<SentenceEntities> out;
  for (const auto& labels : impl_->predict_labels(doc, inputs)) out.push_back(decode_entities(labels));
  return out;
}

NerModel NerModel::train(const conllu::Document& corpus, const std::vector<SentenceEntities>& entities,
                         const NerConfig& config, const NerTrainOptions& options) {
  config.validate();
  if (corpus.sentences.empty()) throw DataError("NER training corpus is empty");
  if (entities.size() != corpus.sentences.size())
    throw DataError("entity file has " + std::to_string(entities.size()) + " sentences, the corpus has " +
                    std::to_string(corpus.sentences.size()));
  if (options.dev && (!options.dev_entities || options.dev_entities->size() != options.dev->sentences.size()))
    throw DataError("dev entities are missing or do not match the dev corpus");

  auto impl = std::make_unique<Impl>();
  Impl& m = *impl;
  m.cfg = config;
  m.cfg.use_pretrained_we = options.pretrained != nullptr;
  m.cfg.use_contextual_a = options.train_inputs.a != nullptr;
  m.cfg.use_contextual_b = options.train_inputs.b != nullptr;
  if (options.pretrained) {
    m.pretrained = *options.pretrained;
    m.dims.pretrained = static_cast<Index>(options.pretrained->dim());
    m.cfg.pretrained_we_dim = static_cast<int>(options.pretrained->dim());
  }
  if (m.cfg.use_contextual_a) m.dims.contextual_a = static_cast<Index>(options.train_inputs.a->dim);
  if (m.cfg.use_contextual_b) m.dims.contextual_b = static_cast<Index>(options.train_inputs.b->dim);

  m.forms.add(kUnknown);
  m.lemmas.add(kUnknown);
  m.upos.add(kUnknown);
  m.chars.add(kUnknown);
  m.labels.add("<bos>");
  m.labels.add("<eow>");
  m.labels.add(kOutside);
  for (size_t i = 0; i < corpus.sentences.size(); ++i) {
    const auto& s = corpus.sentences[i];
    for (const auto& t : s.tokens) {
      m.forms.add(t.form);
      m.lemmas.add(t.lemma);
      m.upos.add(t.upos);
      for (const auto& c : unicode::characters(t.form)) m.chars.add(c);
    }
    try {
      for (const auto& labels : encode_entities(s.size(), entities[i]))
        for (const auto& l : labels) m.labels.add(l);
    } catch (const DataError& e) {
      throw DataError("sentence " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  m.build();

  NerModel model(std::move(impl));
  const auto data = m.prepare(corpus, options.train_inputs, &entities);
  nn::Adam<float> adam(nn::AdamConfig{m.cfg.learning_rate, m.cfg.beta1, m.cfg.beta2, m.cfg.epsilon, m.cfg.lazy_adam});
  Rng shuffle_rng(m.cfg.seed, "shuffle/ner");
  Rng dropout_rng(m.cfg.seed, "dropout/ner");
  Rng word_rng(m.cfg.seed, "word-dropout/ner");
  std::vector<size_t> order(data.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  const auto params = m.params.all();

  for (int epoch = 1; epoch <= m.cfg.epochs; ++epoch) {
    for (size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[shuffle_rng.below(i)]);
    double loss_sum = 0.0;
    size_t step_total = 0;
    for (const auto& batch : m.batches(data, order)) {
      Graph g(true);
      size_t steps = 0;
      const Expr loss = m.loss(g, batch, &dropout_rng, &word_rng, steps);
      const double value = g.scalar(loss);
      if (!std::isfinite(value)) throw NumericError("non-finite NER training loss in epoch " + std::to_string(epoch));
      g.backward(loss);
      nn::clip_global_norm(params, m.cfg.clip_norm);
      adam.step(params);
      m.params.zero_grad();
      loss_sum += value * static_cast<double>(steps);
      step_total += steps;
    }
    NerEpochReport report;
    report.epoch = epoch;
    report.loss = step_total ? loss_sum / static_cast<double>(step_total) : 0.0;
    if (options.dev)
      report.dev_f1 = cnec_f1(*options.dev_entities, model.predict(*options.dev, options.dev_inputs), CnecLevel::types).f1();
    logger().info("ner epoch {} loss {:.6f}{}", epoch, report.loss,
                  options.dev ? " dev_f1 " + std::to_string(report.dev_f1) : std::string());
    if (options.on_epoch && !options.on_epoch(report, model)) break;
  }
  return model;
}

nn::Checkpoint NerModel::to_checkpoint() const {
  const Impl& m = *impl_;
  nn::Checkpoint ck;
  ck.hyperparameters = m.cfg.to_json();
  ck.model = {{"format", kFormat},
              {"version", 1},
              {"input_dims",
               {{"pretrained", m.dims.pretrained}, {"contextual_a", m.dims.contextual_a}, {"contextual_b", m.dims.contextual_b}}},
              {"vocab",
               {{"forms", m.forms.to_json()},
                {"lemmas", m.lemmas.to_json()},
                {"upos", m.upos.to_json()},
                {"chars", m.chars.to_json()},
                {"labels", m.labels.to_json()}}}};
  if (m.dims.pretrained) {
    ck.model["pretrained_words"] = m.pretrained.words();
    const auto& vec = m.pretrained.vectors();
    ck.tensors.push_back({"pretrained.vectors",
                          {static_cast<size_t>(vec.rows()), static_cast<size_t>(vec.cols())},
                          std::vector<float>(vec.data(), vec.data() + vec.size())});
  }
  nn::export_parameters(m.params, "ner/", ck);
  return ck;
}

NerModel NerModel::from_checkpoint(const nn::Checkpoint& ck) {
  if (ck.model.value("format", "") != kFormat) throw DataError("checkpoint is not a NER model");
  auto impl = std::make_unique<Impl>();
  Impl& m = *impl;
  try {
    m.cfg = NerConfig::from_json(ck.hyperparameters);
    const auto& v = ck.model.at("vocab");
    m.forms = Vocabulary::from_json(v.at("forms"));
    m.lemmas = Vocabulary::from_json(v.at("lemmas"));
    m.upos = Vocabulary::from_json(v.at("upos"));
    m.chars = Vocabulary::from_json(v.at("chars"));
    m.labels = Vocabulary::from_json(v.at("labels"));
    const auto& dims = ck.model.at("input_dims");
    m.dims.pretrained = dims.at("pretrained").get<Index>();
    m.dims.contextual_a = dims.at("contextual_a").get<Index>();
    m.dims.contextual_b = dims.at("contextual_b").get<Index>();
    if (m.dims.pretrained) {
      const auto words = ck.model.at("pretrained_words").get<std::vector<std::string>>();
      const auto* t = ck.find("pretrained.vectors");
      if (!t || t->shape.size() != 2 || t->shape[0] != words.size() ||
          t->shape[1] != static_cast<size_t>(m.dims.pretrained))
        throw DataError("checkpoint pretrained embeddings are missing or malformed");
      embed::RowMatrix<float> vec(static_cast<Index>(t->shape[0]), static_cast<Index>(t->shape[1]));
      std::copy(t->data.begin(), t->data.end(), vec.data());
      m.pretrained = embed::WordEmbeddingTable(words, std::move(vec));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed NER checkpoint header: ") + e.what());
  }
  if (m.labels.size() < 3 || m.labels.item(kBos) != "<bos>" || m.labels.item(kEow) != "<eow>")
    throw DataError("NER checkpoint label vocabulary is malformed");
  m.build();
  nn::import_parameters(m.params, "ner/", ck);
  return NerModel(std::move(impl));
}

}  // namespace morphkit::ner
