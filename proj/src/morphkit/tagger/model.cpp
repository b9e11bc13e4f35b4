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
#include "morphkit/tagger/model.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "morphkit/common/log.hpp"
#include "morphkit/common/unicode.hpp"
#include "morphkit/eval/metrics.hpp"
#include "morphkit/nn/adam.hpp"
#include "morphkit/nn/char_encoder.hpp"
#include "morphkit/tagger/mst.hpp"
#include "morphkit/tagger/vocabulary.hpp"

namespace morphkit::tagger {

namespace {

using nn::Expr;
using nn::Index;
using Graph = nn::Graph<float>;
using Mat = nn::Matrix<float>;

constexpr const char* kFormat = "morphkit-tagger-parser";
constexpr const char* kUnknown = "<unk>";

struct Vocabularies {
  Vocabulary forms, chars, upos, xpos, feats, rules, deprels, lemmas;

  nlohmann::json to_json() const {
    return {{"forms", forms.to_json()}, {"chars", chars.to_json()},   {"upos", upos.to_json()},
            {"xpos", xpos.to_json()},   {"feats", feats.to_json()},   {"rules", rules.to_json()},
            {"deprels", deprels.to_json()}, {"lemmas", lemmas.to_json()}};
  }
  static Vocabularies from_json(const nlohmann::json& j) {
    Vocabularies v;
    v.forms = Vocabulary::from_json(j.at("forms"));
    v.chars = Vocabulary::from_json(j.at("chars"));
    v.upos = Vocabulary::from_json(j.at("upos"));
    v.xpos = Vocabulary::from_json(j.at("xpos"));
    v.feats = Vocabulary::from_json(j.at("feats"));
    v.rules = Vocabulary::from_json(j.at("rules"));
    v.deprels = Vocabulary::from_json(j.at("deprels"));
    v.lemmas = Vocabulary::from_json(j.at("lemmas"));
    return v;
  }
};

// Model-ready view of one sentence. Gold ids are -1 when absent.
struct SentenceData {
  std::vector<std::string> forms;
  std::vector<int> words;
  std::vector<std::vector<int>> chars;
  std::vector<int> upos, xpos, feats, rules, heads, deprels;
  // Predicted tags fed to the parser in parse_with_predicted_tags mode.
  std::vector<int> in_upos, in_xpos, in_feats, in_lemmas;
  Mat pretrained, contextual_a, contextual_b;

  size_t size() const { return forms.size(); }
};

struct InputDims {
  Index pretrained = 0, contextual_a = 0, contextual_b = 0;
};

struct NetworkShape {
  bool tagger = false;
  bool parser = false;
  bool tag_inputs = false;
};

struct TokenTags {
  int upos = 0, xpos = 0, feats = 0;
  std::string xpos_text, lemma;
};

// Embeddings -> bi-LSTM stack -> heads. In joint mode the first layers are
// shared and the tagger and parser each own the remaining layers. Layers
// after the first add their input back (residual connection).
class Network {
 public:
  struct Output {
    Expr upos, xpos, feats, rules;
    Expr arcs;  // tokens x (tokens + 1); column 0 is the root
    Expr label_dep, label_head;
  };

  Network(const TaggerParserConfig& cfg, const Vocabularies& v, NetworkShape shape, InputDims dims, Rng& rng)
      : cfg_(cfg), shape_(shape), dims_(dims) {
    words_ = nn::Embedding<float>(params, "word_emb", static_cast<Index>(v.forms.size()), cfg.word_dim, rng);
    chars_ = nn::CharWordEncoder<float>(params, "char", static_cast<Index>(v.chars.size()), cfg.char_dim,
                                        cfg.char_gru_dim, rng);
    Index in = cfg.word_dim + chars_.out_dim() + dims.pretrained + dims.contextual_a + dims.contextual_b;
    if (shape.tag_inputs) {
      auto tag_emb = [&](const char* name, size_t rows) {
        return nn::Embedding<float>(params, name, static_cast<Index>(rows + 1), cfg.tag_input_dim, rng);
      };
      in_upos_ = tag_emb("in_upos", v.upos.size());
      in_xpos_ = tag_emb("in_xpos", v.xpos.size());
      in_feats_ = tag_emb("in_feats", v.feats.size());
      in_lemmas_ = tag_emb("in_lemma", v.lemmas.size());
      in += 4 * cfg.tag_input_dim;
    }
    const bool joint = shape.tagger && shape.parser;
    const int shared = joint ? cfg.shared_lstm_layers_in_joint : cfg.lstm_layers;
    for (int i = 0; i < shared; ++i) {
      shared_.emplace_back(params, "lstm" + std::to_string(i), i == 0 ? in : 2 * cfg.lstm_dim, cfg.lstm_dim, rng);
    }
    for (int i = shared; i < cfg.lstm_layers; ++i) {
      tagger_branch_.emplace_back(params, "tagger.lstm" + std::to_string(i), 2 * cfg.lstm_dim, cfg.lstm_dim, rng);
      parser_branch_.emplace_back(params, "parser.lstm" + std::to_string(i), 2 * cfg.lstm_dim, cfg.lstm_dim, rng);
    }
    const Index hidden = 2 * cfg.lstm_dim;
    if (shape.tagger) {
      upos_ = nn::Linear<float>(params, "upos", hidden, static_cast<Index>(v.upos.size()), rng);
      xpos_ = nn::Linear<float>(params, "xpos", hidden, static_cast<Index>(v.xpos.size()), rng);
      feats_ = nn::Linear<float>(params, "feats", hidden, static_cast<Index>(v.feats.size()), rng);
      rules_ = nn::Linear<float>(params, "rules", hidden, static_cast<Index>(v.rules.size()), rng);
    }
    if (shape.parser) {
      root_ = &params.add("root", 1, hidden, nn::Init::uniform_embedding, rng);
      arc_dep_ = nn::Linear<float>(params, "arc_dep", hidden, cfg.arc_dim, rng);
      arc_head_ = nn::Linear<float>(params, "arc_head", hidden, cfg.arc_dim, rng);
      arc_ = nn::Biaffine<float>(params, "arc", cfg.arc_dim, rng);
      label_dep_ = nn::Linear<float>(params, "label_dep", hidden, cfg.label_dim, rng);
      label_head_ = nn::Linear<float>(params, "label_head", hidden, cfg.label_dim, rng);
      const Index features = static_cast<Index>(cfg.label_dim) * cfg.label_dim + 2 * cfg.label_dim;
      label_ = nn::Linear<float>(params, "label", features, static_cast<Index>(v.deprels.size()), rng);
    }
  }

  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  const NetworkShape& shape() const { return shape_; }
  int unknown_word() const { return 0; }

  Output forward(Graph& g, const std::vector<const SentenceData*>& batch, Rng* dropout_rng, Rng* word_rng) const {
    std::vector<size_t> lengths;
    std::vector<int> words;
    std::vector<const std::vector<int>*> chars;
    for (const auto* s : batch) {
      lengths.push_back(s->size());
      words.insert(words.end(), s->words.begin(), s->words.end());
      for (const auto& c : s->chars) chars.push_back(&c);
    }
    const nn::SequenceLayout layout(lengths);
    if (word_rng) words = nn::word_dropout(std::move(words), cfg_.word_dropout, unknown_word(), *word_rng);

    std::vector<Expr> parts{words_(g, words), chars_(g, chars)};
    auto stacked = [&](Mat SentenceData::*field, Index dim) {
      Mat m(static_cast<Index>(layout.total()), dim);
      for (size_t b = 0; b < batch.size(); ++b)
        if (batch[b]->size() > 0) m.middleRows(static_cast<Index>(layout.offsets()[b]), (batch[b]->*field).rows()) = batch[b]->*field;
      parts.push_back(g.constant(std::move(m)));
    };
    if (dims_.pretrained) stacked(&SentenceData::pretrained, dims_.pretrained);
    if (dims_.contextual_a) stacked(&SentenceData::contextual_a, dims_.contextual_a);
    if (dims_.contextual_b) stacked(&SentenceData::contextual_b, dims_.contextual_b);
    if (shape_.tag_inputs) {
      auto ids = [&](std::vector<int> SentenceData::*field) {
        std::vector<int> out;
        for (const auto* s : batch) out.insert(out.end(), (s->*field).begin(), (s->*field).end());
        return out;
      };
      parts.push_back(in_upos_(g, ids(&SentenceData::in_upos)));
      parts.push_back(in_xpos_(g, ids(&SentenceData::in_xpos)));
      parts.push_back(in_feats_(g, ids(&SentenceData::in_feats)));
      parts.push_back(in_lemmas_(g, ids(&SentenceData::in_lemmas)));
    }

    Expr h = nn::maybe_dropout(g, g.concat_cols(parts), cfg_.dropout, dropout_rng);
    auto run = [&](Expr x, const std::vector<nn::BiLstm<float>>& layers, bool residual_first) {
      for (size_t i = 0; i < layers.size(); ++i) {
        Expr y = layers[i](g, x, layout);
        x = nn::maybe_dropout(g, (i > 0 || residual_first) ? g.add(x, y) : y, cfg_.dropout, dropout_rng);
      }
      return x;
    };
    h = run(h, shared_, false);

    Output out;
    if (shape_.tagger) {
      Expr t = run(h, tagger_branch_, true);
      out.upos = upos_(g, t);
      out.xpos = xpos_(g, t);
      out.feats = feats_(g, t);
      out.rules = rules_(g, t);
    }
    if (shape_.parser) {
      Expr p = run(h, parser_branch_, true);
      Expr root = g.param(*root_);
      Expr heads = g.concat_rows({g.tanh(arc_head_(g, root)), g.tanh(arc_head_(g, p))});
      out.arcs = arc_(g, heads, g.tanh(arc_dep_(g, p)));
      out.label_dep = g.tanh(label_dep_(g, p));
      out.label_head = g.concat_rows({g.tanh(label_head_(g, root)), g.tanh(label_head_(g, p))});
    }
    return out;
  }

  // Label logits for each token given the arc column of its head.
  Expr labels(Graph& g, const Output& out, const std::vector<int>& head_columns) const {
    Expr head = g.gather_rows(out.label_head, head_columns);
    return label_(g, g.concat_cols({g.row_outer(out.label_dep, head), out.label_dep, head}));
  }

  Expr loss(Graph& g, const Output& out, const std::vector<const SentenceData*>& batch) const {
    auto gold = [&](std::vector<int> SentenceData::*field) {
      std::vector<int> ids;
      for (const auto* s : batch) ids.insert(ids.end(), (s->*field).begin(), (s->*field).end());
      return ids;
    };
    std::vector<Expr> terms;
    size_t tokens = 0;
    for (const auto* s : batch) tokens += s->size();
    if (shape_.tagger) {
      terms.push_back(g.softmax_cross_entropy(out.upos, gold(&SentenceData::upos)));
      terms.push_back(g.softmax_cross_entropy(out.xpos, gold(&SentenceData::xpos)));
      terms.push_back(g.softmax_cross_entropy(out.feats, gold(&SentenceData::feats)));
      terms.push_back(g.softmax_cross_entropy(out.rules, gold(&SentenceData::rules)));
    }
    if (shape_.parser) {
      std::vector<int> columns;
      size_t offset = 0;
      for (const auto* s : batch) {
        for (int h : s->heads) columns.push_back(h <= 0 ? h : static_cast<int>(offset) + h);
        offset += s->size();
      }
      const Mat mask = arc_mask(batch);
      terms.push_back(g.softmax_cross_entropy(out.arcs, columns, &mask));
      for (auto& c : columns) c = std::max(c, 0);
      terms.push_back(g.softmax_cross_entropy(labels(g, out, columns), gold(&SentenceData::deprels)));
    }
    return g.scale(g.sum(terms), 1.0f / static_cast<float>(std::max<size_t>(tokens, 1)));
  }

  // Allowed heads of each token: the root and the other tokens of its own
  // sentence.
  static Mat arc_mask(const std::vector<const SentenceData*>& batch) {
    size_t total = 0;
    for (const auto* s : batch) total += s->size();
    Mat mask = Mat::Zero(static_cast<Index>(total), static_cast<Index>(total + 1));
    size_t offset = 0;
    for (const auto* s : batch) {
      for (size_t d = 0; d < s->size(); ++d) {
        const Index row = static_cast<Index>(offset + d);
        mask(row, 0) = 1;
        for (size_t h = 0; h < s->size(); ++h)
          if (h != d) mask(row, static_cast<Index>(offset + h + 1)) = 1;
      }
      offset += s->size();
    }
    return mask;
  }

  nn::ParameterStore<float> params;

 private:
  const TaggerParserConfig& cfg_;
  NetworkShape shape_;
  InputDims dims_;
  nn::Embedding<float> words_;
  nn::CharWordEncoder<float> chars_;
  nn::Embedding<float> in_upos_, in_xpos_, in_feats_, in_lemmas_;
  std::vector<nn::BiLstm<float>> shared_, tagger_branch_, parser_branch_;
  nn::Linear<float> upos_, xpos_, feats_, rules_;
  nn::Parameter<float>* root_ = nullptr;
  nn::Linear<float> arc_dep_, arc_head_, label_dep_, label_head_, label_;
  nn::Biaffine<float> arc_;
};

size_t argmax(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  Index best = 0;
  for (Index i = 1; i < row.size(); ++i)
    if (row(i) > row(best)) best = i;
  return static_cast<size_t>(best);
}

Eigen::RowVectorXd softmax(const Eigen::Ref<const Eigen::RowVectorXf>& logits) {
  Eigen::RowVectorXd z = logits.cast<double>();
  z = (z.array() - z.maxCoeff()).exp().matrix();
  return z / z.sum();
}

std::string sentence_label(size_t i) { return "sentence " + std::to_string(i + 1); }

}  // namespace

struct TaggerParser::Impl {
  TaggerParserConfig cfg;
  Vocabularies vocab;
  std::vector<lemma::LemmaRule> rules;
  embed::WordEmbeddingTable pretrained;
  InputDims dims;
  std::vector<std::unique_ptr<Network>> nets;
  int tagger_net = -1;
  int parser_net = -1;

  void build_networks() {
    nets.clear();
    switch (cfg.mode) {
      case Mode::tag_only:
        add_network({true, false, false});
        tagger_net = 0;
        break;
      case Mode::parse_only:
        add_network({false, true, false});
        parser_net = 0;
        break;
      case Mode::joint:
        add_network({true, true, false});
        tagger_net = parser_net = 0;
        break;
      case Mode::parse_with_predicted_tags:
        add_network({true, false, false});
        add_network({false, true, true});
        tagger_net = 0;
        parser_net = 1;
        break;
    }
  }

  void add_network(NetworkShape shape) {
    Rng rng(cfg.seed, "init/net" + std::to_string(nets.size()));
    nets.push_back(std::make_unique<Network>(cfg, vocab, shape, dims, rng));
  }

  static std::string prefix(size_t net) { return "net" + std::to_string(net) + "/"; }

  std::vector<SentenceData> prepare(const conllu::Document& doc, const ExtraInputs& inputs, bool gold) const {
    auto check_vectors = [&](const embed::ContextualVectors* cv, Index dim, const char* name) {
      if (dim == 0) return;
      if (!cv) throw UsageError(std::string("the model needs contextual vectors ") + name);
      if (static_cast<Index>(cv->dim) != dim)
        throw DataError(std::string("contextual vectors ") + name + " have dimension " + std::to_string(cv->dim) +
                        ", the model expects " + std::to_string(dim));
      if (cv->per_sentence.size() != doc.sentences.size())
        throw DataError(std::string("contextual vectors ") + name + " cover " +
                        std::to_string(cv->per_sentence.size()) + " sentences, the document has " +
                        std::to_string(doc.sentences.size()));
    };
    check_vectors(inputs.a, dims.contextual_a, "A");
    check_vectors(inputs.b, dims.contextual_b, "B");

    std::vector<SentenceData> data(doc.sentences.size());
    for (size_t i = 0; i < doc.sentences.size(); ++i) {
      const auto& sentence = doc.sentences[i];
      auto& sd = data[i];
      const Index n = static_cast<Index>(sentence.size());
      if (dims.pretrained) sd.pretrained.resize(n, dims.pretrained);
      for (Index k = 0; k < n; ++k) {
        const auto& t = sentence.tokens[static_cast<size_t>(k)];
        sd.forms.push_back(t.form);
        sd.words.push_back(vocab.forms.id_or(t.form, 0));
        std::vector<int> chars;
        for (const auto& c : unicode::characters(t.form)) chars.push_back(vocab.chars.id_or(c, 0));
        sd.chars.push_back(std::move(chars));
        if (dims.pretrained) sd.pretrained.row(k) = pretrained.lookup(t.form);
        if (gold) {
          auto id = [](const Vocabulary& v, const std::string& s) { return v.id_or(s, -1); };
          sd.upos.push_back(id(vocab.upos, t.upos));
          sd.xpos.push_back(id(vocab.xpos, t.xpos));
          sd.feats.push_back(id(vocab.feats, conllu::feats_to_string(t.feats)));
          sd.rules.push_back(cfg.has_tagger() ? id(vocab.rules, lemma::build_rule(t.form, t.lemma).serialize()) : -1);
          sd.heads.push_back(t.head.value_or(-1));
          sd.deprels.push_back(id(vocab.deprels, t.deprel));
        }
      }
      if (dims.contextual_a) sd.contextual_a = inputs.a->per_sentence[i];
      if (dims.contextual_b) sd.contextual_b = inputs.b->per_sentence[i];
      if (nets.size() > 1) {
        sd.in_upos.assign(sentence.size(), static_cast<int>(vocab.upos.size()));
        sd.in_xpos.assign(sentence.size(), static_cast<int>(vocab.xpos.size()));
        sd.in_feats.assign(sentence.size(), static_cast<int>(vocab.feats.size()));
        sd.in_lemmas.assign(sentence.size(), static_cast<int>(vocab.lemmas.size()));
      }
    }
    return data;
  }

  std::vector<std::vector<const SentenceData*>> batches(const std::vector<SentenceData>& data,
                                                        const std::vector<size_t>& order) const {
    std::vector<std::vector<const SentenceData*>> out;
    for (size_t start = 0; start < order.size(); start += static_cast<size_t>(cfg.batch_size)) {
      std::vector<const SentenceData*> batch;
      for (size_t k = start; k < std::min(order.size(), start + static_cast<size_t>(cfg.batch_size)); ++k)
        batch.push_back(&data[order[k]]);
      out.push_back(std::move(batch));
    }
    return out;
  }

  std::vector<TokenTags> decode_tags(const Graph& g, const Network::Output& out,
                                     const std::vector<const SentenceData*>& batch,
                                     const MorphDictionary* dictionary) const {
    std::vector<TokenTags> tags;
    const Mat& upos = g.value(out.upos);
    const Mat& xpos = g.value(out.xpos);
    const Mat& feats = g.value(out.feats);
    const Mat& rule_logits = g.value(out.rules);
    Index row = 0;
    for (const auto* s : batch) {
      for (const auto& form : s->forms) {
        TokenTags t;
        t.upos = static_cast<int>(argmax(softmax(upos.row(row))));
        t.feats = static_cast<int>(argmax(softmax(feats.row(row))));
        const Eigen::RowVectorXd tag_dist = softmax(xpos.row(row));
        const Eigen::RowVectorXd rule_dist = softmax(rule_logits.row(row));
        const auto analyses = dictionary ? dictionary->analyses(form) : std::span<const Analysis>{};
        auto choice = constrained_decode({tag_dist.data(), static_cast<size_t>(tag_dist.size())}, vocab.xpos.items(),
                                         {rule_dist.data(), static_cast<size_t>(rule_dist.size())}, rules, form,
                                         analyses);
        t.xpos = vocab.xpos.id_or(choice.xpos, static_cast<int>(vocab.xpos.size()));
        t.xpos_text = std::move(choice.xpos);
        t.lemma = std::move(choice.lemma);
        tags.push_back(std::move(t));
        ++row;
      }
    }
    return tags;
  }

  // Heads (0 = root) and deprel ids, flat over the batch.
  std::pair<std::vector<int>, std::vector<int>> decode_trees(Graph& g, const Network& net,
                                                             const Network::Output& out,
                                                             const std::vector<const SentenceData*>& batch) const {
    const Mat& arcs = g.value(out.arcs);
    std::vector<int> heads, columns;
    size_t offset = 0;
    for (const auto* s : batch) {
      const Index n = static_cast<Index>(s->size());
      ArcScores scores = ArcScores::Zero(n + 1, n + 1);
      for (Index d = 1; d <= n; ++d) {
        const Index row = static_cast<Index>(offset) + d - 1;
        // Log-probabilities over the allowed heads of this dependent.
        double mx = arcs(row, 0);
        for (Index h = 1; h <= n; ++h)
          if (h != d) mx = std::max(mx, static_cast<double>(arcs(row, static_cast<Index>(offset) + h)));
        double total = std::exp(arcs(row, 0) - mx);
        for (Index h = 1; h <= n; ++h)
          if (h != d) total += std::exp(arcs(row, static_cast<Index>(offset) + h) - mx);
        const double log_total = mx + std::log(total);
        scores(0, d) = arcs(row, 0) - log_total;
        for (Index h = 1; h <= n; ++h)
          if (h != d) scores(h, d) = arcs(row, static_cast<Index>(offset) + h) - log_total;
      }
      const auto tree = mst_decode(scores);
      if (!conllu::is_well_formed_tree(tree)) throw Error(ErrorKind::internal, "decoder produced an invalid tree");
      for (int h : tree) {
        heads.push_back(h);
        columns.push_back(h == 0 ? 0 : static_cast<int>(offset) + h);
      }
      offset += s->size();
    }
    const Mat& label_logits = g.value(net.labels(g, out, columns));
    std::vector<int> labels;
    for (Index r = 0; r < label_logits.rows(); ++r) {
      Index best = 0;
      for (Index c = 1; c < label_logits.cols(); ++c)
        if (label_logits(r, c) > label_logits(r, best)) best = c;
      labels.push_back(static_cast<int>(best));
    }
    return {heads, labels};
  }

  // Runs the tagger over data and stores its predictions as parser inputs.
  void feed_predicted_tags(std::vector<SentenceData>& data, const MorphDictionary* dictionary) const {
    std::vector<size_t> order(data.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (const auto& batch : batches(data, order)) {
      Graph g(false);
      const auto out = nets[static_cast<size_t>(tagger_net)]->forward(g, batch, nullptr, nullptr);
      const auto tags = decode_tags(g, out, batch, dictionary);
      size_t k = 0;
      for (const auto* cs : batch) {
        auto* s = const_cast<SentenceData*>(cs);
        for (size_t i = 0; i < s->size(); ++i, ++k) {
          s->in_upos[i] = tags[k].upos;
          s->in_xpos[i] = tags[k].xpos;
          s->in_feats[i] = tags[k].feats;
          s->in_lemmas[i] = vocab.lemmas.id_or(tags[k].lemma, static_cast<int>(vocab.lemmas.size()));
        }
      }
    }
  }

  conllu::Document predict(const conllu::Document& doc, const ExtraInputs& inputs,
                           const MorphDictionary* dictionary) const {
    conllu::Document result = doc;
    auto data = prepare(doc, inputs, false);
    std::vector<size_t> order(data.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    const auto all = batches(data, order);

    auto write_tags = [&](const std::vector<TokenTags>& tags, size_t first, size_t count) {
      size_t k = 0;
      for (size_t b = 0; b < count; ++b) {
        for (auto& t : result.sentences[first + b].tokens) {
          const auto& p = tags[k++];
          t.upos = vocab.upos.item(p.upos);
          t.xpos = p.xpos_text;
          t.feats = conllu::parse_feats(vocab.feats.item(p.feats));
          t.lemma = p.lemma;
        }
      }
    };
    auto write_trees = [&](Graph& g, const Network& net, const Network::Output& out,
                           const std::vector<const SentenceData*>& batch, size_t first) {
      const auto [heads, labels] = decode_trees(g, net, out, batch);
      size_t k = 0;
      for (size_t b = 0; b < batch.size(); ++b) {
        for (auto& t : result.sentences[first + b].tokens) {
          t.head = heads[k];
          t.deprel = vocab.deprels.item(labels[k]);
          ++k;
        }
      }
    };

    size_t first = 0;
    for (const auto& batch : all) {
      Graph g(false);
      if (tagger_net >= 0) {
        const auto& net = *nets[static_cast<size_t>(tagger_net)];
        const auto out = net.forward(g, batch, nullptr, nullptr);
        write_tags(decode_tags(g, out, batch, dictionary), first, batch.size());
        if (parser_net == tagger_net) write_trees(g, net, out, batch, first);
      } else {
        const auto& net = *nets[static_cast<size_t>(parser_net)];
        write_trees(g, net, net.forward(g, batch, nullptr, nullptr), batch, first);
      }
      first += batch.size();
    }
    if (nets.size() > 1) {
      // The parser reads the tagger's predictions.
      feed_predicted_tags(data, dictionary);
      const auto& net = *nets[static_cast<size_t>(parser_net)];
      first = 0;
      for (const auto& batch : all) {
        Graph g(false);
        write_trees(g, net, net.forward(g, batch, nullptr, nullptr), batch, first);
        first += batch.size();
      }
    }
    return result;
  }
};

TaggerParser::TaggerParser(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
TaggerParser::TaggerParser(TaggerParser&&) noexcept = default;
TaggerParser& TaggerParser::operator=(TaggerParser&&) noexcept = default;
TaggerParser::~TaggerParser() = default;

const TaggerParserConfig& TaggerParser::config() const { return impl_->cfg; }
const std::vector<lemma::LemmaRule>& TaggerParser::rules() const { return impl_->rules; }

std::vector<std::string> TaggerParser::parameter_names() const {
  std::vector<std::string> names;
  for (size_t n = 0; n < impl_->nets.size(); ++n)
    for (const auto* p : impl_->nets[n]->params.all()) names.push_back(Impl::prefix(n) + p->name);
  return names;
}

size_t TaggerParser::parameter_count() const {
  size_t total = 0;
  for (const auto& net : impl_->nets) total += net->params.element_count();
  return total;
}

conllu::Document TaggerParser::predict(const conllu::Document& doc, const ExtraInputs& inputs,
                                       const MorphDictionary* dictionary) const {
  return impl_->predict(doc, inputs, dictionary);
}

namespace {

void validate_corpus(const conllu::Document& corpus, const TaggerParserConfig& cfg) {
  if (corpus.sentences.empty()) throw DataError("training corpus is empty");
  for (size_t i = 0; i < corpus.sentences.size(); ++i) {
    const auto& s = corpus.sentences[i];
    for (const auto& t : s.tokens) {
      const std::string where = sentence_label(i) + ", token " + std::to_string(t.id);
      if (cfg.has_tagger() && (t.upos == "_" || t.lemma == "_"))
        throw DataError(where + ": the tagger needs gold UPOS and lemma columns");
      if (cfg.has_parser() && (!t.head || t.deprel == "_"))
        throw DataError(where + ": the parser needs gold HEAD and DEPREL columns");
    }
    if (cfg.has_parser() && !conllu::is_well_formed_tree(s))
      throw DataError(sentence_label(i) + ": gold heads do not form a single-rooted tree");
  }
}

}  // namespace

TaggerParser TaggerParser::train(const conllu::Document& corpus, const TaggerParserConfig& config,
                                 const TrainOptions& options) {
  config.validate();
  validate_corpus(corpus, config);
  auto impl = std::make_unique<Impl>();
  impl->cfg = config;
  auto& cfg = impl->cfg;
  cfg.use_pretrained_we = options.pretrained != nullptr;
  cfg.use_contextual_a = options.train_inputs.a != nullptr;
  cfg.use_contextual_b = options.train_inputs.b != nullptr;
  if (options.pretrained) {
    impl->pretrained = *options.pretrained;
    impl->dims.pretrained = static_cast<Index>(options.pretrained->dim());
  }
  if (cfg.use_contextual_a) impl->dims.contextual_a = static_cast<Index>(options.train_inputs.a->dim);
  if (cfg.use_contextual_b) impl->dims.contextual_b = static_cast<Index>(options.train_inputs.b->dim);

  auto& v = impl->vocab;
  v.forms.add(kUnknown);
  v.chars.add(kUnknown);
  for (const auto& s : corpus.sentences) {
    for (const auto& t : s.tokens) {
      v.forms.add(t.form);
      for (const auto& c : unicode::characters(t.form)) v.chars.add(c);
      if (cfg.has_tagger()) {
        v.upos.add(t.upos);
        v.xpos.add(t.xpos);
        v.feats.add(conllu::feats_to_string(t.feats));
        v.lemmas.add(t.lemma);
        const auto rule = lemma::build_rule(t.form, t.lemma);
        if (v.rules.find(rule.serialize()) == std::nullopt) {
          v.rules.add(rule.serialize());
          impl->rules.push_back(rule);
        }
      }
      if (cfg.has_parser()) v.deprels.add(t.deprel);
    }
  }
  impl->build_networks();

  TaggerParser model(std::move(impl));
  Impl& m = *model.impl_;
  auto train_data = m.prepare(corpus, options.train_inputs, true);
  std::optional<std::vector<SentenceData>> dev_data;

  for (size_t stage = 0; stage < m.nets.size(); ++stage) {
    Network& net = *m.nets[stage];
    if (net.shape().tag_inputs) m.feed_predicted_tags(train_data, options.dictionary);
    nn::Adam<float> adam(nn::AdamConfig{cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.epsilon, cfg.lazy_adam});
    const std::string suffix = "/net" + std::to_string(stage);
    Rng shuffle_rng(cfg.seed, "shuffle" + suffix);
    Rng dropout_rng(cfg.seed, "dropout" + suffix);
    Rng word_rng(cfg.seed, "word-dropout" + suffix);
    std::vector<size_t> order(train_data.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    const auto params = net.params.all();

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
      for (size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[shuffle_rng.below(i)]);
      double loss_sum = 0.0;
      size_t tokens = 0;
      for (const auto& batch : m.batches(train_data, order)) {
        Graph g(true);
        const auto out = net.forward(g, batch, &dropout_rng, &word_rng);
        const Expr loss = net.loss(g, out, batch);
        const double value = g.scalar(loss);
        if (!std::isfinite(value))
          throw NumericError("non-finite training loss in epoch " + std::to_string(epoch));
        g.backward(loss);
        nn::clip_global_norm(params, cfg.clip_norm);
        adam.step(params);
        net.params.zero_grad();
        size_t n = 0;
        for (const auto* s : batch) n += s->size();
        loss_sum += value * static_cast<double>(n);
        tokens += n;
      }

      EpochReport report;
      report.stage = static_cast<int>(stage);
      report.epoch = epoch;
      report.loss = tokens ? loss_sum / static_cast<double>(tokens) : 0.0;
      if (options.dev) {
        const auto predicted = m.predict(*options.dev, options.dev_inputs, options.dictionary);
        if (net.shape().tagger) {
          using eval::TagField;
          report.dev_metrics["upos"] = eval::tagging_accuracy(*options.dev, predicted, TagField::upos).ratio();
          report.dev_metrics["xpos"] = eval::tagging_accuracy(*options.dev, predicted, TagField::xpos).ratio();
          report.dev_metrics["ufeats"] = eval::tagging_accuracy(*options.dev, predicted, TagField::ufeats).ratio();
          report.dev_metrics["lemmas"] = eval::tagging_accuracy(*options.dev, predicted, TagField::lemmas).ratio();
        }
        if (net.shape().parser) {
          const auto [uas, las] = eval::attachment_scores(*options.dev, predicted);
          report.dev_metrics["uas"] = uas.ratio();
          report.dev_metrics["las"] = las.ratio();
        }
      }
      std::string line = "stage " + std::to_string(stage) + " epoch " + std::to_string(epoch) +
                         " loss " + std::to_string(report.loss);
      for (const auto& [name, value] : report.dev_metrics) line += " dev_" + name + " " + std::to_string(value);
      logger().info("{}", line);
      if (options.on_epoch && !options.on_epoch(report, model)) break;
    }
  }
  return model;
}

nn::Checkpoint TaggerParser::to_checkpoint() const {
  const Impl& m = *impl_;
  nn::Checkpoint ck;
  ck.hyperparameters = m.cfg.to_json();
  nlohmann::json networks = nlohmann::json::array();
  for (size_t n = 0; n < m.nets.size(); ++n) {
    const auto& shape = m.nets[n]->shape();
    networks.push_back({{"prefix", Impl::prefix(n)},
                        {"tagger", shape.tagger},
                        {"parser", shape.parser},
                        {"predicted_tag_inputs", shape.tag_inputs}});
  }
  ck.model = {{"format", kFormat},
              {"version", 1},
              {"head_inputs", "final bi-LSTM layer of each branch, residual connections from the second layer on"},
              {"input_dims",
               {{"pretrained", m.dims.pretrained},
                {"contextual_a", m.dims.contextual_a},
                {"contextual_b", m.dims.contextual_b}}},
              {"networks", networks},
              {"vocab", m.vocab.to_json()}};
  if (m.dims.pretrained) {
    ck.model["pretrained_words"] = m.pretrained.words();
    const auto& vec = m.pretrained.vectors();
    ck.tensors.push_back({"pretrained.vectors",
                          {static_cast<size_t>(vec.rows()), static_cast<size_t>(vec.cols())},
                          std::vector<float>(vec.data(), vec.data() + vec.size())});
  }
  for (size_t n = 0; n < m.nets.size(); ++n) nn::export_parameters(m.nets[n]->params, Impl::prefix(n), ck);
  return ck;
}

TaggerParser TaggerParser::from_checkpoint(const nn::Checkpoint& ck) {
  if (ck.model.value("format", "") != kFormat) throw DataError("checkpoint is not a tagger/parser model");
  auto impl = std::make_unique<Impl>();
  try {
    impl->cfg = TaggerParserConfig::from_json(ck.hyperparameters);
    impl->vocab = Vocabularies::from_json(ck.model.at("vocab"));
    const auto& dims = ck.model.at("input_dims");
    impl->dims.pretrained = dims.at("pretrained").get<Index>();
    impl->dims.contextual_a = dims.at("contextual_a").get<Index>();
    impl->dims.contextual_b = dims.at("contextual_b").get<Index>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed tagger/parser checkpoint header: ") + e.what());
  }
  for (const auto& r : impl->vocab.rules.items()) impl->rules.push_back(lemma::LemmaRule::parse(r));
  if (impl->dims.pretrained) {
    const auto* t = ck.find("pretrained.vectors");
    const auto words = ck.model.at("pretrained_words").get<std::vector<std::string>>();
    if (!t || t->shape.size() != 2 || t->shape[0] != words.size() ||
        t->shape[1] != static_cast<size_t>(impl->dims.pretrained))
      throw DataError("checkpoint pretrained embeddings are missing or malformed");
    embed::RowMatrix<float> vec(static_cast<Index>(t->shape[0]), static_cast<Index>(t->shape[1]));
    std::copy(t->data.begin(), t->data.end(), vec.data());
    impl->pretrained = embed::WordEmbeddingTable(words, std::move(vec));
  }
  impl->build_networks();
  for (size_t n = 0; n < impl->nets.size(); ++n)
    nn::import_parameters(impl->nets[n]->params, Impl::prefix(n), ck);
  return TaggerParser(std::move(impl));
}

}  // namespace morphkit::tagger
