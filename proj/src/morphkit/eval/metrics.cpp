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
#include "morphkit/eval/metrics.hpp"

#include <algorithm>
#include <tuple>
#include <vector>

namespace morphkit::eval {

namespace {

using conllu::Document;
using conllu::Token;

void check_alignment(const Document& gold, const Document& sys) {
  if (gold.sentences.empty()) throw DataError("evaluation needs a non-empty gold document");
  const size_t n = std::min(gold.sentences.size(), sys.sentences.size());
  for (size_t i = 0; i < n; ++i)
    if (gold.sentences[i].size() != sys.sentences[i].size())
      throw DataError("token count differs in sentence " + std::to_string(i + 1) + " (gold " +
                      std::to_string(gold.sentences[i].size()) + ", system " +
                      std::to_string(sys.sentences[i].size()) + ")");
  if (gold.sentences.size() != sys.sentences.size())
    throw DataError("sentence count differs: gold " + std::to_string(gold.sentences.size()) + ", system " +
                    std::to_string(sys.sentences.size()) + "; first divergent sentence " +
                    std::to_string(n + 1));
}

std::vector<conllu::Feature> universal_feats(const Token& t, const EvalOptions& options) {
  std::vector<conllu::Feature> out;
  for (const auto& f : t.feats)
    if (options.universal_features.count(f.key)) out.push_back(f);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.key, a.value) < std::tie(b.key, b.value);
  });
  return out;
}

std::string comparable_lemma(const std::string& lemma, LemmaMode mode) {
  return mode == LemmaMode::ud ? conllu::split_pdt_lemma(lemma).text : lemma;
}

// A gold lemma of "_" accepts any system lemma.
bool lemma_matches(const Token& g, const Token& s, LemmaMode mode) {
  return g.lemma == "_" || comparable_lemma(g.lemma, mode) == comparable_lemma(s.lemma, mode);
}

bool head_matches(const Token& g, const Token& s) {
  if (!g.head) throw DataError("gold token " + std::to_string(g.id) + " has no head");
  return s.head && *s.head == *g.head;
}

bool label_matches(const Token& g, const Token& s) {
  return universal_deprel(g.deprel) == universal_deprel(s.deprel);
}

struct FunctionalChild {
  int id;
  std::string deprel;
  std::string upos;
  std::vector<conllu::Feature> feats;
  friend bool operator==(const FunctionalChild&, const FunctionalChild&) = default;
};

std::vector<std::vector<FunctionalChild>> functional_children(const conllu::Sentence& s,
                                                              const EvalOptions& options) {
  std::vector<std::vector<FunctionalChild>> out(s.size() + 1);
  for (const auto& t : s.tokens) {
    if (!t.head) continue;
    const auto rel = universal_deprel(t.deprel);
    if (functional_deprels().count(rel))
      out[static_cast<size_t>(*t.head)].push_back({t.id, rel, t.upos, universal_feats(t, options)});
  }
  return out;
}

}  // namespace

std::set<std::string> EvalOptions::default_universal_features() {
  return {"PronType", "NumType", "Poss",   "Reflex", "Foreign", "Abbr",  "Gender",
          "Animacy",  "Number",  "Case",   "Definite", "Degree", "VerbForm", "Mood",
          "Tense",    "Aspect",  "Voice",  "Evident", "Polarity", "Person", "Polite"};
}

const std::set<std::string>& functional_deprels() {
  static const std::set<std::string> rels{"aux", "cop", "mark", "det", "clf", "case", "cc"};
  return rels;
}

std::string universal_deprel(const std::string& deprel) { return deprel.substr(0, deprel.find(':')); }

bool is_content_deprel(const std::string& deprel) {
  const auto rel = universal_deprel(deprel);
  return rel != "punct" && !functional_deprels().count(rel);
}

Score tagging_accuracy(const Document& gold, const Document& sys, TagField field, const EvalOptions& options) {
  check_alignment(gold, sys);
  Score score;
  for (size_t i = 0; i < gold.sentences.size(); ++i) {
    for (size_t k = 0; k < gold.sentences[i].size(); ++k) {
      const auto& g = gold.sentences[i].tokens[k];
      const auto& s = sys.sentences[i].tokens[k];
      bool ok = false;
      switch (field) {
        case TagField::upos:
          ok = g.upos == s.upos;
          break;
        case TagField::xpos:
          ok = g.xpos == s.xpos;
          break;
        case TagField::ufeats:
          ok = universal_feats(g, options) == universal_feats(s, options);
          break;
        case TagField::lemmas:
          ok = lemma_matches(g, s, options.lemma_mode);
          break;
      }
      ++score.total;
      ++score.system_total;
      if (ok) ++score.correct;
    }
  }
  return score;
}

std::pair<Score, Score> attachment_scores(const Document& gold, const Document& sys) {
  check_alignment(gold, sys);
  Score uas, las;
  for (size_t i = 0; i < gold.sentences.size(); ++i) {
    for (size_t k = 0; k < gold.sentences[i].size(); ++k) {
      const auto& g = gold.sentences[i].tokens[k];
      const auto& s = sys.sentences[i].tokens[k];
      const bool head = head_matches(g, s);
      ++uas.total;
      ++las.total;
      if (head) {
        ++uas.correct;
        if (label_matches(g, s)) ++las.correct;
      }
    }
  }
  uas.system_total = uas.total;
  las.system_total = las.total;
  return {uas, las};
}

std::pair<Score, Score> mlas_blex(const Document& gold, const Document& sys, const EvalOptions& options) {
  check_alignment(gold, sys);
  Score mlas, blex;
  for (size_t i = 0; i < gold.sentences.size(); ++i) {
    const auto& gs = gold.sentences[i];
    const auto& ss = sys.sentences[i];
    const auto gold_children = functional_children(gs, options);
    const auto sys_children = functional_children(ss, options);
    for (size_t k = 0; k < gs.size(); ++k) {
      const auto& g = gs.tokens[k];
      const auto& s = ss.tokens[k];
      if (is_content_deprel(s.deprel)) {
        ++mlas.system_total;
        ++blex.system_total;
      }
      if (!is_content_deprel(g.deprel)) continue;
      ++mlas.total;
      ++blex.total;
      if (!head_matches(g, s) || !label_matches(g, s)) continue;
      if (lemma_matches(g, s, options.lemma_mode)) ++blex.correct;
      if (g.upos == s.upos && universal_feats(g, options) == universal_feats(s, options) &&
          gold_children[k + 1] == sys_children[k + 1])
        ++mlas.correct;
    }
  }
  return {mlas, blex};
}

MetricReport evaluate(const Document& gold, const Document& sys, const EvalOptions& options) {
  MetricReport r;
  r.upos = tagging_accuracy(gold, sys, TagField::upos, options);
  r.xpos = tagging_accuracy(gold, sys, TagField::xpos, options);
  r.ufeats = tagging_accuracy(gold, sys, TagField::ufeats, options);
  r.lemmas = tagging_accuracy(gold, sys, TagField::lemmas, options);
  std::tie(r.uas, r.las) = attachment_scores(gold, sys);
  std::tie(r.mlas, r.blex) = mlas_blex(gold, sys, options);
  return r;
}

}  // namespace morphkit::eval
