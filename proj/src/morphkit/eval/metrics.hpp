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

#include <set>
#include <string>
#include <utility>

#include "morphkit/conllu/conllu.hpp"

namespace morphkit::eval {

// correct/total with total counted on the gold side. For MLAS and BLEX the
// system-side count of content words is kept as well so the shared-task F1
// can be derived.
struct Score {
  size_t correct = 0;
  size_t total = 0;
  size_t system_total = 0;

  double ratio() const { return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total); }
  double f1() const {
    const size_t denom = total + system_total;
    return denom == 0 ? 0.0 : 2.0 * static_cast<double>(correct) / static_cast<double>(denom);
  }
};

enum class LemmaMode { pdt, ud };
enum class TagField { upos, xpos, ufeats, lemmas };

struct EvalOptions {
  LemmaMode lemma_mode = LemmaMode::ud;
  // Feature names that count for UFeats and MLAS.
  std::set<std::string> universal_features = default_universal_features();

  static std::set<std::string> default_universal_features();
};

struct MetricReport {
  Score upos, xpos, ufeats, lemmas, uas, las, mlas, blex;
};

// Deprels whose dependents are functional words for MLAS.
const std::set<std::string>& functional_deprels();

// Universal part of a dependency relation ("nmod:poss" -> "nmod").
std::string universal_deprel(const std::string& deprel);
bool is_content_deprel(const std::string& deprel);

// All metrics assume both documents share the same tokenization; a
// mismatch raises DataError naming the first divergent sentence.
Score tagging_accuracy(const conllu::Document& gold, const conllu::Document& sys, TagField field,
                       const EvalOptions& options = {});
std::pair<Score, Score> attachment_scores(const conllu::Document& gold, const conllu::Document& sys);
std::pair<Score, Score> mlas_blex(const conllu::Document& gold, const conllu::Document& sys,
                                  const EvalOptions& options = {});

MetricReport evaluate(const conllu::Document& gold, const conllu::Document& sys, const EvalOptions& options = {});

}  // namespace morphkit::eval
