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

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "morphkit/lemma/lemma_rules.hpp"

namespace morphkit::tagger {

struct Analysis {
  std::string tag;
  std::string lemma;
  friend bool operator==(const Analysis&, const Analysis&) = default;
};

// form -> deduplicated (tag, lemma) analyses in file order.
class MorphDictionary {
 public:
  void add(const std::string& form, Analysis analysis);
  // Empty when the form is unknown.
  std::span<const Analysis> analyses(std::string_view form) const;
  size_t form_count() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, std::vector<Analysis>> entries_;
};

// TSV lines "form<TAB>lemma<TAB>tag"; blank lines are skipped.
MorphDictionary parse_dictionary(std::string_view text);
MorphDictionary load_dictionary(const std::filesystem::path& path);

struct TagLemma {
  std::string xpos;
  std::string lemma;
  friend bool operator==(const TagLemma&, const TagLemma&) = default;
};

// Lemma of the most probable rule that applies to form, falling back to
// the form itself when none does.
std::string best_rule_lemma(std::span<const double> rule_dist, const std::vector<lemma::LemmaRule>& rules,
                            std::string_view form);

// Picks the analysis maximizing p(tag) * p(lemma | form), where p(lemma |
// form) sums the probabilities of all rules producing that lemma. Without
// analyses this is the unconstrained (argmax tag, best rule lemma) pair.
// Ties go to the earlier analysis or the lower tag index.
TagLemma constrained_decode(std::span<const double> tag_dist, const std::vector<std::string>& tags,
                            std::span<const double> rule_dist, const std::vector<lemma::LemmaRule>& rules,
                            std::string_view form, std::span<const Analysis> analyses);

}  // namespace morphkit::tagger
