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
#include "morphkit/tagger/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "morphkit/common/error.hpp"

namespace morphkit::tagger {

void MorphDictionary::add(const std::string& form, Analysis analysis) {
  auto& list = entries_[form];
  if (std::find(list.begin(), list.end(), analysis) == list.end()) list.push_back(std::move(analysis));
}

std::span<const Analysis> MorphDictionary::analyses(std::string_view form) const {
  auto it = entries_.find(std::string(form));
  if (it == entries_.end()) return {};
  return it->second;
}

MorphDictionary parse_dictionary(std::string_view text) {
  MorphDictionary dict;
  size_t line_no = 0, pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
      const size_t tab = line.find('\t', start);
      fields.emplace_back(line.substr(start, tab == std::string_view::npos ? line.npos : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty() || fields[2].empty())
      throw DataError("dictionary line " + std::to_string(line_no) + ": expected form<TAB>lemma<TAB>tag");
    dict.add(fields[0], {fields[2], fields[1]});
  }
  return dict;
}

MorphDictionary load_dictionary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dictionary " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dictionary(buf.str());
}

namespace {

void check_distribution(std::span<const double> dist, const char* what) {
  if (dist.empty()) throw UsageError(std::string(what) + " distribution is empty");
  const double total = std::accumulate(dist.begin(), dist.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-6) throw UsageError(std::string(what) + " distribution does not sum to 1");
}

size_t argmax(std::span<const double> dist) {
  size_t best = 0;
  for (size_t i = 1; i < dist.size(); ++i)
    if (dist[i] > dist[best]) best = i;
  return best;
}

}  // namespace

std::string best_rule_lemma(std::span<const double> rule_dist, const std::vector<lemma::LemmaRule>& rules,
                            std::string_view form) {
  if (rule_dist.size() != rules.size()) throw UsageError("rule distribution size differs from the rule list");
  std::vector<size_t> order(rules.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return rule_dist[a] > rule_dist[b]; });
  for (size_t r : order)
    if (auto lemma = lemma::try_apply_rule(rules[r], form)) return *lemma;
  return std::string(form);
}

TagLemma constrained_decode(std::span<const double> tag_dist, const std::vector<std::string>& tags,
                            std::span<const double> rule_dist, const std::vector<lemma::LemmaRule>& rules,
                            std::string_view form, std::span<const Analysis> analyses) {
  check_distribution(tag_dist, "tag");
  check_distribution(rule_dist, "rule");
  if (tag_dist.size() != tags.size()) throw UsageError("tag distribution size differs from the tag list");
  if (analyses.empty()) return {tags[argmax(tag_dist)], best_rule_lemma(rule_dist, rules, form)};
  if (rule_dist.size() != rules.size()) throw UsageError("rule distribution size differs from the rule list");

  std::map<std::string, double, std::less<>> lemma_prob;
  for (size_t r = 0; r < rules.size(); ++r)
    if (rule_dist[r] > 0.0)
      if (auto lemma = lemma::try_apply_rule(rules[r], form)) lemma_prob[*lemma] += rule_dist[r];
  std::map<std::string_view, double> tag_prob;
  for (size_t t = 0; t < tags.size(); ++t) tag_prob.emplace(tags[t], tag_dist[t]);

  const Analysis* best = &analyses.front();
  double best_score = -1.0;
  for (const auto& a : analyses) {
    auto t = tag_prob.find(a.tag);
    auto l = lemma_prob.find(a.lemma);
    const double score = (t == tag_prob.end() ? 0.0 : t->second) * (l == lemma_prob.end() ? 0.0 : l->second);
    if (score > best_score) {
      best_score = score;
      best = &a;
    }
  }
  return {best->tag, best->lemma};
}

}  // namespace morphkit::tagger
