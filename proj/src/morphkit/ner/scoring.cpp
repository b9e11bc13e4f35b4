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
#include "morphkit/ner/scoring.hpp"

#include <fstream>
#include <sstream>
#include <tuple>

#include "morphkit/common/error.hpp"

namespace morphkit::ner {

namespace {

std::vector<std::string> data_lines(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw DataError(std::string("cannot open ") + what + " " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

using Key = std::tuple<size_t, size_t, size_t, std::string>;

std::multiset<Key> keys(const std::vector<SentenceEntities>& doc, CnecLevel level,
                        const std::set<std::string>* filter, const SupertypeMap& supertypes) {
  std::multiset<Key> out;
  for (size_t s = 0; s < doc.size(); ++s) {
    for (const auto& e : doc[s]) {
      if (filter && !filter->count(e.type)) continue;
      out.emplace(s, e.start, e.end, level == CnecLevel::supertypes ? supertypes(e.type) : e.type);
    }
  }
  return out;
}

}  // namespace

std::string SupertypeMap::operator()(const std::string& type) const {
  auto it = overrides_.find(type);
  if (it != overrides_.end()) return it->second;
  return type.substr(0, 1);
}

SupertypeMap load_supertype_map(const std::filesystem::path& path) {
  std::map<std::string, std::string> overrides;
  for (const auto& line : data_lines(path, "supertype map")) {
    std::istringstream in(line);
    std::string type, super, extra;
    if (!(in >> type >> super) || (in >> extra)) throw DataError("malformed supertype map line: " + line);
    overrides[type] = super;
  }
  return SupertypeMap(std::move(overrides));
}

std::set<std::string> load_class_filter(const std::filesystem::path& path) {
  std::set<std::string> classes;
  for (const auto& line : data_lines(path, "class list")) {
    std::istringstream in(line);
    std::string cls, extra;
    in >> cls;
    if (in >> extra) throw DataError("malformed class list line: " + line);
    classes.insert(cls);
  }
  return classes;
}

double PrfScore::precision() const { return predicted == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(predicted); }
double PrfScore::recall() const { return gold == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(gold); }
double PrfScore::f1() const {
  const double p = precision(), r = recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

PrfScore cnec_f1(const std::vector<SentenceEntities>& gold, const std::vector<SentenceEntities>& predicted,
                 CnecLevel level, const std::set<std::string>* class_filter, const SupertypeMap& supertypes) {
  if (gold.size() != predicted.size())
    throw DataError("gold has " + std::to_string(gold.size()) + " sentences, predictions have " +
                    std::to_string(predicted.size()));
  const auto g = keys(gold, level, class_filter, supertypes);
  const auto p = keys(predicted, level, class_filter, supertypes);
  PrfScore score;
  score.gold = g.size();
  score.predicted = p.size();
  auto gi = g.begin();
  auto pi = p.begin();
  while (gi != g.end() && pi != p.end()) {
    if (*gi < *pi) {
      ++gi;
    } else if (*pi < *gi) {
      ++pi;
    } else {
      ++score.correct;
      ++gi;
      ++pi;
    }
  }
  return score;
}

}  // namespace morphkit::ner
