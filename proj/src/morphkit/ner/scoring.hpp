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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "morphkit/ner/entities.hpp"

namespace morphkit::ner {

enum class CnecLevel { types, supertypes };

// Type -> supertype. Types without an override map to their first character.
class SupertypeMap {
 public:
  SupertypeMap() = default;
  explicit SupertypeMap(std::map<std::string, std::string> overrides) : overrides_(std::move(overrides)) {}
  std::string operator()(const std::string& type) const;

 private:
  std::map<std::string, std::string> overrides_;
};

// Lines "type supertype"; blank lines and '#' comments are skipped.
SupertypeMap load_supertype_map(const std::filesystem::path& path);
// One class per line; blank lines and '#' comments are skipped.
std::set<std::string> load_class_filter(const std::filesystem::path& path);

struct PrfScore {
  size_t correct = 0;
  size_t gold = 0;
  size_t predicted = 0;

  // Percentages; 0 when undefined.
  double precision() const;
  double recall() const;
  double f1() const;
};

// Exact match on (sentence, start, end, label) as multisets. The class
// filter applies to fine types before any supertype mapping.
PrfScore cnec_f1(const std::vector<SentenceEntities>& gold, const std::vector<SentenceEntities>& predicted,
                 CnecLevel level, const std::set<std::string>* class_filter = nullptr,
                 const SupertypeMap& supertypes = {});

}  // namespace morphkit::ner
