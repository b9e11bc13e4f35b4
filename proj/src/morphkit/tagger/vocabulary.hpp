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

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "morphkit/common/error.hpp"

namespace morphkit::tagger {

// Insertion-ordered string <-> id map. Ids are dense and stable, so the
// lowest-index tie-break of every argmax follows first occurrence in the
// training data.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(const std::vector<std::string>& items) {
    for (const auto& s : items) {
      if (find(s)) throw DataError("duplicate vocabulary item '" + s + "'");
      add(s);
    }
  }

  int add(const std::string& item) {
    auto [it, inserted] = ids_.emplace(item, static_cast<int>(items_.size()));
    if (inserted) items_.push_back(item);
    return it->second;
  }

  std::optional<int> find(std::string_view item) const {
    auto it = ids_.find(std::string(item));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  int id_or(std::string_view item, int fallback) const { return find(item).value_or(fallback); }
  const std::string& item(int id) const { return items_.at(static_cast<size_t>(id)); }
  size_t size() const { return items_.size(); }
  const std::vector<std::string>& items() const { return items_; }

  nlohmann::json to_json() const { return items_; }
  static Vocabulary from_json(const nlohmann::json& j) { return Vocabulary(j.get<std::vector<std::string>>()); }

 private:
  std::vector<std::string> items_;
  std::unordered_map<std::string, int> ids_;
};

}  // namespace morphkit::tagger
