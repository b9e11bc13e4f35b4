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

#include <charconv>
#include <string>
#include <type_traits>

#include "morphkit/common/error.hpp"

namespace morphkit {

// Parses a key=value option value into field, keeping its type.
template <typename T>
void assign_option(const std::string& key, const std::string& value, T& field) {
  if constexpr (std::is_same_v<T, bool>) {
    if (value == "true" || value == "1" || value == "yes") {
      field = true;
    } else if (value == "false" || value == "0" || value == "no") {
      field = false;
    } else {
      throw UsageError("invalid boolean '" + value + "' for " + key);
    }
  } else if constexpr (std::is_same_v<T, std::string>) {
    field = value;
  } else {
    T out{};
    const char* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) throw UsageError("invalid value '" + value + "' for " + key);
    field = out;
  }
}

}  // namespace morphkit
