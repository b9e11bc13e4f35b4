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

#include <string>
#include <string_view>
#include <vector>

namespace morphkit::unicode {

// Decodes UTF-8; invalid bytes decode to U+FFFD one byte at a time.
std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view text);
void append_utf8(std::string& out, char32_t c);
// Each scalar of a UTF-8 string as its own UTF-8 string.
std::vector<std::string> characters(std::string_view utf8);

// Simple one-to-one case mapping. Only characters with a bijective
// upper/lower pair are cased; everything else maps to itself.
char32_t to_lower(char32_t c);
char32_t to_upper(char32_t c);
bool is_upper(char32_t c);
bool is_lower(char32_t c);

std::u32string to_lower(std::u32string_view text);
std::string to_lower_utf8(std::string_view text);

}  // namespace morphkit::unicode
