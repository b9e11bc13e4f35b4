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
#include "morphkit/common/unicode.hpp"

#include <unordered_map>

namespace morphkit::unicode {

namespace {

struct CaseTables {
  std::unordered_map<char32_t, char32_t> upper_to_lower;
  std::unordered_map<char32_t, char32_t> lower_to_upper;

  void pair(char32_t upper, char32_t lower) {
    upper_to_lower.emplace(upper, lower);
    lower_to_upper.emplace(lower, upper);
  }

  // Alternating upper/lower pairs starting at an upper-case code point.
  void alternating(char32_t first_upper, char32_t last_lower) {
    for (char32_t c = first_upper; c + 1 <= last_lower; c += 2) pair(c, c + 1);
  }

  CaseTables() {
    for (char32_t c = U'A'; c <= U'Z'; ++c) pair(c, c + 0x20);
    for (char32_t c = 0xC0; c <= 0xDE; ++c)
      if (c != 0xD7) pair(c, c + 0x20);
    pair(0x178, 0xFF);
    alternating(0x100, 0x12F);
    alternating(0x132, 0x137);
    alternating(0x139, 0x148);
    alternating(0x14A, 0x177);
    alternating(0x179, 0x17E);
    alternating(0x1CD, 0x1DC);
    alternating(0x1DE, 0x1EF);
    alternating(0x1F8, 0x21F);
    // Greek
    for (char32_t c = 0x391; c <= 0x3A9; ++c)
      if (c != 0x3A2) pair(c, c + 0x20);
    pair(0x386, 0x3AC);
    for (char32_t c = 0x388; c <= 0x38A; ++c) pair(c, c + 0x25);
    pair(0x38C, 0x3CC);
    pair(0x38E, 0x3CD);
    pair(0x38F, 0x3CE);
    // Cyrillic
    for (char32_t c = 0x410; c <= 0x42F; ++c) pair(c, c + 0x20);
    for (char32_t c = 0x400; c <= 0x40F; ++c) pair(c, c + 0x50);
    alternating(0x460, 0x481);
    alternating(0x48A, 0x4BF);
    alternating(0x4D0, 0x52F);
    // Latin Extended Additional
    alternating(0x1E00, 0x1E95);
    alternating(0x1EA0, 0x1EFF);
  }
};

const CaseTables& tables() {
  static const CaseTables instance;
  return instance;
}

}  // namespace

std::u32string decode(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  size_t i = 0;
  while (i < utf8.size()) {
    const auto b0 = static_cast<unsigned char>(utf8[i]);
    int extra = 0;
    char32_t c = 0;
    if (b0 < 0x80) {
      c = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      c = b0 & 0x1F;
      extra = 1;
    } else if ((b0 & 0xF0) == 0xE0) {
      c = b0 & 0x0F;
      extra = 2;
    } else if ((b0 & 0xF8) == 0xF0) {
      c = b0 & 0x07;
      extra = 3;
    } else {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    if (i + extra >= utf8.size()) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    bool ok = true;
    for (int k = 1; k <= extra; ++k) {
      const auto b = static_cast<unsigned char>(utf8[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      c = (c << 6) | (b & 0x3F);
    }
    if (!ok) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    out.push_back(c);
    i += extra + 1;
  }
  return out;
}

void append_utf8(std::string& out, char32_t c) {
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

std::string encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) append_utf8(out, c);
  return out;
}

char32_t to_lower(char32_t c) {
  const auto& t = tables().upper_to_lower;
  auto it = t.find(c);
  return it == t.end() ? c : it->second;
}

char32_t to_upper(char32_t c) {
  const auto& t = tables().lower_to_upper;
  auto it = t.find(c);
  return it == t.end() ? c : it->second;
}

bool is_upper(char32_t c) { return tables().upper_to_lower.count(c) != 0; }
bool is_lower(char32_t c) { return tables().lower_to_upper.count(c) != 0; }

std::u32string to_lower(std::u32string_view text) {
  std::u32string out(text);
  for (auto& c : out) c = to_lower(c);
  return out;
}

std::string to_lower_utf8(std::string_view text) { return encode(to_lower(decode(text))); }

std::vector<std::string> characters(std::string_view utf8) {
  std::vector<std::string> out;
  for (char32_t c : decode(utf8)) {
    std::string s;
    append_utf8(s, c);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace morphkit::unicode
