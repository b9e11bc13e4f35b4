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
#include "morphkit/lemma/lemma_rules.hpp"

#include <algorithm>
#include <charconv>

#include "morphkit/common/unicode.hpp"

namespace morphkit::lemma {

namespace {

void serialize_script(std::string& out, const EditScript& script) {
  for (const auto& op : script) {
    switch (op.kind) {
      case EditKind::copy:
        out += '.';
        break;
      case EditKind::delete_char:
        out += '-';
        break;
      case EditKind::insert_char:
        out += '+';
        unicode::append_utf8(out, op.ch);
        break;
    }
  }
}

// Parses ops from text[pos..] until stop (or end when stop is 0).
EditScript parse_script(const std::u32string& text, size_t& pos, char32_t stop) {
  EditScript script;
  while (pos < text.size() && text[pos] != stop) {
    switch (text[pos]) {
      case U'.':
        script.push_back(EditOp::copy());
        break;
      case U'-':
        script.push_back(EditOp::erase());
        break;
      case U'+':
        if (++pos >= text.size()) throw DataError("lemma rule: insert without character");
        script.push_back(EditOp::insert(text[pos]));
        break;
      default:
        throw DataError("lemma rule: unexpected script character");
    }
    ++pos;
  }
  return script;
}

void run_script(const EditScript& script, std::u32string_view source, std::u32string& out) {
  size_t pos = 0;
  for (const auto& op : script) {
    switch (op.kind) {
      case EditKind::copy:
        out.push_back(source[pos++]);
        break;
      case EditKind::delete_char:
        ++pos;
        break;
      case EditKind::insert_char:
        out.push_back(op.ch);
        break;
    }
  }
}

}  // namespace

size_t edit_cost(const EditScript& script) {
  return static_cast<size_t>(std::count_if(script.begin(), script.end(),
                                           [](const EditOp& op) { return op.kind != EditKind::copy; }));
}

size_t source_length(const EditScript& script) {
  return static_cast<size_t>(std::count_if(script.begin(), script.end(), [](const EditOp& op) {
    return op.kind != EditKind::insert_char;
  }));
}

std::optional<CommonSubstring> longest_common_substring(std::u32string_view a, std::u32string_view b) {
  // run[j] = length of the common run ending at a[i-1], b[j-1]
  std::vector<size_t> run(b.size() + 1, 0), prev(b.size() + 1, 0);
  std::optional<CommonSubstring> best;
  for (size_t i = 1; i <= a.size(); ++i) {
    for (size_t j = 1; j <= b.size(); ++j) {
      run[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : 0;
      if (run[j] == 0) continue;
      CommonSubstring cand{i - run[j], j - run[j], run[j]};
      if (!best || cand.length > best->length ||
          (cand.length == best->length &&
           (cand.a_start < best->a_start ||
            (cand.a_start == best->a_start && cand.b_start < best->b_start))))
        best = cand;
    }
    std::swap(run, prev);
  }
  return best;
}

EditScript shortest_edit_script(std::u32string_view src, std::u32string_view dst) {
  const size_t n = src.size(), m = dst.size();
  // cost[i][j]: minimal deletes+inserts turning src[i:] into dst[j:]
  std::vector<size_t> cost((n + 1) * (m + 1));
  auto at = [&](size_t i, size_t j) -> size_t& { return cost[i * (m + 1) + j]; };
  for (size_t i = n + 1; i-- > 0;) {
    for (size_t j = m + 1; j-- > 0;) {
      if (i == n) {
        at(i, j) = m - j;
      } else if (j == m) {
        at(i, j) = n - i;
      } else {
        size_t best = 1 + std::min(at(i + 1, j), at(i, j + 1));
        if (src[i] == dst[j]) best = std::min(best, at(i + 1, j + 1));
        at(i, j) = best;
      }
    }
  }
  EditScript script;
  size_t i = 0, j = 0;
  while (i < n || j < m) {
    if (i < n && at(i, j) == 1 + at(i + 1, j)) {
      script.push_back(EditOp::erase());
      ++i;
    } else if (i < n && j < m && src[i] == dst[j] && at(i, j) == at(i + 1, j + 1)) {
      script.push_back(EditOp::copy());
      ++i;
      ++j;
    } else {
      script.push_back(EditOp::insert(dst[j]));
      ++j;
    }
  }
  return script;
}

std::vector<CasingMark> encode_casing(std::u32string_view lemma) {
  std::vector<CasingMark> marks;
  const size_t len = lemma.size();
  if (len == 0) return marks;
  const size_t first_half = (len + 1) / 2;
  auto mark_at = [&](size_t index, LetterCase c) {
    if (index < first_half)
      marks.push_back({Anchor::from_start, index, c});
    else
      marks.push_back({Anchor::from_end, len - 1 - index, c});
  };

  // Leading caseless characters belong to the segment of the first cased one.
  LetterCase current = LetterCase::lower;
  for (char32_t c : lemma) {
    if (unicode::is_upper(c)) {
      current = LetterCase::upper;
      break;
    }
    if (unicode::is_lower(c)) break;
  }
  mark_at(0, current);
  for (size_t i = 1; i < len; ++i) {
    const char32_t c = lemma[i];
    LetterCase here;
    if (unicode::is_upper(c))
      here = LetterCase::upper;
    else if (unicode::is_lower(c))
      here = LetterCase::lower;
    else
      continue;
    if (here != current) {
      mark_at(i, here);
      current = here;
    }
  }
  return marks;
}

LemmaRule build_rule(std::string_view form, std::string_view lemma) {
  const std::u32string lemma32 = unicode::decode(lemma);
  const std::u32string form_lower = unicode::to_lower(unicode::decode(form));
  const std::u32string lemma_lower = unicode::to_lower(lemma32);

  LemmaRule rule;
  auto common = longest_common_substring(form_lower, lemma_lower);
  if (!common) {
    rule.kind = LemmaRule::Kind::literal;
    rule.literal_lemma = std::string(lemma);
    return rule;
  }
  const std::u32string_view f(form_lower), l(lemma_lower);
  rule.kind = LemmaRule::Kind::edit;
  rule.prefix_script = shortest_edit_script(f.substr(0, common->a_start), l.substr(0, common->b_start));
  rule.suffix_script = shortest_edit_script(f.substr(common->a_start + common->length),
                                            l.substr(common->b_start + common->length));
  rule.casing = encode_casing(lemma32);
  return rule;
}

std::string apply_rule(const LemmaRule& rule, std::string_view form) {
  if (rule.kind == LemmaRule::Kind::literal) return rule.literal_lemma;

  const std::u32string f = unicode::to_lower(unicode::decode(form));
  const size_t prefix_len = source_length(rule.prefix_script);
  const size_t suffix_len = source_length(rule.suffix_script);
  if (prefix_len + suffix_len > f.size())
    throw RuleMismatch("lemma rule consumes " + std::to_string(prefix_len + suffix_len) +
                       " characters of a " + std::to_string(f.size()) + "-character form");

  const std::u32string_view fv(f);
  std::u32string lemma;
  run_script(rule.prefix_script, fv.substr(0, prefix_len), lemma);
  lemma.append(fv.substr(prefix_len, f.size() - prefix_len - suffix_len));
  run_script(rule.suffix_script, fv.substr(f.size() - suffix_len), lemma);

  const size_t len = lemma.size();
  for (const auto& mark : rule.casing) {
    if (mark.offset >= len) throw RuleMismatch("casing mark outside the lemma");
    const size_t start = mark.anchor == Anchor::from_start ? mark.offset : len - 1 - mark.offset;
    for (size_t i = start; i < len; ++i)
      lemma[i] = mark.letter_case == LetterCase::upper ? unicode::to_upper(lemma[i]) : unicode::to_lower(lemma[i]);
  }
  return unicode::encode(lemma);
}

std::optional<std::string> try_apply_rule(const LemmaRule& rule, std::string_view form) {
  try {
    return apply_rule(rule, form);
  } catch (const RuleMismatch&) {
    return std::nullopt;
  }
}

std::string LemmaRule::serialize() const {
  std::string out;
  for (size_t i = 0; i < casing.size(); ++i) {
    if (i) out += ',';
    out += casing[i].anchor == Anchor::from_start ? '^' : '$';
    out += std::to_string(casing[i].offset);
    out += casing[i].letter_case == LetterCase::upper ? 'u' : 'l';
  }
  out += ';';
  if (kind == Kind::literal) {
    out += '=';
    out += literal_lemma;
  } else {
    out += '~';
    serialize_script(out, prefix_script);
    out += '|';
    serialize_script(out, suffix_script);
  }
  return out;
}

LemmaRule LemmaRule::parse(std::string_view text) {
  const size_t semi = text.find(';');
  if (semi == std::string_view::npos || semi + 1 >= text.size())
    throw DataError("lemma rule: missing body in '" + std::string(text) + "'");
  LemmaRule rule;
  std::string_view casing_part = text.substr(0, semi);
  while (!casing_part.empty()) {
    size_t comma = casing_part.find(',');
    std::string_view mark = casing_part.substr(0, comma);
    if (mark.size() < 3 || (mark.front() != '^' && mark.front() != '$') ||
        (mark.back() != 'l' && mark.back() != 'u'))
      throw DataError("lemma rule: malformed casing mark '" + std::string(mark) + "'");
    CasingMark m;
    m.anchor = mark.front() == '^' ? Anchor::from_start : Anchor::from_end;
    m.letter_case = mark.back() == 'u' ? LetterCase::upper : LetterCase::lower;
    auto digits = mark.substr(1, mark.size() - 2);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), m.offset);
    if (ec != std::errc() || ptr != digits.data() + digits.size())
      throw DataError("lemma rule: malformed casing offset '" + std::string(mark) + "'");
    rule.casing.push_back(m);
    casing_part = comma == std::string_view::npos ? std::string_view{} : casing_part.substr(comma + 1);
  }

  const char tag = text[semi + 1];
  if (tag == '=') {
    rule.kind = Kind::literal;
    rule.literal_lemma = std::string(text.substr(semi + 2));
    return rule;
  }
  if (tag != '~') throw DataError("lemma rule: unknown body kind in '" + std::string(text) + "'");
  rule.kind = Kind::edit;
  const std::u32string body = unicode::decode(text.substr(semi + 2));
  size_t pos = 0;
  rule.prefix_script = parse_script(body, pos, U'|');
  if (pos >= body.size()) throw DataError("lemma rule: missing suffix script");
  ++pos;
  rule.suffix_script = parse_script(body, pos, 0);
  return rule;
}

}  // namespace morphkit::lemma
