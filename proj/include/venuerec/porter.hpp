/*
 * Copyright 2026 The venuerec Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <array>
#include <string>
#include <string_view>

namespace venuerec {

/// The Porter (1980) suffix-stripping stemmer, as originally published.
///
/// Operates on lowercase ASCII words. Words of length <= 2 and words with
/// any character outside [a-z] are returned unchanged.
class PorterStemmer {
 public:
  std::string operator()(std::string_view word) const {
    std::string w(word);
    if (w.size() <= 2) return w;
    for (char c : w) {
      if (c < 'a' || c > 'z') return w;
    }
    step1a(w);
    step1b(w);
    step1c(w);
    step2(w);
    step3(w);
    step4(w);
    step5(w);
    return w;
  }

 private:
  struct Rule {
    std::string_view suffix;
    std::string_view replacement;
  };

  static bool is_consonant(const std::string& w, std::size_t i) {
    switch (w[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !is_consonant(w, i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in w[0, len).
  static int measure(const std::string& w, std::size_t len) {
    int m = 0;
    std::size_t i = 0;
    while (i < len && is_consonant(w, i)) ++i;
    while (i < len) {
      while (i < len && !is_consonant(w, i)) ++i;
      if (i >= len) break;
      while (i < len && is_consonant(w, i)) ++i;
      ++m;
    }
    return m;
  }

  static bool has_vowel(const std::string& w, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) {
      if (!is_consonant(w, i)) return true;
    }
    return false;
  }

  static bool ends_double_consonant(const std::string& w, std::size_t len) {
    return len >= 2 && w[len - 1] == w[len - 2] && is_consonant(w, len - 1);
  }

  // consonant-vowel-consonant where the final consonant is not w, x or y.
  static bool ends_cvc(const std::string& w, std::size_t len) {
    if (len < 3) return false;
    if (!is_consonant(w, len - 3) || is_consonant(w, len - 2) || !is_consonant(w, len - 1)) {
      return false;
    }
    char c = w[len - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  static bool ends_with(const std::string& w, std::string_view s) {
    return w.size() >= s.size() && std::string_view(w).substr(w.size() - s.size()) == s;
  }

  // Longest matching suffix wins; if its condition (m > min_measure on the
  // stem) fails, nothing fires.
  template <std::size_t N>
  static void apply_longest(std::string& w, const std::array<Rule, N>& rules, int min_measure) {
    const Rule* best = nullptr;
    for (const auto& r : rules) {
      if (ends_with(w, r.suffix) && (!best || r.suffix.size() > best->suffix.size())) best = &r;
    }
    if (!best) return;
    std::size_t stem = w.size() - best->suffix.size();
    if (measure(w, stem) > min_measure) {
      w.resize(stem);
      w += best->replacement;
    }
  }

  static void step1a(std::string& w) {
    if (ends_with(w, "sses")) {
      w.resize(w.size() - 2);
    } else if (ends_with(w, "ies")) {
      w.resize(w.size() - 2);
    } else if (ends_with(w, "ss")) {
    } else if (ends_with(w, "s")) {
      w.pop_back();
    }
  }

  static void step1b(std::string& w) {
    if (ends_with(w, "eed")) {
      if (measure(w, w.size() - 3) > 0) w.pop_back();
      return;
    }
    std::size_t cut = 0;
    if (ends_with(w, "ed") && has_vowel(w, w.size() - 2)) {
      cut = 2;
    } else if (ends_with(w, "ing") && has_vowel(w, w.size() - 3)) {
      cut = 3;
    }
    if (cut == 0) return;
    w.resize(w.size() - cut);
    if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
      w += 'e';
    } else if (ends_double_consonant(w, w.size())) {
      char c = w.back();
      if (c != 'l' && c != 's' && c != 'z') w.pop_back();
    } else if (measure(w, w.size()) == 1 && ends_cvc(w, w.size())) {
      w += 'e';
    }
  }

  static void step1c(std::string& w) {
    if (ends_with(w, "y") && has_vowel(w, w.size() - 1)) w.back() = 'i';
  }

  static void step2(std::string& w) {
    static constexpr std::array<Rule, 20> rules{{
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},   {"anci", "ance"},
        {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},     {"entli", "ent"},
        {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
        {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"},
    }};
    apply_longest(w, rules, 0);
  }

  static void step3(std::string& w) {
    static constexpr std::array<Rule, 7> rules{{
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    }};
    apply_longest(w, rules, 0);
  }

  static void step4(std::string& w) {
    static constexpr std::array<std::string_view, 19> suffixes{
        "al",  "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement", "ment",
        "ent", "ion",  "ou",   "ism", "ate", "iti",  "ous",  "ive", "ize"};
    std::string_view best;
    for (auto s : suffixes) {
      if (ends_with(w, s) && s.size() > best.size()) best = s;
    }
    if (best.empty()) return;
    std::size_t stem = w.size() - best.size();
    if (measure(w, stem) <= 1) return;
    if (best == "ion" && (stem == 0 || (w[stem - 1] != 's' && w[stem - 1] != 't'))) return;
    w.resize(stem);
  }

  static void step5(std::string& w) {
    if (ends_with(w, "e")) {
      std::size_t stem = w.size() - 1;
      int m = measure(w, stem);
      if (m > 1 || (m == 1 && !ends_cvc(w, stem))) w.pop_back();
    }
    if (w.size() >= 2 && w.back() == 'l' && ends_double_consonant(w, w.size()) &&
        measure(w, w.size()) > 1) {
      w.pop_back();
    }
  }
};

inline std::string porter_stem(std::string_view word) { return PorterStemmer{}(word); }

}  // namespace venuerec
