// Copyright 2026 The procgraph Authors.
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

#ifndef PROCGRAPH_TEXT_HPP_
#define PROCGRAPH_TEXT_HPP_

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace procgraph {

inline std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

inline bool contains_ci(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return true;
  return lowercase(haystack).find(lowercase(needle)) != std::string::npos;
}

// Whitespace tokenization with punctuation isolated into single-char tokens.
// Shared by the BLEU scorer and the offline language stubs.
inline std::vector<std::string> tokenize(std::string_view s, bool case_fold = true) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  };
  for (char raw : s) {
    unsigned char c = static_cast<unsigned char>(raw);
    char ch = case_fold ? static_cast<char>(std::tolower(c)) : raw;
    if (std::isalnum(c)) {
      cur += ch;
    } else if (std::isspace(c)) {
      flush();
    } else {
      flush();
      out.emplace_back(1, ch);
    }
  }
  flush();
  return out;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

inline bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

inline bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// Splits on `.?!` followed by whitespace (or end of input); keeps the
// terminator with the sentence. Blank pieces are dropped.
inline std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (size_t i = 0; i < text.size(); ++i) {
    cur += text[i];
    bool terminator = text[i] == '.' || text[i] == '?' || text[i] == '!';
    bool at_break = i + 1 >= text.size() ||
                    std::isspace(static_cast<unsigned char>(text[i + 1]));
    if (terminator && at_break) {
      std::string s = trim(cur);
      if (!s.empty()) out.push_back(s);
      cur.clear();
    }
  }
  std::string tail = trim(cur);
  if (!tail.empty()) out.push_back(tail);
  return out;
}

// Replaces every occurrence of {{key}} in a template body.
inline std::string fill_placeholder(std::string text, std::string_view key,
                                    std::string_view value) {
  const std::string token = "{{" + std::string(key) + "}}";
  size_t pos = 0;
  while ((pos = text.find(token, pos)) != std::string::npos) {
    text.replace(pos, token.size(), value);
    pos += value.size();
  }
  return text;
}

}  // namespace procgraph

#endif  // PROCGRAPH_TEXT_HPP_
