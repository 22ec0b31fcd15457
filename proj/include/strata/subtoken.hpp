#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "strata/util.hpp"

namespace strata {

// Splits an identifier into lowercase subtokens at underscores, dollar
// signs, lower->upper boundaries, letter<->digit boundaries, and acronym
// boundaries (in an uppercase run followed by a lowercase letter, the last
// uppercase letter starts the next subtoken).
//
//   "camelCase"   -> camel, case
//   "under_scores"-> under, scores
//   "HTTPServer2" -> http, server, 2
//
// Every returned subtoken is a pure letter run or a pure digit run, so
// joining with underscores and re-splitting recovers the list exactly.
inline std::vector<std::string> split_identifier(std::string_view ident) {
  if (ident.empty()) throw Error("empty identifier");
  std::vector<std::string> parts;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      parts.push_back(cur);
      cur.clear();
    }
  };
  const size_t n = ident.size();
  for (size_t i = 0; i < n; ++i) {
    unsigned char c = static_cast<unsigned char>(ident[i]);
    if (c == '_' || c == '$') {
      flush();
      continue;
    }
    if (!std::isalnum(c)) throw Error("invalid identifier character in: " + std::string(ident));
    if (!cur.empty()) {
      unsigned char p = static_cast<unsigned char>(ident[i - 1]);
      bool boundary = false;
      if (std::islower(p) && std::isupper(c)) {
        boundary = true;
      } else if (std::isalpha(p) && std::isdigit(c)) {
        boundary = true;
      } else if (std::isdigit(p) && std::isalpha(c)) {
        boundary = true;
      } else if (std::isupper(p) && std::isupper(c) && i + 1 < n &&
                 std::islower(static_cast<unsigned char>(ident[i + 1]))) {
        boundary = true;
      }
      if (boundary) flush();
    }
    cur.push_back(static_cast<char>(std::tolower(c)));
  }
  flush();
  return parts;
}

inline std::string join_underscore(const std::vector<std::string>& parts) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back('_');
    out += parts[i];
  }
  return out;
}

// ASCII Java identifier: [A-Za-z_$][A-Za-z0-9_$]*
inline bool is_java_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto head = static_cast<unsigned char>(s[0]);
  if (!std::isalpha(head) && head != '_' && head != '$') return false;
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    if (!std::isalnum(c) && c != '_' && c != '$') return false;
  }
  return true;
}

}  // namespace strata
