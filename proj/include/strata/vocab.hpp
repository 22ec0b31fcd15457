#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "strata/corpus.hpp"
#include "strata/embedding.hpp"

namespace strata {

enum class VocabMode { all, l2, frequency };

inline const char* vocab_mode_name(VocabMode m) {
  switch (m) {
    case VocabMode::all: return "all";
    case VocabMode::l2: return "l2";
    case VocabMode::frequency: return "frequency";
  }
  return "?";
}

inline VocabMode parse_vocab_mode(const std::string& s) {
  if (s == "all") return VocabMode::all;
  if (s == "l2") return VocabMode::l2;
  if (s == "frequency") return VocabMode::frequency;
  throw ValidationError("unknown vocabulary mode: " + s + " (expected all|l2|frequency)");
}

// An ordered pool of replacement subtokens. l2 mode: the n subtokens of
// highest embedding L2 norm, descending. frequency mode: the n most
// frequent, descending count. Ties break lexicographically ascending.
struct Vocabulary {
  VocabMode mode = VocabMode::all;
  size_t n = 0;
  std::vector<std::string> subtokens;
  std::string provenance;
};

inline Vocabulary build_vocabulary(VocabMode mode, std::optional<size_t> n,
                                   const EmbeddingTable* table, const SubtokenStats* stats,
                                   std::string provenance = "") {
  Vocabulary v;
  v.mode = mode;
  v.provenance = std::move(provenance);
  if (mode == VocabMode::all) {
    if (table) {
      for (const auto& [sub, vec] : table->vectors) v.subtokens.push_back(sub);
    } else if (stats) {
      for (const auto& [sub, c] : stats->counts) v.subtokens.push_back(sub);
    } else {
      throw ValidationError("vocabulary mode 'all' needs an embedding table or stats");
    }
    v.n = v.subtokens.size();  // already lexicographic via map order
    return v;
  }
  if (!n || *n == 0) throw ValidationError("vocabulary mode requires a positive cutoff n");
  if (mode == VocabMode::l2) {
    if (!table) throw ValidationError("vocabulary mode 'l2' needs an embedding table");
    if (*n > table->vectors.size())
      throw ValidationError("cutoff n exceeds population (" +
                            std::to_string(table->vectors.size()) + ")");
    std::vector<std::pair<double, std::string>> ranked;
    ranked.reserve(table->vectors.size());
    for (const auto& [sub, vec] : table->vectors) ranked.emplace_back(l2_norm(vec), sub);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (size_t i = 0; i < *n; ++i) v.subtokens.push_back(ranked[i].second);
  } else {
    if (!stats) throw ValidationError("vocabulary mode 'frequency' needs subtoken stats");
    if (*n > stats->rank_order.size())
      throw ValidationError("cutoff n exceeds population (" +
                            std::to_string(stats->rank_order.size()) + ")");
    v.subtokens.assign(stats->rank_order.begin(),
                       stats->rank_order.begin() + static_cast<long>(*n));
  }
  v.n = *n;
  return v;
}

// Vocabulary file: 'STRATA-VOCAB v1 <mode> <n>' then one subtoken per line
// in vocabulary order.
inline std::string write_vocabulary(const Vocabulary& v) {
  std::string out = "STRATA-VOCAB v1 ";
  out += vocab_mode_name(v.mode);
  out += ' ';
  out += std::to_string(v.n);
  out += '\n';
  for (const std::string& sub : v.subtokens) {
    out += sub;
    out += '\n';
  }
  return out;
}

inline Vocabulary read_vocabulary(const std::string& bytes, std::string provenance = "") {
  std::vector<std::string> lines = split_on(bytes, '\n');
  if (lines.empty()) throw ValidationError("vocabulary file: empty");
  auto header = split_on(lines[0], ' ');
  if (header.size() != 4 || header[0] != "STRATA-VOCAB" || header[1] != "v1")
    throw ValidationError("vocabulary file: bad header (expected 'STRATA-VOCAB v1 <mode> <n>')");
  Vocabulary v;
  v.mode = parse_vocab_mode(header[2]);
  v.n = std::stoull(header[3]);
  v.provenance = std::move(provenance);
  for (size_t i = 1; i < lines.size(); ++i)
    if (!lines[i].empty()) v.subtokens.push_back(lines[i]);
  if (v.subtokens.size() != v.n)
    throw ValidationError("vocabulary file: header n=" + std::to_string(v.n) + " but " +
                          std::to_string(v.subtokens.size()) + " subtokens");
  return v;
}

}  // namespace strata
