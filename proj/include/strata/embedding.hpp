#pragma once

#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "strata/corpus.hpp"
#include "strata/util.hpp"

namespace strata {

// Subtoken embedding vectors. Lookup of an absent subtoken returns the unk
// vector and never fails.
struct EmbeddingTable {
  int dim = 0;
  std::map<std::string, std::vector<double>> vectors;
  std::vector<double> unk;

  const std::vector<double>& lookup(const std::string& sub) const {
    auto it = vectors.find(sub);
    return it == vectors.end() ? unk : it->second;
  }
  bool contains(const std::string& sub) const { return vectors.count(sub) != 0; }
};

inline double l2_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double l2_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("dimension mismatch in l2_distance");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// Token embedding: elementwise sum of the embedding vectors of the first
// five subtokens. Subtokens beyond the fifth do not contribute.
inline std::vector<double> compose_token(std::span<const std::string> subtokens,
                                         const EmbeddingTable& table) {
  if (subtokens.empty()) throw Error("compose_token: empty subtoken list");
  std::vector<double> out(static_cast<size_t>(table.dim), 0.0);
  size_t limit = std::min<size_t>(5, subtokens.size());
  for (size_t i = 0; i < limit; ++i) {
    const std::vector<double>& e = table.lookup(subtokens[i]);
    for (size_t d = 0; d < out.size(); ++d) out[d] += e[d];
  }
  return out;
}

struct DriftEntry {
  double l2_distance = 0.0;
  double pre_norm = 0.0;
  double post_norm = 0.0;
  uint64_t count = 0;
};

struct DriftReport {
  std::map<std::string, DriftEntry> per_subtoken;
  std::map<double, double> fraction_below;  // threshold -> fraction with distance < threshold
};

// Per-subtoken distance between two snapshots of the same table, joined
// with corpus frequency counts. Requires identical dim and key sets.
inline DriftReport drift(const EmbeddingTable& pre, const EmbeddingTable& post,
                         const SubtokenStats& stats,
                         const std::vector<double>& extra_thresholds = {}) {
  if (pre.dim != post.dim) throw Error("drift: dimension mismatch");
  std::vector<std::string> offenders;
  for (const auto& [sub, v] : pre.vectors)
    if (!post.vectors.count(sub)) offenders.push_back("post missing " + sub);
  for (const auto& [sub, v] : post.vectors)
    if (!pre.vectors.count(sub)) offenders.push_back("pre missing " + sub);
  if (!offenders.empty()) {
    std::string msg = "drift: key-set mismatch:";
    for (size_t i = 0; i < offenders.size() && i < 8; ++i) msg += " " + offenders[i];
    if (offenders.size() > 8) msg += " (+" + std::to_string(offenders.size() - 8) + " more)";
    throw Error(msg);
  }
  DriftReport report;
  for (const auto& [sub, v_pre] : pre.vectors) {
    const std::vector<double>& v_post = post.vectors.at(sub);
    DriftEntry e;
    e.l2_distance = l2_distance(v_pre, v_post);
    e.pre_norm = l2_norm(v_pre);
    e.post_norm = l2_norm(v_post);
    auto it = stats.counts.find(sub);
    e.count = it == stats.counts.end() ? 0 : it->second;
    report.per_subtoken[sub] = e;
  }
  std::vector<double> thresholds = {0.05};
  for (double t : extra_thresholds)
    if (t != 0.05) thresholds.push_back(t);
  for (double t : thresholds) {
    size_t below = 0;
    for (const auto& [sub, e] : report.per_subtoken)
      if (e.l2_distance < t) ++below;
    report.fraction_below[t] =
        report.per_subtoken.empty() ? 0.0
                                    : static_cast<double>(below) / report.per_subtoken.size();
  }
  return report;
}

// drift.csv rows, sorted by count descending (ties lexicographic).
inline std::string write_drift_csv(const DriftReport& report) {
  std::vector<std::pair<std::string, DriftEntry>> rows(report.per_subtoken.begin(),
                                                       report.per_subtoken.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.second.count != b.second.count ? a.second.count > b.second.count : a.first < b.first;
  });
  std::string out = "subtoken,count,l2_distance,pre_norm,post_norm\n";
  for (const auto& [sub, e] : rows) {
    out += sub;
    out += ',';
    out += std::to_string(e.count);
    out += ',';
    out += format_sig9(e.l2_distance);
    out += ',';
    out += format_sig9(e.pre_norm);
    out += ',';
    out += format_sig9(e.post_norm);
    out += '\n';
  }
  return out;
}

// Line-oriented embedding snapshot:
//   STRATA-EMB v1 <dim> <count>
//   UNK <dim floats>
//   <subtoken> <dim floats>      (sorted lexicographically)
// Floats carry 9 significant digits; equality of snapshots is defined as
// equality of this decimal text.
inline std::string write_embeddings(const EmbeddingTable& table) {
  std::string out = "STRATA-EMB v1 " + std::to_string(table.dim) + " " +
                    std::to_string(table.vectors.size()) + "\n";
  auto emit = [&](const std::string& name, const std::vector<double>& v) {
    out += name;
    for (double x : v) {
      out += ' ';
      out += format_sig9(x);
    }
    out += '\n';
  };
  emit("UNK", table.unk);
  for (const auto& [sub, v] : table.vectors) emit(sub, v);
  return out;
}

inline EmbeddingTable read_embeddings_at(const std::vector<std::string>& lines, size_t& idx) {
  if (idx >= lines.size()) throw ValidationError("embedding file: missing header");
  auto header = split_on(lines[idx], ' ');
  if (header.size() != 4 || header[0] != "STRATA-EMB" || header[1] != "v1")
    throw ValidationError("embedding file: bad header (expected 'STRATA-EMB v1 <dim> <count>')");
  EmbeddingTable table;
  table.dim = std::stoi(header[2]);
  size_t count = std::stoull(header[3]);
  ++idx;
  auto parse_row = [&](const std::string& line, std::string& name, std::vector<double>& v) {
    auto parts = split_on(line, ' ');
    if (parts.size() != static_cast<size_t>(table.dim) + 1)
      throw ValidationError("embedding file: row has wrong arity: " + line.substr(0, 40));
    name = parts[0];
    v.resize(static_cast<size_t>(table.dim));
    for (int d = 0; d < table.dim; ++d) v[static_cast<size_t>(d)] = std::stod(parts[static_cast<size_t>(d) + 1]);
  };
  if (idx >= lines.size()) throw ValidationError("embedding file: missing UNK row");
  std::string name;
  parse_row(lines[idx], name, table.unk);
  if (name != "UNK") throw ValidationError("embedding file: expected UNK row");
  ++idx;
  for (size_t i = 0; i < count; ++i, ++idx) {
    if (idx >= lines.size()) throw ValidationError("embedding file: truncated");
    std::vector<double> v;
    parse_row(lines[idx], name, v);
    table.vectors[name] = std::move(v);
  }
  return table;
}

inline EmbeddingTable read_embeddings(const std::string& bytes) {
  std::vector<std::string> lines = split_on(bytes, '\n');
  size_t idx = 0;
  return read_embeddings_at(lines, idx);
}

}  // namespace strata
