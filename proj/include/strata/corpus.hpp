#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "strata/javaparse.hpp"
#include "strata/method.hpp"
#include "strata/util.hpp"

namespace strata {

// Per-subtoken occurrence counts over a corpus. rank_order is sorted by
// count descending, ties broken lexicographically ascending.
struct SubtokenStats {
  std::map<std::string, uint64_t> counts;
  uint64_t total = 0;
  std::vector<std::string> rank_order;
};

struct IngestConfig {
  size_t jobs = 0;         // 0 = all cores
  size_t max_methods = 0;  // 0 = no limit
};

struct IngestResult {
  std::vector<MethodUnit> methods;
  size_t skipped = 0;  // methods (or whole files) that failed to lex
  std::vector<std::string> skip_notes;
};

namespace detail {

struct RawMethod {
  std::string id;
  std::string name;
  std::string source;
  size_t byte_offset = 0;
};

// Heuristic method extractor over a lexed .java file: an identifier
// followed by a balanced paren group, an optional throws clause, and an
// opening brace, at brace depth >= 1. Nested matches inside an extracted
// method are skipped.
inline std::vector<RawMethod> extract_methods(const std::string& rel_path,
                                              const std::string& file_source) {
  std::vector<Token> toks = lex_java(file_source);
  std::vector<size_t> sig;
  for (size_t i = 0; i < toks.size(); ++i) {
    if (toks[i].kind != TokenKind::whitespace && toks[i].kind != TokenKind::comment)
      sig.push_back(i);
  }
  auto tok = [&](size_t p) -> const Token& { return toks[sig[p]]; };
  auto is_text = [&](size_t p, const char* s) { return p < sig.size() && tok(p).text == s; };

  std::map<size_t, size_t> brace_close;
  {
    std::vector<size_t> stack;
    for (size_t p = 0; p < sig.size(); ++p) {
      if (is_text(p, "{")) stack.push_back(p);
      if (is_text(p, "}") && !stack.empty()) {
        brace_close[stack.back()] = p;
        stack.pop_back();
      }
    }
  }

  std::vector<RawMethod> out;
  long depth = 0;
  for (size_t p = 0; p < sig.size(); ++p) {
    if (is_text(p, "{")) ++depth;
    if (is_text(p, "}")) --depth;
    if (depth < 1 || tok(p).kind != TokenKind::identifier || !is_text(p + 1, "(")) continue;
    if (p > 0) {
      const Token& prev = tok(p - 1);
      if (prev.text == "." || prev.text == "::" || prev.text == "@") continue;
      if (prev.kind == TokenKind::keyword &&
          (prev.text == "new" || prev.text == "return" || prev.text == "throw" ||
           prev.text == "assert"))
        continue;
    }
    // balanced parens
    size_t q = p + 1;
    long pd = 0;
    while (q < sig.size()) {
      if (is_text(q, "(")) ++pd;
      if (is_text(q, ")") && --pd == 0) break;
      ++q;
    }
    if (q >= sig.size()) continue;
    size_t r = q + 1;
    if (r < sig.size() && tok(r).kind == TokenKind::keyword && tok(r).text == "throws") {
      ++r;
      while (r < sig.size() && (tok(r).kind == TokenKind::identifier || tok(r).text == "," ||
                                tok(r).text == "."))
        ++r;
    }
    if (!is_text(r, "{")) continue;
    auto close_it = brace_close.find(r);
    if (close_it == brace_close.end()) continue;
    size_t close = close_it->second;
    // signature start: just after the previous member boundary
    size_t s = p;
    while (s > 0 && !is_text(s - 1, ";") && !is_text(s - 1, "{") && !is_text(s - 1, "}")) --s;
    size_t begin = tok(s).span.begin;
    size_t end = tok(close).span.end;
    RawMethod m;
    m.name = tok(p).text;
    m.byte_offset = begin;
    m.id = rel_path + ":" + std::to_string(begin);
    m.source = file_source.substr(begin, end - begin);
    out.push_back(std::move(m));
    // resume after this method; nested constructs are not re-extracted
    p = close;
    depth = 0;
    for (size_t b = 0; b <= close; ++b) {
      if (is_text(b, "{")) ++depth;
      if (is_text(b, "}")) --depth;
    }
  }
  return out;
}

}  // namespace detail

// Builds a fully analyzed MethodUnit (tokens, subtokens, local variables).
inline MethodUnit build_method(std::string id, std::string name, std::string source) {
  MethodUnit m = build_method_shallow(std::move(id), std::move(name), std::move(source));
  analyze_method(m);
  return m;
}

inline std::string write_methods_jsonl(const std::vector<MethodUnit>& methods) {
  std::string out;
  for (const MethodUnit& m : methods) {
    nlohmann::ordered_json j;
    j["id"] = m.id;
    j["name"] = m.target_name;
    j["source"] = m.source;
    out += j.dump();
    out += '\n';
  }
  return out;
}

// Parses the canonical methods interchange format: JSONL with one record
// {"id","name","source"} per line. Records whose source fails to lex are
// skipped and counted.
inline IngestResult read_methods_jsonl(const std::string& bytes, const IngestConfig& config = {}) {
  struct Row {
    std::string id, name, source;
  };
  std::vector<Row> rows;
  size_t line_no = 0;
  size_t start = 0;
  while (start < bytes.size()) {
    size_t nl = bytes.find('\n', start);
    std::string_view line(bytes.data() + start,
                          (nl == std::string::npos ? bytes.size() : nl) - start);
    start = nl == std::string::npos ? bytes.size() : nl + 1;
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("id") || !j.contains("name") || !j.contains("source"))
      throw ValidationError("malformed methods JSONL at line " + std::to_string(line_no));
    rows.push_back(Row{j["id"], j["name"], j["source"]});
  }
  IngestResult result;
  std::vector<std::optional<MethodUnit>> built(rows.size());
  std::vector<std::string> errors(rows.size());
  parallel_for(rows.size(), config.jobs, [&](size_t i) {
    try {
      built[i] = build_method(rows[i].id, rows[i].name, rows[i].source);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });
  for (size_t i = 0; i < rows.size(); ++i) {
    if (built[i]) {
      result.methods.push_back(std::move(*built[i]));
    } else {
      ++result.skipped;
      result.skip_notes.push_back(rows[i].id + ": " + errors[i]);
    }
    if (config.max_methods && result.methods.size() >= config.max_methods) break;
  }
  return result;
}

// Ingests a corpus from either a methods JSONL file or a directory tree of
// .java files. Ordering is deterministic: (file path, byte offset).
inline IngestResult ingest_corpus(const std::filesystem::path& root,
                                  const IngestConfig& config = {}) {
  namespace fs = std::filesystem;
  if (!fs::exists(root)) throw ValidationError("no such path: " + root.string());
  IngestResult result;
  if (fs::is_regular_file(root)) {
    result = read_methods_jsonl(read_file(root), config);
  } else if (fs::is_directory(root)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
      if (entry.is_regular_file() && entry.path().extension() == ".java")
        files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });
    struct FileOut {
      std::vector<MethodUnit> methods;
      size_t skipped = 0;
      std::vector<std::string> notes;
    };
    std::vector<FileOut> per_file(files.size());
    parallel_for(files.size(), config.jobs, [&](size_t i) {
      std::string rel = fs::relative(files[i], root).generic_string();
      FileOut& out = per_file[i];
      std::string source;
      try {
        source = read_file(files[i]);
      } catch (const Error& e) {
        ++out.skipped;
        out.notes.push_back(rel + ": " + e.what());
        return;
      }
      std::vector<detail::RawMethod> raw;
      try {
        raw = detail::extract_methods(rel, source);
      } catch (const Error& e) {
        ++out.skipped;
        out.notes.push_back(rel + ": " + e.what());
        return;
      }
      for (detail::RawMethod& rm : raw) {
        try {
          out.methods.push_back(build_method(rm.id, rm.name, std::move(rm.source)));
        } catch (const Error& e) {
          ++out.skipped;
          out.notes.push_back(rm.id + ": " + e.what());
        }
      }
    });
    for (FileOut& f : per_file) {
      for (MethodUnit& m : f.methods) {
        if (config.max_methods && result.methods.size() >= config.max_methods) break;
        result.methods.push_back(std::move(m));
      }
      result.skipped += f.skipped;
      for (std::string& n : f.notes) result.skip_notes.push_back(std::move(n));
    }
  } else {
    throw ValidationError("not a file or directory: " + root.string());
  }
  if (result.methods.empty()) throw Error("empty corpus");
  return result;
}

// Counts every subtoken occurrence from identifier tokens in method bodies
// plus each method's target-name subtokens (the signature's name token is
// not double counted).
inline SubtokenStats compute_stats(const std::vector<MethodUnit>& methods) {
  SubtokenStats stats;
  for (const MethodUnit& m : methods) {
    for (size_t i = m.body_start; i < m.body_tokens.size(); ++i) {
      const Token& t = m.body_tokens[i];
      if (t.kind != TokenKind::identifier) continue;
      for (const std::string& sub : split_identifier(t.text)) {
        ++stats.counts[sub];
        ++stats.total;
      }
    }
    for (const std::string& sub : m.target_subtokens) {
      ++stats.counts[sub];
      ++stats.total;
    }
  }
  stats.rank_order.reserve(stats.counts.size());
  for (const auto& [sub, count] : stats.counts) stats.rank_order.push_back(sub);
  std::sort(stats.rank_order.begin(), stats.rank_order.end(),
            [&](const std::string& a, const std::string& b) {
              uint64_t ca = stats.counts.at(a), cb = stats.counts.at(b);
              return ca != cb ? ca > cb : a < b;
            });
  return stats;
}

inline std::string write_stats_csv(const SubtokenStats& stats) {
  std::string out = "subtoken,count\n";
  for (const std::string& sub : stats.rank_order) {
    out += sub;
    out += ',';
    out += std::to_string(stats.counts.at(sub));
    out += '\n';
  }
  return out;
}

inline SubtokenStats read_stats_csv(const std::string& bytes) {
  SubtokenStats stats;
  std::vector<std::string> lines = split_on(bytes, '\n');
  if (lines.empty() || lines[0] != "subtoken,count")
    throw ValidationError("stats file: bad header (expected 'subtoken,count')");
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto cols = split_on(lines[i], ',');
    if (cols.size() != 2) throw ValidationError("stats file: bad row at line " + std::to_string(i + 1));
    uint64_t count = std::stoull(cols[1]);
    stats.counts[cols[0]] = count;
    stats.total += count;
    stats.rank_order.push_back(cols[0]);
  }
  return stats;
}

}  // namespace strata
