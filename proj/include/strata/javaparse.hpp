#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "strata/lexer.hpp"
#include "strata/method.hpp"

namespace strata {

struct RenameResult {
  std::string new_source;
  size_t replaced_count = 0;
  std::string replacement;
};

namespace detail {

// Token-stream scanner for local variable declarations. Scope analysis is
// brace-depth based; generic type arguments are recognized by a balanced
// angle-bracket scan that aborts on anything a type argument list cannot
// contain. False negatives (missed variables) are acceptable, false
// positives are not.
class LocalVarScanner {
 public:
  explicit LocalVarScanner(const MethodUnit& m) : m_(m), t_(m.body_tokens) {
    for (size_t i = 0; i < t_.size(); ++i) {
      if (t_[i].kind != TokenKind::whitespace && t_[i].kind != TokenKind::comment)
        sig_.push_back(i);
    }
  }

  std::vector<LocalVariable> run() {
    match_braces();
    size_t body_open = find_sig_pos(m_.body_start - 1);
    collect_param_names(body_open);
    scan_declarations(body_open);
    filter_and_collect_uses();
    return std::move(result_);
  }

 private:
  struct Decl {
    std::string name;
    size_t name_pos;       // sig position of the declaring identifier
    size_t scope_end_pos;  // sig position of the closing brace of its scope
    int depth;
    bool eligible;  // false: participates in duplicate filtering only
  };

  const Token& tok(size_t p) const { return t_[sig_[p]]; }
  size_t count() const { return sig_.size(); }
  bool is_text(size_t p, const char* s) const { return p < count() && tok(p).text == s; }
  bool is_ident(size_t p) const { return p < count() && tok(p).kind == TokenKind::identifier; }
  bool is_keyword(size_t p, const char* s) const {
    return p < count() && tok(p).kind == TokenKind::keyword && tok(p).text == s;
  }

  size_t find_sig_pos(size_t token_idx) const {
    auto it = std::lower_bound(sig_.begin(), sig_.end(), token_idx);
    if (it == sig_.end() || *it != token_idx) throw Error("internal: token is not significant");
    return static_cast<size_t>(it - sig_.begin());
  }

  void match_braces() {
    std::vector<size_t> stack;
    for (size_t p = 0; p < count(); ++p) {
      if (is_text(p, "{")) stack.push_back(p);
      if (is_text(p, "}")) {
        if (stack.empty()) throw Error("internal: unbalanced braces past lexer");
        brace_close_[stack.back()] = p;
        stack.pop_back();
      }
    }
  }

  // Walks back from the body '{' over an optional throws clause to the
  // signature parens and records the parameter names.
  void collect_param_names(size_t body_open) {
    if (body_open == 0) return;
    size_t p = body_open - 1;
    while (p > 0 && (is_ident(p) || is_text(p, ",") || is_text(p, ".") || is_keyword(p, "throws")))
      --p;
    if (!is_text(p, ")")) return;
    size_t close = p;
    long depth = 0;
    size_t open = close;
    while (true) {
      if (is_text(open, ")")) ++depth;
      if (is_text(open, "(")) {
        if (--depth == 0) break;
      }
      if (open == 0) return;
      --open;
    }
    // Split [open+1, close) on top-level commas; the last identifier of
    // each segment is the parameter name.
    long paren = 0, angle = 0, bracket = 0;
    std::optional<size_t> last_ident;
    for (size_t q = open + 1; q <= close; ++q) {
      const std::string& x = tok(q).text;
      bool at_top = paren == 0 && angle == 0 && bracket == 0;
      if (q == close || (x == "," && at_top)) {
        if (last_ident) param_names_.insert(tok(*last_ident).text);
        last_ident.reset();
        continue;
      }
      if (x == "(") ++paren;
      else if (x == ")") --paren;
      else if (x == "<") ++angle;
      else if (x == ">") --angle;
      else if (x == "[") ++bracket;
      else if (x == "]") --bracket;
      else if (is_ident(q)) last_ident = q;
    }
  }

  // Balanced scan of a generic argument list starting at '<'. Returns the
  // position just past the matching '>' or nullopt when the contents are
  // not type-argument shaped.
  std::optional<size_t> scan_generic_args(size_t p) const {
    if (!is_text(p, "<")) return std::nullopt;
    long depth = 0;
    for (size_t q = p; q < count() && q < p + 256; ++q) {
      const Token& x = tok(q);
      if (x.text == "<") {
        ++depth;
      } else if (x.text == ">") {
        if (--depth == 0) return q + 1;
      } else if (x.kind == TokenKind::identifier || x.text == "," || x.text == "." ||
                 x.text == "?" || x.text == "[" || x.text == "]" || x.text == "&" ||
                 is_keyword(q, "extends") || is_keyword(q, "super")) {
        // still type-argument shaped
      } else {
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  // Skips annotations: '@' qualified-name optional '(...)'.
  size_t skip_annotations(size_t p) const {
    while (is_text(p, "@") && is_ident(p + 1)) {
      p += 2;
      while (is_text(p, ".") && is_ident(p + 1)) p += 2;
      if (is_text(p, "(")) {
        long depth = 0;
        while (p < count()) {
          if (is_text(p, "(")) ++depth;
          if (is_text(p, ")") && --depth == 0) {
            ++p;
            break;
          }
          ++p;
        }
      }
    }
    return p;
  }

  // Consumes a type at p: primitive keyword or qualified identifier with
  // optional generic arguments, then any [] pairs. Returns position after.
  std::optional<size_t> scan_type(size_t p) const {
    static const std::set<std::string> primitives = {"boolean", "byte",  "char",  "short",
                                                     "int",     "long",  "float", "double"};
    if (p < count() && tok(p).kind == TokenKind::keyword && primitives.count(tok(p).text)) {
      ++p;
    } else if (is_ident(p)) {
      ++p;
      while (is_text(p, ".") && is_ident(p + 1)) p += 2;
      if (is_text(p, "<")) {
        auto after = scan_generic_args(p);
        if (!after) return std::nullopt;
        p = *after;
      }
    } else {
      return std::nullopt;
    }
    while (is_text(p, "[") && is_text(p + 1, "]")) p += 2;
    return p;
  }

  // Skips an initializer expression up to a top-level ',' or ';'. Generic
  // argument lists inside (e.g. new HashMap<String, Integer>()) are jumped
  // so their commas do not end the declarator.
  std::optional<size_t> skip_initializer(size_t p) const {
    long paren = 0, bracket = 0, brace = 0;
    while (p < count()) {
      const std::string& x = tok(p).text;
      if (paren == 0 && bracket == 0 && brace == 0 && (x == "," || x == ";")) return p;
      if (x == "(") ++paren;
      else if (x == ")") { if (--paren < 0) return std::nullopt; }
      else if (x == "[") ++bracket;
      else if (x == "]") { if (--bracket < 0) return std::nullopt; }
      else if (x == "{") ++brace;
      else if (x == "}") { if (--brace < 0) return std::nullopt; }
      else if (x == "<" && p > 0 && is_ident(p - 1)) {
        if (auto after = scan_generic_args(p)) {
          p = *after;
          continue;
        }
      }
      ++p;
    }
    return std::nullopt;
  }

  struct ParsedDecl {
    std::vector<size_t> name_positions;
    size_t end_pos;     // position of the terminating ';' or ':'
    bool enhanced_for;  // name followed by ':' (only valid in a for header)
  };

  std::optional<ParsedDecl> try_parse_declaration(size_t p, bool for_context) const {
    p = skip_annotations(p);
    while (is_keyword(p, "final")) p = skip_annotations(p + 1);
    auto after_type = scan_type(p);
    if (!after_type) return std::nullopt;
    size_t q = *after_type;
    ParsedDecl out{{}, 0, false};
    while (true) {
      if (!is_ident(q)) return std::nullopt;
      size_t name_pos = q;
      ++q;
      while (is_text(q, "[") && is_text(q + 1, "]")) q += 2;
      if (is_text(q, "=") && !is_text(q + 1, "=")) {
        out.name_positions.push_back(name_pos);
        auto stop = skip_initializer(q + 1);
        if (!stop) return std::nullopt;
        q = *stop;
        if (is_text(q, ";")) {
          out.end_pos = q;
          return out;
        }
        ++q;  // ','
        continue;
      }
      if (is_text(q, ";")) {
        out.name_positions.push_back(name_pos);
        out.end_pos = q;
        return out;
      }
      if (is_text(q, ",")) {
        out.name_positions.push_back(name_pos);
        ++q;
        continue;
      }
      if (is_text(q, ":") && for_context && !is_text(q + 1, ":")) {
        out.name_positions.push_back(name_pos);
        out.end_pos = q;
        out.enhanced_for = true;
        return out;
      }
      return std::nullopt;
    }
  }

  void scan_declarations(size_t body_open) {
    std::vector<size_t> open_stack = {body_open};
    bool stmt_start = true;
    size_t method_end = brace_close_.at(body_open);
    for (size_t p = body_open + 1; p < method_end; ++p) {
      const Token& x = tok(p);
      if (x.text == "{" && x.kind == TokenKind::punct) {
        open_stack.push_back(p);
        stmt_start = true;
        continue;
      }
      if (x.text == "}" && x.kind == TokenKind::punct) {
        if (!open_stack.empty()) open_stack.pop_back();
        stmt_start = true;
        continue;
      }
      if (is_keyword(p, "for")) {
        handle_for(p, open_stack.size());
        stmt_start = false;
        continue;
      }
      if (is_keyword(p, "catch")) {
        // catch parameter names join the duplicate filter only
        if (is_text(p + 1, "(")) {
          size_t q = p + 2;
          std::optional<size_t> last;
          long depth = 1;
          while (q < count() && depth > 0) {
            if (is_text(q, "(")) ++depth;
            if (is_text(q, ")")) --depth;
            if (depth > 0 && is_ident(q)) last = q;
            ++q;
          }
          if (last) decls_.push_back(Decl{tok(*last).text, *last, *last, 0, false});
        }
        stmt_start = false;
        continue;
      }
      if (stmt_start) {
        if (auto d = try_parse_declaration(p, /*for_context=*/false)) {
          if (!d->enhanced_for && !open_stack.empty()) {
            size_t scope_end = brace_close_.at(open_stack.back());
            for (size_t np : d->name_positions)
              decls_.push_back(Decl{tok(np).text, np, scope_end,
                                    static_cast<int>(open_stack.size()), true});
          }
        }
      }
      stmt_start = x.text == ";";
    }
  }

  // A for-header declaration's scope runs through the end of the for
  // statement; bodies that are not blocks are conservatively omitted.
  void handle_for(size_t for_pos, size_t depth) {
    if (!is_text(for_pos + 1, "(")) return;
    size_t open = for_pos + 1;
    long d = 0;
    size_t close = open;
    while (close < count()) {
      if (is_text(close, "(")) ++d;
      if (is_text(close, ")") && --d == 0) break;
      ++close;
    }
    if (close >= count()) return;
    auto decl = try_parse_declaration(open + 1, /*for_context=*/true);
    if (!decl) return;
    bool block_body = is_text(close + 1, "{");
    size_t scope_end = block_body ? brace_close_.at(close + 1) : close;
    for (size_t np : decl->name_positions)
      decls_.push_back(
          Decl{tok(np).text, np, scope_end, static_cast<int>(depth), block_body});
  }

  void filter_and_collect_uses() {
    std::map<std::string, int> decl_counts;
    for (const Decl& d : decls_) ++decl_counts[d.name];
    for (const Decl& d : decls_) {
      if (!d.eligible) continue;
      if (decl_counts[d.name] > 1) continue;  // shadowing or sibling redeclaration
      if (param_names_.count(d.name)) continue;
      LocalVariable var;
      var.name = d.name;
      var.decl_span = tok(d.name_pos).span;
      var.scope_depth = d.depth;
      for (size_t p = d.name_pos + 1; p < d.scope_end_pos; ++p) {
        if (!is_ident(p) || tok(p).text != d.name) continue;
        if (p > 0 && (is_text(p - 1, ".") || is_text(p - 1, "::") || is_text(p - 1, "@")))
          continue;  // member access, method reference, annotation
        if (is_text(p + 1, "(")) continue;  // method invocation namespace
        var.use_spans.push_back(tok(p).span);
      }
      result_.push_back(std::move(var));
    }
  }

  const MethodUnit& m_;
  const std::vector<Token>& t_;
  std::vector<size_t> sig_;
  std::map<size_t, size_t> brace_close_;
  std::set<std::string> param_names_;
  std::vector<Decl> decls_;
  std::vector<LocalVariable> result_;
};

}  // namespace detail

// Returns the unambiguous local variables of a method body: statement
// declarations, classic for-inits, and enhanced-for variables. Formal
// parameters, catch parameters, lambda parameters, and any name declared
// more than once are excluded.
inline std::vector<LocalVariable> find_local_variables(const MethodUnit& m) {
  return detail::LocalVarScanner(m).run();
}

// Fills m.local_vars in place.
inline void analyze_method(MethodUnit& m) { m.local_vars = find_local_variables(m); }

// Replaces the declaration and every use of `var` with new_name. The new
// name must be a valid non-reserved identifier and must not collide with
// any identifier occurring in the method (identity renames are allowed).
inline RenameResult rename_variable(const MethodUnit& m, const LocalVariable& var,
                                    const std::string& new_name) {
  if (!is_java_identifier(new_name)) throw Error("invalid identifier: " + new_name);
  if (java_reserved_names().count(new_name)) throw Error("reserved word: " + new_name);
  if (new_name != var.name) {
    for (const Token& t : m.body_tokens) {
      if (t.kind == TokenKind::identifier && t.text == new_name)
        throw Error("name conflict: " + new_name);
    }
  }
  std::vector<ByteSpan> spans = var.use_spans;
  spans.push_back(var.decl_span);
  std::sort(spans.begin(), spans.end(),
            [](const ByteSpan& a, const ByteSpan& b) { return a.begin < b.begin; });
  std::string out;
  out.reserve(m.source.size() + spans.size() * new_name.size());
  size_t cursor = 0;
  for (const ByteSpan& s : spans) {
    out.append(m.source, cursor, s.begin - cursor);
    out.append(new_name);
    cursor = s.end;
  }
  out.append(m.source, cursor, std::string::npos);
  return RenameResult{std::move(out), spans.size(), new_name};
}

// Mechanical safety check: new_source must re-lex to a token stream
// identical to the original except identifier tokens carrying var.name at
// exactly the renamed spans, which now carry new_name.
inline bool rename_is_token_safe(const MethodUnit& m, const LocalVariable& var,
                                 const std::string& new_name, const std::string& new_source) {
  std::vector<Token> relexed;
  try {
    relexed = lex_java(new_source);
  } catch (const Error&) {
    return false;
  }
  if (relexed.size() != m.body_tokens.size()) return false;
  std::set<size_t> replaced_at;
  replaced_at.insert(var.decl_span.begin);
  for (const ByteSpan& s : var.use_spans) replaced_at.insert(s.begin);
  size_t seen = 0;
  for (size_t i = 0; i < relexed.size(); ++i) {
    const Token& a = m.body_tokens[i];
    const Token& b = relexed[i];
    if (a.kind != b.kind) return false;
    if (a.text == b.text) continue;
    if (a.kind != TokenKind::identifier) return false;
    if (a.text != var.name || b.text != new_name) return false;
    if (!replaced_at.count(a.span.begin)) return false;
    ++seen;
  }
  // Identity renames change no text; otherwise every span must differ.
  return new_name == var.name ? seen == 0 : seen == replaced_at.size();
}

}  // namespace strata
