#pragma once

#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lgdda/error.hpp"
#include "lgdda/formula.hpp"

namespace lgdda {

// Concrete syntax
//
//   formula  := equiv
//   equiv    := implic ( "<->" implic )*        left-assoc
//   implic   := disjunct ( "->" implic )?       right-assoc
//   disjunct := conjunct ( "|" conjunct )*
//   conjunct := unary ( "&" unary )*
//   unary    := "~" unary | "B{" agent "," grade "}" unary
//             | "D{" agents "," grade "}" unary | "Dhat{" agents "," grade "}" unary
//             | "disagree{" agents "," grade "}" | "true" | "false" | atom
//             | "(" formula ")"
//
// Agents are separated by whitespace; grades are decimal or "w".

struct ParseOptions {
  /// When set, every agent must be listed here.
  std::optional<std::set<Agent>> agents;
};

namespace detail {

inline bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
 public:
  Parser(std::string_view text, const ParseOptions& opts) : text_(text), opts_(opts) {}

  OuterFormula parse() {
    OuterFormula f = equiv();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const { throw ParseError(msg, at); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }

  std::string word() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  OuterFormula equiv() {
    OuterFormula f = implic();
    while (accept("<->")) f = iff(f, implic());
    return f;
  }

  OuterFormula implic() {
    OuterFormula f = disjunct();
    if (accept("->")) return implies(f, implic());
    return f;
  }

  OuterFormula disjunct() {
    OuterFormula f = conjunct();
    while (accept("|")) f = disj(f, conjunct());
    return f;
  }

  OuterFormula conjunct() {
    OuterFormula f = unary();
    while (accept("&")) f = conj(f, unary());
    return f;
  }

  Agent agent_name() {
    skip_ws();
    std::size_t at = pos_;
    std::string a = word();
    if (a.empty()) fail("expected agent name");
    if (opts_.agents && !opts_.agents->count(a)) fail_at("undeclared agent '" + a + "'", at);
    return a;
  }

  Grade grade() {
    skip_ws();
    std::size_t at = pos_;
    std::string g = word();
    if (g.empty()) fail("expected grade");
    try {
      return Grade::parse(g);
    } catch (const Error&) {
      fail_at("malformed grade '" + g + "'", at);
    }
  }

  /// `agents "," grade "}"` after the opening brace.
  std::pair<Group, Grade> group_and_grade(bool allow_omega) {
    skip_ws();
    std::size_t at = pos_;
    std::vector<Agent> members;
    while (true) {
      skip_ws();
      if (pos_ < text_.size() && is_ident_char(text_[pos_]))
        members.push_back(agent_name());
      else
        break;
    }
    if (members.empty()) fail_at("empty group", at);
    expect(",");
    skip_ws();
    std::size_t grade_at = pos_;
    Grade k = grade();
    if (!allow_omega && k.is_omega()) fail_at("box grade must be finite", grade_at);
    expect("}");
    return {Group(std::move(members)), k};
  }

  OuterFormula unary() {
    skip_ws();
    std::size_t at = pos_;
    if (accept("~")) return neg(unary());
    if (accept("(")) {
      OuterFormula f = equiv();
      expect(")");
      return f;
    }
    std::string w = word();
    if (w.empty()) {
      if (pos_ >= text_.size()) fail("unexpected end of input");
      fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    }
    if (w == "true") return InnerFormula::top();
    if (w == "false") return InnerFormula::bottom();
    if (w == "B" || w == "D" || w == "Dhat" || w == "disagree") {
      if (pos_ >= text_.size() || text_[pos_] != '{') fail_at("reserved word '" + w + "' must be followed by '{'", at);
      ++pos_;
    }
    if (w == "B") {
      Agent a = agent_name();
      expect(",");
      skip_ws();
      std::size_t grade_at = pos_;
      Grade k = grade();
      if (k == Grade(0)) fail_at("belief grade must be at least 1", grade_at);
      expect("}");
      skip_ws();
      std::size_t body_at = pos_;
      OuterFormula body = unary();
      if (!body.is_inner()) fail_at("D-modality inside a belief operator", body_at);
      return believes(std::move(a), k, body.inner());
    }
    if (w == "D" || w == "Dhat") {
      auto [group, k] = group_and_grade(false);
      OuterFormula body = unary();
      return w == "D" ? box(std::move(group), k, body) : diamond(std::move(group), k, body);
    }
    if (w == "disagree") {
      skip_ws();
      auto [group, k] = group_and_grade(false);
      if (k == Grade(0)) fail_at("disagreement strength must be at least 1", at);
      return disagree(std::move(group), k);
    }
    if (std::isdigit(static_cast<unsigned char>(w[0]))) fail_at("atom names cannot start with a digit", at);
    return atom(std::move(w));
  }

  std::string_view text_;
  const ParseOptions& opts_;
  std::size_t pos_ = 0;
};

enum class Prec { conj, unary };

inline void render_into(const OuterFormula& f, Prec ctx, std::string& out) {
  switch (f.op()) {
    case Op::top:
      out += "true";
      return;
    case Op::atom:
      out += f.atom_name();
      return;
    case Op::neg:
      if (f.operand().op() == Op::top) {
        out += "false";
        return;
      }
      out += '~';
      render_into(f.operand(), Prec::unary, out);
      return;
    case Op::conj:
      if (ctx == Prec::unary) out += '(';
      render_into(f.lhs(), Prec::conj, out);
      out += " & ";
      render_into(f.rhs(), Prec::unary, out);
      if (ctx == Prec::unary) out += ')';
      return;
    case Op::tri:
      out += "B{" + f.agent() + "," + f.grade().to_string() + "} ";
      render_into(f.operand(), Prec::unary, out);
      return;
    case Op::box:
      out += "D{" + f.group().to_string() + "," + f.grade().to_string() + "} ";
      render_into(f.operand(), Prec::unary, out);
      return;
  }
}

}  // namespace detail

inline OuterFormula parse(std::string_view text, const ParseOptions& opts = {}) {
  return detail::Parser(text, opts).parse();
}

/// Parses text that must denote a box-free formula.
inline InnerFormula parse_inner(std::string_view text, const ParseOptions& opts = {}) {
  OuterFormula f = parse(text, opts);
  if (!f.is_inner()) throw ParseError("D-modality in a belief-base formula", 0);
  return f.inner();
}

/// Canonical text in core connectives only. parse(render(f)) == f.
inline std::string render(const OuterFormula& f) {
  std::string out;
  detail::render_into(f, detail::Prec::conj, out);
  return out;
}

inline std::string render(const InnerFormula& f) { return render(OuterFormula(f)); }

inline std::ostream& operator<<(std::ostream& os, const OuterFormula& f) { return os << render(f); }
inline std::ostream& operator<<(std::ostream& os, const InnerFormula& f) { return os << render(f); }

}  // namespace lgdda
