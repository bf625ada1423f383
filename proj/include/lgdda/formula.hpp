#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lgdda/error.hpp"
#include "lgdda/grades.hpp"

namespace lgdda {

enum class Op : std::uint8_t { top, atom, neg, conj, tri, box };

namespace detail {

struct FormulaNode {
  Op op;
  std::string atom;            // atom
  Agent agent;                 // tri
  std::optional<Group> group;  // box
  Grade grade;                 // tri, box
  std::shared_ptr<const FormulaNode> lhs;  // neg, conj, tri, box
  std::shared_ptr<const FormulaNode> rhs;  // conj
  std::size_t hash = 0;
  std::size_t size = 1;
  std::size_t modal_depth = 0;
  std::size_t box_depth = 0;
  bool has_box = false;
};

using NodePtr = std::shared_ptr<const FormulaNode>;

inline std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

inline NodePtr make_node(FormulaNode n) {
  std::size_t h = std::hash<int>{}(static_cast<int>(n.op));
  n.size = 1;
  switch (n.op) {
    case Op::top:
      break;
    case Op::atom:
      h = hash_combine(h, std::hash<std::string>{}(n.atom));
      break;
    case Op::neg:
      n.size += n.lhs->size;
      n.modal_depth = n.lhs->modal_depth;
      n.box_depth = n.lhs->box_depth;
      n.has_box = n.lhs->has_box;
      h = hash_combine(h, n.lhs->hash);
      break;
    case Op::conj:
      n.size += n.lhs->size + n.rhs->size;
      n.modal_depth = std::max(n.lhs->modal_depth, n.rhs->modal_depth);
      n.box_depth = std::max(n.lhs->box_depth, n.rhs->box_depth);
      n.has_box = n.lhs->has_box || n.rhs->has_box;
      h = hash_combine(hash_combine(h, n.lhs->hash), n.rhs->hash);
      break;
    case Op::tri:
      n.size += n.lhs->size;
      n.modal_depth = n.lhs->modal_depth + 1;
      h = hash_combine(h, std::hash<std::string>{}(n.agent));
      h = hash_combine(h, std::hash<std::string>{}(n.grade.to_string()));
      h = hash_combine(h, n.lhs->hash);
      break;
    case Op::box:
      n.size += n.lhs->size;
      n.modal_depth = n.lhs->modal_depth + 1;
      n.box_depth = n.lhs->box_depth + 1;
      n.has_box = true;
      for (const auto& a : *n.group) h = hash_combine(h, std::hash<std::string>{}(a));
      h = hash_combine(h, std::hash<std::string>{}(n.grade.to_string()));
      h = hash_combine(h, n.lhs->hash);
      break;
  }
  n.hash = h;
  return std::make_shared<const FormulaNode>(std::move(n));
}

/// Structural total order: size, then connective, then payload, then children.
inline std::strong_ordering compare(const NodePtr& a, const NodePtr& b) {
  if (a == b) return std::strong_ordering::equal;
  if (auto c = a->size <=> b->size; c != 0) return c;
  if (auto c = a->op <=> b->op; c != 0) return c;
  switch (a->op) {
    case Op::top:
      return std::strong_ordering::equal;
    case Op::atom:
      return a->atom <=> b->atom;
    case Op::neg:
      return compare(a->lhs, b->lhs);
    case Op::conj:
      if (auto c = compare(a->lhs, b->lhs); c != 0) return c;
      return compare(a->rhs, b->rhs);
    case Op::tri:
      if (auto c = a->agent <=> b->agent; c != 0) return c;
      if (auto c = a->grade <=> b->grade; c != 0) return c;
      return compare(a->lhs, b->lhs);
    case Op::box:
      if (auto c = *a->group <=> *b->group; c != 0) return c;
      if (auto c = a->grade <=> b->grade; c != 0) return c;
      return compare(a->lhs, b->lhs);
  }
  return std::strong_ordering::equal;
}

inline bool equal(const NodePtr& a, const NodePtr& b) {
  return a == b || (a->hash == b->hash && compare(a, b) == 0);
}

}  // namespace detail

class OuterFormula;

/// A formula of the belief-base language: atoms, ⊤, ¬, ∧ and B{i,k}.
/// Never contains a D-modality.
class InnerFormula {
 public:
  static InnerFormula top() { return InnerFormula(detail::make_node({.op = Op::top})); }
  static InnerFormula bottom() { return negation(top()); }
  static InnerFormula atom(std::string name) {
    if (name.empty()) throw Error("empty atom name");
    return InnerFormula(detail::make_node({.op = Op::atom, .atom = std::move(name)}));
  }
  static InnerFormula negation(const InnerFormula& f) {
    return InnerFormula(detail::make_node({.op = Op::neg, .lhs = f.node_}));
  }
  static InnerFormula conjunction(const InnerFormula& a, const InnerFormula& b) {
    return InnerFormula(detail::make_node({.op = Op::conj, .lhs = a.node_, .rhs = b.node_}));
  }
  /// B{agent,k} body; k ≥ 1, ω allowed.
  static InnerFormula believes(Agent agent, Grade k, const InnerFormula& body) {
    if (k == Grade(0)) throw Error("belief grade must be at least 1");
    return InnerFormula(
        detail::make_node({.op = Op::tri, .agent = std::move(agent), .grade = k, .lhs = body.node_}));
  }

  Op op() const { return node_->op; }
  const std::string& atom_name() const { return node_->atom; }
  const Agent& agent() const { return node_->agent; }
  Grade grade() const { return node_->grade; }
  /// Operand of ¬, body of B, left conjunct.
  InnerFormula operand() const { return InnerFormula(node_->lhs); }
  InnerFormula lhs() const { return InnerFormula(node_->lhs); }
  InnerFormula rhs() const { return InnerFormula(node_->rhs); }

  std::size_t size() const { return node_->size; }
  std::size_t hash() const { return node_->hash; }
  const detail::NodePtr& node() const { return node_; }

  friend std::strong_ordering operator<=>(const InnerFormula& a, const InnerFormula& b) {
    return detail::compare(a.node_, b.node_);
  }
  friend bool operator==(const InnerFormula& a, const InnerFormula& b) { return detail::equal(a.node_, b.node_); }

 private:
  friend class OuterFormula;
  explicit InnerFormula(detail::NodePtr n) : node_(std::move(n)) {}
  detail::NodePtr node_;
};

/// A formula of the full language. Both layers share one tree
/// representation, so a box-free OuterFormula is exactly an InnerFormula.
class OuterFormula {
 public:
  OuterFormula(const InnerFormula& inner) : node_(inner.node_) {}

  static OuterFormula negation(const OuterFormula& f) {
    return OuterFormula(detail::make_node({.op = Op::neg, .lhs = f.node_}));
  }
  static OuterFormula conjunction(const OuterFormula& a, const OuterFormula& b) {
    return OuterFormula(detail::make_node({.op = Op::conj, .lhs = a.node_, .rhs = b.node_}));
  }
  /// D{group,k} body; k finite.
  static OuterFormula box(Group group, Grade k, const OuterFormula& body) {
    if (k.is_omega()) throw Error("box grade must be finite");
    return OuterFormula(
        detail::make_node({.op = Op::box, .group = std::move(group), .grade = k, .lhs = body.node_}));
  }

  Op op() const { return node_->op; }
  bool is_inner() const { return !node_->has_box; }
  std::optional<InnerFormula> as_inner() const {
    if (node_->has_box) return std::nullopt;
    return InnerFormula(node_);
  }
  InnerFormula inner() const {
    if (node_->has_box) throw Error("formula contains a D-modality");
    return InnerFormula(node_);
  }

  const std::string& atom_name() const { return node_->atom; }
  const Agent& agent() const { return node_->agent; }
  const Group& group() const { return *node_->group; }
  Grade grade() const { return node_->grade; }
  OuterFormula operand() const { return OuterFormula(node_->lhs); }
  OuterFormula lhs() const { return OuterFormula(node_->lhs); }
  OuterFormula rhs() const { return OuterFormula(node_->rhs); }
  /// Body of a B-formula.
  InnerFormula belief_body() const { return InnerFormula(node_->lhs); }

  std::size_t size() const { return node_->size; }
  std::size_t modal_depth() const { return node_->modal_depth; }
  std::size_t box_depth() const { return node_->box_depth; }
  std::size_t hash() const { return node_->hash; }
  const detail::NodePtr& node() const { return node_; }

  bool is_negation_of(Op op) const { return node_->op == Op::neg && node_->lhs->op == op; }

  friend std::strong_ordering operator<=>(const OuterFormula& a, const OuterFormula& b) {
    return detail::compare(a.node_, b.node_);
  }
  friend bool operator==(const OuterFormula& a, const OuterFormula& b) { return detail::equal(a.node_, b.node_); }

 private:
  explicit OuterFormula(detail::NodePtr n) : node_(std::move(n)) {}
  detail::NodePtr node_;
};

// Derived connectives. They expand into ⊤, ¬, ∧ and the modalities.

template <class F>
F neg(const F& f) {
  return F::negation(f);
}
template <class F>
F conj(const F& a, const F& b) {
  return F::conjunction(a, b);
}
template <class F>
F disj(const F& a, const F& b) {
  return F::negation(F::conjunction(F::negation(a), F::negation(b)));
}
template <class F>
F implies(const F& a, const F& b) {
  return F::negation(F::conjunction(a, F::negation(b)));
}
template <class F>
F iff(const F& a, const F& b) {
  return F::conjunction(implies(a, b), implies(b, a));
}

inline InnerFormula atom(std::string name) { return InnerFormula::atom(std::move(name)); }
inline InnerFormula believes(Agent agent, Grade k, const InnerFormula& body) {
  return InnerFormula::believes(std::move(agent), k, body);
}
inline OuterFormula box(Group group, Grade k, const OuterFormula& body) {
  return OuterFormula::box(std::move(group), k, body);
}
/// Dhat{J,k} φ = ~D{J,k} ~φ.
inline OuterFormula diamond(Group group, Grade k, const OuterFormula& body) {
  return neg(box(std::move(group), k, neg(body)));
}
/// Disagreement of strength at least k ≥ 1: D{J,k-1} false.
inline OuterFormula disagree(Group group, Grade k) {
  if (k.is_omega() || k == Grade(0)) throw Error("disagreement strength must be a finite grade >= 1");
  return box(std::move(group), Grade(k.value() - 1), OuterFormula(InnerFormula::bottom()));
}

/// Left-nested conjunction; ⊤ when empty.
template <class F>
F big_conj(const std::vector<F>& items) {
  if (items.empty()) return F(InnerFormula::top());
  F acc = items.front();
  for (std::size_t i = 1; i < items.size(); ++i) acc = F::conjunction(acc, items[i]);
  return acc;
}
/// Left-nested disjunction; ⊥ when empty.
template <class F>
F big_disj(const std::vector<F>& items) {
  if (items.empty()) return F(InnerFormula::bottom());
  F acc = items.front();
  for (std::size_t i = 1; i < items.size(); ++i) acc = disj(acc, items[i]);
  return acc;
}

// Structural queries.

inline void collect_subformulas(const OuterFormula& f, std::set<OuterFormula>& out) {
  if (!out.insert(f).second) return;
  switch (f.op()) {
    case Op::top:
    case Op::atom:
      break;
    case Op::conj:
      collect_subformulas(f.lhs(), out);
      collect_subformulas(f.rhs(), out);
      break;
    case Op::neg:
    case Op::tri:
    case Op::box:
      collect_subformulas(f.operand(), out);
      break;
  }
}

inline std::set<OuterFormula> subformula_closure(const OuterFormula& f) {
  std::set<OuterFormula> out;
  collect_subformulas(f, out);
  return out;
}

inline std::set<std::string> atoms_of(const OuterFormula& f) {
  std::set<std::string> out;
  for (const auto& g : subformula_closure(f))
    if (g.op() == Op::atom) out.insert(g.atom_name());
  return out;
}

inline std::set<Agent> agents_of(const OuterFormula& f) {
  std::set<Agent> out;
  for (const auto& g : subformula_closure(f)) {
    if (g.op() == Op::tri) out.insert(g.agent());
    if (g.op() == Op::box) out.insert(g.group().begin(), g.group().end());
  }
  return out;
}

}  // namespace lgdda

template <>
struct std::hash<lgdda::InnerFormula> {
  std::size_t operator()(const lgdda::InnerFormula& f) const { return f.hash(); }
};
template <>
struct std::hash<lgdda::OuterFormula> {
  std::size_t operator()(const lgdda::OuterFormula& f) const { return f.hash(); }
};
