#pragma once

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "lgdda/error.hpp"
#include "lgdda/formula.hpp"
#include "lgdda/grades.hpp"

namespace lgdda::axioms {

/// D{J,k}(φ -> ψ) -> (D{J,k} φ -> D{J,k} ψ)
struct K {
  Group group;
  Grade k;
  OuterFormula phi, psi;
};

/// B{i,k} α -> B{i,k'} α, k ≥ k'
struct MonTri {
  Agent agent;
  Grade k, k_weaker;
  InnerFormula body;
};

/// A set Ω of member beliefs implies that J, at level k, keeps every belief
/// outside some sub-selection of total grade ≤ k.
struct IntTriBox {
  std::vector<InnerFormula> omega;  // each a B-formula
  Group group;
  Grade k;
};

/// A set Ψ of subgroup boxes implies that J, at level k, keeps the bodies of
/// the boxes a partition of k leaves within reach.
struct IntBoxBox {
  std::vector<OuterFormula> psi;  // each a D-formula
  Group group;
  Grade k;
};

/// D{J,k} φ -> D{J,k'} φ, k ≥ k'
struct MonK {
  Group group;
  Grade k, k_weaker;
  OuterFormula phi;
};

/// D{J,k} φ -> D{J',k} φ, J ⊆ J'
struct MonJ {
  Group group, larger;
  Grade k;
  OuterFormula phi;
};

using Schema = std::variant<K, MonTri, IntTriBox, IntBoxBox, MonK, MonJ>;

inline OuterFormula instantiate(const K& s) {
  return implies(box(s.group, s.k, implies(s.phi, s.psi)),
                 implies(box(s.group, s.k, s.phi), box(s.group, s.k, s.psi)));
}

inline OuterFormula instantiate(const MonTri& s) {
  if (s.k < s.k_weaker) throw Error("MonTri needs k >= k'");
  return implies(OuterFormula(believes(s.agent, s.k, s.body)), OuterFormula(believes(s.agent, s.k_weaker, s.body)));
}

inline OuterFormula instantiate(const IntTriBox& s) {
  std::set<std::pair<Agent, InnerFormula>> pairs;
  for (const auto& t : s.omega) {
    if (t.op() != Op::tri) throw Error("IntTriBox premise is not a belief formula");
    if (!s.group.contains(t.agent())) throw Error("IntTriBox belief of agent outside the group");
    if (!pairs.insert({t.agent(), t.operand()}).second)
      throw Error("IntTriBox has two grades for the same agent and body");
  }
  if (s.omega.size() >= 20) throw Error("IntTriBox premise set too large");
  std::vector<OuterFormula> premises(s.omega.begin(), s.omega.end());
  std::vector<OuterFormula> disjuncts;
  // Ω' ranges over subsets in increasing bitmask order; the disjunct keeps Ω ∖ Ω'.
  for (std::uint32_t mask = 0; mask < (1u << s.omega.size()); ++mask) {
    Grade sum = 0;
    for (std::size_t i = 0; i < s.omega.size(); ++i)
      if (mask & (1u << i)) sum += s.omega[i].grade();
    if (sum > s.k) continue;
    std::vector<OuterFormula> kept;
    for (std::size_t i = 0; i < s.omega.size(); ++i)
      if (!(mask & (1u << i))) kept.push_back(OuterFormula(s.omega[i].operand()));
    disjuncts.push_back(big_conj(kept));
  }
  return implies(big_conj(premises), box(s.group, s.k, big_disj(disjuncts)));
}

inline OuterFormula instantiate(const IntBoxBox& s) {
  for (const auto& b : s.psi) {
    if (b.op() != Op::box) throw Error("IntBoxBox premise is not a D-formula");
    if (!b.group().subset_of(s.group)) throw Error("IntBoxBox premise group is not a subgroup");
  }
  std::vector<OuterFormula> disjuncts;
  for (const auto& delta : partitions(s.k, s.group)) {
    std::vector<OuterFormula> kept;
    for (const auto& b : s.psi)
      if (Grade(delta.sum_over(b.group())) <= b.grade()) kept.push_back(b.operand());
    disjuncts.push_back(big_conj(kept));
  }
  return implies(big_conj(s.psi), box(s.group, s.k, big_disj(disjuncts)));
}

inline OuterFormula instantiate(const MonK& s) {
  if (s.k < s.k_weaker) throw Error("MonK needs k >= k'");
  return implies(box(s.group, s.k, s.phi), box(s.group, s.k_weaker, s.phi));
}

inline OuterFormula instantiate(const MonJ& s) {
  if (!s.group.subset_of(s.larger)) throw Error("MonJ needs J ⊆ J'");
  return implies(box(s.group, s.k, s.phi), box(s.larger, s.k, s.phi));
}

inline OuterFormula instantiate(const Schema& s) {
  return std::visit([](const auto& v) { return instantiate(v); }, s);
}

/// Necessitation as a corpus transformer: from a valid φ, D{J,k} φ.
inline OuterFormula necessitate(const OuterFormula& valid, const Group& group, Grade k) {
  return box(group, k, valid);
}

struct Bounds {
  std::size_t max_agents = 2;
  std::uint64_t max_grade = 2;
  std::vector<std::string> atoms{"p"};
  std::size_t max_omega = 2;  // |Ω|
  std::size_t max_psi = 2;    // |Ψ|
};

namespace detail {

template <class T, class Visitor>
void for_each_subset_upto(const std::vector<T>& items, std::size_t max_size, std::vector<T>& current,
                          std::size_t from, Visitor& visit) {
  visit(current);
  if (current.size() == max_size) return;
  for (std::size_t i = from; i < items.size(); ++i) {
    current.push_back(items[i]);
    for_each_subset_upto(items, max_size, current, i + 1, visit);
    current.pop_back();
  }
}

}  // namespace detail

/// Every schema instance within the bounds, in a fixed order. Agents are
/// named "1".."n"; bodies range over the atom pool (⊤ and ⊥ for K when the
/// pool is empty).
inline std::vector<OuterFormula> corpus(const Bounds& b) {
  std::vector<Agent> agents;
  for (std::size_t i = 1; i <= b.max_agents; ++i) agents.push_back(std::to_string(i));
  const std::vector<Group> groups = agents.empty() ? std::vector<Group>{} : all_groups(agents);

  std::vector<InnerFormula> bodies;
  for (const auto& p : b.atoms) bodies.push_back(atom(p));
  std::vector<OuterFormula> k_operands;
  if (bodies.empty()) {
    k_operands = {InnerFormula::top(), InnerFormula::bottom()};
  } else {
    for (const auto& a : bodies) k_operands.push_back(a);
  }

  std::vector<OuterFormula> out;
  for (const auto& g : groups)
    for (std::uint64_t k = 0; k <= b.max_grade; ++k)
      for (const auto& phi : k_operands)
        for (const auto& psi : k_operands) out.push_back(instantiate(K{g, k, phi, psi}));

  for (const auto& a : agents)
    for (std::uint64_t k = 1; k <= b.max_grade; ++k)
      for (std::uint64_t k2 = 1; k2 <= k; ++k2)
        for (const auto& body : bodies) out.push_back(instantiate(MonTri{a, k, k2, body}));

  for (const auto& g : groups)
    for (std::uint64_t k = 0; k <= b.max_grade; ++k)
      for (std::uint64_t k2 = 0; k2 <= k; ++k2)
        for (const auto& phi : bodies) out.push_back(instantiate(MonK{g, k, k2, OuterFormula(phi)}));

  for (const auto& g : groups)
    for (const auto& larger : groups)
      if (g.subset_of(larger))
        for (std::uint64_t k = 0; k <= b.max_grade; ++k)
          for (const auto& phi : bodies) out.push_back(instantiate(MonJ{g, larger, k, OuterFormula(phi)}));

  for (const auto& g : groups) {
    // Ω: one grade per (member, body) pair.
    std::vector<std::pair<Agent, InnerFormula>> slots;
    for (const auto& a : g)
      for (const auto& body : bodies) slots.emplace_back(a, body);
    std::vector<std::pair<Agent, InnerFormula>> chosen;
    auto with_grades = [&](const std::vector<std::pair<Agent, InnerFormula>>& pick) {
      std::vector<std::uint64_t> grades(pick.size(), 1);
      while (true) {
        std::vector<InnerFormula> omega;
        for (std::size_t i = 0; i < pick.size(); ++i)
          omega.push_back(believes(pick[i].first, grades[i], pick[i].second));
        for (std::uint64_t k = 0; k <= b.max_grade; ++k) out.push_back(instantiate(IntTriBox{omega, g, k}));
        std::size_t i = 0;
        while (i < grades.size() && grades[i] == b.max_grade) grades[i++] = 1;
        if (i == grades.size()) break;
        ++grades[i];
      }
    };
    if (b.max_grade >= 1) detail::for_each_subset_upto(slots, b.max_omega, chosen, 0, with_grades);
  }

  for (const auto& g : groups) {
    std::vector<OuterFormula> candidates;
    for (const auto& sub : groups)
      if (sub.subset_of(g))
        for (std::uint64_t k = 0; k <= b.max_grade; ++k)
          for (const auto& body : bodies) candidates.push_back(box(sub, k, OuterFormula(body)));
    std::vector<OuterFormula> chosen;
    auto emit = [&](const std::vector<OuterFormula>& psi) {
      for (std::uint64_t k = 0; k <= b.max_grade; ++k) out.push_back(instantiate(IntBoxBox{psi, g, k}));
    };
    detail::for_each_subset_upto(candidates, b.max_psi, chosen, 0, emit);
  }
  return out;
}

}  // namespace lgdda::axioms
