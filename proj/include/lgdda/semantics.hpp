#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lgdda/error.hpp"
#include "lgdda/formula.hpp"
#include "lgdda/grades.hpp"

namespace lgdda {

/// A graded multiset of belief-base formulas. Only strictly positive grades
/// are stored; absent formulas have degree 0.
class BeliefBase {
 public:
  BeliefBase() = default;
  BeliefBase(std::initializer_list<std::pair<const InnerFormula, Grade>> entries) {
    for (const auto& [f, g] : entries) add(f, g);
  }

  Grade degree(const InnerFormula& f) const {
    auto it = entries_.find(f);
    return it == entries_.end() ? Grade(0) : it->second;
  }
  Grade operator()(const InnerFormula& f) const { return degree(f); }

  void set(const InnerFormula& f, Grade g) {
    if (g == Grade(0))
      entries_.erase(f);
    else
      entries_.insert_or_assign(f, g);
  }
  void add(const InnerFormula& f, Grade g) { set(f, degree(f) + g); }

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const BeliefBase&, const BeliefBase&) = default;

 private:
  std::map<InnerFormula, Grade> entries_;
};

/// Per-agent belief bases plus the set of true atoms.
struct State {
  std::map<Agent, BeliefBase> bases;
  std::set<std::string> valuation;

  const BeliefBase& base(const Agent& a) const {
    static const BeliefBase empty;
    auto it = bases.find(a);
    return it == bases.end() ? empty : it->second;
  }

  // A missing base and an empty base denote the same state.
  friend bool operator==(const State& a, const State& b) {
    if (a.valuation != b.valuation) return false;
    auto covered = [](const State& x, const State& y) {
      for (const auto& [agent, base] : x.bases)
        if (!(base == y.base(agent))) return false;
      return true;
    };
    return covered(a, b) && covered(b, a);
  }
};

/// A designated state together with a finite context.
struct Magbm {
  std::vector<Agent> agents;
  State designated;
  std::vector<State> context;
};

/// Truth of a belief-base formula at a state.
inline bool eval_state(const State& s, const InnerFormula& f) {
  switch (f.op()) {
    case Op::top:
      return true;
    case Op::atom:
      return s.valuation.count(f.atom_name()) > 0;
    case Op::neg:
      return !eval_state(s, f.operand());
    case Op::conj:
      return eval_state(s, f.lhs()) && eval_state(s, f.rhs());
    case Op::tri:
      return s.base(f.agent()).degree(f.operand()) >= f.grade();
    case Op::box:
      break;
  }
  throw Error("D-modality in belief-base formula");
}

/// The group's pooled base: degrees summed over members.
inline BeliefBase merged_base(const State& s, const Group& group) {
  BeliefBase out;
  for (const auto& a : group)
    for (const auto& [f, g] : s.base(a)) out.add(f, g);
  return out;
}

/// Total weight of the group's pooled beliefs that `target` falsifies.
/// `from R_J^k target` holds iff this is at most k.
inline Grade implausibility(const State& from, const State& target, const Group& group) {
  Grade total = 0;
  for (const auto& [f, g] : merged_base(from, group))
    if (!eval_state(target, f)) total += g;
  return total;
}

namespace detail {

class MagbmChecker {
 public:
  explicit MagbmChecker(const Magbm& m) : m_(m) {}

  bool eval(const State& s, const OuterFormula& f) {
    if (auto inner = f.as_inner()) return eval_state(s, *inner);
    switch (f.op()) {
      case Op::neg:
        return !eval(s, f.operand());
      case Op::conj:
        return eval(s, f.lhs()) && eval(s, f.rhs());
      case Op::box:
        return eval_box(s, f);
      default:
        throw Error("unexpected connective");
    }
  }

 private:
  bool eval_box(const State& s, const OuterFormula& f) {
    auto key = std::make_pair(&s, f);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool result = true;
    for (const auto& target : m_.context) {
      if (implausibility(s, target, f.group()) <= f.grade() && !eval(target, f.operand())) {
        result = false;
        break;
      }
    }
    memo_.emplace(key, result);
    return result;
  }

  const Magbm& m_;
  std::map<std::pair<const State*, OuterFormula>, bool> memo_;
};

}  // namespace detail

/// Truth at the designated state.
inline bool check(const Magbm& m, const OuterFormula& f) {
  detail::MagbmChecker checker(m);
  return checker.eval(m.designated, f);
}

/// min* over the context of the designated state's implausibility. The model
/// satisfies disagree{J,k} exactly for the k ≤ this value.
inline Grade disagreement_degree(const Magbm& m, const Group& group) {
  std::vector<Grade> ds;
  ds.reserve(m.context.size());
  for (const auto& s : m.context) ds.push_back(implausibility(m.designated, s, group));
  return min_star(ds);
}

}  // namespace lgdda
