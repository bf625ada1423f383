#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lgdda/error.hpp"
#include "lgdda/formula.hpp"
#include "lgdda/grades.hpp"
#include "lgdda/kripke.hpp"
#include "lgdda/syntax.hpp"
#include "lgdda/tableau.hpp"

namespace lgdda::oracle {

struct RandomConfig {
  std::vector<Agent> agents{"1", "2"};
  std::vector<std::string> atoms{"p", "q"};
  std::uint64_t max_grade = 2;
  std::size_t max_depth = 3;
  /// Relative weights of atom, ⊤, ¬, ∧, B, D at inner nodes of the tree.
  std::array<unsigned, 6> weights{3, 0, 3, 3, 2, 3};
  std::uint64_t seed = 0;
};

namespace detail {

class Generator {
 public:
  explicit Generator(const RandomConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
    if (cfg_.atoms.empty()) throw Error("random formulas need at least one atom");
  }

  OuterFormula outer(std::size_t depth) { return build(depth, true); }

 private:
  enum Kind { kAtom, kTop, kNeg, kConj, kTri, kBox };

  std::uint64_t below(std::uint64_t n) { return rng_() % n; }

  Kind pick(bool allow_box) {
    std::array<unsigned, 6> w = cfg_.weights;
    if (!allow_box) w[kBox] = 0;
    if (cfg_.agents.empty()) w[kTri] = w[kBox] = 0;
    unsigned total = 0;
    for (auto x : w) total += x;
    if (total == 0) return kAtom;
    unsigned r = static_cast<unsigned>(below(total));
    for (int k = 0; k < 6; ++k) {
      if (r < w[k]) return static_cast<Kind>(k);
      r -= w[k];
    }
    return kAtom;
  }

  OuterFormula build(std::size_t depth, bool allow_box) {
    if (depth == 0) return atom(cfg_.atoms[below(cfg_.atoms.size())]);
    switch (pick(allow_box)) {
      case kAtom:
        return atom(cfg_.atoms[below(cfg_.atoms.size())]);
      case kTop:
        return InnerFormula::top();
      case kNeg:
        return neg(build(depth - 1, allow_box));
      case kConj: {
        OuterFormula a = build(depth - 1, allow_box);
        return conj(a, build(depth - 1, allow_box));
      }
      case kTri: {
        Agent a = cfg_.agents[below(cfg_.agents.size())];
        Grade k = 1 + below(std::max<std::uint64_t>(cfg_.max_grade, 1));
        return believes(std::move(a), k, build(depth - 1, false).inner());
      }
      case kBox: {
        std::vector<Agent> members;
        while (members.empty())
          for (const auto& a : cfg_.agents)
            if (below(2)) members.push_back(a);
        Grade k = below(cfg_.max_grade + 1);
        return box(Group(std::move(members)), k, build(depth - 1, true));
      }
    }
    return atom(cfg_.atoms.front());
  }

  const RandomConfig& cfg_;
  std::mt19937_64 rng_;
};

}  // namespace detail

/// A well-formed formula of nesting depth at most cfg.max_depth, fixed by the
/// seed.
inline OuterFormula random_formula(const RandomConfig& cfg) {
  detail::Generator g(cfg);
  return g.outer(cfg.max_depth);
}

/// The i-th formula of a seeded stream.
inline OuterFormula random_formula(RandomConfig cfg, std::uint64_t index) {
  cfg.seed = cfg.seed * 1000003ULL + index;
  return random_formula(cfg);
}

struct SearchBounds {
  std::size_t max_worlds = 2;
  std::uint64_t grade_cap = 2;
  /// Largest number of candidate models enumerated before giving up.
  std::uint64_t budget = 5'000'000;
  /// Let agents believe atoms of the formula, besides belief-operator bodies.
  bool atom_beliefs = true;
};

namespace detail {

/// Exhaustive enumeration of derived-distance models for one formula.
class ModelSearch {
 public:
  ModelSearch(const OuterFormula& f, const SearchBounds& b) : f_(f), b_(b) {
    const auto closure = subformula_closure(f);
    for (const auto& g : closure) {
      if (g.op() == Op::atom) atoms_.push_back(g.atom_name());
      if (g.op() == Op::tri) cand_set_.insert(g.belief_body());
    }
    if (b.atom_beliefs)
      for (const auto& p : atoms_) cand_set_.insert(atom(p));
    cands_.assign(cand_set_.begin(), cand_set_.end());
    auto ag = agents_of(f);
    agents_.assign(ag.begin(), ag.end());
    for (const auto& g : closure) (g.is_inner() ? inner_ : outer_).push_back(g);
    // Belief-level formulas first: distances depend on them only.
    order_ = inner_;
    order_.insert(order_.end(), outer_.begin(), outer_.end());
    for (std::size_t i = 0; i < order_.size(); ++i) index_.emplace(order_[i], i);
    for (const auto& c : cands_) cand_index_.push_back(index_.at(c));
  }

  /// Number of candidate models with exactly n worlds (saturating).
  std::uint64_t space(std::size_t n) const {
    const std::size_t bits = n * atoms_.size();
    const std::size_t slots = n * agents_.size() * cands_.size();
    long double total = std::pow(2.0L, static_cast<long double>(bits)) *
                        std::pow(static_cast<long double>(b_.grade_cap + 2), static_cast<long double>(slots));
    return total > 1e18L ? std::numeric_limits<std::uint64_t>::max() : static_cast<std::uint64_t>(total);
  }

  std::optional<DoxModel> run(std::size_t max_worlds, std::uint64_t budget) {
    std::uint64_t need = 0;
    for (std::size_t n = 1; n <= max_worlds; ++n) {
      std::uint64_t s = space(n);
      if (s == std::numeric_limits<std::uint64_t>::max() || need + s > budget)
        throw ResourceError("bounded search space exceeds budget of " + std::to_string(budget));
      need += s;
    }
    for (std::size_t n = 1; n <= max_worlds; ++n)
      if (auto m = search(n)) return m;
    return std::nullopt;
  }

 private:
  // Grade levels 1..cap then ω; level 0 is "not in support".
  Grade level(std::uint64_t l) const { return l <= b_.grade_cap ? Grade(l) : Grade::omega(); }

  std::optional<DoxModel> search(std::size_t n) {
    n_ = n;
    const std::size_t bits = n * atoms_.size();
    const std::size_t slots = n * agents_.size() * cands_.size();
    if (bits >= 63 || slots >= 63) throw ResourceError("bounded search dimensions too large");
    grades_.assign(slots, 0);
    for (std::uint64_t val = 0; val < (1ULL << bits); ++val) {
      valuation_ = val;
      for (std::uint64_t support = 0; support < (1ULL << slots); ++support) {
        std::vector<std::size_t> on;
        for (std::size_t s = 0; s < slots; ++s) {
          grades_[s] = 0;
          if (support & (1ULL << s)) on.push_back(s);
        }
        // Odometer over grade levels 1..cap+1 on the support.
        for (auto s : on) grades_[s] = 1;
        while (true) {
          if (satisfied()) return build();
          std::size_t i = 0;
          while (i < on.size() && grades_[on[i]] == b_.grade_cap + 1) grades_[on[i++]] = 1;
          if (i == on.size()) break;
          ++grades_[on[i]];
        }
      }
    }
    return std::nullopt;
  }

  std::size_t slot(std::size_t w, std::size_t agent, std::size_t cand) const {
    return (w * agents_.size() + agent) * cands_.size() + cand;
  }

  Grade degree(std::size_t w, const Agent& a, const InnerFormula& body) const {
    auto ai = std::lower_bound(agents_.begin(), agents_.end(), a) - agents_.begin();
    auto ci = std::lower_bound(cands_.begin(), cands_.end(), body) - cands_.begin();
    if (static_cast<std::size_t>(ci) == cands_.size() || !(cands_[ci] == body)) return 0;
    std::uint64_t l = grades_[slot(w, ai, ci)];
    return l == 0 ? Grade(0) : level(l);
  }

  bool satisfied() {
    truth_.assign(order_.size(), 0);
    for (std::size_t i = 0; i < order_.size(); ++i) {
      if (i == inner_.size()) compute_distances();
      truth_[i] = eval(order_[i]);
    }
    return truth_[index_.at(f_)] & 1ULL;
  }

  std::uint64_t eval(const OuterFormula& g) {
    std::uint64_t t = 0;
    const std::uint64_t all = n_ == 64 ? ~0ULL : ((1ULL << n_) - 1);
    switch (g.op()) {
      case Op::top:
        return all;
      case Op::atom: {
        auto ai = std::find(atoms_.begin(), atoms_.end(), g.atom_name()) - atoms_.begin();
        for (std::size_t w = 0; w < n_; ++w)
          if (valuation_ & (1ULL << (w * atoms_.size() + ai))) t |= 1ULL << w;
        return t;
      }
      case Op::neg:
        return ~truth_[index_.at(g.operand())] & all;
      case Op::conj:
        return truth_[index_.at(g.lhs())] & truth_[index_.at(g.rhs())];
      case Op::tri:
        for (std::size_t w = 0; w < n_; ++w)
          if (degree(w, g.agent(), g.belief_body()) >= g.grade()) t |= 1ULL << w;
        return t;
      case Op::box: {
        const std::uint64_t body = truth_[index_.at(g.operand())];
        for (std::size_t w = 0; w < n_; ++w) {
          bool holds = true;
          for (std::size_t u = 0; u < n_ && holds; ++u) {
            if (body & (1ULL << u)) continue;
            Grade d = 0;
            for (const auto& a : g.group()) {
              auto ai = std::lower_bound(agents_.begin(), agents_.end(), a) - agents_.begin();
              d += dist_[(ai * n_ + w) * n_ + u];
            }
            if (d <= g.grade()) holds = false;
          }
          if (holds) t |= 1ULL << w;
        }
        return t;
      }
    }
    return 0;
  }

  void compute_distances() {
    dist_.assign(agents_.size() * n_ * n_, Grade(0));
    for (std::size_t ai = 0; ai < agents_.size(); ++ai)
      for (std::size_t w = 0; w < n_; ++w)
        for (std::size_t c = 0; c < cands_.size(); ++c) {
          std::uint64_t l = grades_[slot(w, ai, c)];
          if (l == 0) continue;
          const std::uint64_t t = truth_[cand_index_[c]];
          for (std::size_t u = 0; u < n_; ++u)
            if (!(t & (1ULL << u))) dist_[(ai * n_ + w) * n_ + u] += level(l);
        }
  }

  DoxModel build() const {
    DoxModel m;
    m.agents = agents_;
    for (std::size_t w = 0; w < n_; ++w) {
      m.add_world("w" + std::to_string(w));
      for (std::size_t ai = 0; ai < atoms_.size(); ++ai)
        if (valuation_ & (1ULL << (w * atoms_.size() + ai))) m.valuation[w].insert(atoms_[ai]);
      for (std::size_t a = 0; a < agents_.size(); ++a)
        for (std::size_t c = 0; c < cands_.size(); ++c)
          if (std::uint64_t l = grades_[slot(w, a, c)]) m.dox[w][agents_[a]].set(cands_[c], level(l));
    }
    m.designated = 0;
    return with_derived_rho(std::move(m));
  }

  OuterFormula f_;
  SearchBounds b_;
  std::vector<std::string> atoms_;
  std::set<InnerFormula> cand_set_;
  std::vector<InnerFormula> cands_;
  std::vector<Agent> agents_;
  std::vector<OuterFormula> inner_, outer_, order_;
  std::map<OuterFormula, std::size_t> index_;
  std::vector<std::size_t> cand_index_;

  std::size_t n_ = 0;
  std::uint64_t valuation_ = 0;
  std::vector<std::uint64_t> grades_;
  std::vector<std::uint64_t> truth_;
  std::vector<Grade> dist_;
};

}  // namespace detail

/// First model, in enumeration order, with at most `max_worlds` worlds whose
/// world w0 satisfies `f`. Models have distances derived from beliefs, belief
/// supports inside the belief-operator bodies (and atoms) of `f`, and grades in
/// {0..cap, ω}. Enumeration: world count, then valuations, then support
/// sets, then grade vectors.
inline std::optional<DoxModel> bounded_search(const OuterFormula& f, const SearchBounds& bounds) {
  if (bounds.max_worlds > 8) throw Error("bounded search supports at most 8 worlds");
  detail::ModelSearch s(f, bounds);
  return s.run(bounds.max_worlds, bounds.budget);
}

/// Largest world bound ≤ bounds.max_worlds whose total space fits the budget
/// (0 if even one world does not fit).
inline std::size_t affordable_worlds(const OuterFormula& f, const SearchBounds& bounds) {
  detail::ModelSearch s(f, bounds);
  std::uint64_t need = 0;
  std::size_t best = 0;
  for (std::size_t n = 1; n <= bounds.max_worlds; ++n) {
    std::uint64_t sp = s.space(n);
    if (sp == std::numeric_limits<std::uint64_t>::max() || need + sp > bounds.budget) break;
    need += sp;
    best = n;
  }
  return best;
}

struct CrossCheckCase {
  std::uint64_t index = 0;
  OuterFormula formula;
  bool satisfiable = false;
  TableauStats stats;
  std::optional<DoxModel> model;  // tableau model when satisfiable
  std::size_t oracle_worlds = 0;   // world bound searched for unsatisfiable cases
};

struct CrossCheckReport {
  std::uint64_t total = 0;
  std::uint64_t sat = 0;
  std::uint64_t unsat = 0;
  std::uint64_t oracle_searched = 0;
  std::uint64_t oracle_skipped = 0;  // unsatisfiable, but no bound fit the budget
  std::vector<CrossCheckCase> cases;
};

/// A tableau verdict contradicted by an independent check.
class CrossCheckFailure : public Error {
 public:
  CrossCheckFailure(const std::string& what, OuterFormula formula, std::optional<DoxModel> model)
      : Error(what + ": " + render(formula)), formula_(std::move(formula)), model_(std::move(model)) {}
  const OuterFormula& formula() const { return formula_; }
  const std::optional<DoxModel>& model() const { return model_; }

 private:
  OuterFormula formula_;
  std::optional<DoxModel> model_;
};

inline CrossCheckCase check_one(const OuterFormula& f, const SearchBounds& bounds, const TableauOptions& opts) {
  CrossCheckCase c{0, f, false, {}, std::nullopt, 0};
  NodeDecision d = decide_node({f}, opts, true);
  c.satisfiable = d.satisfiable;
  c.stats = d.stats;
  if (d.satisfiable) {
    DoxModel m = extract_model(*d.trace, opts.agents);
    if (!validate_qngdm(m).ok()) throw CrossCheckFailure("extracted model is not a QNGDM", f, m);
    if (!eval_designated(m, f)) throw CrossCheckFailure("extracted model falsifies the formula", f, m);
    c.model = std::move(m);
  } else {
    SearchBounds b = bounds;
    b.max_worlds = affordable_worlds(f, bounds);
    c.oracle_worlds = b.max_worlds;
    if (b.max_worlds > 0)
      if (auto m = bounded_search(f, b)) throw CrossCheckFailure("tableau says unsat but a model exists", f, m);
  }
  return c;
}

/// Decides `n` seeded random formulas and checks every verdict independently.
inline CrossCheckReport cross_check(std::uint64_t n, const RandomConfig& cfg, const SearchBounds& bounds,
                                    TableauOptions opts = {}) {
  if (opts.agents.empty()) opts.agents = cfg.agents;
  CrossCheckReport r;
  for (std::uint64_t i = 0; i < n; ++i) {
    CrossCheckCase c = check_one(random_formula(cfg, i), bounds, opts);
    c.index = i;
    ++r.total;
    if (c.satisfiable) {
      ++r.sat;
    } else {
      ++r.unsat;
      if (c.oracle_worlds > 0)
        ++r.oracle_searched;
      else
        ++r.oracle_skipped;
    }
    r.cases.push_back(std::move(c));
  }
  return r;
}

}  // namespace lgdda::oracle
