#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgdda/error.hpp"
#include "lgdda/formula.hpp"
#include "lgdda/grades.hpp"
#include "lgdda/kripke.hpp"

namespace lgdda {

struct TableauOptions {
  /// Limit on nested D-eliminations (root = 1). Exceeding it is a ResourceError.
  std::optional<std::size_t> max_depth;
  /// Limit on denominators tried for a single negative box.
  std::optional<std::uint64_t> max_denominators;
  /// Agents of extracted models in addition to those of the query.
  std::vector<Agent> agents;
};

struct TableauStats {
  std::size_t max_depth = 0;
  std::uint64_t nodes = 0;
  std::uint64_t denominators = 0;
  /// Peak number of formulas held by all branches on the search stack.
  std::size_t peak_live_formulas = 0;
};

/// One branch below a negative-box elimination.
struct Denominator {
  Partition witness;
  std::vector<OuterFormula> formulas;  // sorted, distinct
  OuterFormula source;
};

/// Record of an open saturated node: its literals, and for every negative box
/// the denominator that stayed open.
struct OpenNode {
  struct Successor {
    OuterFormula negbox;
    Partition witness;
    std::vector<OuterFormula> denominator;
    std::unique_ptr<OpenNode> node;
  };
  std::vector<OuterFormula> literals;
  std::vector<Successor> successors;
};

namespace detail {

using BeliefKey = std::pair<Agent, InnerFormula>;

/// Σ▲ weights: for each agent, body ↦ largest grade among its B-literals.
inline std::map<Agent, std::map<InnerFormula, Grade>> belief_weights(const std::vector<OuterFormula>& tris) {
  std::map<Agent, std::map<InnerFormula, Grade>> out;
  for (const auto& t : tris) {
    Grade& slot = out[t.agent()][t.belief_body()];
    slot = std::max(slot, t.grade());
  }
  return out;
}

inline bool residual_fits(const std::map<Agent, std::map<InnerFormula, Grade>>& weights, const Partition& delta,
                          const std::set<InnerFormula>& kept) {
  for (const auto& [agent, bodies] : weights) {
    Grade residual = 0;
    for (const auto& [alpha, w] : bodies)
      if (!kept.count(alpha)) residual += w;
    if (residual > Grade(delta[agent])) return false;
  }
  return true;
}

/// Visits the k-element subsets of {0..n-1} in lexicographic order.
template <class Visitor>
bool for_each_combination(std::size_t n, std::size_t k, Visitor&& visit) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return true;
  while (true) {
    if (!visit(idx)) return false;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

struct EliminationInput {
  Group group;
  Grade k;
  OuterFormula negated_body;
  std::vector<OuterFormula> boxes;  // positive boxes over subgroups of J
  std::vector<OuterFormula> tris;   // B-literals of members of J
};

inline EliminationInput elimination_input(const std::vector<OuterFormula>& others, const OuterFormula& negbox) {
  if (!negbox.is_negation_of(Op::box)) throw Error("not a negative box: " + render(negbox));
  const OuterFormula b = negbox.operand();
  EliminationInput in{b.group(), b.grade(), neg(b.operand()), {}, {}};
  for (const auto& f : others) {
    if (f == negbox) continue;
    if (f.op() == Op::box && f.group().subset_of(in.group)) in.boxes.push_back(f);
    if (f.op() == Op::tri && in.group.contains(f.agent())) in.tris.push_back(f);
  }
  return in;
}

inline std::set<OuterFormula> forced_bodies(const EliminationInput& in, const Partition& delta) {
  std::set<OuterFormula> out;
  for (const auto& b : in.boxes)
    if (Grade(delta.sum_over(b.group())) <= b.grade()) out.insert(b.operand());
  return out;
}

/// Content-minimal denominators of a negative box, lazily, in partition order
/// and smallest-first body selection. Every denominator of box_elim contains
/// one of these, so trying only these decides the same node.
template <class Visitor>
void for_each_minimal_denominator(const EliminationInput& in, Visitor&& visit) {
  const auto weights = belief_weights(in.tris);
  std::set<InnerFormula> all_bodies;
  for (const auto& [agent, bodies] : weights)
    for (const auto& [alpha, w] : bodies) all_bodies.insert(alpha);

  std::set<std::vector<OuterFormula>> seen;
  for_each_partition(in.k, in.group, [&](Partition delta) {
    std::set<InnerFormula> forced;
    std::vector<InnerFormula> optional;
    for (const auto& alpha : all_bodies) {
      bool must = false;
      for (const auto& [agent, bodies] : weights) {
        auto it = bodies.find(alpha);
        if (it != bodies.end() && it->second > Grade(delta[agent])) must = true;
      }
      if (must)
        forced.insert(alpha);
      else
        optional.push_back(alpha);
    }
    const std::set<OuterFormula> boxed = forced_bodies(in, delta);

    for (std::size_t size = 0; size <= optional.size(); ++size) {
      bool go_on = for_each_combination(optional.size(), size, [&](const std::vector<std::size_t>& pick) {
        std::set<InnerFormula> kept = forced;
        for (auto i : pick) kept.insert(optional[i]);
        if (!residual_fits(weights, delta, kept)) return true;
        for (auto i : pick) {
          kept.erase(optional[i]);
          bool smaller_fits = residual_fits(weights, delta, kept);
          kept.insert(optional[i]);
          if (smaller_fits) return true;
        }
        std::set<OuterFormula> content = boxed;
        content.insert(in.negated_body);
        for (const auto& alpha : kept) content.insert(OuterFormula(alpha));
        std::vector<OuterFormula> formulas(content.begin(), content.end());
        if (!seen.insert(formulas).second) return true;
        return visit(delta, std::move(formulas));
      });
      if (!go_on) return false;
    }
    return true;
  });
}

class Prover {
 public:
  Prover(const TableauOptions& opts, bool record) : opts_(opts), record_(record) {}

  const TableauStats& stats() const { return stats_; }

  bool decide(const std::vector<OuterFormula>& formulas, std::size_t depth, OpenNode* trace) {
    if (opts_.max_depth && depth > *opts_.max_depth)
      throw ResourceError("tableau depth limit " + std::to_string(*opts_.max_depth) + " exceeded");
    stats_.max_depth = std::max(stats_.max_depth, depth);
    ++stats_.nodes;
    Branch b;
    for (const auto& f : formulas) b.push(f);
    return run(std::move(b), depth, trace);
  }

 private:
  struct Branch {
    std::set<OuterFormula> seen;
    std::deque<OuterFormula> pending;
    std::set<OuterFormula> literals;
    std::set<OuterFormula> splits;  // ¬(a ∧ b) awaiting a case split
    std::map<BeliefKey, Grade> strongest;  // largest asserted B-grade
    std::map<BeliefKey, Grade> weakest;    // smallest denied B-grade
    bool closed = false;

    void push(const OuterFormula& f) {
      if (seen.insert(f).second) pending.push_back(f);
    }

    void add_literal(const OuterFormula& f) {
      const bool negative = f.op() == Op::neg;
      const OuterFormula core = negative ? f.operand() : f;
      if (negative ? literals.count(core) : literals.count(neg(f))) closed = true;
      if (core.op() == Op::tri) {
        BeliefKey key{core.agent(), core.belief_body()};
        if (negative) {
          auto [it, fresh] = weakest.emplace(key, core.grade());
          if (!fresh) it->second = std::min(it->second, core.grade());
        } else {
          auto [it, fresh] = strongest.emplace(key, core.grade());
          if (!fresh) it->second = std::max(it->second, core.grade());
        }
        auto s = strongest.find(key);
        auto w = weakest.find(key);
        if (s != strongest.end() && w != weakest.end() && w->second <= s->second) closed = true;
      }
      literals.insert(f);
    }

    /// Non-branching rules to fixpoint.
    void saturate() {
      while (!pending.empty() && !closed) {
        OuterFormula f = pending.front();
        pending.pop_front();
        switch (f.op()) {
          case Op::top:
            break;
          case Op::atom:
          case Op::tri:
          case Op::box:
            add_literal(f);
            break;
          case Op::conj:
            push(f.lhs());
            push(f.rhs());
            break;
          case Op::neg: {
            const OuterFormula g = f.operand();
            switch (g.op()) {
              case Op::top:
                closed = true;
                break;
              case Op::neg:
                push(g.operand());
                break;
              case Op::conj:
                splits.insert(f);
                break;
              default:
                add_literal(f);
            }
            break;
          }
        }
      }
    }
  };

  bool run(Branch b, std::size_t depth, OpenNode* trace) {
    b.saturate();
    if (b.closed) return false;

    while (!b.splits.empty()) {
      const OuterFormula split = *b.splits.begin();
      b.splits.erase(b.splits.begin());
      const OuterFormula left = neg(split.operand().lhs());
      const OuterFormula right = neg(split.operand().rhs());
      if (b.seen.count(left) || b.seen.count(right)) continue;
      LiveGuard guard(*this, b.seen.size());
      for (const auto& alt : {left, right}) {
        Branch child = b;
        child.push(alt);
        if (run(std::move(child), depth, trace)) return true;
      }
      return false;
    }

    LiveGuard guard(*this, b.seen.size());
    std::vector<OuterFormula> lits(b.literals.begin(), b.literals.end());
    if (trace) {
      trace->literals = lits;
      trace->successors.clear();
    }
    for (const auto& negbox : lits) {
      if (!negbox.is_negation_of(Op::box)) continue;
      if (!eliminate(lits, negbox, depth, trace)) return false;
    }
    return true;
  }

  bool eliminate(const std::vector<OuterFormula>& lits, const OuterFormula& negbox, std::size_t depth,
                 OpenNode* trace) {
    const EliminationInput in = elimination_input(lits, negbox);
    std::uint64_t tried = 0;
    bool open = false;
    for_each_minimal_denominator(in, [&](const Partition& delta, std::vector<OuterFormula> formulas) {
      ++stats_.denominators;
      if (opts_.max_denominators && ++tried > *opts_.max_denominators)
        throw ResourceError("denominator limit " + std::to_string(*opts_.max_denominators) + " exceeded");
      std::unique_ptr<OpenNode> child = record_ ? std::make_unique<OpenNode>() : nullptr;
      if (!decide(formulas, depth + 1, child.get())) return true;
      open = true;
      if (trace) trace->successors.push_back({negbox, delta, std::move(formulas), std::move(child)});
      return false;
    });
    return open;
  }

  struct LiveGuard {
    LiveGuard(Prover& p, std::size_t n) : p_(p), n_(n) {
      p_.live_ += n_;
      p_.stats_.peak_live_formulas = std::max(p_.stats_.peak_live_formulas, p_.live_);
    }
    ~LiveGuard() { p_.live_ -= n_; }
    LiveGuard(const LiveGuard&) = delete;
    LiveGuard& operator=(const LiveGuard&) = delete;
    Prover& p_;
    std::size_t n_;
  };

  const TableauOptions& opts_;
  bool record_;
  TableauStats stats_;
  std::size_t live_ = 0;
};

inline std::size_t extract_into(const OpenNode& node, DoxModel& m,
                                std::vector<std::tuple<std::size_t, std::size_t, Partition>>& edges) {
  const std::size_t w = m.add_world("w" + std::to_string(m.world_count()));
  for (const auto& f : node.literals) {
    if (f.op() == Op::atom) m.valuation[w].insert(f.atom_name());
    if (f.op() == Op::tri) {
      BeliefBase& base = m.dox[w][f.agent()];
      if (base.degree(f.belief_body()) < f.grade()) base.set(f.belief_body(), f.grade());
    }
  }
  for (const auto& s : node.successors) {
    if (!s.node) throw Error("incomplete tableau trace");
    const std::size_t u = extract_into(*s.node, m, edges);
    edges.emplace_back(w, u, s.witness);
  }
  return w;
}

}  // namespace detail

/// All denominators of the D-elimination rule for `negbox`, deduplicated by
/// content. For each partition δ of k over J: every box over a subgroup J'
/// with Σ_{J'} δ ≤ k' contributes its body; every selection T of members'
/// B-literals whose left-over weight per agent fits δ contributes its bodies.
inline std::vector<Denominator> box_elim(const std::vector<OuterFormula>& node, const OuterFormula& negbox) {
  if (std::find(node.begin(), node.end(), negbox) == node.end()) throw Error("negative box not in node");
  const detail::EliminationInput in = detail::elimination_input(node, negbox);
  std::vector<Denominator> out;
  std::set<std::vector<OuterFormula>> seen;
  for_each_partition(in.k, in.group, [&](Partition delta) {
    const std::set<OuterFormula> boxed = detail::forced_bodies(in, delta);
    const std::size_t n = in.tris.size();
    for (std::size_t size = 0; size <= n; ++size) {
      detail::for_each_combination(n, size, [&](const std::vector<std::size_t>& pick) {
        std::vector<OuterFormula> rest;
        std::vector<bool> chosen(n, false);
        for (auto i : pick) chosen[i] = true;
        for (std::size_t i = 0; i < n; ++i)
          if (!chosen[i]) rest.push_back(in.tris[i]);
        for (const auto& [agent, bodies] : detail::belief_weights(rest)) {
          Grade residual = 0;
          for (const auto& [alpha, w] : bodies) residual += w;
          if (residual > Grade(delta[agent])) return true;
        }
        std::set<OuterFormula> content = boxed;
        content.insert(in.negated_body);
        for (auto i : pick) content.insert(OuterFormula(in.tris[i].belief_body()));
        std::vector<OuterFormula> formulas(content.begin(), content.end());
        if (seen.insert(formulas).second) out.push_back({delta, std::move(formulas), negbox});
        return true;
      });
    }
    return true;
  });
  return out;
}

/// The content-minimal denominators the decision procedure actually tries.
inline std::vector<Denominator> minimal_denominators(const std::vector<OuterFormula>& node,
                                                     const OuterFormula& negbox) {
  const detail::EliminationInput in = detail::elimination_input(node, negbox);
  std::vector<Denominator> out;
  detail::for_each_minimal_denominator(in, [&](const Partition& delta, std::vector<OuterFormula> formulas) {
    out.push_back({delta, std::move(formulas), negbox});
    return true;
  });
  return out;
}

struct NodeDecision {
  bool satisfiable = false;
  std::optional<OpenNode> trace;  // present iff satisfiable and recorded
  TableauStats stats;
};

inline NodeDecision decide_node(const std::vector<OuterFormula>& node, const TableauOptions& opts = {},
                                bool record = false) {
  detail::Prover prover(opts, record);
  NodeDecision out;
  OpenNode root;
  out.satisfiable = prover.decide(node, 1, record ? &root : nullptr);
  out.stats = prover.stats();
  if (out.satisfiable && record) out.trace = std::move(root);
  return out;
}

/// Builds a QNGDM from an open trace. Each recorded successor hangs off its
/// parent at distance Σ_{J'} δ for every J' ⊆ J; all other distances are ω.
inline DoxModel extract_model(const OpenNode& root, std::vector<Agent> agents) {
  std::function<void(const OpenNode&)> gather = [&](const OpenNode& n) {
    for (const auto& f : n.literals)
      for (const auto& a : agents_of(f)) agents.push_back(a);
    for (const auto& s : n.successors) {
      if (!s.node) throw Error("incomplete tableau trace");
      gather(*s.node);
    }
  };
  gather(root);
  std::sort(agents.begin(), agents.end());
  agents.erase(std::unique(agents.begin(), agents.end()), agents.end());

  DoxModel m;
  m.agents = agents;
  std::vector<std::tuple<std::size_t, std::size_t, Partition>> edges;
  m.designated = detail::extract_into(root, m, edges);
  DistanceTable table(m.agents, m.world_count());
  for (const auto& [w, u, delta] : edges)
    for (const auto& sub : all_groups(delta.group().members())) table.set(sub, w, u, Grade(delta.sum_over(sub)));
  m.rho = std::move(table);
  return m;
}

enum class Mode { sat, valid };

struct Verdict {
  Mode mode = Mode::sat;
  /// Whether the tested set ({φ} for sat, {¬φ} for valid) is satisfiable.
  bool satisfiable = false;
  /// A model of φ (sat) or of ¬φ (valid), when requested and it exists.
  std::optional<DoxModel> model;
  TableauStats stats;

  /// sat / valid.
  bool holds() const { return mode == Mode::sat ? satisfiable : !satisfiable; }
  std::string result() const {
    if (mode == Mode::sat) return satisfiable ? "sat" : "unsat";
    return satisfiable ? "invalid" : "valid";
  }
};

inline Verdict decide_formula(const OuterFormula& f, Mode mode, bool extract, const TableauOptions& opts = {}) {
  const OuterFormula tested = mode == Mode::sat ? f : neg(f);
  NodeDecision d = decide_node({tested}, opts, extract);
  if (d.stats.max_depth > tested.modal_depth() + 1)
    throw std::logic_error("tableau recursion deeper than modal depth + 1");
  Verdict v{mode, d.satisfiable, std::nullopt, d.stats};
  if (d.satisfiable && extract) {
    DoxModel m = extract_model(*d.trace, opts.agents);
    if (!eval_designated(m, tested)) throw std::logic_error("extracted model does not satisfy " + render(tested));
    if (!validate_qngdm(m).ok()) throw std::logic_error("extracted model is not a QNGDM");
    v.model = std::move(m);
  }
  return v;
}

}  // namespace lgdda
