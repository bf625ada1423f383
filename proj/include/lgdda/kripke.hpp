#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "lgdda/error.hpp"
#include "lgdda/formula.hpp"
#include "lgdda/grades.hpp"
#include "lgdda/semantics.hpp"
#include "lgdda/syntax.hpp"

namespace lgdda {

/// Upper bound on |Agt| for explicit group-indexed distance tables.
inline constexpr std::size_t kDefaultMaxAgents = 8;

/// ρ(J, w, u) for every nonempty group J over a fixed agent set. Entries
/// default to ω.
class DistanceTable {
 public:
  DistanceTable(const std::vector<Agent>& agents, std::size_t world_count,
                std::size_t max_agents = kDefaultMaxAgents)
      : n_(world_count) {
    std::set<Agent> distinct(agents.begin(), agents.end());
    if (distinct.size() > max_agents)
      throw Error("distance table over " + std::to_string(distinct.size()) + " agents exceeds the limit of " +
                  std::to_string(max_agents));
    if (!distinct.empty()) groups_ = all_groups({distinct.begin(), distinct.end()});
    for (std::size_t i = 0; i < groups_.size(); ++i) index_.emplace(groups_[i], i);
    data_.assign(groups_.size() * n_ * n_, Grade::omega());
  }

  const std::vector<Group>& groups() const { return groups_; }
  std::size_t world_count() const { return n_; }

  std::size_t group_index(const Group& g) const {
    auto it = index_.find(g);
    if (it == index_.end()) throw Error("group {" + g.to_string() + "} is not over the model's agents");
    return it->second;
  }

  Grade get(const Group& g, std::size_t w, std::size_t u) const { return data_[slot(group_index(g), w, u)]; }
  Grade get(std::size_t gi, std::size_t w, std::size_t u) const { return data_[slot(gi, w, u)]; }
  void set(const Group& g, std::size_t w, std::size_t u, Grade d) { data_[slot(group_index(g), w, u)] = d; }
  void set(std::size_t gi, std::size_t w, std::size_t u, Grade d) { data_[slot(gi, w, u)] = d; }

  friend bool operator==(const DistanceTable& a, const DistanceTable& b) {
    return a.groups_ == b.groups_ && a.n_ == b.n_ && a.data_ == b.data_;
  }

 private:
  std::size_t slot(std::size_t gi, std::size_t w, std::size_t u) const {
    if (w >= n_ || u >= n_) throw Error("world index out of range");
    return (gi * n_ + w) * n_ + u;
  }

  std::size_t n_;
  std::vector<Group> groups_;
  std::map<Group, std::size_t> index_;
  std::vector<Grade> data_;
};

/// A finite Kripke-style doxastic model. Without a distance table it is read
/// as an NGDM (distances derived from beliefs); with one, as a QNGDM
/// candidate.
struct DoxModel {
  std::vector<Agent> agents;
  std::vector<std::string> worlds;
  std::size_t designated = 0;
  std::vector<std::map<Agent, BeliefBase>> dox;   // by world
  std::vector<std::set<std::string>> valuation;   // true atoms, by world
  std::optional<DistanceTable> rho;

  std::size_t world_count() const { return worlds.size(); }

  std::size_t add_world(std::string id) {
    worlds.push_back(std::move(id));
    dox.emplace_back();
    valuation.emplace_back();
    return worlds.size() - 1;
  }

  std::size_t world_index(const std::string& id) const {
    auto it = std::find(worlds.begin(), worlds.end(), id);
    if (it == worlds.end()) throw Error("unknown world '" + id + "'");
    return static_cast<std::size_t>(it - worlds.begin());
  }

  const BeliefBase& belief(const Agent& a, std::size_t w) const {
    static const BeliefBase empty;
    auto it = dox.at(w).find(a);
    return it == dox[w].end() ? empty : it->second;
  }

  /// The belief-base state a world stands for.
  State state_at(std::size_t w) const {
    State s;
    for (const auto& a : agents) s.bases[a] = belief(a, w);
    s.valuation = valuation.at(w);
    return s;
  }
};

/// Truth tables over worlds, computed on demand and cached per formula.
class WorldEvaluator {
 public:
  explicit WorldEvaluator(const DoxModel& m) : m_(m), n_(m.world_count()) {}

  bool eval(std::size_t w, const OuterFormula& f) { return truth(f).at(w) != 0; }

  const std::vector<char>& truth(const OuterFormula& f) {
    if (auto it = cache_.find(f); it != cache_.end()) return it->second;
    std::vector<char> t(n_, 0);
    switch (f.op()) {
      case Op::top:
        std::fill(t.begin(), t.end(), 1);
        break;
      case Op::atom:
        for (std::size_t w = 0; w < n_; ++w) t[w] = m_.valuation[w].count(f.atom_name()) ? 1 : 0;
        break;
      case Op::neg: {
        const auto& a = truth(f.operand());
        for (std::size_t w = 0; w < n_; ++w) t[w] = !a[w];
        break;
      }
      case Op::conj: {
        const auto& a = truth(f.lhs());
        const auto& b = truth(f.rhs());
        for (std::size_t w = 0; w < n_; ++w) t[w] = a[w] && b[w];
        break;
      }
      case Op::tri:
        for (std::size_t w = 0; w < n_; ++w) t[w] = m_.belief(f.agent(), w).degree(f.belief_body()) >= f.grade();
        break;
      case Op::box: {
        const auto& body = truth(f.operand());
        for (std::size_t w = 0; w < n_; ++w) {
          t[w] = 1;
          for (std::size_t u = 0; u < n_; ++u) {
            if (!body[u] && distance(f.group(), w, u) <= f.grade()) {
              t[w] = 0;
              break;
            }
          }
        }
        break;
      }
    }
    return cache_.emplace(f, std::move(t)).first->second;
  }

  /// ρ(J, w, u): the table entry when present, the derived value otherwise.
  Grade distance(const Group& g, std::size_t w, std::size_t u) {
    if (m_.rho) return m_.rho->get(g, w, u);
    return derived(g, w, u);
  }

  /// Σ over beliefs of members of J at w that fail at u, of their degree.
  Grade derived(const Group& g, std::size_t w, std::size_t u) {
    Grade total = 0;
    for (const auto& a : g) total += singleton(a)[w * n_ + u];
    return total;
  }

 private:
  const std::vector<Grade>& singleton(const Agent& a) {
    if (auto it = derived_.find(a); it != derived_.end()) return it->second;
    std::vector<Grade> d(n_ * n_, Grade(0));
    for (std::size_t w = 0; w < n_; ++w) {
      for (const auto& [f, g] : m_.belief(a, w)) {
        const auto& t = truth(f);
        for (std::size_t u = 0; u < n_; ++u)
          if (!t[u]) d[w * n_ + u] += g;
      }
    }
    return derived_.emplace(a, std::move(d)).first->second;
  }

  const DoxModel& m_;
  std::size_t n_;
  std::unordered_map<OuterFormula, std::vector<char>> cache_;
  std::map<Agent, std::vector<Grade>> derived_;
};

inline Grade derived_rho(const DoxModel& m, const Group& g, std::size_t w, std::size_t u) {
  WorldEvaluator ev(m);
  return ev.derived(g, w, u);
}

inline bool eval_world(const DoxModel& m, std::size_t w, const OuterFormula& f) {
  WorldEvaluator ev(m);
  return ev.eval(w, f);
}

inline bool eval_designated(const DoxModel& m, const OuterFormula& f) { return eval_world(m, m.designated, f); }

/// Copy of `m` whose table is filled with the derived distances.
inline DoxModel with_derived_rho(DoxModel m) {
  m.rho.reset();
  WorldEvaluator ev(m);
  DistanceTable table(m.agents, m.world_count());
  for (std::size_t gi = 0; gi < table.groups().size(); ++gi)
    for (std::size_t w = 0; w < m.world_count(); ++w)
      for (std::size_t u = 0; u < m.world_count(); ++u) table.set(gi, w, u, ev.derived(table.groups()[gi], w, u));
  m.rho = std::move(table);
  return m;
}

struct Violation {
  std::string condition;
  Group group;
  std::string from;
  std::string to;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

inline constexpr const char* kDoxBound = "dox_bound";                   // ρ ≥ derived distance
inline constexpr const char* kPartitionWitness = "partition_witness";   // some δ dominates every subgroup
inline constexpr const char* kDoxEquality = "dox_equality";             // ρ = derived distance
inline constexpr const char* kGroupAdditivity = "group_additivity";     // ρ(J) = Σ ρ({i})

/// First δ ∈ Par(ρ(J,w,u), J) in partition order with Σ_{J'} δ ≥ ρ(J',w,u)
/// for every nonempty proper J' ⊂ J.
inline std::optional<Partition> find_partition_witness(const DistanceTable& rho, const Group& group, std::size_t w,
                                                       std::size_t u) {
  Grade d = rho.get(group, w, u);
  if (d.is_omega()) return std::nullopt;
  std::vector<std::pair<Group, Grade>> subs;
  for (const auto& sub : all_groups(group.members()))
    if (sub != group) subs.emplace_back(sub, rho.get(sub, w, u));
  std::optional<Partition> found;
  for_each_partition(d, group, [&](Partition p) {
    for (const auto& [sub, bound] : subs)
      if (Grade(p.sum_over(sub)) < bound) return true;
    found = std::move(p);
    return false;
  });
  return found;
}

inline ValidationReport validate_qngdm(const DoxModel& m) {
  if (!m.rho) throw Error("model has no distance table");
  const DistanceTable& rho = *m.rho;
  WorldEvaluator ev(m);
  ValidationReport report;
  for (const auto& g : rho.groups()) {
    for (std::size_t w = 0; w < m.world_count(); ++w) {
      for (std::size_t u = 0; u < m.world_count(); ++u) {
        Grade d = rho.get(g, w, u);
        if (d.is_omega()) continue;
        Grade derived = ev.derived(g, w, u);
        if (d < derived)
          report.violations.push_back({kDoxBound, g, m.worlds[w], m.worlds[u],
                                       "distance " + d.to_string() + " below falsified belief weight " +
                                           derived.to_string()});
        if (g.size() > 1 && !find_partition_witness(rho, g, w, u))
          report.violations.push_back(
              {kPartitionWitness, g, m.worlds[w], m.worlds[u],
               "no division of " + d.to_string() + " covers the subgroup distances"});
      }
    }
  }
  return report;
}

inline ValidationReport validate_ngdm(const DoxModel& m) {
  if (!m.rho) throw Error("model has no distance table");
  const DistanceTable& rho = *m.rho;
  WorldEvaluator ev(m);
  ValidationReport report;
  for (const auto& g : rho.groups()) {
    for (std::size_t w = 0; w < m.world_count(); ++w) {
      for (std::size_t u = 0; u < m.world_count(); ++u) {
        Grade d = rho.get(g, w, u);
        Grade derived = ev.derived(g, w, u);
        if (d != derived)
          report.violations.push_back({kDoxEquality, g, m.worlds[w], m.worlds[u],
                                       "distance " + d.to_string() + " differs from falsified belief weight " +
                                           derived.to_string()});
        if (g.size() > 1) {
          Grade sum = 0;
          for (const auto& a : g) sum += rho.get(Group{a}, w, u);
          if (sum != d)
            report.violations.push_back({kGroupAdditivity, g, m.worlds[w], m.worlds[u],
                                         "distance " + d.to_string() + " differs from member sum " +
                                             sum.to_string()});
        }
      }
    }
  }
  return report;
}

/// Structural checks every model must pass before any algorithm runs.
inline void check_well_formed(const DoxModel& m) {
  if (m.worlds.empty()) throw Error("model has no worlds");
  if (m.designated >= m.world_count()) throw Error("designated world out of range");
  if (m.dox.size() != m.world_count() || m.valuation.size() != m.world_count())
    throw Error("per-world tables do not match the world list");
  std::set<std::string> ids(m.worlds.begin(), m.worlds.end());
  if (ids.size() != m.worlds.size()) throw Error("duplicate world ids");
  std::set<Agent> declared(m.agents.begin(), m.agents.end());
  for (const auto& bases : m.dox)
    for (const auto& [a, base] : bases)
      if (!declared.count(a)) throw Error("belief base for undeclared agent '" + a + "'");
  if (m.rho && m.rho->world_count() != m.world_count()) throw Error("distance table size mismatch");
}

}  // namespace lgdda
