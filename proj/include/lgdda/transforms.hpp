#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lgdda/error.hpp"
#include "lgdda/formula.hpp"
#include "lgdda/kripke.hpp"
#include "lgdda/semantics.hpp"

namespace lgdda {

namespace detail {

inline void require_qngdm(const DoxModel& m) {
  check_well_formed(m);
  if (!m.rho) throw Error("input has no distance table");
  auto report = validate_qngdm(m);
  if (!report.ok())
    throw Error("input is not a valid QNGDM: " + report.violations.front().condition + " fails for {" +
                report.violations.front().group.to_string() + "} from " + report.violations.front().from + " to " +
                report.violations.front().to);
}

inline std::string sanitize_identifier(const std::string& s) {
  std::string out;
  for (char c : s) out += is_ident_char(c) ? c : '_';
  return out;
}

inline void collect_atoms(const InnerFormula& f, std::set<std::string>& out) {
  for (const auto& g : subformula_closure(OuterFormula(f)))
    if (g.op() == Op::atom) out.insert(g.atom_name());
}

}  // namespace detail

/// Quotient by agreement on every subformula of `f`. Distances between
/// classes are member minima; beliefs keep only the largest grade of a
/// B-subformula of `f` that every member reaches; an atom holds in a class
/// iff it holds at every member.
inline DoxModel filtrate(const DoxModel& m, const OuterFormula& f) {
  detail::require_qngdm(m);
  const auto closure = subformula_closure(f);
  const std::vector<OuterFormula> sub(closure.begin(), closure.end());
  WorldEvaluator ev(m);

  std::map<std::vector<char>, std::size_t> class_of_signature;
  std::vector<std::vector<std::size_t>> members;
  std::vector<std::size_t> class_of(m.world_count());
  for (std::size_t w = 0; w < m.world_count(); ++w) {
    std::vector<char> sig;
    sig.reserve(sub.size());
    for (const auto& g : sub) sig.push_back(ev.eval(w, g) ? 1 : 0);
    auto [it, fresh] = class_of_signature.emplace(std::move(sig), members.size());
    if (fresh) members.emplace_back();
    members[it->second].push_back(w);
    class_of[w] = it->second;
  }

  DoxModel out;
  out.agents = m.agents;
  for (const auto& cls : members) {
    std::string id;
    for (std::size_t w : cls) id += (id.empty() ? "" : "+") + m.worlds[w];
    std::size_t c = out.add_world(id);

    std::set<std::string> atoms;
    for (std::size_t w : cls) atoms.insert(m.valuation[w].begin(), m.valuation[w].end());
    for (const auto& p : atoms) {
      bool everywhere = std::all_of(cls.begin(), cls.end(), [&](std::size_t w) { return m.valuation[w].count(p) > 0; });
      if (everywhere) out.valuation[c].insert(p);
    }

    for (const auto& g : sub) {
      if (g.op() != Op::tri) continue;
      bool reached = std::all_of(cls.begin(), cls.end(),
                                 [&](std::size_t w) { return m.belief(g.agent(), w).degree(g.belief_body()) >= g.grade(); });
      if (!reached) continue;
      BeliefBase& base = out.dox[c][g.agent()];
      if (base.degree(g.belief_body()) < g.grade()) base.set(g.belief_body(), g.grade());
    }
  }
  for (auto& bases : out.dox) std::erase_if(bases, [](const auto& kv) { return kv.second.empty(); });
  out.designated = class_of[m.designated];

  DistanceTable table(out.agents, out.world_count());
  for (std::size_t gi = 0; gi < table.groups().size(); ++gi)
    for (std::size_t w = 0; w < m.world_count(); ++w)
      for (std::size_t u = 0; u < m.world_count(); ++u) {
        Grade d = m.rho->get(gi, w, u);
        if (d < table.get(gi, class_of[w], class_of[u])) table.set(gi, class_of[w], class_of[u], d);
      }
  out.rho = std::move(table);
  return out;
}

/// Two-stage conversion of a finite QNGDM into an NGDM satisfying the same
/// formulas at (designated, Agt). Stage one copies every world once per group
/// and splits distances along partition witnesses; stage two adds one fresh
/// atom per copy, believed with exactly the missing weight.
inline DoxModel qngdm_to_ngdm(const DoxModel& m, const OuterFormula& f) {
  detail::require_qngdm(m);
  const DistanceTable& rho = *m.rho;
  const auto& groups = rho.groups();
  if (groups.empty()) return m;
  const std::size_t n = m.world_count();
  const std::size_t gcount = groups.size();
  auto copy = [&](std::size_t w, std::size_t gi) { return w * gcount + gi; };

  std::set<std::string> taken = atoms_of(f);
  for (std::size_t w = 0; w < n; ++w) {
    taken.insert(m.valuation[w].begin(), m.valuation[w].end());
    for (const auto& [a, base] : m.dox[w])
      for (const auto& [alpha, g] : base) detail::collect_atoms(alpha, taken);
  }

  DoxModel out;
  out.agents = m.agents;
  std::vector<std::string> chi;
  std::set<std::string> chi_names;
  for (std::size_t w = 0; w < n; ++w) {
    for (std::size_t gi = 0; gi < gcount; ++gi) {
      std::string id = m.worlds[w];
      for (const auto& a : groups[gi]) id += "_" + a;
      out.add_world(id);
      std::string name = "__chi_" + detail::sanitize_identifier(id);
      if (taken.count(name) || !chi_names.insert(name).second)
        throw Error("fresh atom '" + name + "' collides with an existing atom");
      chi.push_back(name);
    }
  }

  // Stage 1: ρ'(J', (w,·), (u,J)) = Σ_{J'} δ for J' ⊆ J, ω otherwise.
  DistanceTable table(out.agents, out.world_count());
  for (std::size_t w = 0; w < n; ++w) {
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t target = 0; target < gcount; ++target) {
        const Group& j = groups[target];
        if (rho.get(target, w, u).is_omega()) continue;
        auto delta = find_partition_witness(rho, j, w, u);
        if (!delta)
          throw Error("no partition witness for {" + j.to_string() + "} from " + m.worlds[w] + " to " + m.worlds[u]);
        for (std::size_t gi = 0; gi < gcount; ++gi) {
          if (!groups[gi].subset_of(j)) continue;
          Grade d = delta->sum_over(groups[gi]);
          for (std::size_t src = 0; src < gcount; ++src) table.set(gi, copy(w, src), copy(u, target), d);
        }
      }
    }
  }

  // Stage 2: characterizing atoms.
  WorldEvaluator ev(m);
  for (std::size_t w = 0; w < n; ++w) {
    for (std::size_t src = 0; src < gcount; ++src) {
      const std::size_t wc = copy(w, src);
      out.valuation[wc] = m.valuation[w];
      out.dox[wc] = m.dox[w];
      for (std::size_t v = 0; v < out.world_count(); ++v)
        if (v != wc) out.valuation[wc].insert(chi[v]);
    }
  }
  for (std::size_t w = 0; w < n; ++w) {
    for (std::size_t src = 0; src < gcount; ++src) {
      const std::size_t wc = copy(w, src);
      for (const auto& a : out.agents) {
        const std::size_t gi = table.group_index(Group{a});
        for (std::size_t u = 0; u < n; ++u) {
          for (std::size_t target = 0; target < gcount; ++target) {
            const std::size_t uc = copy(u, target);
            Grade d = table.get(gi, wc, uc);
            Grade missing;
            if (d.is_omega()) {
              missing = Grade::omega();
            } else {
              Grade have = ev.derived(Group{a}, w, u);
              if (have > d) throw std::logic_error("copied distance below falsified belief weight");
              missing = Grade(d.value() - have.value());
            }
            if (missing != Grade(0)) out.dox[wc][a].set(InnerFormula::atom(chi[uc]), missing);
          }
        }
      }
    }
  }

  out.designated = copy(m.designated, gcount - 1);
  out.rho = std::move(table);
  return out;
}

/// Reads each world as a belief-base state; the context is every world.
inline Magbm ngdm_to_magbm(const DoxModel& m) {
  check_well_formed(m);
  if (!m.rho) throw Error("input has no distance table");
  auto report = validate_ngdm(m);
  if (!report.ok()) throw Error("input is not a valid NGDM: " + report.violations.front().condition);
  Magbm out;
  out.agents = m.agents;
  for (std::size_t w = 0; w < m.world_count(); ++w) out.context.push_back(m.state_at(w));
  out.designated = out.context[m.designated];
  return out;
}

/// One world per context state, plus a separate designated world unless the
/// designated state occurs in the context. Distances are implausibilities;
/// distances into a separate designated world are ω.
inline DoxModel magbm_to_qngdm(const Magbm& m) {
  DoxModel out;
  out.agents = m.agents;
  auto place = [&](const State& s, std::string id) {
    std::size_t w = out.add_world(std::move(id));
    out.valuation[w] = s.valuation;
    for (const auto& [a, base] : s.bases)
      if (!base.empty()) out.dox[w][a] = base;
  };
  std::optional<std::size_t> designated;
  for (std::size_t i = 0; i < m.context.size(); ++i) {
    place(m.context[i], "c" + std::to_string(i));
    if (!designated && m.context[i] == m.designated) designated = i;
  }
  const std::size_t context_size = m.context.size();
  if (!designated) {
    place(m.designated, "s");
    designated = out.world_count() - 1;
  }
  out.designated = *designated;

  WorldEvaluator ev(out);
  DistanceTable table(out.agents, out.world_count());
  for (std::size_t gi = 0; gi < table.groups().size(); ++gi)
    for (std::size_t w = 0; w < out.world_count(); ++w)
      for (std::size_t u = 0; u < context_size; ++u) table.set(gi, w, u, ev.derived(table.groups()[gi], w, u));
  out.rho = std::move(table);
  return out;
}

}  // namespace lgdda
