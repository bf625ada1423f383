#pragma once

#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "lgdda/error.hpp"
#include "lgdda/kripke.hpp"
#include "lgdda/oracle.hpp"
#include "lgdda/semantics.hpp"
#include "lgdda/syntax.hpp"
#include "lgdda/tableau.hpp"

namespace lgdda::io {

using nlohmann::json;

inline json grade_to_json(Grade g) { return g.is_omega() ? json("w") : json(g.value()); }

inline Grade grade_from_json(const json& j, const std::string& where) {
  if (j.is_string() && j.get<std::string>() == "w") return Grade::omega();
  if (j.is_number_unsigned()) return Grade(j.get<std::uint64_t>());
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return Grade(static_cast<std::uint64_t>(j.get<std::int64_t>()));
  throw Error(where + ": grade must be a nonnegative integer or \"w\"");
}

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw Error(where + ": missing \"" + key + "\"");
  return j.at(key);
}

inline std::string id_from_json(const json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
  throw Error(where + ": world id must be a string or integer");
}

inline ParseOptions declared(const std::vector<Agent>& agents) {
  return ParseOptions{std::set<Agent>(agents.begin(), agents.end())};
}

inline InnerFormula formula_from_json(const json& j, const ParseOptions& opts, const std::string& where) {
  if (!j.is_string()) throw Error(where + ": formula must be a string");
  try {
    return parse_inner(j.get<std::string>(), opts);
  } catch (const ParseError& e) {
    throw Error(where + ": " + e.what());
  }
}

inline json base_to_json(const BeliefBase& b) {
  json out = json::array();
  for (const auto& [f, g] : b) out.push_back(json::array({render(f), grade_to_json(g)}));
  return out;
}

inline BeliefBase base_from_json(const json& j, const ParseOptions& opts, const std::string& where) {
  if (!j.is_array()) throw Error(where + ": belief base must be an array of [formula, grade] pairs");
  BeliefBase b;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != 2) throw Error(at + ": expected [formula, grade]");
    b.add(formula_from_json(j[i][0], opts, at), grade_from_json(j[i][1], at));
  }
  return b;
}

inline std::vector<Agent> agents_from_json(const json& j, const std::string& where) {
  const json& a = field(j, "agents", where);
  if (!a.is_array()) throw Error(where + ".agents: expected an array");
  std::vector<Agent> out;
  for (const auto& x : a) out.push_back(id_from_json(x, where + ".agents"));
  std::set<Agent> distinct(out.begin(), out.end());
  if (distinct.size() != out.size()) throw Error(where + ".agents: duplicate agent");
  return out;
}

// MAGBM

inline json to_json(const State& s) {
  json bases = json::object();
  for (const auto& [a, b] : s.bases) bases[a] = base_to_json(b);
  return {{"valuation", std::vector<std::string>(s.valuation.begin(), s.valuation.end())}, {"bases", bases}};
}

inline State state_from_json(const json& j, const std::vector<Agent>& agents, const std::string& where) {
  const ParseOptions opts = declared(agents);
  State s;
  if (j.contains("valuation")) {
    const json& v = j.at("valuation");
    if (!v.is_array()) throw Error(where + ".valuation: expected an array of atoms");
    for (const auto& p : v) s.valuation.insert(id_from_json(p, where + ".valuation"));
  }
  for (const auto& a : agents) s.bases[a];
  if (j.contains("bases")) {
    const json& bases = j.at("bases");
    if (!bases.is_object()) throw Error(where + ".bases: expected an object");
    for (const auto& [a, b] : bases.items()) {
      if (!opts.agents->count(a)) throw Error(where + ".bases: undeclared agent '" + a + "'");
      s.bases[a] = base_from_json(b, opts, where + ".bases." + a);
    }
  }
  return s;
}

inline json to_json(const Magbm& m) {
  json ctx = json::array();
  for (const auto& s : m.context) ctx.push_back(to_json(s));
  return {{"agents", m.agents}, {"designated", to_json(m.designated)}, {"context", ctx}};
}

inline Magbm magbm_from_json(const json& j) {
  Magbm m;
  m.agents = agents_from_json(j, "model");
  m.designated = state_from_json(field(j, "designated", "model"), m.agents, "designated");
  if (j.contains("context")) {
    const json& c = j.at("context");
    if (!c.is_array()) throw Error("context: expected an array");
    for (std::size_t i = 0; i < c.size(); ++i)
      m.context.push_back(state_from_json(c[i], m.agents, "context[" + std::to_string(i) + "]"));
  }
  return m;
}

// Kripke-style models

inline json to_json(const DoxModel& m) {
  json valuation = json::object();
  for (std::size_t w = 0; w < m.world_count(); ++w)
    for (const auto& p : m.valuation[w]) valuation[p].push_back(m.worlds[w]);
  json dox = json::object();
  for (const auto& a : m.agents) {
    json per_world = json::object();
    for (std::size_t w = 0; w < m.world_count(); ++w) {
      const BeliefBase& b = m.belief(a, w);
      if (!b.empty()) per_world[m.worlds[w]] = base_to_json(b);
    }
    dox[a] = per_world;
  }
  json out = {{"agents", m.agents},  {"worlds", m.worlds}, {"designated", m.worlds.at(m.designated)},
              {"valuation", valuation}, {"dox", dox}};
  if (m.rho) {
    json rho = json::array();
    for (const auto& g : m.rho->groups())
      for (std::size_t w = 0; w < m.world_count(); ++w)
        for (std::size_t u = 0; u < m.world_count(); ++u) {
          Grade d = m.rho->get(g, w, u);
          if (d.is_finite())
            rho.push_back({{"group", g.members()}, {"from", m.worlds[w]}, {"to", m.worlds[u]}, {"d", d.value()}});
        }
    out["rho"] = rho;
  }
  return out;
}

inline DoxModel dox_model_from_json(const json& j) {
  DoxModel m;
  m.agents = agents_from_json(j, "model");
  const ParseOptions opts = declared(m.agents);
  const json& worlds = field(j, "worlds", "model");
  if (!worlds.is_array() || worlds.empty()) throw Error("worlds: expected a nonempty array");
  for (const auto& w : worlds) m.add_world(id_from_json(w, "worlds"));
  m.designated = m.world_index(id_from_json(field(j, "designated", "model"), "designated"));
  if (j.contains("valuation")) {
    for (const auto& [p, ws] : j.at("valuation").items()) {
      if (!ws.is_array()) throw Error("valuation." + p + ": expected an array of worlds");
      for (const auto& w : ws) m.valuation[m.world_index(id_from_json(w, "valuation." + p))].insert(p);
    }
  }
  if (j.contains("dox")) {
    for (const auto& [a, per_world] : j.at("dox").items()) {
      if (!opts.agents->count(a)) throw Error("dox: undeclared agent '" + a + "'");
      for (const auto& [w, b] : per_world.items())
        m.dox[m.world_index(w)][a] = base_from_json(b, opts, "dox." + a + "." + w);
    }
  }
  if (j.contains("rho")) {
    DistanceTable table(m.agents, m.world_count());
    const json& rho = j.at("rho");
    if (!rho.is_array()) throw Error("rho: expected an array of entries");
    for (std::size_t i = 0; i < rho.size(); ++i) {
      const std::string at = "rho[" + std::to_string(i) + "]";
      std::vector<Agent> members;
      for (const auto& a : field(rho[i], "group", at)) members.push_back(id_from_json(a, at + ".group"));
      if (members.empty()) throw Error(at + ".group: empty group");
      table.set(Group(members), m.world_index(id_from_json(field(rho[i], "from", at), at)),
                m.world_index(id_from_json(field(rho[i], "to", at), at)), grade_from_json(field(rho[i], "d", at), at));
    }
    m.rho = std::move(table);
  }
  check_well_formed(m);
  return m;
}

inline bool is_dox_model(const json& j) { return j.is_object() && j.contains("worlds"); }

// Reports

inline json to_json(const ValidationReport& r) {
  json v = json::array();
  for (const auto& x : r.violations)
    v.push_back({{"condition", x.condition}, {"group", x.group.members()}, {"from", x.from}, {"to", x.to},
                 {"detail", x.detail}});
  return {{"ok", r.ok()}, {"violations", v}};
}

inline json to_json(const TableauStats& s) {
  return {{"max_depth", s.max_depth},
          {"nodes", s.nodes},
          {"denominators", s.denominators},
          {"peak_live_formulas", s.peak_live_formulas}};
}

inline json to_json(const Verdict& v) {
  json out = {{"result", v.result()}, {"stats", to_json(v.stats)}};
  out["model"] = v.model ? to_json(*v.model) : json(nullptr);
  return out;
}

inline json to_json(const oracle::CrossCheckReport& r) {
  json cases = json::array();
  for (const auto& c : r.cases) {
    json x = {{"index", c.index},
              {"formula", render(c.formula)},
              {"result", c.satisfiable ? "sat" : "unsat"},
              {"stats", to_json(c.stats)}};
    if (c.satisfiable)
      x["model_worlds"] = c.model ? c.model->world_count() : 0;
    else
      x["oracle_worlds"] = c.oracle_worlds;
    cases.push_back(x);
  }
  return {{"total", r.total},
          {"sat", r.sat},
          {"unsat", r.unsat},
          {"oracle_searched", r.oracle_searched},
          {"oracle_skipped", r.oracle_skipped},
          {"cases", cases}};
}

}  // namespace lgdda::io
