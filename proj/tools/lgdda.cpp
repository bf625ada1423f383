// Command-line front end over the JSON model formats.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lgdda/lgdda.hpp"

using namespace lgdda;
using nlohmann::json;

namespace {

constexpr int kTrue = 0;
constexpr int kFalse = 1;
constexpr int kUsage = 2;

bool g_json = false;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(path + ": " + e.what());
  }
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

ParseOptions agents_option(const std::vector<Agent>& agents) { return io::declared(agents); }

template <class T>
T with_context(const std::string& path, T (*load)(const json&), const json& j) {
  try {
    return load(j);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

struct LoadedModel {
  std::optional<DoxModel> dox;
  std::optional<Magbm> magbm;
  const std::vector<Agent>& agents() const { return dox ? dox->agents : magbm->agents; }
};

LoadedModel load_model(const std::string& path) {
  json j = read_json(path);
  LoadedModel m;
  if (io::is_dox_model(j))
    m.dox = with_context(path, io::dox_model_from_json, j);
  else
    m.magbm = with_context(path, io::magbm_from_json, j);
  return m;
}

DoxModel load_dox(const std::string& path) {
  return with_context(path, io::dox_model_from_json, read_json(path));
}

Magbm load_magbm(const std::string& path) { return with_context(path, io::magbm_from_json, read_json(path)); }

Group parse_group(const std::string& text, const std::vector<Agent>& agents) {
  std::istringstream in(text);
  std::vector<Agent> members;
  for (std::string a; in >> a;) {
    if (std::find(agents.begin(), agents.end(), a) == agents.end())
      throw Error("group: undeclared agent '" + a + "'");
    members.push_back(a);
  }
  if (members.empty()) throw Error("group: empty group");
  return Group(members);
}

void print_stats(const TableauStats& s) {
  std::cout << "max_depth " << s.max_depth << "\n"
            << "nodes " << s.nodes << "\n"
            << "denominators " << s.denominators << "\n"
            << "peak_live_formulas " << s.peak_live_formulas << "\n";
}

void print_report(const ValidationReport& r) {
  if (r.ok()) {
    std::cout << "ok\n";
    return;
  }
  for (const auto& v : r.violations)
    std::cout << v.condition << " {" << v.group.to_string() << "} " << v.from << " -> " << v.to << ": " << v.detail
              << "\n";
}

// Subcommands

struct ParseCmd {
  std::string formula;
  int run() const {
    OuterFormula f = parse(formula);
    if (g_json)
      std::cout << json{{"formula", render(f)}, {"modal_depth", f.modal_depth()}, {"size", f.size()}}.dump() << "\n";
    else
      std::cout << render(f) << "\n";
    return kTrue;
  }
};

struct McCmd {
  std::string model, formula;
  int run() const {
    LoadedModel m = load_model(model);
    OuterFormula f = parse(formula, agents_option(m.agents()));
    bool holds = m.dox ? eval_designated(*m.dox, f) : check(*m.magbm, f);
    if (g_json)
      std::cout << json{{"result", holds}}.dump() << "\n";
    else
      std::cout << (holds ? "true" : "false") << "\n";
    return holds ? kTrue : kFalse;
  }
};

struct DecideCmd {
  Mode mode;
  std::string formula, extract_path, seed_order = "formula";
  bool stats = false;
  std::optional<std::size_t> max_depth;
  int run() const {
    OuterFormula f = parse(formula);
    TableauOptions opts;
    opts.max_depth = max_depth;
    Verdict v = decide_formula(f, mode, !extract_path.empty(), opts);
    if (!extract_path.empty() && v.model) write_json(extract_path, io::to_json(*v.model));
    if (g_json) {
      json out = io::to_json(v);
      if (!stats) out.erase("stats");
      std::cout << out.dump() << "\n";
    } else {
      std::cout << v.result() << "\n";
      if (stats) print_stats(v.stats);
    }
    return v.holds() ? kTrue : kFalse;
  }
};

struct DisagreeCmd {
  std::string model, group;
  int run() const {
    LoadedModel m = load_model(model);
    Group g = parse_group(group, m.agents());
    Grade d;
    if (m.magbm) {
      d = disagreement_degree(*m.magbm, g);
    } else {
      WorldEvaluator ev(*m.dox);
      std::vector<Grade> ds;
      for (std::size_t u = 0; u < m.dox->world_count(); ++u) ds.push_back(ev.distance(g, m.dox->designated, u));
      d = min_star(ds);
    }
    if (g_json)
      std::cout << json{{"degree", io::grade_to_json(d)}}.dump() << "\n";
    else
      std::cout << d << "\n";
    return kTrue;
  }
};

struct TransformCmd {
  std::string from, to, in, out, formula = "true";
  int run() const {
    static const std::vector<std::string> cycle{"qngdm", "ngdm", "magbm"};
    auto pos = [](const std::string& kind) {
      return static_cast<std::size_t>(std::find(cycle.begin(), cycle.end(), kind) - cycle.begin());
    };
    std::optional<DoxModel> dox;
    std::optional<Magbm> magbm;
    std::vector<Agent> agents;
    if (from == "magbm") {
      magbm = load_magbm(in);
      agents = magbm->agents;
    } else {
      dox = load_dox(in);
      agents = dox->agents;
      if (!dox->rho) *dox = with_derived_rho(*dox);
    }
    const OuterFormula f = parse(formula, agents_option(agents));
    std::size_t at = pos(from);
    const std::size_t target = pos(to);
    // One step along qngdm -> ngdm -> magbm -> qngdm; at least one step unless from == to.
    while (at != target) {
      if (at == 0) {
        dox = qngdm_to_ngdm(*dox, f);
      } else if (at == 1) {
        magbm = ngdm_to_magbm(*dox);
        dox.reset();
      } else {
        dox = magbm_to_qngdm(*magbm);
        magbm.reset();
      }
      at = (at + 1) % cycle.size();
    }
    if (from == to) {
      ValidationReport r = to == "qngdm" ? validate_qngdm(*dox) : to == "ngdm" ? validate_ngdm(*dox) : ValidationReport{};
      if (!r.ok()) throw Error("input is not a valid " + to + ": " + r.violations.front().condition);
    }
    write_json(out, dox ? io::to_json(*dox) : io::to_json(*magbm));
    if (g_json)
      std::cout << json{{"written", out}, {"worlds", dox ? dox->world_count() : magbm->context.size()}}.dump() << "\n";
    else
      std::cout << "wrote " << out << "\n";
    return kTrue;
  }
};

struct FiltrateCmd {
  std::string in, formula, out;
  int run() const {
    DoxModel m = load_dox(in);
    if (!m.rho) m = with_derived_rho(m);
    DoxModel f = filtrate(m, parse(formula, agents_option(m.agents)));
    write_json(out, io::to_json(f));
    if (g_json)
      std::cout << json{{"written", out}, {"worlds", f.world_count()}}.dump() << "\n";
    else
      std::cout << "wrote " << out << " (" << f.world_count() << " worlds)\n";
    return kTrue;
  }
};

struct ValidateCmd {
  std::string in, as;
  int run() const {
    DoxModel m = load_dox(in);
    if (!m.rho) throw Error(in + ": model has no distance table");
    ValidationReport r = as == "ngdm" ? validate_ngdm(m) : validate_qngdm(m);
    if (g_json)
      std::cout << io::to_json(r).dump() << "\n";
    else
      print_report(r);
    return r.ok() ? kTrue : kFalse;
  }
};

axioms::Bounds parse_bounds(const std::string& text) {
  axioms::Bounds b;
  std::istringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error("bounds: expected key=value, got '" + item + "'");
    std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    auto number = [&]() -> std::uint64_t {
      try {
        std::size_t used = 0;
        auto v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
      } catch (const std::exception&) {
        throw Error("bounds: '" + key + "' needs a number");
      }
    };
    if (key == "agents")
      b.max_agents = number();
    else if (key == "grade")
      b.max_grade = number();
    else if (key == "omega")
      b.max_omega = number();
    else if (key == "psi")
      b.max_psi = number();
    else if (key == "atoms") {
      b.atoms.clear();
      std::istringstream names(value);
      for (std::string p; names >> p;) b.atoms.push_back(p);
    } else
      throw Error("bounds: unknown key '" + key + "'");
  }
  if (b.max_agents > kDefaultMaxAgents) throw Error("bounds: too many agents");
  return b;
}

struct AxiomsCmd {
  std::string bounds, emit;
  bool check = false;
  int run() const {
    auto corpus = axioms::corpus(parse_bounds(bounds));
    std::ofstream file;
    if (!emit.empty()) {
      file.open(emit);
      if (!file) throw Error("cannot write '" + emit + "'");
    }
    std::ostream& out = emit.empty() ? std::cout : file;
    std::size_t failures = 0;
    for (const auto& f : corpus) {
      if (!emit.empty() || !check) out << render(f) << "\n";
      if (check && !decide_formula(f, Mode::valid, false).holds()) {
        ++failures;
        std::cerr << "not valid: " << render(f) << "\n";
      }
    }
    if (check) {
      if (g_json)
        std::cout << json{{"instances", corpus.size()}, {"invalid", failures}}.dump() << "\n";
      else
        std::cout << corpus.size() << " instances, " << failures << " not valid\n";
    }
    return failures == 0 ? kTrue : kFalse;
  }
};

struct FuzzCmd {
  std::uint64_t n = 100, seed = 0;
  std::string agents = "1 2", atoms = "p q";
  std::uint64_t max_grade = 2;
  std::size_t max_depth = 3, max_worlds = 2;
  std::uint64_t budget = 5'000'000;
  int run() const {
    oracle::RandomConfig cfg;
    cfg.seed = seed;
    cfg.max_grade = max_grade;
    cfg.max_depth = max_depth;
    cfg.agents.clear();
    cfg.atoms.clear();
    std::istringstream a(agents), p(atoms);
    for (std::string x; a >> x;) cfg.agents.push_back(x);
    for (std::string x; p >> x;) cfg.atoms.push_back(x);
    oracle::SearchBounds sb;
    sb.max_worlds = max_worlds;
    sb.budget = budget;
    try {
      auto r = oracle::cross_check(n, cfg, sb);
      if (g_json)
        std::cout << io::to_json(r).dump() << "\n";
      else
        std::cout << r.total << " formulas: " << r.sat << " sat, " << r.unsat << " unsat (" << r.oracle_searched
                  << " searched by the oracle, " << r.oracle_skipped << " beyond budget)\n";
      return kTrue;
    } catch (const oracle::CrossCheckFailure& e) {
      json out = {{"failure", e.what()}, {"formula", render(e.formula())}};
      if (e.model()) out["model"] = io::to_json(*e.model());
      std::cout << out.dump(2) << "\n";
      return kFalse;
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graded distributed belief toolkit"};
  app.require_subcommand(1);
  app.add_flag("--json", g_json, "Machine-readable output");
  app.fallthrough();

  ParseCmd parse_cmd;
  auto* p = app.add_subcommand("parse", "Print the canonical form of a formula");
  p->add_option("formula", parse_cmd.formula)->required();

  McCmd mc;
  auto* m = app.add_subcommand("mc", "Check a formula at the designated point of a model");
  m->add_option("--model", mc.model)->required()->check(CLI::ExistingFile);
  m->add_option("--formula", mc.formula)->required();

  DecideCmd sat{Mode::sat}, valid{Mode::valid};
  for (auto* cmd : {&sat, &valid}) {
    auto* s = app.add_subcommand(cmd->mode == Mode::sat ? "sat" : "valid",
                                 cmd->mode == Mode::sat ? "Decide satisfiability" : "Decide validity");
    s->add_option("formula", cmd->formula)->required();
    s->add_option("--extract-model", cmd->extract_path, "Write a model (of the formula, or of its negation) here");
    s->add_flag("--stats", cmd->stats, "Report search statistics");
    s->add_option("--max-depth", cmd->max_depth, "Fail beyond this many nested eliminations");
    s->add_option("--seed-order", cmd->seed_order, "Rule application order")
        ->check(CLI::IsMember({"formula"}));
  }

  DisagreeCmd dis;
  auto* d = app.add_subcommand("disagree", "Print the disagreement degree of a group");
  d->add_option("--model", dis.model)->required()->check(CLI::ExistingFile);
  d->add_option("--group", dis.group, "Space-separated agents")->required();

  TransformCmd tr;
  auto* t = app.add_subcommand("transform", "Convert between model kinds");
  const std::vector<std::string> kinds{"qngdm", "ngdm", "magbm"};
  t->add_option("--from", tr.from)->required()->check(CLI::IsMember(kinds));
  t->add_option("--to", tr.to)->required()->check(CLI::IsMember(kinds));
  t->add_option("--in", tr.in)->required()->check(CLI::ExistingFile);
  t->add_option("--out", tr.out)->required();
  t->add_option("--formula", tr.formula, "Formula whose atoms fresh names must avoid");

  FiltrateCmd fl;
  auto* f = app.add_subcommand("filtrate", "Quotient a model by agreement on subformulas");
  f->add_option("--in", fl.in)->required()->check(CLI::ExistingFile);
  f->add_option("--formula", fl.formula)->required();
  f->add_option("--out", fl.out)->required();

  ValidateCmd val;
  auto* v = app.add_subcommand("validate", "Check the distance conditions of a model");
  v->add_option("--in", val.in)->required()->check(CLI::ExistingFile);
  v->add_option("--as", val.as)->required()->check(CLI::IsMember({"ngdm", "qngdm"}));

  AxiomsCmd ax;
  auto* a = app.add_subcommand("axioms", "Emit axiom instances");
  a->add_option("--bounds", ax.bounds, "e.g. agents=2,grade=2,atoms=p q,omega=2,psi=2")->required();
  a->add_option("--emit", ax.emit, "Output file (default: stdout)");
  a->add_flag("--check", ax.check, "Decide every instance");

  FuzzCmd fz;
  auto* z = app.add_subcommand("fuzz", "Cross-check the decision procedure on random formulas");
  z->add_option("--n", fz.n);
  z->add_option("--seed", fz.seed);
  z->add_option("--agents", fz.agents);
  z->add_option("--atoms", fz.atoms);
  z->add_option("--max-grade", fz.max_grade);
  z->add_option("--max-depth", fz.max_depth);
  z->add_option("--max-worlds", fz.max_worlds);
  z->add_option("--budget", fz.budget);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*p) return parse_cmd.run();
    if (*m) return mc.run();
    if (app.got_subcommand("sat")) return sat.run();
    if (app.got_subcommand("valid")) return valid.run();
    if (*d) return dis.run();
    if (*t) return tr.run();
    if (*f) return fl.run();
    if (*v) return val.run();
    if (*a) return ax.run();
    if (*z) return fz.run();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
