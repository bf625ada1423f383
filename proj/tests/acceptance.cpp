// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <iostream>
#include <map>
#include <sstream>

#include "committee.hpp"
#include "lgdda/lgdda.hpp"

using namespace lgdda;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  if (!ok) ++failures;
  std::cout << (ok ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << detail << std::endl;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  std::string elapsed() const {
    std::ostringstream os;
    os.precision(3);
    os << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << "s";
    return os.str();
  }
};

// 1
void committee_verdicts() {
  Timer t;
  using namespace committee;
  std::vector<std::string> problems;
  std::size_t checks = 0;
  auto expect = [&](const std::string& label, bool ok) {
    ++checks;
    if (!ok) problems.push_back(label);
  };
  const Group ab{"Ann", "Bob"}, cj{"Cath", "John"}, all{"Ann", "Bob", "Cath", "John"};
  TableauOptions opts;
  opts.agents = kAgents;

  for (const Grades& g : {Grades{}, Grades{1, 2, 1, 1, 2}}) {
    const std::string at = "(" + std::to_string(g.k0) + "," + std::to_string(g.k1) + "," + std::to_string(g.k2) +
                           "," + std::to_string(g.k3) + "," + std::to_string(g.k4) + ") ";
    const OuterFormula pre = premise(g);

    expect(at + "AB box in", decide_formula(implies(pre, box(ab, ab_degree(g), atom("in"))), Mode::valid, false, opts).holds());
    expect(at + "CJ box ~in",
           decide_formula(implies(pre, box(cj, cj_degree(g), neg(atom("in")))), Mode::valid, false, opts).holds());

    for (const Group& grp : {ab, cj}) {
      const OuterFormula consequent = disagree(grp, 1);
      Verdict v = decide_formula(implies(pre, consequent), Mode::valid, true, opts);
      const bool counter = !v.holds() && v.model && validate_qngdm(*v.model).ok() &&
                           eval_designated(*v.model, pre) && !eval_designated(*v.model, consequent);
      expect(at + "no disagreement " + render(consequent), counter);
    }

    expect(at + "all-four disagreement",
           decide_formula(implies(pre, disagree(all, all_disagreement(g))), Mode::valid, false, opts).holds());
    // the belief-model reading agrees with the hand-computed degree
    expect(at + "belief-model degree", disagreement_degree(model(g), all) >= Grade(all_disagreement(g)));
  }
  std::string detail = std::to_string(checks - problems.size()) + "/" + std::to_string(checks) + " verdicts as expected";
  for (const auto& p : problems) detail += "; wrong: " + p;
  report(1, "committee verdicts", problems.empty(), detail + " in " + t.elapsed());
}

// 2
void axiom_corpus() {
  Timer t;
  axioms::Bounds b;
  b.max_agents = 3;
  b.max_grade = 3;
  b.atoms = {"p", "q"};
  b.max_omega = 3;
  b.max_psi = 2;
  const auto corpus = axioms::corpus(b);
  std::vector<Group> groups = all_groups({"1", "2", "3"});
  std::size_t invalid = 0, lifted_invalid = 0, i = 0;
  std::string first_bad;
  for (const auto& f : corpus) {
    if (!decide_formula(f, Mode::valid, false).holds()) {
      if (first_bad.empty()) first_bad = render(f);
      ++invalid;
      continue;
    }
    const Group& g = groups[i % groups.size()];
    const Grade k = (i / groups.size()) % (b.max_grade + 1);
    ++i;
    const OuterFormula lifted = axioms::necessitate(f, g, k);
    if (!decide_formula(lifted, Mode::valid, false).holds()) {
      if (first_bad.empty()) first_bad = render(lifted);
      ++lifted_invalid;
    }
  }
  std::string detail = std::to_string(corpus.size()) + " instances, " + std::to_string(invalid) + " invalid; " +
                       std::to_string(i) + " lifts, " + std::to_string(lifted_invalid) + " invalid";
  if (!first_bad.empty()) detail += "; first: " + first_bad;
  report(2, "axiom corpus", invalid == 0 && lifted_invalid == 0 && !corpus.empty(), detail + " in " + t.elapsed());
}

// 3
std::optional<oracle::CrossCheckReport> cross_check_corpus() {
  Timer t;
  oracle::RandomConfig cfg;
  cfg.seed = 20240601;
  oracle::SearchBounds bounds;
  try {
    oracle::CrossCheckReport r = oracle::cross_check(500, cfg, bounds);
    std::size_t validated = 0;
    for (const auto& c : r.cases)
      if (c.satisfiable && c.model && validate_qngdm(*c.model).ok() && eval_designated(*c.model, c.formula))
        ++validated;
    std::ostringstream os;
    os << r.total << " formulas, " << r.sat << " sat (" << validated << " models validated), " << r.unsat
       << " unsat (" << r.oracle_searched << " searched, " << r.oracle_skipped << " over budget) in " << t.elapsed();
    report(3, "oracle cross-check", r.total == 500 && validated == r.sat, os.str());
    return r;
  } catch (const oracle::CrossCheckFailure& e) {
    report(3, "oracle cross-check", false, e.what());
  } catch (const Error& e) {
    report(3, "oracle cross-check", false, std::string("error: ") + e.what());
  }
  return std::nullopt;
}

// 4
void transformation_cycle(const oracle::CrossCheckReport* r) {
  Timer t;
  if (!r) {
    report(4, "transformation cycle", false, "no cross-check corpus");
    return;
  }
  std::size_t models = 0, ok = 0;
  std::string first_bad;
  for (const auto& c : r->cases) {
    if (!c.satisfiable || !c.model) continue;
    ++models;
    const OuterFormula& f = c.formula;
    std::string bad;
    try {
      DoxModel filtered = filtrate(*c.model, f);
      const std::size_t sub = subformula_closure(f).size();
      if (sub < 63 && filtered.world_count() > (std::size_t{1} << sub)) bad = "filtration too large";
      else if (!eval_designated(filtered, f)) bad = "filtration lost the formula";
      DoxModel ngdm = qngdm_to_ngdm(filtered, f);
      if (bad.empty() && !validate_ngdm(ngdm).ok()) bad = "conversion is not an NGDM";
      else if (bad.empty() && !eval_designated(ngdm, f)) bad = "conversion lost the formula";
      Magbm magbm = ngdm_to_magbm(ngdm);
      if (bad.empty() && !check(magbm, f)) bad = "belief model lost the formula";
      DoxModel back = magbm_to_qngdm(magbm);
      if (bad.empty() && !validate_qngdm(back).ok()) bad = "round trip is not a QNGDM";
      else if (bad.empty() && !eval_designated(back, f)) bad = "round trip lost the formula";
    } catch (const Error& e) {
      bad = std::string("error: ") + e.what();
    }
    if (bad.empty())
      ++ok;
    else if (first_bad.empty())
      first_bad = bad + " on " + render(f);
  }
  std::string detail = std::to_string(ok) + "/" + std::to_string(models) + " models survive the cycle";
  if (!first_bad.empty()) detail += "; first: " + first_bad;
  report(4, "transformation cycle", models > 0 && ok == models, detail + " in " + t.elapsed());
}

// 5
void branch_linearity(const oracle::CrossCheckReport* r) {
  Timer t;
  constexpr double kMaxExponent = 3.0;
  constexpr double kMaxScatter = 4.0;

  std::size_t depth_violations = 0, checked = 0;
  if (r)
    for (const auto& c : r->cases) {
      ++checked;
      if (c.stats.max_depth > c.formula.modal_depth() + 1) ++depth_violations;
    }

  // sweep: bucket maxima of peak live formulas by size
  std::map<std::size_t, std::size_t> peak_by_size;
  std::size_t bound_violations = 0, sampled = 0;
  for (std::size_t d = 1; d <= 5; ++d) {
    oracle::RandomConfig cfg;
    cfg.max_depth = d;
    cfg.seed = 7000 + d;
    for (std::uint64_t i = 0; i < 60; ++i) {
      const OuterFormula f = oracle::random_formula(cfg, i);
      NodeDecision dec = decide_node({f});
      ++sampled;
      if (dec.stats.max_depth > f.modal_depth() + 1) ++depth_violations;
      const std::size_t n = f.size(), peak = dec.stats.peak_live_formulas;
      if (peak > 2 * (f.modal_depth() + 1) * n * (n + 1)) ++bound_violations;
      auto& slot = peak_by_size[n];
      slot = std::max(slot, peak);
    }
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
  for (const auto& [n, peak] : peak_by_size) {
    if (n < 2 || peak == 0) continue;
    const double x = std::log(double(n)), y = std::log(double(peak));
    sx += x, sy += y, sxx += x * x, sxy += x * y, m += 1;
  }
  const double exponent = m > 1 ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0;
  const double intercept = m > 0 ? (sy - exponent * sx) / m : 0;
  double scatter = 0;
  for (const auto& [n, peak] : peak_by_size) {
    if (n < 2 || peak == 0) continue;
    scatter = std::max(scatter, double(peak) / std::exp(intercept + exponent * std::log(double(n))));
  }
  std::ostringstream os;
  os.precision(3);
  os << checked + sampled << " runs, " << depth_violations << " depth violations; sweep of " << sampled
     << " formulas over " << peak_by_size.size() << " sizes: fitted exponent " << exponent << " (max " << kMaxExponent
     << "), worst ratio to fit " << scatter << " (max " << kMaxScatter << "), " << bound_violations
     << " above the quadratic-per-level bound in " << t.elapsed();
  report(5, "branch linearity", r && depth_violations == 0 && bound_violations == 0 && m > 1 &&
                                    exponent <= kMaxExponent && scatter <= kMaxScatter,
         os.str());
}

// 6
void partition_counts() {
  std::size_t cases = 0, wrong = 0;
  std::vector<Agent> pool{"a", "b", "c", "d"};
  for (std::size_t size = 1; size <= 4; ++size) {
    Group g(std::vector<Agent>(pool.begin(), pool.begin() + size));
    for (std::uint64_t k = 0; k <= 6; ++k) {
      // C(k+n-1, n-1) by the multiplicative formula
      std::uint64_t expected = 1;
      for (std::uint64_t i = 1; i < size; ++i) expected = expected * (k + i) / i;
      ++cases;
      if (partitions(Grade(k), g).size() != expected) ++wrong;
    }
  }
  report(6, "partition counts", wrong == 0,
         std::to_string(cases - wrong) + "/" + std::to_string(cases) + " counts match the binomial");
}

}  // namespace

int main() {
  committee_verdicts();
  axiom_corpus();
  auto r = cross_check_corpus();
  transformation_cycle(r ? &*r : nullptr);
  branch_linearity(r ? &*r : nullptr);
  partition_counts();
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria failing") << std::endl;
  return failures == 0 ? 0 : 1;
}
