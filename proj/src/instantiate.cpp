#include "certkit/instantiate.hpp"

#include <algorithm>

#include "certkit/minimize.hpp"
#include "certkit/parallel.hpp"

namespace certkit {

ABox instantiation_abox(const Rule& r, const Substitution& sigma) {
  ABox out;
  for (const auto& a : r.body) {
    Atom g = substitute(sigma, a);
    for (const auto& t : g.args) {
      if (t.is_variable()) throw Error("variable ?" + t.name + " is not mapped to a constant");
    }
    out.insert(std::move(g));
  }
  return out;
}

namespace {

void check_query(const Rewriting& rw, const UCQ& query) {
  if (rw.query.rules.empty()) return;
  if (rw.query.predicate != query.predicate || rw.query.arity != query.arity) {
    throw Error("rewriting is for " + rw.query.predicate + "/" + std::to_string(rw.query.arity) +
                " but the query is " + query.predicate + "/" + std::to_string(query.arity));
  }
}

std::set<std::string> fixed_individuals(const Rewriting& rw, const UCQ& query,
                                        const std::vector<Rule>& tbox) {
  std::set<std::string> out = constants(rw.data);
  for (const auto& c : constants(query)) out.insert(c);
  for (const auto& c : constants(rw.bottom)) out.insert(c);
  for (const auto& c : constants(rw.query)) out.insert(c);
  for (const auto& c : constants(tbox)) out.insert(c);
  return out;
}

std::size_t max_variables(const Rewriting& rw) {
  std::size_t m = 0;
  for (const auto* part : {&rw.data, &rw.bottom, &rw.query.rules}) {
    for (const auto& r : *part) m = std::max(m, variables(r).size());
  }
  return m;
}

// Individuals for full instantiation: the fixed ones, then m fresh names
// that avoid them.
std::vector<std::string> individuals(const Rewriting& rw, const UCQ& query,
                                     const std::vector<Rule>& tbox) {
  std::set<std::string> fixed = fixed_individuals(rw, query, tbox);
  std::vector<std::string> out(fixed.begin(), fixed.end());
  std::size_t m = max_variables(rw);
  for (std::size_t i = 0, added = 0; added < m; ++i) {
    std::string name = fresh_name(i);
    if (fixed.count(name)) continue;
    out.push_back(name);
    ++added;
  }
  return out;
}

std::vector<ABox> all_instantiations(const Rule& r, const std::vector<std::string>& pool) {
  std::vector<std::string> vars = variables(r);
  std::vector<ABox> out;
  if (!vars.empty() && pool.empty()) return out;
  std::vector<std::size_t> idx(vars.size(), 0);
  while (true) {
    Substitution s;
    for (std::size_t i = 0; i < vars.size(); ++i) s[vars[i]] = Term::constant(pool[idx[i]]);
    out.push_back(instantiation_abox(r, s));
    // Odometer with the last variable varying fastest.
    std::size_t k = vars.size();
    while (k > 0 && ++idx[k - 1] == pool.size()) idx[--k] = 0;
    if (k == 0) break;
  }
  return out;
}

std::vector<bool> satisfiable(const std::vector<Rule>& program, const std::vector<ABox>& boxes,
                              const ChaseBudget& budget, std::size_t jobs) {
  std::vector<char> keep(boxes.size(), 0);
  parallel_for(boxes.size(), jobs, [&](std::size_t i) {
    keep[i] = !is_unsatisfiable(program, boxes[i], budget);
  });
  return std::vector<bool>(keep.begin(), keep.end());
}

// Allocates a distinct fresh individual to each variable of each rule in turn.
class InjectiveNamer {
 public:
  explicit InjectiveNamer(std::set<std::string> avoid) : avoid_(std::move(avoid)) {}

  Substitution lambda(const Rule& r) {
    Substitution s;
    for (const auto& v : variables(r)) {
      bool existential = false;
      for (const auto& d : r.head) {
        for (const auto& y : d.existentials) existential |= y.name == v;
      }
      if (!existential) s[v] = Term::constant(next());
    }
    return s;
  }

 private:
  std::string next() {
    std::string name;
    do {
      name = fresh_name(counter_++);
    } while (avoid_.count(name));
    return name;
  }

  std::set<std::string> avoid_;
  std::size_t counter_ = 0;
};

UCQ head_query(const Rule& r, const Substitution& lambda) {
  UCQ y{kQprime, 0, {}};
  for (const auto& d : r.head) {
    Rule cq;
    cq.body = substitute(lambda, d.atoms);
    cq.head.push_back(Disjunct{{}, {Atom{kQprime, {}}}});
    y.rules.push_back(std::move(cq));
  }
  return y;
}

TestSuite injective(const Rewriting& rw, const UCQ& query, const ChaseBudget& budget) {
  check_query(rw, query);
  InjectiveNamer namer(fixed_individuals(rw, query, {}));
  TestSuite suite;
  for (const auto& r : rw.bottom) suite.unsat.push_back(instantiation_abox(r, namer.lambda(r)));

  std::vector<QueryTest> candidates;
  for (const auto& r : rw.query.rules) {
    candidates.push_back(QueryTest{instantiation_abox(r, namer.lambda(r)), query});
  }
  for (const auto& r : rw.data) {
    if (r.is_falsum()) throw Error("falsum rule in the data part: " + serialize(r));
    Substitution lambda = namer.lambda(r);
    candidates.push_back(QueryTest{instantiation_abox(r, lambda), head_query(r, lambda)});
  }
  std::vector<Rule> filter = rw.data;
  filter.insert(filter.end(), rw.bottom.begin(), rw.bottom.end());
  filter = with_equality(filter);
  for (auto& t : candidates) {
    if (!is_unsatisfiable(filter, t.abox, budget)) suite.tests.push_back(std::move(t));
  }
  if (rw.data.empty()) suite.simple_for = query;
  return suite;
}

}  // namespace

std::pair<std::size_t, std::size_t> full_instantiation_size(const Rewriting& rw,
                                                            const UCQ& query,
                                                            const std::vector<Rule>& tbox) {
  std::size_t n = individuals(rw, query, tbox).size();
  auto count = [n](const std::vector<Rule>& rules) {
    std::size_t total = 0;
    for (const auto& r : rules) {
      std::size_t k = 1;
      for (std::size_t i = 0; i < variables(r).size(); ++i) k *= n;
      total += k;
    }
    return total;
  };
  return {count(rw.bottom), count(rw.query.rules)};
}

TestSuite full_instantiation(const Rewriting& rw, const UCQ& query,
                             const std::vector<Rule>& tbox, const FullOptions& opts) {
  if (!rw.is_ucq_form()) throw Error("full instantiation needs a rewriting without data rules");
  check_query(rw, query);
  std::vector<std::string> pool = individuals(rw, query, tbox);
  TestSuite suite;
  suite.simple_for = query;
  for (const auto& r : rw.bottom) {
    for (auto& a : all_instantiations(r, pool)) suite.unsat.push_back(std::move(a));
  }
  std::vector<ABox> candidates;
  for (const auto& r : rw.query.rules) {
    for (auto& a : all_instantiations(r, pool)) candidates.push_back(std::move(a));
  }
  std::vector<bool> keep =
      satisfiable(with_equality(rw.bottom), candidates, opts.budget, opts.jobs);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (keep[i]) suite.tests.push_back(QueryTest{candidates[i], query});
  }
  if (opts.dedup) suite = dedup_isomorphic(suite, fixed_individuals(rw, query, tbox));
  return suite;
}

TestSuite injective_instantiation_ucq(const Rewriting& rw, const UCQ& query,
                                      const ChaseBudget& budget) {
  if (!rw.is_ucq_form()) {
    throw Error("injective UCQ instantiation needs a rewriting without data rules");
  }
  return injective(rw, query, budget);
}

TestSuite injective_instantiation_datalog(const Rewriting& rw, const UCQ& query,
                                          const ChaseBudget& budget) {
  return injective(rw, query, budget);
}

TestSuite ground_instantiation(const Rewriting& rw, const ChaseBudget& budget) {
  if (!rw.is_ground_form()) throw Error("a ground rewriting has no query rules");
  for (const auto& r : rw.data) {
    for (const auto& d : r.head) {
      if (!d.existentials.empty()) {
        throw Error("head variable of a data rule does not occur in its body: " + serialize(r));
      }
    }
  }
  Rewriting only_data{rw.data, rw.bottom, UCQ{}};
  TestSuite suite = injective(only_data, UCQ{}, budget);
  suite.simple_for.reset();
  return suite;
}

bool ValidationReport::ok() const {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.valid; });
}

bool ValidationReport::inconclusive() const {
  return std::any_of(entries.begin(), entries.end(),
                     [](const auto& e) { return e.unsat == Tri::Unknown; });
}

ValidationReport validate_suite(const TestSuite& suite, const std::vector<Rule>& tbox,
                                const ChaseBudget& budget, std::size_t jobs) {
  std::vector<SuiteEntry> order = suite_entries(suite);
  std::vector<Rule> program = with_equality(tbox);
  ValidationReport report;
  report.entries.resize(order.size());
  parallel_for(order.size(), jobs, [&](std::size_t i) {
    const SuiteEntry& e = order[i];
    const ABox& a = e.unsat ? suite.unsat[e.index] : suite.tests[e.index].abox;
    Tri u = unsat_tri(program, a, budget);
    report.entries[i] = ValidationEntry{e.id, u, u == (e.unsat ? Tri::True : Tri::False)};
  });
  return report;
}

}  // namespace certkit
