#include "certkit/chase.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

#include "certkit/syntax.hpp"

namespace certkit {

namespace {

struct Branch {
  FactIndex facts;
  std::set<std::string> nulls;
  std::size_t next_fresh = 0;
  std::size_t created = 0;
};

std::size_t first_free_fresh(const std::set<std::string>& names) {
  std::size_t next = 0;
  const std::string prefix = kFreshPrefix;
  for (const auto& n : names) {
    if (n.size() <= prefix.size() || n.compare(0, prefix.size(), prefix) != 0) continue;
    std::string digits = n.substr(prefix.size());
    if (!std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) continue;
    if (digits.size() > 9) continue;
    next = std::max<std::size_t>(next, std::stoul(digits) + 1);
  }
  return next;
}

class Chase {
 public:
  Chase(const std::vector<Rule>& program, const ChaseBudget& budget)
      : program_(program), budget_(budget) {
    for (const auto& r : program_) {
      for (const auto& a : r.body) seed_eq_ |= a.predicate == kEq;
      for (const auto& d : r.head) {
        for (const auto& a : d.atoms) seed_eq_ |= a.predicate == kEq;
      }
    }
  }

  ModelSet run(const ABox& abox) {
    Branch start;
    std::set<std::string> names = abox.constants();
    auto pc = constants(program_);
    names.insert(pc.begin(), pc.end());
    for (const auto& f : abox.facts) start.facts.insert(f);
    if (seed_eq_) {
      for (const auto& c : names) {
        start.facts.insert(Atom{kEq, {Term::constant(c), Term::constant(c)}});
      }
    }
    start.next_fresh = first_free_fresh(names);

    std::deque<Branch> pending;
    pending.push_back(std::move(start));
    std::size_t branches = 1;
    ModelSet out;
    std::vector<std::set<Atom>> seen;
    while (!pending.empty()) {
      Branch b = std::move(pending.front());
      pending.pop_front();
      std::vector<Branch> children;
      bool closed = false;
      saturate_branch(b, closed, children);
      if (!children.empty()) {
        branches += children.size() - 1;
        if (branches > budget_.max_branches) {
          throw BudgetExceeded("chase budget exceeded: more than " +
                               std::to_string(budget_.max_branches) + " branches");
        }
        for (auto& c : children) pending.push_back(std::move(c));
        continue;
      }
      if (closed) continue;
      bool dup = false;
      for (const auto& s : seen) {
        if (s == b.facts.members()) {
          dup = true;
          break;
        }
      }
      if (dup) continue;
      seen.push_back(b.facts.members());
      out.models.push_back(Model{std::move(b.facts), std::move(b.nulls)});
    }
    out.unsat = out.models.empty();
    return out;
  }

 private:
  struct Trigger {
    const Rule* rule;
    Substitution match;
  };

  void add_disjunct(Branch& b, const Disjunct& d, const Substitution& match) {
    Substitution s = match;
    for (const auto& y : d.existentials) {
      if (b.created >= budget_.max_fresh) {
        throw BudgetExceeded("chase budget exceeded: more than " +
                             std::to_string(budget_.max_fresh) + " fresh individuals");
      }
      std::string name = fresh_name(b.next_fresh++);
      ++b.created;
      b.nulls.insert(name);
      s[y.name] = Term::constant(name);
      if (seed_eq_) b.facts.insert(Atom{kEq, {Term::constant(name), Term::constant(name)}});
    }
    for (const auto& a : d.atoms) b.facts.insert(substitute(s, a));
  }

  bool satisfied(const Branch& b, const Rule& r, const Substitution& match) const {
    for (const auto& d : r.head) {
      if (has_match(d.atoms, b.facts, match)) return true;
    }
    return false;
  }

  void saturate_branch(Branch& b, bool& closed, std::vector<Branch>& children) {
    for (std::size_t round = 0;; ++round) {
      if (round >= budget_.max_rounds) {
        throw BudgetExceeded("chase budget exceeded: more than " +
                             std::to_string(budget_.max_rounds) + " rounds");
      }
      std::vector<Trigger> triggers;
      for (const auto& r : program_) {
        for_each_match(r.body, b.facts, {}, [&](const Substitution& s) {
          triggers.push_back(Trigger{&r, s});
          return true;
        });
      }
      bool changed = false;
      for (const auto& t : triggers) {
        if (t.rule->is_falsum()) {
          closed = true;
          return;
        }
        if (satisfied(b, *t.rule, t.match)) continue;
        if (t.rule->head.size() == 1) {
          add_disjunct(b, t.rule->head[0], t.match);
          changed = true;
          continue;
        }
        for (const auto& d : t.rule->head) {
          Branch child = b;
          add_disjunct(child, d, t.match);
          children.push_back(std::move(child));
        }
        return;
      }
      if (!changed) return;
    }
  }

  const std::vector<Rule>& program_;
  ChaseBudget budget_;
  bool seed_eq_ = false;
};

}  // namespace

ModelSet saturate(const std::vector<Rule>& program, const ABox& abox, const ChaseBudget& budget) {
  return Chase(program, budget).run(abox);
}

bool is_unsatisfiable(const std::vector<Rule>& program, const ABox& abox, const ChaseBudget& budget) {
  return saturate(program, abox, budget).unsat;
}

AnswerSet all_tuples(const std::set<std::string>& constants, std::size_t arity) {
  AnswerSet out;
  std::vector<std::string> pool(constants.begin(), constants.end());
  if (arity > 0 && pool.empty()) return out;
  std::vector<std::size_t> idx(arity, 0);
  while (true) {
    Tuple t;
    for (auto i : idx) t.push_back(pool[i]);
    out.insert(std::move(t));
    std::size_t k = 0;
    while (k < arity && ++idx[k] == pool.size()) idx[k++] = 0;
    if (k == arity) break;
  }
  return out;
}

AnswerSet certain_answers(const UCQ& q, const std::vector<Rule>& program, const ABox& abox,
                          const ChaseBudget& budget) {
  ModelSet ms = saturate(program, abox, budget);
  if (ms.unsat) {
    std::set<std::string> named = abox.constants();
    auto pc = constants(program);
    auto qc = constants(q);
    named.insert(pc.begin(), pc.end());
    named.insert(qc.begin(), qc.end());
    return all_tuples(named, q.arity);
  }
  std::optional<AnswerSet> result;
  for (const auto& m : ms.models) {
    AnswerSet here = evaluate(q, m.facts, m.nulls);
    if (!result) {
      result = std::move(here);
      continue;
    }
    AnswerSet both;
    for (const auto& t : *result) {
      if (here.count(t)) both.insert(t);
    }
    result = std::move(both);
    if (result->empty()) break;
  }
  return result ? *result : AnswerSet{};
}

bool entails_rule(const std::vector<Rule>& theory, const Rule& r, const ChaseBudget& budget) {
  Substitution sk;
  std::size_t i = 0;
  for (const auto& v : body_variables(r)) {
    sk[v] = Term::constant(std::string(kFreshPrefix) + "s" + std::to_string(i++));
  }
  ABox abox;
  for (const auto& a : r.body) abox.facts.insert(substitute(sk, a));
  ModelSet ms = saturate(theory, abox, budget);
  if (ms.unsat) return true;
  if (r.is_falsum()) return false;
  for (const auto& m : ms.models) {
    bool any = false;
    for (const auto& d : r.head) {
      if (has_match(substitute(sk, d.atoms), m.facts)) {
        any = true;
        break;
      }
    }
    if (!any) return false;
  }
  return true;
}

Tri unsat_tri(const std::vector<Rule>& program, const ABox& abox, const ChaseBudget& budget) {
  try {
    return is_unsatisfiable(program, abox, budget) ? Tri::True : Tri::False;
  } catch (const BudgetExceeded&) {
    return Tri::Unknown;
  }
}

std::optional<AnswerSet> try_certain_answers(const UCQ& q, const std::vector<Rule>& program,
                                             const ABox& abox, const ChaseBudget& budget) {
  try {
    return certain_answers(q, program, abox, budget);
  } catch (const BudgetExceeded&) {
    return std::nullopt;
  }
}

std::vector<Rule> with_equality(const std::vector<Rule>& program, const Signature& extra) {
  Signature sig = signature(program);
  sig.insert(extra.begin(), extra.end());
  bool uses_eq = false;
  for (const auto& p : sig) uses_eq |= p.name == kEq || p.name == kNeq;
  if (!uses_eq) return program;
  std::vector<Rule> out = program;
  std::set<Rule> present(program.begin(), program.end());
  for (auto& r : equality_axioms(sig)) {
    if (!present.count(r)) out.push_back(std::move(r));
  }
  return out;
}

bool VerificationReport::ok() const {
  if (!structural_errors.empty()) return false;
  for (const auto& c : checks) {
    if (c.entailed != Tri::True) return false;
  }
  return true;
}

VerificationReport verify_rewriting(const Rewriting& rw, const std::vector<Rule>& tbox,
                                    const ChaseBudget& budget) {
  VerificationReport rep;
  const std::string& q = rw.query.predicate;
  auto mentions_q = [&](const Rule& r) {
    if (q.empty()) return false;
    for (const auto& a : r.body) {
      if (a.predicate == q) return true;
    }
    for (const auto& d : r.head) {
      for (const auto& a : d.atoms) {
        if (a.predicate == q) return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < rw.data.size(); ++i) {
    const Rule& r = rw.data[i];
    if (r.is_falsum()) rep.structural_errors.push_back("data rule " + std::to_string(i + 1) + " has a falsum head");
    if (mentions_q(r)) rep.structural_errors.push_back("data rule " + std::to_string(i + 1) + " mentions the query predicate");
  }
  for (std::size_t i = 0; i < rw.bottom.size(); ++i) {
    if (!rw.bottom[i].is_falsum()) {
      rep.structural_errors.push_back("bottom rule " + std::to_string(i + 1) + " does not have a falsum head");
    }
  }
  for (std::size_t i = 0; i < rw.query.rules.size(); ++i) {
    const Rule& r = rw.query.rules[i];
    std::string where = "query rule " + std::to_string(i + 1);
    if (!r.is_cq_shaped()) {
      rep.structural_errors.push_back(where + " is not a conjunctive query");
      continue;
    }
    const Atom& h = r.head[0].atoms[0];
    if (h.predicate != q || h.arity() != rw.query.arity) {
      rep.structural_errors.push_back(where + " does not derive " + q + "/" + std::to_string(rw.query.arity));
    }
    for (const auto& a : r.body) {
      if (a.predicate == q) rep.structural_errors.push_back(where + " uses the query predicate in its body");
    }
  }
  std::vector<Rule> theory = with_equality(tbox);
  auto check = [&](const char* section, const std::vector<Rule>& rules) {
    for (std::size_t i = 0; i < rules.size(); ++i) {
      RuleCheck c{section, i, rules[i], Tri::Unknown};
      try {
        c.entailed = entails_rule(theory, rules[i], budget) ? Tri::True : Tri::False;
      } catch (const BudgetExceeded&) {
        c.entailed = Tri::Unknown;
      }
      rep.checks.push_back(std::move(c));
    }
  };
  check("data", rw.data);
  check("bottom", rw.bottom);
  return rep;
}

}  // namespace certkit
