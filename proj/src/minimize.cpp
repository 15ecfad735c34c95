#include "certkit/minimize.hpp"

#include <algorithm>

#include "certkit/match.hpp"
#include "certkit/syntax.hpp"
#include "certkit/unify.hpp"

namespace certkit {

namespace {

void require_cq_or_falsum(const Rule& r) {
  if (!r.is_falsum() && !r.is_cq_shaped()) {
    throw Error("subsumption needs CQ-shaped or falsum rules: " + serialize(r));
  }
}

}  // namespace

std::optional<Substitution> subsumes(const Rule& r, const Rule& r2) {
  require_cq_or_falsum(r);
  require_cq_or_falsum(r2);
  if (r.is_falsum() != r2.is_falsum()) return std::nullopt;
  Substitution initial;
  if (!r.is_falsum()) {
    const Atom& h = r.head[0].atoms[0];
    const Atom& h2 = r2.head[0].atoms[0];
    if (h.predicate != h2.predicate || h.args.size() != h2.args.size()) return std::nullopt;
    for (std::size_t i = 0; i < h.args.size(); ++i) {
      const Term& t = h.args[i];
      if (t.is_constant()) {
        if (t != h2.args[i]) return std::nullopt;
        continue;
      }
      auto [it, fresh] = initial.emplace(t.name, h2.args[i]);
      if (!fresh && it->second != h2.args[i]) return std::nullopt;
    }
  }
  FactIndex target(r2.body);
  std::optional<Substitution> found;
  for_each_match(dedup_atoms(r.body), target, initial, [&](const Substitution& s) {
    found = s;
    return false;
  });
  return found;
}

Rule condense(const Rule& r) {
  require_cq_or_falsum(r);
  Rule cur = r;
  cur.body = dedup_atoms(cur.body);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < cur.body.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < cur.body.size() && !changed; ++j) {
        auto mgu = unify({{cur.body[i], cur.body[j]}});
        if (!mgu) continue;
        Rule candidate = substitute(*mgu, cur);
        candidate.body = dedup_atoms(candidate.body);
        if (subsumes(candidate, cur)) {
          cur = std::move(candidate);
          changed = true;
        }
      }
    }
  }
  return cur;
}

std::vector<Rule> remove_subsumed(const std::vector<Rule>& rules) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    bool covered = false;
    for (std::size_t k : kept) {
      if (subsumes(rules[k], rules[i])) {
        covered = true;
        break;
      }
    }
    if (covered) continue;
    std::erase_if(kept, [&](std::size_t k) { return subsumes(rules[i], rules[k]).has_value(); });
    kept.push_back(i);
  }
  std::sort(kept.begin(), kept.end());
  std::vector<Rule> out;
  for (std::size_t k : kept) out.push_back(rules[k]);
  return out;
}

Rewriting minimize_ucq(const Rewriting& rw) {
  if (!rw.is_ucq_form()) throw Error("minimize needs a rewriting without data rules");
  Rewriting out = rw;
  for (auto& r : out.bottom) r = condense(r);
  for (auto& r : out.query.rules) r = condense(r);
  out.bottom = remove_subsumed(out.bottom);
  out.query.rules = remove_subsumed(out.query.rules);
  return out;
}

namespace {

std::vector<ABox> dedup_group(const std::vector<ABox>& boxes, const std::set<std::string>& fixed) {
  std::vector<std::vector<ABox>> classes;
  for (const auto& a : boxes) {
    bool placed = false;
    for (auto& c : classes) {
      if (abox_isomorphic(c.front(), a, fixed)) {
        c.push_back(a);
        placed = true;
        break;
      }
    }
    if (!placed) classes.push_back({a});
  }
  std::vector<ABox> out;
  for (const auto& c : classes) {
    const ABox* best = &c.front();
    for (const auto& a : c) {
      if (inline_abox(a) < inline_abox(*best)) best = &a;
    }
    out.push_back(*best);
  }
  return out;
}

}  // namespace

TestSuite dedup_isomorphic(const TestSuite& suite, const std::set<std::string>& fixed) {
  TestSuite out;
  out.simple_for = suite.simple_for;
  out.unsat = dedup_group(suite.unsat, fixed);
  std::vector<UCQ> queries;
  for (const auto& t : suite.tests) {
    bool seen = false;
    for (const auto& q : queries) seen |= q == t.query;
    if (!seen) queries.push_back(t.query);
  }
  // Tests stay grouped in first-appearance order of their query.
  for (const auto& q : queries) {
    std::vector<ABox> group;
    for (const auto& t : suite.tests) {
      if (t.query == q) group.push_back(t.abox);
    }
    for (auto& a : dedup_group(group, fixed)) out.tests.push_back(QueryTest{std::move(a), q});
  }
  return out;
}

}  // namespace certkit
