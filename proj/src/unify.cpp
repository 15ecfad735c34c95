#include "certkit/unify.hpp"

#include <map>
#include <set>

#include "certkit/match.hpp"

namespace certkit {

namespace {

Term walk(const Substitution& s, Term t) {
  while (t.is_variable()) {
    auto it = s.find(t.name);
    if (it == s.end()) break;
    t = it->second;
  }
  return t;
}

bool bind(Substitution& s, const Term& left, const Term& right) {
  Term a = walk(s, left), b = walk(s, right);
  if (a == b) return true;
  if (b.is_variable()) {
    s[b.name] = a;
  } else if (a.is_variable()) {
    s[a.name] = b;
  } else {
    return false;
  }
  return true;
}

}  // namespace

std::optional<Substitution> unify(const std::vector<std::pair<Atom, Atom>>& pairs,
                                  const Substitution& seed) {
  Substitution s = seed;
  for (const auto& [a, b] : pairs) {
    if (a.predicate != b.predicate || a.args.size() != b.args.size()) return std::nullopt;
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (!bind(s, a.args[i], b.args[i])) return std::nullopt;
    }
  }
  Substitution solved;
  for (const auto& [v, t] : s) solved[v] = walk(s, t);
  return solved;
}

Rule standardize_apart(const Rule& r, const std::string& suffix) {
  Substitution s;
  for (const auto& v : variables(r)) s[v] = Term::var(v + suffix);
  return substitute(s, r);
}

Rule canonicalize(const Rule& r) {
  Rule deduped = r;
  deduped.body = dedup_atoms(r.body);
  Substitution s;
  std::size_t n = 0;
  for (const auto& v : variables(deduped)) s[v] = Term::var(variable_name(n++));
  return substitute(s, deduped);
}

bool alpha_equivalent(const Rule& a, const Rule& b) {
  std::vector<Atom> ba = dedup_atoms(a.body), bb = dedup_atoms(b.body);
  if (ba.size() != bb.size() || a.head.size() != b.head.size()) return false;
  if (variables(a).size() != variables(b).size()) return false;
  // Heads are compared atom by atom, bodies as sets via an injective match
  // onto variables only.
  std::set<Term> excluded;
  for (const auto& c : constants(b)) excluded.insert(Term::constant(c));
  std::vector<Atom> pattern = ba, target = bb;
  for (std::size_t d = 0; d < a.head.size(); ++d) {
    const Disjunct& da = a.head[d];
    const Disjunct& db = b.head[d];
    if (da.atoms.size() != db.atoms.size() || da.existentials.size() != db.existentials.size()) {
      return false;
    }
    // Tag head atoms with their position so they only match each other.
    for (std::size_t i = 0; i < da.atoms.size(); ++i) {
      std::string tag = "#h" + std::to_string(d) + "." + std::to_string(i) + ".";
      pattern.push_back(Atom{tag + da.atoms[i].predicate, da.atoms[i].args});
      target.push_back(Atom{tag + db.atoms[i].predicate, db.atoms[i].args});
    }
  }
  FactIndex facts(target);
  if (facts.size() != target.size()) return false;
  MatchOptions opts;
  opts.injective = true;
  opts.excluded = &excluded;
  return has_match(pattern, facts, {}, opts);
}

}  // namespace certkit
