#include "certkit/model.hpp"

#include <algorithm>

#include "certkit/match.hpp"

namespace certkit {

bool Atom::is_ground() const {
  return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_constant(); });
}

bool Rule::is_datalog() const {
  return head.size() == 1 && head[0].existentials.empty();
}

bool Rule::is_plain_datalog() const {
  return is_datalog() && head[0].atoms.size() == 1;
}

bool UCQ::is_ground() const {
  for (const auto& r : rules) {
    std::set<std::string> head_vars;
    for (const auto& t : r.head.at(0).atoms.at(0).args) {
      if (t.is_variable()) head_vars.insert(t.name);
    }
    for (const auto& v : body_variables(r)) {
      if (!head_vars.count(v)) return false;
    }
  }
  return true;
}

void ABox::insert(Atom a) {
  if (!a.is_ground()) throw Error("ABox fact must be ground: " + a.predicate);
  facts.insert(std::move(a));
}

std::set<std::string> ABox::constants() const {
  std::set<std::string> out;
  for (const auto& f : facts) {
    for (const auto& t : f.args) out.insert(t.name);
  }
  return out;
}

const char* to_string(Tri t) {
  switch (t) {
    case Tri::True: return "true";
    case Tri::False: return "false";
    case Tri::Unknown: return "unknown";
  }
  return "unknown";
}

Atom atom(std::string predicate, std::initializer_list<std::string> args) {
  Atom a{std::move(predicate), {}};
  for (const auto& s : args) {
    if (!s.empty() && s[0] == '?') {
      a.args.push_back(Term::var(s.substr(1)));
    } else {
      a.args.push_back(Term::constant(s));
    }
  }
  return a;
}

Rule cq(std::vector<Atom> body, Atom head) {
  Rule r;
  r.body = std::move(body);
  r.head.push_back(Disjunct{{}, {std::move(head)}});
  return r;
}

bool is_fresh_name(const std::string& constant) {
  return constant.rfind(kFreshPrefix, 0) == 0;
}

std::string fresh_name(std::size_t index) {
  return std::string(kFreshPrefix) + std::to_string(index);
}

std::string variable_name(std::size_t index) {
  static const char* const kNames[] = {"x", "y", "z", "w", "v", "u"};
  return index < 6 ? kNames[index] : "x" + std::to_string(index);
}

namespace {

void collect_vars(const std::vector<Atom>& atoms, std::vector<std::string>& out,
                  std::set<std::string>& seen) {
  for (const auto& a : atoms) {
    for (const auto& t : a.args) {
      if (t.is_variable() && seen.insert(t.name).second) out.push_back(t.name);
    }
  }
}

}  // namespace

std::vector<std::string> variables(const Rule& r) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  collect_vars(r.body, out, seen);
  for (const auto& d : r.head) {
    for (const auto& t : d.existentials) {
      if (seen.insert(t.name).second) out.push_back(t.name);
    }
    collect_vars(d.atoms, out, seen);
  }
  return out;
}

std::vector<std::string> body_variables(const Rule& r) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  collect_vars(r.body, out, seen);
  return out;
}

std::set<std::string> constants(const Atom& a) {
  std::set<std::string> out;
  for (const auto& t : a.args) {
    if (t.is_constant()) out.insert(t.name);
  }
  return out;
}

std::set<std::string> constants(const Rule& r) {
  std::set<std::string> out;
  auto add = [&](const std::vector<Atom>& atoms) {
    for (const auto& a : atoms) {
      auto c = constants(a);
      out.insert(c.begin(), c.end());
    }
  };
  add(r.body);
  for (const auto& d : r.head) add(d.atoms);
  return out;
}

std::set<std::string> constants(const std::vector<Rule>& rules) {
  std::set<std::string> out;
  for (const auto& r : rules) {
    auto c = constants(r);
    out.insert(c.begin(), c.end());
  }
  return out;
}

std::set<std::string> constants(const UCQ& q) { return constants(q.rules); }

void add_signature(Signature& sig, const Atom& a) {
  sig.insert(PredicateSig{a.predicate, a.arity()});
}

void add_signature(Signature& sig, const Rule& r) {
  for (const auto& a : r.body) add_signature(sig, a);
  for (const auto& d : r.head) {
    for (const auto& a : d.atoms) add_signature(sig, a);
  }
}

Signature signature(const std::vector<Rule>& rules) {
  Signature sig;
  for (const auto& r : rules) add_signature(sig, r);
  return sig;
}

void check_rule(const Rule& r) {
  std::set<std::string> body_vars;
  for (const auto& v : body_variables(r)) body_vars.insert(v);
  for (const auto& d : r.head) {
    if (d.atoms.empty()) throw Error("head disjunct without atoms");
    std::set<std::string> ex;
    for (const auto& t : d.existentials) {
      if (!t.is_variable()) throw Error("existential quantifier over a constant");
      if (body_vars.count(t.name)) {
        throw Error("existential variable ?" + t.name + " also occurs in the body");
      }
      ex.insert(t.name);
    }
    for (const auto& a : d.atoms) {
      for (const auto& t : a.args) {
        if (t.is_variable() && !ex.count(t.name) && !body_vars.count(t.name)) {
          throw Error("unsafe rule: head variable ?" + t.name + " does not occur in the body");
        }
      }
    }
  }
}

void check_arities(const Signature& sig) {
  const PredicateSig* prev = nullptr;
  for (const auto& p : sig) {
    if (prev && prev->name == p.name) {
      throw Error("arity clash: predicate " + p.name + " used with arities " +
                  std::to_string(prev->arity) + " and " + std::to_string(p.arity));
    }
    prev = &p;
  }
}

Term substitute(const Substitution& s, const Term& t) {
  if (!t.is_variable()) return t;
  auto it = s.find(t.name);
  return it == s.end() ? t : it->second;
}

Atom substitute(const Substitution& s, const Atom& a) {
  Atom out{a.predicate, {}};
  out.args.reserve(a.args.size());
  for (const auto& t : a.args) out.args.push_back(substitute(s, t));
  return out;
}

std::vector<Atom> substitute(const Substitution& s, const std::vector<Atom>& atoms) {
  std::vector<Atom> out;
  out.reserve(atoms.size());
  for (const auto& a : atoms) out.push_back(substitute(s, a));
  return out;
}

Rule substitute(const Substitution& s, const Rule& r) {
  Rule out;
  out.body = substitute(s, r.body);
  for (const auto& d : r.head) {
    Disjunct nd;
    for (const auto& t : d.existentials) {
      Term m = substitute(s, t);
      if (m.is_variable()) nd.existentials.push_back(m);
    }
    nd.atoms = substitute(s, d.atoms);
    out.head.push_back(std::move(nd));
  }
  return out;
}

UCQ substitute(const Substitution& s, const UCQ& q) {
  UCQ out{q.predicate, q.arity, {}};
  for (const auto& r : q.rules) out.rules.push_back(substitute(s, r));
  return out;
}

std::string rename(const Renaming& mu, const std::string& constant) {
  auto it = mu.find(constant);
  return it == mu.end() ? constant : it->second;
}

Atom rename(const Renaming& mu, const Atom& a) {
  Atom out{a.predicate, {}};
  for (const auto& t : a.args) {
    out.args.push_back(t.is_constant() ? Term::constant(rename(mu, t.name)) : t);
  }
  return out;
}

ABox rename(const Renaming& mu, const ABox& abox) {
  ABox out;
  for (const auto& f : abox.facts) out.facts.insert(rename(mu, f));
  return out;
}

Tuple rename(const Renaming& mu, const Tuple& t) {
  Tuple out;
  out.reserve(t.size());
  for (const auto& c : t) out.push_back(rename(mu, c));
  return out;
}

Rule rename(const Renaming& mu, const Rule& r) {
  Rule out;
  for (const auto& a : r.body) out.body.push_back(rename(mu, a));
  for (const auto& d : r.head) {
    Disjunct nd{d.existentials, {}};
    for (const auto& a : d.atoms) nd.atoms.push_back(rename(mu, a));
    out.head.push_back(std::move(nd));
  }
  return out;
}

bool is_injective(const Renaming& mu) {
  std::set<std::string> images;
  for (const auto& [k, v] : mu) {
    if (!images.insert(v).second) return false;
  }
  return true;
}

std::optional<Renaming> abox_isomorphic(const ABox& a1, const ABox& a2,
                                        const std::set<std::string>& fixed) {
  if (a1.size() != a2.size()) return std::nullopt;
  auto c1 = a1.constants();
  auto c2 = a2.constants();
  if (c1.size() != c2.size()) return std::nullopt;

  // Non-fixed constants of a1 become pattern variables.
  std::vector<Atom> pattern;
  for (const auto& f : a1.facts) {
    Atom p{f.predicate, {}};
    for (const auto& t : f.args) {
      p.args.push_back(fixed.count(t.name) ? t : Term::var(t.name));
    }
    pattern.push_back(std::move(p));
  }
  std::set<Term> excluded;
  for (const auto& c : fixed) excluded.insert(Term::constant(c));
  MatchOptions opts;
  opts.injective = true;
  opts.excluded = &excluded;

  FactIndex target(a2);
  std::optional<Renaming> found;
  for_each_match(pattern, target, {}, [&](const Substitution& s) {
    Renaming mu;
    for (const auto& [v, t] : s) mu[v] = t.name;
    found = std::move(mu);
    return false;
  }, opts);
  return found;
}

std::vector<Atom> dedup_atoms(const std::vector<Atom>& atoms) {
  std::vector<Atom> out;
  std::set<Atom> seen;
  for (const auto& a : atoms) {
    if (seen.insert(a).second) out.push_back(a);
  }
  return out;
}

}  // namespace certkit
