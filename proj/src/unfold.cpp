#include "certkit/unfold.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "certkit/minimize.hpp"
#include "certkit/unify.hpp"

namespace certkit {

namespace {

void collect_vars(const std::vector<Atom>& atoms, std::set<std::string>& out) {
  for (const auto& a : atoms) {
    for (const auto& t : a.args) {
      if (t.is_variable()) out.insert(t.name);
    }
  }
}

Rule resolvent(const Rule& q, const std::vector<bool>& in_s, const Rule& d,
               const Substitution& theta) {
  Rule out;
  for (std::size_t i = 0; i < q.body.size(); ++i) {
    if (!in_s[i]) out.body.push_back(substitute(theta, q.body[i]));
  }
  for (const auto& a : d.body) out.body.push_back(substitute(theta, a));
  out.body = dedup_atoms(out.body);
  if (!q.is_falsum()) {
    out.head.push_back(Disjunct{{}, {substitute(theta, q.head[0].atoms[0])}});
  }
  return out;
}

// The existential variables of d must land on distinct variables of q that
// do not survive into the resolvent.
bool existentials_ok(const Rule& q, const std::vector<bool>& in_s, const Rule& d,
                     const Substitution& theta) {
  std::set<std::string> kept;
  Rule rest = resolvent(q, in_s, d, theta);
  collect_vars(rest.body, kept);
  if (!rest.is_falsum()) collect_vars(rest.head[0].atoms, kept);
  std::set<std::string> images;
  for (const auto& y : d.head[0].existentials) {
    Term t = substitute(theta, y);
    if (!t.is_variable() || kept.count(t.name) || !images.insert(t.name).second) return false;
  }
  return true;
}

}  // namespace

std::vector<Rule> unfold_step(const Rule& q, const Rule& d) {
  if (!q.is_falsum() && !q.is_cq_shaped()) {
    throw Error("unfolding needs a CQ-shaped or falsum query rule");
  }
  if (d.head.size() != 1) throw Error("unfolding needs a data rule with exactly one disjunct");
  const Rule dd = standardize_apart(d, "'");
  const Disjunct& head = dd.head[0];
  std::vector<Rule> raw;
  if (head.existentials.empty()) {
    for (std::size_t i = 0; i < q.body.size(); ++i) {
      for (const auto& h : head.atoms) {
        auto theta = unify({{q.body[i], h}});
        if (!theta) continue;
        std::vector<bool> in_s(q.body.size(), false);
        in_s[i] = true;
        raw.push_back(resolvent(q, in_s, dd, *theta));
      }
    }
  } else {
    // choice[i] = index of the head atom body atom i resolves with, or -1.
    std::vector<int> choice(q.body.size(), -1);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == q.body.size()) {
        std::vector<std::pair<Atom, Atom>> pairs;
        std::vector<bool> in_s(q.body.size(), false);
        for (std::size_t k = 0; k < q.body.size(); ++k) {
          if (choice[k] < 0) continue;
          in_s[k] = true;
          pairs.emplace_back(q.body[k], head.atoms[static_cast<std::size_t>(choice[k])]);
        }
        if (pairs.empty()) return;
        auto theta = unify(pairs);
        if (theta && existentials_ok(q, in_s, dd, *theta)) {
          raw.push_back(resolvent(q, in_s, dd, *theta));
        }
        return;
      }
      rec(i + 1);
      for (std::size_t h = 0; h < head.atoms.size(); ++h) {
        const Atom& ha = head.atoms[h];
        if (ha.predicate != q.body[i].predicate || ha.args.size() != q.body[i].args.size()) {
          continue;
        }
        choice[i] = static_cast<int>(h);
        rec(i + 1);
        choice[i] = -1;
      }
    };
    rec(0);
  }
  std::vector<Rule> out;
  for (const auto& r : raw) {
    Rule c = canonicalize(condense(r));
    bool dup = std::any_of(out.begin(), out.end(),
                           [&](const Rule& o) { return alpha_equivalent(o, c); });
    if (!dup) out.push_back(std::move(c));
  }
  return out;
}

UnfoldResult unfold_levels(const std::vector<Rule>& data, const std::vector<Rule>& queries,
                           const UnfoldOptions& opts) {
  for (const auto& d : data) {
    if (d.head.size() != 1) throw Error("unfolding needs data rules with exactly one disjunct");
  }
  UnfoldResult res;
  auto accept = [&](const Rule& r, std::size_t depth) {
    for (const auto& e : res.rules) {
      if (opts.prune ? subsumes(e, r).has_value() : alpha_equivalent(e, r)) return false;
    }
    res.rules.push_back(r);
    res.depth.push_back(depth);
    return true;
  };
  auto over = [&] {
    if (res.rules.size() <= opts.max_rules) return false;
    res.rules.resize(opts.max_rules);
    res.depth.resize(opts.max_rules);
    res.closed = false;
    return true;
  };

  std::vector<std::size_t> frontier;
  for (const auto& q : queries) {
    if (accept(canonicalize(condense(q)), 0)) frontier.push_back(res.rules.size() - 1);
    if (over()) return res;
  }
  for (std::size_t depth = 1; !frontier.empty(); ++depth) {
    if (depth > opts.max_depth) {
      res.closed = false;
      return res;
    }
    std::vector<std::size_t> next;
    for (std::size_t idx : frontier) {
      const Rule q = res.rules[idx];
      for (const auto& d : data) {
        for (const auto& r : unfold_step(q, d)) {
          if (accept(r, depth)) next.push_back(res.rules.size() - 1);
          if (over()) return res;
        }
      }
    }
    frontier = std::move(next);
  }
  res.closed = true;
  return res;
}

UnfoldResult exhaustive_unfold(const std::vector<Rule>& data, const UCQ& query,
                               std::size_t bound) {
  UnfoldOptions opts;
  opts.max_rules = bound;
  UnfoldResult res = unfold_levels(data, query.rules, opts);
  if (!res.closed) return res;
  UnfoldResult reduced;
  reduced.closed = true;
  for (const auto& r : remove_subsumed(res.rules)) {
    auto it = std::find(res.rules.begin(), res.rules.end(), r);
    reduced.depth.push_back(res.depth[static_cast<std::size_t>(it - res.rules.begin())]);
    reduced.rules.push_back(r);
  }
  return reduced;
}

namespace {

std::string describe_subset(const std::vector<std::size_t>& axioms, std::size_t mask) {
  std::string s = "{";
  bool first = true;
  for (std::size_t i = 0; i < axioms.size(); ++i) {
    if (!(mask >> i & 1)) continue;
    if (!first) s += ", ";
    s += std::to_string(axioms[i] + 1);
    first = false;
  }
  return s + "}";
}

void add_unique(std::vector<Rule>& into, const std::vector<Rule>& rules) {
  for (const auto& r : rules) {
    bool dup = std::any_of(into.begin(), into.end(),
                           [&](const Rule& o) { return alpha_equivalent(o, r); });
    if (!dup) into.push_back(r);
  }
}

}  // namespace

Rewriting subset_closed_rewriting(const std::vector<TaggedRule>& tbox, const UCQ& query,
                                  std::size_t bound) {
  std::vector<std::size_t> axioms;
  for (const auto& t : tbox) {
    if (std::find(axioms.begin(), axioms.end(), t.axiom) == axioms.end()) {
      axioms.push_back(t.axiom);
    }
  }
  if (axioms.size() > 20) throw Error("too many axioms for subset enumeration");
  Rewriting out;
  out.query.predicate = query.predicate;
  out.query.arity = query.arity;
  for (std::size_t mask = 0; mask < (std::size_t{1} << axioms.size()); ++mask) {
    std::vector<Rule> data, bottom;
    for (const auto& t : tbox) {
      auto pos = static_cast<std::size_t>(std::find(axioms.begin(), axioms.end(), t.axiom) -
                                          axioms.begin());
      if (!(mask >> pos & 1)) continue;
      if (t.rule.is_falsum()) {
        bottom.push_back(t.rule);
      } else if (t.rule.head.size() != 1) {
        throw Error("axiom subset " + describe_subset(axioms, mask) +
                    " has a disjunctive rule and cannot be unfolded");
      } else {
        data.push_back(t.rule);
      }
    }
    UnfoldResult q = exhaustive_unfold(data, query, bound);
    UnfoldResult b = exhaustive_unfold(data, UCQ{query.predicate, query.arity, bottom}, bound);
    if (!q.closed || !b.closed) {
      throw Error("unfolding does not close for axiom subset " + describe_subset(axioms, mask));
    }
    add_unique(out.query.rules, q.rules);
    add_unique(out.bottom, b.rules);
  }
  return out;
}

}  // namespace certkit
