#include "certkit/match.hpp"

#include <algorithm>

namespace certkit {

FactIndex::FactIndex(const ABox& abox) {
  for (const auto& a : abox.facts) insert(a);
}

FactIndex::FactIndex(const std::vector<Atom>& atoms) {
  for (const auto& a : atoms) insert(a);
}

bool FactIndex::insert(const Atom& a) {
  if (!members_.insert(a).second) return false;
  by_predicate_[a.predicate].push_back(facts_.size());
  facts_.push_back(a);
  return true;
}

const std::vector<std::size_t>& FactIndex::with_predicate(const std::string& p) const {
  static const std::vector<std::size_t> kNone;
  auto it = by_predicate_.find(p);
  return it == by_predicate_.end() ? kNone : it->second;
}

namespace {

class Matcher {
 public:
  Matcher(const std::vector<Atom>& pattern, const FactIndex& facts,
          const MatchCallback& cb, const MatchOptions& opts)
      : pattern_(pattern), facts_(facts), cb_(cb), opts_(opts),
        done_(pattern.size(), false) {}

  bool run(Substitution& sub) {
    if (opts_.injective) {
      for (const auto& [v, t] : sub) used_.insert(t);
    }
    return step(sub, 0);
  }

 private:
  std::size_t bound_count(const Atom& a, const Substitution& sub) const {
    std::size_t n = 0;
    for (const auto& t : a.args) {
      if (!t.is_variable() || sub.count(t.name)) ++n;
    }
    return n;
  }

  // Picks the pending atom with the fewest candidate facts, preferring more
  // bound arguments, then the lowest index.
  std::size_t pick(const Substitution& sub) const {
    std::size_t best = pattern_.size();
    std::size_t best_cands = 0, best_bound = 0;
    for (std::size_t i = 0; i < pattern_.size(); ++i) {
      if (done_[i]) continue;
      std::size_t cands = facts_.with_predicate(pattern_[i].predicate).size();
      std::size_t bound = bound_count(pattern_[i], sub);
      if (best == pattern_.size() || cands < best_cands ||
          (cands == best_cands && bound > best_bound)) {
        best = i;
        best_cands = cands;
        best_bound = bound;
      }
    }
    return best;
  }

  bool step(Substitution& sub, std::size_t depth) {
    if (depth == pattern_.size()) return cb_(sub);
    std::size_t i = pick(sub);
    const Atom& p = pattern_[i];
    done_[i] = true;
    for (std::size_t idx : facts_.with_predicate(p.predicate)) {
      const Atom& f = facts_.all()[idx];
      if (f.args.size() != p.args.size()) continue;
      std::vector<std::string> added;
      bool ok = true;
      for (std::size_t k = 0; k < p.args.size() && ok; ++k) {
        const Term& pt = p.args[k];
        const Term& ft = f.args[k];
        if (!pt.is_variable()) {
          ok = pt == ft;
          continue;
        }
        auto it = sub.find(pt.name);
        if (it != sub.end()) {
          ok = it->second == ft;
          continue;
        }
        if (opts_.excluded && opts_.excluded->count(ft)) {
          ok = false;
          continue;
        }
        if (opts_.injective && used_.count(ft)) {
          ok = false;
          continue;
        }
        sub.emplace(pt.name, ft);
        if (opts_.injective) used_.insert(ft);
        added.push_back(pt.name);
      }
      bool keep_going = true;
      if (ok) keep_going = step(sub, depth + 1);
      for (const auto& v : added) {
        if (opts_.injective) used_.erase(sub.at(v));
        sub.erase(v);
      }
      if (!keep_going) {
        done_[i] = false;
        return false;
      }
    }
    done_[i] = false;
    return true;
  }

  const std::vector<Atom>& pattern_;
  const FactIndex& facts_;
  const MatchCallback& cb_;
  const MatchOptions& opts_;
  std::vector<bool> done_;
  std::set<Term> used_;
};

}  // namespace

bool for_each_match(const std::vector<Atom>& pattern, const FactIndex& facts,
                    const Substitution& initial, const MatchCallback& cb,
                    const MatchOptions& opts) {
  Substitution sub = initial;
  Matcher m(pattern, facts, cb, opts);
  return m.run(sub);
}

bool has_match(const std::vector<Atom>& pattern, const FactIndex& facts,
               const Substitution& initial, const MatchOptions& opts) {
  bool found = false;
  for_each_match(pattern, facts, initial, [&](const Substitution&) {
    found = true;
    return false;
  }, opts);
  return found;
}

AnswerSet evaluate(const UCQ& q, const FactIndex& facts,
                   const std::set<std::string>& unnamed, const MatchOptions& opts) {
  AnswerSet out;
  for (const auto& r : q.rules) {
    const Atom& head = r.head.at(0).atoms.at(0);
    for_each_match(r.body, facts, {}, [&](const Substitution& s) {
      Tuple t;
      t.reserve(head.args.size());
      for (const auto& arg : head.args) {
        Term v = substitute(s, arg);
        if (v.is_variable() || unnamed.count(v.name)) return true;
        t.push_back(v.name);
      }
      out.insert(std::move(t));
      return true;
    }, opts);
  }
  return out;
}

}  // namespace certkit
