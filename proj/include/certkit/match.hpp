// Homomorphism search of atom patterns into indexed fact sets.
#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "certkit/model.hpp"

namespace certkit {

// Insertion-ordered fact store with a per-predicate index. Terms in stored
// atoms are opaque: variables are matched like constants.
class FactIndex {
 public:
  FactIndex() = default;
  explicit FactIndex(const ABox& abox);
  explicit FactIndex(const std::vector<Atom>& atoms);

  bool insert(const Atom& a);
  bool contains(const Atom& a) const { return members_.count(a) != 0; }
  const std::vector<Atom>& all() const { return facts_; }
  const std::vector<std::size_t>& with_predicate(const std::string& p) const;
  std::size_t size() const { return facts_.size(); }
  const std::set<Atom>& members() const { return members_; }

 private:
  std::vector<Atom> facts_;
  std::set<Atom> members_;
  std::map<std::string, std::vector<std::size_t>> by_predicate_;
};

struct MatchOptions {
  // Distinct pattern variables must map to distinct terms.
  bool injective = false;
  // Terms no pattern variable may be mapped to.
  const std::set<Term>* excluded = nullptr;
};

// Receives each complete match; returning false stops the enumeration.
using MatchCallback = std::function<bool(const Substitution&)>;

// Enumerates extensions of `initial` mapping every pattern atom into `facts`.
// Returns false iff the callback stopped the enumeration.
bool for_each_match(const std::vector<Atom>& pattern, const FactIndex& facts,
                    const Substitution& initial, const MatchCallback& cb,
                    const MatchOptions& opts = {});

bool has_match(const std::vector<Atom>& pattern, const FactIndex& facts,
               const Substitution& initial = {}, const MatchOptions& opts = {});

// Answers of a UCQ evaluated directly over the facts. Tuples mentioning a
// term in `unnamed` are dropped.
AnswerSet evaluate(const UCQ& q, const FactIndex& facts,
                   const std::set<std::string>& unnamed = {},
                   const MatchOptions& opts = {});

}  // namespace certkit
