// Unification and variable normalization for rule-level rewriting steps.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "certkit/model.hpp"

namespace certkit {

// Most general unifier of the atom pairs, extending `seed`. When a variable
// meets a variable, the one from the second atom of the pair is bound.
std::optional<Substitution> unify(const std::vector<std::pair<Atom, Atom>>& pairs,
                                  const Substitution& seed = {});

// Renames every variable of r by appending `suffix`.
Rule standardize_apart(const Rule& r, const std::string& suffix);

// Deduplicates body atoms and renames variables to x, y, z, ... in order of
// first occurrence (body, then head).
Rule canonicalize(const Rule& r);

// Equal up to a bijective renaming of variables, treating bodies as sets.
bool alpha_equivalent(const Rule& a, const Rule& b);

}  // namespace certkit
