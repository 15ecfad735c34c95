// Core value types: terms, atoms, rules, queries, ABoxes, rewritings, suites.
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace certkit {

inline constexpr const char* kEq = "eq";
inline constexpr const char* kNeq = "neq";
inline constexpr const char* kQprime = "Qprime";
inline constexpr const char* kNull = "null";
inline constexpr const char* kFreshPrefix = "_f";

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Term {
  enum class Kind : std::uint8_t { Variable, Constant };

  Kind kind = Kind::Constant;
  std::string name;

  static Term var(std::string n) { return {Kind::Variable, std::move(n)}; }
  static Term constant(std::string n) { return {Kind::Constant, std::move(n)}; }

  bool is_variable() const { return kind == Kind::Variable; }
  bool is_constant() const { return kind == Kind::Constant; }

  auto operator<=>(const Term&) const = default;
  bool operator==(const Term&) const = default;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  std::size_t arity() const { return args.size(); }
  bool is_ground() const;

  auto operator<=>(const Atom&) const = default;
  bool operator==(const Atom&) const = default;
};

struct Disjunct {
  std::vector<Term> existentials;
  std::vector<Atom> atoms;

  auto operator<=>(const Disjunct&) const = default;
  bool operator==(const Disjunct&) const = default;
};

// An empty head is falsum.
struct Rule {
  std::vector<Atom> body;
  std::vector<Disjunct> head;

  bool is_falsum() const { return head.empty(); }
  // One disjunct, no existential variables.
  bool is_datalog() const;
  // Datalog with a single head atom.
  bool is_plain_datalog() const;
  // Single head atom and no quantifiers; the shape of UCQ members.
  bool is_cq_shaped() const { return is_plain_datalog(); }

  auto operator<=>(const Rule&) const = default;
  bool operator==(const Rule&) const = default;
};

struct PredicateSig {
  std::string name;
  std::size_t arity = 0;

  auto operator<=>(const PredicateSig&) const = default;
  bool operator==(const PredicateSig&) const = default;
};
using Signature = std::set<PredicateSig>;

struct UCQ {
  std::string predicate;
  std::size_t arity = 0;
  std::vector<Rule> rules;

  bool is_ground() const;
  bool operator==(const UCQ&) const = default;
};

struct ABox {
  std::set<Atom> facts;

  ABox() = default;
  ABox(std::initializer_list<Atom> init) : facts(init) {}
  explicit ABox(std::set<Atom> f) : facts(std::move(f)) {}

  std::size_t size() const { return facts.size(); }
  bool empty() const { return facts.empty(); }
  bool contains(const Atom& a) const { return facts.count(a) != 0; }
  void insert(Atom a);
  std::set<std::string> constants() const;

  auto operator<=>(const ABox&) const = default;
  bool operator==(const ABox&) const = default;
};

struct Rewriting {
  std::vector<Rule> data;
  std::vector<Rule> bottom;
  UCQ query;

  bool is_ucq_form() const { return data.empty(); }
  bool is_ground_form() const { return query.rules.empty(); }
};

struct QueryTest {
  ABox abox;
  UCQ query;
};

struct TestSuite {
  std::vector<ABox> unsat;
  std::vector<QueryTest> tests;
  std::optional<UCQ> simple_for;

  std::size_t size() const { return unsat.size() + tests.size(); }
};

using Tuple = std::vector<std::string>;
using AnswerSet = std::set<Tuple>;
using Substitution = std::map<std::string, Term>;  // variable name -> term
using Renaming = std::map<std::string, std::string>;  // constant -> constant

enum class Tri : std::uint8_t { False, True, Unknown };
const char* to_string(Tri t);

// Construction shorthands used throughout the tests and fixtures.
Atom atom(std::string predicate, std::initializer_list<std::string> args);
Rule cq(std::vector<Atom> body, Atom head);

bool is_fresh_name(const std::string& constant);
std::string fresh_name(std::size_t index);
// Readable variable names: x, y, z, w, v, u, then x6, x7, ...
std::string variable_name(std::size_t index);

// Variables in first-occurrence order (body, then head including existentials).
std::vector<std::string> variables(const Rule& r);
std::vector<std::string> body_variables(const Rule& r);
std::set<std::string> constants(const Atom& a);
std::set<std::string> constants(const Rule& r);
std::set<std::string> constants(const std::vector<Rule>& rules);
std::set<std::string> constants(const UCQ& q);

Signature signature(const std::vector<Rule>& rules);
void add_signature(Signature& sig, const Atom& a);
void add_signature(Signature& sig, const Rule& r);

// Throws Error when the rule is unsafe or malformed.
void check_rule(const Rule& r);
// Throws Error when some predicate is used with two arities.
void check_arities(const Signature& sig);

Term substitute(const Substitution& s, const Term& t);
Atom substitute(const Substitution& s, const Atom& a);
std::vector<Atom> substitute(const Substitution& s, const std::vector<Atom>& atoms);
Rule substitute(const Substitution& s, const Rule& r);
UCQ substitute(const Substitution& s, const UCQ& q);

std::string rename(const Renaming& mu, const std::string& constant);
Atom rename(const Renaming& mu, const Atom& a);
ABox rename(const Renaming& mu, const ABox& abox);
Tuple rename(const Renaming& mu, const Tuple& t);
Rule rename(const Renaming& mu, const Rule& r);
bool is_injective(const Renaming& mu);

// Injective renaming mapping a1 onto a2 and fixing `fixed`, if one exists.
std::optional<Renaming> abox_isomorphic(const ABox& a1, const ABox& a2,
                                        const std::set<std::string>& fixed);

// Remove duplicate atoms, keeping first occurrences.
std::vector<Atom> dedup_atoms(const std::vector<Atom>& atoms);

}  // namespace certkit
