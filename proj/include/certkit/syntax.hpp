// Text formats for rules, ABoxes, queries, rewritings and suites; DL front end.
#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "certkit/model.hpp"

namespace certkit {

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t col, const std::string& msg);
  std::size_t line() const { return line_; }
  std::size_t col() const { return col_; }

 private:
  std::size_t line_;
  std::size_t col_;
};

struct ParseOptions {
  // Accept constants with the reserved fresh prefix (files we wrote ourselves).
  bool allow_reserved = false;
};

std::vector<Rule> parse_rules(const std::string& text, const ParseOptions& opts = {});
ABox parse_abox(const std::string& text, const ParseOptions& opts = {});
UCQ parse_query(const std::string& text, const ParseOptions& opts = {});
// Sections #data, #bottom and #queryrules; an optional `#query Name/arity.`
// line names the query predicate. Rules before the first section marker are
// sorted by shape: falsum heads to bottom, query-predicate heads to the
// query part, the rest to data.
Rewriting parse_rewriting(const std::string& text, const ParseOptions& opts = {});

std::string serialize(const Term& t);
std::string serialize(const Atom& a);
std::string serialize(const Rule& r);
std::string serialize_rules(const std::vector<Rule>& rules);
std::string serialize(const ABox& abox);
std::string serialize(const UCQ& q);
std::string serialize(const Rewriting& r);
std::string serialize(const Tuple& t);
// Single line, facts separated by ", ", in braces.
std::string inline_abox(const ABox& abox);

// DL axioms.
struct Role {
  std::string name;
  bool inverse = false;
};

struct Concept {
  enum class Kind { Top, Bottom, Atomic, And, Or, Exists, Forall, Self, Nominal };
  Kind kind = Kind::Top;
  std::string name;  // atomic concept or nominal constant
  Role role;
  std::vector<Concept> parts;
};

struct DLAxiom {
  enum class Kind { ConceptInclusion, RoleInclusion, RoleComposition, Transitivity };
  Kind kind = Kind::ConceptInclusion;
  Concept lhs, rhs;
  std::vector<Role> roles;  // inclusion: {sub, super}; composition: {r, s, t}
  std::size_t line = 0;
};

struct TaggedRule {
  Rule rule;
  std::size_t axiom = 0;
};

std::vector<DLAxiom> parse_dl(const std::string& text);
std::vector<TaggedRule> translate_dl(const std::vector<DLAxiom>& axioms);

std::vector<Rule> equality_axioms(const Signature& sig);

std::vector<Rule> untag(const std::vector<TaggedRule>& rules);
// Each rule of a plain rule file is its own axiom.
std::vector<TaggedRule> tag_each(const std::vector<Rule>& rules);

// File helpers. Extension decides the format of a TBox (.dl or .rules).
std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, const std::string& text);
std::vector<TaggedRule> load_tbox(const std::filesystem::path& p);

struct ProblemBundle {
  std::vector<TaggedRule> tbox;
  UCQ query;
  std::optional<Rewriting> rewriting;
};

// Suite directories: manifest.txt plus .abox and .q files.
void write_suite(const std::filesystem::path& dir, const TestSuite& suite);
struct SuiteEntry {
  std::string id;
  bool unsat = false;
  std::size_t index = 0;  // into unsat or tests
};
TestSuite read_suite(const std::filesystem::path& dir, std::vector<SuiteEntry>* order = nullptr);
// Test ids in manifest order for suites built in memory.
std::vector<SuiteEntry> suite_entries(const TestSuite& suite);

}  // namespace certkit
