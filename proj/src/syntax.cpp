#include "certkit/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "lexer.hpp"

namespace certkit {

using detail::Token;

SyntaxError::SyntaxError(std::size_t line, std::size_t col, const std::string& msg)
    : Error("line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + msg),
      line_(line), col_(col) {}

namespace {

bool is_bare_constant(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::islower(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

bool is_predicate_name(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

class RuleParser {
 public:
  RuleParser(const std::string& text, const ParseOptions& opts)
      : toks_(detail::tokenize(text)), opts_(opts) {}

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  bool at_sym(const char* s, std::size_t k = 0) const {
    return peek(k).kind == Token::Kind::Sym && peek(k).text == s;
  }
  bool at_ident(const char* s) const {
    return peek().kind == Token::Kind::Ident && peek().text == s;
  }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw SyntaxError(t.line, t.col, msg);
  }

  void expect(const char* s) {
    if (!at_sym(s)) {
      fail(peek(), std::string("expected '") + s + "'" + found());
    }
    next();
  }

  std::string found() const {
    const Token& t = peek();
    if (t.kind == Token::Kind::End) return ", found end of input";
    return ", found '" + t.text + "'";
  }

  Term parse_term() {
    Token t = next();
    switch (t.kind) {
      case Token::Kind::Var:
        return Term::var(t.text);
      case Token::Kind::Quoted:
        check_constant(t, t.text);
        return Term::constant(t.text);
      case Token::Kind::Ident:
        if (!is_bare_constant(t.text)) {
          fail(t, "'" + t.text + "' is not a constant (bare constants start with a lowercase letter or '_')");
        }
        check_constant(t, t.text);
        return Term::constant(t.text);
      default:
        fail(t, "expected a term, found '" + t.text + "'");
    }
  }

  void check_constant(const Token& t, const std::string& name) const {
    if (!opts_.allow_reserved && is_fresh_name(name)) {
      fail(t, "constant '" + name + "' uses the reserved prefix '" + kFreshPrefix + "'");
    }
  }

  Atom parse_atom() {
    const Token& t = peek();
    bool is_eq_form = t.kind == Token::Kind::Var || t.kind == Token::Kind::Quoted ||
                      (t.kind == Token::Kind::Ident && (at_sym("=", 1) || at_sym("!=", 1)));
    if (is_eq_form) {
      Term lhs = parse_term();
      std::string pred;
      if (at_sym("=")) {
        pred = kEq;
      } else if (at_sym("!=")) {
        pred = kNeq;
      } else {
        fail(peek(), "expected '=' or '!='" + found());
      }
      next();
      Term rhs = parse_term();
      return Atom{pred, {lhs, rhs}};
    }
    if (t.kind != Token::Kind::Ident) fail(t, "expected an atom" + found());
    Token name = next();
    if (!is_predicate_name(name.text) || name.text == "false" || name.text == "exists") {
      fail(name, "'" + name.text + "' is not a valid predicate name");
    }
    Atom a{name.text, {}};
    if (at_sym("(")) {
      next();
      if (!at_sym(")")) {
        a.args.push_back(parse_term());
        while (at_sym(",")) {
          next();
          a.args.push_back(parse_term());
        }
      }
      expect(")");
    }
    return a;
  }

  std::vector<Atom> parse_atom_list() {
    std::vector<Atom> out{parse_atom()};
    while (at_sym(",")) {
      next();
      out.push_back(parse_atom());
    }
    return out;
  }

  Disjunct parse_disjunct() {
    Disjunct d;
    if (at_ident("exists")) {
      next();
      do {
        if (at_sym(",")) next();
        Token v = next();
        if (v.kind != Token::Kind::Var) fail(v, "expected an existential variable");
        d.existentials.push_back(Term::var(v.text));
      } while (at_sym(",") || peek().kind == Token::Kind::Var);
      expect(":");
    }
    d.atoms = parse_atom_list();
    return d;
  }

  Rule parse_rule() {
    Token start = peek();
    Rule r;
    if (!at_sym("->")) r.body = parse_atom_list();
    expect("->");
    if (at_ident("false")) {
      next();
    } else {
      r.head.push_back(parse_disjunct());
      while (at_sym("|")) {
        next();
        r.head.push_back(parse_disjunct());
      }
    }
    expect(".");
    try {
      check_rule(r);
    } catch (const SyntaxError&) {
      throw;
    } catch (const Error& e) {
      fail(start, e.what());
    }
    return r;
  }

  Atom parse_fact() {
    Token start = peek();
    Atom a = parse_atom();
    if (!a.is_ground()) fail(start, "ABox facts must be ground");
    expect(".");
    return a;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  ParseOptions opts_;
};

void check_file_arities(const Signature& sig, const Token& where) {
  try {
    check_arities(sig);
  } catch (const Error& e) {
    throw SyntaxError(where.line, where.col, e.what());
  }
}

PredicateSig parse_query_directive(const Token& t) {
  // "query Name/arity."
  std::string rest = t.text.substr(std::string("query").size());
  auto tokens = detail::tokenize(rest);
  if (tokens.size() < 4 || tokens[0].kind != Token::Kind::Ident ||
      tokens[1].text != "/" || tokens[2].kind != Token::Kind::Ident ||
      !std::all_of(tokens[2].text.begin(), tokens[2].text.end(),
                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    throw SyntaxError(t.line, t.col, "malformed query declaration, expected '#query Name/arity.'");
  }
  if (!is_predicate_name(tokens[0].text)) {
    throw SyntaxError(t.line, t.col, "invalid query predicate '" + tokens[0].text + "'");
  }
  return PredicateSig{tokens[0].text, static_cast<std::size_t>(std::stoul(tokens[2].text))};
}

void check_query_rule(const Rule& r, const PredicateSig& q, std::size_t line) {
  auto bad = [&](const std::string& msg) { throw SyntaxError(line, 1, msg); };
  if (!r.is_cq_shaped()) bad("query rules need a single head atom without quantifiers");
  const Atom& h = r.head[0].atoms[0];
  if (h.predicate != q.name || h.arity() != q.arity) {
    bad("query rule head must be " + q.name + "/" + std::to_string(q.arity));
  }
  for (const auto& a : r.body) {
    if (a.predicate == q.name) bad("query predicate " + q.name + " occurs in a rule body");
  }
}

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

}  // namespace

std::vector<Rule> parse_rules(const std::string& text, const ParseOptions& opts) {
  RuleParser p(text, opts);
  std::vector<Rule> out;
  Signature sig;
  while (!p.at_end()) {
    if (p.peek().kind == Token::Kind::Directive) {
      p.fail(p.peek(), "unexpected directive '#" + p.peek().text + "' in a rule file");
    }
    Token start = p.peek();
    out.push_back(p.parse_rule());
    add_signature(sig, out.back());
    check_file_arities(sig, start);
  }
  return out;
}

ABox parse_abox(const std::string& text, const ParseOptions& opts) {
  RuleParser p(text, opts);
  ABox out;
  Signature sig;
  while (!p.at_end()) {
    Token start = p.peek();
    Atom a = p.parse_fact();
    add_signature(sig, a);
    check_file_arities(sig, start);
    out.facts.insert(std::move(a));
  }
  return out;
}

UCQ parse_query(const std::string& text, const ParseOptions& opts) {
  RuleParser p(text, opts);
  const Token& first = p.peek();
  if (first.kind != Token::Kind::Directive || first.text.rfind("query", 0) != 0 ||
      first.text.rfind("queryrules", 0) == 0) {
    p.fail(first, "a query file must start with '#query Name/arity.'");
  }
  PredicateSig q = parse_query_directive(p.next());
  UCQ out{q.name, q.arity, {}};
  Signature sig;
  while (!p.at_end()) {
    Token start = p.peek();
    Rule r = p.parse_rule();
    check_query_rule(r, q, start.line);
    add_signature(sig, r);
    check_file_arities(sig, start);
    out.rules.push_back(std::move(r));
  }
  return out;
}

Rewriting parse_rewriting(const std::string& text, const ParseOptions& opts) {
  RuleParser p(text, opts);
  enum class Section { None, Data, Bottom, Query };
  Section section = Section::None;
  std::optional<PredicateSig> qsig;
  std::vector<std::pair<Rule, std::size_t>> unsorted;
  Rewriting out;
  Signature sig;
  while (!p.at_end()) {
    if (p.peek().kind == Token::Kind::Directive) {
      Token d = p.next();
      if (d.text == "data") {
        section = Section::Data;
      } else if (d.text == "bottom") {
        section = Section::Bottom;
      } else if (d.text == "queryrules") {
        section = Section::Query;
      } else if (d.text.rfind("query", 0) == 0) {
        qsig = parse_query_directive(d);
      } else {
        p.fail(d, "unknown section '#" + d.text + "'");
      }
      continue;
    }
    Token start = p.peek();
    Rule r = p.parse_rule();
    add_signature(sig, r);
    check_file_arities(sig, start);
    switch (section) {
      case Section::None:
        unsorted.emplace_back(std::move(r), start.line);
        break;
      case Section::Data:
        if (r.is_falsum()) throw SyntaxError(start.line, start.col, "falsum head in #data section");
        out.data.push_back(std::move(r));
        break;
      case Section::Bottom:
        if (!r.is_falsum()) throw SyntaxError(start.line, start.col, "#bottom rules must have a falsum head");
        out.bottom.push_back(std::move(r));
        break;
      case Section::Query:
        if (!r.is_cq_shaped()) {
          throw SyntaxError(start.line, start.col, "#queryrules rules need a single head atom without quantifiers");
        }
        out.query.rules.push_back(std::move(r));
        break;
    }
  }
  for (auto& [r, line] : unsorted) {
    if (r.is_falsum()) {
      out.bottom.push_back(std::move(r));
    } else if (qsig && r.is_cq_shaped() && r.head[0].atoms[0].predicate == qsig->name) {
      out.query.rules.push_back(std::move(r));
    } else {
      out.data.push_back(std::move(r));
    }
  }
  if (!qsig && !out.query.rules.empty()) {
    const Atom& h = out.query.rules.front().head[0].atoms[0];
    qsig = PredicateSig{h.predicate, h.arity()};
  }
  if (qsig) {
    out.query.predicate = qsig->name;
    out.query.arity = qsig->arity;
    for (const auto& r : out.query.rules) check_query_rule(r, *qsig, 1);
    for (const auto& r : out.data) {
      for (const auto& d : r.head) {
        for (const auto& a : d.atoms) {
          if (a.predicate == qsig->name) throw Error("data rules must not derive the query predicate");
        }
      }
    }
  }
  return out;
}

std::string serialize(const Term& t) {
  if (t.is_variable()) return "?" + t.name;
  return is_bare_constant(t.name) ? t.name : quote(t.name);
}

std::string serialize(const Atom& a) {
  std::string out = a.predicate;
  if (a.args.empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ',';
    out += serialize(a.args[i]);
  }
  return out + ')';
}

namespace {

std::string join_atoms(const std::vector<Atom>& atoms) {
  std::string out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) out += ", ";
    out += serialize(atoms[i]);
  }
  return out;
}

}  // namespace

std::string serialize(const Rule& r) {
  std::string out = join_atoms(r.body);
  out += out.empty() ? "-> " : " -> ";
  if (r.is_falsum()) return out + "false.";
  for (std::size_t i = 0; i < r.head.size(); ++i) {
    if (i) out += " | ";
    const Disjunct& d = r.head[i];
    if (!d.existentials.empty()) {
      out += "exists ";
      for (std::size_t k = 0; k < d.existentials.size(); ++k) {
        if (k) out += ", ";
        out += serialize(d.existentials[k]);
      }
      out += " : ";
    }
    out += join_atoms(d.atoms);
  }
  return out + ".";
}

std::string serialize_rules(const std::vector<Rule>& rules) {
  std::string out;
  for (const auto& r : rules) out += serialize(r) + "\n";
  return out;
}

std::string serialize(const ABox& abox) {
  std::string out;
  for (const auto& f : abox.facts) out += serialize(f) + ".\n";
  return out;
}

std::string serialize(const UCQ& q) {
  return "#query " + q.predicate + "/" + std::to_string(q.arity) + ".\n" + serialize_rules(q.rules);
}

std::string serialize(const Rewriting& r) {
  std::string out;
  if (!r.query.predicate.empty()) {
    out += "#query " + r.query.predicate + "/" + std::to_string(r.query.arity) + ".\n";
  }
  out += "#data\n" + serialize_rules(r.data);
  out += "#bottom\n" + serialize_rules(r.bottom);
  out += "#queryrules\n" + serialize_rules(r.query.rules);
  return out;
}

std::string serialize(const Tuple& t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ',';
    out += serialize(Term::constant(t[i]));
  }
  return out;
}

std::string inline_abox(const ABox& abox) {
  std::string out = "{";
  bool first = true;
  for (const auto& f : abox.facts) {
    if (!first) out += ", ";
    first = false;
    out += serialize(f);
  }
  return out + "}";
}

// ---------------------------------------------------------------- DL front end

namespace {

class DLParser {
 public:
  explicit DLParser(const std::string& text) : p_(text, ParseOptions{}) {}

  std::vector<DLAxiom> parse_all() {
    std::vector<DLAxiom> out;
    std::vector<bool> ambiguous;
    while (!p_.at_end()) {
      if (p_.peek().kind == Token::Kind::Directive) {
        p_.fail(p_.peek(), "unexpected directive in a DL file");
      }
      bool amb = false;
      out.push_back(parse_axiom(amb));
      ambiguous.push_back(amb);
    }
    // `A [= B` over plain names is a role inclusion when either name is used
    // as a role somewhere in the file.
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (!ambiguous[i]) continue;
      DLAxiom& ax = out[i];
      if (roles_.count(ax.lhs.name) || roles_.count(ax.rhs.name)) {
        ax.kind = DLAxiom::Kind::RoleInclusion;
        ax.roles = {Role{ax.lhs.name, false}, Role{ax.rhs.name, false}};
        ax.lhs = ax.rhs = Concept{};
      }
    }
    return out;
  }

 private:
  bool ident_is(std::size_t k, const char* s) const {
    return p_.peek(k).kind == Token::Kind::Ident && p_.peek(k).text == s;
  }

  Role parse_role() {
    if (ident_is(0, "inv")) {
      p_.next();
      p_.expect("(");
      Role r = parse_role();
      p_.expect(")");
      r.inverse = !r.inverse;
      return r;
    }
    Token t = p_.next();
    if (t.kind != Token::Kind::Ident || !is_predicate_name(t.text)) {
      p_.fail(t, "expected a role name, found '" + t.text + "'");
    }
    roles_.insert(t.text);
    return Role{t.text, false};
  }

  DLAxiom parse_axiom(bool& ambiguous) {
    DLAxiom ax;
    ax.line = p_.peek().line;
    if (ident_is(0, "trans")) {
      p_.next();
      p_.expect("(");
      ax.kind = DLAxiom::Kind::Transitivity;
      ax.roles.push_back(parse_role());
      p_.expect(")");
      p_.expect(".");
      return ax;
    }
    bool explicit_role = false;
    if (ident_is(0, "role")) {
      p_.next();
      explicit_role = true;
    }
    // Role axioms: R o S [= T, inv(R) [= S, R [= inv(S), or an explicit `role` prefix.
    bool rhs_inverse = p_.peek(1).kind == Token::Kind::Sym && p_.peek(1).text == "[=" &&
                       ident_is(2, "inv");
    bool role_axiom = explicit_role || ident_is(0, "inv") || ident_is(1, "o") || rhs_inverse;
    if (role_axiom) {
      Role first = parse_role();
      if (ident_is(0, "o")) {
        p_.next();
        Role second = parse_role();
        p_.expect("[=");
        Role third = parse_role();
        p_.expect(".");
        ax.kind = DLAxiom::Kind::RoleComposition;
        ax.roles = {first, second, third};
        return ax;
      }
      p_.expect("[=");
      Role sup = parse_role();
      p_.expect(".");
      ax.kind = DLAxiom::Kind::RoleInclusion;
      ax.roles = {first, sup};
      return ax;
    }
    ax.kind = DLAxiom::Kind::ConceptInclusion;
    ax.lhs = parse_concept();
    p_.expect("[=");
    ax.rhs = parse_concept();
    p_.expect(".");
    ambiguous = ax.lhs.kind == Concept::Kind::Atomic && ax.rhs.kind == Concept::Kind::Atomic;
    return ax;
  }

  Concept parse_concept() {
    Concept c = parse_conjunction();
    if (!ident_is(0, "or")) return c;
    Concept out{Concept::Kind::Or, {}, {}, {c}};
    while (ident_is(0, "or")) {
      p_.next();
      out.parts.push_back(parse_conjunction());
    }
    return out;
  }

  Concept parse_conjunction() {
    Concept c = parse_unary();
    if (!ident_is(0, "and")) return c;
    Concept out{Concept::Kind::And, {}, {}, {c}};
    while (ident_is(0, "and")) {
      p_.next();
      out.parts.push_back(parse_unary());
    }
    return out;
  }

  Concept parse_unary() {
    const Token& t = p_.peek();
    if (p_.at_sym("(")) {
      p_.next();
      Concept c = parse_concept();
      p_.expect(")");
      return c;
    }
    if (p_.at_sym("{")) {
      p_.next();
      Term a = p_.parse_term();
      if (!a.is_constant()) p_.fail(t, "nominals contain a constant");
      p_.expect("}");
      return Concept{Concept::Kind::Nominal, a.name, {}, {}};
    }
    if (p_.at_sym(">=") || p_.at_sym("<=")) {
      p_.fail(t, "number restrictions are not supported");
    }
    if (t.kind != Token::Kind::Ident) p_.fail(t, "expected a concept" + p_.found());
    if (t.text == "top") {
      p_.next();
      return Concept{Concept::Kind::Top, {}, {}, {}};
    }
    if (t.text == "bottom") {
      p_.next();
      return Concept{Concept::Kind::Bottom, {}, {}, {}};
    }
    if (t.text == "not") p_.fail(t, "negation is not supported");
    if (t.text == "min" || t.text == "max") p_.fail(t, "number restrictions are not supported");
    if (t.text == "exists" || t.text == "forall") {
      bool ex = t.text == "exists";
      p_.next();
      Role r = parse_role();
      p_.expect(".");
      Concept filler = parse_unary();
      return Concept{ex ? Concept::Kind::Exists : Concept::Kind::Forall, {}, r, {filler}};
    }
    if (t.text == "self") {
      p_.next();
      p_.expect("(");
      Role r = parse_role();
      p_.expect(")");
      return Concept{Concept::Kind::Self, {}, r, {}};
    }
    if (!is_predicate_name(t.text) || t.text == "and" || t.text == "or") {
      p_.fail(t, "expected a concept name, found '" + t.text + "'");
    }
    Token name = p_.next();
    return Concept{Concept::Kind::Atomic, name.text, {}, {}};
  }

  RuleParser p_;
  std::set<std::string> roles_;
};

class VarGen {
 public:
  Term fresh() { return Term::var(variable_name(n_++)); }

 private:
  std::size_t n_ = 0;
};

Atom role_atom(const Role& r, const Term& a, const Term& b) {
  return r.inverse ? Atom{r.name, {b, a}} : Atom{r.name, {a, b}};
}

struct AxiomError : Error {
  using Error::Error;
};

// Left-hand side: returns false when the concept is unsatisfiable (contains
// bottom), in which case the axiom holds trivially.
bool lhs_body(const Concept& c, const Term& x, std::vector<Atom>& out, VarGen& vars) {
  switch (c.kind) {
    case Concept::Kind::Top:
      return true;
    case Concept::Kind::Bottom:
      return false;
    case Concept::Kind::Atomic:
      out.push_back(Atom{c.name, {x}});
      return true;
    case Concept::Kind::And:
      for (const auto& part : c.parts) {
        if (!lhs_body(part, x, out, vars)) return false;
      }
      return true;
    case Concept::Kind::Exists: {
      Term y = vars.fresh();
      out.push_back(role_atom(c.role, x, y));
      return lhs_body(c.parts[0], y, out, vars);
    }
    case Concept::Kind::Self:
      out.push_back(role_atom(c.role, x, x));
      return true;
    case Concept::Kind::Nominal:
      out.push_back(Atom{kEq, {x, Term::constant(c.name)}});
      return true;
    case Concept::Kind::Or:
      throw AxiomError("disjunction on the left-hand side is not supported");
    case Concept::Kind::Forall:
      throw AxiomError("universal restriction on the left-hand side is not supported");
  }
  return true;
}

// A head: universally quantified guard atoms moved to the body, plus a
// disjunction (empty = falsum). `top` marks a tautological head.
struct HeadPart {
  bool top = false;
  std::vector<Atom> guards;
  std::vector<Disjunct> disjuncts;
};

HeadPart rhs_head(const Concept& c, const Term& x, VarGen& vars, bool allow_forall) {
  HeadPart h;
  switch (c.kind) {
    case Concept::Kind::Top:
      h.top = true;
      return h;
    case Concept::Kind::Bottom:
      return h;
    case Concept::Kind::Atomic:
      h.disjuncts.push_back(Disjunct{{}, {Atom{c.name, {x}}}});
      return h;
    case Concept::Kind::Nominal:
      h.disjuncts.push_back(Disjunct{{}, {Atom{kEq, {x, Term::constant(c.name)}}}});
      return h;
    case Concept::Kind::Self:
      h.disjuncts.push_back(Disjunct{{}, {role_atom(c.role, x, x)}});
      return h;
    case Concept::Kind::Exists: {
      Term y = vars.fresh();
      HeadPart sub = rhs_head(c.parts[0], y, vars, false);
      if (sub.top) {
        h.disjuncts.push_back(Disjunct{{y}, {role_atom(c.role, x, y)}});
        return h;
      }
      for (auto& d : sub.disjuncts) {
        Disjunct nd;
        nd.existentials.push_back(y);
        nd.existentials.insert(nd.existentials.end(), d.existentials.begin(), d.existentials.end());
        nd.atoms.push_back(role_atom(c.role, x, y));
        nd.atoms.insert(nd.atoms.end(), d.atoms.begin(), d.atoms.end());
        h.disjuncts.push_back(std::move(nd));
      }
      return h;
    }
    case Concept::Kind::Or: {
      for (const auto& part : c.parts) {
        HeadPart sub = rhs_head(part, x, vars, allow_forall);
        if (sub.top) {
          h.top = true;
          return h;
        }
        h.guards.insert(h.guards.end(), sub.guards.begin(), sub.guards.end());
        h.disjuncts.insert(h.disjuncts.end(), sub.disjuncts.begin(), sub.disjuncts.end());
      }
      return h;
    }
    case Concept::Kind::And: {
      // Distribute the conjunction over the disjunctions of its parts.
      h.top = true;
      for (const auto& part : c.parts) {
        HeadPart sub = rhs_head(part, x, vars, false);
        if (sub.top) continue;
        if (h.top) {
          h = std::move(sub);
          continue;
        }
        std::vector<Disjunct> product;
        for (const auto& a : h.disjuncts) {
          for (const auto& b : sub.disjuncts) {
            Disjunct d = a;
            d.existentials.insert(d.existentials.end(), b.existentials.begin(), b.existentials.end());
            d.atoms.insert(d.atoms.end(), b.atoms.begin(), b.atoms.end());
            product.push_back(std::move(d));
          }
        }
        h.disjuncts = std::move(product);
      }
      return h;
    }
    case Concept::Kind::Forall: {
      if (!allow_forall) {
        throw AxiomError("universal restriction is only supported at the top of a right-hand side");
      }
      Term y = vars.fresh();
      HeadPart sub = rhs_head(c.parts[0], y, vars, true);
      if (sub.top) return sub;
      sub.guards.insert(sub.guards.begin(), role_atom(c.role, x, y));
      return sub;
    }
  }
  return h;
}

void flatten_and(const Concept& c, std::vector<Concept>& out) {
  if (c.kind == Concept::Kind::And) {
    for (const auto& p : c.parts) flatten_and(p, out);
  } else {
    out.push_back(c);
  }
}

void translate_axiom(const DLAxiom& ax, std::size_t index, std::vector<TaggedRule>& out) {
  auto emit = [&](Rule r) {
    r.body = dedup_atoms(r.body);
    for (auto& d : r.head) d.atoms = dedup_atoms(d.atoms);
    check_rule(r);
    out.push_back(TaggedRule{std::move(r), index});
  };
  switch (ax.kind) {
    case DLAxiom::Kind::Transitivity: {
      Term x = Term::var("x"), y = Term::var("y"), z = Term::var("z");
      const Role& r = ax.roles[0];
      emit(Rule{{role_atom(r, x, y), role_atom(r, y, z)}, {Disjunct{{}, {role_atom(r, x, z)}}}});
      return;
    }
    case DLAxiom::Kind::RoleInclusion: {
      Term x = Term::var("x"), y = Term::var("y");
      emit(Rule{{role_atom(ax.roles[0], x, y)}, {Disjunct{{}, {role_atom(ax.roles[1], x, y)}}}});
      return;
    }
    case DLAxiom::Kind::RoleComposition: {
      Term x = Term::var("x"), y = Term::var("y"), z = Term::var("z");
      emit(Rule{{role_atom(ax.roles[0], x, y), role_atom(ax.roles[1], y, z)},
                {Disjunct{{}, {role_atom(ax.roles[2], x, z)}}}});
      return;
    }
    case DLAxiom::Kind::ConceptInclusion:
      break;
  }
  std::vector<Concept> conjuncts;
  flatten_and(ax.rhs, conjuncts);
  for (const auto& conj : conjuncts) {
    VarGen vars;
    Term x = vars.fresh();
    Rule r;
    if (!lhs_body(ax.lhs, x, r.body, vars)) return;
    HeadPart h = rhs_head(conj, x, vars, true);
    if (h.top) continue;
    r.body.insert(r.body.end(), h.guards.begin(), h.guards.end());
    r.head = std::move(h.disjuncts);
    emit(std::move(r));
  }
}

}  // namespace

std::vector<DLAxiom> parse_dl(const std::string& text) {
  return DLParser(text).parse_all();
}

std::vector<TaggedRule> translate_dl(const std::vector<DLAxiom>& axioms) {
  std::vector<TaggedRule> out;
  for (std::size_t i = 0; i < axioms.size(); ++i) {
    try {
      translate_axiom(axioms[i], i, out);
    } catch (const Error& e) {
      throw Error("axiom " + std::to_string(i + 1) + " (line " + std::to_string(axioms[i].line) +
                  "): " + e.what());
    }
  }
  return out;
}

std::vector<Rule> equality_axioms(const Signature& sig) {
  Term x = Term::var("x"), y = Term::var("y"), z = Term::var("z");
  std::vector<Rule> out;
  out.push_back(Rule{{Atom{kNeq, {x, y}}, Atom{kEq, {x, y}}}, {}});
  out.push_back(Rule{{Atom{kEq, {x, y}}}, {Disjunct{{}, {Atom{kEq, {y, x}}}}}});
  out.push_back(Rule{{Atom{kEq, {x, y}}, Atom{kEq, {y, z}}}, {Disjunct{{}, {Atom{kEq, {x, z}}}}}});
  for (const auto& p : sig) {
    if (p.name == kEq || p.name == kNeq) continue;
    std::vector<Term> args;
    if (p.arity == 1) {
      args.push_back(x);
    } else {
      for (std::size_t i = 0; i < p.arity; ++i) args.push_back(Term::var("x" + std::to_string(i + 1)));
    }
    for (std::size_t i = 0; i < p.arity; ++i) {
      std::vector<Term> replaced = args;
      replaced[i] = y;
      out.push_back(Rule{{Atom{p.name, args}, Atom{kEq, {args[i], y}}},
                         {Disjunct{{}, {Atom{p.name, replaced}}}}});
    }
  }
  return out;
}

std::vector<Rule> untag(const std::vector<TaggedRule>& rules) {
  std::vector<Rule> out;
  out.reserve(rules.size());
  for (const auto& t : rules) out.push_back(t.rule);
  return out;
}

std::vector<TaggedRule> tag_each(const std::vector<Rule>& rules) {
  std::vector<TaggedRule> out;
  for (std::size_t i = 0; i < rules.size(); ++i) out.push_back(TaggedRule{rules[i], i});
  return out;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << text;
}

std::vector<TaggedRule> load_tbox(const std::filesystem::path& p) {
  std::string text = read_file(p);
  try {
    if (p.extension() == ".dl") return translate_dl(parse_dl(text));
    return tag_each(parse_rules(text));
  } catch (const Error& e) {
    throw Error(p.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------- suites

namespace {

std::string numbered(const char* stem, std::size_t i) {
  std::string n = std::to_string(i + 1);
  while (n.size() < 3) n = "0" + n;
  return std::string(stem) + "_" + n;
}

}  // namespace

std::vector<SuiteEntry> suite_entries(const TestSuite& suite) {
  std::vector<SuiteEntry> out;
  for (std::size_t i = 0; i < suite.unsat.size(); ++i) out.push_back({numbered("unsat", i), true, i});
  for (std::size_t i = 0; i < suite.tests.size(); ++i) out.push_back({numbered("test", i), false, i});
  return out;
}

void write_suite(const std::filesystem::path& dir, const TestSuite& suite) {
  std::filesystem::create_directories(dir);
  std::string manifest;
  std::vector<UCQ> queries;
  std::vector<std::string> query_files;
  auto query_file = [&](const UCQ& q) -> std::string {
    for (std::size_t i = 0; i < queries.size(); ++i) {
      if (queries[i] == q) return query_files[i];
    }
    std::string name = queries.empty() ? "query.q" : numbered("query", queries.size()) + ".q";
    queries.push_back(q);
    query_files.push_back(name);
    write_file(dir / name, serialize(q));
    return name;
  };
  manifest += "simple_for " + (suite.simple_for ? query_file(*suite.simple_for) : std::string("none")) + "\n";
  for (const auto& e : suite_entries(suite)) {
    std::string abox_file = e.id + ".abox";
    if (e.unsat) {
      write_file(dir / abox_file, serialize(suite.unsat[e.index]));
      manifest += "unsat " + abox_file + "\n";
    } else {
      const QueryTest& t = suite.tests[e.index];
      write_file(dir / abox_file, serialize(t.abox));
      manifest += "test " + abox_file + " " + query_file(t.query) + "\n";
    }
  }
  write_file(dir / "manifest.txt", manifest);
}

TestSuite read_suite(const std::filesystem::path& dir, std::vector<SuiteEntry>* order) {
  ParseOptions opts;
  opts.allow_reserved = true;
  TestSuite suite;
  std::map<std::string, UCQ> cache;
  auto load_query = [&](const std::string& rel) -> const UCQ& {
    auto it = cache.find(rel);
    if (it == cache.end()) {
      it = cache.emplace(rel, parse_query(read_file(dir / rel), opts)).first;
    }
    return it->second;
  };
  auto stem = [](const std::string& rel) { return std::filesystem::path(rel).stem().string(); };

  std::istringstream in(read_file(dir / "manifest.txt"));
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kind, a, b, extra;
    ls >> kind >> a >> b >> extra;
    auto bad = [&]() { throw Error((dir / "manifest.txt").string() + ":" + std::to_string(lineno) + ": malformed line"); };
    if (kind == "simple_for") {
      if (header || a.empty() || !b.empty()) bad();
      header = true;
      if (a != "none") suite.simple_for = load_query(a);
    } else if (kind == "unsat") {
      if (a.empty() || !b.empty()) bad();
      if (order) order->push_back({stem(a), true, suite.unsat.size()});
      suite.unsat.push_back(parse_abox(read_file(dir / a), opts));
    } else if (kind == "test") {
      if (a.empty() || b.empty() || !extra.empty()) bad();
      if (order) order->push_back({stem(a), false, suite.tests.size()});
      suite.tests.push_back(QueryTest{parse_abox(read_file(dir / a), opts), load_query(b)});
    } else {
      bad();
    }
  }
  if (!header) throw Error((dir / "manifest.txt").string() + ": missing simple_for header");
  return suite;
}

}  // namespace certkit
