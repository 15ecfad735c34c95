#include "certkit/reasoners.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <mutex>
#include <random>
#include <semaphore>
#include <sstream>

#include "certkit/syntax.hpp"

namespace certkit {

namespace {

Signature query_signature(const UCQ& q) { return signature(q.rules); }

UnsatResult chase_unsat(const std::vector<Rule>& program, const ABox& abox,
                        const ChaseBudget& budget) {
  Tri t = unsat_tri(program, abox, budget);
  return {t, t == Tri::Unknown ? "chase budget exceeded" : ""};
}

AnswerResult chase_answers(const UCQ& q, const std::vector<Rule>& program, const ABox& abox,
                           const ChaseBudget& budget) {
  auto ans = try_certain_answers(q, program, abox, budget);
  return {ans, ans ? "" : "chase budget exceeded"};
}

bool all_variables(const Atom& a) {
  return std::all_of(a.args.begin(), a.args.end(), [](const Term& t) { return t.is_variable(); });
}

// A single body atom and a single head atom over variables only, no equality.
bool simple_shape(const Rule& r) {
  if (r.body.size() != 1 || !r.is_plain_datalog()) return false;
  const Atom& b = r.body[0];
  const Atom& h = r.head[0].atoms[0];
  for (const auto* a : {&b, &h}) {
    if (a->predicate == kEq || a->predicate == kNeq || !all_variables(*a)) return false;
  }
  return true;
}

class Trivial : public Reasoner {
 public:
  std::string name() const override { return "trivial"; }
  Capabilities capabilities() const override { return {true, true, true, true, false, false}; }
  UnsatResult check_unsat(const std::vector<Rule>&, const ABox&) const override {
    return {Tri::False, ""};
  }
  AnswerResult answer(const UCQ&, const std::vector<Rule>&, const ABox&) const override {
    return {AnswerSet{}, ""};
  }
};

// Complete reasoning over a program derived from the input TBox.
class Derived : public Reasoner {
 public:
  Derived(std::string name, bool detect_unsat, const ChaseBudget& budget)
      : name_(std::move(name)), detect_unsat_(detect_unsat), budget_(budget) {}

  std::string name() const override { return name_; }
  Capabilities capabilities() const override { return {true, true, true, true, true, true}; }

  UnsatResult check_unsat(const std::vector<Rule>& tbox, const ABox& abox) const override {
    if (!detect_unsat_) return {Tri::False, ""};
    std::string note;
    std::vector<Rule> p = with_equality(program(tbox, note));
    UnsatResult r = chase_unsat(p, abox, budget_);
    if (!note.empty()) r.note = r.note.empty() ? note : r.note + "; " + note;
    return r;
  }

  AnswerResult answer(const UCQ& q, const std::vector<Rule>& tbox,
                      const ABox& abox) const override {
    std::string note;
    std::vector<Rule> p = with_equality(program(tbox, note), query_signature(q));
    AnswerResult r = chase_answers(q, p, abox, budget_);
    if (!note.empty()) r.note = r.note.empty() ? note : r.note + "; " + note;
    return r;
  }

 protected:
  virtual std::vector<Rule> program(const std::vector<Rule>& tbox, std::string& note) const = 0;
  const ChaseBudget& budget() const { return budget_; }

 private:
  std::string name_;
  bool detect_unsat_;
  ChaseBudget budget_;
};

class Rdf : public Derived {
 public:
  explicit Rdf(const ChaseBudget& b) : Derived("rdf", false, b) {}

 protected:
  std::vector<Rule> program(const std::vector<Rule>&, std::string&) const override { return {}; }
};

class Rdfs : public Derived {
 public:
  explicit Rdfs(const ChaseBudget& b) : Derived("rdfs", false, b) {}

 protected:
  std::vector<Rule> program(const std::vector<Rule>& tbox, std::string&) const override {
    return rdfs_fragment(tbox);
  }
};

class Rl : public Derived {
 public:
  explicit Rl(const ChaseBudget& b, std::string name = "rl") : Derived(std::move(name), true, b) {}

 protected:
  std::vector<Rule> program(const std::vector<Rule>& tbox, std::string&) const override {
    return rl_fragment(tbox);
  }
};

class Classify : public Rl {
 public:
  explicit Classify(const ChaseBudget& b) : Rl(b, "classify") {}
  // Not compact: the empty answer on MathSt(c) and the clash on MathSt(c), Prof(c)
  // call for different subsets of the TBox.
  Capabilities capabilities() const override { return {true, true, true, true, true, false}; }

 protected:
  std::vector<Rule> program(const std::vector<Rule>& tbox, std::string& note) const override {
    const Entry& e = classified(tbox);
    if (e.inconclusive > 0) {
      note = std::to_string(e.inconclusive) + " concept pair(s) left unclassified";
    }
    std::vector<Rule> all = tbox;
    all.insert(all.end(), e.subsumptions.begin(), e.subsumptions.end());
    return rl_fragment(all);
  }

 private:
  struct Entry {
    std::vector<Rule> subsumptions;
    std::size_t inconclusive = 0;
  };

  const Entry& classified(const std::vector<Rule>& tbox) const {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = cache_.find(tbox);
      if (it != cache_.end()) return it->second;
    }
    Entry e;
    std::vector<std::string> concepts;
    for (const auto& p : signature(tbox)) {
      if (p.arity == 1 && p.name != kNull) concepts.push_back(p.name);
    }
    std::vector<Rule> theory = with_equality(tbox);
    for (const auto& a : concepts) {
      for (const auto& b : concepts) {
        if (a == b) continue;
        Rule r = cq({atom(a, {"?x"})}, atom(b, {"?x"}));
        try {
          if (entails_rule(theory, r, budget())) e.subsumptions.push_back(std::move(r));
        } catch (const BudgetExceeded&) {
          ++e.inconclusive;
        }
      }
    }
    std::lock_guard<std::mutex> lock(mutex_);
    return cache_.emplace(tbox, std::move(e)).first->second;
  }

  mutable std::mutex mutex_;
  mutable std::map<std::vector<Rule>, Entry> cache_;
};

class RlNeq : public Rl {
 public:
  explicit RlNeq(const ChaseBudget& b) : Rl(b, "rl_neq") {}
  Capabilities capabilities() const override { return {true, true, true, false, false, false}; }

  AnswerResult answer(const UCQ& q, const std::vector<Rule>& tbox,
                      const ABox& abox) const override {
    std::string note;
    std::vector<Rule> p = with_equality(program(tbox, note), query_signature(q));
    try {
      ModelSet ms = saturate(p, abox, budget());
      if (ms.unsat) return {all_tuples(abox.constants(), q.arity), ""};
      MatchOptions opts;
      opts.injective = true;
      return {evaluate(q, ms.models.at(0).facts, ms.models.at(0).nulls, opts), ""};
    } catch (const BudgetExceeded&) {
      return {std::nullopt, "chase budget exceeded"};
    }
  }
};

class PEval : public Reasoner {
 public:
  explicit PEval(std::size_t rounds) : rounds_(rounds) {}
  std::string name() const override { return "peval:" + std::to_string(rounds_); }
  Capabilities capabilities() const override { return {true, true, true, true, false, false}; }

  UnsatResult check_unsat(const std::vector<Rule>&, const ABox&) const override {
    return {Tri::False, ""};
  }

  AnswerResult answer(const UCQ& q, const std::vector<Rule>& tbox,
                      const ABox& abox) const override {
    std::vector<Rule> rules;
    for (const auto& r : tbox) {
      if (r.is_plain_datalog()) rules.push_back(r);
    }
    FactIndex facts(abox);
    for (std::size_t round = 0; round < rounds_; ++round) {
      // Every round fires against the facts of the previous one only.
      std::vector<Atom> derived;
      for (const auto& r : rules) {
        for_each_match(r.body, facts, {}, [&](const Substitution& s) {
          derived.push_back(substitute(s, r.head[0].atoms[0]));
          return true;
        });
      }
      bool grew = false;
      for (const auto& a : derived) grew |= facts.insert(a);
      if (!grew) break;
    }
    return {evaluate(q, facts), ""};
  }

 private:
  std::size_t rounds_;
};

class Program : public Reasoner {
 public:
  Program(std::vector<Rule> rules, std::string label, const ChaseBudget& budget)
      : rules_(std::move(rules)), label_(std::move(label)), budget_(budget) {}
  std::string name() const override { return label_; }
  Capabilities capabilities() const override { return {false, true, true, true, true, false}; }

  UnsatResult check_unsat(const std::vector<Rule>&, const ABox& abox) const override {
    return chase_unsat(with_equality(rules_), abox, budget_);
  }
  AnswerResult answer(const UCQ& q, const std::vector<Rule>&, const ABox& abox) const override {
    return chase_answers(q, with_equality(rules_, query_signature(q)), abox, budget_);
  }

 private:
  std::vector<Rule> rules_;
  std::string label_;
  ChaseBudget budget_;
};

// ---- external process adapter ----

struct ProcessResult {
  bool timed_out = false;
  int status = 0;  // raw waitpid status
  std::string out;
  std::string error;  // set when the process could not be started
};

ProcessResult run_shell(const std::string& command, double timeout_seconds) {
  ProcessResult res;
  int fds[2];
  if (pipe(fds) != 0) {
    res.error = "pipe failed";
    return res;
  }
  pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    res.error = "fork failed";
    return res;
  }
  if (pid == 0) {
    setpgid(0, 0);
    dup2(fds[1], STDOUT_FILENO);
    close(fds[0]);
    close(fds[1]);
    int devnull = open("/dev/null", O_RDONLY);
    if (devnull >= 0) dup2(devnull, STDIN_FILENO);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);
  close(fds[1]);
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(timeout_seconds));
  char buf[4096];
  while (true) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                    deadline - std::chrono::steady_clock::now())
                    .count();
    if (left <= 0) {
      res.timed_out = true;
      break;
    }
    pollfd p{fds[0], POLLIN, 0};
    int n = poll(&p, 1, static_cast<int>(std::min<long long>(left, 1000)));
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) continue;
    ssize_t got = read(fds[0], buf, sizeof buf);
    if (got < 0 && errno == EINTR) continue;
    if (got <= 0) break;
    res.out.append(buf, static_cast<std::size_t>(got));
  }
  close(fds[0]);
  if (res.timed_out) killpg(pid, SIGKILL);
  while (waitpid(pid, &res.status, 0) < 0 && errno == EINTR) {
  }
  return res;
}

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "certkit-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw Error("cannot create a temporary directory");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

bool valid_constant(const std::string& s) {
  return !s.empty() && std::none_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isspace(c) || c == ',' || c == '(' || c == ')';
  });
}

class External : public Reasoner {
 public:
  External(std::string command, const ExternalOptions& opts)
      : command_(std::move(command)),
        timeout_(opts.timeout_seconds),
        slots_(static_cast<std::ptrdiff_t>(std::clamp<std::size_t>(opts.max_parallel, 1, 1024))) {}

  std::string name() const override { return "exec:" + command_; }

  UnsatResult check_unsat(const std::vector<Rule>& tbox, const ABox& abox) const override {
    std::string out, note;
    if (!invoke(tbox, abox, nullptr, out, note)) return {Tri::Unknown, note};
    if (out == "t\n" || out == "t") return {Tri::True, ""};
    if (out == "f\n" || out == "f") return {Tri::False, ""};
    return {Tri::Unknown, "protocol error: check printed " + shorten(out)};
  }

  AnswerResult answer(const UCQ& q, const std::vector<Rule>& tbox,
                      const ABox& abox) const override {
    std::string out, note;
    if (!invoke(tbox, abox, &q, out, note)) return {std::nullopt, note};
    AnswerSet ans;
    if (out.empty()) return {ans, ""};
    if (out.back() != '\n') out += '\n';
    std::size_t start = 0;
    while (start < out.size()) {
      std::size_t end = out.find('\n', start);
      std::string line = out.substr(start, end - start);
      start = end + 1;
      Tuple t;
      if (!line.empty()) {
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) t.push_back(c);
        if (line.back() == ',') t.push_back("");
      }
      bool ok = t.size() == q.arity && std::all_of(t.begin(), t.end(), valid_constant);
      if (!ok) return {std::nullopt, "protocol error: answer line " + shorten(line)};
      ans.insert(std::move(t));
    }
    return {ans, ""};
  }

 private:
  static std::string shorten(const std::string& s) {
    std::string t = s.size() > 40 ? s.substr(0, 40) + "..." : s;
    for (auto& c : t) {
      if (c == '\n') c = ' ';
    }
    return "'" + t + "'";
  }

  bool invoke(const std::vector<Rule>& tbox, const ABox& abox, const UCQ* q, std::string& out,
              std::string& note) const {
    TempDir dir;
    auto t = dir.path() / "tbox.rules";
    auto a = dir.path() / "abox.abox";
    write_file(t, serialize_rules(tbox));
    write_file(a, serialize(abox));
    std::string cmd = command_ + (q ? " answer" : " check") + " --tbox " + quote(t.string()) +
                      " --abox " + quote(a.string());
    if (q) {
      auto qf = dir.path() / "query.q";
      write_file(qf, serialize(*q));
      cmd += " --query " + quote(qf.string());
    }
    slots_.acquire();
    ProcessResult res = run_shell(cmd, timeout_);
    slots_.release();
    if (!res.error.empty()) {
      note = res.error;
      return false;
    }
    if (res.timed_out) {
      note = "timeout";
      return false;
    }
    if (!WIFEXITED(res.status) || WEXITSTATUS(res.status) != 0) {
      note = WIFEXITED(res.status) ? "exit code " + std::to_string(WEXITSTATUS(res.status))
                                   : "killed by signal";
      return false;
    }
    out = std::move(res.out);
    return true;
  }

  std::string command_;
  double timeout_;
  mutable std::counting_semaphore<1024> slots_;
};

std::size_t parse_count(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (s.empty() || pos != s.size() || s[0] == '-') {
    throw Error("bad " + what + " parameter '" + s + "'");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

std::vector<Rule> rdfs_fragment(const std::vector<Rule>& tbox) {
  std::vector<Rule> out;
  for (const auto& r : tbox) {
    if (!simple_shape(r)) continue;
    const Atom& b = r.body[0];
    const Atom& h = r.head[0].atoms[0];
    bool keep = false;
    if (b.arity() == 1 && h.arity() == 1) {
      keep = true;  // concept inclusion; safety forces the same variable
    } else if (b.arity() == 2 && b.args[0] != b.args[1]) {
      // role inclusion (either argument order), domain, or range
      keep = h.arity() == 2 ? h.args[0] != h.args[1] : h.arity() == 1;
    }
    if (keep) out.push_back(r);
  }
  return out;
}

std::vector<Rule> rl_fragment(const std::vector<Rule>& tbox) {
  std::vector<Rule> out;
  for (const auto& r : tbox) {
    if (r.is_datalog() || r.is_falsum()) out.push_back(r);
  }
  return out;
}

ReasonerPtr make_builtin(const std::string& name, const std::string& params,
                         const ChaseBudget& budget) {
  if (name == "peval") return std::make_shared<PEval>(parse_count(params, "peval"));
  if (!params.empty()) throw Error("reasoner " + name + " takes no parameters");
  if (name == "trivial") return std::make_shared<Trivial>();
  if (name == "rdf") return std::make_shared<Rdf>(budget);
  if (name == "rdfs") return std::make_shared<Rdfs>(budget);
  if (name == "rl") return std::make_shared<Rl>(budget);
  if (name == "classify") return std::make_shared<Classify>(budget);
  if (name == "rl_neq") return std::make_shared<RlNeq>(budget);
  throw Error("unknown built-in reasoner '" + name + "'");
}

ReasonerPtr make_program(std::vector<Rule> program, std::string label,
                         const ChaseBudget& budget) {
  return std::make_shared<Program>(std::move(program), std::move(label), budget);
}

ReasonerPtr make_external(const std::string& command, const ExternalOptions& opts) {
  if (command.empty()) throw Error("empty external command");
  return std::make_shared<External>(command, opts);
}

ReasonerPtr make_reasoner(const std::string& spec, const ChaseBudget& budget,
                          const ExternalOptions& ext) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) throw Error("reasoner spec needs a kind prefix: " + spec);
  std::string kind = spec.substr(0, colon);
  std::string rest = spec.substr(colon + 1);
  if (kind == "builtin") {
    auto c = rest.find(':');
    if (c == std::string::npos) return make_builtin(rest, "", budget);
    return make_builtin(rest.substr(0, c), rest.substr(c + 1), budget);
  }
  if (kind == "program") return make_program(untag(load_tbox(rest)), "program:" + rest, budget);
  if (kind == "exec") return make_external(rest, ext);
  throw Error("unknown reasoner kind '" + kind + "'");
}

const char* to_string(Property p) {
  switch (p) {
    case Property::Soundness: return "soundness";
    case Property::Monotonicity: return "monotonicity";
    case Property::WeakFaithfulness: return "weak-faithfulness";
    case Property::StrongFaithfulness: return "strong-faithfulness";
  }
  return "?";
}

bool PropertyReport::violated(Property p) const {
  return std::any_of(violations.begin(), violations.end(),
                     [p](const auto& v) { return v.property == p; });
}

namespace {

class Spotcheck {
 public:
  Spotcheck(const Reasoner& r, const UCQ& q, const std::vector<Rule>& tbox,
            const SpotcheckOptions& opts)
      : r_(r), q_(q), tbox_(tbox), opts_(opts), rng_(opts.seed) {
    reference_ = with_equality(tbox, query_signature(q));
    Signature sig = signature(tbox);
    for (const auto& p : query_signature(q)) sig.insert(p);
    for (const auto& p : sig) {
      if (p.name == q.predicate || p.name == kQprime || p.name == kEq || p.name == kNeq) continue;
      preds_.push_back(p);
    }
    fixed_ = constants(tbox);
    for (const auto& c : constants(q)) fixed_.insert(c);
    for (std::size_t i = 0; pool_.size() < std::max<std::size_t>(opts.individuals, 1); ++i) {
      std::string c = "i" + std::to_string(i);
      if (!fixed_.count(c)) pool_.push_back(c);
    }
    for (std::size_t i = 0; targets_.size() < 2 * pool_.size(); ++i) {
      std::string c = "j" + std::to_string(i);
      if (!fixed_.count(c)) targets_.push_back(c);
    }
    choices_ = pool_;
    choices_.insert(choices_.end(), fixed_.begin(), fixed_.end());
  }

  PropertyReport run() {
    PropertyReport rep;
    if (preds_.empty()) {
      rep.trials = opts_.trials;
      return rep;
    }
    for (std::size_t t = 0; t < opts_.trials; ++t) {
      ++rep.trials;
      ABox a = random_abox(1 + pick(opts_.max_facts));
      if (!trial(a, rep)) ++rep.inconclusive;
    }
    return rep;
  }

 private:
  bool enabled(Property p) const {
    return std::find(opts_.properties.begin(), opts_.properties.end(), p) !=
           opts_.properties.end();
  }

  std::size_t pick(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

  Atom random_fact() {
    const PredicateSig& p = preds_[pick(preds_.size())];
    Atom a{p.name, {}};
    for (std::size_t i = 0; i < p.arity; ++i) {
      a.args.push_back(Term::constant(choices_[pick(choices_.size())]));
    }
    return a;
  }

  ABox random_abox(std::size_t n) {
    ABox a;
    for (std::size_t i = 0; i < n; ++i) a.insert(random_fact());
    return a;
  }

  std::vector<std::string> movable(const ABox& a) const {
    std::vector<std::string> out;
    for (const auto& c : a.constants()) {
      if (!fixed_.count(c)) out.push_back(c);
    }
    return out;
  }

  Renaming injective_renaming(const ABox& a) {
    std::vector<std::string> images = pool_;
    images.insert(images.end(), targets_.begin(), targets_.end());
    std::shuffle(images.begin(), images.end(), rng_);
    Renaming mu;
    std::size_t k = 0;
    for (const auto& c : movable(a)) mu[c] = images[k++];
    return mu;
  }

  Renaming merging_renaming(const ABox& a) {
    Renaming mu;
    for (const auto& c : movable(a)) mu[c] = pool_[pick(pool_.size())];
    return mu;
  }

  struct Observed {
    Tri unsat = Tri::Unknown;
    AnswerSet answers;
  };

  std::optional<Observed> observe(const ABox& a) const {
    Observed o;
    o.unsat = r_.check_unsat(tbox_, a).value;
    if (o.unsat == Tri::Unknown) return std::nullopt;
    if (o.unsat == Tri::False) {
      auto ans = r_.answer(q_, tbox_, a).answers;
      if (!ans) return std::nullopt;
      o.answers = std::move(*ans);
    }
    return o;
  }

  void report(PropertyReport& rep, Property p, const ABox& a, const ABox& other,
              const Renaming& mu, std::string detail) {
    if (rep.violated(p)) return;
    rep.violations.push_back(PropertyViolation{p, a, other, mu, std::move(detail)});
  }

  static std::optional<Tuple> missing(const AnswerSet& expected, const AnswerSet& got) {
    for (const auto& t : expected) {
      if (!got.count(t)) return t;
    }
    return std::nullopt;
  }

  // False when some needed result was inconclusive.
  bool trial(const ABox& a, PropertyReport& rep) {
    auto base = observe(a);
    if (!base) return false;
    bool complete = true;

    if (enabled(Property::Soundness) && !rep.violated(Property::Soundness)) {
      Tri cu = unsat_tri(reference_, a, opts_.budget);
      if (cu == Tri::Unknown) {
        complete = false;
      } else if (base->unsat == Tri::True && cu == Tri::False) {
        report(rep, Property::Soundness, a, {}, {}, "reported unsatisfiable, but it is not");
      } else if (base->unsat == Tri::False) {
        auto cert = try_certain_answers(q_, reference_, a, opts_.budget);
        if (!cert) {
          complete = false;
        } else {
          for (const auto& t : base->answers) {
            if (!cert->count(t)) {
              report(rep, Property::Soundness, a, {}, {},
                     "answer (" + serialize(t) + ") is not certain");
              break;
            }
          }
        }
      }
    }

    if (enabled(Property::Monotonicity) && !rep.violated(Property::Monotonicity)) {
      ABox bigger = a;
      for (std::size_t i = 0, n = 1 + pick(2); i < n; ++i) bigger.insert(random_fact());
      auto ext = observe(bigger);
      if (!ext) {
        complete = false;
      } else if (base->unsat == Tri::True && ext->unsat == Tri::False) {
        report(rep, Property::Monotonicity, a, bigger, {}, "unsatisfiability lost on extension");
      } else if (base->unsat == Tri::False && ext->unsat == Tri::False) {
        if (auto t = missing(base->answers, ext->answers)) {
          report(rep, Property::Monotonicity, a, bigger, {},
                 "answer (" + serialize(*t) + ") lost on extension");
        }
      }
    }

    for (Property p : {Property::WeakFaithfulness, Property::StrongFaithfulness}) {
      if (!enabled(p) || rep.violated(p)) continue;
      bool weak = p == Property::WeakFaithfulness;
      Renaming mu = weak ? injective_renaming(a) : merging_renaming(a);
      ABox renamed = rename(mu, a);
      auto after = observe(renamed);
      if (!after) {
        complete = false;
        continue;
      }
      if (base->unsat == Tri::True) {
        if (after->unsat != Tri::True) {
          report(rep, p, a, renamed, mu, "unsatisfiability lost under renaming");
        }
        continue;
      }
      if (after->unsat == Tri::True) {
        // Only the weak property requires satisfiability to be preserved.
        if (weak && !base->answers.empty()) {
          report(rep, p, a, renamed, mu, "reported unsatisfiable after renaming");
        }
        continue;
      }
      AnswerSet expected;
      for (const auto& t : base->answers) expected.insert(rename(mu, t));
      if (auto t = missing(expected, after->answers)) {
        report(rep, p, a, renamed, mu, "answer (" + serialize(*t) + ") lost under renaming");
      }
    }
    return complete;
  }

  const Reasoner& r_;
  const UCQ& q_;
  const std::vector<Rule>& tbox_;
  const SpotcheckOptions& opts_;
  std::mt19937_64 rng_;
  std::vector<Rule> reference_;
  std::vector<PredicateSig> preds_;
  std::set<std::string> fixed_;
  std::vector<std::string> pool_;     // individuals of random ABoxes
  std::vector<std::string> targets_;  // extra images for injective renamings
  std::vector<std::string> choices_;  // pool plus fixed individuals
};

}  // namespace

PropertyReport property_spotcheck(const Reasoner& r, const UCQ& q, const std::vector<Rule>& tbox,
                                  const SpotcheckOptions& opts) {
  return Spotcheck(r, q, tbox, opts).run();
}

}  // namespace certkit
