#include "certkit/compare.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "certkit/instantiate.hpp"
#include "certkit/parallel.hpp"
#include "certkit/syntax.hpp"

namespace certkit {

namespace {

AnswerSet intersect(const AnswerSet& a, const AnswerSet& b) {
  AnswerSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

AboxComparison evaluate_one(const ABox& a, const UCQ& q, const std::vector<Rule>& theory,
                            const std::vector<Rule>& tbox, const Reasoner& r1,
                            const Reasoner& r2, const ChaseBudget& budget) {
  AboxComparison e;
  e.abox = a;
  e.cert_unsat = unsat_tri(theory, a, budget);
  UnsatResult u1 = r1.check_unsat(tbox, a);
  UnsatResult u2 = r2.check_unsat(tbox, a);
  e.unsat1 = u1.value;
  e.unsat2 = u2.value;
  if (e.cert_unsat == Tri::Unknown || e.unsat1 == Tri::Unknown || e.unsat2 == Tri::Unknown) {
    e.inconclusive = true;
    e.note = e.cert_unsat == Tri::Unknown ? "chase budget exceeded" : u1.note + u2.note;
    return e;
  }
  if (e.cert_unsat == Tri::True) return e;
  auto cert = try_certain_answers(q, theory, a, budget);
  if (!cert) {
    e.inconclusive = true;
    e.note = "chase budget exceeded";
    return e;
  }
  e.cert = std::move(*cert);
  for (auto [r, u, out] : {std::tuple{&r1, e.unsat1, &e.sound1}, {&r2, e.unsat2, &e.sound2}}) {
    if (u != Tri::False) continue;
    AnswerResult res = r->answer(q, tbox, a);
    if (!res.answers) {
      e.inconclusive = true;
      e.note = res.note;
      return e;
    }
    *out = intersect(*res.answers, e.cert);
  }
  return e;
}

bool subset(const AnswerSet& a, const AnswerSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Conditions 1 and 2 of the order on one ABox.
bool ordered(const AboxComparison& e) {
  if (e.cert_unsat == Tri::True) return !(e.unsat1 == Tri::True && e.unsat2 != Tri::True);
  if (e.unsat1 == Tri::False && e.unsat2 == Tri::False) return subset(e.sound1, e.sound2);
  return true;
}

// 3 or 4 when the ABox separates the reasoners, 0 otherwise.
int separating(const AboxComparison& e) {
  if (e.cert_unsat == Tri::True) {
    return e.unsat1 == Tri::False && e.unsat2 == Tri::True ? 3 : 0;
  }
  if (e.unsat1 == Tri::False && e.unsat2 == Tri::False && subset(e.sound1, e.sound2) &&
      e.sound1.size() < e.sound2.size()) {
    return 4;
  }
  return 0;
}

void add_ratio(Ratio& r, const AboxComparison& e, Tri unsat, const AnswerSet& sound) {
  if (e.inconclusive || e.cert_unsat != Tri::False || e.cert.empty()) return;
  r.certain += e.cert.size();
  if (unsat == Tri::False) r.returned += sound.size();
}

std::string answers_text(const AnswerSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& t : s) {
    if (!first) out += ", ";
    first = false;
    out += "(" + serialize(t) + ")";
  }
  return out + "}";
}

std::string ratio_text(const Ratio& r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", r.value());
  return std::to_string(r.returned) + "/" + std::to_string(r.certain) + " = " + buf;
}

}  // namespace

CompareReport compare_on(const std::vector<ABox>& aboxes, const UCQ& q,
                         const std::vector<Rule>& tbox, const Reasoner& r1, const Reasoner& r2,
                         const CompareOptions& opts) {
  CompareReport rep;
  rep.first = r1.name();
  rep.second = r2.name();
  rep.empirical_only = !r1.capabilities().compact || !r2.capabilities().compact;
  std::vector<Rule> theory = with_equality(tbox, signature(q.rules));
  rep.entries.resize(aboxes.size());
  parallel_for(aboxes.size(), opts.jobs, [&](std::size_t i) {
    rep.entries[i] = evaluate_one(aboxes[i], q, theory, tbox, r1, r2, opts.budget);
  });

  bool inconclusive = false;
  for (std::size_t i = 0; i < rep.entries.size(); ++i) {
    const auto& e = rep.entries[i];
    add_ratio(rep.ratio1, e, e.unsat1, e.sound1);
    add_ratio(rep.ratio2, e, e.unsat2, e.sound2);
    if (e.inconclusive) {
      inconclusive = true;
      continue;
    }
    if (!rep.counterexample && !ordered(e)) rep.counterexample = i;
    if (!rep.witness) {
      if (int c = separating(e)) {
        rep.witness = i;
        rep.witness_condition = c;
      }
    }
  }
  if (rep.counterexample) {
    rep.leq = Tri::False;
    rep.strict = Tri::False;
  } else if (inconclusive) {
    rep.leq = Tri::Unknown;
    rep.strict = Tri::Unknown;
  } else {
    rep.leq = Tri::True;
    rep.strict = rep.witness ? Tri::True : Tri::False;
  }
  return rep;
}

std::vector<ABox> representative_set(const Rewriting& subset_closed, const UCQ& q,
                                     const ChaseBudget& budget) {
  TestSuite s = injective_instantiation_ucq(subset_closed, q, budget);
  std::vector<ABox> out = s.unsat;
  for (auto& t : s.tests) out.push_back(std::move(t.abox));
  return out;
}

std::string format_compare(const CompareReport& rep) {
  std::ostringstream out;
  out << rep.first << " <= " << rep.second << ": " << to_string(rep.leq) << "\n";
  out << rep.first << " < " << rep.second << ": " << to_string(rep.strict) << "\n";
  if (rep.counterexample) {
    out << "order violated on " << inline_abox(rep.entries[*rep.counterexample].abox) << "\n";
  }
  if (rep.witness) {
    const auto& e = rep.entries[*rep.witness];
    out << "separated by " << inline_abox(e.abox);
    if (rep.witness_condition == 3) {
      out << " (unsatisfiability detected only by " << rep.second << ")\n";
    } else {
      out << " (certain answers " << answers_text(e.sound1) << " vs " << answers_text(e.sound2)
          << ")\n";
    }
  }
  out << "completeness ratio " << rep.first << ": " << ratio_text(rep.ratio1) << "\n";
  out << "completeness ratio " << rep.second << ": " << ratio_text(rep.ratio2) << "\n";
  out << "ABoxes without certain answers are left out of the ratios\n";
  if (rep.empirical_only) out << "empirical on R only\n";
  return out.str();
}

std::string compare_tsv(const CompareReport& rep) {
  std::string out = "abox\tcert-unsat\tunsat-1\tunsat-2\tcert\tcertain-1\tcertain-2\tnotes\n";
  for (std::size_t i = 0; i < rep.entries.size(); ++i) {
    const auto& e = rep.entries[i];
    std::string note = e.note;
    if (rep.counterexample == i) note += note.empty() ? "order violated" : "; order violated";
    if (rep.witness == i) {
      std::string w = "condition " + std::to_string(rep.witness_condition) + " witness";
      note += note.empty() ? w : "; " + w;
    }
    out += inline_abox(e.abox) + "\t" + to_string(e.cert_unsat) + "\t" + to_string(e.unsat1) +
           "\t" + to_string(e.unsat2) + "\t" + answers_text(e.cert) + "\t" +
           answers_text(e.sound1) + "\t" + answers_text(e.sound2) + "\t" + note + "\n";
  }
  out += "#leq\t" + std::string(to_string(rep.leq)) + "\n";
  out += "#strict\t" + std::string(to_string(rep.strict)) + "\n";
  out += "#ratio-1\t" + ratio_text(rep.ratio1) + "\n";
  out += "#ratio-2\t" + ratio_text(rep.ratio2) + "\n";
  if (rep.empirical_only) out += "#scope\tempirical on R only\n";
  return out;
}

}  // namespace certkit
