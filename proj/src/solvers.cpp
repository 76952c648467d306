#include "nudfa/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <stdexcept>

#include "nudfa/common.hpp"

namespace nudfa {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void check_equation(const FiniteAlgebra& a, const Equation& eq) {
  if (eq.lhs.num_vars != eq.rhs.num_vars) throw std::invalid_argument("equation: sides disagree on variables");
  validate_circuit(eq.lhs, a);
  validate_circuit(eq.rhs, a);
}

std::uint64_t assignment_count(const FiniteAlgebra& a, int vars) {
  std::uint64_t total = 1;
  for (int i = 0; i < vars; ++i) {
    total *= static_cast<std::uint64_t>(a.size());
    if (total > 10000000) throw std::invalid_argument("exhaustive solver: |A|^vars exceeds 10^7");
  }
  return total;
}

// Scans A^vars in lexicographic order; `stop` returns true to end the scan.
template <class F>
std::uint64_t scan(const FiniteAlgebra& a, const Equation& eq, F stop) {
  int v = eq.num_vars();
  std::uint64_t total = assignment_count(a, v);
  std::vector<Element> x(v, 0);
  for (std::uint64_t i = 0; i < total; ++i) {
    bool equal = eval_circuit(eq.lhs, a, x) == eval_circuit(eq.rhs, a, x);
    if (stop(x, equal)) return i + 1;
    for (int k = v - 1; k >= 0; --k) {
      if (++x[k] < a.size()) break;
      x[k] = 0;
    }
  }
  return total;
}

void require_nilpotent_malcev(const FiniteAlgebra& a, const AlgCircuit& malcev, const char* who) {
  if (!is_malcev(malcev, a)) throw HypothesisError(std::string(who) + ": circuit is not a Malcev term");
  if (!is_nilpotent(a)) throw HypothesisError(std::string(who) + ": " + a.name() + " is not nilpotent");
}

AlgProgram reduction_program(const FiniteAlgebra& a, const AlgCircuit& malcev, const Equation& eq, bool identity) {
  check_equation(a, eq);
  require_nilpotent_malcev(a, malcev, identity ? "ceqv_to_progcsat" : "csat_to_progcsat");
  const Element e = 0;
  Equation norm = normalize_equation(a, malcev, eq, e);
  AlgCircuit f = covering_chain(a, malcev);
  const int v = eq.num_vars(), k = a.size() - 1;
  CircuitBuilder b(v * k);
  std::vector<int> args;
  for (int i = 0; i < v; ++i) {
    std::vector<int> in;
    for (int j = 0; j < k; ++j) in.push_back(b.var(i * k + j));
    args.push_back(b.inline_circuit(f, in));
  }
  AlgProgram p;
  p.circuit = b.build(b.inline_circuit(norm.lhs, args));
  p.n = v * k;
  for (int i = 0; i < v; ++i)
    for (int j = 0; j < k; ++j) p.instructions.push_back({i * k + j, i * k + j, 0, j + 1});
  for (Element x = 0; x < a.size(); ++x)
    if ((x == e) != identity) p.accepting.push_back(x);
  return p;
}

}  // namespace

std::string status_name(SolveResult::Status s) {
  switch (s) {
    case SolveResult::Status::Sat: return "sat";
    case SolveResult::Status::Unsat: return "unsat";
    case SolveResult::Status::Holds: return "holds";
    case SolveResult::Status::Fails: return "fails";
  }
  return "?";
}

Equation equation_to_constant(const AlgCircuit& t, Element e) {
  CircuitBuilder b(t.num_vars);
  return {t, b.build(b.constant(e))};
}

SolveResult progcsat_exhaustive(const AlgProgram& p, const FiniteAlgebra& a) {
  validate_program(p, a);
  if (p.n > 24) throw std::invalid_argument("progcsat_exhaustive: n > 24");
  auto t0 = Clock::now();
  SolveResult r;
  std::uint64_t rows = std::uint64_t{1} << p.n;
  for (std::uint64_t x = 0; x < rows; ++x) {
    ++r.tried;
    std::vector<int> w = bits_of(x, p.n);
    if (eval_program(p, a, w).accepted) {
      r.status = SolveResult::Status::Sat;
      r.word = std::move(w);
      break;
    }
  }
  r.seconds = since(t0);
  return r;
}

std::uint64_t default_trials(const AlgProgram& p) {
  auto s = static_cast<std::uint64_t>(std::max(1, p.size()));
  return 4 * s * s;
}

SolveResult progcsat_sample(const AlgProgram& p, const FiniteAlgebra& a, std::uint64_t trials, std::uint64_t seed) {
  validate_program(p, a);
  if (p.n > 64) throw std::invalid_argument("progcsat_sample: n > 64");
  if (trials == 0) trials = default_trials(p);
  auto t0 = Clock::now();
  std::mt19937_64 rng(seed);
  SolveResult r;
  r.seed = seed;
  r.probabilistic = true;
  std::vector<int> w(p.n);
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::uint64_t bits = rng();
    for (int i = 0; i < p.n; ++i) w[i] = bits >> i & 1U;
    ++r.tried;
    if (eval_program(p, a, w).accepted) {
      r.status = SolveResult::Status::Sat;
      r.probabilistic = false;
      r.word = w;
      break;
    }
  }
  if (r.status == SolveResult::Status::Unsat) r.note = "no accepted word in " + std::to_string(trials) + " samples";
  r.seconds = since(t0);
  return r;
}

SolveResult csat_exhaustive(const FiniteAlgebra& a, const Equation& eq) {
  check_equation(a, eq);
  auto t0 = Clock::now();
  SolveResult r;
  r.tried = scan(a, eq, [&](const std::vector<Element>& x, bool equal) {
    if (!equal) return false;
    r.status = SolveResult::Status::Sat;
    r.assignment = x;
    return true;
  });
  r.seconds = since(t0);
  return r;
}

SolveResult ceqv_exhaustive(const FiniteAlgebra& a, const Equation& eq) {
  check_equation(a, eq);
  auto t0 = Clock::now();
  SolveResult r;
  r.status = SolveResult::Status::Holds;
  r.tried = scan(a, eq, [&](const std::vector<Element>& x, bool equal) {
    if (equal) return false;
    r.status = SolveResult::Status::Fails;
    r.assignment = x;
    return true;
  });
  r.seconds = since(t0);
  return r;
}

Equation normalize_equation(const FiniteAlgebra& a, const AlgCircuit& malcev, const Equation& eq, Element e) {
  check_equation(a, eq);
  if (e < 0 || e >= a.size()) throw std::invalid_argument("normalize_equation: element out of range");
  int v = eq.num_vars();
  CircuitBuilder b(v);
  std::vector<int> vars;
  for (int i = 0; i < v; ++i) vars.push_back(b.var(i));
  int s = b.inline_circuit(eq.lhs, vars), t = b.inline_circuit(eq.rhs, vars);
  int out = b.inline_circuit(malcev, {s, t, b.constant(e)});
  Equation norm;
  norm.lhs = b.build(out);
  CircuitBuilder c(v);
  norm.rhs = c.build(c.constant(e));
  return norm;
}

AlgCircuit covering_chain(const FiniteAlgebra& a, const AlgCircuit& malcev) {
  const int k = a.size() - 1;
  if (k < 1) throw std::invalid_argument("covering_chain: algebra needs at least 2 elements");
  CircuitBuilder b(k);
  int acc = b.var(0);
  for (int j = 1; j < k; ++j) acc = b.inline_circuit(malcev, {acc, b.constant(0), b.var(j)});
  AlgCircuit f = b.build(acc);
  // The image of f over {0, a_j} choices must be all of A.
  std::vector<char> hit(a.size(), 0);
  std::vector<Element> args(k);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    for (int j = 0; j < k; ++j) args[j] = (mask >> j & 1U) ? j + 1 : 0;
    hit[eval_circuit(f, a, args)] = 1;
  }
  for (Element x = 0; x < a.size(); ++x)
    if (!hit[x])
      throw HypothesisError("covering_chain: element " + std::to_string(x) + " is not reached by the Malcev chain");
  return f;
}

AlgProgram csat_to_progcsat(const FiniteAlgebra& a, const AlgCircuit& malcev, const Equation& eq) {
  return reduction_program(a, malcev, eq, false);
}

AlgProgram ceqv_to_progcsat(const FiniteAlgebra& a, const AlgCircuit& malcev, const Equation& eq) {
  return reduction_program(a, malcev, eq, true);
}

std::vector<Element> decode_reduction_word(const FiniteAlgebra& a, const AlgCircuit& malcev, int num_vars,
                                           const std::vector<int>& word) {
  AlgCircuit f = covering_chain(a, malcev);
  const int k = a.size() - 1;
  if (static_cast<int>(word.size()) != num_vars * k) throw std::invalid_argument("decode_reduction_word: length");
  std::vector<Element> out, args(k);
  for (int i = 0; i < num_vars; ++i) {
    for (int j = 0; j < k; ++j) args[j] = word[i * k + j] ? j + 1 : 0;
    out.push_back(eval_circuit(f, a, args));
  }
  return out;
}

SolveResult ceqv_via_meet_irreducibles(const FiniteAlgebra& a, const CongruenceLattice& lat, const Equation& eq) {
  check_equation(a, eq);
  auto t0 = Clock::now();
  SolveResult r;
  r.status = SolveResult::Status::Holds;
  std::vector<int> thetas = lat.meet_irreducibles();
  // A one-element lattice has no meet-irreducibles; A itself is then the only quotient.
  if (thetas.empty()) thetas.push_back(lat.bottom());
  for (int th : thetas) {
    Quotient q = quotient_algebra(a, lat.element(th));
    Equation qe{map_constants(eq.lhs, q.projection), map_constants(eq.rhs, q.projection)};
    SolveResult sub = ceqv_exhaustive(q.algebra, qe);
    r.tried += sub.tried;
    if (sub.status == SolveResult::Status::Fails) {
      r.status = SolveResult::Status::Fails;
      for (Element c : sub.assignment) r.assignment.push_back(q.representatives[c]);
      r.note = "fails modulo " + to_string(lat.element(th));
      break;
    }
  }
  r.seconds = since(t0);
  return r;
}

AlgProgram quotient_reduce_progcsat(const AlgProgram& p, const Quotient& q) {
  validate_program(p, q.algebra);
  AlgProgram out = p;
  out.circuit = map_constants(p.circuit, q.representatives);
  for (auto& in : out.instructions) {
    in.a0 = q.representatives[in.a0];
    in.a1 = q.representatives[in.a1];
  }
  out.accepting.clear();
  for (Element x = 0; x < static_cast<Element>(q.projection.size()); ++x)
    if (std::binary_search(p.accepting.begin(), p.accepting.end(), q.projection[x])) out.accepting.push_back(x);
  return out;
}

}  // namespace nudfa
