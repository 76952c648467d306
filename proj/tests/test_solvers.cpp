#include "doctest.h"

#include <cmath>
#include <random>

#include "nudfa/fixtures.hpp"
#include "nudfa/solvers.hpp"
#include "test_support.hpp"

using namespace nudfa;
using nudfa::testing::random_circuit;

namespace {

using Status = SolveResult::Status;

AlgProgram and2_program(const FiniteAlgebra& z6) {
  CircuitBuilder b(2);
  AlgProgram p;
  p.circuit = b.build(b.gate(z6.op_index("+"), {b.var(0), b.var(1)}));
  p.n = 2;
  p.instructions = {{0, 0, 0, 1}, {1, 1, 0, 1}};
  p.accepting = {2};
  return p;
}

// Program over LAT2 accepting exactly when the first k bits are all 1: density 2^-k.
AlgProgram density_program(int n, int k) {
  FiniteAlgebra lat = fixture("LAT2").algebra;
  int meet = lat.op_index("and");
  CircuitBuilder b(k);
  int acc = b.var(0);
  for (int i = 1; i < k; ++i) acc = b.gate(meet, {acc, b.var(i)});
  AlgProgram p;
  p.circuit = b.build(acc);
  p.n = n;
  for (int i = 0; i < k; ++i) p.instructions.push_back({i, i, 0, 1});
  p.accepting = {1};
  return p;
}

Equation make_eq(const AlgCircuit& l, const AlgCircuit& r) { return {l, r}; }

}  // namespace

TEST_CASE("progcsat") {
  FiniteAlgebra z6 = fixture("Z6").algebra;
  AlgProgram p = and2_program(z6);
  SolveResult r = progcsat_exhaustive(p, z6);
  CHECK(r.status == Status::Sat);
  CHECK(r.word == std::vector<int>{1, 1});
  p.accepting.clear();
  CHECK(progcsat_exhaustive(p, z6).status == Status::Unsat);
  CHECK(progcsat_sample(p, z6, 50, 1).status == Status::Unsat);
  CHECK(progcsat_sample(p, z6, 50, 1).probabilistic);
  p.accepting = {0, 1, 2, 3, 4, 5};
  CHECK(progcsat_sample(p, z6, 1, 9).status == Status::Sat);
  p.accepting = {2};
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) hits += progcsat_sample(p, z6, 64, seed).status == Status::Sat;
  CHECK(hits >= 95);
  CHECK(default_trials(p) == 4 * 3 * 3);
}

TEST_CASE("sampler hit rate within 3 sigma") {
  FiniteAlgebra lat = fixture("LAT2").algebra;
  for (int k : {2, 4}) {
    AlgProgram p = density_program(6, k);
    double rho = std::ldexp(1.0, -k);
    for (std::uint64_t trials : {1ULL, 4ULL, 16ULL}) {
      double q = 1 - std::pow(1 - rho, static_cast<double>(trials));
      int hits = 0;
      for (std::uint64_t seed = 0; seed < 100; ++seed) hits += progcsat_sample(p, lat, trials, seed).status == Status::Sat;
      double sigma = std::sqrt(100 * q * (1 - q));
      CHECK(std::abs(hits - 100 * q) <= 3 * sigma + 1e-9);
    }
  }
}

TEST_CASE("exhaustive CSat and CEqv") {
  FiniteAlgebra z6 = fixture("Z6").algebra, z2 = fixture("Z2").algebra, zm = fixture("Z6mod2").algebra;
  int plus = z6.op_index("+");
  {
    CircuitBuilder b(2);
    Equation eq = equation_to_constant(b.build(b.gate(plus, {b.var(0), b.var(1)})), 0);
    SolveResult r = csat_exhaustive(z6, eq);
    CHECK(r.status == Status::Sat);
    CHECK(r.assignment == std::vector<Element>{0, 0});
  }
  {
    CircuitBuilder b(1);
    Equation eq = equation_to_constant(b.build(b.gate(0, {b.var(0), b.var(0)})), 0);
    CHECK(ceqv_exhaustive(z2, eq).status == Status::Holds);
  }
  {
    CircuitBuilder b(1), c(1);
    Equation eq{b.build(b.gate(zm.op_index("%2"), {b.var(0)})), c.build(c.var(0))};
    SolveResult r = ceqv_exhaustive(zm, eq);
    CHECK(r.status == Status::Fails);
    CHECK(r.assignment == std::vector<Element>{2});
  }
}

TEST_CASE("normalize_equation") {
  Fixture f = fixture("Z6");
  int plus = f.algebra.op_index("+");
  CircuitBuilder b(2), c(2);
  Equation eq{b.build(b.var(0)), c.build(c.gate(plus, {c.var(1), c.constant(3)}))};
  Equation n = normalize_equation(f.algebra, *f.malcev, eq, 0);
  for (Element x = 0; x < 6; ++x)
    for (Element y = 0; y < 6; ++y) {
      std::vector<Element> v{x, y};
      CHECK(eval_circuit(n.lhs, f.algebra, v) == mod(x - y - 3, 6));
    }
  Equation same = normalize_equation(f.algebra, *f.malcev, {eq.lhs, eq.lhs}, 0);
  CHECK(ceqv_exhaustive(f.algebra, same).status == Status::Holds);
  Fixture z2 = fixture("Z2");
  CircuitBuilder d(1), e(1);
  Equation never{d.build(d.var(0)), e.build(e.gate(0, {e.var(0), e.constant(1)}))};
  CHECK(csat_exhaustive(z2.algebra, never).status == Status::Unsat);
  CHECK(csat_exhaustive(z2.algebra, normalize_equation(z2.algebra, *z2.malcev, never, 0)).status == Status::Unsat);
}

TEST_CASE("equation-to-program reductions agree with exhaustive search") {
  SUBCASE("examples") {
    Fixture z2 = fixture("Z2");
    CircuitBuilder b(2);
    Equation eq = equation_to_constant(b.build(b.gate(0, {b.var(0), b.var(1)})), 1);
    AlgProgram p = csat_to_progcsat(z2.algebra, *z2.malcev, eq);
    CHECK(p.n == 2);
    SolveResult r = progcsat_exhaustive(p, z2.algebra);
    REQUIRE(r.status == Status::Sat);
    auto x = decode_reduction_word(z2.algebra, *z2.malcev, 2, r.word);
    CHECK(eval_circuit(eq.lhs, z2.algebra, x) == 1);

    Fixture zm = fixture("Z6mod2");
    int plus = zm.algebra.op_index("+"), mod2 = zm.algebra.op_index("%2");
    CircuitBuilder c(1);
    int h = c.gate(mod2, {c.var(0)});
    Equation bad = equation_to_constant(c.build(c.gate(plus, {h, h})), 1);
    CHECK(csat_exhaustive(zm.algebra, bad).status == Status::Unsat);
    CHECK(progcsat_exhaustive(csat_to_progcsat(zm.algebra, *zm.malcev, bad), zm.algebra).status == Status::Unsat);

    Fixture z6 = fixture("Z6");
    CircuitBuilder d(1), e(1);
    Equation ident{d.build(d.gate(plus, {d.var(0), d.gate(plus, {d.gate(plus, {d.var(0), d.var(0)}),
                                                                      d.gate(plus, {d.var(0), d.var(0)})})})),
                   e.build(e.gate(plus, {e.gate(plus, {e.var(0), e.var(0)}), e.gate(plus, {e.var(0), e.var(0)})}))};
    // x + 4x = 4x fails; x - x = 0 holds
    CHECK(progcsat_exhaustive(ceqv_to_progcsat(z6.algebra, *z6.malcev, ident), z6.algebra).status == Status::Sat);
    Equation zero = equation_to_constant(e.build(e.constant(0)), 0);
    CHECK(progcsat_exhaustive(ceqv_to_progcsat(z6.algebra, *z6.malcev, zero), z6.algebra).status == Status::Unsat);
  }
  SUBCASE("random battery") {
    std::mt19937_64 rng(53);
    for (const char* name : {"Z2", "Z6", "Z6mod2"}) {
      Fixture f = fixture(name);
      CongruenceLattice lat = all_congruences(f.algebra);
      std::uniform_int_distribution<int> vars(1, 2), gates(1, 4), elem(0, f.algebra.size() - 1);
      for (int rep = 0; rep < 10; ++rep) {
        int v = vars(rng);
        Equation eq{random_circuit(f.algebra, v, gates(rng), rng), random_circuit(f.algebra, v, gates(rng), rng)};
        SolveResult cs = csat_exhaustive(f.algebra, eq), ce = ceqv_exhaustive(f.algebra, eq);
        AlgProgram ps = csat_to_progcsat(f.algebra, *f.malcev, eq);
        AlgProgram pe = ceqv_to_progcsat(f.algebra, *f.malcev, eq);
        SolveResult rs = progcsat_exhaustive(ps, f.algebra), re = progcsat_exhaustive(pe, f.algebra);
        CHECK((cs.status == Status::Sat) == (rs.status == Status::Sat));
        CHECK((ce.status == Status::Holds) == (re.status == Status::Unsat));
        if (rs.status == Status::Sat) {
          auto x = decode_reduction_word(f.algebra, *f.malcev, v, rs.word);
          CHECK(eval_circuit(eq.lhs, f.algebra, x) == eval_circuit(eq.rhs, f.algebra, x));
        }
        SolveResult mi = ceqv_via_meet_irreducibles(f.algebra, lat, eq);
        CHECK(mi.status == ce.status);
        if (mi.status == Status::Fails)
          CHECK(eval_circuit(eq.lhs, f.algebra, mi.assignment) != eval_circuit(eq.rhs, f.algebra, mi.assignment));
      }
    }
  }
  Fixture s3 = fixture("S3");
  CircuitBuilder b(1);
  CHECK_THROWS_AS(csat_to_progcsat(s3.algebra, *s3.malcev, equation_to_constant(b.build(b.var(0)), 0)),
                  HypothesisError);
}

TEST_CASE("meet-irreducible strategy on Z6") {
  Fixture f = fixture("Z6");
  CongruenceLattice lat = all_congruences(f.algebra);
  int plus = f.algebra.op_index("+");
  CircuitBuilder b(1);
  int x2 = b.gate(plus, {b.var(0), b.var(0)});
  int x3 = b.gate(plus, {x2, b.var(0)});
  Equation six = equation_to_constant(b.build(b.gate(plus, {x3, x3})), 0);
  CHECK(ceqv_via_meet_irreducibles(f.algebra, lat, six).status == Status::Holds);
  Equation two = equation_to_constant(b.build(x2), 0);
  SolveResult r = ceqv_via_meet_irreducibles(f.algebra, lat, two);
  CHECK(r.status == Status::Fails);
  CHECK(mod(2 * r.assignment[0], 6) != 0);
  CHECK(ceqv_via_meet_irreducibles(f.algebra, lat, {two.lhs, two.lhs}).status == Status::Holds);
}

TEST_CASE("quotient_reduce_progcsat") {
  Fixture f = fixture("Z6mod2");
  Quotient q = quotient_algebra(f.algebra, Congruence::from_labels({0, 1, 0, 1, 0, 1}));
  std::mt19937_64 rng(59);
  for (int rep = 0; rep < 10; ++rep) {
    AlgProgram p = nudfa::testing::random_program(q.algebra, 4, 3, 4, rng);
    AlgProgram lifted = quotient_reduce_progcsat(p, q);
    CHECK(truth_table(lifted, f.algebra) == truth_table(p, q.algebra));
  }
  AlgProgram p = nudfa::testing::random_program(q.algebra, 3, 2, 2, rng);
  p.accepting = {0, 1};
  CHECK(quotient_reduce_progcsat(p, q).accepting.size() == 6);
  p.accepting.clear();
  CHECK(quotient_reduce_progcsat(p, q).accepting.empty());
}
