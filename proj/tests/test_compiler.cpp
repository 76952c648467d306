#include "doctest.h"

#include <random>

#include "nudfa/compiler.hpp"
#include "nudfa/congruence.hpp"
#include "nudfa/fixtures.hpp"
#include "test_support.hpp"

using namespace nudfa;
using nudfa::testing::random_program;

namespace {

ZpMatrix mat1(long long v) { return ZpMatrix::Constant(1, 1, v); }

Congruence eta3() { return Congruence::from_labels({0, 1, 0, 1, 0, 1}); }

// x_1 + x_2 with instructions (b_i, 0, 1).
AlgProgram sum_program(const FiniteAlgebra& a, std::vector<Element> accepting) {
  CircuitBuilder b(2);
  AlgProgram p;
  p.circuit = b.build(b.gate(a.op_index("+"), {b.var(0), b.var(1)}));
  p.n = 2;
  p.instructions = {{0, 0, 0, 1}, {1, 1, 0, 1}};
  p.accepting = std::move(accepting);
  return p;
}

}  // namespace

TEST_CASE("central representation of Z6 with %2") {
  Fixture f = fixture("Z6mod2");
  CentralRep rep = central_representation(f.algebra, eta3(), 0, *f.malcev);
  CHECK(rep.p == 3);
  CHECK(rep.nu == 1);
  CHECK(rep.basis == std::vector<Element>{2});
  int plus = f.algebra.op_index("+"), mod2 = f.algebra.op_index("%2");
  CHECK(rep.alpha[plus][0] == mat1(1));
  CHECK(rep.alpha[plus][1] == mat1(1));
  CHECK(rep.alpha[mod2][0] == mat1(0));
  // hat tables as elements of M = {0, 2, 4}
  auto elem = [&](const ZpVector& v) { return rep.module_element(v); };
  CHECK(elem(rep.hat[plus][0]) == 0);
  CHECK(elem(rep.hat[plus][1]) == 0);
  CHECK(elem(rep.hat[plus][2]) == 0);
  CHECK(elem(rep.hat[plus][3]) == 2);
  for (const auto& v : rep.hat[mod2]) CHECK(elem(v) == 0);
  CHECK(rep.quotient.algebra.op(mod2).table == std::vector<Element>{0, 1});
  for (Element x = 0; x < 6; ++x) CHECK(rep.decode(rep.m_part(x), rep.class_of(x)) == x);
}

TEST_CASE("central representation of Z4") {
  Fixture f = fixture("Z4");
  CentralRep rep = central_representation(f.algebra, Congruence::from_labels({0, 1, 0, 1}), 0, *f.malcev);
  CHECK(rep.p == 2);
  CHECK(rep.nu == 1);
  CHECK(rep.alpha[0][0] == mat1(1));
  CHECK(rep.module_element(rep.hat[0][3]) == 2);
}

TEST_CASE("central representation refuses non-central congruences") {
  Fixture s3 = fixture("S3");
  CongruenceLattice lat = all_congruences(s3.algebra);
  // the alternating subgroup's congruence is abelian but not central
  Congruence a3;
  for (const auto& c : lat.elements())
    if (c.num_classes() == 2) a3 = c;
  REQUIRE(a3.size() == 6);
  CHECK_THROWS_AS(central_representation(s3.algebra, a3, 0, *s3.malcev), HypothesisError);
  Fixture z6 = fixture("Z6mod2");
  // the total congruence has a class of size 6, not a prime power
  CHECK_THROWS_AS(central_representation(z6.algebra, Congruence::total(6), 0, *z6.malcev), HypothesisError);
}

TEST_CASE("path coefficients") {
  Fixture f = fixture("Z6mod2");
  CentralRep rep = central_representation(f.algebra, eta3(), 0, *f.malcev);
  int plus = f.algebra.op_index("+"), mod2 = f.algebra.op_index("%2");
  SUBCASE("x1 + x2") {
    CircuitBuilder b(2);
    AlgCircuit c = b.build(b.gate(plus, {b.var(0), b.var(1)}));
    auto pc = path_coefficients(c, rep);
    CHECK(pc.variable[0] == mat1(1));
    CHECK(pc.variable[1] == mat1(1));
  }
  SUBCASE("%2(x1)") {
    CircuitBuilder b(1);
    AlgCircuit c = b.build(b.gate(mod2, {b.var(0)}));
    CHECK(path_coefficients(c, rep).variable[0] == mat1(0));
  }
  SUBCASE("shared node counted per path") {
    CircuitBuilder b(2);
    int s = b.gate(plus, {b.var(0), b.var(1)});
    AlgCircuit c = b.build(b.gate(plus, {s, s}));
    auto pc = path_coefficients(c, rep);
    CHECK(pc.variable[0] == mat1(2));
    CHECK(pc.node[c.nodes.size() - 2] == mat1(2));
  }
}

TEST_CASE("compile_supernilpotent") {
  SUBCASE("AND_2 over Z6") {
    FiniteAlgebra z6 = fixture("Z6").algebra;
    AlgProgram p = sum_program(z6, {2});
    CCircuit c = compile_supernilpotent(p, z6);
    CHECK(validate_shape(c, "AND(*)∘MOD(6)∘OR(1)").ok);
    CHECK(cc_truth_table(c) == TruthTable{false, false, false, true});
  }
  SUBCASE("accept everything") {
    FiniteAlgebra z6 = fixture("Z6").algebra;
    AlgProgram p = sum_program(z6, {0, 1, 2, 3, 4, 5});
    CCircuit c = compile_supernilpotent(p, z6);
    CHECK(c.gate(c.output).inputs.size() == 6);
    CHECK(cc_truth_table(c) == TruthTable(4, true));
  }
  SUBCASE("parity over Z2") {
    FiniteAlgebra z2 = fixture("Z2").algebra;
    CircuitBuilder b(3);
    int s = b.gate(0, {b.gate(0, {b.var(0), b.var(1)}), b.var(2)});
    AlgProgram p{b.build(s), 3, {{0, 0, 0, 1}, {1, 1, 0, 1}, {2, 2, 0, 1}}, {1}};
    CCircuit c = compile_supernilpotent(p, z2);
    CHECK(validate_shape(c, "AND(1)∘MOD(2)∘OR(1)").ok);
    CHECK(cc_truth_table(c) == truth_table(p, z2));
  }
  SUBCASE("random programs over Z6, Z2 and Z4") {
    std::mt19937_64 rng(41);
    for (const char* name : {"Z6", "Z2", "Z4", "Z3"}) {
      FiniteAlgebra a = fixture(name).algebra;
      for (int rep = 0; rep < 8; ++rep) {
        AlgProgram p = random_program(a, 5, 4, 6, rng);
        CCircuit c = compile_supernilpotent(p, a);
        CHECK(validate_shape(c, "AND(*)∘MOD(" + std::to_string(pdiv(a.size())) + ")∘OR(*)").ok);
        CHECK(cc_truth_table(c) == truth_table(p, a));
      }
    }
  }
  FiniteAlgebra z6m = fixture("Z6mod2").algebra;
  CHECK_THROWS_AS(compile_supernilpotent(sum_program(z6m, {2}), z6m), HypothesisError);
}

TEST_CASE("compile_nilpotent") {
  Fixture f = fixture("Z6mod2");
  CompileOptions opts;
  opts.verify_n = 8;
  SUBCASE("AND_2 over Z6 with %2") {
    CompileResult r = compile_nilpotent(sum_program(f.algebra, {2}), f.algebra, *f.malcev, opts);
    CHECK(r.m == 2);
    CHECK(r.p == 3);
    CHECK(r.chain.size() == 2);
    CHECK(validate_shape(r.circuit, "AND(*)∘MOD(2)∘MOD(3)").ok);
    CHECK(cc_truth_table(r.circuit) == TruthTable{false, false, false, true});
  }
  SUBCASE("supernilpotent Z2 degenerates to the base case") {
    Fixture z2 = fixture("Z2");
    CircuitBuilder b(3);
    int s = b.gate(0, {b.gate(0, {b.var(0), b.var(1)}), b.var(2)});
    AlgProgram p{b.build(s), 3, {{0, 0, 0, 1}, {1, 1, 0, 1}, {2, 2, 0, 1}}, {1}};
    CompileResult r = compile_nilpotent(p, z2.algebra, *z2.malcev, opts);
    CHECK(r.chain.size() == 1);
    CHECK(r.p == 3);
    CHECK(validate_shape(r.circuit, "AND(*)∘MOD(2)∘MOD(3)").ok);
    CHECK(cc_truth_table(r.circuit) == truth_table(p, z2.algebra));
  }
  SUBCASE("%2(x1) + %2(x2) + x3 with every accepting set") {
    std::mt19937_64 rng(43);
    std::uniform_int_distribution<int> elem(0, 5);
    int plus = f.algebra.op_index("+"), mod2 = f.algebra.op_index("%2");
    CircuitBuilder b(3);
    int t = b.gate(plus, {b.gate(plus, {b.gate(mod2, {b.var(0)}), b.gate(mod2, {b.var(1)})}), b.var(2)});
    AlgCircuit c = b.build(t);
    for (int mask = 1; mask < 64; mask += 5) {
      AlgProgram p{c, 4, {}, {}};
      for (int i = 0; i < 3; ++i) p.instructions.push_back({i, i + (i == 2 && mask % 2), elem(rng), elem(rng)});
      for (Element x = 0; x < 6; ++x)
        if (mask >> x & 1) p.accepting.push_back(x);
      CompileResult r = compile_nilpotent(p, f.algebra, *f.malcev, opts);
      CHECK(cc_truth_table(r.circuit) == truth_table(p, f.algebra));
    }
  }
  SUBCASE("random programs") {
    std::mt19937_64 rng(47);
    for (int rep = 0; rep < 6; ++rep) {
      AlgProgram p = random_program(f.algebra, 5, 4, 6, rng);
      CompileResult r = compile_nilpotent(p, f.algebra, *f.malcev, opts);
      CHECK(validate_shape(r.circuit, "AND(*)∘MOD(2)∘MOD(3)").ok);
      CHECK(cc_truth_table(r.circuit) == truth_table(p, f.algebra));
    }
  }
  SUBCASE("refusals") {
    Fixture s3 = fixture("S3");
    CHECK_THROWS_AS(compile_nilpotent(sum_program(f.algebra, {0}), s3.algebra, *s3.malcev), std::exception);
    opts.p = 2;
    CHECK_THROWS_AS(compile_nilpotent(sum_program(f.algebra, {0}), f.algebra, *f.malcev, opts), HypothesisError);
  }
  SUBCASE("supernilpotent Z6 with an explicit p dividing |A|") {
    Fixture z6 = fixture("Z6");
    opts.p = 2;
    AlgProgram p = sum_program(z6.algebra, {1, 2});
    CompileResult r = compile_nilpotent(p, z6.algebra, *z6.malcev, opts);
    CHECK(r.m == 3);
    CHECK(validate_shape(r.circuit, "AND(*)∘MOD(3)∘MOD(2)").ok);
    CHECK(cc_truth_table(r.circuit) == truth_table(p, z6.algebra));
  }
}

TEST_CASE("descent stages") {
  Fixture f = fixture("Z6mod2");
  CentralRep rep = central_representation(f.algebra, eta3(), 0, *f.malcev);
  LoweringContext ctx(2, 3, 2);
  AlgProgram p = sum_program(f.algebra, {});
  auto tables = [&](int node) {
    std::vector<Element> v;
    for (std::uint64_t x = 0; x < 4; ++x) {
      AlgProgram q = p;
      q.circuit.output = node;
      v.push_back(program_inner(q, f.algebra, x));
    }
    return v;
  };
  // quotient indicators from exhaustive tables through the supernilpotent compiler of Z2
  FiniteAlgebra z2 = rep.quotient.algebra;
  QuotientIndicator quot = [&](int node, int cls) {
    AlgProgram q = p;
    q.circuit = map_constants(p.circuit, rep.quotient.projection);
    q.circuit.output = node;
    for (auto& in : q.instructions) {
      in.a0 = rep.class_of(in.a0);
      in.a1 = rep.class_of(in.a1);
    }
    q.accepting = {cls};
    CCircuit base = compile_supernilpotent(q, z2);
    CCBuilder b(2);
    int g = b.inline_circuit(base);
    int mod_gate = b.gate(g).inputs[0].source;
    return b.build(b.add_mod(3, {1}, {{mod_gate, 1}}), "AND(*)∘MOD(2)∘MOD(3)");
  };
  int root = p.circuit.output;
  std::vector<Element> vals = tables(root);
  for (Element t = 0; t < 6; ++t) {
    Descent d = descend_mod_beta(p, root, t, rep, quot, 2, ctx);
    TruthTable mt, full;
    for (Element v : vals) {
      mt.push_back(rep.m_part(v) == rep.m_part(t));
      full.push_back(v == t);
    }
    CHECK(validate_shape(d.five_layer, "AND(*)∘MOD(2)∘MOD(3)∘AND(*)∘SUMPC(3,1)").ok);
    CHECK(cc_truth_table(d.five_layer) == mt);
    CHECK(cc_truth_table(d.m_part) == mt);
    CHECK(cc_truth_table(d.result) == full);
  }
  SUBCASE("no gates: pure instruction term") {
    CircuitBuilder b(1);
    AlgProgram q{b.build(b.var(0)), 1, {{0, 0, 1, 4}}, {}};
    LoweringContext ctx1(2, 3, 1);
    Descent d = descend_mod_beta(
        q, q.circuit.output, 4, rep, [&](int, int cls) { return constant_circuit(1, cls == 0, 2, 3); }, 2, ctx1);
    CHECK(cc_truth_table(d.result) == TruthTable{false, true});
  }
}
