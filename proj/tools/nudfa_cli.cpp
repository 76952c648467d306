#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "nudfa/compiler.hpp"
#include "nudfa/congruence.hpp"
#include "nudfa/fixtures.hpp"
#include "nudfa/hardness.hpp"
#include "nudfa/io.hpp"
#include "nudfa/localizer.hpp"
#include "nudfa/solvers.hpp"

using namespace nudfa;

namespace {

// Result of a subcommand: JSON for stdout (or raw text) and the exit code.
struct Output {
  Json json;
  std::string text;
  int code = 0;
};

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << body << '\n';
}

AlgCircuit require_malcev(const LoadedAlgebra& a) {
  if (a.malcev) return *a.malcev;
  if (auto d = find_malcev_polynomial(a.algebra)) return *d;
  throw HypothesisError("no Malcev polynomial given or found for " + a.algebra.name());
}

Json partition_ref(const CongruenceLattice& lat, int i) {
  return {{"index", i}, {"classes", congruence_to_json(lat.element(i))}};
}

std::vector<int> parse_bits(const std::string& s) {
  std::vector<int> b;
  for (char ch : s) {
    if (ch != '0' && ch != '1') throw std::invalid_argument("bit string may only contain 0 and 1");
    b.push_back(ch - '0');
  }
  return b;
}

std::string bits_string(const std::vector<bool>& t) {
  std::string s;
  for (bool b : t) s += b ? '1' : '0';
  return s;
}

// ---------------------------------------------------------------------------

Output cmd_fixtures() {
  Json list = Json::array();
  for (const auto& name : fixture_names()) {
    Fixture fx = fixture(name);
    Json ops = Json::array();
    for (const auto& op : fx.algebra.ops()) ops.push_back({{"name", op.name}, {"arity", op.arity}});
    auto lat = all_congruences(fx.algebra);
    auto brute = brute_force_congruences(fx.algebra);
    list.push_back({{"name", name},
                    {"ref", "fixtures:" + name},
                    {"size", fx.algebra.size()},
                    {"ops", ops},
                    {"malcev", fx.malcev.has_value()},
                    {"congruences", lat.size()},
                    {"self_test", static_cast<int>(brute.size()) == lat.size()}});
  }
  return {{{"fixtures", list}}};
}

Output cmd_algebra(const std::string& ref, int depth) {
  LoadedAlgebra a = load_algebra(ref);
  Json j;
  j["algebra"] = algebra_to_json(a.algebra);
  std::optional<AlgCircuit> d = a.malcev;
  std::string source = d ? "given" : "search";
  if (!d) d = find_malcev_polynomial(a.algebra, depth);
  if (!d) source = "none";
  j["malcev_source"] = source;
  j["malcev"] = d ? circuit_to_json(*d, a.algebra) : Json(nullptr);
  j["solvability"] = solvability_class(a.algebra, Congruence::total(a.algebra.size())).to_string();
  j["nilpotent"] = is_nilpotent(a.algebra);
  try {
    j["clone_size"] = unary_polynomial_clone(a.algebra).size();
  } catch (const BudgetError& e) {
    j["clone_size"] = nullptr;
    j["clone_note"] = e.what();
  }
  return {j};
}

Output cmd_con(const std::string& ref, const std::string& format) {
  LoadedAlgebra a = load_algebra(ref);
  auto lat = all_congruences(a.algebra);
  CongruenceAnalysis an(a.algebra, lat);
  bool nil = is_nilpotent(a.algebra);
  // characteristics only exist on abelian covers
  CongruenceAnalysis* chars = nil ? &an : nullptr;
  if (format == "dot") return {Json(), lattice_to_dot(lat, chars)};
  Json j = lattice_to_json(lat, chars);
  j["size"] = lat.size();
  j["solvability"] = solvability_class(a.algebra, Congruence::total(a.algebra.size())).to_string();
  j["nilpotent"] = nil;
  if (nil) {
    Distinguished d = distinguished_congruences(an);
    j["rank"] = an.supernilpotent_rank();
    j["sigma"] = partition_ref(lat, d.sigma);
    j["kappa"] = partition_ref(lat, d.kappa);
    Json sp = Json::object();
    for (auto [p, idx] : d.sigma_p) sp[std::to_string(p)] = partition_ref(lat, idx);
    j["sigma_p"] = sp;
  }
  return {j};
}

Output cmd_localize(const std::string& ref, int lower, int upper, std::optional<int> through) {
  LoadedAlgebra a = load_algebra(ref);
  auto lat = all_congruences(a.algebra);
  if (lower < 0 || upper < 0 || lower >= lat.size() || upper >= lat.size())
    throw std::invalid_argument("localize: congruence index out of range (see `con`)");
  if (!lat.leq(lower, upper) || lower == upper) throw std::invalid_argument("localize: need lower < upper");
  const Congruence &lo = lat.element(lower), &up = lat.element(upper);
  UnaryClone clone = unary_polynomial_clone(a.algebra);
  Json j;
  j["lower"] = partition_ref(lat, lower);
  j["upper"] = partition_ref(lat, upper);
  j["clone_size"] = clone.size();
  auto describe = [&](const MinimalSet& m) {
    Json mj = minimal_set_to_json(m, a.algebra);
    mj["traces"] = traces(m, lo, up);
    return mj;
  };
  if (through) {
    j["minimal_set"] = describe(minimal_set_through(a.algebra, clone, lo, up, *through));
  } else {
    Json sets = Json::array();
    for (const auto& m : minimal_sets(a.algebra, clone, lo, up)) sets.push_back(describe(m));
    j["minimal_sets"] = sets;
  }
  return {j};
}

Output cmd_compile(const std::string& path, const std::string& out, int verify_n, bool trace,
                   std::optional<long long> p, const std::string& method) {
  LoadedProgram lp = load_program(path);
  const FiniteAlgebra& A = lp.algebra.algebra;
  Json j;
  CCircuit c;
  std::string used = method;
  if (method == "auto") used = lp.algebra.malcev || find_malcev_polynomial(A) ? "nilpotent" : "supernilpotent";
  if (used == "supernilpotent") {
    c = compile_supernilpotent(lp.program, A);
  } else if (used == "nilpotent") {
    CompileOptions opts;
    opts.p = p;
    opts.verify_n = verify_n;
    opts.trace = trace || verify_n > 0;
    CompileResult r = compile_nilpotent(lp.program, A, require_malcev(lp.algebra), opts);
    c = r.circuit;
    j["m"] = r.m;
    j["p"] = r.p;
    Json chain = Json::array();
    for (const auto& g : r.chain) chain.push_back(congruence_to_json(g));
    j["chain"] = chain;
    Json reps = Json::array();
    for (const auto& rep : r.reports) reps.push_back(pass_report_to_json(rep));
    j["reports"] = reps;
  } else {
    throw std::invalid_argument("compile: unknown method " + method);
  }
  j["method"] = used;
  j["shape"] = c.declared_shape;
  j["size"] = cc_size(c);
  j["gates"] = c.num_gates();
  auto shape = validate_shape(c, c.declared_shape);
  j["shape_ok"] = shape.ok;
  if (lp.program.n <= verify_n) {
    auto v = verify_program_circuit(lp.program, A, c, std::min(verify_n, 20));
    j["verified"] = v.match;
    if (!v.match) j["verify"] = verify_report_to_json(v);
  }
  if (!out.empty())
    write_file(out, ccircuit_to_json(c).dump());
  else
    j["circuit"] = ccircuit_to_json(c);
  int code = shape.ok && (!j.contains("verified") || j["verified"].get<bool>()) ? 0 : 1;
  return {j, "", code};
}

Output cmd_lower(const std::string& pass, const std::vector<std::string>& ins, const std::string& out, int verify_n,
                 long long m, long long p, const std::string& func) {
  if (ins.empty()) throw std::invalid_argument("lower: --in is required");
  std::vector<CCircuit> cs;
  for (const auto& f : ins) cs.push_back(ccircuit_from_json(read_json_file(f)));
  CCircuit res;
  PassReport rep;
  if (pass == "apply_func") {
    auto bits = parse_bits(func);
    if (bits.size() != (std::size_t{1} << cs.size()))
      throw std::invalid_argument("lower: --func needs 2^k bits for k inputs");
    TruthTable g(bits.begin(), bits.end());
    res = apply_func(g, cs, m, p);
    std::vector<const CCircuit*> ptrs;
    for (const auto& c : cs) ptrs.push_back(&c);
    TruthTable expected;
    if (cs[0].n <= verify_n) {
      for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << cs[0].n); ++idx) {
        std::size_t k = 0;
        for (std::size_t i = 0; i < cs.size(); ++i) k |= std::size_t{eval_cc_bool(cs[i], idx)} << i;
        expected.push_back(g[k]);
      }
    }
    rep = make_report(pass, ptrs, res, expected.empty() ? nullptr : &expected, verify_n);
  } else {
    if (cs.size() != 1) throw std::invalid_argument("lower: pass " + pass + " takes one input circuit");
    const CCircuit& c = cs[0];
    if (pass == "and_sum_lower") {
      TruthTable t = cc_truth_table(c);
      std::vector<ZpVector> table;
      for (bool b : t) table.push_back(ZpVector::Constant(1, b ? 1 : 0));
      res = and_sum_lower(table, c.n, p, 1);
    } else if (pass == "modm_andd_to_sum") {
      res = modm_andd_to_sum(c, m, p);
    } else if (pass == "unmod") {
      res = unmod(c, m, p);
    } else if (pass == "collapse_5to3") {
      res = collapse_5to3(c, m, p);
    } else {
      throw std::invalid_argument("lower: unknown pass " + pass);
    }
    rep = make_report(pass, c, res, verify_n);
  }
  Json j = pass_report_to_json(rep);
  if (!out.empty())
    write_file(out, ccircuit_to_json(res).dump());
  else
    j["circuit"] = ccircuit_to_json(res);
  return {j, "", rep.checked && !rep.verified ? 1 : 0};
}

Output cmd_cceval(const std::string& in, const std::string& input, bool all) {
  CCircuit c = ccircuit_from_json(read_json_file(in));
  Json j;
  if (all) {
    check_truth_table_bound(c.n);
    if (c.gate(c.output).kind == GateKind::Sump) {
      Json rows = Json::array();
      for (const auto& v : cc_vector_table(c)) rows.push_back(std::vector<long long>(v.data(), v.data() + v.size()));
      j["values"] = rows;
    } else {
      j["truth_table"] = bits_string(cc_truth_table(c));
    }
    return {j};
  }
  auto bits = parse_bits(input);
  if (static_cast<int>(bits.size()) != c.n)
    throw std::invalid_argument("cceval: input has " + std::to_string(bits.size()) + " bits, circuit reads " +
                                std::to_string(c.n));
  j["input"] = input;
  if (c.gate(c.output).kind == GateKind::Sump)
    j["output"] = eval_cc(c, bits);
  else
    j["output"] = eval_cc(c, bits).at(0) != 0;
  return {j};
}

Output cmd_ccshape(const std::string& in, const std::string& shape, const std::string& format) {
  CCircuit c = ccircuit_from_json(read_json_file(in));
  if (format == "dot") return {Json(), ccircuit_to_dot(c)};
  std::string s = shape.empty() ? c.declared_shape : shape;
  if (s.empty()) throw std::invalid_argument("ccshape: circuit declares no shape; pass --shape");
  auto r = validate_shape(c, s);
  Json j = {{"shape", s}, {"ok", r.ok}, {"size", cc_size(c)}, {"gates", c.num_gates()}};
  if (!r.ok) j["message"] = r.message;
  return {j, "", r.ok ? 0 : 1};
}

struct SolveArgs {
  std::string problem, program, algebra, equation, method = "exhaustive";
  std::uint64_t sample = 0, seed = 1;
  bool use_sample = false, timing = false;
};

Output cmd_solve(const SolveArgs& s) {
  Json j;
  j["problem"] = s.problem;
  if (s.problem == "progcsat") {
    if (s.program.empty()) throw std::invalid_argument("solve progcsat: --program is required");
    LoadedProgram lp = load_program(s.program);
    SolveResult r = s.use_sample ? progcsat_sample(lp.program, lp.algebra.algebra, s.sample, s.seed)
                                 : progcsat_exhaustive(lp.program, lp.algebra.algebra);
    j["method"] = s.use_sample ? "sample" : "exhaustive";
    j["result"] = solve_result_to_json(r, s.timing);
    return {j};
  }
  if (s.problem != "csat" && s.problem != "ceqv") throw std::invalid_argument("solve: unknown problem " + s.problem);
  if (s.algebra.empty() || s.equation.empty()) throw std::invalid_argument("solve: --algebra and --equation required");
  LoadedAlgebra a = load_algebra(s.algebra);
  Equation eq = equation_from_json(read_json_file(s.equation), a.algebra);
  bool sat = s.problem == "csat";
  SolveResult r;
  if (s.method == "exhaustive") {
    r = sat ? csat_exhaustive(a.algebra, eq) : ceqv_exhaustive(a.algebra, eq);
  } else if (s.method == "meet-irreducibles") {
    if (sat) throw std::invalid_argument("solve: meet-irreducibles applies to ceqv only");
    r = ceqv_via_meet_irreducibles(a.algebra, all_congruences(a.algebra), eq);
  } else if (s.method == "progcsat") {
    AlgCircuit d = require_malcev(a);
    AlgProgram prog = sat ? csat_to_progcsat(a.algebra, d, eq) : ceqv_to_progcsat(a.algebra, d, eq);
    SolveResult pr = s.use_sample ? progcsat_sample(prog, a.algebra, s.sample, s.seed)
                                  : progcsat_exhaustive(prog, a.algebra);
    r = pr;
    r.word.clear();
    bool found = pr.status == SolveResult::Status::Sat;
    if (found) r.assignment = decode_reduction_word(a.algebra, d, eq.num_vars(), pr.word);
    r.status = sat ? (found ? SolveResult::Status::Sat : SolveResult::Status::Unsat)
                   : (found ? SolveResult::Status::Fails : SolveResult::Status::Holds);
    j["program_size"] = prog.size();
  } else {
    throw std::invalid_argument("solve: unknown method " + s.method);
  }
  j["method"] = s.method;
  j["result"] = solve_result_to_json(r, s.timing);
  return {j};
}

Output cmd_gadget(const std::string& kind, const std::string& cnf_path, const std::string& alg, const std::string& out,
                  const std::string& table, long long p, int nu) {
  Json j;
  j["gadget"] = kind;
  auto emit_program = [&](const AlgProgram& prog, const LoadedAlgebra& la) {
    Json pj = program_to_json(prog, la);
    j["size"] = prog.size();
    if (!out.empty())
      write_file(out, pj.dump());
    else
      j["program"] = pj;
  };
  if (kind == "lattice") {
    Cnf f = load_dimacs(cnf_path);
    LoadedAlgebra lat = load_algebra("fixtures:LAT2");
    emit_program(cnf_to_lattice_program(f, lat.algebra), lat);
    return {j};
  }
  if (kind == "pseudo-and") {
    Cnf f = to_cnf3(load_dimacs(cnf_path));
    int v = nu > 0 ? nu : choose_nu(p, static_cast<int>(f.clauses.size()));
    j["nu"] = v;
    j["polynomial"] = poly_to_json(pseudo_and(f, p, v));
    return {j};
  }
  LoadedAlgebra a = load_algebra(alg);
  AlgCircuit d = require_malcev(a);
  if (kind == "beta") {
    auto cfg = find_beta_int_config(a.algebra, d);
    if (!cfg) throw HypothesisError("gadget beta: no interpolation configuration in " + a.algebra.name());
    auto bits = parse_bits(table);
    AlgCircuit c = beta_interpolate(*cfg, std::vector<bool>(bits.begin(), bits.end()));
    j["config"] = {{"alpha", congruence_to_json(cfg->alpha)},
                   {"alpha_minus", congruence_to_json(cfg->alpha_minus)},
                   {"beta", congruence_to_json(cfg->beta)},
                   {"c", cfg->c}, {"d", cfg->d}, {"e", cfg->e}, {"a", cfg->a},
                   {"p", cfg->p}, {"q", cfg->q},
                   {"U", cfg->u.elements}, {"V", cfg->v.elements},
                   {"h_adjusted", cfg->h_adjusted}, {"a_prime", cfg->a_prime}};
    j["circuit"] = circuit_to_json(c, a.algebra);
    j["gates"] = c.size();
    return {j};
  }
  if (kind == "twoprime") {
    auto lat = all_congruences(a.algebra);
    TwoPrimeSearch s = find_two_prime_witness(a.algebra, lat, d);
    j["checked"] = s.checked;
    if (!s.witness) {
      j["failure"] = s.failure;
      return {j, "", 1};
    }
    const TwoPrimeWitness& w = *s.witness;
    j["witness"] = {{"q", {w.q[0], w.q[1]}}, {"p", {w.p[0], w.p[1]}}, {"e", w.e},
                    {"c", {w.c[0], w.c[1]}}, {"d", {w.d[0], w.d[1]}}, {"a", {w.a[0], w.a[1]}},
                    {"V0", w.v[0].elements}, {"V1", w.v[1].elements}};
    Cnf f = load_dimacs(cnf_path);
    LoadedAlgebra la = a;
    la.malcev = d;
    la.ref = "inline";
    emit_program(build_two_prime_program(a.algebra, w, f), la);
    return {j};
  }
  throw std::invalid_argument("gadget: unknown kind " + kind);
}

Output cmd_verify(const std::string& program, const std::string& circuit, int bound) {
  LoadedProgram lp = load_program(program);
  CCircuit c = ccircuit_from_json(read_json_file(circuit));
  VerifyReport r = verify_program_circuit(lp.program, lp.algebra.algebra, c, bound);
  return {verify_report_to_json(r), "", r.match ? 0 : 1};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite algebras, programs over them, and modular-counting circuits"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::function<Output()> run;

  auto* fx = app.add_subcommand("fixtures", "List the built-in algebras");
  fx->callback([&] { run = [] { return cmd_fixtures(); }; });

  std::string alg_ref;
  int depth = 4;
  auto* alg = app.add_subcommand("algebra", "Algebra summary: Malcev term, solvability, clone size");
  alg->add_option("--algebra", alg_ref, "fixtures:NAME or algebra file")->required();
  alg->add_option("--depth", depth, "Malcev search depth")->check(CLI::Range(1, 8));
  alg->callback([&] { run = [&] { return cmd_algebra(alg_ref, depth); }; });

  std::string format = "json";
  auto* con = app.add_subcommand("con", "Congruence lattice with characteristics and distinguished congruences");
  con->add_option("--algebra", alg_ref)->required();
  con->add_option("--format", format)->check(CLI::IsMember({"json", "dot"}));
  con->callback([&] { run = [&] { return cmd_con(alg_ref, format); }; });

  int lower = -1, upper = -1;
  std::optional<int> through;
  auto* loc = app.add_subcommand("localize", "Minimal sets and traces for a lattice interval");
  loc->add_option("--algebra", alg_ref)->required();
  loc->add_option("--lower", lower, "lattice index (as printed by con)")->required();
  loc->add_option("--upper", upper, "lattice index (as printed by con)")->required();
  loc->add_option("--through", through, "element the minimal set must contain");
  loc->callback([&] { run = [&] { return cmd_localize(alg_ref, lower, upper, through); }; });

  std::string program, out, method = "auto";
  int verify_n = 0;
  bool trace = false;
  std::optional<long long> prime;
  auto* comp = app.add_subcommand("compile", "Compile a program into a modular-counting circuit");
  comp->add_option("--program", program)->required();
  comp->add_option("--out", out, "write the circuit here instead of stdout");
  comp->add_option("--verify-n", verify_n, "exhaustive checks when n <= K")->check(CLI::Range(0, 20));
  comp->add_flag("--trace-sizes", trace, "per-step pass reports");
  comp->add_option("--p", prime, "override the prime");
  comp->add_option("--method", method)->check(CLI::IsMember({"auto", "nilpotent", "supernilpotent"}));
  comp->callback([&] { run = [&] { return cmd_compile(program, out, verify_n, trace, prime, method); }; });

  std::string pass, func;
  std::vector<std::string> ins;
  long long m = 2, p = 3;
  auto* low = app.add_subcommand("lower", "Run one lowering pass");
  low->add_option("--pass", pass)
      ->required()
      ->check(CLI::IsMember({"and_sum_lower", "modm_andd_to_sum", "unmod", "apply_func", "collapse_5to3"}));
  low->add_option("--in", ins, "input circuit(s)")->required();
  low->add_option("--out", out);
  low->add_option("--verify-n", verify_n)->check(CLI::Range(0, 20));
  low->add_option("--m", m);
  low->add_option("--p", p);
  low->add_option("--func", func, "apply_func: truth table, bit i of the row index = input i");
  low->callback([&] { run = [&] { return cmd_lower(pass, ins, out, verify_n, m, p, func); }; });

  std::string in, input, shape;
  bool all = false;
  auto* ev = app.add_subcommand("cceval", "Evaluate a circuit");
  ev->add_option("--in", in)->required();
  auto* in_opt = ev->add_option("--input", input, "bits, b0 first");
  auto* all_opt = ev->add_flag("--all", all, "whole truth table");
  in_opt->excludes(all_opt);
  ev->callback([&] {
    if (input.empty() && !all) throw CLI::ValidationError("cceval: pass --input or --all");
    run = [&] { return cmd_cceval(in, input, all); };
  });

  auto* sh = app.add_subcommand("ccshape", "Check a circuit against a layer shape");
  sh->add_option("--in", in)->required();
  sh->add_option("--shape", shape, "defaults to the declared shape");
  sh->add_option("--format", format, "dot prints the circuit instead")->check(CLI::IsMember({"json", "dot"}));
  sh->callback([&] { run = [&] { return cmd_ccshape(in, shape, format); }; });

  SolveArgs sa;
  auto* sol = app.add_subcommand("solve", "ProgCSat, CSat or CEqv");
  sol->add_option("problem", sa.problem)->required()->check(CLI::IsMember({"progcsat", "csat", "ceqv"}));
  sol->add_option("--program", sa.program);
  sol->add_option("--algebra", sa.algebra);
  sol->add_option("--equation", sa.equation);
  sol->add_option("--method", sa.method)->check(CLI::IsMember({"exhaustive", "progcsat", "meet-irreducibles"}));
  bool exhaustive = false;
  auto* ex_opt = sol->add_flag("--exhaustive", exhaustive);
  auto* sample_opt = sol->add_option("--sample", sa.sample, "random words to try (0 = 4 size^2)");
  ex_opt->excludes(sample_opt);
  sol->add_option("--seed", sa.seed);
  sol->add_flag("--timing", sa.timing, "include wall-clock seconds");
  sol->callback([&] {
    sa.use_sample = sample_opt->count() > 0;
    run = [&] { return cmd_solve(sa); };
  });

  std::string kind, cnf, table;
  long long gp = 2;
  int nu = 0;
  auto* gad = app.add_subcommand("gadget", "Hardness gadgets");
  gad->add_option("kind", kind)->required()->check(CLI::IsMember({"lattice", "twoprime", "beta", "pseudo-and"}));
  gad->add_option("--cnf", cnf, "DIMACS file");
  gad->add_option("--algebra", alg_ref);
  gad->add_option("--out", out);
  gad->add_option("--table", table, "beta: f over {c,d}^s as 2^s bits");
  gad->add_option("--p", gp, "pseudo-and: prime");
  gad->add_option("--nu", nu, "pseudo-and: exponent (default from the clause count)");
  gad->callback([&] {
    if ((kind == "lattice" || kind == "twoprime" || kind == "pseudo-and") && cnf.empty())
      throw CLI::ValidationError("gadget " + kind + ": --cnf is required");
    if ((kind == "twoprime" || kind == "beta") && alg_ref.empty())
      throw CLI::ValidationError("gadget " + kind + ": --algebra is required");
    if (kind == "beta" && table.empty()) throw CLI::ValidationError("gadget beta: --table is required");
    run = [&] { return cmd_gadget(kind, cnf, alg_ref, out, table, gp, nu); };
  });

  std::string circuit;
  int bound = 20;
  auto* ver = app.add_subcommand("verify", "Compare a program with a circuit on every input");
  ver->add_option("--program", program)->required();
  ver->add_option("--circuit", circuit)->required();
  ver->add_option("--n-bound", bound)->check(CLI::Range(0, 20));
  ver->callback([&] { run = [&] { return cmd_verify(program, circuit, bound); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  // 1 = the inputs are well formed but the hypotheses fail; 2 = bad invocation or unreadable input
  auto fail = [](const std::string& kind, const std::string& msg) {
    std::cout << Json{{"error", kind}, {"message", msg}}.dump(2) << '\n';
    std::cerr << "error: " << msg << '\n';
    return kind == "input" ? 2 : 1;
  };
  try {
    Output o = run();
    if (!o.text.empty())
      std::cout << o.text;
    else
      std::cout << o.json.dump(2) << '\n';
    return o.code;
  } catch (const HypothesisError& e) {
    return fail("hypothesis", e.what());
  } catch (const BudgetError& e) {
    return fail("budget", e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail("input", e.what());
  } catch (const std::invalid_argument& e) {
    return fail("input", e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
}
