#include "nudfa/compiler.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <string>

#include "nudfa/common.hpp"
#include "nudfa/congruence.hpp"
#include "nudfa/fieldpoly.hpp"

namespace nudfa {

namespace {

Element malcev_apply(const AlgCircuit& d, const FiniteAlgebra& a, Element x, Element y, Element z) {
  const Element args[3] = {x, y, z};
  return eval_circuit(d, a, args);
}

std::string tuple_string(const std::vector<Element>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + ")";
}

bool is_zero(const ZpMatrix& m) { return (m.array() == 0).all(); }

std::size_t checked_power(std::size_t base, int k, const char* what) {
  std::size_t out = 1;
  for (int i = 0; i < k; ++i) {
    out *= base;
    if (out > budget().monomials) throw BudgetError(std::string(what) + ": table exceeds the cap");
  }
  return out;
}

// Mixed-radix decoding, first coordinate most significant.
void decode_tuple(std::size_t idx, int k, int radix, std::vector<Element>& out) {
  out.resize(k);
  for (int i = k - 1; i >= 0; --i) {
    out[i] = static_cast<Element>(idx % radix);
    idx /= radix;
  }
}

}  // namespace

ZpVector CentralRep::m_part(Element x) const {
  Element y = malcev_apply(malcev, base, x, transversal[class_of(x)], anchor);
  return coords[y];
}

Element CentralRep::module_element(const ZpVector& m) const {
  std::size_t idx = 0, w = 1;
  for (int i = 0; i < nu; ++i) {
    idx += static_cast<std::size_t>(mod(m(i), p)) * w;
    w *= static_cast<std::size_t>(p);
  }
  return by_coord[idx];
}

Element CentralRep::decode(const ZpVector& m, int cls) const {
  return malcev_apply(malcev, base, module_element(m), anchor, transversal[cls]);
}

Element CentralRep::add(Element x, Element y) const { return malcev_apply(malcev, base, x, anchor, y); }

CentralRep central_representation(const FiniteAlgebra& d, const Congruence& beta, Element e,
                                  const AlgCircuit& malcev) {
  const int n = d.size();
  if (beta.size() != n) throw std::invalid_argument("central_representation: congruence size mismatch");
  if (e < 0 || e >= n) throw std::invalid_argument("central_representation: anchor out of range");
  if (!is_compatible(d, beta)) throw std::invalid_argument("central_representation: beta is not a congruence");
  if (!is_malcev(malcev, d)) throw HypothesisError("central_representation: circuit is not a Malcev term");
  CentralRep rep;
  rep.base = d;
  rep.beta = beta;
  rep.anchor = e;
  rep.malcev = malcev;

  std::vector<Element> module;
  for (Element x = 0; x < n; ++x)
    if (beta.related(x, e)) module.push_back(x);
  auto [p, nu] = prime_power(static_cast<long long>(module.size()));
  if (module.size() < 2 || p == 0)
    throw HypothesisError("central_representation: class of the anchor has size " + std::to_string(module.size()) +
                          ", not a prime power > 1");
  rep.p = p;
  for (Element x : module) {
    if (rep.add(x, e) != x || rep.add(e, x) != x)
      throw HypothesisError("central_representation: anchor is not a module zero at " + std::to_string(x));
    for (Element y : module) {
      if (rep.add(x, y) != rep.add(y, x))
        throw HypothesisError("central_representation: module addition not commutative at (" + std::to_string(x) +
                              "," + std::to_string(y) + ")");
      for (Element z : module)
        if (rep.add(rep.add(x, y), z) != rep.add(x, rep.add(y, z)))
          throw HypothesisError("central_representation: module addition not associative");
    }
    Element k = e;
    for (long long i = 0; i < p; ++i) k = rep.add(k, x);
    if (k != e) throw HypothesisError("central_representation: element " + std::to_string(x) + " has order != p");
  }

  // Greedy basis: each element outside the current span becomes a generator.
  std::vector<std::vector<long long>> coord(n);
  std::vector<Element> span{e};
  coord[e] = {};
  for (Element x : module) {
    if (std::find(span.begin(), span.end(), x) != span.end()) continue;
    rep.basis.push_back(x);
    std::vector<Element> grown;
    for (Element s : span) {
      coord[s].push_back(0);
      grown.push_back(s);
    }
    for (Element s : span) {
      Element y = s;
      for (long long k = 1; k < p; ++k) {
        y = rep.add(y, x);
        coord[y] = coord[s];
        coord[y].back() = k;
        grown.push_back(y);
      }
    }
    span = std::move(grown);
  }
  rep.nu = static_cast<int>(rep.basis.size());
  if (rep.nu != nu) throw HypothesisError("central_representation: basis size does not match |M|");
  rep.coords.assign(n, ZpVector());
  rep.by_coord.assign(module.size(), -1);
  for (Element x : module) {
    ZpVector v(rep.nu);
    std::size_t idx = 0, w = 1;
    for (int i = 0; i < rep.nu; ++i) {
      v(i) = coord[x][i];
      idx += static_cast<std::size_t>(coord[x][i]) * w;
      w *= static_cast<std::size_t>(p);
    }
    rep.coords[x] = v;
    rep.by_coord[idx] = x;
  }
  for (Element x : module)
    for (Element y : module)
      if (rep.coords[rep.add(x, y)] != reduce_vec(rep.coords[x] + rep.coords[y], p))
        throw HypothesisError("central_representation: coordinates are not additive");

  rep.quotient = quotient_algebra(d, beta);
  rep.transversal = rep.quotient.representatives;
  rep.transversal[rep.class_of(e)] = e;
  for (Element x = 0; x < n; ++x)
    if (rep.decode(rep.m_part(x), rep.class_of(x)) != x)
      throw HypothesisError("central_representation: encode/decode not inverse at " + std::to_string(x));

  const int s = rep.num_classes();
  const int ce = rep.class_of(e);
  std::vector<Element> args, cls;
  for (int f = 0; f < d.num_ops(); ++f) {
    const Operation& op = d.op(f);
    const int k = op.arity;
    std::size_t tuples = checked_power(static_cast<std::size_t>(s), k, "central_representation");
    std::vector<ZpVector> hat(tuples);
    for (std::size_t t = 0; t < tuples; ++t) {
      decode_tuple(t, k, s, cls);
      args.resize(k);
      for (int i = 0; i < k; ++i) args[i] = rep.transversal[cls[i]];
      hat[t] = rep.m_part(d.apply(f, args));
    }
    std::size_t ref = 0;
    for (int i = 0; i < k; ++i) ref = ref * s + ce;
    std::vector<ZpMatrix> alpha(k, ZpMatrix::Zero(rep.nu, rep.nu));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < rep.nu; ++j) {
        args.assign(k, e);
        ZpVector unit = ZpVector::Zero(rep.nu);
        unit(j) = 1;
        args[i] = rep.decode(unit, ce);
        alpha[i].col(j) = reduce_vec(rep.m_part(d.apply(f, args)) - hat[ref], p);
      }
    std::size_t all = checked_power(static_cast<std::size_t>(n), k, "central_representation");
    std::vector<ZpVector> parts(n);
    for (Element x = 0; x < n; ++x) parts[x] = rep.m_part(x);
    for (std::size_t t = 0; t < all; ++t) {
      decode_tuple(t, k, n, args);
      std::size_t ci = 0;
      ZpVector want = ZpVector::Zero(rep.nu);
      for (int i = 0; i < k; ++i) {
        ci = ci * s + rep.class_of(args[i]);
        want += alpha[i] * parts[args[i]];
      }
      want = reduce_vec(want + hat[ci], p);
      if (parts[d.apply(f, args)] != want)
        throw HypothesisError("central_representation: beta is not central; operation " + op.name +
                              " breaks the affine form at " + tuple_string(args));
    }
    rep.alpha.push_back(std::move(alpha));
    rep.hat.push_back(std::move(hat));
  }
  return rep;
}

PathCoefficients path_coefficients(const AlgCircuit& c, const CentralRep& rep, int root) {
  if (root < 0) root = c.output;
  const long long p = rep.p;
  PathCoefficients out;
  out.node.assign(c.nodes.size(), ZpMatrix::Zero(rep.nu, rep.nu));
  out.variable.assign(c.num_vars, ZpMatrix::Zero(rep.nu, rep.nu));
  out.node[root] = ZpMatrix::Identity(rep.nu, rep.nu);
  for (int i = root; i >= 0; --i) {
    const CircuitNode& nd = c.nodes[i];
    if (is_zero(out.node[i])) continue;
    if (nd.kind == CircuitNode::Kind::Var) {
      out.variable[nd.value] = reduce(out.variable[nd.value] + out.node[i], p);
    } else if (nd.kind == CircuitNode::Kind::Gate) {
      for (std::size_t k = 0; k < nd.children.size(); ++k) {
        int ch = nd.children[k];
        out.node[ch] = reduce(out.node[ch] + out.node[i] * rep.alpha[nd.value][k], p);
      }
    }
  }
  return out;
}

CCircuit constant_circuit(int n, bool value, long long m, long long p) {
  CCBuilder b(n);
  int one = b.add_mod(m, {1}, {{b.add_and({}), 1}});
  return b.build(b.add_mod(p, {value ? 1LL : 0LL}, {{one, 1}}), shape_and_modm_modp(m, p));
}

CCircuit literal_circuit(int n, int bit, bool positive, long long m, long long p) {
  CCBuilder b(n);
  int g = b.add_mod(m, {positive ? 1LL : 0LL}, {{b.add_and({bit}), 1}});
  return b.build(b.add_mod(p, {1}, {{g, 1}}), shape_and_modm_modp(m, p));
}

namespace {

// Everything compile_supernilpotent needs about A: its prime-power factors grouped by prime.
struct SupernilpotentBase {
  long long pdiv = 0;
  std::vector<std::pair<long long, std::vector<Congruence>>> groups;
};

SupernilpotentBase supernilpotent_base(const FiniteAlgebra& a) {
  if (a.size() < 2) throw HypothesisError("compile_supernilpotent: algebra has fewer than 2 elements");
  CongruenceLattice lat = all_congruences(a);
  CongruenceAnalysis an(a, lat);
  if (!an.is_supernilpotent_quotient(lat.bottom()))
    throw HypothesisError("compile_supernilpotent: " + a.name() + " is not supernilpotent ([0,1] is not a PUPI)");
  auto dec = prime_power_decomposition(a, lat);
  if (!dec) throw HypothesisError("compile_supernilpotent: no prime-power decomposition of " + a.name());
  SupernilpotentBase base;
  base.pdiv = pdiv(a.size());
  std::map<long long, std::vector<Congruence>> by_prime;
  for (std::size_t j = 0; j < dec->factors.size(); ++j) {
    long long q = prime_power(dec->factor_sizes[j]).first;
    if (q > 1) by_prime[q].push_back(dec->factors[j]);
  }
  base.groups.assign(by_prime.begin(), by_prime.end());
  return base;
}

// MOD(pdiv) gate over AND gates accepting exactly when `values[x] == target`.
int supernilpotent_gate(CCBuilder& b, const SupernilpotentBase& base, const std::vector<Element>& values, int n,
                        Element target) {
  const long long P = base.pdiv;
  std::map<std::uint64_t, long long> mult;
  long long accept = 0;
  std::vector<long long> table(values.size());
  for (const auto& [q, factors] : base.groups) {
    for (std::size_t x = 0; x < values.size(); ++x) {
      bool all = true;
      for (const Congruence& eta : factors) all = all && eta.related(values[x], target);
      table[x] = all ? 1 : 0;
    }
    long long w = P / q;
    accept += w;
    for (const auto& [mask, c] : multilinear_interpolate(table, n, q).terms) mult[mask] = mod(mult[mask] + w * c, P);
  }
  std::vector<Wire> wires;
  for (const auto& [mask, c] : mult) {
    if (mask == 0) {
      accept -= c;
      continue;
    }
    if (c == 0) continue;
    std::vector<int> bits;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1U) bits.push_back(i);
    wires.push_back({b.add_and(bits), c});
  }
  return b.add_mod(P, {mod(accept, P)}, wires);
}

}  // namespace

CCircuit compile_supernilpotent(const AlgProgram& prog, const FiniteAlgebra& a) {
  validate_program(prog, a);
  check_truth_table_bound(prog.n);
  SupernilpotentBase base = supernilpotent_base(a);
  std::vector<Element> values = inner_table(prog, a);
  CCBuilder b(prog.n);
  std::vector<int> branches;
  for (Element c : prog.accepting) branches.push_back(supernilpotent_gate(b, base, values, prog.n, c));
  std::string shape = "AND(*)∘MOD(" + std::to_string(base.pdiv) + ")∘OR(" + std::to_string(branches.size()) + ")";
  return b.build(b.add_or(branches), shape);
}

Descent descend_mod_beta(const AlgProgram& prog, int node, Element target, const CentralRep& rep,
                         const QuotientIndicator& quotient, long long m, LoweringContext& ctx) {
  const AlgCircuit& c = prog.circuit;
  const long long p = rep.p;
  const int nu = rep.nu, n = prog.n, s = rep.num_classes();
  PathCoefficients coef = path_coefficients(c, rep, node);
  std::vector<const Instruction*> ins(c.num_vars, nullptr);
  for (const auto& i : prog.instructions) ins[i.var] = &i;

  CCBuilder b(n);
  std::vector<Wire> wires;
  std::vector<ZpMatrix> mats;
  ZpVector offset = ZpVector::Zero(nu);
  std::map<std::pair<int, int>, int> indicator_ids;
  auto indicator = [&](int child, int cls) {
    auto [it, fresh] = indicator_ids.emplace(std::make_pair(child, cls), -1);
    if (fresh) it->second = b.inline_circuit(quotient(child, cls));
    return it->second;
  };
  auto add_term = [&](std::vector<int> factors, const ZpVector& v) {
    if ((v.array() == 0).all()) return;
    wires.push_back({b.add_and(std::move(factors)), 1});
    mats.push_back(ZpMatrix(v.asDiagonal()));
  };

  for (int i = node; i >= 0; --i) {
    const ZpMatrix& k = coef.node[i];
    if (is_zero(k)) continue;
    const CircuitNode& nd = c.nodes[i];
    switch (nd.kind) {
      case CircuitNode::Kind::Var: {
        const Instruction& in = *ins[nd.value];
        ZpVector m0 = rep.m_part(in.a0), m1 = rep.m_part(in.a1);
        offset += k * m0;
        ZpVector delta = reduce_vec(k * (m1 - m0), p);
        if (!(delta.array() == 0).all()) {
          int lit = b.inline_circuit(literal_circuit(n, in.bit, true, m, p));
          add_term({lit}, delta);
        }
        break;
      }
      case CircuitNode::Kind::Const:
        offset += k * rep.m_part(nd.value);
        break;
      case CircuitNode::Kind::Gate: {
        const int ar = static_cast<int>(nd.children.size());
        const auto& hat = rep.hat[nd.value];
        if (ar == 0) {
          offset += k * hat[0];
          break;
        }
        if (std::all_of(hat.begin(), hat.end(), [](const ZpVector& v) { return (v.array() == 0).all(); })) break;
        if (ar * s <= 12) {
          // Binary expansion of the hat table over one-hot class indicators.
          const int width = ar * s;
          std::vector<ZpVector> table(std::size_t{1} << width, ZpVector::Zero(nu));
          std::vector<Element> cls;
          for (std::size_t y = 0; y < table.size(); ++y)
            for (std::size_t t = 0; t < hat.size(); ++t) {
              decode_tuple(t, ar, s, cls);
              bool on = true;
              for (int a = 0; a < ar && on; ++a) on = y >> (a * s + cls[a]) & 1U;
              if (on) table[y] += hat[t];
            }
          for (auto& v : table) v = reduce_vec(v, p);
          CCircuit hc = and_sum_lower(table, width, p, nu);
          const CGate& sum = hc.gate(hc.output);
          offset += k * sum.offset;
          for (std::size_t w = 0; w < sum.inputs.size(); ++w) {
            std::vector<int> factors;
            for (const Wire& bit : hc.gate(sum.inputs[w].source).inputs)
              factors.push_back(indicator(nd.children[bit.source / s], bit.source % s));
            add_term(std::move(factors), reduce_vec(k * sum.coeffs[w].diagonal(), p));
          }
        } else {
          std::vector<Element> cls;
          for (std::size_t t = 0; t < hat.size(); ++t) {
            ZpVector v = reduce_vec(k * hat[t], p);
            if ((v.array() == 0).all()) continue;
            decode_tuple(t, ar, s, cls);
            std::vector<int> factors;
            for (int a = 0; a < ar; ++a) factors.push_back(indicator(nd.children[a], cls[a]));
            add_term(std::move(factors), v);
          }
        }
        break;
      }
    }
  }
  std::string five = "AND(*)∘MOD(" + std::to_string(m) + ")∘MOD(" + std::to_string(p) + ")∘AND(*)∘SUMPC(" +
                     std::to_string(p) + "," + std::to_string(nu) + ")";
  Descent out;
  out.five_layer = b.build(b.add_sumpc(p, nu, wires, mats, reduce_vec(offset, p), rep.m_part(target)), five);
  out.m_part = collapse_5to3(out.five_layer, m, p, &ctx);
  CCircuit q = quotient(node, rep.class_of(target));
  out.result = apply_func({false, false, false, true}, {q, out.m_part}, m, p, &ctx);
  return out;
}

namespace {

long long least_prime_not_dividing(long long n) {
  for (long long q = 2;; ++q)
    if (is_prime(q) && n % q != 0) return q;
}

struct Level {
  FiniteAlgebra algebra;
  std::vector<int> from_a;  // projection A -> this level
  AlgProgram program;
  std::vector<std::vector<Element>> values;  // [node][input index]
};

std::vector<std::vector<Element>> node_tables(const AlgProgram& prog, const FiniteAlgebra& a) {
  std::size_t rows = std::size_t{1} << prog.n;
  std::vector<std::vector<Element>> out(prog.circuit.nodes.size(), std::vector<Element>(rows));
  std::vector<Element> args(prog.circuit.num_vars);
  for (std::size_t x = 0; x < rows; ++x) {
    for (const auto& in : prog.instructions) args[in.var] = (x >> in.bit & 1U) ? in.a1 : in.a0;
    auto v = eval_nodes(prog.circuit, a, args);
    for (std::size_t i = 0; i < v.size(); ++i) out[i][x] = v[i];
  }
  return out;
}

AlgProgram project_program(const AlgProgram& prog, const std::vector<int>& proj) {
  AlgProgram out = prog;
  out.circuit = map_constants(prog.circuit, proj);
  for (auto& in : out.instructions) {
    in.a0 = proj[in.a0];
    in.a1 = proj[in.a1];
  }
  out.accepting.clear();
  return out;
}

TruthTable indicator_table(const std::vector<Element>& values, Element t) {
  TruthTable out(values.size());
  for (std::size_t x = 0; x < values.size(); ++x) out[x] = values[x] == t;
  return out;
}

}  // namespace

CompileResult compile_nilpotent(const AlgProgram& prog, const FiniteAlgebra& a, const AlgCircuit& malcev,
                                const CompileOptions& opts) {
  validate_program(prog, a);
  check_truth_table_bound(prog.n);
  if (!is_malcev(malcev, a)) throw HypothesisError("compile_nilpotent: circuit is not a Malcev term for " + a.name());
  CongruenceLattice lat = all_congruences(a);
  CongruenceAnalysis an(a, lat);
  if (!is_nilpotent(a)) throw HypothesisError("compile_nilpotent: " + a.name() + " is not nilpotent");
  Distinguished dist = distinguished_congruences(an);
  std::vector<long long> chars = an.charr_set(lat.bottom(), dist.kappa);
  CompileResult res;
  if (chars.size() > 1) {
    std::string list;
    for (long long q : chars) list += (list.empty() ? "" : ",") + std::to_string(q);
    throw HypothesisError("compile_nilpotent: charr{0,kappa} = {" + list + "} has more than one prime");
  }
  if (chars.size() == 1) {
    res.p = chars[0];
    if (opts.p && *opts.p != res.p)
      throw HypothesisError("compile_nilpotent: requested p = " + std::to_string(*opts.p) +
                            " but charr{0,kappa} = {" + std::to_string(res.p) + "}");
  } else {
    res.p = opts.p ? *opts.p : least_prime_not_dividing(a.size());
    if (!is_prime(res.p)) throw std::invalid_argument("compile_nilpotent: p must be prime");
  }
  const long long p = res.p;
  int sp = sigma_p(an, p);
  if (!an.is_supernilpotent_quotient(sp)) throw HypothesisError("compile_nilpotent: A/sigma_p is not supernilpotent");
  const long long m = pdiv(lat.element(sp).num_classes());
  if (m < 2) throw HypothesisError("compile_nilpotent: A/sigma_p is trivial, no MOD_m layer exists");
  if (m % p == 0) throw HypothesisError("compile_nilpotent: p divides m = " + std::to_string(m));
  res.m = m;

  // Lexicographically least maximal chain 0 = gamma_0 < ... < gamma_h = sigma_p.
  std::vector<int> chain{lat.bottom()};
  while (chain.back() != sp) {
    auto up = lat.upper_covers(chain.back());
    int next = -1;
    for (int u : up)
      if (lat.leq(u, sp) && (next < 0 || u < next)) next = u;
    chain.push_back(next);
  }
  for (int g : chain) res.chain.push_back(lat.element(g));
  const int h = static_cast<int>(chain.size()) - 1;

  std::vector<Level> levels(h + 1);
  std::vector<CentralRep> reps;
  levels[0].algebra = a;
  for (Element x = 0; x < a.size(); ++x) levels[0].from_a.push_back(x);
  for (int j = 0; j < h; ++j) {
    const Level& cur = levels[j];
    const Congruence& up = lat.element(chain[j + 1]);
    std::vector<int> labels(cur.algebra.size());
    for (Element x = 0; x < a.size(); ++x) labels[cur.from_a[x]] = up.cls[x];
    Congruence beta = Congruence::from_labels(labels);
    reps.push_back(central_representation(cur.algebra, beta, 0, map_constants(malcev, cur.from_a)));
    if (reps.back().p != p)
      throw HypothesisError("compile_nilpotent: cover " + std::to_string(j) + " of the chain has characteristic " +
                            std::to_string(reps.back().p) + ", expected " + std::to_string(p));
    levels[j + 1].algebra = reps.back().quotient.algebra;
    for (Element x = 0; x < a.size(); ++x)
      levels[j + 1].from_a.push_back(reps.back().quotient.projection[cur.from_a[x]]);
  }
  for (auto& lv : levels) {
    lv.program = project_program(prog, lv.from_a);
    lv.values = node_tables(lv.program, lv.algebra);
  }
  SupernilpotentBase top = supernilpotent_base(levels[h].algebra);
  if (top.pdiv != m) throw std::logic_error("compile_nilpotent: top quotient modulus mismatch");

  LoweringContext ctx(m, p, prog.n);
  const bool verify = prog.n <= opts.verify_n;
  std::map<std::tuple<int, int, int>, CCircuit> cache;
  auto check = [&](const CCircuit& c, const TruthTable& want, const char* what) {
    if (!verify) return;
    if (cc_truth_table(c) != want) throw std::logic_error(std::string("compile_nilpotent: ") + what + " is wrong");
  };

  std::function<CCircuit(int, int, Element)> indicator = [&](int j, int node, Element t) -> CCircuit {
    auto key = std::make_tuple(j, node, t);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    const Level& lv = levels[j];
    const auto& vals = lv.values[node];
    const CircuitNode& nd = lv.program.circuit.nodes[node];
    CCircuit out;
    bool all_same = std::all_of(vals.begin(), vals.end(), [&](Element v) { return v == vals[0]; });
    if (all_same) {
      out = constant_circuit(prog.n, vals[0] == t, m, p);
    } else if (nd.kind == CircuitNode::Kind::Var) {
      const Instruction* in = nullptr;
      for (const auto& i : lv.program.instructions)
        if (i.var == nd.value) in = &i;
      if (in->a0 != t && in->a1 != t)
        out = constant_circuit(prog.n, false, m, p);
      else
        out = literal_circuit(prog.n, in->bit, in->a1 == t, m, p);
    } else if (j == h) {
      CCBuilder b(prog.n);
      int g = supernilpotent_gate(b, top, vals, prog.n, t);
      out = b.build(b.add_mod(p, {1}, {{g, 1}}), shape_and_modm_modp(m, p));
    } else {
      const CentralRep& rep = reps[j];
      Descent d = descend_mod_beta(
          lv.program, node, t, rep, [&](int child, int cls) { return indicator(j + 1, child, cls); }, m, ctx);
      if (verify) {
        ZpVector want = rep.m_part(t);
        TruthTable mt(vals.size());
        for (std::size_t x = 0; x < vals.size(); ++x) mt[x] = rep.m_part(vals[x]) == want;
        check(d.five_layer, mt, "five-layer M-part circuit");
        check(d.m_part, mt, "collapsed M-part circuit");
      }
      if (opts.trace) {
        res.reports.push_back(make_report("collapse_5to3", d.five_layer, d.m_part, opts.verify_n, ctx.engine().max_terms_seen()));
        res.reports.back().pass = "descend level " + std::to_string(j) + " node " + std::to_string(node) + " target " +
                                  std::to_string(t);
      }
      out = std::move(d.result);
    }
    check(out, indicator_table(vals, t), "indicator circuit");
    cache.emplace(key, out);
    return out;
  };

  int root = prog.circuit.output;
  CCircuit acc;
  bool first = true;
  for (Element c : prog.accepting) {
    CCircuit one = indicator(0, root, c);
    acc = first ? one : apply_func({false, true, true, true}, {acc, one}, m, p, &ctx);
    first = false;
  }
  if (first) acc = constant_circuit(prog.n, false, m, p);
  check(acc, truth_table(prog, a), "final circuit");
  ShapeCheck sc = validate_shape(acc, shape_and_modm_modp(m, p));
  if (!sc.ok) throw std::logic_error("compile_nilpotent: output shape: " + sc.message);
  res.circuit = std::move(acc);
  res.cache_entries = cache.size();
  return res;
}

}  // namespace nudfa
