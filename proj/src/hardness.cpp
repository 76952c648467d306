#include "nudfa/hardness.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <sstream>

#include "nudfa/common.hpp"

namespace nudfa {

AlgProgram cnf_to_lattice_program(const Cnf& phi, const FiniteAlgebra& lattice) {
  if (lattice.size() != 2) throw std::invalid_argument("cnf_to_lattice_program: need the two-element lattice");
  const int op_and = lattice.op_index("and"), op_or = lattice.op_index("or");
  const int n = phi.n;
  CircuitBuilder b(2 * n);
  int conj = -1;
  for (const auto& clause : phi.clauses) {
    int disj = -1;
    for (int lit : clause) {
      int v = std::abs(lit) - 1;
      if (lit == 0 || v >= n) throw std::invalid_argument("cnf_to_lattice_program: literal out of range");
      int x = b.var(lit > 0 ? v : n + v);
      disj = disj < 0 ? x : b.gate(op_or, {disj, x});
    }
    if (disj < 0) disj = b.constant(0);
    conj = conj < 0 ? disj : b.gate(op_and, {conj, disj});
  }
  if (conj < 0) conj = b.constant(1);
  AlgProgram prog;
  prog.circuit = b.build(conj);
  prog.n = n;
  for (int i = 0; i < n; ++i) prog.instructions.push_back({i, i, 0, 1});
  for (int i = 0; i < n; ++i) prog.instructions.push_back({n + i, i, 1, 0});
  prog.accepting = {1};
  return prog;
}

namespace {

std::vector<Element> range_of(const std::vector<Element>& f) {
  std::vector<Element> r(f.begin(), f.end());
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

bool contains(const std::vector<Element>& sorted, Element x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

bool maps_into(const std::vector<Element>& f, const Congruence& from, const Congruence& to) {
  int n = from.size();
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      if (from.related(x, y) && !to.related(f[x], f[y])) return false;
  return true;
}

// Shared state for the searches: lattice, commutator cache and unary clone.
struct Context {
  const FiniteAlgebra& a;
  const AlgCircuit& malcev;
  CongruenceLattice lat;
  CongruenceAnalysis an;
  UnaryClone clone;
  std::vector<Element> dtab;  // Malcev table, index (x n + y) n + z

  Context(const FiniteAlgebra& alg, const AlgCircuit& d, CongruenceLattice l)
      : a(alg), malcev(d), lat(std::move(l)), an(a, lat), clone(unary_polynomial_clone(a)) {
    int n = a.size();
    dtab.resize(static_cast<std::size_t>(n) * n * n);
    std::vector<Element> args(3);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) {
          args = {x, y, z};
          dtab[(static_cast<std::size_t>(x) * n + y) * n + z] = eval_circuit(malcev, a, args);
        }
  }
  Element d(Element x, Element y, Element z) const {
    int n = a.size();
    return dtab[(static_cast<std::size_t>(x) * n + y) * n + z];
  }
  long long chr(const Congruence& lo, const Congruence& hi) {
    return an.characteristic(lat.index_of(lo), lat.index_of(hi)).characteristic;
  }
};

// Builds unary circuits in parallel with their tables.
class UnaryBuilder {
 public:
  UnaryBuilder(const Context& ctx) : ctx_(ctx), b_(1) {}
  int x() { return b_.var(0); }
  int constant(Element e) { return b_.constant(e); }
  int apply(const AlgCircuit& f, int arg) { return b_.inline_circuit(f, {arg}); }
  int d(int x, int y, int z) { return b_.inline_circuit(ctx_.malcev, {x, y, z}); }
  UnaryPoly finish(int out) {
    UnaryPoly r;
    r.circuit = b_.build(out);
    int n = ctx_.a.size();
    r.table.resize(n);
    for (Element v = 0; v < n; ++v) {
      std::vector<Element> arg{v};
      r.table[v] = eval_circuit(r.circuit, ctx_.a, arg);
    }
    return r;
  }

 private:
  const Context& ctx_;
  CircuitBuilder b_;
};

UnaryPoly clone_poly(const UnaryClone& clone, int i) { return {clone.table(i), clone.witness(i)}; }

UnaryPoly idempotent_of(const MinimalSet& m, const char* what) {
  if (!m.idempotent || !m.idempotent_circuit)
    throw HypothesisError(std::string("beta-interpolation: no idempotent polynomial onto ") + what);
  return {*m.idempotent, *m.idempotent_circuit};
}

BetaIntConfig configure(Context& ctx, const Congruence& alpha, const Congruence& alpha_minus, const Congruence& beta,
                        Element c, Element d, Element e, Element target,
                        const std::optional<std::vector<Element>>& h_table = std::nullopt) {
  const FiniteAlgebra& A = ctx.a;
  const int n = A.size();
  for (Element x : {c, d, e, target})
    if (x < 0 || x >= n) throw std::invalid_argument("beta-interpolation: element out of range");
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw HypothesisError("beta-interpolation: " + what);
  };
  if (!is_malcev(ctx.malcev, A)) throw std::invalid_argument("beta-interpolation: circuit is not a Malcev term");
  need(is_nilpotent(A), "algebra is not nilpotent");
  auto ia = ctx.lat.find(alpha), im = ctx.lat.find(alpha_minus), ib = ctx.lat.find(beta);
  need(ia && im && ib, "alpha, alpha^- and beta must be congruences");
  auto sub = ctx.lat.unique_subcover(*ia);
  need(sub.has_value(), "alpha is not join-irreducible");
  need(*sub == *im, "alpha^- is not the unique subcover of alpha");
  need(ctx.lat.covers(*ib, *im), "beta is not a subcover of alpha^-");

  BetaIntConfig cfg;
  cfg.algebra = A;
  cfg.malcev = ctx.malcev;
  cfg.alpha = alpha;
  cfg.alpha_minus = alpha_minus;
  cfg.beta = beta;
  cfg.c = c, cfg.d = d, cfg.e = e, cfg.a = target;
  cfg.p = ctx.chr(beta, alpha_minus);
  cfg.q = ctx.chr(alpha_minus, alpha);
  need(cfg.p != cfg.q, "char(beta, alpha^-) equals char(alpha^-, alpha)");
  need(alpha.related(c, d) && !alpha_minus.related(c, d), "(c, d) is not in alpha - alpha^-");
  need(alpha_minus.related(e, target) && !beta.related(e, target), "(e, a) is not in alpha^- - beta");

  // g and U
  auto us = minimal_sets(A, ctx.clone, alpha_minus, alpha);
  need(!us.empty(), "no (alpha^-, alpha)-minimal set");
  int gi = -1, ui = -1;
  for (int i = 0; i < ctx.clone.size() && gi < 0; ++i) {
    const auto& t = ctx.clone.table(i);
    if (!alpha.related(t[c], t[d]) || alpha_minus.related(t[c], t[d])) continue;
    auto r = range_of(t);
    for (std::size_t k = 0; k < us.size(); ++k)
      if (std::includes(us[k].elements.begin(), us[k].elements.end(), r.begin(), r.end())) {
        gi = i, ui = static_cast<int>(k);
        break;
      }
  }
  need(gi >= 0, "no unary polynomial projects (c, d) into a minimal set");
  cfg.g = clone_poly(ctx.clone, gi);
  cfg.u = us[ui];
  cfg.e_u = idempotent_of(cfg.u, "U");
  const auto& eu = cfg.e_u.table;
  const Element c0 = cfg.g.table[c], c1 = cfg.g.table[d];
  auto oplus = [&](Element x, Element y) { return eu[ctx.d(x, c0, y)]; };

  // cyclic subgroup generated by c_1 modulo alpha^-
  const int q = static_cast<int>(cfg.q);
  cfg.cyc = {c0, c1};
  while (static_cast<int>(cfg.cyc.size()) <= q) cfg.cyc.push_back(oplus(cfg.cyc.back(), c1));
  for (int j = 1; j < q; ++j) need(!alpha_minus.related(cfg.cyc[j], c0), "c_1 has order below q modulo alpha^-");
  need(alpha_minus.related(cfg.cyc[q], c0), "c_1 does not have order q modulo alpha^-");
  cfg.cyc.pop_back();

  // V and h
  cfg.v = minimal_set_through(A, ctx.clone, beta, alpha_minus, e);
  cfg.e_v = idempotent_of(cfg.v, "V");
  const auto& ev = cfg.e_v.table;
  std::vector<Element> u_elems = cfg.u.elements;
  // `separating` asks for (h(c_0), h(c_1)) in alpha^- - beta; the adjusted h
  // need not keep that one, and b only uses the others.
  auto satisfies_h = [&](const std::vector<Element>& t, bool separating = true) {
    for (Element x = 0; x < n; ++x)
      if (!contains(cfg.v.elements, t[x])) return false;
    if (!beta.related(t[c0], e)) return false;
    if (separating && (!alpha_minus.related(t[c0], t[c1]) || beta.related(t[c0], t[c1]))) return false;
    if (!maps_into(t, alpha, alpha_minus)) return false;
    for (Element x : u_elems)
      for (Element y : u_elems)
        if (alpha_minus.related(x, y) && !beta.related(t[x], t[y])) return false;
    return true;
  };
  int hi = -1;
  if (h_table) {
    auto found = ctx.clone.find(*h_table);
    need(found.has_value(), "given h is not a unary polynomial");
    need(satisfies_h(*h_table), "given h lacks a required property");
    hi = *found;
  }
  for (int i = 0; i < ctx.clone.size() && hi < 0; ++i)
    if (satisfies_h(ctx.clone.table(i))) hi = i;
  need(hi >= 0, "no unary polynomial h with the required properties");
  cfg.h = clone_poly(ctx.clone, hi);

  auto plus = [&](Element x, Element y) { return ev[ctx.d(x, e, y)]; };
  auto minus = [&](Element x, Element y) { return ev[ctx.d(x, y, e)]; };
  auto sum_h = [&](const std::vector<Element>& h) {
    Element acc = h[cfg.cyc[0]];
    for (int j = 1; j < q; ++j) acc = plus(acc, h[cfg.cyc[j]]);
    return acc;
  };
  Element s = sum_h(cfg.h.table);
  if (beta.related(s, e)) {
    // h'(x) = h(x (+) c_1) - h(c_1)
    UnaryBuilder ub(ctx);
    int x = ub.x();
    int shifted = ub.apply(cfg.e_u.circuit, ub.d(x, ub.constant(c0), ub.constant(c1)));
    int hx = ub.apply(cfg.h.circuit, shifted);
    int hc1 = ub.apply(cfg.h.circuit, ub.constant(c1));
    UnaryPoly h2 = ub.finish(ub.apply(cfg.e_v.circuit, ub.d(hx, hc1, ub.constant(e))));
    need(satisfies_h(h2.table, false), "adjusted h lost a required property");
    Element qh = cfg.h.table[c1];
    for (int j = 1; j < q; ++j) qh = plus(qh, cfg.h.table[c1]);
    Element s2 = sum_h(h2.table);
    if (!beta.related(s2, minus(s, qh)))
      throw std::logic_error("beta-interpolation: sum identity for the adjusted h failed");
    cfg.h = std::move(h2);
    cfg.h_adjusted = true;
    s = s2;
  }
  need(!beta.related(s, e), "sum of h(c_j) stays in e/beta after adjustment");
  cfg.a_prime = s;

  // b(x) = a' - sum_j h(j x)
  {
    UnaryBuilder ub(ctx);
    int x = ub.x();
    int cz = ub.constant(c0), ee = ub.constant(e);
    int jx = cz, acc = -1;
    for (int j = 0; j < q; ++j) {
      if (j == 1) jx = x;
      if (j > 1) jx = ub.apply(cfg.e_u.circuit, ub.d(jx, cz, x));
      int hj = ub.apply(cfg.h.circuit, jx);
      acc = acc < 0 ? hj : ub.apply(cfg.e_v.circuit, ub.d(acc, ee, hj));
    }
    cfg.b = ub.finish(ub.apply(cfg.e_v.circuit, ub.d(ub.constant(cfg.a_prime), acc, ee)));
  }
  for (Element x : u_elems)
    for (int j = 0; j < q; ++j) {
      if (!alpha_minus.related(x, cfg.cyc[j])) continue;
      Element want = j == 0 ? cfg.a_prime : e;
      if (!beta.related(cfg.b.table[x], want)) throw std::logic_error("beta-interpolation: b is not a spike on c_0");
    }

  // g'
  int gp = -1;
  for (int i = 0; i < ctx.clone.size(); ++i) {
    const auto& t = ctx.clone.table(i);
    if (beta.related(t[cfg.a_prime], target) && beta.related(t[e], e)) {
      gp = i;
      break;
    }
  }
  need(gp >= 0, "no unary polynomial maps (a', e) to (a, e) modulo beta");
  cfg.g_prime = clone_poly(ctx.clone, gp);
  return cfg;
}

}  // namespace

BetaIntConfig make_beta_int_config(const FiniteAlgebra& a, const AlgCircuit& malcev, const Congruence& alpha,
                                   const Congruence& alpha_minus, const Congruence& beta, Element c, Element d,
                                   Element e, Element target, const std::optional<std::vector<Element>>& h_table) {
  Context ctx(a, malcev, all_congruences(a));
  return configure(ctx, alpha, alpha_minus, beta, c, d, e, target, h_table);
}

std::optional<BetaIntConfig> find_beta_int_config(const FiniteAlgebra& a, const AlgCircuit& malcev) {
  if (!is_nilpotent(a)) return std::nullopt;
  Context ctx(a, malcev, all_congruences(a));
  const auto& lat = ctx.lat;
  const int n = a.size();
  for (int ia = 0; ia < lat.size(); ++ia) {
    auto im = lat.unique_subcover(ia);
    if (!im) continue;
    for (int ib : lat.lower_covers(*im)) {
      const Congruence &al = lat.element(ia), &am = lat.element(*im), &be = lat.element(ib);
      if (ctx.chr(be, am) == ctx.chr(am, al)) continue;
      std::optional<std::pair<Element, Element>> cd;
      for (Element c = 0; c < n && !cd; ++c)
        for (Element d = 0; d < n; ++d)
          if (al.related(c, d) && !am.related(c, d)) {
            cd = {c, d};
            break;
          }
      for (Element e = 0; e < n; ++e)
        for (Element t = 0; t < n; ++t) {
          if (!am.related(e, t) || be.related(e, t)) continue;
          try {
            return configure(ctx, al, am, be, cd->first, cd->second, e, t);
          } catch (const HypothesisError&) {
          }
          break;  // one target per e
        }
    }
  }
  return std::nullopt;
}

AlgCircuit beta_interpolate(const BetaIntConfig& cfg, const std::vector<bool>& f) {
  int s = 0;
  while ((std::size_t{1} << s) < f.size()) ++s;
  if ((std::size_t{1} << s) != f.size()) throw std::invalid_argument("beta_interpolate: table size must be 2^s");
  if (s > 16) throw std::invalid_argument("beta_interpolate: too many inputs");
  const FiniteAlgebra& A = cfg.algebra;
  CircuitBuilder b(s);
  int out;
  if (s == 0) {
    out = b.constant(f[0] ? cfg.a : cfg.e);
  } else {
    const long long q = cfg.q, p = cfg.p;
    std::size_t total = 1;
    for (int i = 0; i < s; ++i) total *= static_cast<std::size_t>(q);
    std::vector<long long> table(total, 0);
    for (std::size_t idx = 0; idx < f.size(); ++idx) {
      if (!f[idx]) continue;
      std::size_t t = 0;  // first coordinate most significant
      for (int i = 0; i < s; ++i) t = t * q + ((idx >> i) & 1);
      table[t] = 1;
    }
    ZpqeForm form = zpqe_normal_form(table, s, q, p);

    const Element c0 = cfg.cyc[0];
    int cz = b.constant(c0), ee = b.constant(cfg.e);
    auto d = [&](int x, int y, int z) { return b.inline_circuit(cfg.malcev, {x, y, z}); };
    auto oplus = [&](int x, int y) { return b.inline_circuit(cfg.e_u.circuit, {d(x, cz, y)}); };
    auto plus = [&](int x, int y) { return b.inline_circuit(cfg.e_v.circuit, {d(x, ee, y)}); };
    std::vector<std::vector<int>> mult(s);  // mult[i][k] = k * g(x_i)
    for (int i = 0; i < s; ++i) {
      int gx = b.inline_circuit(cfg.g.circuit, {b.var(i)});
      mult[i] = {cz, gx};
      for (long long k = 2; k < q; ++k) mult[i].push_back(oplus(mult[i].back(), gx));
    }
    int acc = ee;
    for (const auto& t : form.terms) {
      int arg = cz;
      for (int i = 0; i < s; ++i)
        if (t.beta[i] != 0) arg = oplus(arg, mult[i][t.beta[i]]);
      if (t.u != 0) arg = oplus(arg, b.constant(cfg.cyc[t.u]));
      int val = b.inline_circuit(cfg.b.circuit, {arg});
      for (long long k = 0; k < t.mu; ++k) acc = plus(acc, val);
    }
    out = b.inline_circuit(cfg.g_prime.circuit, {acc});
  }
  AlgCircuit circ = b.build(out);
  std::vector<Element> args(s);
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    for (int i = 0; i < s; ++i) args[i] = ((idx >> i) & 1) ? cfg.d : cfg.c;
    Element want = f[idx] ? cfg.a : cfg.e;
    if (!cfg.beta.related(eval_circuit(circ, A, args), want))
      throw std::logic_error("beta_interpolate: result fails the pointwise check");
  }
  return circ;
}

AlgCircuit field_poly_circuit(const BetaIntConfig& cfg, const MultilinearPoly& w) {
  if (w.p != cfg.p) throw std::invalid_argument("field_poly_circuit: polynomial field must be GF(char(beta, alpha^-))");
  const bool wrap = std::binary_search(cfg.v.elements.begin(), cfg.v.elements.end(), cfg.a);
  CircuitBuilder b(w.n);
  int ee = b.constant(cfg.e);
  auto wrap_v = [&](int x) { return wrap ? b.inline_circuit(cfg.e_v.circuit, {x}) : x; };
  auto plus = [&](int x, int y) { return wrap_v(b.inline_circuit(cfg.malcev, {x, ee, y})); };
  std::map<int, AlgCircuit> by_degree;  // the AND pattern only depends on the degree
  int acc = ee;
  for (const auto& [mask, coef] : w.terms) {
    int s = std::popcount(mask);
    auto it = by_degree.find(s);
    if (it == by_degree.end()) {
      std::vector<bool> f(std::size_t{1} << s, false);
      f.back() = true;
      it = by_degree.emplace(s, beta_interpolate(cfg, f)).first;
    }
    std::vector<int> args;
    for (int i = 0; i < w.n; ++i)
      if ((mask >> i) & 1) args.push_back(b.var(i));
    int term = wrap_v(b.inline_circuit(it->second, args));
    for (long long k = 0; k < mod(coef, w.p); ++k) acc = plus(acc, term);
  }
  return b.build(acc);
}

namespace {

struct Search {
  TwoPrimeSearch out;
  bool fail(const std::string& why) {
    out.failure = why;
    return false;
  }
  void ok(const std::string& fact) { out.checked.push_back(fact); }
};

std::string idx_str(const CongruenceLattice& lat, int i) { return to_string(lat.element(i)); }

}  // namespace

TwoPrimeSearch find_two_prime_witness(const FiniteAlgebra& a, const CongruenceLattice& lat, const AlgCircuit& malcev) {
  Search S;
  if (!is_nilpotent(a)) {
    S.fail("algebra is not nilpotent");
    return S.out;
  }
  Context ctx(a, malcev, lat);
  CongruenceAnalysis& an = ctx.an;
  int sr = an.supernilpotent_rank();
  if (sr != 2) {
    S.fail("supernilpotent rank is " + std::to_string(sr) + ", need 2");
    return S.out;
  }
  S.ok("supernilpotent rank 2");
  TwoPrimeWitness w;
  w.kappa = distinguished_congruences(an).kappa;
  auto chr = [&](int lo, int hi) { return an.characteristic(lo, hi).characteristic; };

  // two subcovers of kappa with distinct characteristics
  auto subs = lat.lower_covers(w.kappa);
  std::optional<std::pair<int, int>> gam;
  for (std::size_t i = 0; i < subs.size() && !gam; ++i)
    for (std::size_t j = i + 1; j < subs.size(); ++j)
      if (chr(subs[i], w.kappa) != chr(subs[j], w.kappa)) {
        gam = {subs[i], subs[j]};
        break;
      }
  if (!gam) {
    std::set<long long> primes;
    for (int g : subs) primes.insert(chr(g, w.kappa));
    S.fail("kappa = " + idx_str(lat, w.kappa) + " has " + std::to_string(subs.size()) + " subcover(s) and " +
           std::to_string(primes.size()) + " prime(s) below it; need two subcovers with distinct characteristics");
    return S.out;
  }
  w.gamma[0] = gam->first, w.gamma[1] = gam->second;
  for (int i = 0; i < 2; ++i) w.q[i] = chr(w.gamma[i], w.kappa);
  S.ok("subcovers gamma_0, gamma_1 of kappa with characteristics " + std::to_string(w.q[0]) + ", " +
       std::to_string(w.q[1]));
  if (lat.meet(w.gamma[0], w.gamma[1]) != lat.bottom()) {
    S.fail("gamma_0 meet gamma_1 is not the bottom congruence (a proper quotient carries the configuration)");
    return S.out;
  }
  if (lat.atoms().size() != 2) {
    S.fail("gamma_0, gamma_1 are not the only atoms (a proper quotient carries the configuration)");
    return S.out;
  }
  S.ok("gamma_0, gamma_1 are the only atoms");

  for (int i = 0; i < 2; ++i) {
    std::string tag = "_" + std::to_string(i);
    // phi_i: maximal above gamma_i, not above kappa
    int phi = -1;
    for (int x = 0; x < lat.size() && phi < 0; ++x) {
      if (!lat.leq(w.gamma[i], x) || lat.leq(w.kappa, x)) continue;
      bool maximal = true;
      for (int y : lat.upper_covers(x)) maximal = maximal && lat.leq(w.kappa, y);
      if (maximal) phi = x;
    }
    if (phi < 0) {
      S.fail("no maximal congruence above gamma" + tag + " avoiding kappa");
      return S.out;
    }
    auto plus = lat.unique_cover(phi);
    if (!plus) {
      S.fail("phi" + tag + " is not meet-irreducible");
      return S.out;
    }
    w.phi[i] = phi, w.phi_plus[i] = *plus;
    if (chr(phi, *plus) != w.q[i]) {
      S.fail("char(phi" + tag + ", phi" + tag + "^+) differs from q" + tag);
      return S.out;
    }
    S.ok("phi" + tag + " maximal above gamma" + tag + " avoiding kappa, meet-irreducible");
    // psi_i: cover of phi_i^+ with a different characteristic
    int psi = -1;
    for (int y : lat.upper_covers(*plus))
      if (chr(*plus, y) != w.q[i]) {
        psi = y;
        break;
      }
    if (psi < 0) {
      S.fail("no cover psi" + tag + " of phi" + tag + "^+ with characteristic other than q" + tag);
      return S.out;
    }
    w.psi[i] = psi;
    w.p[i] = chr(*plus, psi);
    // alpha_i: minimal below psi_i, not below phi_i^+
    int al = -1;
    for (int x = 0; x < lat.size() && al < 0; ++x) {
      if (!lat.leq(x, psi) || lat.leq(x, *plus)) continue;
      bool minimal = true;
      for (int y : lat.lower_covers(x)) minimal = minimal && lat.leq(y, *plus);
      if (minimal) al = x;
    }
    auto am = al < 0 ? std::nullopt : lat.unique_subcover(al);
    if (!am) {
      S.fail("no join-irreducible alpha" + tag + " below psi" + tag + " outside phi" + tag + "^+");
      return S.out;
    }
    w.alpha[i] = al, w.alpha_minus[i] = *am;
    int pa = lat.meet(phi, al);
    if (!lat.covers(pa, *am) || !lat.covers(*am, al)) {
      S.fail("phi" + tag + " meet alpha" + tag + " < alpha" + tag + "^- < alpha" + tag + " is not a pair of covers");
      return S.out;
    }
    if (chr(pa, *am) != w.q[i] || chr(*am, al) != w.p[i]) {
      S.fail("characteristics of phi" + tag + " meet alpha" + tag + " < alpha" + tag + "^- < alpha" + tag +
             " are not (q" + tag + ", p" + tag + ")");
      return S.out;
    }
    S.ok("alpha" + tag + " join-irreducible; covers phi meet alpha < alpha^- < alpha with characteristics q, p");
    bool case0 = pa == lat.bottom() && *am == w.gamma[1 - i];
    bool case1 = lat.leq(w.gamma[i], pa) && lat.leq(w.kappa, *am);
    if (!case0 && !case1) {
      S.fail("alpha" + tag + "^- is neither gamma_" + std::to_string(1 - i) + " (with trivial meet) nor above kappa");
      return S.out;
    }
    auto ch = an.charr_set(w.gamma[i], pa);
    if (std::find(ch.begin(), ch.end(), w.q[i]) != ch.end()) {
      S.fail("q" + tag + " occurs between gamma" + tag + " and phi" + tag + " meet alpha" + tag);
      return S.out;
    }
    S.ok("q" + tag + " does not occur between gamma" + tag + " and phi" + tag + " meet alpha" + tag);
  }

  // common e with minimal sets V_0, V_1
  const int n = a.size();
  std::string last = "no element e admits the minimal sets";
  for (Element e = 0; e < n; ++e) {
    TwoPrimeWitness cand = w;
    cand.e = e;
    bool good = true;
    for (int i = 0; i < 2 && good; ++i) {
      const Congruence& beta = lat.element(lat.meet(w.phi[i], w.alpha_minus[i]));
      const Congruence& am = lat.element(w.alpha_minus[i]);
      try {
        cand.v[i] = minimal_set_through(a, ctx.clone, beta, am, e);
      } catch (const HypothesisError& err) {
        last = std::string("minimal set V_") + std::to_string(i) + " through e = " + std::to_string(e) + ": " + err.what();
        good = false;
      }
    }
    if (!good) continue;
    std::vector<Element> inter;
    std::set_intersection(cand.v[0].elements.begin(), cand.v[0].elements.end(), cand.v[1].elements.begin(),
                          cand.v[1].elements.end(), std::back_inserter(inter));
    if (inter != std::vector<Element>{e}) {
      last = "V_0 meet V_1 is not {e} for e = " + std::to_string(e);
      continue;
    }
    for (int i = 0; i < 2 && good; ++i) {
      const Congruence& am = lat.element(w.alpha_minus[i]);
      const Congruence& beta = lat.element(lat.meet(w.phi[i], w.alpha_minus[i]));
      const Congruence& other = lat.element(w.gamma[1 - i]);
      for (Element x : cand.v[i].elements)
        for (Element y : cand.v[i].elements) {
          if (am.related(x, y) && !other.related(x, y)) good = false;
          if (x != y && beta.related(x, y)) good = false;
        }
      if (!good) last = "alpha^- restricted to V_" + std::to_string(i) + " is not inside gamma_" + std::to_string(1 - i) +
                        " or beta restricted to it is not trivial";
    }
    if (!good) continue;
    for (int i = 0; i < 2 && good; ++i) {
      const Congruence& al = lat.element(w.alpha[i]);
      const Congruence& am = lat.element(w.alpha_minus[i]);
      const Congruence& beta = lat.element(lat.meet(w.phi[i], w.alpha_minus[i]));
      std::optional<std::pair<Element, Element>> cd;
      for (Element c = 0; c < n && !cd; ++c)
        for (Element d = 0; d < n; ++d)
          if (al.related(c, d) && !am.related(c, d)) {
            cd = {c, d};
            break;
          }
      std::optional<Element> ai;
      for (Element x : cand.v[i].elements)
        if (am.related(x, e) && !beta.related(x, e)) {
          ai = x;
          break;
        }
      if (!ai) {
        last = "V_" + std::to_string(i) + " has no element of e/alpha^- outside e/beta";
        good = false;
        break;
      }
      cand.c[i] = cd->first, cand.d[i] = cd->second, cand.a[i] = *ai;
      try {
        cand.configs.push_back(configure(ctx, al, am, beta, cand.c[i], cand.d[i], e, *ai));
      } catch (const HypothesisError& err) {
        last = std::string("interpolation data for prime ") + std::to_string(w.q[i]) + ": " + err.what();
        good = false;
      }
      if (good && cand.configs.back().v.elements != cand.v[i].elements) {
        last = "interpolation chose a different minimal set V_" + std::to_string(i);
        good = false;
      }
    }
    if (!good) continue;
    S.ok("e = " + std::to_string(e) + ": V_0 meet V_1 = {e}, traces restricted as required");
    cand.checked = S.out.checked;
    S.out.witness = std::move(cand);
    return S.out;
  }
  S.fail(last);
  return S.out;
}

AlgProgram build_two_prime_program(const FiniteAlgebra& a, const TwoPrimeWitness& w, const Cnf& phi) {
  if (w.configs.size() != 2) throw std::invalid_argument("build_two_prime_program: witness is incomplete");
  Cnf f = phi.clauses.empty() || is_cnf3(phi) ? phi : to_cnf3(phi);
  const int n = f.n;
  const int l = static_cast<int>(f.clauses.size());
  AlgCircuit part[2];
  for (int i = 0; i < 2; ++i) {
    int nu = choose_nu(w.q[i], l);
    MultilinearPoly poly = pseudo_and(f, w.q[i], nu);
    part[i] = field_poly_circuit(w.configs[i], poly);
  }
  CircuitBuilder b(2 * n);
  std::vector<int> x0, x1;
  for (int j = 0; j < n; ++j) x0.push_back(b.var(j));
  for (int j = 0; j < n; ++j) x1.push_back(b.var(n + j));
  int p0 = b.inline_circuit(part[0], x0), p1 = b.inline_circuit(part[1], x1);
  int out = b.inline_circuit(w.configs[0].malcev, {p0, p1, b.constant(w.e)});
  AlgProgram prog;
  prog.circuit = b.build(out);
  prog.n = n;
  for (int j = 0; j < n; ++j) prog.instructions.push_back({j, j, w.c[0], w.d[0]});
  for (int j = 0; j < n; ++j) prog.instructions.push_back({n + j, j, w.c[1], w.d[1]});
  prog.accepting = {w.e};
  validate_program(prog, a);
  return prog;
}

}  // namespace nudfa
