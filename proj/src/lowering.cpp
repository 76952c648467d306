#include "nudfa/lowering.hpp"

#include <algorithm>
#include <bit>
#include <optional>
#include <stdexcept>

#include "nudfa/common.hpp"
#include "nudfa/fieldpoly.hpp"

namespace nudfa {

std::string shape_modm_modp(long long m, long long p) {
  return "MOD(" + std::to_string(m) + ")∘MOD(" + std::to_string(p) + ")";
}
std::string shape_and_modm_modp(long long m, long long p) { return "AND(*)∘" + shape_modm_modp(m, p); }
std::string shape_modm_sump(long long m, long long p) {
  return "MOD(" + std::to_string(m) + ")∘SUMP(" + std::to_string(p) + ",1)";
}

namespace {

void require_shape(const CCircuit& c, const std::string& shape, const char* pass) {
  ShapeCheck r = validate_shape(c, shape);
  if (!r.ok) throw std::invalid_argument(std::string(pass) + ": input is not " + shape + ": " + r.message);
}

std::vector<long long> known_key(const ModSum& s, long long accept) {
  std::vector<long long> key{accept};
  for (const auto& [id, mu] : s.terms) {
    key.push_back(id);
    key.push_back(mu);
  }
  return key;
}

}  // namespace

ModSum LoweringContext::read(const CCircuit& c) {
  validate_ccircuit(c);
  ModSumEngine& e = engine_;
  long long p = e.p();
  if (c.n != e.n()) throw std::invalid_argument("lowering: circuit input count does not match");
  int total = c.n + c.num_gates();
  std::vector<std::optional<std::uint64_t>> mono(total);  // AND over input bits
  std::vector<ModSum> val(total);
  std::vector<char> pure(total, 0);  // value is a single atom with coefficient 1
  auto bit_value = [&](int j) {
    std::uint64_t mk = std::uint64_t{1} << j;
    return e.indicator(LinearForm{{{e.feature(mk), 1}}, -1});
  };
  for (int j = 0; j < c.n; ++j) {
    mono[j] = std::uint64_t{1} << j;
    val[j] = bit_value(j);
  }
  auto raw = [&](const CGate& g) {
    for (const Wire& w : g.inputs)
      if (!mono[w.source]) return false;
    return true;
  };
  for (int i = 0; i < c.num_gates(); ++i) {
    int id = c.n + i;
    const CGate& g = c.gates[i];
    switch (g.kind) {
      case GateKind::And:
        if (std::all_of(g.inputs.begin(), g.inputs.end(), [&](const Wire& w) { return w.source < c.n; })) {
          std::uint64_t mk = 0;
          for (const Wire& w : g.inputs) mk |= std::uint64_t{1} << w.source;
          mono[id] = mk;
          val[id] = mk == 0 ? e.constant(1) : e.indicator(LinearForm{{{e.feature(mk), 1}}, -1});
        } else {
          ModSum v = e.constant(1);
          for (const Wire& w : g.inputs) v = e.mul(v, val[w.source]);
          val[id] = v;
        }
        break;
      case GateKind::Or: {
        ModSum miss = e.constant(1);
        for (const Wire& w : g.inputs) miss = e.mul(miss, e.add(e.constant(1), e.scale(val[w.source], -1)));
        val[id] = e.add(e.constant(1), e.scale(miss, -1));
        break;
      }
      case GateKind::Mod:
        if (g.modulus == e.m() && raw(g)) {
          LinearForm l;
          for (const Wire& w : g.inputs) {
            std::uint64_t mk = *mono[w.source];
            if (mk == 0)
              l.constant += w.mult;
            else
              l.coef.push_back({e.feature(mk), w.mult});
          }
          ModSum v = e.indicator_in(l, g.accepting);
          val[id] = v;
          pure[id] = v.c0 == 0 && v.terms.size() == 1 && v.terms[0].second == 1;
        } else if (g.modulus == p) {
          bool all_pure = g.accepting.size() == 1;
          ModSum y = e.constant(0);
          std::vector<std::pair<int, long long>> atoms;
          for (const Wire& w : g.inputs) {
            y = e.add(y, e.scale(val[w.source], w.mult));
            if (pure[w.source])
              atoms.push_back({val[w.source].terms[0].first, w.mult % p});
            else
              all_pure = false;
          }
          if (all_pure) {
            std::sort(atoms.begin(), atoms.end());
            ModSum probe{0, atoms};
            auto it = known_.find(known_key(probe, g.accepting[0]));
            if (it != known_.end()) {
              val[id] = it->second;
              break;
            }
          }
          val[id] = e.chi(y, g.accepting);
        } else {
          throw std::invalid_argument("lowering: MOD(" + std::to_string(g.modulus) + ") gate does not fit m = " +
                                      std::to_string(e.m()) + ", p = " + std::to_string(p));
        }
        break;
      case GateKind::Sump:
      case GateKind::Sumpc: {
        if (g.modulus != p) throw std::invalid_argument("lowering: SUMP prime does not match p");
        std::vector<ModSum> y(g.nu);
        for (int r = 0; r < g.nu; ++r) y[r] = e.constant(g.offset(r));
        for (std::size_t k = 0; k < g.inputs.size(); ++k) {
          ZpVector col = reduce_vec(g.coeffs[k].rowwise().sum() * g.inputs[k].mult, p);
          for (int r = 0; r < g.nu; ++r)
            if (col(r)) y[r] = e.add(y[r], e.scale(val[g.inputs[k].source], col(r)));
        }
        if (g.kind == GateKind::Sump) {
          if (g.nu != 1 || id != c.output) throw std::invalid_argument("lowering: only a 1-dimensional SUMP output can be read");
          val[id] = y[0];
          break;
        }
        ModSum out = e.constant(1);
        for (int r = 0; r < g.nu; ++r) {
          ModSum d = y[r];
          d.c0 = mod(d.c0 - g.target(r), p);
          out = e.mul(out, e.add(e.constant(1), e.scale(e.pow(d, p - 1), -1)));
        }
        val[id] = out;
        break;
      }
    }
  }
  return val[c.output];
}

int LoweringContext::emit_bool(CCBuilder& b, const ModSum& s, bool and_layer) {
  int g = engine_.emit_mod_p(b, s, and_layer);
  known_.emplace(known_key(s, mod(1 - s.c0, engine_.p())), s);
  return g;
}

CCircuit and_sum_lower(const std::vector<ZpVector>& table, int n, long long p, int k) {
  if (k < 1) throw std::invalid_argument("and_sum_lower: dimension must be positive");
  if (table.size() != (std::size_t{1} << n)) throw std::invalid_argument("and_sum_lower: table size must be 2^n");
  std::map<std::uint64_t, ZpVector> coef;
  for (int r = 0; r < k; ++r) {
    std::vector<long long> t(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (table[i].size() != k) throw std::invalid_argument("and_sum_lower: wrong vector length");
      t[i] = table[i](r);
    }
    for (const auto& [mask, c] : multilinear_interpolate(t, n, p).terms) {
      auto [it, fresh] = coef.emplace(mask, ZpVector::Zero(k));
      it->second(r) = c;
    }
  }
  CCBuilder b(n);
  std::vector<Wire> wires;
  std::vector<ZpMatrix> mats;
  ZpVector offset = ZpVector::Zero(k);
  for (const auto& [mask, v] : coef) {
    if (mask == 0) {
      offset = v;
      continue;
    }
    std::vector<int> bits;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1U) bits.push_back(i);
    wires.push_back({b.add_and(bits), 1});
    mats.push_back(v.asDiagonal());
  }
  std::string shape = "AND(" + std::to_string(n) + ")∘SUMP(" + std::to_string(p) + "," + std::to_string(k) + ")";
  return b.build(b.add_sump(p, k, wires, mats, offset), shape);
}

CCircuit modm_andd_to_sum(const CCircuit& c, long long m, long long p) {
  require_shape(c, "MOD(" + std::to_string(m) + ")∘AND(*)", "modm_andd_to_sum");
  const CGate& out = c.gate(c.output);
  int d = static_cast<int>(out.inputs.size());
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) {
    total *= static_cast<std::size_t>(m);
    if (total > budget().monomials) throw BudgetError("modm_andd_to_sum: m^d exceeds the cap");
  }
  std::vector<const CGate*> mods;
  for (const Wire& w : out.inputs) mods.push_back(&c.gate(w.source));
  std::vector<long long> table(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    auto y = decode_point(idx, d, m);
    bool all = true;
    for (int i = 0; i < d && all; ++i)
      all = std::binary_search(mods[i]->accepting.begin(), mods[i]->accepting.end(), y[i]);
    table[idx] = all ? 1 : 0;
  }
  ZpqeForm f = zpqe_normal_form(table, d, m, p);
  CCBuilder b(c.n);
  std::vector<Wire> wires;
  std::vector<ZpMatrix> mats;
  long long offset = 0;
  for (const auto& t : f.terms) {
    std::vector<Wire> in;
    for (int i = 0; i < d; ++i)
      if (t.beta[i])
        for (const Wire& w : mods[i]->inputs) in.push_back({w.source, w.mult * t.beta[i]});
    if (std::all_of(t.beta.begin(), t.beta.end(), [](long long v) { return v == 0; })) {
      offset += t.mu;
      continue;
    }
    wires.push_back({b.add_mod(m, {mod(-t.u, m)}, in), 1});
    mats.push_back(ZpMatrix::Constant(1, 1, t.mu));
  }
  return b.build(b.add_sump(p, 1, wires, mats, ZpVector::Constant(1, offset)), shape_modm_sump(m, p));
}

CCircuit unmod(const CCircuit& c, long long m, long long p) {
  require_shape(c, shape_modm_modp(m, p), "unmod");
  LoweringContext ctx(m, p, c.n);
  ModSum s = ctx.read(c);
  CCBuilder b(c.n);
  return b.build(ctx.engine().emit_sump(b, s, false), shape_modm_sump(m, p));
}

CCircuit apply_func(const TruthTable& g, const std::vector<CCircuit>& fs, long long m, long long p,
                    LoweringContext* ctx) {
  int k = static_cast<int>(fs.size());
  if (k > 20 || g.size() != (std::size_t{1} << k)) throw std::invalid_argument("apply_func: table size must be 2^k");
  if (fs.empty()) throw std::invalid_argument("apply_func: need at least one argument circuit");
  int n = fs[0].n;
  bool and_layer = false;
  for (const auto& f : fs) {
    if (f.n != n) throw std::invalid_argument("apply_func: argument circuits disagree on n");
    if (validate_shape(f, shape_modm_modp(m, p)).ok) continue;
    require_shape(f, shape_and_modm_modp(m, p), "apply_func");
    and_layer = true;
  }
  std::unique_ptr<LoweringContext> own;
  if (!ctx) {
    own = std::make_unique<LoweringContext>(m, p, n);
    ctx = own.get();
  }
  std::vector<long long> gt(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) gt[i] = g[i] ? 1 : 0;
  MultilinearPoly gp = multilinear_interpolate(gt, k, p);
  std::vector<ModSum> args;
  for (const auto& f : fs) args.push_back(ctx->read(f));
  ModSum s = ctx->engine().eval_poly(gp, args);
  CCBuilder b(n);
  int out = ctx->emit_bool(b, s, and_layer);
  return b.build(out, and_layer ? shape_and_modm_modp(m, p) : shape_modm_modp(m, p));
}

CCircuit collapse_5to3(const CCircuit& c, long long m, long long p, LoweringContext* ctx) {
  require_shape(c, "AND(*)∘MOD(" + std::to_string(m) + ")∘MOD(" + std::to_string(p) + ")∘AND(*)∘SUMPC(" +
                       std::to_string(p) + ",*)",
                "collapse_5to3");
  std::unique_ptr<LoweringContext> own;
  if (!ctx) {
    own = std::make_unique<LoweringContext>(m, p, c.n);
    ctx = own.get();
  }
  ModSum s = ctx->read(c);
  CCBuilder b(c.n);
  return b.build(ctx->emit_bool(b, s, true), shape_and_modm_modp(m, p));
}

std::pair<ZpMatrix, ZpVector> compose_affine(const ZpMatrix& a1, const ZpVector& b1, const ZpMatrix& a2,
                                             const ZpVector& b2, long long p) {
  if (a2.cols() != a1.rows() || b1.size() != a1.rows() || b2.size() != a2.rows())
    throw std::invalid_argument("compose_affine: dimension mismatch");
  ZpMatrix a = reduce(a2 * a1, p);
  ZpVector b = reduce_vec(a2 * b1 + b2, p);
  return {a, b};
}

namespace {

std::vector<long long> numeric_table(const CCircuit& c) {
  std::vector<long long> t;
  if (c.gate(c.output).kind == GateKind::Sump) {
    for (const auto& v : cc_vector_table(c)) {
      if (v.size() != 1) throw std::invalid_argument("equivalent: vector output of dimension > 1");
      t.push_back(v(0));
    }
  } else {
    for (bool x : cc_truth_table(c)) t.push_back(x ? 1 : 0);
  }
  return t;
}

}  // namespace

bool equivalent(const CCircuit& a, const CCircuit& b) {
  if (a.n != b.n) return false;
  return numeric_table(a) == numeric_table(b);
}

PassReport make_report(const std::string& pass, const CCircuit& in, const CCircuit& out, int verify_n,
                       std::size_t max_terms) {
  PassReport r;
  r.pass = pass;
  r.input_shape = in.declared_shape;
  r.output_shape = out.declared_shape;
  r.input_size = cc_size(in);
  r.output_size = cc_size(out);
  r.max_terms = max_terms;
  if (in.n <= verify_n) {
    r.checked = true;
    r.verified = equivalent(in, out) && validate_shape(out, out.declared_shape).ok;
  }
  return r;
}

PassReport make_report(const std::string& pass, const std::vector<const CCircuit*>& in, const CCircuit& out,
                       const TruthTable* expected, int verify_n, std::size_t max_terms) {
  PassReport r;
  r.pass = pass;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (i) r.input_shape += ", ";
    r.input_shape += in[i]->declared_shape;
    r.input_size += cc_size(*in[i]);
  }
  r.output_shape = out.declared_shape;
  r.output_size = cc_size(out);
  r.max_terms = max_terms;
  if (expected && out.n <= verify_n) {
    r.checked = true;
    r.verified = cc_truth_table(out) == *expected && validate_shape(out, out.declared_shape).ok;
  }
  return r;
}

}  // namespace nudfa
