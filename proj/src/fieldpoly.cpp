#include "nudfa/fieldpoly.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "nudfa/common.hpp"

namespace nudfa {

namespace {

void check_vars(int n) {
  if (n < 0 || n > 63) throw std::invalid_argument("multilinear polynomial: variable count must be in 0..63");
}

void check_prime(long long p) {
  if (!is_prime(p)) throw std::invalid_argument("field modulus must be prime");
}

}  // namespace

int MultilinearPoly::degree() const {
  int d = 0;
  for (const auto& [mask, c] : terms) d = std::max(d, std::popcount(mask));
  return d;
}

MultilinearPoly multilinear_interpolate(const std::vector<long long>& table, int n, long long p) {
  check_prime(p);
  if (n > budget().max_truth_table_inputs) throw BudgetError("multilinear_interpolate: too many variables");
  check_vars(n);
  std::size_t total = std::size_t{1} << n;
  if (table.size() != total) throw std::invalid_argument("multilinear_interpolate: table size must be 2^n");
  std::vector<long long> c(total);
  for (std::size_t i = 0; i < total; ++i) c[i] = mod(table[i], p);
  for (int i = 0; i < n; ++i)
    for (std::size_t mask = 0; mask < total; ++mask)
      if (mask >> i & 1U) c[mask] = mod(c[mask] - c[mask ^ (std::size_t{1} << i)], p);
  MultilinearPoly f{p, n, {}};
  for (std::size_t mask = 0; mask < total; ++mask)
    if (c[mask]) f.terms.emplace(mask, c[mask]);
  return f;
}

long long eval_poly(const MultilinearPoly& f, const std::vector<long long>& point) {
  if (static_cast<int>(point.size()) != f.n) throw std::invalid_argument("eval_poly: arity mismatch");
  long long s = 0;
  for (const auto& [mask, c] : f.terms) {
    long long t = c;
    for (int i = 0; i < f.n && t; ++i)
      if (mask >> i & 1U) t = t * mod(point[i], f.p) % f.p;
    s = (s + t) % f.p;
  }
  return s;
}

long long eval_poly_bits(const MultilinearPoly& f, std::uint64_t index) {
  long long s = 0;
  for (const auto& [mask, c] : f.terms)
    if ((mask & index) == mask) s += c;
  return s % f.p;
}

std::vector<long long> poly_table(const MultilinearPoly& f) {
  if (f.n > budget().max_truth_table_inputs) throw BudgetError("poly_table: too many variables");
  std::size_t total = std::size_t{1} << f.n;
  std::vector<long long> t(total, 0);
  for (const auto& [mask, c] : f.terms) t[mask] = c;
  // zeta transform: value at x = sum of coefficients of subsets of x
  for (int i = 0; i < f.n; ++i)
    for (std::size_t mask = 0; mask < total; ++mask)
      if (mask >> i & 1U) t[mask] = (t[mask] + t[mask ^ (std::size_t{1} << i)]) % f.p;
  return t;
}

MultilinearPoly poly_mul(const MultilinearPoly& a, const MultilinearPoly& b) {
  if (a.p != b.p || a.n != b.n) throw std::invalid_argument("poly_mul: mismatched polynomials");
  MultilinearPoly r{a.p, a.n, {}};
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) {
      long long& slot = r.terms[ma | mb];
      slot = (slot + ca * cb) % a.p;
      if (r.terms.size() > budget().monomials) throw BudgetError("poly_mul: monomial cap exceeded");
    }
  std::erase_if(r.terms, [](const auto& kv) { return kv.second == 0; });
  return r;
}

MultilinearPoly poly_add(const MultilinearPoly& a, const MultilinearPoly& b) {
  if (a.p != b.p || a.n != b.n) throw std::invalid_argument("poly_add: mismatched polynomials");
  MultilinearPoly r = a;
  for (const auto& [m, c] : b.terms) {
    long long& slot = r.terms[m];
    slot = (slot + c) % a.p;
  }
  std::erase_if(r.terms, [](const auto& kv) { return kv.second == 0; });
  return r;
}

MultilinearPoly poly_scale(const MultilinearPoly& a, long long c) {
  MultilinearPoly r{a.p, a.n, {}};
  c = mod(c, a.p);
  if (c == 0) return r;
  for (const auto& [m, v] : a.terms) r.terms.emplace(m, v * c % a.p);
  return r;
}

MultilinearPoly poly_const(long long p, int n, long long c) {
  MultilinearPoly r{p, n, {}};
  if (mod(c, p)) r.terms.emplace(0, mod(c, p));
  return r;
}

MultilinearPoly poly_var(long long p, int n, int i) {
  if (i < 0 || i >= n) throw std::invalid_argument("poly_var: index out of range");
  MultilinearPoly r{p, n, {}};
  r.terms.emplace(std::uint64_t{1} << i, 1);
  return r;
}

std::string to_string(const MultilinearPoly& f) {
  std::vector<std::pair<std::uint64_t, long long>> t(f.terms.begin(), f.terms.end());
  auto vars = [](std::uint64_t m) {
    std::vector<int> v;
    for (int i = 0; i < 64; ++i)
      if (m >> i & 1U) v.push_back(i);
    return v;
  };
  std::sort(t.begin(), t.end(), [&](const auto& x, const auto& y) {
    int dx = std::popcount(x.first), dy = std::popcount(y.first);
    if (dx != dy) return dx < dy;
    return vars(x.first) < vars(y.first);
  });
  if (t.empty()) return "0";
  std::ostringstream os;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k) os << " + ";
    auto v = vars(t[k].first);
    if (v.empty() || t[k].second != 1) {
      os << t[k].second;
      if (!v.empty()) os << '*';
    }
    for (std::size_t j = 0; j < v.size(); ++j) os << (j ? "*" : "") << 'x' << v[j] + 1;
  }
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

using Form = std::vector<long long>;  // s coefficients followed by the constant

void reduce_form(Form& f, long long m) {
  for (auto& v : f) v = mod(v, m);
}

// Adds mu * b(form) to `acc`, folding constant forms.
void add_term(std::map<Form, long long>& acc, Form form, long long mu, long long m, long long p) {
  reduce_form(form, m);
  bool constant = std::all_of(form.begin(), form.end() - 1, [](long long v) { return v == 0; });
  if (constant) {
    if (form.back() != 0) return;
    form.back() = 0;
  }
  long long& slot = acc[form];
  slot = mod(slot + mu, p);
}

// Scale so the first nonzero linear coefficient is 1 (valid for prime moduli).
Form normalise_prime(Form f, long long q) {
  for (std::size_t i = 0; i + 1 < f.size(); ++i)
    if (f[i] != 0) {
      long long inv = inv_mod(f[i], q);
      for (auto& v : f) v = v * inv % q;
      break;
    }
  return f;
}

// mu * b_j(forms) expanded into single-form indicators over Z_q.
void expand_prime(const std::vector<Form>& forms, long long mu, long long q, long long p, long long qinv,
                  std::map<Form, long long>& acc) {
  if (forms.size() == 1) {
    add_term(acc, forms[0], mu, q, p);
    return;
  }
  std::vector<Form> rest(forms.begin(), forms.end() - 2);
  const Form& y = forms[forms.size() - 2];
  const Form& z = forms.back();
  for (long long t = 0; t < q; ++t) {
    Form yz(y.size()), tz(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      yz[i] = mod(y[i] + t * z[i], q);
      tz[i] = mod(t * z[i], q);
    }
    auto with = rest;
    with.push_back(yz);
    expand_prime(with, mu * qinv % p, q, p, qinv, acc);
    auto minus = rest;
    minus.push_back(tz);
    expand_prime(minus, mod(-mu * qinv, p), q, p, qinv, acc);
  }
  auto last = rest;
  last.push_back(z);
  expand_prime(last, mu, q, p, qinv, acc);
}

ZpqeForm to_form(const std::map<Form, long long>& acc, int s, long long m, long long p) {
  ZpqeForm f;
  f.m = m;
  f.p = p;
  f.s = s;
  for (const auto& [form, mu] : acc) {
    if (mu == 0) continue;
    ZpqeTerm t;
    t.beta.assign(form.begin(), form.end() - 1);
    t.u = form.back();
    t.mu = mu;
    f.terms.push_back(std::move(t));
  }
  return f;
}

// For a fixed linear part, the m shifted indicators sum to 1. When most of the
// m slots carry the same coefficient c, move c into the constant term.
void fold_complete_groups(std::map<Form, long long>& acc, int s, long long m, long long p) {
  std::map<Form, std::vector<long long>> groups;
  for (const auto& [form, mu] : acc) {
    Form lin(form.begin(), form.end() - 1);
    if (std::all_of(lin.begin(), lin.end(), [](long long v) { return v == 0; })) continue;
    auto& g = groups[lin];
    if (g.empty()) g.assign(m, 0);
    g[form.back()] = mu;
  }
  for (const auto& [lin, slots] : groups) {
    std::map<long long, int> freq;
    for (long long v : slots) ++freq[v];
    long long best = 0;
    int count = 0;
    for (const auto& [v, k] : freq)
      if (v != 0 && k > count) {
        best = v;
        count = k;
      }
    if (best == 0 || count <= freq[0]) continue;
    for (long long u = 0; u < m; ++u) {
      Form f = lin;
      f.push_back(u);
      add_term(acc, f, -best, m, p);
    }
    add_term(acc, Form(s + 1, 0), best, m, p);
  }
  std::erase_if(acc, [](const auto& kv) { return kv.second == 0; });
}

void check_moduli(long long m, long long p) {
  check_prime(p);
  if (m < 2 || !is_square_free(m)) throw std::invalid_argument("zpqe: m must be square-free and >= 2");
  if (m % p == 0) throw std::invalid_argument("zpqe: p must not divide m");
}

}  // namespace

long long eval_zpqe(const ZpqeForm& f, const std::vector<long long>& x) {
  if (static_cast<int>(x.size()) != f.s) throw std::invalid_argument("eval_zpqe: arity mismatch");
  long long r = 0;
  for (const auto& t : f.terms) {
    long long v = t.u;
    for (int i = 0; i < f.s; ++i) v += t.beta[i] * x[i];
    if (mod(v, f.m) == 0) r += t.mu;
  }
  return mod(r, f.p);
}

ZpqeForm zero_indicator_prime(int k, long long q, long long p) {
  check_moduli(q, p);
  if (!is_prime(q)) throw std::invalid_argument("zero_indicator_prime: q must be prime");
  if (k < 0) throw std::invalid_argument("zero_indicator_prime: negative arity");
  std::map<Form, long long> acc;
  if (k == 0) {
    add_term(acc, Form{0}, 1, q, p);
    return to_form(acc, 0, q, p);
  }
  std::vector<Form> forms;
  for (int i = 0; i < k; ++i) {
    Form f(k + 1, 0);
    f[i] = 1;
    forms.push_back(f);
  }
  std::map<Form, long long> raw;
  expand_prime(forms, 1, q, p, inv_mod(q % p, p), raw);
  for (const auto& [form, mu] : raw)
    if (mu) add_term(acc, normalise_prime(form, q), mu, q, p);
  return to_form(acc, k, q, p);
}

ZpqeForm zero_indicator(int k, long long m, long long p) {
  check_moduli(m, p);
  std::map<Form, long long> acc;
  add_term(acc, Form(k + 1, 0), 1, m, p);
  for (long long q : prime_factors(m)) {
    ZpqeForm part = zero_indicator_prime(k, q, p);
    long long lift = m / q;
    std::map<Form, long long> next;
    for (const auto& [form, mu] : acc)
      for (const auto& t : part.terms) {
        Form f = form;
        for (int i = 0; i < k; ++i) f[i] += lift * t.beta[i];
        f[k] += lift * t.u;
        add_term(next, f, mu * t.mu % p, m, p);
      }
    acc = std::move(next);
  }
  return to_form(acc, k, m, p);
}

std::vector<long long> decode_point(std::size_t index, int s, long long m) {
  std::vector<long long> x(s);
  for (int i = s - 1; i >= 0; --i) {
    x[i] = static_cast<long long>(index % m);
    index /= m;
  }
  return x;
}

ZpqeForm zpqe_normal_form(const std::vector<long long>& table, int s, long long m, long long p) {
  check_moduli(m, p);
  long double points = 1;
  for (int i = 0; i < s; ++i) points *= m;
  if (points > static_cast<long double>(budget().monomials)) throw BudgetError("zpqe_normal_form: m^s exceeds the cap");
  std::size_t total = static_cast<std::size_t>(points);
  if (table.size() != total) throw std::invalid_argument("zpqe_normal_form: table size must be m^s");
  ZpqeForm base = zero_indicator(s, m, p);
  std::map<Form, long long> acc;
  for (std::size_t idx = 0; idx < total; ++idx) {
    long long fa = mod(table[idx], p);
    if (fa == 0) continue;
    auto a = decode_point(idx, s, m);
    for (const auto& t : base.terms) {
      Form f(t.beta.begin(), t.beta.end());
      long long u = t.u;
      for (int i = 0; i < s; ++i) u -= t.beta[i] * a[i];
      f.push_back(u);
      add_term(acc, f, fa * t.mu % p, m, p);
    }
  }
  fold_complete_groups(acc, s, m, p);
  ZpqeForm out = to_form(acc, s, m, p);
  for (std::size_t idx = 0; idx < total; ++idx)
    if (eval_zpqe(out, decode_point(idx, s, m)) != mod(table[idx], p))
      throw std::logic_error("zpqe_normal_form: verification failed");
  return out;
}

// ---------------------------------------------------------------------------

namespace {

long long prime_power_value(long long p, int nu) {
  long long q = 1;
  for (int i = 0; i < nu; ++i) {
    if (q > (1LL << 40) / p) throw std::invalid_argument("divisibility_poly: p^nu too large");
    q *= p;
  }
  return q;
}

// Coefficient of a degree-k monomial in the symmetric interpolation of F(weight).
std::vector<long long> symmetric_coefficients(int l, long long p, long long pnu) {
  std::vector<long long> F(l + 1);
  for (int j = 0; j <= l; ++j) F[j] = ((l - j) % pnu) != 0 ? 1 : 0;
  std::vector<std::vector<long long>> binom(l + 1, std::vector<long long>(l + 1, 0));
  for (int a = 0; a <= l; ++a) {
    binom[a][0] = 1;
    for (int b = 1; b <= a; ++b) binom[a][b] = (binom[a - 1][b - 1] + binom[a - 1][b]) % p;
  }
  std::vector<long long> c(l + 1, 0);
  for (int k = 0; k <= l; ++k) {
    long long s = 0;
    for (int i = 0; i <= k; ++i) s += ((k - i) % 2 ? -1 : 1) * binom[k][i] * F[i];
    c[k] = mod(s, p);
  }
  return c;
}

void for_each_subset(int l, int k, const std::function<void(std::uint64_t)>& fn) {
  if (k == 0) {
    fn(0);
    return;
  }
  if (k > l) return;
  std::uint64_t mask = (std::uint64_t{1} << k) - 1;
  std::uint64_t limit = std::uint64_t{1} << l;
  while (mask < limit) {
    fn(mask);
    std::uint64_t c = mask & -mask, r = mask + c;
    mask = (((r ^ mask) >> 2) / c) | r;
  }
}

}  // namespace

MultilinearPoly divisibility_poly(int l, long long p, int nu) {
  check_prime(p);
  check_vars(l);
  if (nu < 1) throw std::invalid_argument("divisibility_poly: nu must be positive");
  long long pnu = prime_power_value(p, nu);
  auto c = symmetric_coefficients(l, p, pnu);
  MultilinearPoly w{p, l, {}};
  for (int k = 0; k <= l; ++k) {
    if (c[k] == 0) continue;
    if (k >= pnu) throw std::logic_error("divisibility_poly: degree bound violated");
    for_each_subset(l, k, [&](std::uint64_t mask) {
      w.terms.emplace(mask, c[k]);
      if (w.terms.size() > budget().monomials) throw BudgetError("divisibility_poly: monomial cap exceeded");
    });
  }
  return w;
}

MultilinearPoly divisibility_poly_staged(int l, long long p, int nu) {
  check_prime(p);
  if (l > budget().max_truth_table_inputs) throw BudgetError("divisibility_poly_staged: too many variables");
  long long pnu = prime_power_value(p, nu);
  std::size_t total = std::size_t{1} << l;
  // alpha_V = w(1_V) - sum over proper subsets, visited by increasing support size
  std::vector<long long> alpha(total, 0);
  std::vector<std::size_t> order(total);
  for (std::size_t i = 0; i < total; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [](std::size_t a, std::size_t b) { return std::popcount(a) < std::popcount(b); });
  MultilinearPoly w{p, l, {}};
  for (std::size_t v : order) {
    int zeros = l - std::popcount(v);
    long long val = (zeros % pnu) != 0 ? 1 : 0;
    for (std::size_t sub = (v - 1) & v;; sub = (sub - 1) & v) {
      if (sub != v) val -= alpha[sub];
      if (sub == 0) break;
    }
    if (v == 0) val = (l % pnu) != 0 ? 1 : 0;
    alpha[v] = mod(val, p);
    if (alpha[v]) {
      if (std::popcount(v) >= pnu) throw std::logic_error("divisibility_poly_staged: degree bound violated");
      w.terms.emplace(v, alpha[v]);
    }
  }
  return w;
}

// ---------------------------------------------------------------------------

Cnf read_dimacs(std::istream& in) {
  Cnf f;
  std::string line;
  bool header = false;
  int declared_clauses = 0;
  std::vector<int> cur;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "c" || first[0] == 'c') continue;
    if (first == "%") break;
    if (first == "p") {
      std::string fmt;
      if (!(ls >> fmt >> f.n >> declared_clauses) || fmt != "cnf" || f.n < 0 || declared_clauses < 0)
        throw std::invalid_argument("dimacs: bad problem line");
      header = true;
      continue;
    }
    if (!header) throw std::invalid_argument("dimacs: clause before problem line");
    std::istringstream toks(line);
    long long lit;
    while (toks >> lit) {
      if (lit == 0) {
        f.clauses.push_back(cur);
        cur.clear();
        continue;
      }
      if (lit > f.n || -lit > f.n) throw std::invalid_argument("dimacs: literal out of range");
      cur.push_back(static_cast<int>(lit));
    }
    if (!toks.eof()) throw std::invalid_argument("dimacs: bad token");
  }
  if (!header) throw std::invalid_argument("dimacs: missing problem line");
  if (!cur.empty()) f.clauses.push_back(cur);
  return f;
}

std::string write_dimacs(const Cnf& f) {
  std::ostringstream os;
  os << "p cnf " << f.n << ' ' << f.clauses.size() << '\n';
  for (const auto& c : f.clauses) {
    for (int l : c) os << l << ' ';
    os << "0\n";
  }
  return os.str();
}

Cnf to_cnf3(const Cnf& f) {
  Cnf out = f;
  for (auto& c : out.clauses) {
    if (c.empty()) throw std::invalid_argument("to_cnf3: empty clause cannot be padded");
    if (c.size() > 3) throw std::invalid_argument("to_cnf3: clause wider than 3 (variable splitting is not done)");
    while (c.size() < 3) c.push_back(c.back());
  }
  return out;
}

bool is_cnf3(const Cnf& f) {
  return std::all_of(f.clauses.begin(), f.clauses.end(), [](const auto& c) { return c.size() == 3; });
}

int unsat_count(const Cnf& f, std::uint64_t index) {
  int u = 0;
  for (const auto& c : f.clauses) {
    bool sat = false;
    for (int l : c) {
      bool v = index >> (std::abs(l) - 1) & 1U;
      if (l > 0 ? v : !v) {
        sat = true;
        break;
      }
    }
    if (!sat) ++u;
  }
  return u;
}

bool eval_cnf(const Cnf& f, std::uint64_t index) { return unsat_count(f, index) == 0; }

MultilinearPoly pseudo_and(const Cnf& phi, long long p, int nu) {
  check_prime(p);
  check_vars(phi.n);
  if (!is_cnf3(phi)) throw std::invalid_argument("pseudo_and: formula must be 3-CNF");
  long long pnu = prime_power_value(p, nu);
  int l = static_cast<int>(phi.clauses.size());
  auto coef = symmetric_coefficients(l, p, pnu);
  int top = static_cast<int>(std::min<long long>(pnu - 1, l));
  // elementary symmetric polynomials of the clause indicators, up to degree top
  std::vector<MultilinearPoly> e(top + 1, MultilinearPoly{p, phi.n, {}});
  e[0] = poly_const(p, phi.n, 1);
  for (const auto& clause : phi.clauses) {
    MultilinearPoly miss = poly_const(p, phi.n, 1);
    for (int lit : clause) {
      MultilinearPoly v = poly_var(p, phi.n, std::abs(lit) - 1);
      // 1 - value of the literal
      MultilinearPoly off = lit > 0 ? poly_add(poly_const(p, phi.n, 1), poly_scale(v, -1)) : v;
      miss = poly_mul(miss, off);
    }
    MultilinearPoly sat = poly_add(poly_const(p, phi.n, 1), poly_scale(miss, -1));
    for (int k = top; k >= 1; --k) e[k] = poly_add(e[k], poly_mul(e[k - 1], sat));
  }
  MultilinearPoly w{p, phi.n, {}};
  for (int k = 0; k <= top; ++k) w = poly_add(w, poly_scale(e[k], coef[k]));
  for (int k = top + 1; k <= l; ++k)
    if (coef[k]) throw std::logic_error("pseudo_and: degree bound violated");
  if (w.degree() > 3 * (pnu - 1)) throw std::logic_error("pseudo_and: degree bound violated");
  return w;
}

int choose_nu(long long p, int l) {
  check_prime(p);
  int nu = 1;
  long long pn = p;
  while (pn * pn <= l) {
    pn *= p;
    ++nu;
  }
  return nu;
}

}  // namespace nudfa
