#include "kappa/fdb.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

namespace kappa {

FGen::FGen(int i_, std::vector<int> J_) : i(i_), J(std::move(J_)) {
  if (J.empty()) throw domain_error("F generator with empty index set");
  std::sort(J.begin(), J.end());
}

namespace {

void fac_mul(std::vector<std::pair<FGen, int>>& fac, const FGen& g, int e) {
  auto it = std::lower_bound(fac.begin(), fac.end(), g,
                             [](const auto& a, const FGen& b) { return a.first < b; });
  if (it != fac.end() && it->first == g) {
    it->second += e;
    if (it->second == 0) fac.erase(it);
  } else {
    fac.insert(it, {g, e});
  }
}

bool fac_divides(const std::vector<std::pair<FGen, int>>& denom,
                 const std::vector<std::pair<FGen, int>>& fac) {
  for (const auto& [g, e] : denom) {
    auto it = std::lower_bound(fac.begin(), fac.end(), g,
                               [](const auto& a, const FGen& b) { return a.first < b; });
    if (it == fac.end() || !(it->first == g) || it->second < e) return false;
  }
  return true;
}

void for_each_perm(int n, const std::function<void(const std::vector<int>&, int)>& fn) {
  std::vector<int> perm(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i + 1;
  do {
    int inv = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[static_cast<size_t>(i)] > perm[static_cast<size_t>(j)]) ++inv;
    fn(perm, (inv % 2) ? -1 : 1);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

bool alg_has_inverse(FAlg a) { return a != FAlg::FN; }

void check_generator(FAlg a, int n, const FGen& g) {
  if (g.i < 1 || g.i > n) throw domain_error("F generator index out of range");
  for (int j : g.J)
    if (j < 1 || j > n) throw domain_error("F generator index out of range");
  switch (a) {
    case FAlg::FGd: break;
    case FAlg::FGL:
      if (g.J.size() != 1) throw domain_error("P(GL_n) has only first-order generators");
      break;
    case FAlg::FN:
      if (g.J.size() < 2) throw domain_error("F(N) generators need |J| >= 2");
      break;
  }
}

}  // namespace

FdBElement FdBElement::scalar(FAlg a, int n, const Rational& c) {
  FdBElement e(a, n);
  if (!kappa::is_zero(c)) e.terms[FMono{}] = c;
  return e;
}

FdBElement FdBElement::generator(FAlg a, int n, const FGen& g) {
  check_generator(a, n, g);
  FdBElement e(a, n);
  FMono m;
  m.fac = {{g, 1}};
  e.add_reduced(std::move(m), 1);
  return e;
}

FdBElement FdBElement::inv_det(FAlg a, int n, int pow) {
  if (!alg_has_inverse(a)) throw domain_error("F(N) has no determinant inverse");
  if (pow < 0) throw domain_error("inv_det wants pow >= 0");
  FdBElement e(a, n);
  FMono m;
  m.inv_pow = pow;
  e.add_reduced(std::move(m), 1);
  return e;
}

bool FdBElement::is_scalar() const {
  return terms.empty() || (terms.size() == 1 && terms.begin()->first.is_unit());
}

Rational FdBElement::scalar_value() const {
  if (terms.empty()) return 0;
  if (!is_scalar()) throw domain_error("not a scalar");
  return terms.begin()->second;
}

// Localization normal form: when inv_pow > 0 and the diagonal first-order
// monomial divides the factors, rewrite with the determinant relation.
void FdBElement::add_reduced(FMono m, Rational c) {
  if (kappa::is_zero(c)) return;
  if (m.inv_pow > 0 && alg_has_inverse(alg)) {
    std::vector<std::pair<FGen, int>> diag;
    for (int i = 1; i <= n; ++i) diag.push_back({FGen(i, {i}), 1});
    if (fac_divides(diag, m.fac)) {
      FMono rest = m;
      for (const auto& [g, e] : diag) fac_mul(rest.fac, g, -e);
      FMono head = rest;
      head.inv_pow -= 1;
      add_reduced(std::move(head), c);
      for_each_perm(n, [&](const std::vector<int>& perm, int sign) {
        bool ident = true;
        for (int i = 1; i <= n; ++i)
          if (perm[static_cast<size_t>(i - 1)] != i) ident = false;
        if (ident) return;
        FMono t = rest;
        for (int i = 1; i <= n; ++i)
          fac_mul(t.fac, FGen(i, {perm[static_cast<size_t>(i - 1)]}), 1);
        add_reduced(std::move(t), -c * sign);
      });
      return;
    }
  }
  auto t = terms.find(m);
  if (t == terms.end()) {
    terms.emplace(std::move(m), std::move(c));
  } else {
    t->second += c;
    if (kappa::is_zero(t->second)) terms.erase(t);
  }
}

FdBElement operator+(const FdBElement& a, const FdBElement& b) {
  if (a.alg != b.alg || a.n != b.n) throw dimension_error("FdB add: algebra mismatch");
  FdBElement r = a;
  for (const auto& [m, c] : b.terms) {
    auto t = r.terms.find(m);
    if (t == r.terms.end())
      r.terms.emplace(m, c);
    else {
      t->second += c;
      if (is_zero(t->second)) r.terms.erase(t);
    }
  }
  return r;
}

FdBElement operator-(const FdBElement& a, const FdBElement& b) { return a + b.scaled(-1); }

FdBElement FdBElement::scaled(const Rational& c) const {
  FdBElement r(alg, n);
  if (kappa::is_zero(c)) return r;
  for (const auto& [m, q] : terms) r.terms.emplace(m, q * c);
  return r;
}

FdBElement operator*(const FdBElement& a, const FdBElement& b) {
  if (a.alg != b.alg || a.n != b.n) throw dimension_error("FdB mul: algebra mismatch");
  FdBElement r(a.alg, a.n);
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) {
      FMono m = ma;
      m.inv_pow += mb.inv_pow;
      for (const auto& [g, e] : mb.fac) fac_mul(m.fac, g, e);
      r.add_reduced(std::move(m), ca * cb);
    }
  return r;
}

FdBElement FdBElement::pow(int e) const {
  if (e < 0) throw domain_error("FdB pow: negative exponent");
  FdBElement r = one(alg, n);
  for (int k = 0; k < e; ++k) r = r * *this;
  return r;
}

std::string FdBElement::str() const {
  auto gen_str = [&](const FGen& g) {
    std::string base = (alg == FAlg::FGd) ? "b" : "a";
    std::string s = base + "[" + std::to_string(g.i) + ";";
    for (size_t j = 0; j < g.J.size(); ++j) {
      if (j) s += ",";
      s += std::to_string(g.J[j]);
    }
    return s + "]";
  };
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms) {
    Rational a = c;
    if (first) {
      if (sgn(a) < 0) { out += "-"; a = -a; }
    } else {
      out += sgn(a) < 0 ? " - " : " + ";
      if (sgn(a) < 0) a = -a;
    }
    std::string key;
    auto app = [&key](const std::string& s) {
      if (!key.empty()) key += " ";
      key += s;
    };
    if (m.inv_pow == 1)
      app(alg == FAlg::FGd ? "binv" : "ainv");
    else if (m.inv_pow > 1)
      app((alg == FAlg::FGd ? std::string("binv^") : std::string("ainv^")) +
          std::to_string(m.inv_pow));
    for (const auto& [g, e] : m.fac) {
      std::string s = gen_str(g);
      if (e != 1) s += "^" + std::to_string(e);
      app(s);
    }
    if (key.empty()) key = "1";
    if (a != 1 && key != "1")
      out += to_string(a) + " " + key;
    else if (key == "1")
      out += to_string(a);
    else
      out += key;
    first = false;
  }
  return out;
}

// ---- tensors -----------------------------------------------------------------

FTensor FTensor::from_elements(const std::vector<FdBElement>& legs) {
  if (legs.empty()) throw domain_error("FTensor needs legs");
  std::vector<FAlg> algs;
  for (const auto& l : legs) algs.push_back(l.alg);
  FTensor t(legs[0].n, algs);
  std::vector<FMono> key;
  std::function<void(size_t, Rational)> rec = [&](size_t i, Rational c) {
    if (i == legs.size()) {
      t.add_term(key, c);
      return;
    }
    for (const auto& [m, q] : legs[i].terms) {
      key.push_back(m);
      rec(i + 1, c * q);
      key.pop_back();
    }
  };
  rec(0, 1);
  return t;
}

void FTensor::add_term(const std::vector<FMono>& key, const Rational& c) {
  if (kappa::is_zero(c)) return;
  auto it = terms.find(key);
  if (it == terms.end()) {
    terms.emplace(key, c);
  } else {
    it->second += c;
    if (kappa::is_zero(it->second)) terms.erase(it);
  }
}

FTensor operator+(const FTensor& a, const FTensor& b) {
  if (a.n != b.n || a.algs != b.algs) throw dimension_error("FTensor add: shape mismatch");
  FTensor r = a;
  for (const auto& [k, c] : b.terms) r.add_term(k, c);
  return r;
}

FTensor operator-(const FTensor& a, const FTensor& b) { return a + b.scaled(-1); }

FTensor FTensor::scaled(const Rational& c) const {
  FTensor r(n, algs);
  if (kappa::is_zero(c)) return r;
  for (const auto& [k, v] : terms) r.terms.emplace(k, v * c);
  return r;
}

FdBElement FTensor::leg_element(int i, const FMono& m) const {
  FdBElement e(algs[static_cast<size_t>(i)], n);
  e.terms.emplace(m, 1);
  return e;
}

FTensor operator*(const FTensor& a, const FTensor& b) {
  if (a.n != b.n || a.algs != b.algs) throw dimension_error("FTensor mul: shape mismatch");
  FTensor r(a.n, a.algs);
  for (const auto& [ka, ca] : a.terms)
    for (const auto& [kb, cb] : b.terms) {
      std::vector<FdBElement> legs;
      for (int i = 0; i < a.q(); ++i)
        legs.push_back(a.leg_element(i, ka[static_cast<size_t>(i)]) *
                       b.leg_element(i, kb[static_cast<size_t>(i)]));
      r += FTensor::from_elements(legs).scaled(ca * cb);
    }
  return r;
}

FTensor FTensor::map_leg(int i, FAlg new_alg,
                         const std::function<FdBElement(const FdBElement&)>& fn) const {
  std::vector<FAlg> as = algs;
  as[static_cast<size_t>(i)] = new_alg;
  FTensor r(n, as);
  for (const auto& [k, c] : terms) {
    FdBElement img = fn(leg_element(i, k[static_cast<size_t>(i)]));
    for (const auto& [mk, mc] : img.terms) {
      std::vector<FMono> key = k;
      key[static_cast<size_t>(i)] = mk;
      r.add_term(key, c * mc);
    }
  }
  return r;
}

std::string FTensor::str() const {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [k, c] : terms) {
    if (!first) out += " + ";
    first = false;
    if (c != 1) out += to_string(c) + " ";
    for (size_t i = 0; i < k.size(); ++i) {
      if (i) out += " (x) ";
      out += leg_element(static_cast<int>(i), k[i]).str();
    }
  }
  return out;
}

// ---- evaluation ----------------------------------------------------------------

namespace {

void check_membership(FAlg alg, const JetDiffeo<Rational>& psi) {
  switch (alg) {
    case FAlg::FGd:
      if (!psi.in_gdagger()) throw domain_error("fdb_eval: jet not in G-dagger");
      break;
    case FAlg::FGL:
      if (!psi.is_linear()) throw domain_error("fdb_eval: jet not linear");
      break;
    case FAlg::FN:
      if (!psi.in_unipotent()) throw domain_error("fdb_eval: jet not in N");
      break;
  }
}

template <class C>
C beta_value(const JetDiffeo<C>& psi, const FGen& g) {
  std::vector<int> J0;
  for (int j : g.J) J0.push_back(j - 1);
  return psi.partial(g.i - 1, J0).constant_term();
}

}  // namespace

Rational fdb_eval(const FdBElement& f, const JetDiffeo<Rational>& psi) {
  if (f.n != psi.n) throw dimension_error("fdb_eval: dimension mismatch");
  check_membership(f.alg, psi);
  Rational total = 0;
  for (const auto& [m, c] : f.terms) {
    Rational v = c;
    if (m.inv_pow > 0) {
      Rational det = matrix_det(psi.linear_part());
      if (is_zero(det)) throw singular_error("fdb_eval: singular jet");
      for (int k = 0; k < m.inv_pow; ++k) v /= det;
    }
    for (const auto& [g, e] : m.fac) {
      if (static_cast<int>(g.J.size()) > psi.order)
        throw order_error("fdb_eval: insufficient jet order");
      Rational b = beta_value(psi, g);
      for (int k = 0; k < e; ++k) v *= b;
    }
    total += v;
  }
  return total;
}

Rational fdb_eval(const FTensor& t, const std::vector<JetDiffeo<Rational>>& psis) {
  if (static_cast<int>(psis.size()) != t.q()) throw dimension_error("fdb_eval: leg count");
  Rational total = 0;
  for (const auto& [k, c] : t.terms) {
    Rational v = c;
    for (int i = 0; i < t.q(); ++i)
      v *= fdb_eval(t.leg_element(i, k[static_cast<size_t>(i)]), psis[static_cast<size_t>(i)]);
    total += v;
  }
  return total;
}

// ---- generic jets ---------------------------------------------------------------

namespace {

std::string sym_name(char group, int i, const std::vector<int>& J) {
  std::string s(1, group);
  s += "|" + std::to_string(i) + "|";
  for (size_t k = 0; k < J.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(J[k]);
  }
  return s;
}
std::string abar_name(char group, int i, int j) {
  std::string s(1, group);
  s += "~|" + std::to_string(i) + "|" + std::to_string(j);
  return s;
}

struct SymInfo {
  char group = 0;
  bool abar = false;
  int i = 0;
  std::vector<int> J;
};

SymInfo parse_sym(int id) {
  std::string name = SymbolTable::name(id);
  SymInfo info;
  info.group = name[0];
  size_t pos = 1;
  if (pos < name.size() && name[pos] == '~') {
    info.abar = true;
    ++pos;
  }
  if (pos >= name.size() || name[pos] != '|') throw domain_error("foreign symbol: " + name);
  ++pos;
  size_t bar = name.find('|', pos);
  info.i = std::stoi(name.substr(pos, bar - pos));
  pos = bar + 1;
  while (pos < name.size()) {
    size_t comma = name.find(',', pos);
    if (comma == std::string::npos) comma = name.size();
    info.J.push_back(std::stoi(name.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return info;
}

std::vector<int> multi_to_J(const Multi& m) {
  std::vector<int> J;
  for (size_t t = 0; t < m.size(); ++t)
    for (int k = 0; k < m[t]; ++k) J.push_back(static_cast<int>(t) + 1);
  return J;
}

Rational multi_factorial(const Multi& m) {
  Rational r = 1;
  for (int e : m) r *= factorial(e);
  return r;
}

// Generic jet in the given group with named Taylor symbols; the coefficient of
// x^alpha is symbol/alpha! so that d_J psi^i(0) equals the symbol exactly.
JetDiffeo<SymPoly> make_generic(FAlg alg, int n, int order, char group) {
  std::vector<TruncSeries<SymPoly>> comps;
  for (int i = 1; i <= n; ++i) {
    TruncSeries<SymPoly> f(n, order);
    Multi m(static_cast<size_t>(n), 0);
    std::function<void(int, int)> rec = [&](int var, int left) {
      if (var == n) {
        int deg = total_degree(m);
        if (deg < 1) return;
        if (alg == FAlg::FGL && deg != 1) return;
        if (alg == FAlg::FN && deg == 1) {
          // identity linear part
          int j = -1;
          for (int t = 0; t < n; ++t)
            if (m[static_cast<size_t>(t)] == 1) j = t;
          f.set(m, SymPoly(Rational(i - 1 == j ? 1 : 0)));
          return;
        }
        SymPoly s = SymPoly::variable(sym_name(group, i, multi_to_J(m)));
        f.set(m, s * (1 / multi_factorial(m)));
        return;
      }
      for (int e = 0; e <= left; ++e) {
        m[static_cast<size_t>(var)] = e;
        rec(var + 1, left - e);
      }
      m[static_cast<size_t>(var)] = 0;
    };
    rec(0, order);
    comps.push_back(std::move(f));
  }
  JetDiffeo<SymPoly> j;
  j.n = n;
  j.order = order;
  j.offset.assign(static_cast<size_t>(n), SymPoly());
  for (auto& c : comps) j.comps.push_back(std::move(c));
  return j;
}

// Linear jet with inverse-matrix symbols abar^i_j (no relation imposed).
JetDiffeo<SymPoly> make_abar_linear(int n, int order, char group) {
  JetDiffeo<SymPoly> j;
  j.n = n;
  j.order = order;
  j.offset.assign(static_cast<size_t>(n), SymPoly());
  for (int i = 1; i <= n; ++i) {
    TruncSeries<SymPoly> f(n, order);
    for (int jj = 1; jj <= n; ++jj) {
      Multi m(static_cast<size_t>(n), 0);
      m[static_cast<size_t>(jj - 1)] = 1;
      f.set(m, SymPoly::variable(abar_name(group, i, jj)));
    }
    j.comps.push_back(std::move(f));
  }
  return j;
}

// cofactor element: (A^{-1})^i_j * det = (-1)^{i+j} det(remove row j, col i)
FdBElement adj_cofactor(FAlg alg, int n, int i, int j) {
  std::vector<int> rows, cols;
  for (int t = 1; t <= n; ++t) {
    if (t != j) rows.push_back(t);
    if (t != i) cols.push_back(t);
  }
  int m = n - 1;
  FdBElement det = FdBElement::zero(alg, n);
  if (m == 0) {
    det = FdBElement::one(alg, n);
  } else {
    std::vector<int> perm(static_cast<size_t>(m));
    for (int t = 0; t < m; ++t) perm[static_cast<size_t>(t)] = t;
    do {
      int inv = 0;
      for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
          if (perm[static_cast<size_t>(a)] > perm[static_cast<size_t>(b)]) ++inv;
      FdBElement t = FdBElement::one(alg, n);
      for (int a = 0; a < m; ++a)
        t = t * FdBElement::generator(
                    alg, n,
                    FGen(rows[static_cast<size_t>(a)],
                         {cols[static_cast<size_t>(perm[static_cast<size_t>(a)])]}));
      det = (inv % 2) ? det - t : det + t;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return ((i + j) % 2) ? -det : det;
}

FdBElement det_poly(FAlg alg, int n) {
  FdBElement det = FdBElement::zero(alg, n);
  for_each_perm(n, [&](const std::vector<int>& perm, int sign) {
    FdBElement t = FdBElement::one(alg, n);
    for (int i = 1; i <= n; ++i)
      t = t * FdBElement::generator(alg, n, FGen(i, {perm[static_cast<size_t>(i - 1)]}));
    det = sign > 0 ? det + t : det - t;
  });
  return det;
}

// Map one symbol occurrence to an FdB element of the target algebra.
FdBElement symbol_image(const SymInfo& info, FAlg alg, int n) {
  if (info.abar) {
    // inverse-matrix entry -> det^{-1} * cofactor
    return FdBElement::inv_det(alg, n) * adj_cofactor(alg, n, info.i, info.J.empty() ? 1 : info.J[0]);
  }
  return FdBElement::generator(alg, n, FGen(info.i, info.J));
}

// Split a polynomial over two symbol groups into a two-leg tensor.
FTensor split_two(const SymPoly& p, int n, char g1, FAlg a1, char g2, FAlg a2) {
  FTensor r(n, {a1, a2});
  for (const auto& [mono, c] : p.terms) {
    FdBElement l1 = FdBElement::one(a1, n);
    FdBElement l2 = FdBElement::one(a2, n);
    for (const auto& [id, e] : mono) {
      if (e < 0) throw domain_error("split_two: negative exponent");
      SymInfo info = parse_sym(id);
      if (info.group == g1)
        l1 = l1 * symbol_image(info, a1, n).pow(e);
      else if (info.group == g2)
        l2 = l2 * symbol_image(info, a2, n).pow(e);
      else
        throw domain_error("split_two: unknown symbol group");
    }
    r += FTensor::from_elements({l1, l2}).scaled(c);
  }
  return r;
}

// Collapse a polynomial over one symbol group into an element.
FdBElement collapse_one(const SymPoly& p, int n, FAlg alg) {
  FdBElement r = FdBElement::zero(alg, n);
  for (const auto& [mono, c] : p.terms) {
    FdBElement t = FdBElement::one(alg, n);
    for (const auto& [id, e] : mono) {
      if (e < 0) throw domain_error("collapse_one: negative exponent");
      t = t * symbol_image(parse_sym(id), alg, n).pow(e);
    }
    r += t.scaled(c);
  }
  return r;
}

struct FGenKey {
  FAlg alg;
  int n;
  FGen g;
  friend bool operator<(const FGenKey& a, const FGenKey& b) {
    if (a.alg != b.alg) return a.alg < b.alg;
    if (a.n != b.n) return a.n < b.n;
    return a.g < b.g;
  }
};

std::recursive_mutex fdb_cache_mu;

// Delta(gen) by symbolic composition of two generic jets; cached.
const FTensor& coproduct_gen(FAlg alg, int n, const FGen& g) {
  static std::map<FGenKey, FTensor> cache;
  std::lock_guard<std::recursive_mutex> lock(fdb_cache_mu);
  FGenKey key{alg, n, g};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  int order = static_cast<int>(g.J.size());
  JetDiffeo<SymPoly> p1 = make_generic(alg, n, order, 'u');
  JetDiffeo<SymPoly> p2 = make_generic(alg, n, order, 'v');
  SymPoly val = beta_value(jet_compose(p1, p2), g);
  FTensor t = split_two(val, n, 'u', alg, 'v', alg);
  return cache.emplace(std::move(key), std::move(t)).first->second;
}

// S(gen) by symbolic reversion; cached.
const FdBElement& antipode_gen(FAlg alg, int n, const FGen& g) {
  static std::map<FGenKey, FdBElement> cache;
  std::lock_guard<std::recursive_mutex> lock(fdb_cache_mu);
  FGenKey key{alg, n, g};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  int order = static_cast<int>(g.J.size());
  FdBElement s(alg, n);
  if (alg == FAlg::FGL) {
    // S(alpha^i_j) = alpha^{-1} * cofactor(i, j)
    s = FdBElement::inv_det(alg, n) * adj_cofactor(alg, n, g.i, g.J[0]);
  } else if (alg == FAlg::FN) {
    JetDiffeo<SymPoly> nu = make_generic(FAlg::FN, n, order, 'c');
    std::vector<TruncSeries<SymPoly>> rev = series_revert(nu.comps);
    JetDiffeo<SymPoly> inv;
    inv.n = n;
    inv.order = order;
    inv.offset.assign(static_cast<size_t>(n), SymPoly());
    inv.comps = std::move(rev);
    s = collapse_one(beta_value(inv, g), n, FAlg::FN);
  } else {
    // psi = lambda∘nu; psi^{-1} = nu^{-1}∘lambda^{-1} with free symbols for
    // the entries of lambda^{-1}, substituted by beta^{-1} adj(beta) at the end
    JetDiffeo<SymPoly> psi = make_generic(FAlg::FGd, n, order, 'b');
    JetDiffeo<SymPoly> lam_inv = make_abar_linear(n, order, 'b');
    // nu = lambda^{-1} psi: unipotent by construction
    JetDiffeo<SymPoly> nu;
    nu.n = n;
    nu.order = order;
    nu.offset.assign(static_cast<size_t>(n), SymPoly());
    for (int i = 0; i < n; ++i) {
      TruncSeries<SymPoly> f = TruncSeries<SymPoly>::variable(n, order, i);
      for (int j = 0; j < n; ++j) {
        // abar^i_j * (psi_j - linear part of psi_j)
        TruncSeries<SymPoly> high = psi.comps[static_cast<size_t>(j)];
        for (int k = 0; k < n; ++k) {
          Multi m(static_cast<size_t>(n), 0);
          m[static_cast<size_t>(k)] = 1;
          high.set(m, SymPoly());
        }
        f += high.scaled(SymPoly::variable(abar_name('b', i + 1, j + 1)));
      }
      nu.comps.push_back(std::move(f));
    }
    std::vector<TruncSeries<SymPoly>> nu_inv = series_revert(nu.comps);
    JetDiffeo<SymPoly> nu_inv_jet;
    nu_inv_jet.n = n;
    nu_inv_jet.order = order;
    nu_inv_jet.offset.assign(static_cast<size_t>(n), SymPoly());
    nu_inv_jet.comps = std::move(nu_inv);
    JetDiffeo<SymPoly> psi_inv = jet_compose(nu_inv_jet, lam_inv);
    s = collapse_one(beta_value(psi_inv, g), n, FAlg::FGd);
  }
  return cache.emplace(std::move(key), std::move(s)).first->second;
}

}  // namespace

FTensor fdb_coproduct(const FdBElement& f) {
  FTensor r(f.n, {f.alg, f.alg});
  for (const auto& [m, c] : f.terms) {
    FTensor t = FTensor::from_elements({FdBElement::one(f.alg, f.n), FdBElement::one(f.alg, f.n)});
    if (m.inv_pow > 0) {
      FdBElement inv = FdBElement::inv_det(f.alg, f.n, m.inv_pow);
      t = t * FTensor::from_elements({inv, inv});  // group-like
    }
    for (const auto& [g, e] : m.fac) {
      const FTensor& dg = coproduct_gen(f.alg, f.n, g);
      for (int k = 0; k < e; ++k) t = t * dg;
    }
    r += t.scaled(c);
  }
  return r;
}

FdBElement fdb_antipode(const FdBElement& f) {
  FdBElement r(f.alg, f.n);
  for (const auto& [m, c] : f.terms) {
    FdBElement t = FdBElement::one(f.alg, f.n);
    if (m.inv_pow > 0) t = t * det_poly(f.alg, f.n).pow(m.inv_pow);  // S(inv) = det
    for (const auto& [g, e] : m.fac)
      for (int k = 0; k < e; ++k) t = t * antipode_gen(f.alg, f.n, g);
    r += t.scaled(c);
  }
  return r;
}

Rational fdb_counit(const FdBElement& f) {
  Rational r = 0;
  for (const auto& [m, c] : f.terms) {
    bool nonzero = true;
    for (const auto& [g, e] : m.fac) {
      bool first_order_diag = (g.J.size() == 1 && g.J[0] == g.i);
      if (!first_order_diag) {
        nonzero = false;
        break;
      }
    }
    if (nonzero) r += c;
  }
  return r;
}

// ---- projections / sections / Phi ---------------------------------------------

FdBElement project_gl(const FdBElement& f) {
  if (f.alg != FAlg::FGd) throw domain_error("pi_1 domain is F(G-dagger)");
  FdBElement r(FAlg::FGL, f.n);
  for (const auto& [m, c] : f.terms) {
    FdBElement t = FdBElement::scalar(FAlg::FGL, f.n, 1);
    bool zero = false;
    if (m.inv_pow > 0) t = t * FdBElement::inv_det(FAlg::FGL, f.n, m.inv_pow);
    for (const auto& [g, e] : m.fac) {
      if (g.J.size() >= 2) {
        zero = true;
        break;
      }
      t = t * FdBElement::generator(FAlg::FGL, f.n, g).pow(e);
    }
    if (!zero) r += t.scaled(c);
  }
  return r;
}

FdBElement project_n(const FdBElement& f) {
  if (f.alg != FAlg::FGd) throw domain_error("pi_2 domain is F(G-dagger)");
  FdBElement r(FAlg::FN, f.n);
  for (const auto& [m, c] : f.terms) {
    FdBElement t = FdBElement::scalar(FAlg::FN, f.n, 1);
    bool zero = false;
    for (const auto& [g, e] : m.fac) {
      if (g.J.size() == 1) {
        if (g.i != g.J[0]) {  // pi_2(beta^i_j) = delta^i_j
          zero = true;
          break;
        }
        continue;
      }
      t = t * FdBElement::generator(FAlg::FN, f.n, g).pow(e);
    }
    if (!zero) r += t.scaled(c);
  }
  return r;
}

FdBElement include_gl(const FdBElement& f) {
  if (f.alg != FAlg::FGL) throw domain_error("I_1 domain is P(GL_n)");
  FdBElement r(FAlg::FGd, f.n);
  for (const auto& [m, c] : f.terms) {
    FMono mm = m;  // same generator data, re-tagged
    FdBElement t(FAlg::FGd, f.n);
    t.add_reduced(std::move(mm), 1);
    r += t.scaled(c);
  }
  return r;
}

FdBElement include_n(const FdBElement& f) {
  if (f.alg != FAlg::FN) throw domain_error("I_2 domain is F(N)");
  FdBElement r(FAlg::FGd, f.n);
  for (const auto& [m, c] : f.terms) {
    FMono mm = m;
    FdBElement t(FAlg::FGd, f.n);
    t.add_reduced(std::move(mm), 1);
    r += t.scaled(c);
  }
  return r;
}

FTensor phi_iso(const FdBElement& f) {
  FTensor d = fdb_coproduct(f);
  FTensor r = d.map_leg(0, FAlg::FGL, [](const FdBElement& u) { return project_gl(u); });
  return r.map_leg(1, FAlg::FN, [](const FdBElement& u) { return project_n(u); });
}

FdBElement phi_inverse(const FTensor& t) {
  if (t.q() != 2 || t.algs[0] != FAlg::FGL || t.algs[1] != FAlg::FN)
    throw domain_error("phi_inverse wants FGL (x) FN");
  FdBElement r(FAlg::FGd, t.n);
  for (const auto& [k, c] : t.terms) {
    FdBElement f1 = t.leg_element(0, k[0]);
    FdBElement f2 = t.leg_element(1, k[1]);
    // Phi^{-1}(f1 ⊗ f2) = I_1(f1) S(I_1(f2_{(-1)})) I_2(f2_{(0)})
    FTensor co = coaction_n_left(f2);  // FGL (x) FN
    FdBElement acc(FAlg::FGd, t.n);
    for (const auto& [ck, cc] : co.terms) {
      FdBElement left = include_gl(co.leg_element(0, ck[0]));
      FdBElement right = include_n(co.leg_element(1, ck[1]));
      acc += (fdb_antipode(left) * right).scaled(cc);
    }
    r += (include_gl(f1) * acc).scaled(c);
  }
  return r;
}

FdBElement iota_H(const FdBElement& f) {
  if (f.alg != FAlg::FN) throw domain_error("iota_H domain is F(N)");
  FTensor t = FTensor::from_elements({FdBElement::one(FAlg::FGL, f.n), f});
  return phi_inverse(t);
}

// ---- actions / coactions --------------------------------------------------------

namespace {

FdBElement det_derived_f(int n, int l) {
  FdBElement d = FdBElement::zero(FAlg::FGd, n);
  for_each_perm(n, [&](const std::vector<int>& perm, int sign) {
    for (int slot = 1; slot <= n; ++slot) {
      FdBElement t = FdBElement::one(FAlg::FGd, n);
      for (int i = 1; i <= n; ++i) {
        std::vector<int> J = {perm[static_cast<size_t>(i - 1)]};
        if (i == slot) J.push_back(l);
        t = t * FdBElement::generator(FAlg::FGd, n, FGen(i, J));
      }
      d = sign > 0 ? d + t : d - t;
    }
  });
  return d;
}

}  // namespace

FdBElement v_action(int l, const FdBElement& f) {
  if (f.alg != FAlg::FGd) throw domain_error("v_action acts on F(G-dagger)");
  FdBElement r(FAlg::FGd, f.n);
  for (const auto& [m, c] : f.terms) {
    if (m.inv_pow > 0) {
      // X_l |> beta^{-k} = -k beta^{-(k+1)} (X_l |> det)
      FMono rest = m;
      rest.inv_pow += 1;
      FdBElement part(FAlg::FGd, f.n);
      part.add_reduced(rest, c * Rational(-m.inv_pow));
      r += part * det_derived_f(f.n, l);
    }
    for (size_t idx = 0; idx < m.fac.size(); ++idx) {
      const auto& [g, e] = m.fac[idx];
      FMono rest = m;
      fac_mul(rest.fac, g, -1);
      std::vector<int> J = g.J;
      J.push_back(l);
      fac_mul(rest.fac, FGen(g.i, J), 1);
      FdBElement part(FAlg::FGd, f.n);
      part.add_reduced(rest, c * e);
      r += part;
    }
  }
  return r;
}

namespace {

// cached coactions per FN generator
const FTensor& coaction_right_gen(int n, const FGen& g) {
  static std::map<FGenKey, FTensor> cache;
  std::lock_guard<std::recursive_mutex> lock(fdb_cache_mu);
  FGenKey key{FAlg::FN, n, g};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  int order = static_cast<int>(g.J.size());
  // (nu <| lambda)(x) = a^{-1} nu(a x): conjugate by the generic linear jet
  JetDiffeo<SymPoly> nu = make_generic(FAlg::FN, n, order, 'c');
  JetDiffeo<SymPoly> lam = make_generic(FAlg::FGL, n, order, 'a');
  JetDiffeo<SymPoly> lam_inv = make_abar_linear(n, order, 'a');
  SymPoly val = beta_value(jet_compose(jet_compose(lam_inv, nu), lam), g);
  FTensor t = split_two(val, n, 'c', FAlg::FN, 'a', FAlg::FGL);
  return cache.emplace(std::move(key), std::move(t)).first->second;
}

const FTensor& coaction_left_gen(int n, const FGen& g) {
  static std::map<FGenKey, FTensor> cache;
  std::lock_guard<std::recursive_mutex> lock(fdb_cache_mu);
  FGenKey key{FAlg::FN, n, g};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  int order = static_cast<int>(g.J.size());
  // nabla_L(f)(lambda, nu) = I_2(f)(lambda∘nu)
  JetDiffeo<SymPoly> lam = make_generic(FAlg::FGL, n, order, 'a');
  JetDiffeo<SymPoly> nu = make_generic(FAlg::FN, n, order, 'c');
  SymPoly val = beta_value(jet_compose(lam, nu), g);
  FTensor t = split_two(val, n, 'a', FAlg::FGL, 'c', FAlg::FN);
  return cache.emplace(std::move(key), std::move(t)).first->second;
}

}  // namespace

FTensor coaction_n_right(const FdBElement& f) {
  if (f.alg != FAlg::FN) throw domain_error("coaction_n_right acts on F(N)");
  FTensor r(f.n, {FAlg::FN, FAlg::FGL});
  for (const auto& [m, c] : f.terms) {
    FTensor t = FTensor::from_elements(
        {FdBElement::one(FAlg::FN, f.n), FdBElement::one(FAlg::FGL, f.n)});
    for (const auto& [g, e] : m.fac) {
      const FTensor& cg = coaction_right_gen(f.n, g);
      for (int k = 0; k < e; ++k) t = t * cg;
    }
    r += t.scaled(c);
  }
  return r;
}

FTensor coaction_n_left(const FdBElement& f) {
  if (f.alg != FAlg::FN) throw domain_error("coaction_n_left acts on F(N)");
  FTensor r(f.n, {FAlg::FGL, FAlg::FN});
  for (const auto& [m, c] : f.terms) {
    FTensor t = FTensor::from_elements(
        {FdBElement::one(FAlg::FGL, f.n), FdBElement::one(FAlg::FN, f.n)});
    for (const auto& [g, e] : m.fac) {
      const FTensor& cg = coaction_left_gen(f.n, g);
      for (int k = 0; k < e; ++k) t = t * cg;
    }
    r += t.scaled(c);
  }
  return r;
}

Rational gl_pairing(const FdBElement& f, int i, int j) {
  if (f.alg != FAlg::FGL) throw domain_error("gl_pairing wants P(GL_n)");
  // derivative at the identity of t -> f(exp(t Y^i_j))
  Rational total = 0;
  for (const auto& [m, c] : f.terms) {
    // product rule over factor occurrences; eps of the rest
    // eps(alpha^p_q) = delta^p_q, eps(alpha^{-1}) = 1
    auto eps_rest_nonzero = [&](int skip_idx, int inv_skip) -> bool {
      (void)inv_skip;
      for (size_t t2 = 0; t2 < m.fac.size(); ++t2) {
        const auto& [g, e] = m.fac[t2];
        int mult = e - (static_cast<int>(t2) == skip_idx ? 1 : 0);
        if (mult > 0 && g.i != g.J[0]) return false;
      }
      return true;
    };
    // alpha^{-1} occurrences: d/dt det(exp tY)^{-1} = -tr(Y) = -delta^i_j
    if (m.inv_pow > 0 && i == j && eps_rest_nonzero(-1, 1)) total += c * Rational(-m.inv_pow);
    for (size_t t2 = 0; t2 < m.fac.size(); ++t2) {
      const auto& [g, e] = m.fac[t2];
      // <alpha^p_q, Y^i_j> = delta^i_q delta^p_j
      if (g.J[0] == i && g.i == j && eps_rest_nonzero(static_cast<int>(t2), 0))
        total += c * e;
    }
  }
  return total;
}

FdBElement gl_action(int i, int j, const FdBElement& f) {
  FTensor co = coaction_n_right(f);
  FdBElement r(FAlg::FN, f.n);
  for (const auto& [k, c] : co.terms) {
    Rational p = gl_pairing(co.leg_element(1, k[1]), i, j);
    if (is_zero(p)) continue;
    FdBElement part = co.leg_element(0, k[0]);
    r += part.scaled(c * p);
  }
  return r;
}

std::vector<Rational> gl_on_V(int n, int i, int j, int k) {
  // Y^i_j |> X_k = delta^i_k X_j
  std::vector<Rational> v(static_cast<size_t>(n), Rational(0));
  if (i == k) v[static_cast<size_t>(j - 1)] = 1;
  return v;
}

// ---- iota -------------------------------------------------------------------

FdBElement iota_from_ab(const AbElement& f) {
  FdBElement r(FAlg::FGd, f.n);
  for (const auto& [m, c] : f.terms) {
    if (m.log_pow > 0) throw domain_error("iota: log sigma has no image in F(G-dagger)");
    FMono mm;
    if (m.sigma_pow < 0) mm.inv_pow = -m.sigma_pow;
    FdBElement t(FAlg::FGd, f.n);
    for (const auto& [g, e] : m.sig) fac_mul(mm.fac, FGen(g.i, g.J), e);
    t.add_reduced(std::move(mm), 1);
    if (m.sigma_pow > 0) {
      // n = 1 normal form keeps positive sigma powers; beta^1_1 on the F side
      t = t * FdBElement::generator(FAlg::FGd, f.n, FGen(1, {1})).pow(m.sigma_pow);
    }
    r += t.scaled(c);
  }
  return r;
}

AbElement iota_to_ab(const FdBElement& f) {
  if (f.alg != FAlg::FGd) throw domain_error("iota_to_ab wants F(G-dagger)");
  AbElement r(f.n);
  for (const auto& [m, c] : f.terms) {
    AbElement t = AbElement::sigma_power(f.n, -m.inv_pow);
    for (const auto& [g, e] : m.fac)
      t = t * AbElement::sigma_factor(f.n, SigFactor(g.i, g.J)).pow(e);
    r += t.scaled(c);
  }
  return r;
}

}  // namespace kappa
