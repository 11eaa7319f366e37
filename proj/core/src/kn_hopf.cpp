#include "kappa/kn_hopf.hpp"

#include <algorithm>
#include <functional>
#include <mutex>

namespace kappa {

KnTensor KnTensor::from_elements(const std::vector<KnElement>& legs) {
  if (legs.empty()) throw domain_error("tensor needs at least one leg");
  KnTensor t(legs[0].n, static_cast<int>(legs.size()));
  std::vector<PBWKey> key;
  std::function<void(size_t, Rational)> rec = [&](size_t i, Rational c) {
    if (i == legs.size()) {
      t.add_term(key, c);
      return;
    }
    for (const auto& [k, q] : legs[i].terms) {
      key.push_back(k);
      rec(i + 1, c * q);
      key.pop_back();
    }
  };
  rec(0, 1);
  return t;
}

KnTensor KnTensor::unit(int n, int q) {
  std::vector<KnElement> legs(static_cast<size_t>(q), KnElement::one(n));
  return from_elements(legs);
}

void KnTensor::add_term(const std::vector<PBWKey>& key, const Rational& c) {
  if (kappa::is_zero(c)) return;
  auto it = terms.find(key);
  if (it == terms.end()) {
    terms.emplace(key, c);
  } else {
    it->second += c;
    if (kappa::is_zero(it->second)) terms.erase(it);
  }
}

KnTensor operator+(const KnTensor& a, const KnTensor& b) {
  if (a.n != b.n || a.q != b.q) throw dimension_error("tensor add: shape mismatch");
  KnTensor r = a;
  for (const auto& [k, c] : b.terms) r.add_term(k, c);
  return r;
}

KnTensor operator-(const KnTensor& a, const KnTensor& b) { return a + b.scaled(-1); }

KnTensor KnTensor::scaled(const Rational& c) const {
  KnTensor r(n, q);
  if (kappa::is_zero(c)) return r;
  for (const auto& [k, v] : terms) r.terms.emplace(k, v * c);
  return r;
}

KnElement KnTensor::leg_element(const PBWKey& k) const {
  KnElement e(n);
  e.terms.emplace(k, 1);
  return e;
}

KnTensor operator*(const KnTensor& a, const KnTensor& b) {
  if (a.n != b.n || a.q != b.q) throw dimension_error("tensor mul: shape mismatch");
  KnTensor r(a.n, a.q);
  for (const auto& [ka, ca] : a.terms) {
    for (const auto& [kb, cb] : b.terms) {
      // per-leg products, then expand the product tensor
      std::vector<KnElement> legs;
      legs.reserve(static_cast<size_t>(a.q));
      for (int i = 0; i < a.q; ++i)
        legs.push_back(kn_mul(a.leg_element(ka[static_cast<size_t>(i)]),
                              b.leg_element(kb[static_cast<size_t>(i)])));
      KnTensor part = KnTensor::from_elements(legs);
      r += part.scaled(ca * cb);
    }
  }
  return r;
}

KnTensor KnTensor::map_leg(int i, const std::function<KnElement(const KnElement&)>& fn) const {
  KnTensor r(n, q);
  for (const auto& [k, c] : terms) {
    KnElement img = fn(leg_element(k[static_cast<size_t>(i)]));
    for (const auto& [mk, mc] : img.terms) {
      std::vector<PBWKey> key = k;
      key[static_cast<size_t>(i)] = mk;
      r.add_term(key, c * mc);
    }
  }
  return r;
}

KnTensor KnTensor::coproduct_leg(int i) const {
  KnTensor r(n, q + 1);
  for (const auto& [k, c] : terms) {
    KnTensor d = coproduct(leg_element(k[static_cast<size_t>(i)]));
    for (const auto& [dk, dc] : d.terms) {
      std::vector<PBWKey> key;
      key.reserve(static_cast<size_t>(q + 1));
      for (int j = 0; j < i; ++j) key.push_back(k[static_cast<size_t>(j)]);
      key.push_back(dk[0]);
      key.push_back(dk[1]);
      for (int j = i + 1; j < q; ++j) key.push_back(k[static_cast<size_t>(j)]);
      r.add_term(key, c * dc);
    }
  }
  return r;
}

KnTensor KnTensor::counit_leg(int i) const {
  if (q < 2) throw domain_error("counit_leg: degree too small");
  KnTensor r(n, q - 1);
  for (const auto& [k, c] : terms) {
    Rational e = counit(leg_element(k[static_cast<size_t>(i)]));
    if (kappa::is_zero(e)) continue;
    std::vector<PBWKey> key;
    for (int j = 0; j < q; ++j)
      if (j != i) key.push_back(k[static_cast<size_t>(j)]);
    r.add_term(key, c * e);
  }
  return r;
}

KnTensor KnTensor::insert_leg(int i, const KnElement& e) const {
  KnTensor r(n, q + 1);
  for (const auto& [k, c] : terms) {
    for (const auto& [ek, ec] : e.terms) {
      std::vector<PBWKey> key;
      for (int j = 0; j < i; ++j) key.push_back(k[static_cast<size_t>(j)]);
      key.push_back(ek);
      for (int j = i; j < q; ++j) key.push_back(k[static_cast<size_t>(j)]);
      r.add_term(key, c * ec);
    }
  }
  return r;
}

KnTensor KnTensor::flip() const {
  KnTensor r(n, q);
  for (const auto& [k, c] : terms) {
    std::vector<PBWKey> key(k.rbegin(), k.rend());
    r.add_term(key, c);
  }
  return r;
}

std::string KnTensor::str() const {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [k, c] : terms) {
    Rational a = c;
    if (first) {
      if (sgn(a) < 0) {
        out += "-";
        a = -a;
      }
    } else {
      out += sgn(a) < 0 ? " - " : " + ";
      if (sgn(a) < 0) a = -a;
    }
    std::string key;
    for (size_t i = 0; i < k.size(); ++i) {
      if (i) key += " (x) ";
      key += pbw_key_str(k[i], n);
    }
    if (a != 1) out += to_string(a) + " ";
    out += key;
    first = false;
  }
  return out;
}

// ---- coproduct --------------------------------------------------------------

namespace {

struct GenKey {
  int n;
  int i;
  std::vector<int> J;
  friend bool operator<(const GenKey& a, const GenKey& b) {
    if (a.n != b.n) return a.n < b.n;
    if (a.i != b.i) return a.i < b.i;
    return a.J < b.J;
  }
};

std::recursive_mutex cache_mu;

KnTensor coproduct_x(int n, int l) {
  // Delta(X_l) = X_l ⊗ 1 + sigma^k_l ⊗ X_k
  KnTensor t = KnTensor::from_elements(
      {KnElement::generator(n, GeneratorSymbol::x(l)), KnElement::one(n)});
  for (int k = 1; k <= n; ++k) {
    t += KnTensor::from_elements({KnElement::from_ab(AbElement::sigma_factor(n, SigFactor(k, {l}))),
                                  KnElement::generator(n, GeneratorSymbol::x(k))});
  }
  return t;
}

const KnTensor& coproduct_sigma(int n, int i, const std::vector<int>& J) {
  static std::map<GenKey, KnTensor> cache;
  std::lock_guard<std::recursive_mutex> lock(cache_mu);
  GenKey key{n, i, J};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  KnTensor t(n, 2);
  if (J.size() == 1) {
    // Delta(sigma^i_j) = sigma^k_j ⊗ sigma^i_k
    for (int k = 1; k <= n; ++k)
      t += KnTensor::from_elements(
          {KnElement::from_ab(AbElement::sigma_factor(n, SigFactor(k, {J[0]}))),
           KnElement::from_ab(AbElement::sigma_factor(n, SigFactor(i, {k})))});
  } else {
    // commutator recursion Delta(sigma^i_{J,l}) = [Delta(X_l), Delta(sigma^i_J)]
    std::vector<int> head(J.begin(), J.end() - 1);
    int l = J.back();
    KnTensor dh = coproduct_sigma(n, i, head);
    KnTensor dx = coproduct_x(n, l);
    t = dx * dh - dh * dx;
  }
  return cache.emplace(std::move(key), std::move(t)).first->second;
}

KnTensor coproduct_ab_mono(int n, const AbMono& m) {
  // group-like sigma power, primitive log, cached sigma factors
  KnTensor t = KnTensor::unit(n, 2);
  if (m.sigma_pow != 0) {
    KnElement sp = KnElement::from_ab(AbElement::sigma_power(n, m.sigma_pow));
    t = t * KnTensor::from_elements({sp, sp});
  }
  for (int r = 0; r < m.log_pow; ++r) {
    KnElement lg = KnElement::from_ab(AbElement::log_sigma(n));
    KnTensor dl = KnTensor::from_elements({lg, KnElement::one(n)}) +
                  KnTensor::from_elements({KnElement::one(n), lg});
    t = t * dl;
  }
  for (const auto& [f, e] : m.sig) {
    const KnTensor& df = coproduct_sigma(n, f.i, f.J);
    for (int k = 0; k < e; ++k) t = t * df;
  }
  return t;
}

}  // namespace

KnTensor coproduct(const KnElement& k) {
  KnTensor r(k.n, 2);
  for (const auto& [key, c] : k.terms) {
    KnTensor t = coproduct_ab_mono(k.n, key.ab);
    for (int l = 0; l < k.n; ++l) {
      if (key.x[static_cast<size_t>(l)] == 0) continue;
      KnTensor dx = coproduct_x(k.n, l + 1);
      for (int e = 0; e < key.x[static_cast<size_t>(l)]; ++e) t = t * dx;
    }
    r += t.scaled(c);
  }
  return r;
}

KnTensor iterated_coproduct(const KnElement& k, int q) {
  if (q < 1) throw domain_error("iterated_coproduct: q >= 1 required");
  KnTensor t = KnTensor::from_elements({k});
  for (int i = 1; i < q; ++i) t = t.coproduct_leg(0);
  return t;
}

Rational counit(const KnElement& k) {
  Rational r = 0;
  for (const auto& [key, c] : k.terms) {
    bool xzero = std::all_of(key.x.begin(), key.x.end(), [](int e) { return e == 0; });
    if (!xzero) continue;
    AbElement f(k.n);
    f.terms[key.ab] = c;
    r += f.counit();
  }
  return r;
}

// ---- antipode ---------------------------------------------------------------

namespace {

// minor m^p_q = (-1)^{p+q} det of [sigma^i_j] with row q and column p removed
AbElement sigma_minor(int n, int p, int q) {
  std::vector<int> rows, cols;
  for (int i = 1; i <= n; ++i) {
    if (i != q) rows.push_back(i);
    if (i != p) cols.push_back(i);
  }
  int m = n - 1;
  AbElement det = AbElement::zero(n);
  if (m == 0) {
    det = AbElement::one(n);
  } else {
    std::vector<int> perm(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) perm[static_cast<size_t>(i)] = i;
    std::sort(perm.begin(), perm.end());
    do {
      int inv = 0;
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
          if (perm[static_cast<size_t>(i)] > perm[static_cast<size_t>(j)]) ++inv;
      AbElement t = AbElement::one(n);
      for (int i = 0; i < m; ++i)
        t = t * AbElement::sigma_factor(
                    n, SigFactor(rows[static_cast<size_t>(i)],
                                 {cols[static_cast<size_t>(perm[static_cast<size_t>(i)])]}));
      det += (inv % 2) ? -t : t;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return ((p + q) % 2) ? -det : det;
}

KnElement antipode_x(int n, int l);

const KnElement& antipode_sigma(int n, int i, const std::vector<int>& J) {
  static std::map<GenKey, KnElement> cache;
  static std::recursive_mutex mu;
  std::lock_guard<std::recursive_mutex> lock(mu);
  GenKey key{n, i, J};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  KnElement s(n);
  if (J.size() == 1) {
    // S(sigma^i_j) = sigma^{-1} (-1)^{i+j} det(remove row j, column i); fixed
    // by the antipode axiom via the adjugate identity A adj(A) = det(A) Id
    s = KnElement::from_ab(AbElement::sigma_power(n, -1) * sigma_minor(n, i, J[0]));
  } else {
    std::vector<int> head(J.begin(), J.end() - 1);
    int l = J.back();
    KnElement sh = antipode_sigma(n, i, head);
    KnElement sx = antipode_x(n, l);
    s = kn_mul(sh, sx) - kn_mul(sx, sh);
  }
  return cache.emplace(std::move(key), std::move(s)).first->second;
}

KnElement antipode_x(int n, int l) {
  // S(X_l) = -S(sigma^k_l) X_k
  KnElement s(n);
  for (int k = 1; k <= n; ++k) {
    XMono x(static_cast<size_t>(n), 0);
    x[static_cast<size_t>(k - 1)] = 1;
    s += kn_mul(antipode_sigma(n, k, {l}), KnElement::x_power(n, x)).scaled(-1);
  }
  return s;
}

}  // namespace

KnElement antipode(const KnElement& k) {
  int n = k.n;
  KnElement r(n);
  for (const auto& [key, c] : k.terms) {
    // anti-algebra map: S(ab-part · X^alpha) = S(X^alpha) · S(ab-part)
    KnElement sx = KnElement::one(n);
    for (int l = 0; l < n; ++l)
      for (int e = 0; e < key.x[static_cast<size_t>(l)]; ++e)
        sx = kn_mul(sx, antipode_x(n, l + 1));
    KnElement sab = KnElement::one(n);
    if (key.ab.sigma_pow != 0)
      sab = kn_mul(sab, KnElement::from_ab(AbElement::sigma_power(n, -key.ab.sigma_pow)));
    for (int e = 0; e < key.ab.log_pow; ++e)
      sab = kn_mul(sab, KnElement::from_ab(AbElement::log_sigma(n)).scaled(-1));
    for (const auto& [f, e] : key.ab.sig)
      for (int j = 0; j < e; ++j) sab = kn_mul(sab, antipode_sigma(n, f.i, f.J));
    r += kn_mul(sx, sab).scaled(c);
  }
  return r;
}

AbElement antipode_ab(const AbElement& f) {
  KnElement s = antipode(KnElement::from_ab(f));
  return s.ab_part();
}

KnElement contract_product(const KnTensor& t) {
  KnElement r(t.n);
  for (const auto& [k, c] : t.terms) {
    KnElement p = KnElement::one(t.n);
    for (const auto& leg : k) p = kn_mul(p, t.leg_element(leg));
    r += p.scaled(c);
  }
  return r;
}

BicrossedElement bicrossed_split(const KnElement& k) {
  BicrossedElement b;
  b.n = k.n;
  std::map<XMono, AbElement> grouped;
  for (const auto& [key, c] : k.terms) {
    auto it = grouped.find(key.x);
    if (it == grouped.end()) it = grouped.emplace(key.x, AbElement(k.n)).first;
    AbElement add(k.n);
    add.terms[key.ab] = c;
    it->second += add;
  }
  for (auto& [x, f] : grouped)
    if (!f.is_zero()) b.parts.emplace_back(std::move(f), x);
  return b;
}

KnElement bicrossedjoin_impl(const BicrossedElement& b) {
  KnElement r(b.n);
  for (const auto& [f, x] : b.parts) r += kn_mul(KnElement::from_ab(f), KnElement::x_power(b.n, x));
  return r;
}

KnElement bicrossed_join(const BicrossedElement& b) { return bicrossedjoin_impl(b); }

std::vector<GeneratorSymbol> generators_up_to(int n, int max_weight, bool with_log) {
  std::vector<GeneratorSymbol> gens;
  for (int l = 1; l <= n; ++l) gens.push_back(GeneratorSymbol::x(l));
  gens.push_back(GeneratorSymbol::sigma_pow(-1));
  if (n >= 2) gens.push_back(GeneratorSymbol::sigma_pow(1));
  if (with_log && n == 1) gens.push_back(GeneratorSymbol::log_sigma());
  // sigma^i_J with |J| <= max_weight (J sorted multisets)
  std::function<void(std::vector<int>&, int)> rec = [&](std::vector<int>& J, int start) {
    if (!J.empty()) {
      if (n == 1 && J.size() == 1) {
        // sigma^1_1 = sigma for n = 1; keep the group-like power instead
      } else {
        for (int i = 1; i <= n; ++i) gens.push_back(GeneratorSymbol::sigma(i, J));
      }
    }
    if (static_cast<int>(J.size()) >= max_weight) return;
    for (int j = start; j <= n; ++j) {
      J.push_back(j);
      rec(J, j);
      J.pop_back();
    }
  };
  std::vector<int> J;
  rec(J, 1);
  return gens;
}

MpiReport mpi_check(int n, int max_weight) {
  MpiReport rep;
  KnElement sig = KnElement::from_ab(AbElement::sigma_power(n, 1));
  KnElement sig_inv = KnElement::from_ab(AbElement::sigma_power(n, -1));
  // delta = eps on U(V): the modular character of the abelian V vanishes
  rep.counit_on_V = true;
  for (int l = 1; l <= n; ++l)
    if (!is_zero(counit(KnElement::generator(n, GeneratorSymbol::x(l))))) rep.counit_on_V = false;
  rep.grouplike_delta = (counit(sig_inv) == 1);
  for (const auto& g : generators_up_to(n, max_weight)) {
    KnElement h = KnElement::generator(n, g);
    KnElement s2 = antipode(antipode(h));
    MpiEntry e;
    e.generator = h.str();
    e.ad_sigma_inv = (s2 == kn_mul(sig_inv, h, sig));
    e.ad_sigma = (s2 == kn_mul(sig, h, sig_inv));
    rep.all_ad_sigma_inv &= e.ad_sigma_inv;
    rep.all_ad_sigma &= e.ad_sigma;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

}  // namespace kappa
