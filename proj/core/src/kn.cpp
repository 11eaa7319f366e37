#include "kappa/kn.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <numeric>

namespace kappa {

SigFactor::SigFactor(int i_, std::vector<int> J_) : i(i_), J(std::move(J_)) {
  if (J.empty()) throw domain_error("sigma factor with empty lower index set");
  std::sort(J.begin(), J.end());
}

GeneratorSymbol GeneratorSymbol::sigma(int i, std::vector<int> J) {
  GeneratorSymbol g;
  g.kind = Sigma;
  g.i = i;
  std::sort(J.begin(), J.end());
  g.J = std::move(J);
  return g;
}

int AbMono::weight() const {
  int w = std::abs(sigma_pow) + log_pow;
  for (const auto& [f, e] : sig) w += f.weight() * e;
  return w;
}

int PBWKey::weight() const {
  return ab.weight() + std::accumulate(x.begin(), x.end(), 0);
}

namespace {

// multiply a sorted factor list by f^e
void sig_mul(std::vector<std::pair<SigFactor, int>>& sig, const SigFactor& f, int e) {
  auto it = std::lower_bound(sig.begin(), sig.end(), f,
                             [](const auto& a, const SigFactor& b) { return a.first < b; });
  if (it != sig.end() && it->first == f) {
    it->second += e;
    if (it->second == 0) sig.erase(it);
  } else {
    sig.insert(it, {f, e});
  }
}

bool sig_divides(const std::vector<std::pair<SigFactor, int>>& denom,
                 const std::vector<std::pair<SigFactor, int>>& sig) {
  for (const auto& [f, e] : denom) {
    auto it = std::lower_bound(sig.begin(), sig.end(), f,
                               [](const auto& a, const SigFactor& b) { return a.first < b; });
    if (it == sig.end() || !(it->first == f) || it->second < e) return false;
  }
  return true;
}

// permutations of 1..n with signs
void for_each_perm(int n, const std::function<void(const std::vector<int>&, int)>& fn) {
  std::vector<int> perm(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i + 1;
  std::sort(perm.begin(), perm.end());
  do {
    int inv = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[static_cast<size_t>(i)] > perm[static_cast<size_t>(j)]) ++inv;
    fn(perm, (inv % 2) ? -1 : 1);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

}  // namespace

AbElement AbElement::one(int n) { return scalar(n, 1); }

AbElement AbElement::scalar(int n, const Rational& c) {
  AbElement e(n);
  if (!kappa::is_zero(c)) e.terms[AbMono{}] = c;
  return e;
}

AbElement AbElement::sigma_factor(int n, const SigFactor& f) {
  if (f.i < 1 || f.i > n) throw domain_error("sigma factor index out of range");
  for (int j : f.J)
    if (j < 1 || j > n) throw domain_error("sigma factor index out of range");
  AbElement e(n);
  AbMono m;
  m.sig = {{f, 1}};
  e.add_reduced(std::move(m), 1);
  return e;
}

AbElement AbElement::sigma_power(int n, int p) {
  AbElement e(n);
  AbMono m;
  m.sigma_pow = p;
  e.add_reduced(std::move(m), 1);
  return e;
}

AbElement AbElement::log_sigma(int n) {
  AbElement e(n);
  AbMono m;
  m.log_pow = 1;
  e.terms[m] = 1;
  return e;
}

bool AbElement::is_scalar() const {
  return terms.empty() || (terms.size() == 1 && terms.begin()->first.is_unit());
}

Rational AbElement::scalar_value() const {
  if (terms.empty()) return 0;
  if (!is_scalar()) throw domain_error("not a scalar");
  return terms.begin()->second;
}

AbElement det_element(int n) {
  AbElement det(n);
  for_each_perm(n, [&](const std::vector<int>& perm, int sign) {
    AbMono m;
    for (int i = 1; i <= n; ++i)
      sig_mul(m.sig, SigFactor(i, {perm[static_cast<size_t>(i - 1)]}), 1);
    det.add_reduced(std::move(m), sign);
  });
  return det;
}

AbElement det_derived(int n, int l) {
  AbElement d(n);
  for_each_perm(n, [&](const std::vector<int>& perm, int sign) {
    for (int slot = 1; slot <= n; ++slot) {
      AbMono m;
      for (int i = 1; i <= n; ++i) {
        std::vector<int> J = {perm[static_cast<size_t>(i - 1)]};
        if (i == slot) J.push_back(l);
        sig_mul(m.sig, SigFactor(i, J), 1);
      }
      d.add_reduced(std::move(m), sign);
    }
  });
  return d;
}

// Normal-form insertion. Handles: n=1 absorption of first-order factors into
// the sigma power; n>=2 expansion of positive sigma powers into det products
// and the localization rewrite sigma^{-1}·diag -> 1 - sum_{pi != id} ... .
void AbElement::add_reduced(AbMono m, Rational c) {
  if (kappa::is_zero(c)) return;
  if (n == 1) {
    // fold (1,{1})^e into sigma_pow
    SigFactor first(1, {1});
    auto it = std::lower_bound(m.sig.begin(), m.sig.end(), first,
                               [](const auto& a, const SigFactor& b) { return a.first < b; });
    if (it != m.sig.end() && it->first == first) {
      m.sigma_pow += it->second;
      m.sig.erase(it);
    }
    auto t = terms.find(m);
    if (t == terms.end()) {
      terms.emplace(std::move(m), std::move(c));
    } else {
      t->second += c;
      if (kappa::is_zero(t->second)) terms.erase(t);
    }
    return;
  }
  // n >= 2
  if (m.sigma_pow > 0) {
    // expand sigma^{+p} = det^p
    int p = m.sigma_pow;
    m.sigma_pow = 0;
    AbElement acc(n);
    acc.terms[m] = c;
    AbElement det = det_element(n);
    for (int k = 0; k < p; ++k) acc = acc * det;
    for (const auto& [mm, cc] : acc.terms) {
      auto t = terms.find(mm);
      if (t == terms.end())
        terms.emplace(mm, cc);
      else {
        t->second += cc;
        if (kappa::is_zero(t->second)) terms.erase(t);
      }
    }
    return;
  }
  if (m.sigma_pow < 0) {
    std::vector<std::pair<SigFactor, int>> diag;
    for (int i = 1; i <= n; ++i) diag.push_back({SigFactor(i, {i}), 1});
    if (sig_divides(diag, m.sig)) {
      // sigma^{-1}·diag = 1 - sum_{pi != id} sgn(pi) sigma^{-1} prod sigma^i_{pi(i)}
      AbMono rest = m;
      for (const auto& [f, e] : diag) sig_mul(rest.sig, f, -e);
      AbMono head = rest;
      head.sigma_pow += 1;
      add_reduced(std::move(head), c);
      for_each_perm(n, [&](const std::vector<int>& perm, int sign) {
        bool ident = true;
        for (int i = 1; i <= n; ++i)
          if (perm[static_cast<size_t>(i - 1)] != i) ident = false;
        if (ident) return;
        AbMono t = rest;
        for (int i = 1; i <= n; ++i)
          sig_mul(t.sig, SigFactor(i, {perm[static_cast<size_t>(i - 1)]}), 1);
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

AbElement operator+(const AbElement& a, const AbElement& b) {
  if (a.n != b.n) throw dimension_error("AbElement add: dimension mismatch");
  AbElement r = a;
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

AbElement operator-(const AbElement& a, const AbElement& b) { return a + b.scaled(-1); }

AbElement AbElement::scaled(const Rational& c) const {
  AbElement r(n);
  if (kappa::is_zero(c)) return r;
  for (const auto& [m, q] : terms) r.terms.emplace(m, q * c);
  return r;
}

AbElement operator*(const AbElement& a, const AbElement& b) {
  if (a.n != b.n) throw dimension_error("AbElement mul: dimension mismatch");
  AbElement r(a.n);
  for (const auto& [ma, ca] : a.terms) {
    for (const auto& [mb, cb] : b.terms) {
      AbMono m = ma;
      m.sigma_pow += mb.sigma_pow;
      m.log_pow += mb.log_pow;
      for (const auto& [f, e] : mb.sig) sig_mul(m.sig, f, e);
      r.add_reduced(std::move(m), ca * cb);
    }
  }
  return r;
}

AbElement AbElement::pow(int e) const {
  if (e < 0) throw domain_error("AbElement pow: negative exponent");
  AbElement r = one(n);
  for (int k = 0; k < e; ++k) r = r * *this;
  return r;
}

AbElement AbElement::derived(int l) const {
  AbElement r(n);
  for (const auto& [m, c] : terms) {
    // sigma-power slot
    if (m.sigma_pow != 0) {
      AbMono rest = m;
      rest.sigma_pow -= 1;
      AbElement part(n);
      part.terms[rest] = c * m.sigma_pow;
      r += part * det_derived(n, l);
    }
    // log slot: [X_l, log sigma] = sigma^{-1} [X_l, sigma]
    if (m.log_pow > 0) {
      AbMono rest = m;
      rest.log_pow -= 1;
      rest.sigma_pow -= 1;
      AbElement part(n);
      part.add_reduced(rest, c * m.log_pow);
      r += part * det_derived(n, l);
    }
    // factor slots
    for (size_t idx = 0; idx < m.sig.size(); ++idx) {
      const auto& [f, e] = m.sig[idx];
      AbMono rest = m;
      sig_mul(rest.sig, f, -1);
      std::vector<int> J = f.J;
      J.push_back(l);
      sig_mul(rest.sig, SigFactor(f.i, J), 1);
      AbElement part(n);
      part.add_reduced(rest, c * e);
      r += part;
    }
  }
  return r;
}

Rational AbElement::counit() const {
  Rational r = 0;
  for (const auto& [m, c] : terms) {
    if (m.log_pow > 0) continue;
    bool nonzero = true;
    for (const auto& [f, e] : m.sig) {
      if (f.weight() >= 2 || f.i != f.J[0]) {
        nonzero = false;
        break;
      }
    }
    if (nonzero) r += c;  // eps(sigma^p) = 1, eps(sigma^i_i) = 1
  }
  return r;
}

std::string AbElement::str() const { return KnElement::from_ab(*this).str(); }

// ---- KnElement -------------------------------------------------------------

KnElement KnElement::one(int n) { return scalar(n, 1); }

KnElement KnElement::scalar(int n, const Rational& c) {
  KnElement e(n);
  if (!kappa::is_zero(c)) e.terms[PBWKey{AbMono{}, XMono(static_cast<size_t>(n), 0)}] = c;
  return e;
}

KnElement KnElement::from_ab(const AbElement& f) {
  KnElement e(f.n);
  XMono x(static_cast<size_t>(f.n), 0);
  for (const auto& [m, c] : f.terms) e.terms[PBWKey{m, x}] = c;
  return e;
}

KnElement KnElement::x_power(int n, const XMono& alpha) {
  KnElement e(n);
  e.terms[PBWKey{AbMono{}, alpha}] = 1;
  return e;
}

KnElement KnElement::generator(int n, const GeneratorSymbol& g) {
  switch (g.kind) {
    case GeneratorSymbol::X: {
      if (g.i < 1 || g.i > n) throw domain_error("X index out of range");
      XMono x(static_cast<size_t>(n), 0);
      x[static_cast<size_t>(g.i - 1)] = 1;
      return x_power(n, x);
    }
    case GeneratorSymbol::Sigma:
      return from_ab(AbElement::sigma_factor(n, SigFactor(g.i, g.J)));
    case GeneratorSymbol::SigmaPow:
      return from_ab(AbElement::sigma_power(n, g.p));
    case GeneratorSymbol::LogSigma:
      if (n != 1) throw domain_error("log sigma only available for n = 1");
      return from_ab(AbElement::log_sigma(n));
  }
  throw domain_error("unknown generator");
}

bool KnElement::is_scalar() const {
  if (terms.empty()) return true;
  if (terms.size() != 1) return false;
  const auto& [k, c] = *terms.begin();
  return k.ab.is_unit() && std::all_of(k.x.begin(), k.x.end(), [](int e) { return e == 0; });
}

Rational KnElement::scalar_value() const {
  if (terms.empty()) return 0;
  if (!is_scalar()) throw domain_error("not a scalar");
  return terms.begin()->second;
}

bool KnElement::is_abelian() const {
  for (const auto& [k, c] : terms)
    for (int e : k.x)
      if (e != 0) return false;
  return true;
}

AbElement KnElement::ab_part() const {
  if (!is_abelian()) throw domain_error("element has X factors");
  AbElement f(n);
  for (const auto& [k, c] : terms) {
    auto t = f.terms.find(k.ab);
    if (t == f.terms.end())
      f.terms.emplace(k.ab, c);
    else
      t->second += c;
  }
  return f;
}

void KnElement::add_term(const AbElement& f, const XMono& x, const Rational& c) {
  for (const auto& [m, q] : f.terms) {
    PBWKey key{m, x};
    auto t = terms.find(key);
    if (t == terms.end()) {
      Rational v = q * c;
      if (!kappa::is_zero(v)) terms.emplace(std::move(key), std::move(v));
    } else {
      t->second += q * c;
      if (kappa::is_zero(t->second)) terms.erase(t);
    }
  }
}

KnElement operator+(const KnElement& a, const KnElement& b) {
  if (a.n != b.n) throw dimension_error("KnElement add: dimension mismatch");
  KnElement r = a;
  for (const auto& [k, c] : b.terms) {
    auto t = r.terms.find(k);
    if (t == r.terms.end())
      r.terms.emplace(k, c);
    else {
      t->second += c;
      if (is_zero(t->second)) r.terms.erase(t);
    }
  }
  return r;
}

KnElement operator-(const KnElement& a, const KnElement& b) { return a + b.scaled(-1); }

KnElement KnElement::scaled(const Rational& c) const {
  KnElement r(n);
  if (kappa::is_zero(c)) return r;
  for (const auto& [k, q] : terms) r.terms.emplace(k, q * c);
  return r;
}

namespace {

// X^alpha · f = sum_{beta <= alpha} binom(alpha, beta) D^beta(f) X^{alpha-beta}
void x_commute(const XMono& alpha, const AbElement& f,
               const std::function<void(const AbElement&, const XMono&, const Rational&)>& emit) {
  int n = static_cast<int>(alpha.size());
  // enumerate beta <= alpha
  XMono beta(static_cast<size_t>(n), 0);
  for (;;) {
    Rational binom = 1;
    for (int i = 0; i < n; ++i) binom *= binomial(alpha[static_cast<size_t>(i)], beta[static_cast<size_t>(i)]);
    AbElement d = f;
    bool zero = false;
    for (int i = 0; i < n && !zero; ++i)
      for (int k = 0; k < beta[static_cast<size_t>(i)]; ++k) {
        d = d.derived(i + 1);
        if (d.is_zero()) {
          zero = true;
          break;
        }
      }
    if (!zero && !d.is_zero()) {
      XMono rest(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) rest[static_cast<size_t>(i)] = alpha[static_cast<size_t>(i)] - beta[static_cast<size_t>(i)];
      emit(d, rest, binom);
    }
    // increment beta in the box [0, alpha]
    int i = 0;
    while (i < n) {
      if (beta[static_cast<size_t>(i)] < alpha[static_cast<size_t>(i)]) {
        ++beta[static_cast<size_t>(i)];
        break;
      }
      beta[static_cast<size_t>(i)] = 0;
      ++i;
    }
    if (i == n) break;
  }
}

}  // namespace

KnElement kn_mul(const KnElement& a, const KnElement& b) {
  if (a.n != b.n) throw dimension_error("kn_mul: dimension mismatch");
  KnElement r(a.n);
  for (const auto& [ka, ca] : a.terms) {
    AbElement fa(a.n);
    fa.terms[ka.ab] = 1;
    for (const auto& [kb, cb] : b.terms) {
      AbElement fb(a.n);
      fb.terms[kb.ab] = 1;
      Rational c = ca * cb;
      x_commute(ka.x, fb, [&](const AbElement& d, const XMono& rest, const Rational& binom) {
        XMono x(static_cast<size_t>(a.n));
        for (int i = 0; i < a.n; ++i) x[static_cast<size_t>(i)] = rest[static_cast<size_t>(i)] + kb.x[static_cast<size_t>(i)];
        r.add_term(fa * d, x, c * binom);
      });
    }
  }
  return r;
}

KnElement kn_mul(const KnElement& a, const KnElement& b, const KnElement& c) {
  return kn_mul(kn_mul(a, b), c);
}

KnElement pbw_normalize(const std::vector<GeneratorSymbol>& word, const Rational& coeff, int n) {
  KnElement acc = KnElement::scalar(n, coeff);
  for (const auto& g : word) acc = kn_mul(acc, KnElement::generator(n, g));
  return acc;
}

std::string pbw_key_str(const PBWKey& k, int n) {
  std::string out;
  auto app = [&out](const std::string& s) {
    if (!out.empty()) out += " ";
    out += s;
  };
  if (k.ab.sigma_pow == -1)
    app("sinv");
  else if (k.ab.sigma_pow == 1)
    app("s");
  else if (k.ab.sigma_pow != 0)
    app("s^" + std::to_string(k.ab.sigma_pow));
  if (k.ab.log_pow == 1)
    app("logs");
  else if (k.ab.log_pow > 1)
    app("logs^" + std::to_string(k.ab.log_pow));
  for (const auto& [f, e] : k.ab.sig) {
    std::string s = "s[" + std::to_string(f.i) + ";";
    for (size_t j = 0; j < f.J.size(); ++j) {
      if (j) s += ",";
      s += std::to_string(f.J[j]);
    }
    s += "]";
    if (e != 1) s += "^" + std::to_string(e);
    app(s);
  }
  for (int i = 0; i < n; ++i) {
    int e = k.x[static_cast<size_t>(i)];
    if (e == 0) continue;
    std::string s = "X" + std::to_string(i + 1);
    if (e != 1) s += "^" + std::to_string(e);
    app(s);
  }
  if (out.empty()) out = "1";
  return out;
}

std::string KnElement::str() const {
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
    std::string key = pbw_key_str(k, n);
    if (a == 1 && key != "1")
      out += key;
    else if (key == "1")
      out += to_string(a);
    else
      out += to_string(a) + " " + key;
    first = false;
  }
  return out;
}

}  // namespace kappa
