#pragma once

#include <map>
#include <string>
#include <vector>

#include "kappa/jet.hpp"
#include "kappa/rational.hpp"

namespace kappa {

// sigma^i_{j_1..j_k}: upper index i, sorted lower multiset J (1-based).
struct SigFactor {
  int i = 1;
  std::vector<int> J;

  SigFactor() = default;
  SigFactor(int i_, std::vector<int> J_);

  int weight() const { return static_cast<int>(J.size()); }
  friend bool operator==(const SigFactor& a, const SigFactor& b) {
    return a.i == b.i && a.J == b.J;
  }
  friend bool operator<(const SigFactor& a, const SigFactor& b) {
    if (a.i != b.i) return a.i < b.i;
    return a.J < b.J;  // lexicographic on (i, J)
  }
};

// Monomial in the commutative subalgebra K_ab (optionally of K~_1 with log):
// sigma^{sigma_pow} · (log sigma)^{log_pow} · prod sig-factors.
// Normal form: n = 1 keeps no first-order factor (sigma = sigma^1_1 absorbed
// into sigma_pow); n >= 2 keeps sigma_pow <= 0 and, when sigma_pow < 0, the
// diagonal monomial sigma^1_1...sigma^n_n does not divide the factor part.
struct AbMono {
  int sigma_pow = 0;
  int log_pow = 0;
  std::vector<std::pair<SigFactor, int>> sig;  // sorted factors, exponents >= 1

  bool is_unit() const { return sigma_pow == 0 && log_pow == 0 && sig.empty(); }
  int weight() const;
  friend bool operator==(const AbMono& a, const AbMono& b) {
    return a.sigma_pow == b.sigma_pow && a.log_pow == b.log_pow && a.sig == b.sig;
  }
  friend bool operator<(const AbMono& a, const AbMono& b) {
    if (a.sigma_pow != b.sigma_pow) return a.sigma_pow < b.sigma_pow;
    if (a.log_pow != b.log_pow) return a.log_pow < b.log_pow;
    return a.sig < b.sig;
  }
};

// Element of K_ab with exact rational coefficients, kept in normal form.
class AbElement {
 public:
  int n = 1;
  std::map<AbMono, Rational> terms;

  AbElement() = default;
  explicit AbElement(int n_) : n(n_) {}

  static AbElement zero(int n) { return AbElement(n); }
  static AbElement one(int n);
  static AbElement scalar(int n, const Rational& c);
  static AbElement sigma_factor(int n, const SigFactor& f);  // sigma^i_J
  static AbElement sigma_power(int n, int p);                // sigma^p (det^p)
  static AbElement log_sigma(int n);

  bool is_zero() const { return terms.empty(); }
  bool is_scalar() const;
  Rational scalar_value() const;

  void add_reduced(AbMono m, Rational c);  // reduce + accumulate

  friend AbElement operator+(const AbElement& a, const AbElement& b);
  friend AbElement operator-(const AbElement& a, const AbElement& b);
  friend AbElement operator*(const AbElement& a, const AbElement& b);
  AbElement operator-() const { return scaled(-1); }
  AbElement scaled(const Rational& c) const;
  AbElement& operator+=(const AbElement& o) { return *this = *this + o; }
  AbElement& operator*=(const AbElement& o) { return *this = *this * o; }
  friend bool operator==(const AbElement& a, const AbElement& b) {
    return a.n == b.n && a.terms == b.terms;
  }
  friend bool operator<(const AbElement& a, const AbElement& b) { return a.terms < b.terms; }

  AbElement pow(int e) const;

  // [X_l, -] as a derivation of K_ab; the commutation engine of the PBW
  // rewriting (X_l f = f X_l + D_l(f)).
  AbElement derived(int l) const;

  Rational counit() const;

  std::string str() const;
};

// det(sigma^i_j) expanded as an element of K_ab (n >= 2); for n = 1 this is
// just sigma.
AbElement det_element(int n);
// Same with index l appended to one factor per Leibniz slot: [X_l, det].
AbElement det_derived(int n, int l);

using XMono = std::vector<int>;  // exponents of X_1..X_n

// PBW basis monomial sigma^{m} (log s)^r sig-factors X^alpha.
struct PBWKey {
  AbMono ab;
  XMono x;

  int weight() const;
  friend bool operator==(const PBWKey& a, const PBWKey& b) { return a.ab == b.ab && a.x == b.x; }
  friend bool operator<(const PBWKey& a, const PBWKey& b) {
    if (!(a.ab == b.ab)) return a.ab < b.ab;
    return a.x < b.x;
  }
};

// Generator symbols of K_n / K~_1.
struct GeneratorSymbol {
  enum Kind { X, Sigma, SigmaPow, LogSigma } kind = X;
  int i = 1;           // X index, or sigma upper index
  std::vector<int> J;  // sigma lower indices (sorted on construction)
  int p = 1;           // power for SigmaPow

  static GeneratorSymbol x(int l) { return {X, l, {}, 1}; }
  static GeneratorSymbol sigma(int i, std::vector<int> J);
  static GeneratorSymbol sigma_pow(int p) { return {SigmaPow, 1, {}, p}; }
  static GeneratorSymbol log_sigma() { return {LogSigma, 1, {}, 1}; }

  int weight() const {
    switch (kind) {
      case X: return 1;
      case Sigma: return static_cast<int>(J.size());
      case SigmaPow: return std::abs(p);
      case LogSigma: return 1;
    }
    return 1;
  }
};

// Exact-rational linear combination of PBW monomials.
class KnElement {
 public:
  int n = 1;
  std::map<PBWKey, Rational> terms;

  KnElement() = default;
  explicit KnElement(int n_) : n(n_) {}

  static KnElement zero(int n) { return KnElement(n); }
  static KnElement one(int n);
  static KnElement scalar(int n, const Rational& c);
  static KnElement from_ab(const AbElement& f);
  static KnElement generator(int n, const GeneratorSymbol& g);
  static KnElement x_power(int n, const XMono& alpha);

  bool is_zero() const { return terms.empty(); }
  bool is_scalar() const;
  Rational scalar_value() const;
  bool is_abelian() const;  // no X factors
  AbElement ab_part() const;  // requires is_abelian()

  void add_term(const AbElement& f, const XMono& x, const Rational& c);

  friend KnElement operator+(const KnElement& a, const KnElement& b);
  friend KnElement operator-(const KnElement& a, const KnElement& b);
  KnElement operator-() const { return scaled(-1); }
  KnElement scaled(const Rational& c) const;
  KnElement& operator+=(const KnElement& o) { return *this = *this + o; }
  friend bool operator==(const KnElement& a, const KnElement& b) {
    return a.n == b.n && a.terms == b.terms;
  }
  friend bool operator!=(const KnElement& a, const KnElement& b) { return !(a == b); }
  friend bool operator<(const KnElement& a, const KnElement& b) { return a.terms < b.terms; }

  std::string str() const;
};

// Product in K_n, lands in the PBW normal form. Associative and unital; agrees
// with operator composition on crossed elements.
KnElement kn_mul(const KnElement& a, const KnElement& b);
KnElement kn_mul(const KnElement& a, const KnElement& b, const KnElement& c);

// Normal form of a word of generators times a coefficient.
KnElement pbw_normalize(const std::vector<GeneratorSymbol>& word, const Rational& coeff = 1,
                        int n = 1);

std::string pbw_key_str(const PBWKey& k, int n);

// ---- action on crossed elements ------------------------------------------

// Multiplier series of one commutative monomial on the term f U*_phi: the
// product of d_J(phi^i) factors, det J(phi)^{sigma_pow}, and log det J(phi).
// For Rational coefficients log requires det J(phi)(0) = 1; with symbolic
// coefficients a per-jet indeterminate log_det is introduced.
template <class C>
TruncSeries<C> ab_mono_multiplier(const AbMono& m, const JetDiffeo<C>& phi);

template <class C>
CrossedElement<C> apply_generator(const GeneratorSymbol& g, const CrossedElement<C>& a);

template <class C>
CrossedElement<C> apply_element(const KnElement& k, const CrossedElement<C>& a);

// gamma_K(f)(psi) = f(U*_psi) U_psi for f in K_ab: the multiplier function.
template <class C>
TruncSeries<C> gamma_K(const AbElement& f, const JetDiffeo<C>& psi);

// ---- template implementations ---------------------------------------------

template <class C>
TruncSeries<C> ab_mono_multiplier(const AbMono& m, const JetDiffeo<C>& phi) {
  using T = coeff_traits<C>;
  int n = phi.n;
  TruncSeries<C> r = TruncSeries<C>::constant(n, phi.order, T::one());
  for (const auto& [f, e] : m.sig) {
    if (f.weight() > phi.order) throw order_error("insufficient jet order for sigma factor");
    std::vector<int> J0;
    for (int j : f.J) J0.push_back(j - 1);
    TruncSeries<C> d = phi.partial(f.i - 1, J0);
    for (int k = 0; k < e; ++k) r = r * d;
  }
  if (m.sigma_pow != 0) {
    TruncSeries<C> det = phi.jacobian_det();
    TruncSeries<C> p = m.sigma_pow > 0 ? det : series_reciprocal(det);
    for (int k = 0; k < std::abs(m.sigma_pow); ++k) r = r * p;
  }
  if (m.log_pow > 0) {
    TruncSeries<C> det = phi.jacobian_det();
    C c0 = det.constant_term();
    TruncSeries<C> unit = det.scaled(T::invert(c0));
    TruncSeries<C> lg = series_log_unit(unit);
    if constexpr (std::is_same_v<C, Rational>) {
      if (!(c0 == T::one()))
        throw domain_error("log sigma on rational jets needs det J(phi)(0) = 1");
    } else {
      // keep log det J(phi)(0) as a named indeterminate
      static int counter = 0;
      SymPoly c = SymPoly::variable("logdet" + std::to_string(counter++));
      lg.add_to(Multi(static_cast<size_t>(n), 0), c);
    }
    for (int k = 0; k < m.log_pow; ++k) r = r * lg;
  }
  return r;
}

template <class C>
CrossedElement<C> apply_pbw_key(const PBWKey& key, const CrossedElement<C>& a) {
  CrossedElement<C> r(a.n);
  for (const auto& t : a.terms) {
    TruncSeries<C> f = t.f;
    for (int l = 0; l < a.n; ++l)
      for (int e = 0; e < key.x[static_cast<size_t>(l)]; ++e) f = f.derivative(l);
    f = f * ab_mono_multiplier(key.ab, t.phi);
    r.add_term(std::move(f), t.phi);
  }
  return r;
}

template <class C>
CrossedElement<C> apply_element(const KnElement& k, const CrossedElement<C>& a) {
  if (k.n != a.n) throw dimension_error("apply_element: dimension mismatch");
  CrossedElement<C> r(a.n);
  for (const auto& [key, c] : k.terms) {
    CrossedElement<C> part = apply_pbw_key(key, a);
    r = r + part.scaled(coeff_traits<C>::from_rational(c));
  }
  return r;
}

template <class C>
CrossedElement<C> apply_generator(const GeneratorSymbol& g, const CrossedElement<C>& a) {
  return apply_element(KnElement::generator(a.n, g), a);
}

template <class C>
TruncSeries<C> gamma_K(const AbElement& f, const JetDiffeo<C>& psi) {
  if (f.n != psi.n) throw dimension_error("gamma_K: dimension mismatch");
  TruncSeries<C> r = TruncSeries<C>::zero(psi.n, psi.order);
  for (const auto& [m, c] : f.terms)
    r += ab_mono_multiplier(m, psi).scaled(coeff_traits<C>::from_rational(c));
  return r;
}

}  // namespace kappa
