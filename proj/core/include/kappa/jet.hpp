#pragma once

#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "kappa/series.hpp"

namespace kappa {

// Order-N jet of an orientation preserving diffeomorphism of R^n, stored as
// base offset phi(0) plus zero-based components. The split makes the
// T / G-dagger decomposition structural.
template <class C>
class JetDiffeo {
  using T = coeff_traits<C>;

 public:
  int n = 1;
  int order = 1;
  std::vector<C> offset;                 // phi(0)
  std::vector<TruncSeries<C>> comps;     // phi(x) - phi(0), zero constant term

  JetDiffeo() = default;

  static JetDiffeo identity(int n, int order) {
    JetDiffeo j;
    j.n = n;
    j.order = order;
    j.offset.assign(static_cast<size_t>(n), T::zero());
    for (int i = 0; i < n; ++i) j.comps.push_back(TruncSeries<C>::variable(n, order, i));
    return j;
  }

  // Build from full components (constant terms become the offset).
  static JetDiffeo from_components(std::vector<TruncSeries<C>> full, bool check_orientation = true) {
    JetDiffeo j;
    j.n = static_cast<int>(full.size());
    if (j.n == 0) throw dimension_error("jet with no components");
    j.order = full[0].order;
    for (auto& f : full) {
      if (f.n_vars != j.n) throw dimension_error("jet component dimension mismatch");
      j.order = std::min(j.order, f.order);
    }
    for (auto& f : full) {
      j.offset.push_back(f.constant_term());
      TruncSeries<C> z = f.truncated(j.order);
      z.set(Multi(static_cast<size_t>(j.n), 0), T::zero());
      j.comps.push_back(std::move(z));
    }
    j.validate(check_orientation);
    return j;
  }

  void validate(bool check_orientation = true) const {
    C det = matrix_det(linear_part());
    if constexpr (std::is_same_v<C, Rational>) {
      if (is_zero(det)) throw singular_error("jet with singular linear part");
      if (check_orientation && sgn(det) < 0)
        throw domain_error("jet is not orientation preserving");
    } else {
      (void)det;  // symbolic coefficients: orientation has no sign
    }
  }

  CMatrix<C> linear_part() const {
    CMatrix<C> a(static_cast<size_t>(n), std::vector<C>(static_cast<size_t>(n), T::zero()));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Multi m(static_cast<size_t>(n), 0);
        m[static_cast<size_t>(j)] = 1;
        a[static_cast<size_t>(i)][static_cast<size_t>(j)] = comps[static_cast<size_t>(i)].at(m);
      }
    return a;
  }

  bool is_identity() const { return *this == identity(n, order); }
  bool is_translation() const {
    JetDiffeo t = identity(n, order);
    t.offset = offset;
    return *this == t;
  }
  bool in_gdagger() const {
    for (const auto& c : offset)
      if (!T::is_zero(c)) return false;
    return true;
  }
  bool is_linear() const {
    if (!in_gdagger()) return false;
    for (const auto& f : comps)
      for (const auto& [m, c] : f.coeffs)
        if (total_degree(m) > 1) return false;
    return true;
  }
  bool in_unipotent() const {  // N: psi(0)=0, psi'(0)=Id
    if (!in_gdagger()) return false;
    CMatrix<C> a = linear_part();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const C want = (i == j) ? T::one() : T::zero();
        if (!(a[static_cast<size_t>(i)][static_cast<size_t>(j)] == want)) return false;
      }
    return true;
  }

  JetDiffeo truncated_to(int new_order) const {
    JetDiffeo r = *this;
    r.order = std::min(order, new_order);
    for (auto& c : r.comps) c = c.truncated(r.order);
    return r;
  }

  // Full component i as a polynomial (offset restored).
  TruncSeries<C> full_component(int i) const {
    TruncSeries<C> f = comps[static_cast<size_t>(i)];
    f.add_to(Multi(static_cast<size_t>(n), 0), offset[static_cast<size_t>(i)]);
    return f;
  }

  std::vector<C> eval(const std::vector<C>& x) const {
    std::vector<C> y;
    y.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      y.push_back(offset[static_cast<size_t>(i)] + comps[static_cast<size_t>(i)].eval(x));
    return y;
  }

  friend bool operator==(const JetDiffeo& a, const JetDiffeo& b) {
    return a.n == b.n && a.order == b.order && a.offset == b.offset && a.comps == b.comps;
  }
  friend bool operator!=(const JetDiffeo& a, const JetDiffeo& b) { return !(a == b); }
  friend bool operator<(const JetDiffeo& a, const JetDiffeo& b) {
    if (a.n != b.n) return a.n < b.n;
    if (a.order != b.order) return a.order < b.order;
    if (a.offset != b.offset) return a.offset < b.offset;
    for (int i = 0; i < a.n; ++i) {
      const auto& ca = a.comps[static_cast<size_t>(i)].coeffs;
      const auto& cb = b.comps[static_cast<size_t>(i)].coeffs;
      if (ca != cb) return ca < cb;
    }
    return false;
  }

  // Jacobian matrix entries d_j phi^i as series.
  TruncSeries<C> partial(int i, const std::vector<int>& J) const {
    if (static_cast<int>(J.size()) > order)
      throw order_error("insufficient jet order for derivative");
    TruncSeries<C> f = comps[static_cast<size_t>(i)];
    for (int j : J) f = f.derivative(j);
    return f;
  }

  TruncSeries<C> jacobian_det() const {
    CMatrix<TruncSeries<C>> m(static_cast<size_t>(n),
                              std::vector<TruncSeries<C>>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        m[static_cast<size_t>(i)][static_cast<size_t>(j)] = comps[static_cast<size_t>(i)].derivative(j);
    // Leibniz over permutations, n small
    TruncSeries<C> det = TruncSeries<C>::zero(n, order);
    std::vector<int> perm(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
    do {
      int inv = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (perm[static_cast<size_t>(i)] > perm[static_cast<size_t>(j)]) ++inv;
      TruncSeries<C> t = TruncSeries<C>::constant(n, order, T::one());
      for (int i = 0; i < n; ++i) t = t * m[static_cast<size_t>(i)][static_cast<size_t>(perm[static_cast<size_t>(i)])];
      det += (inv % 2) ? -t : t;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
  }
};

// jet of phi∘psi, order = min(orders). Jets are polynomial germs, so the
// base-point shift is an exact re-expansion.
template <class C>
JetDiffeo<C> jet_compose(const JetDiffeo<C>& phi, const JetDiffeo<C>& psi) {
  if (phi.n != psi.n) throw dimension_error("jet_compose: dimension mismatch");
  int ord = std::min(phi.order, psi.order);
  JetDiffeo<C> r;
  r.n = phi.n;
  r.order = ord;
  for (int i = 0; i < phi.n; ++i) {
    // phi_i(psi(x)) = phi0_i(b_psi + psi0(x)) + b_phi_i
    TruncSeries<C> shifted = phi.comps[static_cast<size_t>(i)].truncated(ord).recentered(psi.offset);
    std::vector<TruncSeries<C>> inner;
    for (int j = 0; j < phi.n; ++j) inner.push_back(psi.comps[static_cast<size_t>(j)].truncated(ord));
    TruncSeries<C> full = series_compose(shifted, inner);
    full.add_to(Multi(static_cast<size_t>(phi.n), 0), phi.offset[static_cast<size_t>(i)]);
    r.offset.push_back(full.constant_term());
    full.set(Multi(static_cast<size_t>(phi.n), 0), coeff_traits<C>::zero());
    r.comps.push_back(std::move(full));
  }
  return r;
}

// phi^{-1} via translation split and series reversion.
template <class C>
JetDiffeo<C> jet_inverse(const JetDiffeo<C>& phi) {
  using T = coeff_traits<C>;
  std::vector<TruncSeries<C>> zero_based;
  for (int i = 0; i < phi.n; ++i) zero_based.push_back(phi.comps[static_cast<size_t>(i)]);
  std::vector<TruncSeries<C>> rev = series_revert(zero_based);
  // phi^{-1}(x) = psi^{-1}(x - b)
  JetDiffeo<C> r;
  r.n = phi.n;
  r.order = phi.order;
  std::vector<C> neg_b;
  for (const auto& c : phi.offset) neg_b.push_back(T::scale(c, -1));
  for (int i = 0; i < phi.n; ++i) {
    TruncSeries<C> f = rev[static_cast<size_t>(i)].recentered(neg_b);
    r.offset.push_back(f.constant_term());
    f.set(Multi(static_cast<size_t>(phi.n), 0), T::zero());
    r.comps.push_back(std::move(f));
  }
  return r;
}

// phi = translation ∘ psi with translation(x) = x + phi(0), psi in G-dagger.
template <class C>
std::pair<JetDiffeo<C>, JetDiffeo<C>> decompose_translation(const JetDiffeo<C>& phi) {
  JetDiffeo<C> tr = JetDiffeo<C>::identity(phi.n, phi.order);
  tr.offset = phi.offset;
  JetDiffeo<C> psi = phi;
  psi.offset.assign(static_cast<size_t>(phi.n), coeff_traits<C>::zero());
  return {tr, psi};
}

// Matched pair actions for psi in G-dagger and a translation phi by b:
// psi|>phi (x) = x + psi(b),  psi<|phi (x) = psi(x+b) - psi(b).
template <class C>
std::pair<JetDiffeo<C>, JetDiffeo<C>> matched_pair_T(const JetDiffeo<C>& psi,
                                                     const JetDiffeo<C>& phi) {
  using T = coeff_traits<C>;
  if (!psi.in_gdagger()) throw domain_error("matched_pair_T: psi(0) != 0");
  if (!phi.is_translation()) throw domain_error("matched_pair_T: phi is not a translation");
  const std::vector<C>& b = phi.offset;
  JetDiffeo<C> left = JetDiffeo<C>::identity(psi.n, psi.order);
  std::vector<C> psi_b;
  for (int i = 0; i < psi.n; ++i) psi_b.push_back(psi.comps[static_cast<size_t>(i)].eval(b));
  left.offset = psi_b;
  JetDiffeo<C> right;
  right.n = psi.n;
  right.order = psi.order;
  for (int i = 0; i < psi.n; ++i) {
    TruncSeries<C> f = psi.comps[static_cast<size_t>(i)].recentered(b);
    f.add_to(Multi(static_cast<size_t>(psi.n), 0), T::scale(psi_b[static_cast<size_t>(i)], -1));
    right.offset.push_back(T::zero());
    right.comps.push_back(std::move(f));
  }
  return {left, right};
}

// psi = lambda ∘ nu with lambda(x) = psi'(0)x and nu'(0) = Id.
template <class C>
std::pair<JetDiffeo<C>, JetDiffeo<C>> decompose_linear(const JetDiffeo<C>& psi) {
  using T = coeff_traits<C>;
  if (!psi.in_gdagger()) throw domain_error("decompose_linear: psi(0) != 0");
  CMatrix<C> a = psi.linear_part();
  CMatrix<C> ainv = matrix_inverse(a);
  JetDiffeo<C> lambda;
  lambda.n = psi.n;
  lambda.order = psi.order;
  lambda.offset.assign(static_cast<size_t>(psi.n), T::zero());
  for (int i = 0; i < psi.n; ++i) {
    TruncSeries<C> f = TruncSeries<C>::zero(psi.n, psi.order);
    for (int j = 0; j < psi.n; ++j)
      f += TruncSeries<C>::variable(psi.n, psi.order, j).scaled(a[static_cast<size_t>(i)][static_cast<size_t>(j)]);
    lambda.comps.push_back(std::move(f));
  }
  JetDiffeo<C> nu;
  nu.n = psi.n;
  nu.order = psi.order;
  nu.offset.assign(static_cast<size_t>(psi.n), T::zero());
  for (int i = 0; i < psi.n; ++i) {
    TruncSeries<C> f = TruncSeries<C>::zero(psi.n, psi.order);
    for (int j = 0; j < psi.n; ++j)
      f += psi.comps[static_cast<size_t>(j)].scaled(ainv[static_cast<size_t>(i)][static_cast<size_t>(j)]);
    nu.comps.push_back(std::move(f));
  }
  return {lambda, nu};
}

// (nu <| lambda)(x) = a^{-1} nu(a x), the right action of GL_n on N.
template <class C>
JetDiffeo<C> n_action_of_gl(const JetDiffeo<C>& nu, const JetDiffeo<C>& lambda) {
  if (!nu.in_unipotent()) throw domain_error("n_action_of_gl: nu not in N");
  if (!lambda.is_linear()) throw domain_error("n_action_of_gl: lambda not linear");
  JetDiffeo<C> r = jet_compose(jet_compose(jet_inverse(lambda), nu), lambda);
  return r;
}

// Finite sum of f U*_phi terms; terms with equal jets are merged, zero
// functions dropped.
template <class C>
class CrossedElement {
  using T = coeff_traits<C>;

 public:
  struct Term {
    TruncSeries<C> f;
    JetDiffeo<C> phi;
  };
  int n = 1;
  std::vector<Term> terms;

  CrossedElement() = default;
  explicit CrossedElement(int n_) : n(n_) {}
  CrossedElement(TruncSeries<C> f, JetDiffeo<C> phi) : n(phi.n) {
    add_term(std::move(f), std::move(phi));
  }

  static CrossedElement unit(int n, int order) {
    return CrossedElement(TruncSeries<C>::constant(n, order, T::one()),
                          JetDiffeo<C>::identity(n, order));
  }

  void add_term(TruncSeries<C> f, JetDiffeo<C> phi) {
    if (phi.n != n || f.n_vars != n) throw dimension_error("crossed term dimension mismatch");
    for (auto& t : terms) {
      if (t.phi == phi) {
        t.f += f;
        if (t.f.is_zero()) {
          tf_erase(&t);
        }
        return;
      }
    }
    if (!f.is_zero()) terms.push_back({std::move(f), std::move(phi)});
  }

  friend CrossedElement operator+(const CrossedElement& a, const CrossedElement& b) {
    CrossedElement r = a;
    for (const auto& t : b.terms) r.add_term(t.f, t.phi);
    return r;
  }
  CrossedElement scaled(const C& c) const {
    CrossedElement r(n);
    if (T::is_zero(c)) return r;
    for (const auto& t : terms) r.terms.push_back({t.f.scaled(c), t.phi});
    return r;
  }
  CrossedElement operator-() const { return scaled(T::scale(T::one(), -1)); }
  friend CrossedElement operator-(const CrossedElement& a, const CrossedElement& b) {
    return a + (-b);
  }

  bool is_zero() const { return terms.empty(); }

  // f U*_phi · g U*_psi = f·(g∘phi) U*_{psi∘phi}
  friend CrossedElement operator*(const CrossedElement& a, const CrossedElement& b) {
    if (a.n != b.n) throw dimension_error("crossed_mul: dimension mismatch");
    CrossedElement r(a.n);
    for (const auto& ta : a.terms) {
      for (const auto& tb : b.terms) {
        int ord = std::min(ta.f.order, tb.f.order);
        ord = std::min(ord, std::min(ta.phi.order, tb.phi.order));
        // g ∘ phi with g recentered at phi(0)
        TruncSeries<C> g = tb.f.truncated(ord).recentered(ta.phi.offset);
        std::vector<TruncSeries<C>> inner;
        for (int j = 0; j < a.n; ++j) inner.push_back(ta.phi.comps[static_cast<size_t>(j)].truncated(ord));
        TruncSeries<C> gophi = series_compose(g, inner);
        r.add_term(ta.f.truncated(ord) * gophi, jet_compose(tb.phi, ta.phi).truncated_to(ord));
      }
    }
    return r;
  }

  bool equal_up_to(const CrossedElement& o, int ord) const {
    CrossedElement d = *this - o;
    for (const auto& t : d.terms)
      if (!t.f.truncated(ord).is_zero()) return false;
    return true;
  }

  friend bool operator==(const CrossedElement& a, const CrossedElement& b) {
    CrossedElement d = a - b;
    return d.terms.empty();
  }

 private:
  void tf_erase(Term* t) {
    for (auto it = terms.begin(); it != terms.end(); ++it) {
      if (&*it == t) {
        terms.erase(it);
        return;
      }
    }
  }
};

}  // namespace kappa
