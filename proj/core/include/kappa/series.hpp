#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <type_traits>
#include <string>
#include <vector>

#include "kappa/rational.hpp"
#include "kappa/sym_poly.hpp"

namespace kappa {

template <class C>
struct coeff_traits;

template <>
struct coeff_traits<Rational> {
  static Rational zero() { return 0; }
  static Rational one() { return 1; }
  static bool is_zero(const Rational& c) { return sgn(c) == 0; }
  static Rational invert(const Rational& c) {
    if (is_zero(c)) throw singular_error("division by zero");
    return 1 / c;
  }
  static Rational scale(const Rational& c, const Rational& q) { return c * q; }
  static Rational from_rational(const Rational& q) { return q; }
  static std::string str(const Rational& c) { return to_string(c); }
};

template <>
struct coeff_traits<SymPoly> {
  static SymPoly zero() { return SymPoly(); }
  static SymPoly one() { return SymPoly(Rational(1)); }
  static bool is_zero(const SymPoly& c) { return c.is_zero(); }
  static SymPoly invert(const SymPoly& c) { return c.inverse(); }
  static SymPoly scale(const SymPoly& c, const Rational& q) { return c * q; }
  static SymPoly from_rational(const Rational& q) { return SymPoly(q); }
  static std::string str(const SymPoly& c) { return c.str(); }
};

using Multi = std::vector<int>;  // exponent multi-index

inline int total_degree(const Multi& m) { return std::accumulate(m.begin(), m.end(), 0); }

// Truncated multivariate power series: polynomial data of total degree <= order.
// All arithmetic closes within (n_vars, order); the order of a result is the
// minimum of the operand orders.
template <class C>
class TruncSeries {
  using T = coeff_traits<C>;

 public:
  int n_vars = 1;
  int order = 0;
  std::map<Multi, C> coeffs;

  TruncSeries() = default;
  TruncSeries(int n, int ord) : n_vars(n), order(ord) {}

  static TruncSeries zero(int n, int ord) { return TruncSeries(n, ord); }
  static TruncSeries constant(int n, int ord, const C& c) {
    TruncSeries s(n, ord);
    s.set(Multi(n, 0), c);
    return s;
  }
  static TruncSeries variable(int n, int ord, int i) {
    TruncSeries s(n, ord);
    if (ord >= 1) {
      Multi m(n, 0);
      m[i] = 1;
      s.set(m, T::one());
    }
    return s;
  }

  bool is_zero() const { return coeffs.empty(); }

  C at(const Multi& m) const {
    auto it = coeffs.find(m);
    return it == coeffs.end() ? T::zero() : it->second;
  }
  C constant_term() const { return at(Multi(n_vars, 0)); }

  void set(const Multi& m, const C& c) {
    if (total_degree(m) > order) return;
    if (T::is_zero(c))
      coeffs.erase(m);
    else
      coeffs[m] = c;
  }
  void add_to(const Multi& m, const C& c) {
    if (total_degree(m) > order) return;
    auto it = coeffs.find(m);
    if (it == coeffs.end()) {
      if (!T::is_zero(c)) coeffs.emplace(m, c);
    } else {
      it->second = it->second + c;
      if (T::is_zero(it->second)) coeffs.erase(it);
    }
  }

  TruncSeries truncated(int new_order) const {
    TruncSeries r(n_vars, std::min(order, new_order));
    for (const auto& [m, c] : coeffs)
      if (total_degree(m) <= r.order) r.coeffs.emplace(m, c);
    return r;
  }

  friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) {
    check_dims(a, b);
    TruncSeries r = a.truncated(std::min(a.order, b.order));
    for (const auto& [m, c] : b.coeffs) r.add_to(m, c);
    return r;
  }
  friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) {
    return a + (-b);
  }
  TruncSeries operator-() const {
    TruncSeries r(n_vars, order);
    for (const auto& [m, c] : coeffs) r.coeffs.emplace(m, T::scale(c, -1));
    return r;
  }
  friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
    check_dims(a, b);
    TruncSeries r(a.n_vars, std::min(a.order, b.order));
    for (const auto& [ma, ca] : a.coeffs) {
      if (total_degree(ma) > r.order) continue;
      for (const auto& [mb, cb] : b.coeffs) {
        Multi m(a.n_vars);
        int deg = 0;
        for (int i = 0; i < a.n_vars; ++i) deg += (m[i] = ma[i] + mb[i]);
        if (deg > r.order) continue;
        r.add_to(m, ca * cb);
      }
    }
    return r;
  }
  TruncSeries& operator+=(const TruncSeries& o) { return *this = *this + o; }
  TruncSeries& operator-=(const TruncSeries& o) { return *this = *this - o; }
  TruncSeries& operator*=(const TruncSeries& o) { return *this = *this * o; }

  TruncSeries scaled(const C& c) const {
    TruncSeries r(n_vars, order);
    for (const auto& [m, q] : coeffs) {
      C v = q * c;
      if (!T::is_zero(v)) r.coeffs.emplace(m, v);
    }
    return r;
  }
  template <class D = C, std::enable_if_t<!std::is_same_v<D, Rational>, int> = 0>
  TruncSeries scaled(const Rational& q) const {
    return scaled(T::from_rational(q));
  }

  TruncSeries derivative(int i) const {
    TruncSeries r(n_vars, order);  // polynomial data, no order loss on stored terms
    for (const auto& [m, c] : coeffs) {
      if (m[i] == 0) continue;
      Multi d = m;
      d[i] -= 1;
      r.add_to(d, T::scale(c, m[i]));
    }
    return r;
  }

  // Exact polynomial evaluation.
  C eval(const std::vector<C>& x) const {
    C acc = T::zero();
    for (const auto& [m, c] : coeffs) {
      C t = c;
      for (int i = 0; i < n_vars; ++i)
        for (int e = 0; e < m[i]; ++e) t = t * x[static_cast<size_t>(i)];
      acc = acc + t;
    }
    return acc;
  }

  // f(b + x) expanded as a polynomial in x, truncated to `order`.
  TruncSeries recentered(const std::vector<C>& b) const {
    TruncSeries r(n_vars, order);
    for (const auto& [m, c] : coeffs) {
      // expand prod_i (b_i + x_i)^{m_i}
      TruncSeries term = constant(n_vars, order, c);
      for (int i = 0; i < n_vars; ++i) {
        if (m[i] == 0) continue;
        TruncSeries lin = variable(n_vars, order, i);
        lin.add_to(Multi(n_vars, 0), b[static_cast<size_t>(i)]);
        for (int e = 0; e < m[i]; ++e) term = term * lin;
      }
      r += term;
    }
    return r;
  }

  friend bool operator==(const TruncSeries& a, const TruncSeries& b) {
    return a.n_vars == b.n_vars && a.order == b.order && a.coeffs == b.coeffs;
  }
  friend bool operator!=(const TruncSeries& a, const TruncSeries& b) { return !(a == b); }

  bool equal_up_to(const TruncSeries& o, int ord) const {
    if (n_vars != o.n_vars) return false;
    if (order < ord || o.order < ord) throw order_error("insufficient order for comparison");
    return truncated(ord).coeffs == o.truncated(ord).coeffs;
  }

  std::string str(const std::vector<std::string>& vars = {}) const {
    if (coeffs.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : coeffs) {
      if (!first) out += " + ";
      first = false;
      std::string mono;
      for (int i = 0; i < n_vars; ++i) {
        if (m[i] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += i < static_cast<int>(vars.size()) ? vars[static_cast<size_t>(i)]
                                                  : (n_vars == 1 ? "x" : "x" + std::to_string(i + 1));
        if (m[i] != 1) mono += "^" + std::to_string(m[i]);
      }
      std::string cs = T::str(c);
      if (mono.empty())
        out += cs;
      else if (cs == "1")
        out += mono;
      else
        out += "(" + cs + ")*" + mono;
    }
    return out;
  }

  static void check_dims(const TruncSeries& a, const TruncSeries& b) {
    if (a.n_vars != b.n_vars) throw dimension_error("series dimension mismatch");
  }
};

// Taylor expansion of outer∘inner. Every inner component must have zero
// constant term (callers shift base points explicitly), which makes the
// truncated result exact at order min(outer.order, inner orders).
template <class C>
TruncSeries<C> series_compose(const TruncSeries<C>& outer,
                              const std::vector<TruncSeries<C>>& inner) {
  using T = coeff_traits<C>;
  if (static_cast<int>(inner.size()) != outer.n_vars)
    throw dimension_error("compose: outer arity != number of inner series");
  int ord = outer.order;
  int n = inner.empty() ? 0 : inner[0].n_vars;
  for (const auto& g : inner) {
    if (g.n_vars != n) throw dimension_error("compose: inner dimension mismatch");
    ord = std::min(ord, g.order);
    if (!T::is_zero(g.constant_term()))
      throw domain_error("compose: inner series has nonzero constant term");
  }
  TruncSeries<C> r(n, ord);
  // memoized powers of each inner component
  std::vector<std::vector<TruncSeries<C>>> pow(inner.size());
  for (size_t i = 0; i < inner.size(); ++i) pow[i].push_back(TruncSeries<C>::constant(n, ord, T::one()));
  auto power = [&](size_t i, int e) -> const TruncSeries<C>& {
    while (static_cast<int>(pow[i].size()) <= e)
      pow[i].push_back(pow[i].back() * inner[i].truncated(ord));
    return pow[i][static_cast<size_t>(e)];
  };
  for (const auto& [m, c] : outer.coeffs) {
    if (total_degree(m) > ord) continue;  // valuation >= |m| kills it anyway
    TruncSeries<C> term = TruncSeries<C>::constant(n, ord, c);
    for (int i = 0; i < outer.n_vars; ++i)
      if (m[i] > 0) term = term * power(static_cast<size_t>(i), m[i]);
    r += term;
  }
  return r;
}

template <class C>
std::vector<TruncSeries<C>> series_compose(const std::vector<TruncSeries<C>>& outer,
                                           const std::vector<TruncSeries<C>>& inner) {
  std::vector<TruncSeries<C>> r;
  r.reserve(outer.size());
  for (const auto& f : outer) r.push_back(series_compose(f, inner));
  return r;
}

// 1/a with invertible constant term: a = c(1+u) => a^{-1} = c^{-1} sum (-u)^k.
template <class C>
TruncSeries<C> series_reciprocal(const TruncSeries<C>& a) {
  using T = coeff_traits<C>;
  C c0 = a.constant_term();
  if (T::is_zero(c0)) throw singular_error("reciprocal: zero constant term");
  C inv = T::invert(c0);
  TruncSeries<C> u = a.scaled(inv);
  u.add_to(Multi(a.n_vars, 0), T::scale(T::one(), -1));  // u = a/c - 1
  TruncSeries<C> r = TruncSeries<C>::constant(a.n_vars, a.order, T::one());
  TruncSeries<C> p = TruncSeries<C>::constant(a.n_vars, a.order, T::one());
  for (int k = 1; k <= a.order; ++k) {
    p = p * (-u);
    r += p;
  }
  return r.scaled(inv);
}

// log(a) for a with constant term 1.
template <class C>
TruncSeries<C> series_log_unit(const TruncSeries<C>& a) {
  using T = coeff_traits<C>;
  if (!(a.constant_term() == T::one()))
    throw domain_error("log: constant term must be 1");
  TruncSeries<C> u = a;
  u.add_to(Multi(a.n_vars, 0), T::scale(T::one(), -1));
  TruncSeries<C> r = TruncSeries<C>::zero(a.n_vars, a.order);
  TruncSeries<C> p = TruncSeries<C>::constant(a.n_vars, a.order, T::one());
  for (int k = 1; k <= a.order; ++k) {
    p = p * u;
    r += p.scaled(Rational(((k % 2) ? 1 : -1), k));
  }
  return r;
}

// Dense n x n matrices over the coefficient ring; enough for jet linear parts.
template <class C>
using CMatrix = std::vector<std::vector<C>>;

template <class C>
C matrix_det(const CMatrix<C>& a) {
  using T = coeff_traits<C>;
  int n = static_cast<int>(a.size());
  std::vector<int> perm(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
  C det = T::zero();
  // Leibniz expansion; n <= 3 in practice.
  std::sort(perm.begin(), perm.end());
  do {
    int inv = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[static_cast<size_t>(i)] > perm[static_cast<size_t>(j)]) ++inv;
    C t = T::one();
    for (int i = 0; i < n; ++i) t = t * a[static_cast<size_t>(i)][static_cast<size_t>(perm[static_cast<size_t>(i)])];
    det = det + T::scale(t, (inv % 2) ? -1 : 1);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

// Gauss-Jordan inverse; requires divisions to succeed in C (field, or Laurent
// monomial pivots for SymPoly).
template <class C>
CMatrix<C> matrix_inverse(const CMatrix<C>& a) {
  using T = coeff_traits<C>;
  int n = static_cast<int>(a.size());
  CMatrix<C> m = a, inv(static_cast<size_t>(n), std::vector<C>(static_cast<size_t>(n), T::zero()));
  for (int i = 0; i < n; ++i) inv[static_cast<size_t>(i)][static_cast<size_t>(i)] = T::one();
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (!T::is_zero(m[static_cast<size_t>(r)][static_cast<size_t>(col)])) { piv = r; break; }
    if (piv < 0) throw singular_error("matrix not invertible");
    std::swap(m[static_cast<size_t>(piv)], m[static_cast<size_t>(col)]);
    std::swap(inv[static_cast<size_t>(piv)], inv[static_cast<size_t>(col)]);
    C d = T::invert(m[static_cast<size_t>(col)][static_cast<size_t>(col)]);
    for (int j = 0; j < n; ++j) {
      m[static_cast<size_t>(col)][static_cast<size_t>(j)] = m[static_cast<size_t>(col)][static_cast<size_t>(j)] * d;
      inv[static_cast<size_t>(col)][static_cast<size_t>(j)] = inv[static_cast<size_t>(col)][static_cast<size_t>(j)] * d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      C f = m[static_cast<size_t>(r)][static_cast<size_t>(col)];
      if (T::is_zero(f)) continue;
      for (int j = 0; j < n; ++j) {
        m[static_cast<size_t>(r)][static_cast<size_t>(j)] =
            m[static_cast<size_t>(r)][static_cast<size_t>(j)] - f * m[static_cast<size_t>(col)][static_cast<size_t>(j)];
        inv[static_cast<size_t>(r)][static_cast<size_t>(j)] =
            inv[static_cast<size_t>(r)][static_cast<size_t>(j)] - f * inv[static_cast<size_t>(col)][static_cast<size_t>(j)];
      }
    }
  }
  return inv;
}

// Compositional inverse of f (zero constant term, invertible linear part):
// returns g with f∘g = g∘f = id up to the order. Fixed point iteration
// g <- A^{-1}(x - h(g)) where f(x) = Ax + h(x) gains one order per step.
template <class C>
std::vector<TruncSeries<C>> series_revert(const std::vector<TruncSeries<C>>& f) {
  using T = coeff_traits<C>;
  int n = static_cast<int>(f.size());
  if (n == 0) return {};
  int ord = f[0].order;
  for (const auto& fi : f) {
    ord = std::min(ord, fi.order);
    if (fi.n_vars != n) throw dimension_error("revert: need n series in n variables");
    if (!T::is_zero(fi.constant_term())) throw domain_error("revert: nonzero constant term");
  }
  CMatrix<C> A(static_cast<size_t>(n), std::vector<C>(static_cast<size_t>(n), T::zero()));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Multi m(n, 0);
      m[j] = 1;
      A[static_cast<size_t>(i)][static_cast<size_t>(j)] = f[static_cast<size_t>(i)].at(m);
    }
  CMatrix<C> Ainv = matrix_inverse(A);
  // h = f - Ax
  std::vector<TruncSeries<C>> h(f.begin(), f.end());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Multi m(n, 0);
      m[j] = 1;
      h[static_cast<size_t>(i)].add_to(m, T::scale(A[static_cast<size_t>(i)][static_cast<size_t>(j)], -1));
    }
  auto apply_Ainv = [&](const std::vector<TruncSeries<C>>& v) {
    std::vector<TruncSeries<C>> r;
    r.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      TruncSeries<C> s = TruncSeries<C>::zero(n, ord);
      for (int j = 0; j < n; ++j) s += v[static_cast<size_t>(j)].scaled(Ainv[static_cast<size_t>(i)][static_cast<size_t>(j)]);
      r.push_back(std::move(s));
    }
    return r;
  };
  std::vector<TruncSeries<C>> g;
  for (int i = 0; i < n; ++i) {
    TruncSeries<C> xi = TruncSeries<C>::variable(n, ord, i);
    g.push_back(xi);
  }
  g = apply_Ainv(g);  // g0 = A^{-1} x
  for (int it = 0; it < ord; ++it) {
    // g <- A^{-1}(x - h(g))
    std::vector<TruncSeries<C>> hg;
    hg.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) hg.push_back(series_compose(h[static_cast<size_t>(i)].truncated(ord), g));
    std::vector<TruncSeries<C>> rhs;
    rhs.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) rhs.push_back(TruncSeries<C>::variable(n, ord, i) - hg[static_cast<size_t>(i)]);
    g = apply_Ainv(rhs);
  }
  return g;
}

}  // namespace kappa
