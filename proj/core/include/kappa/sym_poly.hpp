#pragma once

#include <algorithm>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "kappa/rational.hpp"

namespace kappa {

// Interned symbol names for coefficient indeterminates (generic jet
// coefficients, per-jet log constants, inverse-matrix entries, ...).
class SymbolTable {
 public:
  static int intern(const std::string& name) {
    auto& t = instance();
    std::lock_guard<std::mutex> lock(t.mu_);
    auto it = t.ids_.find(name);
    if (it != t.ids_.end()) return it->second;
    int id = static_cast<int>(t.names_.size());
    t.names_.push_back(name);
    t.ids_.emplace(name, id);
    return id;
  }
  static std::string name(int id) {
    auto& t = instance();
    std::lock_guard<std::mutex> lock(t.mu_);
    return t.names_.at(static_cast<size_t>(id));
  }

 private:
  static SymbolTable& instance() {
    static SymbolTable t;
    return t;
  }
  std::mutex mu_;
  std::vector<std::string> names_;
  std::map<std::string, int> ids_;
};

inline int sym(const std::string& name) { return SymbolTable::intern(name); }

// Monomial in interned symbols with integer (Laurent) exponents.
using SymMono = std::vector<std::pair<int, int>>;  // sorted by symbol id, exp != 0

// Multivariate Laurent polynomial over Q. Negative exponents are used only
// for symbols that stand for invertible quantities (e.g. a jet's linear
// coefficient in one variable).
class SymPoly {
 public:
  std::map<SymMono, Rational> terms;

  SymPoly() = default;
  explicit SymPoly(const Rational& c) {
    if (!kappa::is_zero(c)) terms[{}] = c;
  }
  static SymPoly variable(int id, int exp = 1) {
    SymPoly p;
    if (exp == 0) return SymPoly(Rational(1));
    p.terms[{{id, exp}}] = 1;
    return p;
  }
  static SymPoly variable(const std::string& name, int exp = 1) {
    return variable(sym(name), exp);
  }

  bool is_zero() const { return terms.empty(); }
  bool is_constant() const {
    return terms.empty() || (terms.size() == 1 && terms.begin()->first.empty());
  }
  Rational constant_value() const {
    if (terms.empty()) return 0;
    auto it = terms.find({});
    return it == terms.end() ? Rational(0) : it->second;
  }
  // Nonzero single-term test; such elements are invertible in the Laurent ring.
  bool is_monomial() const { return terms.size() == 1; }

  void add_term(const SymMono& m, const Rational& c) {
    if (kappa::is_zero(c)) return;
    auto it = terms.find(m);
    if (it == terms.end()) {
      terms.emplace(m, c);
    } else {
      it->second += c;
      if (kappa::is_zero(it->second)) terms.erase(it);
    }
  }

  friend SymPoly operator+(const SymPoly& a, const SymPoly& b) {
    SymPoly r = a;
    for (const auto& [m, c] : b.terms) r.add_term(m, c);
    return r;
  }
  friend SymPoly operator-(const SymPoly& a, const SymPoly& b) {
    SymPoly r = a;
    for (const auto& [m, c] : b.terms) r.add_term(m, -c);
    return r;
  }
  SymPoly operator-() const {
    SymPoly r;
    for (const auto& [m, c] : terms) r.terms.emplace(m, -c);
    return r;
  }
  friend SymPoly operator*(const SymPoly& a, const SymPoly& b) {
    SymPoly r;
    for (const auto& [ma, ca] : a.terms)
      for (const auto& [mb, cb] : b.terms) r.add_term(mono_mul(ma, mb), ca * cb);
    return r;
  }
  SymPoly& operator+=(const SymPoly& o) { return *this = *this + o; }
  SymPoly& operator-=(const SymPoly& o) { return *this = *this - o; }
  SymPoly& operator*=(const SymPoly& o) { return *this = *this * o; }
  friend SymPoly operator*(const SymPoly& a, const Rational& c) {
    SymPoly r;
    if (kappa::is_zero(c)) return r;
    for (const auto& [m, q] : a.terms) r.terms.emplace(m, q * c);
    return r;
  }
  friend bool operator==(const SymPoly& a, const SymPoly& b) { return a.terms == b.terms; }
  friend bool operator!=(const SymPoly& a, const SymPoly& b) { return !(a == b); }
  friend bool operator<(const SymPoly& a, const SymPoly& b) { return a.terms < b.terms; }

  // Inverse, defined only for single-term elements.
  SymPoly inverse() const {
    if (terms.size() != 1) throw singular_error("SymPoly inverse of a non-monomial");
    const auto& [m, c] = *terms.begin();
    if (kappa::is_zero(c)) throw singular_error("SymPoly inverse of zero");
    SymMono inv;
    inv.reserve(m.size());
    for (const auto& [id, e] : m) inv.emplace_back(id, -e);
    SymPoly r;
    r.terms.emplace(std::move(inv), 1 / c);
    return r;
  }

  SymPoly pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    SymPoly r(Rational(1));
    SymPoly base = *this;
    for (int k = e; k > 0; k >>= 1) {
      if (k & 1) r = r * base;
      if (k > 1) base = base * base;
    }
    return r;
  }

  // Substitute polynomials for symbols; symbols absent from `vals` stay fixed.
  SymPoly substitute(const std::map<int, SymPoly>& vals) const {
    SymPoly r;
    for (const auto& [m, c] : terms) {
      SymPoly t(c);
      for (const auto& [id, e] : m) {
        auto it = vals.find(id);
        if (it == vals.end())
          t = t * variable(id, e);
        else
          t = t * it->second.pow(e);
      }
      r += t;
    }
    return r;
  }

  SymPoly eval(const std::map<int, Rational>& vals) const {
    std::map<int, SymPoly> v;
    for (const auto& [id, q] : vals) v.emplace(id, SymPoly(q));
    return substitute(v);
  }

  std::string str() const {
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
      std::string mono;
      for (const auto& [id, e] : m) {
        if (!mono.empty()) mono += "*";
        mono += SymbolTable::name(id);
        if (e != 1) mono += "^" + std::to_string(e);
      }
      if (mono.empty()) {
        out += to_string(a);
      } else {
        if (a != 1) out += to_string(a) + "*";
        out += mono;
      }
      first = false;
    }
    return out;
  }

  static SymMono mono_mul(const SymMono& a, const SymMono& b) {
    SymMono r;
    r.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i].first < b[j].first) {
        r.push_back(a[i++]);
      } else if (a[i].first > b[j].first) {
        r.push_back(b[j++]);
      } else {
        int e = a[i].second + b[j].second;
        if (e != 0) r.emplace_back(a[i].first, e);
        ++i, ++j;
      }
    }
    while (i < a.size()) r.push_back(a[i++]);
    while (j < b.size()) r.push_back(b[j++]);
    return r;
  }
};

inline bool is_zero(const SymPoly& p) { return p.is_zero(); }
inline std::string to_string(const SymPoly& p) { return p.str(); }

}  // namespace kappa
