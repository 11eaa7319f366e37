#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kappa/kn.hpp"

namespace kappa {

// Element of K^{⊗q} with exact rational coefficients, legs PBW-normalized.
class KnTensor {
 public:
  int n = 1;
  int q = 1;
  std::map<std::vector<PBWKey>, Rational> terms;

  KnTensor() = default;
  KnTensor(int n_, int q_) : n(n_), q(q_) {}

  static KnTensor from_elements(const std::vector<KnElement>& legs);
  static KnTensor unit(int n, int q);

  bool is_zero() const { return terms.empty(); }

  void add_term(const std::vector<PBWKey>& key, const Rational& c);

  friend KnTensor operator+(const KnTensor& a, const KnTensor& b);
  friend KnTensor operator-(const KnTensor& a, const KnTensor& b);
  KnTensor operator-() const { return scaled(-1); }
  KnTensor scaled(const Rational& c) const;
  KnTensor& operator+=(const KnTensor& o) { return *this = *this + o; }
  friend KnTensor operator*(const KnTensor& a, const KnTensor& b);  // legwise
  friend bool operator==(const KnTensor& a, const KnTensor& b) {
    return a.n == b.n && a.q == b.q && a.terms == b.terms;
  }
  friend bool operator!=(const KnTensor& a, const KnTensor& b) { return !(a == b); }

  KnElement leg_element(const PBWKey& k) const;  // helper: key -> singleton element

  // Replace leg i by an element-valued image (q unchanged).
  KnTensor map_leg(int i, const std::function<KnElement(const KnElement&)>& fn) const;
  // Apply the coproduct to leg i (q -> q+1).
  KnTensor coproduct_leg(int i) const;
  // Apply the counit to leg i (q -> q-1).
  KnTensor counit_leg(int i) const;
  // Insert a fixed element as a new leg at position i (q -> q+1).
  KnTensor insert_leg(int i, const KnElement& e) const;
  // Drop leg i by multiplying it into nothing; requires the leg scalar.
  KnTensor flip() const;  // reverse leg order

  std::string str() const;
};

// Hopf structure of K_n (and of K~_1 when log sigma appears).
KnTensor coproduct(const KnElement& k);
KnTensor iterated_coproduct(const KnElement& k, int q);  // Delta^{q-1}, q legs
Rational counit(const KnElement& k);
KnElement antipode(const KnElement& k);
AbElement antipode_ab(const AbElement& f);

// m(S⊗id)Δ and m(id⊗S)Δ style contraction: multiply all legs together.
KnElement contract_product(const KnTensor& t);

// Bicrossed product picture: K_n ≅ F_K ▷◁ U(V) as PBW data (f, X-monomial).
struct BicrossedElement {
  int n = 1;
  std::vector<std::pair<AbElement, XMono>> parts;  // sum of f ▷◁ X^alpha
};
BicrossedElement bicrossed_split(const KnElement& k);
KnElement bicrossed_join(const BicrossedElement& b);

// Modular pair in involution check: S^2 against both conjugations.
struct MpiEntry {
  std::string generator;
  bool ad_sigma_inv = false;  // S^2(h) == sigma^{-1} h sigma
  bool ad_sigma = false;      // S^2(h) == sigma h sigma^{-1}
};
struct MpiReport {
  std::vector<MpiEntry> entries;
  bool counit_on_V = false;       // delta = eps on V (abelian)
  bool grouplike_delta = false;   // delta(sigma^{-1}) = 1
  bool all_ad_sigma_inv = true;
  bool all_ad_sigma = true;
};
MpiReport mpi_check(int n, int max_weight);

// All generators of K_n (K~_1 with with_log) of weight <= max_weight.
std::vector<GeneratorSymbol> generators_up_to(int n, int max_weight, bool with_log = false);

}  // namespace kappa
