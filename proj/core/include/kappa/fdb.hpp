#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "kappa/jet.hpp"
#include "kappa/kn.hpp"

namespace kappa {

// The three commutative Hopf algebras of Taylor coordinates:
//   FGd = F(G-dagger), generators beta^i_J (|J| >= 1) and beta^{-1}
//   FGL = F(G-dagger_0) = P(GL_n), generators alpha^i_j and alpha^{-1}
//   FN  = F(N), generators alpha^i_J with |J| >= 2
enum class FAlg { FGd, FGL, FN };

struct FGen {
  int i = 1;
  std::vector<int> J;  // sorted

  FGen() = default;
  FGen(int i_, std::vector<int> J_);
  friend bool operator==(const FGen& a, const FGen& b) { return a.i == b.i && a.J == b.J; }
  friend bool operator<(const FGen& a, const FGen& b) {
    if (a.i != b.i) return a.i < b.i;
    return a.J < b.J;
  }
};

// Monomial (beta^{-1})^{inv_pow} * prod beta^i_J; normal form keeps the
// diagonal first-order monomial out of the factors when inv_pow > 0.
struct FMono {
  int inv_pow = 0;
  std::vector<std::pair<FGen, int>> fac;

  bool is_unit() const { return inv_pow == 0 && fac.empty(); }
  friend bool operator==(const FMono& a, const FMono& b) {
    return a.inv_pow == b.inv_pow && a.fac == b.fac;
  }
  friend bool operator<(const FMono& a, const FMono& b) {
    if (a.inv_pow != b.inv_pow) return a.inv_pow < b.inv_pow;
    return a.fac < b.fac;
  }
};

class FdBElement {
 public:
  FAlg alg = FAlg::FGd;
  int n = 1;
  std::map<FMono, Rational> terms;

  FdBElement() = default;
  FdBElement(FAlg a, int n_) : alg(a), n(n_) {}

  static FdBElement zero(FAlg a, int n) { return FdBElement(a, n); }
  static FdBElement one(FAlg a, int n) { return scalar(a, n, 1); }
  static FdBElement scalar(FAlg a, int n, const Rational& c);
  static FdBElement generator(FAlg a, int n, const FGen& g);
  static FdBElement inv_det(FAlg a, int n, int pow = 1);  // beta^{-1} / alpha^{-1}

  bool is_zero() const { return terms.empty(); }
  bool is_scalar() const;
  Rational scalar_value() const;

  void add_reduced(FMono m, Rational c);

  friend FdBElement operator+(const FdBElement& a, const FdBElement& b);
  friend FdBElement operator-(const FdBElement& a, const FdBElement& b);
  friend FdBElement operator*(const FdBElement& a, const FdBElement& b);
  FdBElement operator-() const { return scaled(-1); }
  FdBElement scaled(const Rational& c) const;
  FdBElement& operator+=(const FdBElement& o) { return *this = *this + o; }
  FdBElement& operator*=(const FdBElement& o) { return *this = *this * o; }
  friend bool operator==(const FdBElement& a, const FdBElement& b) {
    return a.alg == b.alg && a.n == b.n && a.terms == b.terms;
  }
  friend bool operator!=(const FdBElement& a, const FdBElement& b) { return !(a == b); }

  FdBElement pow(int e) const;
  std::string str() const;
};

// Tensors with legs in possibly different algebras (e.g. the codomain of Phi).
class FTensor {
 public:
  int n = 1;
  std::vector<FAlg> algs;
  std::map<std::vector<FMono>, Rational> terms;

  FTensor() = default;
  FTensor(int n_, std::vector<FAlg> a) : n(n_), algs(std::move(a)) {}

  static FTensor from_elements(const std::vector<FdBElement>& legs);

  int q() const { return static_cast<int>(algs.size()); }
  bool is_zero() const { return terms.empty(); }
  void add_term(const std::vector<FMono>& key, const Rational& c);

  friend FTensor operator+(const FTensor& a, const FTensor& b);
  friend FTensor operator-(const FTensor& a, const FTensor& b);
  FTensor scaled(const Rational& c) const;
  FTensor operator-() const { return scaled(-1); }
  FTensor& operator+=(const FTensor& o) { return *this = *this + o; }
  friend FTensor operator*(const FTensor& a, const FTensor& b);  // legwise
  friend bool operator==(const FTensor& a, const FTensor& b) {
    return a.n == b.n && a.algs == b.algs && a.terms == b.terms;
  }
  friend bool operator!=(const FTensor& a, const FTensor& b) { return !(a == b); }

  FdBElement leg_element(int i, const FMono& m) const;
  FTensor map_leg(int i, FAlg new_alg,
                  const std::function<FdBElement(const FdBElement&)>& fn) const;
  std::string str() const;
};

// ---- evaluation ------------------------------------------------------------

// Exact value of f on a jet in the matching group.
Rational fdb_eval(const FdBElement& f, const JetDiffeo<Rational>& psi);
Rational fdb_eval(const FTensor& t, const std::vector<JetDiffeo<Rational>>& psis);

// ---- Hopf structure, computed from generic jets -----------------------------

FTensor fdb_coproduct(const FdBElement& f);  // Delta(f)(psi1,psi2) = f(psi1 psi2)
FdBElement fdb_antipode(const FdBElement& f);  // S(f)(psi) = f(psi^{-1})
Rational fdb_counit(const FdBElement& f);

// ---- projections, sections, the isomorphism Phi -----------------------------

FdBElement project_gl(const FdBElement& f);   // pi_1: FGd -> FGL
FdBElement project_n(const FdBElement& f);    // pi_2: FGd -> FN (also r_H)
FdBElement include_gl(const FdBElement& f);   // I_1: FGL -> FGd
FdBElement include_n(const FdBElement& f);    // I_2: FN -> FGd
FTensor phi_iso(const FdBElement& f);         // FGd -> FGL (x) FN
FdBElement phi_inverse(const FTensor& t);
FdBElement iota_H(const FdBElement& f);       // FN -> FGd, = Phi^{-1}(1 (x) f)

// ---- actions and coactions ---------------------------------------------------

FdBElement v_action(int l, const FdBElement& f);  // X_l |> f on FGd (Leibniz)

// Right coaction of FGL on FN from nu <| lambda; left coaction from lambda∘nu.
FTensor coaction_n_right(const FdBElement& f);  // FN -> FN (x) FGL
FTensor coaction_n_left(const FdBElement& f);   // FN -> FGL (x) FN

// gl_n pairing with P(GL_n) and the induced actions.
Rational gl_pairing(const FdBElement& f, int i, int j);       // <f, Y^i_j>
FdBElement gl_action(int i, int j, const FdBElement& f);      // Y^i_j |> f on FN
std::vector<Rational> gl_on_V(int n, int i, int j, int k);    // Y^i_j |> X_k coefficients

// ---- the iota identification with K_ab ---------------------------------------

FdBElement iota_from_ab(const AbElement& f);  // K_ab -> F(G-dagger)
AbElement iota_to_ab(const FdBElement& f);

}  // namespace kappa
