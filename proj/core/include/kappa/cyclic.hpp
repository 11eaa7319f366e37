#pragma once

#include <string>
#include <vector>

#include "kappa/fdb.hpp"
#include "kappa/kn_hopf.hpp"

namespace kappa {

// Hopf cyclic cochain 1 ⊗ k^1 ⊗ ... ⊗ k^q with coefficients ^{sigma^{-1}}C.
// Degree 0 cochains are plain scalars.
class HopfCochain {
 public:
  int n = 1;
  int q = 0;
  Rational scalar = 0;  // used when q == 0
  KnTensor t;           // used when q >= 1

  HopfCochain() = default;
  explicit HopfCochain(const Rational& c) : n(1), q(0), scalar(c) {}
  explicit HopfCochain(KnTensor tensor) : n(tensor.n), q(tensor.q), t(std::move(tensor)) {}
  static HopfCochain from_legs(const std::vector<KnElement>& legs) {
    return HopfCochain(KnTensor::from_elements(legs));
  }

  bool is_zero() const { return q == 0 ? kappa::is_zero(scalar) : t.is_zero(); }
  friend HopfCochain operator+(const HopfCochain& a, const HopfCochain& b);
  friend HopfCochain operator-(const HopfCochain& a, const HopfCochain& b);
  HopfCochain scaled(const Rational& c) const;
  HopfCochain operator-() const { return scaled(-1); }
  friend bool operator==(const HopfCochain& a, const HopfCochain& b) {
    if (a.q != b.q) return false;
    return a.q == 0 ? a.scalar == b.scalar : a.t == b.t;
  }
  friend bool operator!=(const HopfCochain& a, const HopfCochain& b) { return !(a == b); }
  std::string str() const;
};

// Cocyclic-module operators of (K~_1; eps, sigma^{-1}).
HopfCochain hochschild_b(const HopfCochain& c);
HopfCochain cyclic_tau(const HopfCochain& c);          // tau_q, q >= 1
HopfCochain degeneracy(const HopfCochain& c, int i);   // eps on leg i+1, 0 <= i <= q-1
bool is_normalized(const HopfCochain& c);              // every leg kills eps
HopfCochain connes_B(const HopfCochain& c);            // normalized complex

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string witness;  // offending term for failures
};
struct Certificate {
  std::string subject;
  std::vector<CheckResult> checks;
  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// b-closedness and tau = (-1)^q cyclicity.
Certificate certify_cyclic_cocycle(const HopfCochain& c, const std::string& name);

// ---- Chevalley-Eilenberg coinvariant wedge bicomplex -------------------------

// theta^{i_1} ∧ ... ∧ theta^{i_p} ⊗ f^0 ∧ ... ∧ f^q with F-legs in FGd (the
// F_K picture via iota) or FN (the F_H picture).
class CECochain {
 public:
  FAlg alg = FAlg::FGd;
  int n = 1;
  int p = 0;
  int wedge = 1;  // number of F legs
  std::map<std::pair<std::vector<int>, std::vector<FMono>>, Rational> terms;

  CECochain() = default;
  CECochain(FAlg a, int n_, int p_, int wedge_) : alg(a), n(n_), p(p_), wedge(wedge_) {}

  static CECochain from_legs(FAlg alg, int n, const std::vector<int>& theta,
                             const std::vector<FdBElement>& legs);

  bool is_zero() const { return terms.empty(); }
  void add_term(std::vector<int> theta, std::vector<FMono> legs, const Rational& c);

  friend CECochain operator+(const CECochain& a, const CECochain& b);
  friend CECochain operator-(const CECochain& a, const CECochain& b);
  CECochain scaled(const Rational& c) const;
  CECochain operator-() const { return scaled(-1); }
  friend bool operator==(const CECochain& a, const CECochain& b) {
    return a.alg == b.alg && a.n == b.n && a.p == b.p && a.wedge == b.wedge &&
           a.terms == b.terms;
  }
  friend bool operator!=(const CECochain& a, const CECochain& b) { return !(a == b); }
  std::string str() const;
};

CECochain ce_b_wedge(const CECochain& c);        // wedge a 1 in front
CECochain ce_partial_wedge(const CECochain& c);  // -sum theta^i ∧ . ⊗ X_i |> diag
bool ce_coinvariance_check(const CECochain& c);
CECochain ce_restrict_H(const CECochain& c);  // r_H legwise: FGd -> FN

// ---- full (non-antisymmetrized) bicomplex of section 3 ------------------------

// 1 ⊗ wedge^p V* ⊗ F^{⊗ q} cochains over FGd.
class BicCochain {
 public:
  int n = 1;
  int p = 0;
  int q = 0;
  std::map<std::pair<std::vector<int>, std::vector<FMono>>, Rational> terms;

  BicCochain() = default;
  BicCochain(int n_, int p_, int q_) : n(n_), p(p_), q(q_) {}

  void add_term(std::vector<int> theta, std::vector<FMono> legs, const Rational& c);
  friend BicCochain operator+(const BicCochain& a, const BicCochain& b);
  friend BicCochain operator-(const BicCochain& a, const BicCochain& b);
  BicCochain scaled(const Rational& c) const;
  bool is_zero() const { return terms.empty(); }
  friend bool operator==(const BicCochain& a, const BicCochain& b) {
    return a.n == b.n && a.p == b.p && a.q == b.q && a.terms == b.terms;
  }
};

BicCochain bic_b_star(const BicCochain& c);        // horizontal coboundary
BicCochain bic_partial_vstar(const BicCochain& c); // vertical CE coboundary
BicCochain antisymmetrize(const CECochain& c);     // wedge -> tensor embedding
CECochain wedge_retract(const BicCochain& c);      // tensor -> wedge, 1/q! normalized

}  // namespace kappa
