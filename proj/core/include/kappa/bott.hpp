#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kappa/cyclic.hpp"
#include "kappa/kn.hpp"

namespace kappa {

// n = 1 geometric side. Words over the diffeomorphisms present: entry +d is
// phi_d, entry -d is phi_d^{-1}; the word [a,b] is the map a∘b (rightmost
// applies first). The empty word is the identity.
using Word = std::vector<int>;

Word word_reduce(Word w);
Word word_concat(const Word& a, const Word& b);  // a∘b, reduced
Word word_inverse(const Word& w);

// Jet-differential symbols: derivatives of formal functions f_a, jet data of
// the diffeos (phi_d^{(k)}, k >= 2), Laurent powers of phi_d', and log phi_d',
// each precomposed with a word.
struct DSym {
  enum Kind { Func, JetDeriv, JetPrime, LogPrime } kind = Func;
  int id = 0;     // function index or diffeo index (diffeo index >= 1)
  int deriv = 0;  // Func: k >= 0; JetDeriv: k >= 2
  Word word;

  friend bool operator==(const DSym& a, const DSym& b) {
    return a.kind == b.kind && a.id == b.id && a.deriv == b.deriv && a.word == b.word;
  }
  friend bool operator<(const DSym& a, const DSym& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.id != b.id) return a.id < b.id;
    if (a.deriv != b.deriv) return a.deriv < b.deriv;
    return a.word < b.word;
  }
  std::string str() const;
};

using DMono = std::vector<std::pair<DSym, int>>;  // sorted, exponent != 0

// Exact-rational polynomials in jet-differential symbols; phi' factors may
// carry negative exponents.
class DiffPoly {
 public:
  std::map<DMono, Rational> terms;

  DiffPoly() = default;
  explicit DiffPoly(const Rational& c) {
    if (!kappa::is_zero(c)) terms[{}] = c;
  }
  static DiffPoly symbol(const DSym& s, int exp = 1);
  static DiffPoly func(int id, int deriv = 0, Word w = {});
  static DiffPoly jet_prime(int d, int exp = 1, Word w = {});  // (phi_d'∘w)^exp
  static DiffPoly jet_deriv(int d, int k, Word w = {});        // phi_d^{(k)}∘w, k >= 2
  static DiffPoly log_prime(int d, Word w = {});               // log(phi_d')∘w

  bool is_zero() const { return terms.empty(); }
  void add_term(const DMono& m, const Rational& c);

  friend DiffPoly operator+(const DiffPoly& a, const DiffPoly& b);
  friend DiffPoly operator-(const DiffPoly& a, const DiffPoly& b);
  friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b);
  DiffPoly operator-() const { return scaled(-1); }
  DiffPoly scaled(const Rational& c) const;
  DiffPoly& operator+=(const DiffPoly& o) { return *this = *this + o; }
  DiffPoly& operator-=(const DiffPoly& o) { return *this = *this - o; }
  DiffPoly& operator*=(const DiffPoly& o) { return *this = *this * o; }
  friend bool operator==(const DiffPoly& a, const DiffPoly& b) { return a.terms == b.terms; }
  friend bool operator!=(const DiffPoly& a, const DiffPoly& b) { return !(a == b); }

  std::string str() const;
};

// Total x-derivative (chain rule through the composition words).
DiffPoly d_x(const DiffPoly& p);
// Substitution x -> (word-map)(x): appends the word to every symbol.
DiffPoly substitute(const DiffPoly& p, const Word& w, int max_word_len = 6);
// Jacobian of the word map, an invertible monomial in phi' factors.
DiffPoly word_jacobian(const Word& w);
// k-th derivative of the word map (k >= 1).
DiffPoly word_jet_deriv(const Word& w, int k);
// log of the word Jacobian: a sum of log phi' markers.
DiffPoly word_log_jacobian(const Word& w);

// ---- formal crossed elements over DiffPoly ------------------------------------

struct FCrossedTerm {
  DiffPoly coeff;
  Word word;  // U*_{word-map}
};
class FCrossed {
 public:
  std::vector<FCrossedTerm> terms;

  FCrossed() = default;
  FCrossed(DiffPoly c, Word w);
  void add_term(DiffPoly c, Word w);
  friend FCrossed operator+(const FCrossed& a, const FCrossed& b);
  friend FCrossed operator*(const FCrossed& a, const FCrossed& b);
  FCrossed scaled(const Rational& c) const;
};

// K_1 / K~_1 acting on formal crossed elements (n = 1).
FCrossed apply_element_formal(const KnElement& k, const FCrossed& a);

// tau: keep the identity-word part; "0 otherwise".
DiffPoly tau_formal(const FCrossed& a);
// Integrand of tau(a0 · k(a1)).
DiffPoly tau_pair(const FCrossed& a0, const KnElement& k, const FCrossed& a1);

// ---- simplicial curvature and the Bott cochain c1 -----------------------------

// n = 1 simplicial forms: barycentric s-polynomial coefficients, at most one
// ds factor and one dx factor.
struct SimplicialForm {
  int p = 0;
  // key: (ds index 1..p, or 0 for none; s-exponent vector of length p)
  std::map<std::pair<int, std::vector<int>>, DiffPoly> terms;
  bool has_dx = true;
  bool is_zero() const { return terms.empty(); }
};

// R-hat_p with arguments phi_{ids[0]}, ..., phi_{ids[p]}.
SimplicialForm simplicial_curvature(const std::vector<int>& ids);

struct BottForm {
  int dx_deg = 0;
  DiffPoly value;
  friend bool operator==(const BottForm& a, const BottForm& b) {
    return a.dx_deg == b.dx_deg && a.value == b.value;
  }
};

// Exact integration over the standard simplex in the s-coordinates.
BottForm fiber_integrate(const SimplicialForm& w);

// c_1(rho_0, rho_1) = (rho_0''/rho_0' - rho_1''/rho_1') dx and c_0 = 1.
BottForm bott_c1(int id0, int id1);
BottForm bott_c0();

// Theta_K evaluated on generic jets as a DiffPoly identity. The cochain legs
// live in FGd (the F_K picture via iota); ids name the diffeo arguments.
BottForm theta_K(const CECochain& c, const std::vector<int>& ids);

// Series route: Theta_K on explicit jets (used for translation insensitivity).
TruncSeries<Rational> theta_K_series(const CECochain& c,
                                     const std::vector<JetDiffeo<Rational>>& phis);

// Evaluation of a DiffPoly on explicit data: jets for the diffeos (in G-dagger
// for exact inversion) and polynomial series for the functions.
TruncSeries<Rational> eval_diffpoly(const DiffPoly& p,
                                    const std::map<int, JetDiffeo<Rational>>& jets,
                                    const std::map<int, TruncSeries<Rational>>& funcs,
                                    int order);

// ---- the formal-integral calculus ----------------------------------------------

struct EquivConfig {
  int max_word_len = 4;
  int closure_rounds = 2;
  size_t max_monomials = 4000;
  std::vector<int> diffeos = {1};  // substitution moves for these ids
};

struct EquivResult {
  bool equivalent = false;
  std::string witness;  // relation combination or failure note
};

// Decides lhs ≡ rhs modulo exact derivatives D_x(·) and change-of-variables
// relations u - subst(u)·jac, by exact linear algebra over the monomial basis.
EquivResult integral_equiv(const DiffPoly& lhs, const DiffPoly& rhs, const EquivConfig& cfg);

// ---- Connes' Phi_C at n = 1 ------------------------------------------------------

// Phi_C(c)(a0, a1) as a DiffPoly integrand, for c in {c0, c1}.
DiffPoly phi_C_integrand_c0(const FCrossed& a0, const FCrossed& a1);
DiffPoly phi_C_integrand_c1(const FCrossed& a0, const FCrossed& a1);

// Certify Phi_C(c) ≡ chi_tau(k) for the expected k; returns the certificate.
Certificate phi_C_reduce(int which_c, const FCrossed& a0, const FCrossed& a1,
                         const EquivConfig& cfg);

}  // namespace kappa
