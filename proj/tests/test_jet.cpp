#include <doctest.h>

#include "kappa/jet.hpp"
#include "test_util.hpp"

using namespace kappa;
using TS = TruncSeries<Rational>;
using Jet = JetDiffeo<Rational>;
namespace tu = kappa::testutil;

static Jet jet1(int order, std::vector<std::pair<int, Rational>> coeffs) {
  TS s(1, order);
  for (auto& [e, c] : coeffs) s.set({e}, c);
  return Jet::from_components({s});
}

TEST_CASE("jet composition examples") {
  Jet phi = jet1(2, {{1, 1}, {2, 1}});  // x + x^2
  Jet psi = jet1(2, {{1, 2}});          // 2x
  CHECK(jet_compose(phi, psi) == jet1(2, {{1, 2}, {2, 4}}));  // 2x + 4x^2
  CHECK(jet_compose(psi, phi) == jet1(2, {{1, 2}, {2, 2}}));  // 2x + 2x^2
  CHECK(jet_compose(phi, Jet::identity(1, 2)) == phi);
}

TEST_CASE("jet inverse examples") {
  Jet phi = jet1(3, {{1, 1}, {2, 1}});
  CHECK(jet_inverse(phi) == jet1(3, {{1, 1}, {2, -1}, {3, 2}}));
  CHECK(jet_inverse(Jet::identity(2, 3)) == Jet::identity(2, 3));
  Jet tr = jet1(2, {{0, 3}, {1, 1}});  // x + 3
  CHECK(jet_inverse(tr) == jet1(2, {{0, -3}, {1, 1}}));
}

TEST_CASE("translation decomposition") {
  Jet phi = jet1(2, {{0, 3}, {1, 1}, {2, 1}});
  auto [tr, psi] = decompose_translation(phi);
  CHECK(tr == jet1(2, {{0, 3}, {1, 1}}));
  CHECK(psi == jet1(2, {{1, 1}, {2, 1}}));
  CHECK(jet_compose(tr, psi) == phi);

  auto [tr2, psi2] = decompose_translation(psi);
  CHECK(tr2.is_identity());
  CHECK(psi2 == psi);
}

TEST_CASE("matched pair of T and G-dagger") {
  // psi(x)=2x, phi(x)=x+1 -> psi|>phi = x+2, psi<|phi = 2x
  Jet psi = jet1(2, {{1, 2}});
  Jet phi = jet1(2, {{0, 1}, {1, 1}});
  auto [l, r] = matched_pair_T(psi, phi);
  CHECK(l == jet1(2, {{0, 2}, {1, 1}}));
  CHECK(r == psi);
  CHECK(jet_compose(l, r) == jet_compose(psi, phi));

  auto [l2, r2] = matched_pair_T(Jet::identity(1, 2), phi);
  CHECK(l2 == phi);
  CHECK(r2.is_identity());

  auto [l3, r3] = matched_pair_T(psi, Jet::identity(1, 2));
  CHECK(l3.is_identity());
  CHECK(r3 == psi);
}

TEST_CASE("linear decomposition of G-dagger") {
  Jet psi = jet1(2, {{1, 2}, {2, 1}});
  auto [lam, nu] = decompose_linear(psi);
  CHECK(lam == jet1(2, {{1, 2}}));
  CHECK(nu == jet1(2, {{1, 1}, {2, rat(1, 2)}}));
  CHECK(jet_compose(lam, nu) == psi);
  CHECK(nu.in_unipotent());

  auto [lam2, nu2] = decompose_linear(jet1(2, {{1, 3}}));
  CHECK(nu2.is_identity());
  auto [lam3, nu3] = decompose_linear(jet1(2, {{1, 1}, {2, 5}}));
  CHECK(lam3.is_identity());
}

TEST_CASE("GL action on N") {
  // nu(x)=x+x^2, a=2 -> x+2x^2
  Jet nu = jet1(2, {{1, 1}, {2, 1}});
  Jet lam = jet1(2, {{1, 2}});
  CHECK(n_action_of_gl(nu, lam) == jet1(2, {{1, 1}, {2, 2}}));
  CHECK(n_action_of_gl(nu, Jet::identity(1, 2)) == nu);
  CHECK(n_action_of_gl(Jet::identity(1, 2), lam).is_identity());
}

TEST_CASE("crossed product multiplication") {
  int ord = 3;
  Jet phi = jet1(ord, {{1, 1}, {2, 1}});
  TS x = TS::variable(1, ord, 0);
  CrossedElement<Rational> a(x, phi);
  CrossedElement<Rational> b(x, Jet::identity(1, ord));
  auto prod = a * b;
  // (x U*_phi)(x U*_id) = x·(x∘phi) U*_phi = (x^2+x^3) U*_phi
  REQUIRE(prod.terms.size() == 1);
  TS expect(1, ord);
  expect.set({2}, 1);
  expect.set({3}, 1);
  CHECK(prod.terms[0].f == expect);
  CHECK(prod.terms[0].phi == phi);

  auto unit = CrossedElement<Rational>::unit(1, ord);
  CHECK((unit * a) == a);
  CHECK((a * unit) == a);

  CrossedElement<Rational> u(TS::constant(1, ord, 1), phi);
  CrossedElement<Rational> v(TS::constant(1, ord, 1), jet_inverse(phi));
  CHECK((u * v) == unit);
}

TEST_CASE("group axioms on G-dagger jets, exact") {
  for (int n = 1; n <= 2; ++n) {
    for (int trial = 0; trial < 8; ++trial) {
      Jet a = tu::random_jet(n, 4, true), b = tu::random_jet(n, 4, true),
          c = tu::random_jet(n, 4, true);
      CHECK(jet_compose(jet_compose(a, b), c) == jet_compose(a, jet_compose(b, c)));
      CHECK(jet_compose(a, jet_inverse(a)) == Jet::identity(n, 4));
      CHECK(jet_compose(jet_inverse(a), a) == Jet::identity(n, 4));
    }
  }
}

TEST_CASE("group axioms with offsets: translations exact, headroom for the rest") {
  for (int trial = 0; trial < 6; ++trial) {
    // translations compose and invert exactly
    Jet t1 = jet1(4, {{0, tu::random_rational()}, {1, 1}});
    Jet t2 = jet1(4, {{0, tu::random_rational()}, {1, 1}});
    CHECK(jet_compose(t1, jet_inverse(t1)) == Jet::identity(1, 4));
    CHECK(jet_compose(t1, t2) == jet_compose(t2, t1));

    // offset jets of polynomial degree 2 stored at order 8: no truncation in
    // a triple product, so associativity is exact
    auto low = [&] {
      Jet j = tu::random_jet(1, 2);
      std::vector<TS> v;
      for (auto& cser : j.comps) {
        TS s(1, 8);
        for (const auto& [m, q] : cser.coeffs) s.set(m, q);
        s.add_to({0}, j.offset[0]);
        v.push_back(s);
      }
      return Jet::from_components(v);
    };
    Jet a = low(), b = low(), c = low();
    CHECK(jet_compose(jet_compose(a, b), c) == jet_compose(a, jet_compose(b, c)));
  }
}

TEST_CASE("decompositions are exact sections") {
  for (int n = 1; n <= 2; ++n) {
    for (int trial = 0; trial < 8; ++trial) {
      Jet a = tu::random_jet(n, 4);
      auto [tr, psi] = decompose_translation(a);
      CHECK(jet_compose(tr, psi) == a);
      auto [lam, nu] = decompose_linear(psi);
      CHECK(jet_compose(lam, nu) == psi);
      CHECK(nu.in_unipotent());
      CHECK(lam.is_linear());
    }
  }
}

TEST_CASE("matched pair axiom (psi1∘psi2) <| phi") {
  // degree-2 jets at order 8: the composite needs no truncation, so the
  // matched-pair identity from unique factorization is bit-exact
  for (int n = 1; n <= 2; ++n) {
    for (int trial = 0; trial < 8; ++trial) {
      Jet psi1 = tu::lift_order(tu::random_jet(n, 2, true), 8);
      Jet psi2 = tu::lift_order(tu::random_jet(n, 2, true), 8);
      Jet tr = Jet::identity(n, 8);
      for (int i = 0; i < n; ++i) tr.offset[static_cast<size_t>(i)] = tu::random_rational(3, 2);
      auto [l12, r12] = matched_pair_T(jet_compose(psi1, psi2), tr);
      auto [l2, r2] = matched_pair_T(psi2, tr);
      auto [l1, r1] = matched_pair_T(psi1, l2);
      CHECK(r12 == jet_compose(r1, r2));
      CHECK(l12 == l1);
      // recomposition property
      CHECK(jet_compose(l12, r12) == jet_compose(jet_compose(psi1, psi2), tr));
    }
  }
}

TEST_CASE("normality of N: nu |> lambda = lambda, recomposition") {
  for (int n = 1; n <= 2; ++n) {
    for (int trial = 0; trial < 6; ++trial) {
      Jet psi = tu::random_jet(n, 4, true);
      auto [lam0, nu] = decompose_linear(psi);
      Jet lam = tu::random_jet(n, 1, true);  // random linear jet
      lam = decompose_linear(lam).first;
      lam = Jet::from_components(
          [&] {
            std::vector<TS> v;
            for (int i = 0; i < n; ++i) v.push_back(lam.comps[static_cast<size_t>(i)].truncated(4));
            for (auto& s : v) s.order = 4;
            return v;
          }(),
          false);
      Jet act = n_action_of_gl(nu, lam);
      CHECK(act.in_unipotent());
      // nu∘lambda = (nu|>lambda)∘(nu<|lambda) with nu|>lambda = lambda
      CHECK(jet_compose(nu, lam) == jet_compose(lam, act));
    }
  }
}

TEST_CASE("crossed_mul associativity on random triples (G-dagger jets)") {
  for (int n = 1; n <= 2; ++n) {
    for (int trial = 0; trial < 6; ++trial) {
      auto mk = [&] {
        CrossedElement<Rational> a(n);
        std::uniform_int_distribution<int> nt(1, 2);
        int k = nt(tu::rng());
        for (int t = 0; t < k; ++t)
          a.add_term(tu::random_series(n, 4), tu::random_jet(n, 4, true));
        return a;
      };
      auto a = mk(), b = mk(), c = mk();
      CHECK(((a * b) * c) == (a * (b * c)));
    }
  }
}
