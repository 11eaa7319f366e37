#include <doctest.h>

#include "kappa/series.hpp"
#include "test_util.hpp"

using namespace kappa;
using TS = TruncSeries<Rational>;
namespace tu = kappa::testutil;

static TS poly1(int order, std::vector<std::pair<int, Rational>> coeffs) {
  TS s(1, order);
  for (auto& [e, c] : coeffs) s.set({e}, c);
  return s;
}

TEST_CASE("series add/mul basics") {
  TS one_plus_x = poly1(2, {{0, 1}, {1, 1}});
  TS sq = one_plus_x * one_plus_x;
  CHECK(sq == poly1(2, {{0, 1}, {1, 2}, {2, 1}}));  // 1+2x+x^2

  TS f = poly1(3, {{1, 1}, {2, 1}});
  CHECK((f * TS::zero(1, 3)).is_zero());

  // truncation at order 1 drops x^2
  TS a1 = poly1(1, {{0, 1}, {1, 1}});
  CHECK(a1 * a1 == poly1(1, {{0, 1}, {1, 2}}));
}

TEST_CASE("series compose examples") {
  // outer f(x)=x+x^2, inner g(x)=2x, order 2 -> 2x+4x^2
  TS f = poly1(2, {{1, 1}, {2, 1}});
  TS g = poly1(2, {{1, 2}});
  CHECK(series_compose(f, {g}) == poly1(2, {{1, 2}, {2, 4}}));

  // identity outer
  TS id = poly1(3, {{1, 1}});
  TS h = poly1(3, {{1, 1}, {3, -2}});
  CHECK(series_compose(id, {h}) == h);

  // outer x^2, inner x + x^3, order 3 -> x^2 (x^4 truncates)
  TS sq = poly1(3, {{2, 1}});
  TS inner = poly1(3, {{1, 1}, {3, 1}});
  CHECK(series_compose(sq, {inner}) == poly1(3, {{2, 1}}));

  CHECK_THROWS_AS(series_compose(f, {poly1(2, {{0, 1}, {1, 1}})}), domain_error);
}

TEST_CASE("series reciprocal examples") {
  // 1/(1+2x) = 1-2x+4x^2
  CHECK(series_reciprocal(poly1(2, {{0, 1}, {1, 2}})) ==
        poly1(2, {{0, 1}, {1, -2}, {2, 4}}));
  CHECK(series_reciprocal(poly1(2, {{0, 1}})) == poly1(2, {{0, 1}}));
  // 1/(2+x) at order 1 -> 1/2 - x/4
  CHECK(series_reciprocal(poly1(1, {{0, 2}, {1, 1}})) ==
        poly1(1, {{0, rat(1, 2)}, {1, rat(-1, 4)}}));
  CHECK_THROWS_AS(series_reciprocal(poly1(2, {{1, 1}})), singular_error);
}

TEST_CASE("series revert examples") {
  // f(x)=x+x^2 at order 3 -> x - x^2 + 2x^3 (Lagrange reversion oracle)
  TS f = poly1(3, {{1, 1}, {2, 1}});
  auto g = series_revert<Rational>({f});
  CHECK(g[0] == poly1(3, {{1, 1}, {2, -1}, {3, 2}}));

  TS id = poly1(2, {{1, 1}});
  CHECK(series_revert<Rational>({id})[0] == id);
  CHECK(series_revert<Rational>({poly1(2, {{1, 2}})})[0] == poly1(2, {{1, rat(1, 2)}}));

  CHECK_THROWS_AS(series_revert<Rational>({poly1(2, {{2, 1}})}), singular_error);
}

TEST_CASE("ring axioms on random samples") {
  for (int n = 1; n <= 2; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      TS a = tu::random_series(n, 4), b = tu::random_series(n, 4), c = tu::random_series(n, 4);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a + b == b + a);
      CHECK(a * b == b * a);
    }
  }
}

TEST_CASE("compose associativity on random zero-based jets") {
  for (int n = 1; n <= 2; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      auto mk = [&] {
        std::vector<TS> v;
        for (int i = 0; i < n; ++i) {
          TS s = tu::random_series(n, 4);
          s.set(Multi(static_cast<size_t>(n), 0), 0);
          v.push_back(s);
        }
        return v;
      };
      auto f = mk(), g = mk(), h = mk();
      auto lhs = series_compose(series_compose(f, g), h);
      auto rhs = series_compose(f, series_compose(g, h));
      for (int i = 0; i < n; ++i) CHECK(lhs[static_cast<size_t>(i)] == rhs[static_cast<size_t>(i)]);
    }
  }
}

TEST_CASE("revert is a two-sided inverse; reciprocal multiplies to one") {
  for (int n = 1; n <= 2; ++n) {
    for (int trial = 0; trial < 8; ++trial) {
      auto j = tu::random_jet(n, 4, true);
      std::vector<TS> f = j.comps;
      auto g = series_revert(f);
      auto fg = series_compose(f, g);
      auto gf = series_compose(g, f);
      for (int i = 0; i < n; ++i) {
        CHECK(fg[static_cast<size_t>(i)] == TS::variable(n, 4, i));
        CHECK(gf[static_cast<size_t>(i)] == TS::variable(n, 4, i));
      }
    }
  }
  for (int trial = 0; trial < 10; ++trial) {
    TS a = tu::random_series(1, 4);
    a.set({0}, tu::random_rational(4, 3) + 1);
    if (is_zero(a.constant_term())) continue;
    CHECK(series_reciprocal(a) * a == TS::constant(1, 4, 1));
  }
}

TEST_CASE("symbolic coefficients: reciprocal with Laurent unit") {
  using SS = TruncSeries<SymPoly>;
  SymPoly a = SymPoly::variable("a");
  SS s(1, 2);
  s.set({0}, a);
  s.set({1}, SymPoly(Rational(1)));
  SS r = series_reciprocal(s);
  CHECK((r * s) == SS::constant(1, 2, SymPoly(Rational(1))));
}
