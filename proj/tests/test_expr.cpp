#include <doctest.h>

#include "kappa/expr.hpp"
#include "test_util.hpp"

using namespace kappa;
namespace tu = kappa::testutil;

static Value ev(const std::string& s, int n = 1) { return evaluate(parse(s), n); }

TEST_CASE("grammar instances from the contract") {
  Value v = ev("X1 * s[1;1,1]");
  CHECK(v.kind == Value::K);
  CHECK(v.k == kn_mul(KnElement::generator(1, GeneratorSymbol::x(1)),
                      KnElement::generator(1, GeneratorSymbol::sigma(1, {1, 1}))));

  Value t = ev("1 (x) s^-1 * X1");
  CHECK(t.kind == Value::KTensorV);
  KnElement sx = kn_mul(KnElement::from_ab(AbElement::sigma_power(1, -1)),
                        KnElement::generator(1, GeneratorSymbol::x(1)));
  CHECK(t.t == KnTensor::from_elements({KnElement::one(1), sx}));

  // syntax error with a column
  try {
    parse("X1 * * s");
    CHECK(false);
  } catch (const parse_error& e) {
    CHECK(e.column == 6);
  }
}

TEST_CASE("calls, powers, sums") {
  CHECK(ev("eps(s)").scalar == 1);
  CHECK(ev("eps(s[1;1,1])").scalar == 0);
  Value s = ev("S(X1)");
  CHECK(s.k == antipode(KnElement::generator(1, GeneratorSymbol::x(1))));
  Value d = ev("cop(s[1;1,1])");
  CHECK(d.t == coproduct(KnElement::generator(1, GeneratorSymbol::sigma(1, {1, 1}))));
  CHECK(ev("s^-2 s[1;1,1]").k ==
        kn_mul(KnElement::from_ab(AbElement::sigma_power(1, -2)),
               KnElement::generator(1, GeneratorSymbol::sigma(1, {1, 1}))));
  CHECK(ev("sinv X1 - s^-2 s[1;1,1]").k ==
        pbw_normalize({GeneratorSymbol::x(1), GeneratorSymbol::sigma_pow(-1)}));
  CHECK(ev("1/2 X1 + 1/2 X1").k == KnElement::generator(1, GeneratorSymbol::x(1)));
}

TEST_CASE("F-algebra literals and CE cochains") {
  Value f = ev("binv b[1;1,1]");
  CHECK(f.kind == Value::F);
  CHECK(f.f == FdBElement::inv_det(FAlg::FGd, 1) *
                   FdBElement::generator(FAlg::FGd, 1, FGen(1, {1, 1})));

  Value ce = ev("th1 (x) 1 /\\ binv b[1;1,1]");
  CHECK(ce.kind == Value::CE);
  FdBElement k = FdBElement::inv_det(FAlg::FGd, 1) *
                 FdBElement::generator(FAlg::FGd, 1, FGen(1, {1, 1}));
  CHECK(ce.ce == CECochain::from_legs(FAlg::FGd, 1, {1}, {FdBElement::one(FAlg::FGd, 1), k}));
}

TEST_CASE("type errors carry expected/found kinds") {
  CHECK_THROWS_AS(ev("X1 + b[1;1,1]"), type_error);
  CHECK_THROWS_AS(ev("cop(b[1;1,1])"), type_error);
  CHECK_THROWS_AS(ev("X1 (x) th1"), type_error);
}

TEST_CASE("jets parse and print") {
  auto j = parse_jet("x + 1/2 x^2", 1, 3);
  CHECK(fdb_eval(FdBElement::generator(FAlg::FGd, 1, FGen(1, {1, 1})), j) == 1);
  auto j2 = parse_jet("2 x1 + x2; x2 - x1 x2", 2, 3);
  CHECK(j2.n == 2);
  // print/parse round trip on jets
  auto printed = print_jet(j2);
  auto reparsed = parse_jet(printed, 2, 3);
  CHECK(reparsed == j2);
}

// canonical-printer round trip on generated expressions
TEST_CASE("print/parse round trip on >= 1000 generated values") {
  int count = 0;
  auto gens1 = generators_up_to(1, 3, true);
  auto gens2 = generators_up_to(2, 2, false);
  for (int trial = 0; trial < 520; ++trial) {
    for (int n = 1; n <= 2; ++n) {
      const auto& gens = n == 1 ? gens1 : gens2;
      std::uniform_int_distribution<int> pick(0, static_cast<int>(gens.size()) - 1);
      std::uniform_int_distribution<int> len(1, 2);
      KnElement e = KnElement::scalar(n, tu::random_rational(4, 3));
      int L = len(tu::rng());
      for (int i = 0; i < L; ++i)
        e = kn_mul(e, KnElement::generator(n, gens[static_cast<size_t>(pick(tu::rng()))]));
      if (trial % 3 == 0) e += KnElement::scalar(n, tu::random_rational(3, 2));
      if (e.is_zero()) continue;
      std::string printed = e.str();
      Value back = ev(printed, n);
      if (e.is_scalar()) {
        REQUIRE(back.kind == Value::Scalar);
        CHECK(back.scalar == e.scalar_value());
      } else {
        REQUIRE(back.kind == Value::K);
        CHECK(back.k == e);
      }
      ++count;
      if (trial % 4 == 0 && n == 1) {
        // tensors round trip through the printer too
        KnTensor t = coproduct(KnElement::generator(n, gens[static_cast<size_t>(pick(tu::rng()))]));
        Value vt = ev(t.str(), n);
        REQUIRE(vt.kind == Value::KTensorV);
        CHECK(vt.t == t);
        ++count;
      }
    }
  }
  CHECK(count >= 1000);
}
