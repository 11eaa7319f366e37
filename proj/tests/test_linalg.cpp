#include <doctest.h>

#include "kappa/linalg.hpp"

using namespace kappa;

TEST_CASE("in_image membership and absence") {
  // d/dx on span{x, x^2, x^3} in the monomial basis {1, x, x^2}:
  // columns are d/dx(x)=1, d/dx(x^2)=2x, d/dx(x^3)=3x^2
  std::vector<QVector> cols = {{1, 0, 0}, {0, 2, 0}, {0, 0, 3}};
  auto r = in_image({0, 0, 1}, cols);  // target x^2
  REQUIRE(r.has_value());
  CHECK((*r)[2] == rat(1, 3));  // primitive x^3/3

  auto one = in_image({1, 0, 0}, cols);  // target 1, primitive x
  REQUIRE(one.has_value());
  CHECK((*one)[0] == 1);

  // x not in span{x^2}
  std::vector<QVector> only_sq = {{0, 0, 1}};
  CHECK(!in_image({0, 1, 0}, only_sq).has_value());
}

TEST_CASE("nullspace of a rank-1 system") {
  QMatrix a = {{1, 2, 3}};
  auto ns = nullspace(a);
  REQUIRE(ns.size() == 2);
  for (const auto& v : ns) {
    Rational dot = 0;
    for (size_t i = 0; i < 3; ++i) dot += a[0][i] * v[i];
    CHECK(is_zero(dot));
  }
}

TEST_CASE("labeled system flattening") {
  LinearSystem<std::string> sys;
  std::map<std::string, Rational> v1{{"x", 1}, {"y", 2}};
  std::map<std::string, Rational> v2{{"y", 1}, {"z", -1}};
  QVector a = sys.flatten(v1);
  QVector b = sys.flatten(v2);
  std::vector<QVector> vs{a, b};
  LinearSystem<std::string>::pad(vs, static_cast<size_t>(sys.size()));
  CHECK(vs[0].size() == 3);
  CHECK(vs[1][1] == 1);
}
