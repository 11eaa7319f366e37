#pragma once

#include <functional>
#include <random>
#include <vector>

#include "kappa/jet.hpp"
#include "kappa/series.hpp"

namespace kappa::testutil {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(0xC0FFEE);
  return gen;
}

inline Rational random_rational(int num_bound = 6, int den_bound = 3) {
  std::uniform_int_distribution<int> num(-num_bound, num_bound);
  std::uniform_int_distribution<int> den(1, den_bound);
  return rat(num(rng()), den(rng()));
}

// Visit all multi-indices with total degree <= order.
inline void for_each_multi(int n, int order, const std::function<void(const Multi&)>& fn) {
  Multi m(static_cast<size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int var, int left) {
    if (var == n) {
      fn(m);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      m[static_cast<size_t>(var)] = e;
      rec(var + 1, left - e);
    }
    m[static_cast<size_t>(var)] = 0;
  };
  rec(0, order);
}

inline TruncSeries<Rational> random_series(int n, int order) {
  TruncSeries<Rational> s(n, order);
  std::uniform_int_distribution<int> pick(0, 2);
  for_each_multi(n, order, [&](const Multi& m) {
    if (pick(rng()) == 0) s.set(m, random_rational());
  });
  return s;
}

// Random orientation-preserving jet; unit_linear forces phi'(0) = Id.
inline JetDiffeo<Rational> random_jet(int n, int order, bool in_gdagger = false,
                                      bool unit_linear = false) {
  for (;;) {
    std::vector<TruncSeries<Rational>> comps;
    for (int i = 0; i < n; ++i) {
      TruncSeries<Rational> f(n, order);
      if (!in_gdagger) f.set(Multi(static_cast<size_t>(n), 0), random_rational(3, 2));
      for (int j = 0; j < n; ++j) {
        Multi m(static_cast<size_t>(n), 0);
        m[static_cast<size_t>(j)] = 1;
        if (unit_linear)
          f.set(m, i == j ? 1 : 0);
        else
          f.set(m, random_rational(2, 2) + (i == j ? 1 : 0));
      }
      std::uniform_int_distribution<int> pick(0, 2);
      for_each_multi(n, order, [&](const Multi& m) {
        int deg = total_degree(m);
        if (deg >= 2 && pick(rng()) == 0) f.set(m, random_rational(2, 3));
      });
      comps.push_back(std::move(f));
    }
    try {
      return JetDiffeo<Rational>::from_components(std::move(comps));
    } catch (const std::invalid_argument&) {
      continue;  // singular or orientation-reversing draw, retry
    }
  }
}

// Re-store a jet at a higher truncation order (polynomial data unchanged).
inline JetDiffeo<Rational> lift_order(const JetDiffeo<Rational>& j, int new_order) {
  std::vector<TruncSeries<Rational>> v;
  for (int i = 0; i < j.n; ++i) {
    TruncSeries<Rational> s(j.n, new_order);
    for (const auto& [m, q] : j.comps[static_cast<size_t>(i)].coeffs) s.set(m, q);
    s.add_to(Multi(static_cast<size_t>(j.n), 0), j.offset[static_cast<size_t>(i)]);
    v.push_back(std::move(s));
  }
  return JetDiffeo<Rational>::from_components(v, false);
}

inline CrossedElement<Rational> random_crossed(int n, int order, int max_terms = 2,
                                               bool unit_linear = false) {
  std::uniform_int_distribution<int> nt(1, max_terms);
  CrossedElement<Rational> a(n);
  int k = nt(rng());
  for (int t = 0; t < k; ++t)
    a.add_term(random_series(n, order), random_jet(n, order, false, unit_linear));
  return a;
}

}  // namespace kappa::testutil
