#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qtoda/qtorus.hpp"

using namespace qtoda;

namespace {
const VarsPtr kVars = VarSystem::make(16, 0);
}

TEST_CASE("vkm windows") {
  auto lam = vkm_window(kVars, 0, 1, 5);
  for (int i = -5; i < 5; ++i) CHECK(agree(lam.at(i, i + 1), LaurentSeries::constant(kVars, 1)));
  CHECK(lam.entries.size() == 10);

  auto diag = vkm_window(kVars, 1, 0, 5);
  for (int i = -5; i <= 5; ++i) CHECK(agree(diag.at(i, i), LaurentSeries::x_power(kVars, 2 * i)));

  auto v11 = vkm_window(kVars, 1, 1, 5);
  CHECK(agree(v11.at(0, 1), LaurentSeries::x_power(kVars, 1)));
}

TEST_CASE("[Lambda, Delta] = Lambda on the interior") {
  const auto& v = kVars;
  WindowMatrix delta(v, -2, 2);
  for (int i = -2; i <= 2; ++i) delta.set(i, i, LaurentSeries::constant(v, i));
  auto lam = vkm_window(v, 0, 1, 2);
  auto c = window_commutator(lam, delta);
  CHECK(c.valid_lo == -1);
  CHECK(c.valid_hi == 1);
  for (int i = -1; i < 1; ++i) CHECK(agree(c.at(i, i + 1), LaurentSeries::constant(v, 1)));
  CHECK(c.entries.size() == 2);
}

TEST_CASE("powers of Lambda commute") {
  auto c = window_commutator(vkm_window(kVars, 0, 2, 8), vkm_window(kVars, 0, -1, 8));
  CHECK(c.entries.empty());
}

TEST_CASE("[v(1)_1, v(1)_-1] = (q - q^-1) v(2)_0") {
  auto c = window_commutator(vkm_window(kVars, 1, 1, 8), vkm_window(kVars, 1, -1, 8));
  auto coeff = LaurentSeries::x_power(kVars, 2) - LaurentSeries::x_power(kVars, -2);
  for (int i = c.valid_lo; i <= c.valid_hi; ++i) {
    CHECK(agree(c.at(i, i), coeff * LaurentSeries::x_power(kVars, 4 * i)));
  }
}

TEST_CASE("named relation checks") {
  CHECK(check_qtorus_relation(kVars, 1, -1, 1, -1, 12).pass);
  CHECK(check_qtorus_relation(kVars, 0, 0, 2, -3, 12).pass);
  CHECK(check_qtorus_relation(kVars, 2, 1, -1, 3, 12).pass);
}

TEST_CASE("full grid on [-12, 12]") {
  for (int k = -3; k <= 3; ++k)
    for (int l = -3; l <= 3; ++l)
      for (int m = -3; m <= 3; ++m)
        for (int n = -3; n <= 3; ++n) {
          auto r = check_qtorus_relation(kVars, k, l, m, n, 12);
          CHECK_MESSAGE(r.pass, k << " " << l << " " << m << " " << n);
          CHECK(r.interior_lo == -12 + std::abs(m) + std::abs(n));
        }
}

TEST_CASE("negative control: wrong structure constant is detected") {
  auto lhs = window_commutator(vkm_window(kVars, 1, 1, 8), vkm_window(kVars, 1, -1, 8));
  auto rhs = window_scaled(vkm_window(kVars, 2, 0, 8),
                           LaurentSeries::x_power(kVars, -2) - LaurentSeries::x_power(kVars, 2));
  rhs.valid_lo = lhs.valid_lo;
  rhs.valid_hi = lhs.valid_hi;
  CHECK_FALSE(window_agree(lhs, rhs));
}

TEST_CASE("antisymmetry and Jacobi") {
  const int w = 20;
  for (int k = -2; k <= 2; ++k) {
    for (int m = -2; m <= 2; ++m) {
      auto a = vkm_window(kVars, k, m, w);
      auto b = vkm_window(kVars, 1 - k, 2 - m, w);
      auto ab = window_commutator(a, b);
      auto ba = window_commutator(b, a);
      CHECK(window_agree(ab, window_scaled(ba, LaurentSeries::constant(kVars, -1))));

      auto c = vkm_window(kVars, -1, m == 0 ? 1 : -m, w);
      auto j1 = window_commutator(a, window_commutator(b, c));
      auto j2 = window_commutator(b, window_commutator(c, a));
      auto j3 = window_commutator(c, window_commutator(a, b));
      auto total = window_sum(window_sum(j1, j2), j3);
      REQUIRE_FALSE(total.interior_empty());
      CHECK(total.entries.empty());
    }
  }
}

TEST_CASE("empty interior is an error") {
  CHECK_THROWS(window_commutator(vkm_window(kVars, 0, 3, 2), vkm_window(kVars, 0, -3, 2)));
}
