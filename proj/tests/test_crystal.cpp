#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qtoda/crystal.hpp"
#include "qtoda/tau.hpp"

using namespace qtoda;

namespace {

// counts plane partitions by filling cells row by row, each entry bounded
// by its upper and left neighbours
void fill(std::vector<std::vector<int>>& a, int i, int j, int left, std::vector<long long>& count) {
  const int n = static_cast<int>(a.size());
  if (i == n) {
    int v = 0;
    for (auto& r : a)
      for (int e : r) v += e;
    ++count[v];
    return;
  }
  int bound = left;
  if (i > 0) bound = std::min(bound, a[i - 1][j]);
  if (j > 0) bound = std::min(bound, a[i][j - 1]);
  for (int e = 0; e <= bound; ++e) {
    a[i][j] = e;
    if (j + 1 < n)
      fill(a, i, j + 1, left - e, count);
    else
      fill(a, i + 1, 0, left - e, count);
  }
  a[i][j] = 0;
}

std::vector<long long> brute_counts(int vmax) {
  std::vector<long long> count(vmax + 1, 0);
  std::vector<std::vector<int>> a(vmax, std::vector<int>(vmax, 0));
  if (vmax == 0) return {1};
  fill(a, 0, 0, vmax, count);
  return count;
}

}  // namespace

TEST_CASE("plane partition counts") {
  const std::vector<long long> known{1, 1, 3, 6, 13, 24, 48, 86, 160};
  CHECK(enumerate_plane_partitions(8) == known);
  CHECK(brute_counts(7) == std::vector<long long>(known.begin(), known.begin() + 8));
}

TEST_CASE("plane partition validity") {
  CHECK(PlanePartition{{{2, 1}, {1}}}.valid());
  CHECK(PlanePartition{{{2, 1}, {1}}}.volume() == 4);
  CHECK_FALSE(PlanePartition{{{1, 2}}}.valid());
  CHECK_FALSE(PlanePartition{{{1}, {2}}}.valid());
}

TEST_CASE("hook formula coefficient") {
  auto v = VarSystem::make(12, 0);
  // <0|G_-|(1)> = x / (1 - x^2)
  auto c = schur_principal(v, {1});
  CHECK(c.precision().x >= 11);
  for (int e = 0; e < c.precision().x; ++e) CHECK(c.coeff(Monomial::x_pow(e)) == (e % 2 == 1 ? 1 : 0));
  CHECK(agree(schur_principal(v, {}), LaurentSeries::constant(v, 1)));
}

TEST_CASE("partition function: operator, basis sum and product agree") {
  auto v = coupling_vars(12, 4, 0, 0);
  auto op = melting_Z_operator(v, 0, {});
  auto direct = crystal_Z_direct(v, 0, {});
  auto prod = crystal_product(v);
  CHECK(agree(op, direct));
  CHECK(agree(direct, prod));
}

TEST_CASE("counts at Q = 1") {
  auto v = coupling_vars(12, 5, 0, 0);
  auto counts = counts_at_Q1(crystal_product(v), 5);
  const std::vector<long long> pp = enumerate_plane_partitions(5);
  for (int n = 0; n <= 5; ++n) CHECK(counts[n] == Rational(static_cast<long>(pp[n])));
}

TEST_CASE("consistency report and its negative control") {
  CrystalConfig c;
  c.x_order = 10;
  c.Q_order = 5;
  c.sectors = {-1, 0, 1};
  auto r = check_crystal_consistency(c);
  CHECK(r.pass());
  c.flip_L0 = true;
  CHECK_FALSE(check_crystal_consistency(c).pass());
}
