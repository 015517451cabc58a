#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qtoda/fock.hpp"

using namespace qtoda;

namespace {

const VarsPtr kVars = VarSystem::make(8, 2);

FockState ket(int s, Partition lam) { return FockState::basis(kVars, ChargedPartition{s, std::move(lam)}); }

bool same_state(const FockState& a, const FockState& b) {
  FockState d = a - b;
  return d.empty();
}

std::vector<ChargedPartition> basis_up_to(int s, int w) {
  std::vector<ChargedPartition> out;
  for (auto& lam : partitions_up_to(w)) out.push_back({s, lam});
  return out;
}

}  // namespace

TEST_CASE("maya diagrams of small partitions") {
  CHECK(occupied_modes(maya_from_partition({0, {}}), 4) == std::vector<int>{0, 1, 2, 3});
  CHECK(occupied_modes(maya_from_partition({2, {}}), 4) == std::vector<int>{-2, -1, 0, 1});
  CHECK(occupied_modes(maya_from_partition({0, {2, 1}}), 5) == std::vector<int>{-2, 0, 2, 3, 4});
  CHECK(maya_from_partition({-1, {}}).charge() == -1);
}

TEST_CASE("maya map is a bijection") {
  for (int s = -4; s <= 4; ++s) {
    for (const auto& lam : partitions_up_to(10)) {
      ChargedPartition p{s, lam};
      CHECK(partition_from_maya(maya_from_partition(p)) == p);
    }
  }
}

TEST_CASE("vacuum conditions") {
  auto vac = ket(0, {});
  for (int i = 0; i <= 4; ++i) CHECK(apply_psi(i, vac, false).empty());
  for (int i = 1; i <= 4; ++i) CHECK(apply_psi(i, vac, true).empty());
  // psi_{-1} psi*_0 |0> moves the particle at 0 down to -1
  auto st = apply_psi(-1, apply_psi(0, vac, true), false);
  REQUIRE(st.terms().size() == 1);
  CHECK(st.terms().begin()->first == ChargedPartition{0, {1}});
  CHECK(st.terms().begin()->second.coeff(Monomial{}) == 1);
}

TEST_CASE("normal-ordering constant from vacuum expectation values") {
  auto vac = ket(0, {});
  for (int i = -3; i <= 3; ++i) {
    for (int j = -3; j <= 3; ++j) {
      auto raw = apply_psi(-i, apply_psi(j, vac, true), false);
      const Rational expect = (i == j && i <= 0) ? 1 : 0;
      CHECK(inner_product(vac, raw).coeff(Monomial{}) == expect);
      // the normal-ordered bilinear has zero vacuum expectation
      CHECK(inner_product(vac, apply_bilinear(i, j, vac)).empty());
    }
  }
  CHECK(apply_bilinear(1, 1, vac).empty());
  CHECK(apply_bilinear(0, 0, vac).empty());
}

TEST_CASE("canonical anticommutation relations") {
  for (int s = -1; s <= 1; ++s) {
    for (const auto& p : basis_up_to(s, 6)) {
      auto v = FockState::basis(kVars, p);
      for (int i = -6; i <= 6; ++i) {
        for (int j = -6; j <= 6; ++j) {
          auto mixed = apply_psi(i, apply_psi(j, v, true), false) + apply_psi(j, apply_psi(i, v, false), true);
          CHECK(same_state(mixed, i + j == 0 ? v : FockState(kVars)));
          CHECK(same_state(apply_psi(i, apply_psi(j, v, false), false),
                           apply_psi(j, apply_psi(i, v, false), false).scaled(Rational(-1))));
          CHECK(same_state(apply_psi(i, apply_psi(j, v, true), true),
                           apply_psi(j, apply_psi(i, v, true), true).scaled(Rational(-1))));
        }
      }
    }
  }
}

TEST_CASE("bilinears preserve charge") {
  for (const auto& p : basis_up_to(1, 5)) {
    auto v = FockState::basis(kVars, p);
    for (int i = -4; i <= 4; ++i) {
      for (int j = -4; j <= 4; ++j) {
        const auto out = apply_bilinear(i, j, v);
        for (const auto& [q, c] : out.terms()) CHECK(q.s == 1);
      }
    }
  }
}

TEST_CASE("band action agrees with explicit bilinear sums") {
  OneBandMatrix shift{2, [](int) { return BandEntry{}; }, "L^2"};
  OneBandMatrix weighted{-1, [](int i) { return BandEntry{Rational(i * i + 1), 0, 0}; }, "w"};
  OneBandMatrix diag{0, [](int i) { return BandEntry{Rational(i), 0, 0}; }, "L0"};
  for (int s = -2; s <= 2; ++s) {
    for (const auto& p : basis_up_to(s, 5)) {
      auto v = FockState::basis(kVars, p);
      for (const auto* a : {&shift, &weighted, &diag}) {
        FockState explicit_sum(kVars);
        for (int i = -20; i <= 20; ++i) {
          explicit_sum += apply_bilinear(i, i + a->offset, v).scaled(a->entry(i).c);
        }
        CHECK(same_state(apply_band(*a, v), explicit_sum));
      }
    }
  }
}

TEST_CASE("transpose band acts as the dual") {
  OneBandMatrix a{1, [](int i) { return BandEntry{Rational(2 * i - 3), 0, 0}; }, "a"};
  auto at = a.transpose();
  for (const auto& p : basis_up_to(0, 5)) {
    for (const auto& q : basis_up_to(0, 5)) {
      auto u = FockState::basis(kVars, p);
      auto v = FockState::basis(kVars, q);
      CHECK(agree(inner_product(u, apply_band(a, v)), inner_product(apply_band(at, u), v)));
    }
  }
}

TEST_CASE("dual pairing: <u| psi_i |v> = (psi*_{-i} |u>)^T |v>") {
  for (const auto& p : basis_up_to(0, 4)) {
    for (const auto& q : basis_up_to(-1, 4)) {
      auto u = FockState::basis(kVars, p);
      auto v = FockState::basis(kVars, q);
      for (int i = -5; i <= 5; ++i) {
        CHECK(agree(inner_product(u, apply_psi(i, v, false)), inner_product(apply_psi(-i, u, true), v)));
      }
    }
  }
}

TEST_CASE("inner product orthonormality") {
  CHECK(inner_product(ket(0, {}), ket(0, {})).coeff(Monomial{}) == 1);
  CHECK(inner_product(ket(0, {1}), ket(0, {2})).empty());
  for (int s = -3; s <= 3; ++s) CHECK(inner_product(ket(s, {}), ket(s, {})).coeff(Monomial{}) == 1);
  CHECK(inner_product(ket(1, {}), ket(0, {})).empty());
}

TEST_CASE("state dump is sorted") {
  auto st = ket(1, {2}) + ket(0, {1, 1}) + ket(0, {2}) + ket(0, {});
  auto text = dump_state(st);
  CHECK(text.find("s=0 lambda=[]") < text.find("s=0 lambda=[1,1]"));
  CHECK(text.find("s=0 lambda=[1,1]") < text.find("s=0 lambda=[2]"));
  CHECK(text.find("s=0 lambda=[2]") < text.find("s=1 lambda=[2]"));
}
