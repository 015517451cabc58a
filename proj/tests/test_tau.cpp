#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qtoda/tau.hpp"

using namespace qtoda;

TEST_CASE("model names") {
  for (GModel m : {GModel::Crystal, GModel::Vertex, GModel::Hurwitz, GModel::Broken})
    CHECK(parse_model(model_name(m)) == m);
  CHECK_THROWS_AS(parse_model("nope"), std::invalid_argument);
}

TEST_CASE("transpose reverses and flips") {
  auto p = transpose(g_pipeline(GModel::Vertex));
  CHECK(p.describe() == "q^(1/2 W0) . G+ . G- . q^(1/2 W0)");
  CHECK(transpose(transpose(g_pipeline(GModel::Crystal))).describe() == g_pipeline(GModel::Crystal).describe());
}

TEST_CASE("tau at zero times") {
  // hurwitz: <s|q^{W0} Q^{L0}|s>
  auto v = tau_vars(10, 4, 1, 1);
  for (int s = -1; s <= 2; ++s) {
    TauSpec spec{s, g_pipeline(GModel::Hurwitz), {}, {}};
    auto t = tau_eval(spec, v);
    const int w = s * (s + 1) * (2 * s + 1) / 6;
    const int l = s * (s + 1) / 2;
    CHECK(t.coeff(Monomial{2 * w, l, {}}) == 1);
  }
}

TEST_CASE("tau series is reproducible and stable in precision") {
  auto a = tau_series(GModel::Crystal, 0, 8, 2, 1, 1);
  auto b = tau_series(GModel::Crystal, 0, 8, 2, 1, 1);
  CHECK(to_json(a) == to_json(b));
  auto c = tau_series(GModel::Crystal, 0, 12, 2, 1, 1);
  CHECK(agree(a, c.rebound(a.vars())));
}

TEST_CASE("main identity") {
  auto r = check_main_identity(TauConfig{10, 3, 2, 2}, {-1, 0, 1});
  CHECK(r.pass());
  CHECK(r.cases.size() == 6);
}

TEST_CASE("intertwining J form") {
  for (int k = 1; k <= 2; ++k) {
    CHECK(check_intertwining_case(GModel::Crystal, false, k, 0, 0, 3, 10, 3).pass);
  }
  // <0|J_{-1} vanishes while <0|g J_1|(1)> = <0|g|0>, so only k > 0 holds
  CHECK_FALSE(check_intertwining_case(GModel::Crystal, false, -1, 0, 0, 3, 10, 3).pass);
  CHECK_FALSE(check_intertwining_case(GModel::Broken, false, 1, 0, 0, 3, 10, 3).pass);
}

TEST_CASE("intertwining V form") {
  CHECK(check_intertwining_case(GModel::Crystal, true, 1, 0, 0, 3, 10, 3).pass);
  CHECK(check_intertwining_case(GModel::Crystal, true, 1, 1, 0, 3, 10, 3).pass);
  // fails once k + m <= 0
  CHECK_FALSE(check_intertwining_case(GModel::Crystal, true, 1, -1, 0, 3, 10, 3).pass);
}

TEST_CASE("constraint and difference dependence") {
  TauConfig c{10, 3, 3, 2};
  CHECK(check_constraint(GModel::Crystal, c, {0}).pass());
  CHECK(check_difference_dependence(GModel::Crystal, c, {0}).pass());
  CHECK_FALSE(check_constraint(GModel::Broken, c, {0}).pass());
  CHECK_FALSE(check_constraint(GModel::Hurwitz, c, {0}).pass());
}
