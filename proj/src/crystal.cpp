#include "qtoda/crystal.hpp"

#include <functional>
#include <map>

#include "qtoda/tau.hpp"

namespace qtoda {

int PlanePartition::volume() const {
  int v = 0;
  for (const auto& r : rows)
    for (int h : r) v += h;
  return v;
}

bool PlanePartition::valid() const {
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows[i].size(); ++j) {
      if (rows[i][j] < 0) return false;
      if (j + 1 < rows[i].size() && rows[i][j + 1] > rows[i][j]) return false;
      if (i > 0 && (j >= rows[i - 1].size() || rows[i][j] > rows[i - 1][j])) return false;
    }
  }
  return true;
}

std::vector<long long> enumerate_plane_partitions(int vmax) {
  if (vmax < 0) throw std::invalid_argument("vmax must be non-negative");
  const auto parts = partitions_up_to(vmax);
  // chains[lambda][v]: sequences lambda > mu_1 > mu_2 > ... > 0 of interlacing
  // slices with sum |mu_i| = v
  // chains[lambda][v]: sequences lambda > mu_1 > mu_2 > ... > 0 of interlacing
  // slices with sum |mu_i| = v (mu_1 = lambda is allowed)
  std::map<Partition, std::vector<long long>> chains;
  std::map<Partition, std::vector<Partition>> below;
  for (const auto& lam : parts) {
    chains[lam].assign(vmax + 1, 0);
    chains[lam][0] = interlaces(lam, {}) ? 1 : 0;
    for (const auto& mu : parts) {
      if (!mu.empty() && weight(mu) <= weight(lam) && interlaces(lam, mu)) below[lam].push_back(mu);
    }
  }
  for (int v = 1; v <= vmax; ++v) {
    for (const auto& lam : parts) {
      long long n = 0;
      for (const auto& mu : below[lam]) {
        if (weight(mu) <= v) n += chains[mu][v - weight(mu)];
      }
      chains[lam][v] = n;
    }
  }
  std::vector<long long> out(vmax + 1, 0);
  for (const auto& lam : parts) {
    const int w = weight(lam);
    const auto& c = chains.at(lam);
    for (int a = 0; a + w <= vmax; ++a)
      for (int b = 0; a + b + w <= vmax; ++b) out[a + b + w] += c[a] * c[b];
  }
  return out;
}

LaurentSeries schur_principal(const VarsPtr& vars, const Partition& lambda) {
  LaurentSeries r = LaurentSeries::x_power(vars, weight(lambda) + 2 * static_cast<int>(n_statistic(lambda)));
  for (int h : hook_lengths(lambda)) r *= geometric_fraction(vars, h) * LaurentSeries::x_power(vars, -2 * h);
  return r;
}

LaurentSeries crystal_Z_direct(const VarsPtr& vars, int s, const std::vector<LaurentSeries>& t, bool flip_L0) {
  const int M = vars->Q_order;
  const long long base = eigenvalue_L0({s, {}});
  LaurentSeries z(vars);
  for (const auto& lam : partitions_up_to(static_cast<int>(std::max<long long>(-1, M - base)))) {
    const ChargedPartition p{s, lam};
    // the control reverses the grading inside the truncation box
    const long long l0 = flip_L0 ? base + (M - base - weight(lam)) : eigenvalue_L0(p);
    LaurentSeries c = schur_principal(vars, lam);
    LaurentSeries term = c * c;
    LaurentSeries h(vars);
    for (size_t k = 1; k <= t.size(); ++k) h += t[k - 1] * eigenvalue_H(vars, static_cast<int>(k), p);
    if (!t.empty()) term *= series_exp(h);
    z += term.shifted(Monomial::Q_pow(static_cast<int>(l0)));
  }
  return z;
}

LaurentSeries crystal_product(const VarsPtr& vars) {
  const int N = vars->x_order;
  const int M = vars->Q_order;
  LaurentSeries z = LaurentSeries::constant(vars, 1);
  Precision p;
  p.x = N;
  for (int n = 1; 2 * n < N; ++n) {
    // (1 - Q q^n)^{-n} = sum_j C(n+j-1, j) Q^j q^{nj}
    std::vector<LaurentSeries::Term> terms;
    mpz_class binom = 1;
    for (int j = 0; j <= M && 2 * n * j < N; ++j) {
      Monomial m;
      m.x = 2 * n * j;
      m.Q = j;
      terms.emplace_back(m, Rational(binom));
      binom = binom * (n + j) / (j + 1);
    }
    z *= LaurentSeries::from_terms(vars, std::move(terms), p);
  }
  return z.truncated_x(N);
}

std::vector<Rational> counts_at_Q1(const LaurentSeries& z, int vmax) {
  if (z.precision().x <= 2 * vmax) throw PrecisionUnderflow("x-precision too small for the requested volumes");
  if (z.vars()->Q_order < vmax) throw PrecisionUnderflow("Q-order too small for the requested volumes");
  std::vector<Rational> out(vmax + 1, 0);
  for (const auto& [m, c] : z.terms()) {
    if (m.tdeg() != 0 || m.x % 2 != 0 || m.x < 0 || m.x > 2 * vmax) continue;
    out[m.x / 2] += c;
  }
  return out;
}

IdentityReport check_crystal_consistency(const CrystalConfig& c) {
  IdentityReport rep;
  rep.identity = "melting crystal oracles";
  rep.config = {{"qorder", c.x_order}, {"Qorder", c.Q_order}, {"tdegree", c.D},
                {"sectors", c.sectors}, {"vmax", c.vmax},     {"flip_L0", c.flip_L0}};
  using Pair = std::pair<LaurentSeries, LaurentSeries>;
  auto add = [&](const nlohmann::json& params, const std::function<Pair(int)>& sides) {
    rep.cases.push_back(with_precision(c.x_order, 2, [&](int work) {
      const auto [a, b] = sides(work);
      CaseResult r;
      r.params = params;
      auto cmp = compare_series(a, b);
      r.pass = cmp.equal;
      r.verified_precision = cmp.precision;
      r.first_mismatch = cmp.first_mismatch;
      return r;
    }));
  };
  add({{"s", 0}, {"t", "0"}, {"paths", "operator vs basis sum"}}, [&](int work) {
    auto vars = VarSystem::make(work, c.Q_order);
    return Pair{melting_Z_operator(vars, 0, {}), crystal_Z_direct(vars, 0, {}, c.flip_L0)};
  });
  add({{"s", 0}, {"t", "0"}, {"paths", "basis sum vs product"}}, [&](int work) {
    auto vars = VarSystem::make(work, c.Q_order);
    return Pair{crystal_Z_direct(vars, 0, {}, c.flip_L0), crystal_product(vars)};
  });
  if (c.D > 0) {
    for (int s : c.sectors) {
      add({{"s", s}, {"t", "t1"}, {"paths", "operator vs basis sum"}}, [&](int work) {
        auto vars = coupling_vars(work, c.Q_order, c.D, 1);
        std::vector<LaurentSeries> t{LaurentSeries::time_var(vars, 0)};
        return Pair{melting_Z_operator(vars, s, t), crystal_Z_direct(vars, s, t, c.flip_L0)};
      });
    }
  }
  {
    const int xo = std::max(c.x_order, 2 * c.vmax + 2);
    auto vars = VarSystem::make(xo, std::max(c.Q_order, c.vmax));
    const auto series = counts_at_Q1(crystal_Z_direct(vars, 0, {}, c.flip_L0), c.vmax);
    const auto pp = enumerate_plane_partitions(c.vmax);
    CaseResult r;
    r.params = {{"paths", "plane partition counts vs Q = 1"}, {"vmax", c.vmax}};
    r.pass = true;
    r.verified_precision = kExact;
    for (int v = 0; v <= c.vmax; ++v) {
      if (series[v] != Rational(static_cast<long>(pp[v])) && r.pass) {
        r.pass = false;
        r.first_mismatch = "volume " + std::to_string(v) + ": series " + series[v].get_str() + ", enumeration " +
                           std::to_string(pp[v]);
      }
    }
    rep.cases.push_back(r);
  }
  return rep;
}

}  // namespace qtoda
