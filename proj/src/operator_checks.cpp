#include <map>
#include <mutex>

#include "qtoda/operators.hpp"

namespace qtoda {

namespace {

std::vector<ChargedPartition> basis_states(int s, int wmax) {
  std::vector<ChargedPartition> out;
  for (auto& lam : partitions_up_to(wmax)) out.push_back({s, lam});
  return out;
}

nlohmann::json tuple_json(std::initializer_list<std::pair<const char*, int>> kv) {
  nlohmann::json j = nlohmann::json::object();
  for (auto [k, v] : kv) j[k] = v;
  return j;
}

void merge(CaseResult& r, const StateComparison& c) {
  r.verified_precision = std::min(r.verified_precision, c.precision);
  if (!c.equal && r.pass) {
    r.pass = false;
    r.first_mismatch = c.first_mismatch;
  }
}

/// G_- G_+ |p> on charge 0, cut at weight cap and relabelled to p's charge.
/// The transfer matrices act on partition labels independently of charge.
FockState gg_basis(const VarsPtr& vars, const ChargedPartition& p, int cap) {
  static std::mutex mu;
  static std::map<std::tuple<int, Partition, int>, FockState> memo;
  const auto key = std::make_tuple(vars->x_order, p.lambda, cap);
  FockState base(vars);
  bool found = false;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = memo.find(key); it != memo.end()) {
      base = it->second;
      found = true;
    }
  }
  if (!found) {
    OperatorPipeline gg{{OpG{Direction::Minus, false}, OpG{Direction::Plus, false}}};
    base = apply_pipeline(gg, FockState::basis(vars, ChargedPartition{0, p.lambda}), cap);
    std::lock_guard<std::mutex> lock(mu);
    memo.emplace(key, base);
  }
  if (p.s == 0) return base;
  FockState out(vars);
  out.set_tail(base.tail());
  out.set_weight_cap(base.weight_cap());
  out.set_zero_above_cap(base.zero_above_cap());
  for (const auto& [q, c] : base.terms()) out.add(ChargedPartition{p.s, q.lambda}, c);
  return out;
}

/// G_- G_+ applied to an arbitrary state by linearity.
FockState gg_apply(const FockState& st, int cap) {
  FockState out(st.vars());
  bool first = true;
  for (const auto& [p, c] : st.terms()) {
    FockState piece = gg_basis(st.vars(), p, cap).scaled(c);
    if (first) {
      out = piece;
      first = false;
    } else {
      out += piece;
    }
  }
  if (st.tail() < kExact) out.set_tail(std::min(out.tail(), st.tail()));
  return out;
}

std::vector<int> sectors_of(int s) { return {s}; }

}  // namespace

// ---------------------------------------------------------------- bilinear commutators

CaseResult check_bilinear_case(int target, int k, int l, int m, int n, int s, int wmax) {
  const int e = l * m - k * n;
  auto attempt = [&](int work) {
    auto vars = VarSystem::make(work, 0);
    CaseResult r;
    r.params = tuple_json({{"k", k}, {"l", l}, {"m", m}, {"n", n}, {"s", s}});
    r.pass = true;
    r.verified_precision = kExact;
    for (const auto& p : basis_states(s, wmax)) {
      const auto v = FockState::basis(vars, p);
      FockState lhs = apply_Vkm(k, m, apply_Vkm(l, n, v)) - apply_Vkm(l, n, apply_Vkm(k, m, v));
      FockState rhs(vars);
      if (k + l != 0) {
        auto coeff = LaurentSeries::x_power(vars, e) - LaurentSeries::x_power(vars, -e);
        FockState inner = apply_Vkm(k + l, m + n, v);
        if (m + n == 0) inner -= v.scaled(anomaly_constant(vars, k + l));
        rhs = inner.scaled(coeff);
      } else {
        const int f = k * (m + n);
        auto coeff = LaurentSeries::x_power(vars, -f) - LaurentSeries::x_power(vars, f);
        rhs = apply_Vkm(0, m + n, v).scaled(coeff);
        if (m + n == 0) rhs += v.scaled(Rational(m));
      }
      merge(r, compare_states(lhs, rhs, sectors_of(s), wmax + std::abs(m) + std::abs(n)));
    }
    return r;
  };
  return with_precision(target, std::abs(e) + 2, attempt);
}

IdentityReport check_bilinear_commutators(const CheckGrid& g) {
  IdentityReport rep;
  rep.identity = "bilinear commutators with central extension";
  rep.config = {{"qorder", g.x_order}, {"kmax", g.kmax}, {"mmax", g.mmax}, {"wmax", g.wmax}, {"sectors", g.sectors}};
  for (int s : g.sectors)
    for (int k = -g.kmax; k <= g.kmax; ++k)
      for (int l = -g.kmax; l <= g.kmax; ++l)
        for (int m = -g.mmax; m <= g.mmax; ++m)
          for (int n = -g.mmax; n <= g.mmax; ++n)
            rep.cases.push_back(check_bilinear_case(g.x_order, k, l, m, n, s, g.wmax));
  return rep;
}

// ---------------------------------------------------------------- first shift symmetry

CaseResult check_shift1_case(int target, int k, int m, int s, int wmax) {
  auto attempt = [&](int work) {
    auto vars = VarSystem::make(work, 0);
    CaseResult r;
    r.params = tuple_json({{"k", k}, {"m", m}, {"s", s}});
    r.pass = true;
    r.verified_precision = kExact;
    std::optional<LaurentSeries> c;
    if (k != 0) c = anomaly_constant(vars, k);
    const int sign = k % 2 == 0 ? 1 : -1;
    for (const auto& p : basis_states(s, wmax)) {
      const auto v = FockState::basis(vars, p);
      // left: G_-G_+ (V^(k)_m - d_{m,0} c) |v>
      FockState inner = apply_Vkm(k, m, v);
      if (m == 0 && c) inner -= v.scaled(*c);
      FockState lhs = gg_apply(inner, wmax);
      // right: (-1)^k (V^(k)_{m+k} - d_{m+k,0} c) G_-G_+ |v>
      const int in_cap = std::max(-1, wmax + m + k);
      FockState ggv = gg_basis(vars, p, in_cap);
      FockState rhs = apply_Vkm(k, m + k, ggv);
      if (m + k == 0 && c) rhs -= ggv.scaled(*c);
      rhs = rhs.scaled(Rational(sign));
      merge(r, compare_states(lhs, rhs, sectors_of(s), wmax));
    }
    return r;
  };
  return with_precision(target, 2 * std::abs(k) * (wmax + std::abs(s) + 2), attempt);
}

IdentityReport check_shift1(const CheckGrid& g) {
  IdentityReport rep;
  rep.identity = "first shift symmetry (multiplied by G_-G_+ on the right)";
  rep.config = {{"qorder", g.x_order}, {"kmax", g.kmax}, {"mmax", g.mmax}, {"wmax", g.wmax}, {"sectors", g.sectors}};
  for (int s : g.sectors)
    for (int k = -g.kmax; k <= g.kmax; ++k)
      for (int m = -g.mmax; m <= g.mmax; ++m) rep.cases.push_back(check_shift1_case(g.x_order, k, m, s, g.wmax));
  return rep;
}

// ---------------------------------------------------------------- second shift symmetry

CaseResult check_shift2_case(int target, int k, int m, int s, int wmax) {
  auto vars = VarSystem::make(target, 0);
  CaseResult r;
  r.params = tuple_json({{"k", k}, {"m", m}, {"s", s}});
  r.pass = true;
  r.verified_precision = kExact;
  OperatorPipeline conj{{OpQW0{Rational(1, 2)}, OpVkm{k, m, std::nullopt}, OpQW0{Rational(-1, 2)}}};
  for (const auto& p : basis_states(s, wmax)) {
    const auto v = FockState::basis(vars, p);
    merge(r, compare_states(apply_pipeline(conj, v), apply_Vkm(k - m, m, v), sectors_of(s), wmax + std::abs(m)));
  }
  return r;
}

IdentityReport check_shift2(const CheckGrid& g) {
  IdentityReport rep;
  rep.identity = "second shift symmetry";
  rep.config = {{"qorder", g.x_order}, {"kmax", g.kmax}, {"mmax", g.mmax}, {"wmax", g.wmax}, {"sectors", g.sectors}};
  for (int s : g.sectors)
    for (int k = -g.kmax; k <= g.kmax; ++k)
      for (int m = -g.mmax; m <= g.mmax; ++m) rep.cases.push_back(check_shift2_case(g.x_order, k, m, s, g.wmax));
  return rep;
}

}  // namespace qtoda
