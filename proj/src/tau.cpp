#include "qtoda/tau.hpp"

#include <stdexcept>

namespace qtoda {

std::string model_name(GModel m) {
  switch (m) {
    case GModel::Crystal: return "crystal";
    case GModel::Vertex: return "vertex";
    case GModel::Hurwitz: return "hurwitz";
    case GModel::Broken: return "broken";
  }
  return "?";
}

GModel parse_model(const std::string& name) {
  for (GModel m : {GModel::Crystal, GModel::Vertex, GModel::Hurwitz, GModel::Broken}) {
    if (model_name(m) == name) return m;
  }
  throw std::invalid_argument("unknown model '" + name + "'");
}

OperatorPipeline g_pipeline(GModel m) {
  const OpQW0 half{Rational(1, 2)};
  const OpG gm{Direction::Minus, false};
  const OpG gp{Direction::Plus, false};
  switch (m) {
    case GModel::Crystal: return {{half, gm, gp, OpQL0{}, gm, gp, half}};
    case GModel::Vertex: return {{half, gp, gm, half}};
    case GModel::Hurwitz: return {{OpQW0{Rational(1)}, OpQL0{}}};
    case GModel::Broken: return {{half, gm, OpQL0{}, gm, gp, half}};
  }
  throw std::logic_error("unknown model");
}

OperatorPipeline transpose(const OperatorPipeline& p) {
  OperatorPipeline out;
  for (auto it = p.ops.rbegin(); it != p.ops.rend(); ++it) {
    ElementaryOperator op = *it;
    if (auto* g = std::get_if<OpG>(&op)) {
      g->dir = g->dir == Direction::Plus ? Direction::Minus : Direction::Plus;
    } else if (auto* e = std::get_if<OpExpJ>(&op)) {
      e->dir = e->dir == Direction::Plus ? Direction::Minus : Direction::Plus;
    } else if (std::holds_alternative<OpBand>(op) || std::holds_alternative<OpVkm>(op)) {
      throw std::invalid_argument("transpose of " + op_name(op) + " is not supported");
    }
    out.ops.push_back(std::move(op));
  }
  return out;
}

namespace {

std::vector<LaurentSeries> negated(const std::vector<LaurentSeries>& v) {
  std::vector<LaurentSeries> out;
  for (const auto& c : v) out.push_back(-c);
  return out;
}

}  // namespace

LaurentSeries tau_eval(const TauSpec& spec, const VarsPtr& vars) {
  const FockState vac = FockState::basis(vars, ChargedPartition{spec.s, {}});
  // <s| exp(sum T_k J_k) is the transpose of exp(sum T_k J_{-k}) |s>
  const OpExpJ bra_op{Direction::Minus, spec.T};
  const OpExpJ ket_op{Direction::Minus, negated(spec.Tbar)};

  // insert the basis at Q^L0 when present (both halves become finite),
  // otherwise in front of the first raising transfer matrix
  auto raising = [](const ElementaryOperator& op) {
    const auto* g = std::get_if<OpG>(&op);
    return g && g->dir == Direction::Minus;
  };
  size_t split = spec.g.ops.size();
  for (size_t i = 0; i < spec.g.ops.size() && split == spec.g.ops.size(); ++i) {
    if (std::holds_alternative<OpQL0>(spec.g.ops[i])) split = i;
  }
  for (size_t i = 0; i < spec.g.ops.size() && split == spec.g.ops.size(); ++i) {
    if (raising(spec.g.ops[i])) split = i;
  }
  if (split < spec.g.ops.size()) {
    OperatorPipeline right{{spec.g.ops.begin() + static_cast<long>(split), spec.g.ops.end()}};
    right.ops.push_back(ket_op);
    OperatorPipeline left{{spec.g.ops.begin(), spec.g.ops.begin() + static_cast<long>(split)}};
    left = transpose(left);
    left.ops.push_back(bra_op);
    const FockState r = apply_pipeline(right, vac);
    const FockState l = apply_pipeline(left, vac, r.weight_cap());
    return inner_product(l, r);
  }
  const FockState bra = apply_pipeline(OperatorPipeline{{bra_op}}, vac);
  OperatorPipeline full = spec.g;
  full.ops.push_back(ket_op);
  return inner_product(bra, apply_pipeline(full, vac, bra.max_weight()));
}

VarsPtr tau_vars(int x_order, int Q_order, int D, int K) {
  std::vector<std::string> names;
  for (int k = 1; k <= K; ++k) names.push_back("T" + std::to_string(k));
  for (int k = 1; k <= K; ++k) names.push_back("Tb" + std::to_string(k));
  return VarSystem::make(x_order, Q_order, names, D);
}

std::vector<LaurentSeries> tau_times(const VarsPtr& vars, const std::string& prefix, int K) {
  std::vector<LaurentSeries> out;
  for (int k = 1; k <= K; ++k) out.push_back(LaurentSeries::time_var(vars, prefix + std::to_string(k)));
  return out;
}

namespace {

/// Evaluates f at growing working precision until the x-precision reaches target.
LaurentSeries series_at_precision(int target, int margin, const std::function<LaurentSeries(int)>& f,
                                  int max_extra = 64) {
  int work = target + std::max(0, margin);
  for (;;) {
    LaurentSeries r = f(work);
    if (r.precision().x >= target) return r.truncated_x(target);
    const int next = work + std::max(2, target - r.precision().x);
    if (next - target > max_extra) {
      throw PrecisionUnderflow("working precision x^" + std::to_string(work) + " gives only x^" +
                               std::to_string(r.precision().x) + ", target x^" + std::to_string(target));
    }
    work = next;
  }
}

/// First guess for the extra working precision: q^{W0/2} on states of
/// weight <= weight lowers x-valuations by at most -min W0.
int w0_margin(int s, int weight) {
  long long lo = 0;
  for (const auto& lam : partitions_up_to(weight)) lo = std::min(lo, eigenvalue_W0({s, lam}));
  return static_cast<int>(-lo) + 2;
}

}  // namespace

LaurentSeries tau_series(GModel model, int s, int target, int Q_order, int D, int K) {
  return series_at_precision(target, w0_margin(s, D * K), [&](int work) {
    auto vars = tau_vars(work, Q_order, D, K);
    TauSpec spec{s, g_pipeline(model), tau_times(vars, "T", K), tau_times(vars, "Tb", K)};
    return tau_eval(spec, vars);
  });
}

LaurentSeries melting_Z_operator(const VarsPtr& vars, int s, const std::vector<LaurentSeries>& t) {
  OperatorPipeline p{{OpG{Direction::Plus, false}, OpExpH{t}, OpQL0{}, OpG{Direction::Minus, false}}};
  const ChargedPartition ground{s, {}};
  return apply_pipeline(p, FockState::basis(vars, ground), 0).coeff(ground);
}

VarsPtr coupling_vars(int x_order, int Q_order, int D, int K) {
  std::vector<std::string> names;
  for (int k = 1; k <= K; ++k) names.push_back("t" + std::to_string(k));
  return VarSystem::make(x_order, Q_order, names, D);
}

namespace {

nlohmann::json config_json(const TauConfig& c, const std::vector<int>& sectors) {
  return {{"qorder", c.x_order}, {"Qorder", c.Q_order}, {"tdegree", c.D}, {"kmax", c.K}, {"sectors", sectors}};
}

CaseResult series_case(nlohmann::json params, const LaurentSeries& a, const LaurentSeries& b) {
  CaseResult r;
  r.params = std::move(params);
  const auto c = compare_series(a, b);
  r.pass = c.equal;
  r.verified_precision = c.precision;
  r.first_mismatch = c.first_mismatch;
  return r;
}

}  // namespace

IdentityReport check_main_identity(const TauConfig& c, const std::vector<int>& sectors) {
  IdentityReport rep;
  rep.identity = "melting crystal partition function as a Toda tau function";
  rep.config = config_json(c, sectors);
  for (int s : sectors) {
    const int shift = s * (s + 1) * (2 * s + 1) / 3;
    const int margin = std::abs(shift) + w0_margin(s, c.D * c.K);
    auto attempt = [&](bool reflected) {
      return [&, reflected](int work) {
        auto vars = coupling_vars(work, c.Q_order, c.D, c.K);
        std::vector<LaurentSeries> t, T;
        LaurentSeries pre(vars);
        for (int k = 1; k <= c.K; ++k) {
          t.push_back(LaurentSeries::time_var(vars, k - 1));
          T.push_back(k % 2 == 0 ? t.back() : -t.back());
          pre += t.back() * geometric_fraction(vars, k);
        }
        if (!reflected) {
          LaurentSeries z = melting_Z_operator(vars, s, t);
          TauSpec spec{s, g_pipeline(GModel::Crystal), T, {}};
          LaurentSeries rhs = series_exp(pre) * LaurentSeries::x_power(vars, -shift) * tau_eval(spec, vars);
          return z - rhs;
        }
        TauSpec a{s, g_pipeline(GModel::Crystal), T, {}};
        TauSpec b{s, g_pipeline(GModel::Crystal), {}, negated(T)};
        return tau_eval(a, vars) - tau_eval(b, vars);
      };
    };
    for (bool reflected : {false, true}) {
      nlohmann::json params = {{"s", s}, {"form", reflected ? "tau(s,T,0) = tau(s,0,-T)" : "Z = prefactor * tau"}};
      CaseResult r;
      r.params = params;
      try {
        auto diff = series_at_precision(c.x_order, margin, attempt(reflected));
        r = series_case(params, diff, LaurentSeries(diff.vars(), diff.precision()));
      } catch (const PrecisionUnderflow& e) {
        r.pass = false;
        r.first_mismatch = std::string("precision underflow: ") + e.what();
        r.verified_precision = 0;
      }
      rep.cases.push_back(r);
    }
  }
  return rep;
}

// ---------------------------------------------------------------- intertwining

CaseResult check_intertwining_case(GModel model, bool general, int k, int m, int s, int wmax, int target,
                                   int Q_order) {
  if (general && k == 0) throw std::invalid_argument("the general intertwining relation needs k != 0");
  const OperatorPipeline g = g_pipeline(model);
  auto attempt = [&](int work) {
    auto vars = VarSystem::make(work, Q_order);
    CaseResult r;
    r.params = {{"model", model_name(model)}, {"form", general ? "V" : "J"}, {"k", k}, {"s", s}};
    if (general) r.params["m"] = m;
    r.pass = true;
    r.verified_precision = kExact;
    OperatorPipeline lhs, rhs;
    if (!general) {
      lhs.ops.push_back(OpBand{j_band(k)});
      lhs.ops.insert(lhs.ops.end(), g.ops.begin(), g.ops.end());
      rhs = g;
      rhs.ops.push_back(OpBand{j_band(-k)});
    } else {
      std::optional<LaurentSeries> c1, c2;
      if (m == 0) c1 = geometric_fraction(vars, k);
      if (2 * k + m == 0) c2 = geometric_fraction(vars, -k);
      lhs.ops.push_back(OpScalar{LaurentSeries::monomial(vars, Monomial::Q_pow(k))});
      lhs.ops.push_back(OpVkm{k, m, c1});
      lhs.ops.insert(lhs.ops.end(), g.ops.begin(), g.ops.end());
      rhs = g;
      rhs.ops.push_back(OpVkm{-k, -2 * k - m, c2});
    }
    for (const auto& lam : partitions_up_to(wmax)) {
      const auto v = FockState::basis(vars, ChargedPartition{s, lam});
      const auto c = compare_states(apply_pipeline(lhs, v, wmax), apply_pipeline(rhs, v, wmax), {s}, wmax);
      r.verified_precision = std::min(r.verified_precision, c.precision);
      if (!c.equal && r.pass) {
        r.pass = false;
        r.first_mismatch = "<" + format_charged({s, lam}) + "> " + c.first_mismatch;
      }
    }
    return r;
  };
  return with_precision(target, 2 * std::abs(k) * (wmax + std::abs(s) + 2) + w0_margin(s, wmax), attempt);
}

IdentityReport check_intertwining(GModel model, int kmax, int mmax, const std::vector<int>& sectors, int wmax,
                                  int target, int Q_order) {
  IdentityReport rep;
  rep.identity = "intertwining relations for " + model_name(model) + " g";
  rep.config = {{"model", model_name(model)}, {"kmax", kmax}, {"mmax", mmax}, {"sectors", sectors},
                {"wmax", wmax},               {"qorder", target}, {"Qorder", Q_order}};
  for (int s : sectors) {
    for (int k = 1; k <= kmax; ++k) rep.cases.push_back(check_intertwining_case(model, false, k, 0, s, wmax, target, Q_order));
    for (int k = 1; k <= kmax; ++k)
      for (int m = -mmax; m <= mmax; ++m)
        rep.cases.push_back(check_intertwining_case(model, true, k, m, s, wmax, target, Q_order));
  }
  return rep;
}

// ---------------------------------------------------------------- constraint

IdentityReport check_constraint(GModel model, const TauConfig& c, const std::vector<int>& sectors) {
  IdentityReport rep;
  rep.identity = "(d/dT_k + d/dTbar_k) tau = 0 for " + model_name(model) + " g";
  rep.config = config_json(c, sectors);
  rep.config["model"] = model_name(model);
  for (int s : sectors) {
    CaseResult base;
    LaurentSeries tau(tau_vars(c.x_order, c.Q_order, c.D, c.K));
    try {
      tau = tau_series(model, s, c.x_order, c.Q_order, c.D, c.K);
    } catch (const PrecisionUnderflow& e) {
      for (int k = 1; k <= c.K; ++k) {
        CaseResult r;
        r.params = {{"s", s}, {"k", k}};
        r.first_mismatch = std::string("precision underflow: ") + e.what();
        rep.cases.push_back(r);
      }
      continue;
    }
    for (int k = 1; k <= c.K; ++k) {
      LaurentSeries d = time_derivative(tau, k - 1) + time_derivative(tau, c.K + k - 1);
      rep.cases.push_back(series_case({{"s", s}, {"k", k}}, d, LaurentSeries(d.vars(), d.precision())));
    }
  }
  return rep;
}

IdentityReport check_difference_dependence(GModel model, const TauConfig& c, const std::vector<int>& sectors) {
  IdentityReport rep;
  rep.identity = "tau(s,T,Tbar) = tau(s,T-Tbar,0) for " + model_name(model) + " g";
  rep.config = config_json(c, sectors);
  rep.config["model"] = model_name(model);
  for (int s : sectors) {
    auto diff = series_at_precision(c.x_order, w0_margin(s, c.D * c.K), [&](int work) {
      auto vars = tau_vars(work, c.Q_order, c.D, c.K);
      auto T = tau_times(vars, "T", c.K);
      auto Tb = tau_times(vars, "Tb", c.K);
      LaurentSeries full = tau_eval(TauSpec{s, g_pipeline(model), T, Tb}, vars);
      std::vector<LaurentSeries> d;
      for (int k = 0; k < c.K; ++k) d.push_back(T[k] - Tb[k]);
      LaurentSeries reduced = tau_eval(TauSpec{s, g_pipeline(model), d, {}}, vars);
      return full - reduced;
    });
    rep.cases.push_back(series_case({{"s", s}}, diff, LaurentSeries(diff.vars(), diff.precision())));
  }
  return rep;
}

}  // namespace qtoda
