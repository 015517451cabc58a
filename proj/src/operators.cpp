#include "qtoda/operators.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

namespace qtoda {

OneBandMatrix vkm_band(int k, int m) {
  OneBandMatrix a;
  a.offset = m;
  a.entry = [k, m](int i) { return BandEntry{1, 2 * k * (i + m) - k * m, 0}; };
  a.name = "V(" + std::to_string(k) + "," + std::to_string(m) + ")";
  return a;
}

OneBandMatrix j_band(int m) {
  OneBandMatrix a;
  a.offset = m;
  a.entry = [](int) { return BandEntry{}; };
  a.name = "J(" + std::to_string(m) + ")";
  return a;
}

OneBandMatrix w0_band() {
  return OneBandMatrix{0, [](int n) { return BandEntry{Rational(n) * n, 0, 0}; }, "W0"};
}

OneBandMatrix l0_band() {
  return OneBandMatrix{0, [](int n) { return BandEntry{Rational(n), 0, 0}; }, "L0"};
}

FockState apply_Vkm(int k, int m, const FockState& st) { return apply_band(vkm_band(k, m), st); }

FockState apply_J(int m, const FockState& st) {
  const OneBandMatrix a = j_band(m);
  FockState out(st.vars());
  out.set_tail(st.tail());
  const int cap = st.weight_cap();
  out.set_weight_cap(cap >= kUnboundedWeight ? kUnboundedWeight : std::max(-1, cap - m));
  out.set_zero_above_cap(st.zero_above_cap());
  for (const auto& [p, c] : st.terms()) {
    for (const auto& mv : band_moves(a, p)) out.add(mv.target, c.scaled(mv.sign));
  }
  return out;
}

namespace {

std::mutex eig_mutex;

long long diagonal_integer(const OneBandMatrix& a, const ChargedPartition& p) {
  Rational sum = 0;
  for (const auto& mv : band_moves(a, p)) sum += mv.entry.c * mv.sign;
  return sum.get_num().get_si();
}

}  // namespace

long long eigenvalue_W0(const ChargedPartition& p) {
  static std::map<ChargedPartition, long long> memo;
  {
    std::lock_guard<std::mutex> lock(eig_mutex);
    if (auto it = memo.find(p); it != memo.end()) return it->second;
  }
  const long long v = diagonal_integer(w0_band(), p);
  std::lock_guard<std::mutex> lock(eig_mutex);
  memo.emplace(p, v);
  return v;
}

long long eigenvalue_L0(const ChargedPartition& p) {
  static std::map<ChargedPartition, long long> memo;
  {
    std::lock_guard<std::mutex> lock(eig_mutex);
    if (auto it = memo.find(p); it != memo.end()) return it->second;
  }
  const long long v = diagonal_integer(l0_band(), p);
  std::lock_guard<std::mutex> lock(eig_mutex);
  memo.emplace(p, v);
  return v;
}

LaurentSeries eigenvalue_H(const VarsPtr& vars, int k, const ChargedPartition& p) {
  static std::map<std::pair<int, ChargedPartition>, std::vector<std::pair<int, int>>> memo;
  std::vector<std::pair<int, int>> terms;
  {
    std::lock_guard<std::mutex> lock(eig_mutex);
    if (auto it = memo.find({k, p}); it != memo.end()) terms = it->second;
  }
  if (terms.empty()) {
    std::map<int, int> acc;
    for (const auto& mv : band_moves(vkm_band(k, 0), p)) acc[mv.entry.x_exp] += mv.sign;
    for (auto [e, c] : acc) {
      if (c != 0) terms.emplace_back(e, c);
    }
    // an empty list would be re-derived every time; store a marker
    if (terms.empty()) terms.emplace_back(0, 0);
    std::lock_guard<std::mutex> lock(eig_mutex);
    memo.emplace(std::make_pair(k, p), terms);
  }
  std::vector<LaurentSeries::Term> t;
  for (auto [e, c] : terms) {
    if (c != 0) t.emplace_back(Monomial::x_pow(e), Rational(c));
  }
  return LaurentSeries::from_terms(vars, std::move(t), Precision{});
}

// ---------------------------------------------------------------- strips

namespace {

Partition trimmed(Partition p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

/// Every lambda with lambda / mu a horizontal strip of size 1..budget.
void add_horizontal_strips(const Partition& mu, int budget,
                           const std::function<void(const Partition&, int)>& emit) {
  const int len = static_cast<int>(mu.size());
  Partition lam(len + 1, 0);
  std::function<void(int, int)> rec = [&](int i, int used) {
    if (i > len) {
      if (used > 0) emit(trimmed(lam), used);
      return;
    }
    const int base = i < len ? mu[i] : 0;
    const int top = i == 0 ? base + (budget - used) : std::min(mu[i - 1], base + (budget - used));
    for (int v = base; v <= top; ++v) {
      lam[i] = v;
      rec(i + 1, used + (v - base));
    }
  };
  rec(0, 0);
}

/// Every mu with lambda / mu a horizontal strip of size 1..budget.
void remove_horizontal_strips(const Partition& lambda, int budget,
                              const std::function<void(const Partition&, int)>& emit) {
  const int len = static_cast<int>(lambda.size());
  Partition mu(len, 0);
  std::function<void(int, int)> rec = [&](int i, int removed) {
    if (i == len) {
      if (removed > 0) emit(trimmed(mu), removed);
      return;
    }
    const int floor = i + 1 < len ? lambda[i + 1] : 0;
    for (int v = lambda[i]; v >= floor && removed + (lambda[i] - v) <= budget; --v) {
      mu[i] = v;
      rec(i + 1, removed + (lambda[i] - v));
    }
  };
  rec(0, 0);
}

}  // namespace

FockState apply_gamma(Direction dir, bool inverse, int z, const FockState& st, int cap, int x_target) {
  if (z <= 0) throw std::invalid_argument("gamma needs a positive exponent");
  FockState out(st.vars());
  out.set_tail(std::min(st.tail(), x_target));
  if (dir == Direction::Minus) {
    out.set_weight_cap(st.zero_above_cap() ? cap : std::min(cap, st.weight_cap()));
    out.set_zero_above_cap(out.weight_cap() >= kUnboundedWeight);
  } else {
    if (!st.zero_above_cap()) {
      throw std::logic_error("lowering transfer matrix applied to a state with projected components");
    }
    out.set_weight_cap(st.weight_cap());
    out.set_zero_above_cap(true);
  }
  const int out_cap = out.weight_cap();

  for (const auto& [p, a] : st.terms()) {
    const int v = a.x_valuation();
    const int w = p.weight();
    if (w <= out_cap) out.add(p, a.truncated_x(x_target));
    if (v >= x_target) continue;
    int budget = (x_target - 1 - v) / z;
    if (dir == Direction::Minus && out_cap < kUnboundedWeight) budget = std::min(budget, out_cap - w);
    if (budget <= 0) continue;
    auto emit = [&](const Partition& lam, int n) {
      Monomial shift = Monomial::x_pow(z * n);
      const int sign = (inverse && n % 2 == 1) ? -1 : 1;
      out.add(ChargedPartition{p.s, lam}, a.shifted(shift, sign).truncated_x(x_target));
    };
    if (dir == Direction::Minus) {
      if (!inverse) {
        add_horizontal_strips(p.lambda, budget, emit);
      } else {
        add_horizontal_strips(conjugate(p.lambda), budget,
                              [&](const Partition& lc, int n) { emit(conjugate(lc), n); });
      }
    } else {
      if (!inverse) {
        remove_horizontal_strips(p.lambda, budget, emit);
      } else {
        remove_horizontal_strips(conjugate(p.lambda), budget,
                                 [&](const Partition& lc, int n) { emit(conjugate(lc), n); });
      }
    }
  }
  return out;
}

FockState apply_G(Direction dir, bool inverse, const FockState& st, int cap) {
  const int target = st.vars()->x_order;
  const int v_min = std::min(st.min_x_valuation(), st.tail());
  FockState cur = st;
  if (dir == Direction::Minus && !cur.zero_above_cap()) cap = std::min(cap, cur.weight_cap());
  bool applied = false;
  for (int i = 1; 2 * i - 1 + v_min < target; ++i) {
    cur = apply_gamma(dir, inverse, 2 * i - 1, cur, cap, target);
    applied = true;
  }
  if (!applied) {
    // every correction lies beyond the target; only the truncation remains
    FockState out(st.vars());
    out.set_tail(std::min(st.tail(), target));
    out.set_weight_cap(st.weight_cap());
    out.set_zero_above_cap(st.zero_above_cap());
    for (const auto& [p, a] : st.terms()) out.add(p, a.truncated_x(target));
    return dir == Direction::Minus ? out.projected(cap) : out;
  }
  return cur;
}

FockState apply_diagonal(const FockState& st, const std::function<LaurentSeries(const ChargedPartition&)>& factor,
                         const std::function<int(const ChargedPartition&)>& min_x_exp, const std::string& name) {
  FockState out(st.vars());
  out.set_weight_cap(st.weight_cap());
  out.set_zero_above_cap(st.zero_above_cap());
  out.set_tail(st.tail());
  if (st.tail() < kExact && min_x_exp) {
    const int cap = st.weight_cap();
    if (cap >= kUnboundedWeight) {
      throw PrecisionUnderflow(name + " multiplies a truncated state of unbounded weight by negative powers");
    }
    std::set<int> sectors;
    for (const auto& [p, c] : st.terms()) sectors.insert(p.s);
    int lo = 0;
    for (const auto& lam : partitions_up_to(cap)) {
      for (int s : sectors) lo = std::min(lo, min_x_exp(ChargedPartition{s, lam}));
    }
    out.set_tail(st.tail() + lo);
  }
  for (const auto& [p, c] : st.terms()) out.add(p, c * factor(p));
  return out;
}

FockState apply_expJ(Direction dir, const std::vector<LaurentSeries>& c, const FockState& st, int cap) {
  for (const auto& ck : c) {
    if (!ck.empty() && ck.tdeg_valuation() < 1 && ck.x_valuation() < 1) {
      throw SeriesError("exponential of currents needs coefficients of positive degree");
    }
  }
  if (dir == Direction::Plus && !st.zero_above_cap()) {
    throw std::logic_error("lowering exponential applied to a state with projected components");
  }
  FockState result = st.projected(cap);
  FockState term = result;
  for (int n = 1; n < 100000; ++n) {
    FockState next(st.vars());
    next.set_weight_cap(term.weight_cap());
    next.set_zero_above_cap(term.zero_above_cap());
    bool first = true;
    for (size_t k = 1; k <= c.size(); ++k) {
      const auto& ck = c[k - 1];
      if (ck.empty() && ck.is_exact()) continue;
      const int m = dir == Direction::Plus ? static_cast<int>(k) : -static_cast<int>(k);
      FockState piece = apply_J(m, term).scaled(ck);
      if (first) {
        next = piece;
        first = false;
      } else {
        next += piece;
      }
    }
    next = next.scaled(Rational(1, n)).projected(cap);
    if (next.empty()) break;
    result += next;
    term = std::move(next);
  }
  return result;
}

// ---------------------------------------------------------------- pipelines

namespace {

std::string join_series(const std::vector<LaurentSeries>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += to_string(v[i]);
  }
  return s;
}

int min_L0_offset(const std::vector<int>& sectors) {
  long long lo = kExact;
  for (int s : sectors) lo = std::min(lo, eigenvalue_L0(ChargedPartition{s, {}}));
  return static_cast<int>(lo);
}

}  // namespace

std::string op_name(const ElementaryOperator& op) {
  struct Visitor {
    std::string operator()(const OpBand& o) const { return "bilinear " + o.a.name; }
    std::string operator()(const OpVkm& o) const {
      std::string s = "V(" + std::to_string(o.k) + "," + std::to_string(o.m) + ")";
      if (o.shift) s += " - const";
      return s;
    }
    std::string operator()(const OpScalar& o) const { return "scalar " + to_string(o.c); }
    std::string operator()(const OpQW0& o) const { return "q^(" + o.c.get_str() + " W0)"; }
    std::string operator()(const OpQL0&) const { return "Q^L0"; }
    std::string operator()(const OpG& o) const {
      return std::string("G") + (o.dir == Direction::Plus ? "+" : "-") + (o.inverse ? "^-1" : "");
    }
    std::string operator()(const OpExpH& o) const { return "exp(H(t)) t=" + join_series(o.t); }
    std::string operator()(const OpExpJ& o) const {
      return std::string("exp(sum c_k J_") + (o.dir == Direction::Plus ? "k" : "-k") + ")";
    }
  };
  return std::visit(Visitor{}, op);
}

std::string OperatorPipeline::describe() const {
  std::string s;
  for (size_t i = 0; i < ops.size(); ++i) {
    if (i) s += " . ";
    s += op_name(ops[i]);
  }
  return s.empty() ? "identity" : s;
}

int required_input_cap(const ElementaryOperator& op, int out_cap, const std::vector<int>& sectors, int Q_order) {
  const bool unbounded = out_cap >= kUnboundedWeight;
  auto shifted = [&](int offset) { return unbounded ? kUnboundedWeight : std::max(-1, out_cap + offset); };
  if (const auto* b = std::get_if<OpBand>(&op)) return shifted(b->a.offset);
  if (const auto* v = std::get_if<OpVkm>(&op)) return shifted(v->m);
  if (std::holds_alternative<OpQL0>(op)) {
    const int limit = std::max(-1, Q_order - min_L0_offset(sectors));
    return std::min(out_cap, limit);
  }
  if (const auto* g = std::get_if<OpG>(&op)) return g->dir == Direction::Plus ? kUnboundedWeight : out_cap;
  if (const auto* e = std::get_if<OpExpJ>(&op)) return e->dir == Direction::Plus ? kUnboundedWeight : out_cap;
  return out_cap;
}

namespace {

FockState apply_op(const ElementaryOperator& op, const FockState& st, int cap) {
  const auto& vars = st.vars();
  if (const auto* b = std::get_if<OpBand>(&op)) return apply_band(b->a, st).projected(cap);
  if (const auto* v = std::get_if<OpVkm>(&op)) {
    FockState out = apply_Vkm(v->k, v->m, st);
    if (v->shift) out -= st.scaled(*v->shift);
    return out.projected(cap);
  }
  if (const auto* s = std::get_if<OpScalar>(&op)) return st.scaled(s->c).projected(cap);
  if (const auto* q = std::get_if<OpQW0>(&op)) {
    const Rational twice = q->c * 2;
    if (twice.get_den() != 1) throw std::invalid_argument("q^(c W0) needs 2c integer");
    const long long e = twice.get_num().get_si();
    return apply_diagonal(
               st, [&](const ChargedPartition& p) { return LaurentSeries::x_power(vars, e * eigenvalue_W0(p)); },
               [&](const ChargedPartition& p) { return static_cast<int>(e * eigenvalue_W0(p)); }, op_name(op))
        .projected(cap);
  }
  if (std::holds_alternative<OpQL0>(op)) {
    const int M = vars->Q_order;
    std::vector<int> sectors;
    for (const auto& [p, c] : st.terms()) sectors.push_back(p.s);
    FockState out(vars);
    out.set_tail(st.tail());
    for (const auto& [p, c] : st.terms()) {
      const long long l = eigenvalue_L0(p);
      if (l > M) continue;
      out.add(p, c.shifted(Monomial::Q_pow(static_cast<int>(l))));
    }
    // every component with L0 > M is zero modulo Q^{M+1}
    const int limit = sectors.empty() ? -1 : std::max(-1, M - min_L0_offset(sectors));
    if (st.determined_at(limit)) {
      out.set_weight_cap(std::min(st.weight_cap(), limit));
      out.set_zero_above_cap(true);
    } else {
      out.set_weight_cap(st.weight_cap());
    }
    return out.projected(cap);
  }
  if (const auto* g = std::get_if<OpG>(&op)) return apply_G(g->dir, g->inverse, st, cap).projected(cap);
  if (const auto* h = std::get_if<OpExpH>(&op)) {
    const int D = vars->time_degree;
    auto exponent = [&](const ChargedPartition& p) {
      LaurentSeries a(vars);
      for (size_t k = 1; k <= h->t.size(); ++k) a += h->t[k - 1] * eigenvalue_H(vars, static_cast<int>(k), p);
      return a;
    };
    return apply_diagonal(
               st, [&](const ChargedPartition& p) { return series_exp(exponent(p)); },
               [&](const ChargedPartition& p) {
                 const int v = exponent(p).x_valuation();
                 return v >= kExact ? 0 : std::min(0, D * v);
               },
               op_name(op))
        .projected(cap);
  }
  if (const auto* e = std::get_if<OpExpJ>(&op)) return apply_expJ(e->dir, e->c, st, cap);
  throw std::logic_error("unknown operator");
}

}  // namespace

FockState apply_pipeline(const OperatorPipeline& p, const FockState& st, int final_cap) {
  const int n = static_cast<int>(p.ops.size());
  if (n == 0) return st.projected(final_cap);
  std::vector<int> sectors;
  for (const auto& [q, c] : st.terms()) {
    if (sectors.empty() || sectors.back() != q.s) sectors.push_back(q.s);
  }
  std::vector<int> out_cap(n);
  out_cap[0] = final_cap;
  for (int j = 1; j < n; ++j) out_cap[j] = required_input_cap(p.ops[j - 1], out_cap[j - 1], sectors, st.vars()->Q_order);
  FockState cur = st;
  for (int j = n - 1; j >= 0; --j) {
    try {
      cur = apply_op(p.ops[j], cur, out_cap[j]);
    } catch (const PrecisionUnderflow& e) {
      throw PrecisionUnderflow("stage " + std::to_string(n - j) + " of " + std::to_string(n) + " (" +
                               op_name(p.ops[j]) + "): " + e.what());
    }
  }
  return cur;
}

LaurentSeries anomaly_constant(const VarsPtr& vars, int a) { return geometric_fraction(vars, a); }

}  // namespace qtoda
