#include "qtoda/qlaurent.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace qtoda {

namespace {

int saturate(long long v) {
  if (v >= kExact / 2) return kExact;
  if (v <= -kExact / 2) return -kExact;
  return static_cast<int>(v);
}

int add_prec(int p, int v) {
  if (p >= kExact) return kExact;
  return saturate(static_cast<long long>(p) + v);
}

void require_compatible(const LaurentSeries& a, const LaurentSeries& b) {
  if (a.vars() == b.vars()) return;
  if (!a.vars()->compatible(*b.vars())) {
    throw VarSystemMismatch("series belong to incompatible variable systems");
  }
}

// Picks whichever of the two (compatible) systems generates further.
VarsPtr wider(const VarsPtr& a, const VarsPtr& b) {
  return a->x_order >= b->x_order ? a : b;
}

}  // namespace

// ---------------------------------------------------------------- VarSystem

std::shared_ptr<const VarSystem> VarSystem::make(int x_order, int Q_order,
                                                 std::vector<std::string> time_vars,
                                                 int time_degree) {
  if (x_order < 0 || Q_order < 0 || time_degree < 0) {
    throw SeriesError("variable system orders must be non-negative");
  }
  if (static_cast<int>(time_vars.size()) > kMaxTimeVars) {
    throw SeriesError("too many time variables");
  }
  std::set<std::string> seen(time_vars.begin(), time_vars.end());
  if (seen.size() != time_vars.size()) throw SeriesError("time variable names must be unique");
  auto vs = std::make_shared<VarSystem>();
  vs->x_order = x_order;
  vs->Q_order = Q_order;
  vs->time_degree = time_degree;
  vs->time_vars = std::move(time_vars);
  return vs;
}

int VarSystem::time_index(std::string_view name) const {
  for (int i = 0; i < time_var_count(); ++i) {
    if (time_vars[i] == name) return i;
  }
  throw SeriesError("unknown time variable " + std::string(name));
}

bool VarSystem::compatible(const VarSystem& o) const {
  return Q_order == o.Q_order && time_degree == o.time_degree && time_vars == o.time_vars &&
         q_half_allowed == o.q_half_allowed;
}

std::shared_ptr<const VarSystem> VarSystem::with_x_order(int order) const {
  auto vs = std::make_shared<VarSystem>(*this);
  vs->x_order = order;
  return vs;
}

// ---------------------------------------------------------------- Monomial

int Monomial::tdeg() const {
  int d = 0;
  for (auto e : t) d += e;
  return d;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial m;
  m.x = x + o.x;
  m.Q = Q + o.Q;
  for (int i = 0; i < kMaxTimeVars; ++i) m.t[i] = static_cast<std::uint8_t>(t[i] + o.t[i]);
  return m;
}

Precision meet(const Precision& a, const Precision& b) {
  return {std::min(a.x, b.x), std::min(a.Q, b.Q), std::min(a.tdeg, b.tdeg)};
}

// ---------------------------------------------------------------- LaurentSeries

LaurentSeries::LaurentSeries(VarsPtr vars) : LaurentSeries(std::move(vars), Precision{}) {}

LaurentSeries::LaurentSeries(VarsPtr vars, const Precision& prec)
    : vars_(std::move(vars)), prec_(prec) {
  if (!vars_) throw SeriesError("series needs a variable system");
  normalize();
}

LaurentSeries LaurentSeries::constant(VarsPtr vars, const Rational& c) {
  return monomial(std::move(vars), Monomial{}, c);
}

LaurentSeries LaurentSeries::monomial(VarsPtr vars, const Monomial& m, const Rational& c) {
  LaurentSeries s(std::move(vars));
  if (c != 0) s.terms_.emplace_back(m, c);
  s.normalize();
  return s;
}

LaurentSeries LaurentSeries::x_power(VarsPtr vars, int e, const Rational& c) {
  return monomial(std::move(vars), Monomial::x_pow(e), c);
}

LaurentSeries LaurentSeries::time_var(VarsPtr vars, int index) {
  if (index < 0 || index >= vars->time_var_count()) throw SeriesError("time variable index out of range");
  Monomial m;
  m.t[index] = 1;
  return monomial(std::move(vars), m);
}

LaurentSeries LaurentSeries::time_var(VarsPtr vars, std::string_view name) {
  int idx = vars->time_index(name);
  return time_var(std::move(vars), idx);
}

LaurentSeries LaurentSeries::from_terms(VarsPtr vars, std::vector<Term> terms,
                                        const Precision& prec) {
  LaurentSeries s(std::move(vars), prec);
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.first < b.first; });
  for (auto& t : terms) {
    t.second.canonicalize();
    if (!s.terms_.empty() && s.terms_.back().first == t.first) {
      s.terms_.back().second += t.second;
    } else {
      s.terms_.push_back(std::move(t));
    }
  }
  s.normalize();
  return s;
}

void LaurentSeries::normalize() {
  prec_.Q = std::min(prec_.Q, vars_->Q_order + 1);
  prec_.tdeg = std::min(prec_.tdeg, vars_->time_degree + 1);
  std::erase_if(terms_, [this](const Term& t) {
    return t.second == 0 || t.first.x >= prec_.x || t.first.Q >= prec_.Q ||
           t.first.tdeg() >= prec_.tdeg || t.first.Q < 0;
  });
}

bool LaurentSeries::is_exact() const {
  return prec_.x >= kExact && prec_.Q > vars_->Q_order && prec_.tdeg > vars_->time_degree;
}

Rational LaurentSeries::coeff(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, const Monomial& key) { return t.first < key; });
  if (it != terms_.end() && it->first == m) return it->second;
  return 0;
}

bool LaurentSeries::known(const Monomial& m) const {
  return m.x < prec_.x && m.Q < prec_.Q && m.tdeg() < prec_.tdeg;
}

int LaurentSeries::x_valuation() const {
  return terms_.empty() ? prec_.x : terms_.front().first.x;
}

int LaurentSeries::Q_valuation() const {
  int v = prec_.Q;
  for (const auto& t : terms_) v = std::min(v, t.first.Q);
  return v;
}

int LaurentSeries::tdeg_valuation() const {
  int v = prec_.tdeg;
  for (const auto& t : terms_) v = std::min(v, t.first.tdeg());
  return v;
}

LaurentSeries& LaurentSeries::operator+=(const LaurentSeries& o) {
  require_compatible(*this, o);
  vars_ = wider(vars_, o.vars_);
  std::vector<Term> merged;
  merged.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first)) {
      merged.push_back(std::move(*a++));
    } else if (a == terms_.end() || b->first < a->first) {
      merged.push_back(*b++);
    } else {
      Rational c = a->second + b->second;
      if (c != 0) merged.emplace_back(a->first, std::move(c));
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
  prec_ = meet(prec_, o.prec_);
  normalize();
  return *this;
}

LaurentSeries& LaurentSeries::operator-=(const LaurentSeries& o) { return *this += -o; }

LaurentSeries LaurentSeries::operator-() const {
  LaurentSeries r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

LaurentSeries& LaurentSeries::operator*=(const LaurentSeries& o) {
  *this = *this * o;
  return *this;
}

LaurentSeries LaurentSeries::scaled(const Rational& c) const {
  if (c == 0) return LaurentSeries(vars_, prec_);
  LaurentSeries r = *this;
  for (auto& t : r.terms_) t.second *= c;
  return r;
}

LaurentSeries LaurentSeries::shifted(const Monomial& m, const Rational& c) const {
  if (c == 0) {
    // zero times a series known to prec is zero known to the shifted region
    LaurentSeries z(vars_);
    return z;
  }
  LaurentSeries r(vars_, Precision{add_prec(prec_.x, m.x), add_prec(prec_.Q, m.Q),
                                   add_prec(prec_.tdeg, m.tdeg())});
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.emplace_back(t.first * m, t.second * c);
  r.normalize();
  return r;
}

LaurentSeries LaurentSeries::truncated(const Precision& p) const {
  LaurentSeries r = *this;
  r.prec_ = meet(prec_, p);
  r.normalize();
  return r;
}

LaurentSeries LaurentSeries::truncated_x(int p) const {
  Precision q = prec_;
  q.x = std::min(q.x, p);
  return truncated(q);
}

LaurentSeries LaurentSeries::rebound(VarsPtr vars) const {
  if (!vars_->compatible(*vars)) throw VarSystemMismatch("cannot rebind to incompatible variables");
  LaurentSeries r = *this;
  r.vars_ = std::move(vars);
  return r;
}

LaurentSeries operator+(LaurentSeries a, const LaurentSeries& b) { return a += b; }
LaurentSeries operator-(LaurentSeries a, const LaurentSeries& b) { return a -= b; }

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
  require_compatible(a, b);
  const auto& pa = a.precision();
  const auto& pb = b.precision();
  Precision p;
  p.x = std::min(add_prec(pa.x, b.x_valuation()), add_prec(pb.x, a.x_valuation()));
  p.Q = std::min(add_prec(pa.Q, b.Q_valuation()), add_prec(pb.Q, a.Q_valuation()));
  p.tdeg = std::min(add_prec(pa.tdeg, b.tdeg_valuation()), add_prec(pb.tdeg, a.tdeg_valuation()));

  VarsPtr vars = wider(a.vars(), b.vars());
  if (a.empty() || b.empty()) return LaurentSeries(vars, p);

  const int qcap = std::min(p.Q, vars->Q_order + 1);
  const int tcap = std::min(p.tdeg, vars->time_degree + 1);
  std::map<Monomial, Rational> acc;
  Rational prod;
  for (const auto& ta : a.terms()) {
    const int ta_deg = ta.first.tdeg();
    for (const auto& tb : b.terms()) {
      if (ta.first.x + tb.first.x >= p.x) break;  // terms sorted by x first
      if (ta.first.Q + tb.first.Q >= qcap) continue;
      if (ta_deg + tb.first.tdeg() >= tcap) continue;
      prod = ta.second * tb.second;
      auto [it, inserted] = acc.try_emplace(ta.first * tb.first, prod);
      if (!inserted) it->second += prod;
    }
  }
  std::vector<LaurentSeries::Term> terms;
  terms.reserve(acc.size());
  for (auto& [m, c] : acc) {
    if (c != 0) terms.emplace_back(m, std::move(c));
  }
  return LaurentSeries::from_terms(vars, std::move(terms), p);
}

LaurentSeries series_add(const LaurentSeries& a, const LaurentSeries& b) { return a + b; }
LaurentSeries series_mul(const LaurentSeries& a, const LaurentSeries& b) { return a * b; }

LaurentSeries series_exp(const LaurentSeries& a) {
  const auto& vars = a.vars();
  const Monomial one{};
  if (!a.known(one)) throw SeriesError("exp: constant term of the argument is unknown");
  if (a.coeff(one) != 0) throw SeriesError("exp: argument has a nonzero constant term");
  LaurentSeries result = LaurentSeries::constant(vars, 1).truncated(a.precision());
  if (a.empty()) return result;

  int n_max = 0;
  int x_target = kExact;
  if (a.tdeg_valuation() >= 1) {
    n_max = vars->time_degree;
  } else if (a.Q_valuation() >= 1) {
    n_max = vars->Q_order;
  } else if (a.x_valuation() >= 1) {
    x_target = std::min(a.precision().x, vars->x_order);
    n_max = x_target - 1;
  } else {
    throw SeriesError("exp: argument has no positive valuation in any grading");
  }
  if (x_target < kExact) result = result.truncated_x(x_target);
  LaurentSeries term = LaurentSeries::constant(vars, 1);
  for (int n = 1; n <= n_max; ++n) {
    term = (term * a).scaled(Rational(1, n));
    if (x_target < kExact) term = term.truncated_x(x_target);
    result += term;
  }
  return result;
}

LaurentSeries geometric_fraction(const VarsPtr& vars, int k) {
  if (k == 0) throw SeriesError("q^k/(1-q^k) is undefined for k = 0");
  const int n = vars->x_order;
  std::vector<LaurentSeries::Term> terms;
  if (k > 0) {
    for (long long e = 2LL * k; e < n; e += 2LL * k) terms.emplace_back(Monomial::x_pow(int(e)), 1);
  } else {
    // q^{-a}/(1-q^{-a}) = -1/(1-q^a)
    for (long long e = 0; e < n; e += 2LL * (-k)) terms.emplace_back(Monomial::x_pow(int(e)), -1);
  }
  Precision p;
  p.x = n;
  return LaurentSeries::from_terms(vars, std::move(terms), p);
}

LaurentSeries expand_qfrac(const VarsPtr& vars, int k, int sign) {
  if (k <= 0) throw SeriesError("expand_qfrac expects a positive k");
  if (sign != 1 && sign != -1) throw SeriesError("expand_qfrac sign must be +1 or -1");
  return geometric_fraction(vars, sign * k);
}

LaurentSeries time_derivative(const LaurentSeries& a, int index) {
  if (index < 0 || index >= a.vars()->time_var_count()) throw SeriesError("time variable index out of range");
  Precision p = a.precision();
  if (p.tdeg < kExact) p.tdeg -= 1;
  std::vector<LaurentSeries::Term> terms;
  for (const auto& [m, c] : a.terms()) {
    if (m.t[index] == 0) continue;
    Monomial d = m;
    d.t[index] -= 1;
    terms.emplace_back(d, c * m.t[index]);
  }
  return LaurentSeries::from_terms(a.vars(), std::move(terms), p);
}

bool agree(const LaurentSeries& a, const LaurentSeries& b) {
  require_compatible(a, b);
  LaurentSeries diff = a - b;
  return diff.empty();
}

LaurentSeries substitute_times(const LaurentSeries& a, const std::vector<LaurentSeries>& images) {
  const auto& vars = a.vars();
  if (static_cast<int>(images.size()) != vars->time_var_count()) {
    throw SeriesError("substitute_times needs one image per time variable");
  }
  for (const auto& img : images) {
    if (img.tdeg_valuation() < 1 || img.x_valuation() < 0 || !img.is_exact()) {
      throw SeriesError("time substitution images must be exact with positive time valuation");
    }
  }
  // powers[i][e] = images[i]^e
  std::vector<std::vector<LaurentSeries>> powers(images.size());
  LaurentSeries result(vars, a.precision());
  for (const auto& [m, c] : a.terms()) {
    Monomial base = m;
    base.t.fill(0);
    LaurentSeries term = LaurentSeries::monomial(vars, base, c);
    for (size_t i = 0; i < images.size(); ++i) {
      const int e = m.t[i];
      auto& pw = powers[i];
      if (pw.empty()) pw.push_back(LaurentSeries::constant(vars, 1));
      while (static_cast<int>(pw.size()) <= e) pw.push_back(pw.back() * images[i]);
      if (e > 0) term = term * pw[e];
    }
    result += term;
  }
  return result.truncated(a.precision());
}

nlohmann::json to_json(const LaurentSeries& a) {
  const auto& vars = *a.vars();
  nlohmann::json j;
  std::vector<std::string> names{"x", "Q"};
  names.insert(names.end(), vars.time_vars.begin(), vars.time_vars.end());
  j["vars"] = names;
  const auto& p = a.precision();
  j["precision"] = {{"x", p.x >= kExact ? nlohmann::json(nullptr) : nlohmann::json(p.x)},
                    {"Q", p.Q - 1},
                    {"tdeg", p.tdeg - 1}};
  auto terms = nlohmann::json::array();
  for (const auto& [m, c] : a.terms()) {
    std::vector<int> e{m.x, m.Q};
    for (int i = 0; i < vars.time_var_count(); ++i) e.push_back(m.t[i]);
    terms.push_back({{"exp", e}, {"num", c.get_num().get_str()}, {"den", c.get_den().get_str()}});
  }
  j["terms"] = terms;
  return j;
}

LaurentSeries series_from_json(const VarsPtr& vars, const nlohmann::json& j) {
  const auto& names = j.at("vars");
  if (names.size() != static_cast<size_t>(2 + vars->time_var_count())) {
    throw VarSystemMismatch("serialized series has a different variable list");
  }
  for (int i = 0; i < vars->time_var_count(); ++i) {
    if (names[2 + i].get<std::string>() != vars->time_vars[i]) {
      throw VarSystemMismatch("serialized series has different time variables");
    }
  }
  Precision p;
  const auto& jp = j.at("precision");
  p.x = jp.at("x").is_null() ? kExact : jp.at("x").get<int>();
  p.Q = jp.at("Q").get<int>() + 1;
  p.tdeg = jp.at("tdeg").get<int>() + 1;
  std::vector<LaurentSeries::Term> terms;
  for (const auto& t : j.at("terms")) {
    const auto e = t.at("exp").get<std::vector<int>>();
    Monomial m;
    m.x = e.at(0);
    m.Q = e.at(1);
    for (int i = 0; i < vars->time_var_count(); ++i) m.t[i] = static_cast<std::uint8_t>(e.at(2 + i));
    Rational c(mpz_class(t.at("num").get<std::string>()), mpz_class(t.at("den").get<std::string>()));
    c.canonicalize();
    terms.emplace_back(m, c);
  }
  return LaurentSeries::from_terms(vars, std::move(terms), p);
}

std::string to_string(const LaurentSeries& a) {
  std::ostringstream os;
  const auto& vars = *a.vars();
  bool first = true;
  for (const auto& [m, c] : a.terms()) {
    Rational mag = abs(c);
    os << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    first = false;
    bool has_var = m.x != 0 || m.Q != 0 || m.tdeg() != 0;
    if (!has_var || mag != 1) os << mag.get_str() << (has_var ? "*" : "");
    bool sep = false;
    auto put = [&](const std::string& name, int e) {
      if (e == 0) return;
      os << (sep ? "*" : "") << name;
      if (e != 1) os << "^" << e;
      sep = true;
    };
    put("x", m.x);
    put("Q", m.Q);
    for (int i = 0; i < vars.time_var_count(); ++i) put(vars.time_vars[i], m.t[i]);
  }
  if (first) os << "0";
  const auto& p = a.precision();
  if (p.x < kExact) os << " + O(x^" << p.x << ")";
  if (p.Q <= vars.Q_order) os << " + O(Q^" << p.Q << ")";
  if (p.tdeg <= vars.time_degree) os << " + O(tdeg " << p.tdeg << ")";
  return os.str();
}

}  // namespace qtoda
