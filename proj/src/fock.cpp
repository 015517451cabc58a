#include "qtoda/fock.hpp"

#include <algorithm>
#include <mutex>
#include <set>
#include <tuple>
#include <sstream>

namespace qtoda {

namespace {

void canonicalize(MayaDiagram& m) {
  while (!m.head.empty() && m.head.back() == m.tail_start - 1) {
    m.head.pop_back();
    --m.tail_start;
  }
}

void erase_mode(MayaDiagram& m, int r) {
  if (r >= m.tail_start) {
    for (int k = m.tail_start; k <= r; ++k) m.head.push_back(k);
    m.tail_start = r + 1;
  }
  auto it = std::lower_bound(m.head.begin(), m.head.end(), r);
  m.head.erase(it);
}

void insert_mode(MayaDiagram& m, int a) {
  auto it = std::lower_bound(m.head.begin(), m.head.end(), a);
  m.head.insert(it, a);
  canonicalize(m);
}

int parity_sign(int n) { return (n % 2 == 0) ? 1 : -1; }

bool exact_zero(const LaurentSeries& c, int tail) {
  if (!c.empty()) return false;
  const auto& p = c.precision();
  const auto& v = *c.vars();
  return p.x >= tail && p.Q > v.Q_order && p.tdeg > v.time_degree;
}

}  // namespace

bool ChargedPartition::operator<(const ChargedPartition& o) const {
  if (s != o.s) return s < o.s;
  const int w = weight(), ow = o.weight();
  if (w != ow) return w < ow;
  return lambda < o.lambda;
}

std::string format_charged(const ChargedPartition& p) {
  return "(" + std::to_string(p.s) + "," + format_partition(p.lambda) + ")";
}

bool MayaDiagram::occupied(int r) const {
  return r >= tail_start || std::binary_search(head.begin(), head.end(), r);
}

int MayaDiagram::count_below(int r) const {
  const int in_head = static_cast<int>(std::lower_bound(head.begin(), head.end(), r) - head.begin());
  return in_head + std::max(0, r - tail_start);
}

MayaDiagram maya_from_partition(const ChargedPartition& p) {
  if (!is_partition(p.lambda)) throw std::invalid_argument("not a partition: " + format_partition(p.lambda));
  MayaDiagram m;
  const int len = static_cast<int>(p.lambda.size());
  for (int k = 1; k <= len; ++k) m.head.push_back((k - 1) - p.s - p.lambda[k - 1]);
  m.tail_start = len - p.s;
  canonicalize(m);
  return m;
}

ChargedPartition partition_from_maya(MayaDiagram m) {
  canonicalize(m);
  ChargedPartition p;
  p.s = m.charge();
  for (size_t k = 1; k <= m.head.size(); ++k) {
    p.lambda.push_back(static_cast<int>(k - 1) - p.s - m.head[k - 1]);
  }
  while (!p.lambda.empty() && p.lambda.back() == 0) p.lambda.pop_back();
  return p;
}

std::vector<int> occupied_modes(const MayaDiagram& m, int n) {
  std::vector<int> out;
  for (int r : m.head) {
    if (static_cast<int>(out.size()) == n) return out;
    out.push_back(r);
  }
  for (int r = m.tail_start; static_cast<int>(out.size()) < n; ++r) out.push_back(r);
  return out;
}

// ---------------------------------------------------------------- FockState

FockState::FockState(VarsPtr vars) : vars_(std::move(vars)) {}

FockState FockState::basis(VarsPtr vars, const ChargedPartition& p) {
  LaurentSeries one = LaurentSeries::constant(vars, 1);
  return basis(p, one);
}

FockState FockState::basis(const ChargedPartition& p, const LaurentSeries& coeff) {
  FockState st(coeff.vars());
  st.add(p, coeff);
  return st;
}

LaurentSeries FockState::coeff(const ChargedPartition& p) const {
  auto it = terms_.find(p);
  if (it != terms_.end()) return it->second;
  if (!determined_at(p.weight())) {
    throw std::logic_error("component projected away: " + format_charged(p));
  }
  Precision prec;
  prec.x = p.weight() <= weight_cap_ ? tail_ : kExact;
  return LaurentSeries(vars_, prec);
}

void FockState::add(const ChargedPartition& p, const LaurentSeries& c) {
  auto it = terms_.find(p);
  if (it == terms_.end()) {
    if (!exact_zero(c, tail_)) terms_.emplace(p, c);
    return;
  }
  it->second += c;
  if (exact_zero(it->second, tail_)) terms_.erase(it);
}

FockState& FockState::operator+=(const FockState& o) {
  for (const auto& [p, c] : o.terms_) add(p, c);
  // unlisted components of either side are only known modulo the smaller tail
  if (o.tail_ < tail_ || tail_ < o.tail_) {
    const int t = std::min(tail_, o.tail_);
    for (auto& [p, c] : terms_) c = c.truncated_x(t);
    tail_ = t;
  }
  const bool za = zero_above_cap(), zb = o.zero_above_cap();
  if (za && zb) {
    weight_cap_ = std::max(weight_cap_, o.weight_cap_);
  } else if (za) {
    weight_cap_ = o.weight_cap_;
  } else if (!zb) {
    weight_cap_ = std::min(weight_cap_, o.weight_cap_);
  }
  zero_above_cap_ = za && zb;
  return *this;
}

FockState& FockState::operator-=(const FockState& o) { return *this += o.scaled(Rational(-1)); }

FockState FockState::scaled(const LaurentSeries& c) const {
  FockState r(vars_);
  r.weight_cap_ = weight_cap_;
  r.zero_above_cap_ = zero_above_cap_;
  if (tail_ < kExact && !(c.empty() && c.is_exact())) r.tail_ = tail_ + c.x_valuation();
  for (const auto& [p, a] : terms_) r.add(p, a * c);
  return r;
}

FockState FockState::scaled(const Rational& c) const {
  FockState r(vars_);
  if (c == 0) return r;
  r.weight_cap_ = weight_cap_;
  r.zero_above_cap_ = zero_above_cap_;
  r.tail_ = tail_;
  for (const auto& [p, a] : terms_) r.add(p, a.scaled(c));
  return r;
}

int FockState::max_weight() const {
  int w = 0;
  for (const auto& [p, c] : terms_) w = std::max(w, p.weight());
  return w;
}

int FockState::min_x_valuation() const {
  int v = kExact;
  for (const auto& [p, c] : terms_) v = std::min(v, c.x_valuation());
  return v;
}

FockState FockState::projected(int w) const {
  if (w >= weight_cap_) return *this;
  FockState r(vars_);
  r.tail_ = tail_;
  r.weight_cap_ = w;
  for (const auto& [p, c] : terms_) {
    if (p.weight() <= w) r.terms_.emplace(p, c);
  }
  return r;
}

FockState FockState::zero_above(int w) const {
  FockState r = projected(w);
  r.zero_above_cap_ = true;
  return r;
}

FockState operator+(FockState a, const FockState& b) { return a += b; }
FockState operator-(FockState a, const FockState& b) { return a -= b; }

// ---------------------------------------------------------------- fermion actions

FockState apply_psi(int i, const FockState& st, bool dual) {
  FockState out(st.vars());
  out.set_tail(st.tail());
  // a single fermion changes the charge, so a finite cap says nothing afterwards
  out.set_weight_cap(st.weight_cap() >= kUnboundedWeight ? kUnboundedWeight : -1);
  for (const auto& [p, c] : st.terms()) {
    MayaDiagram m = maya_from_partition(p);
    if (!dual) {
      if (m.occupied(i)) continue;
      const int sign = parity_sign(m.count_below(i));
      insert_mode(m, i);
      out.add(partition_from_maya(m), c.scaled(sign));
    } else {
      const int r = -i;
      if (!m.occupied(r)) continue;
      const int sign = parity_sign(m.count_below(r));
      erase_mode(m, r);
      canonicalize(m);
      out.add(partition_from_maya(m), c.scaled(sign));
    }
  }
  return out;
}

FockState apply_bilinear(int i, int j, const FockState& st) {
  FockState out = apply_psi(-i, apply_psi(j, st, true), false);
  if (i == j && i <= 0) out -= st;
  return out;
}

OneBandMatrix OneBandMatrix::transpose() const {
  OneBandMatrix t;
  t.offset = -offset;
  const int m = offset;
  auto f = entry;
  t.entry = [f, m](int p) { return f(p - m); };
  t.name = name + "^T";
  return t;
}

std::vector<BandMove> band_moves(const OneBandMatrix& a, const ChargedPartition& p) {
  std::vector<BandMove> moves;
  const MayaDiagram m = maya_from_partition(p);
  const int off = a.offset;
  if (off != 0) {
    std::vector<int> candidates = m.head;
    for (int r = m.tail_start; r < m.tail_start + std::max(0, -off); ++r) candidates.push_back(r);
    for (int r : candidates) {
      const int t = r + off;
      if (m.occupied(t)) continue;
      const int s1 = parity_sign(m.count_below(r));
      const int s2 = parity_sign(m.count_below(t) - (r < t ? 1 : 0));
      MayaDiagram moved = m;
      erase_mode(moved, r);
      insert_mode(moved, t);
      // r = -(i + offset)
      moves.push_back({partition_from_maya(moved), s1 * s2, a.entry(-r - off)});
    }
    return moves;
  }
  // diagonal: occupation of mode r minus its occupation in the charge-0 vacuum
  for (int r : m.head) {
    if (r < 0) moves.push_back({p, 1, a.entry(-r)});
  }
  for (int r = m.tail_start; r < 0; ++r) moves.push_back({p, 1, a.entry(-r)});
  for (int r = 0; r < m.tail_start; ++r) {
    if (!m.occupied(r)) moves.push_back({p, -1, a.entry(-r)});
  }
  return moves;
}

namespace {

// Smallest x exponent the band produces on basis vectors of weight <= cap
// in the given charge sectors.
int min_band_exponent(const OneBandMatrix& a, const std::set<int>& sectors, int cap) {
  // bands with a name are pure functions of it, so the bound is cached
  static std::mutex mu;
  static std::map<std::tuple<std::string, std::set<int>, int>, int> memo;
  const auto key = std::make_tuple(a.name, sectors, cap);
  if (!a.name.empty()) {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }
  int lo = kExact;
  for (const auto& lam : partitions_up_to(cap)) {
    for (int s : sectors) {
      for (const auto& mv : band_moves(a, ChargedPartition{s, lam})) lo = std::min(lo, mv.entry.x_exp);
    }
  }
  if (!a.name.empty()) {
    std::lock_guard<std::mutex> lock(mu);
    memo.emplace(key, lo);
  }
  return lo;
}

}  // namespace

FockState apply_band(const OneBandMatrix& a, const FockState& st) {
  FockState out(st.vars());
  const int cap = st.weight_cap();
  out.set_weight_cap(cap >= kUnboundedWeight ? kUnboundedWeight : std::max(-1, cap - a.offset));
  out.set_zero_above_cap(st.zero_above_cap());
  if (st.tail() < kExact) {
    if (cap >= kUnboundedWeight) {
      throw PrecisionUnderflow("band operator " + a.name +
                               " applied to a truncated state with unbounded weight support");
    }
    std::set<int> sectors;
    for (const auto& [p, c] : st.terms()) sectors.insert(p.s);
    const int lo = min_band_exponent(a, sectors, cap);
    out.set_tail(lo >= kExact ? st.tail() : st.tail() + std::min(0, lo));
  }
  for (const auto& [p, c] : st.terms()) {
    for (const auto& mv : band_moves(a, p)) {
      Monomial shift;
      shift.x = mv.entry.x_exp;
      shift.Q = mv.entry.Q_exp;
      out.add(mv.target, c.shifted(shift, mv.entry.c * mv.sign).truncated_x(out.tail()));
    }
  }
  return out;
}

LaurentSeries inner_product(const FockState& bra, const FockState& ket) {
  LaurentSeries result(ket.vars());
  if (bra.tail() < kExact && ket.tail() < kExact) {
    // components unlisted on both sides pair to O(x^{tail + tail}); with
    // unbounded weights this relies on valuations growing with the weight,
    // which holds for everything the transfer matrices produce
    auto covers = [](const FockState& a, const FockState& b) {
      return a.zero_above_cap() && a.weight_cap() < kUnboundedWeight && b.determined_at(a.weight_cap());
    };
    if (!(bra.zero_above_cap() && ket.zero_above_cap()) && !covers(bra, ket) && !covers(ket, bra)) {
      throw PrecisionUnderflow("pairing of two states with projected components");
    }
    Precision p;
    p.x = bra.tail() + ket.tail();
    result = LaurentSeries(ket.vars(), p);
  }
  for (const auto& [p, c] : bra.terms()) result += c * ket.coeff(p);
  for (const auto& [p, c] : ket.terms()) {
    if (!bra.terms().contains(p)) result += c * bra.coeff(p);
  }
  return result;
}

std::string dump_state(const FockState& st) {
  std::ostringstream os;
  for (const auto& [p, c] : st.terms()) {
    os << "s=" << p.s << " lambda=" << format_partition(p.lambda) << " coeff=" << to_json(c).dump()
       << "\n";
  }
  return os.str();
}

}  // namespace qtoda
