#include "qtoda/qtorus.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace qtoda {

WindowMatrix::WindowMatrix(VarsPtr v, int lo_, int hi_)
    : vars(std::move(v)), lo(lo_), hi(hi_), valid_lo(lo_), valid_hi(hi_) {
  if (lo > hi) throw std::invalid_argument("empty window");
}

LaurentSeries WindowMatrix::at(int i, int j) const {
  auto it = entries.find({i, j});
  return it == entries.end() ? LaurentSeries(vars) : it->second;
}

void WindowMatrix::set(int i, int j, const LaurentSeries& c) {
  if (c.empty() && c.is_exact()) {
    entries.erase({i, j});
    return;
  }
  entries.insert_or_assign({i, j}, c);
  band_width = std::max(band_width, std::abs(i - j));
}

WindowMatrix vkm_window(const VarsPtr& vars, int k, int m, int half_width) {
  WindowMatrix w(vars, -half_width, half_width);
  for (int i = w.lo; i <= w.hi; ++i) {
    const int j = i + m;
    if (j < w.lo || j > w.hi) continue;
    w.set(i, j, LaurentSeries::x_power(vars, 2 * k * j - k * m));
  }
  w.band_width = std::abs(m);
  return w;
}

namespace {

void shrink_to(WindowMatrix& r, int vlo, int vhi) {
  r.valid_lo = vlo;
  r.valid_hi = vhi;
  std::erase_if(r.entries, [&](const auto& e) {
    const auto [i, j] = e.first;
    return i < vlo || i > vhi || j < vlo || j > vhi;
  });
}

}  // namespace

WindowMatrix window_product(const WindowMatrix& a, const WindowMatrix& b) {
  if (a.lo != b.lo || a.hi != b.hi) throw std::invalid_argument("windows differ");
  WindowMatrix r(a.vars, a.lo, a.hi);
  // (AB)_{ij} needs every A_{il}, B_{lj} with |i-l| <= band(A), so rows
  // near the trusted edge are lost.
  const int margin = a.band_width + b.band_width;
  const int vlo = std::max(a.valid_lo, b.valid_lo) + margin;
  const int vhi = std::min(a.valid_hi, b.valid_hi) - margin;
  std::map<std::pair<int, int>, LaurentSeries> acc;
  for (const auto& [ij, c] : a.entries) {
    const auto [i, l] = ij;
    for (int j = l - b.band_width; j <= l + b.band_width; ++j) {
      auto it = b.entries.find({l, j});
      if (it == b.entries.end()) continue;
      auto p = c * it->second;
      auto [slot, fresh] = acc.try_emplace({i, j}, p);
      if (!fresh) slot->second += p;
    }
  }
  for (auto& [ij, c] : acc) r.set(ij.first, ij.second, c);
  r.band_width = margin;
  shrink_to(r, vlo, vhi);
  return r;
}

WindowMatrix window_sum(const WindowMatrix& a, const WindowMatrix& b, const Rational& cb) {
  if (a.lo != b.lo || a.hi != b.hi) throw std::invalid_argument("windows differ");
  WindowMatrix r = a;
  for (const auto& [ij, c] : b.entries) r.set(ij.first, ij.second, r.at(ij.first, ij.second) + c.scaled(cb));
  r.band_width = std::max(a.band_width, b.band_width);
  shrink_to(r, std::max(a.valid_lo, b.valid_lo), std::min(a.valid_hi, b.valid_hi));
  return r;
}

WindowMatrix window_scaled(const WindowMatrix& a, const LaurentSeries& c) {
  WindowMatrix r(a.vars, a.lo, a.hi);
  for (const auto& [ij, e] : a.entries) r.set(ij.first, ij.second, e * c);
  r.band_width = a.band_width;
  r.valid_lo = a.valid_lo;
  r.valid_hi = a.valid_hi;
  return r;
}

WindowMatrix window_commutator(const WindowMatrix& a, const WindowMatrix& b) {
  auto r = window_sum(window_product(a, b), window_product(b, a), -1);
  if (r.interior_empty()) throw std::invalid_argument("interior sub-window is empty");
  return r;
}

bool window_agree(const WindowMatrix& a, const WindowMatrix& b) {
  const int vlo = std::max(a.valid_lo, b.valid_lo);
  const int vhi = std::min(a.valid_hi, b.valid_hi);
  auto inside = [&](const std::pair<int, int>& ij) {
    return ij.first >= vlo && ij.first <= vhi && ij.second >= vlo && ij.second <= vhi;
  };
  for (const auto* m : {&a, &b}) {
    for (const auto& [ij, c] : m->entries) {
      if (inside(ij) && !agree(a.at(ij.first, ij.second), b.at(ij.first, ij.second))) return false;
    }
  }
  return true;
}

QtorusReport check_qtorus_relation(const VarsPtr& vars, int k, int l, int m, int n, int half_width) {
  QtorusReport rep;
  rep.k = k;
  rep.l = l;
  rep.m = m;
  rep.n = n;
  const auto lhs = window_commutator(vkm_window(vars, k, m, half_width), vkm_window(vars, l, n, half_width));
  // exponents of x: q^{(lm-kn)/2} = x^{lm-kn}
  const int e = l * m - k * n;
  auto coeff = LaurentSeries::x_power(vars, e) - LaurentSeries::x_power(vars, -e);
  auto rhs = window_scaled(vkm_window(vars, k + l, m + n, half_width), coeff);
  rhs.valid_lo = lhs.valid_lo;
  rhs.valid_hi = lhs.valid_hi;
  rep.interior_lo = lhs.valid_lo;
  rep.interior_hi = lhs.valid_hi;
  rep.pass = window_agree(lhs, rhs);
  if (!rep.pass) rep.detail = "entry mismatch on interior";
  return rep;
}

nlohmann::json to_json(const QtorusReport& r) {
  nlohmann::json j;
  j["k"] = r.k;
  j["l"] = r.l;
  j["m"] = r.m;
  j["n"] = r.n;
  j["pass"] = r.pass;
  j["interior"] = {r.interior_lo, r.interior_hi};
  if (!r.detail.empty()) j["detail"] = r.detail;
  return j;
}

}  // namespace qtoda
