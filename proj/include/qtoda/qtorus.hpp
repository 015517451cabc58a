#pragma once

// Finite windows of banded Z x Z matrices and the quantum torus bracket.

#include <map>
#include <string>
#include <utility>

#include "qtoda/qlaurent.hpp"

namespace qtoda {

/// Entries (i, j) with i, j in [lo, hi]. Only rows and columns inside
/// [valid_lo, valid_hi] are trusted; products shrink that range.
struct WindowMatrix {
  VarsPtr vars;
  int lo = 0;
  int hi = -1;
  int valid_lo = 0;
  int valid_hi = -1;
  int band_width = 0;
  std::map<std::pair<int, int>, LaurentSeries> entries;

  explicit WindowMatrix(VarsPtr v, int lo_, int hi_);

  LaurentSeries at(int i, int j) const;
  void set(int i, int j, const LaurentSeries& c);
  bool interior_empty() const { return valid_lo > valid_hi; }
};

/// v^(k)_m = q^{-km/2} Lambda^m q^{k Delta}: entry (i, i+m) = x^{2k(i+m) - km}.
WindowMatrix vkm_window(const VarsPtr& vars, int k, int m, int half_width);

WindowMatrix window_product(const WindowMatrix& a, const WindowMatrix& b);
WindowMatrix window_sum(const WindowMatrix& a, const WindowMatrix& b, const Rational& cb = 1);
WindowMatrix window_scaled(const WindowMatrix& a, const LaurentSeries& c);
/// AB - BA, trusted on the window shrunk by both band widths.
WindowMatrix window_commutator(const WindowMatrix& a, const WindowMatrix& b);

/// Entry-wise equality on the common trusted range.
bool window_agree(const WindowMatrix& a, const WindowMatrix& b);

struct QtorusReport {
  int k = 0, l = 0, m = 0, n = 0;
  bool pass = false;
  int interior_lo = 0;
  int interior_hi = -1;
  std::string detail;
};

/// [v^(k)_m, v^(l)_n] = (q^{(lm-kn)/2} - q^{(kn-lm)/2}) v^(k+l)_{m+n}.
QtorusReport check_qtorus_relation(const VarsPtr& vars, int k, int l, int m, int n, int half_width);

nlohmann::json to_json(const QtorusReport& r);

}  // namespace qtoda
