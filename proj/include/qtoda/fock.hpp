#pragma once

// Charged free-fermion Fock space.
//
// Basis vectors are semi-infinite wedges psi_{m1} psi_{m2} ... with
// m1 < m2 < ... and m_k = k-1 when k is large enough, indexed by charged
// partitions (s, lambda) through m_k = (k-1) - s - lambda_k. psi_i adds
// mode i, psi*_i removes mode -i. Adding or removing mode r carries the
// sign (-1)^{#occupied modes below r}.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qtoda/partition.hpp"
#include "qtoda/qlaurent.hpp"

namespace qtoda {

inline constexpr int kUnboundedWeight = kExact;

struct ChargedPartition {
  int s = 0;
  Partition lambda;

  int weight() const { return qtoda::weight(lambda); }
  bool operator==(const ChargedPartition&) const = default;
  /// Order by (s, weight, lexicographic lambda).
  bool operator<(const ChargedPartition& o) const;
};

std::string format_charged(const ChargedPartition& p);

/// Occupied modes = head (sorted, all < tail_start) plus every mode >= tail_start.
struct MayaDiagram {
  std::vector<int> head;
  int tail_start = 0;

  int charge() const { return static_cast<int>(head.size()) - tail_start; }
  bool occupied(int r) const;
  /// Number of occupied modes strictly below r.
  int count_below(int r) const;
  bool operator==(const MayaDiagram&) const = default;
};

MayaDiagram maya_from_partition(const ChargedPartition& p);
ChargedPartition partition_from_maya(MayaDiagram m);
/// First n occupied modes in increasing order.
std::vector<int> occupied_modes(const MayaDiagram& m, int n);

/// Finite combination of basis vectors with series coefficients.
///
/// tail(): components that are not listed, and whose weight does not
/// exceed weight_cap(), are only known to vanish modulo x^tail. Components
/// above weight_cap() are exactly zero when zero_above_cap() holds (they
/// were removed by Q-truncation), otherwise they were projected away and
/// are unknown.
class FockState {
 public:
  using Map = std::map<ChargedPartition, LaurentSeries>;

  explicit FockState(VarsPtr vars);
  static FockState basis(VarsPtr vars, const ChargedPartition& p);
  static FockState basis(const ChargedPartition& p, const LaurentSeries& coeff);

  const VarsPtr& vars() const { return vars_; }
  const Map& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  int tail() const { return tail_; }
  void set_tail(int t) { tail_ = t; }
  int weight_cap() const { return weight_cap_; }
  void set_weight_cap(int w) { weight_cap_ = w; }
  bool zero_above_cap() const { return zero_above_cap_ || weight_cap_ >= kUnboundedWeight; }
  void set_zero_above_cap(bool z) { zero_above_cap_ = z; }
  /// Whether the component at weight w is determined (up to tail).
  bool determined_at(int w) const { return w <= weight_cap_ || zero_above_cap(); }

  /// Coefficient of p; a zero known modulo x^tail when p is unlisted.
  LaurentSeries coeff(const ChargedPartition& p) const;
  void add(const ChargedPartition& p, const LaurentSeries& c);

  FockState& operator+=(const FockState& o);
  FockState& operator-=(const FockState& o);
  FockState scaled(const LaurentSeries& c) const;
  FockState scaled(const Rational& c) const;

  int max_weight() const;
  int min_x_valuation() const;
  /// Keeps components with weight <= w; higher ones become unknown.
  FockState projected(int w) const;
  /// Same data with a new cap; components above it are declared zero.
  FockState zero_above(int w) const;

 private:
  VarsPtr vars_;
  Map terms_;
  int tail_ = kExact;
  int weight_cap_ = kUnboundedWeight;
  bool zero_above_cap_ = false;
};

FockState operator+(FockState a, const FockState& b);
FockState operator-(FockState a, const FockState& b);

/// psi_i (dual = false) or psi*_i (dual = true).
FockState apply_psi(int i, const FockState& st, bool dual);

/// Normal-ordered :psi_{-i} psi*_j: (vacuum subtraction delta_ij [i <= 0]).
FockState apply_bilinear(int i, int j, const FockState& st);

/// Entry of a one-band matrix: c * x^x_exp * Q^Q_exp.
struct BandEntry {
  Rational c = 1;
  int x_exp = 0;
  int Q_exp = 0;
};

/// gl(infinity) element with a single nonzero diagonal a_{i,i+offset}.
struct OneBandMatrix {
  int offset = 0;
  std::function<BandEntry(int i)> entry;
  /// Identifies the band: equal names must mean equal entries.
  std::string name;

  OneBandMatrix transpose() const;
};

/// The bilinear  sum_i a_{i,i+m} :psi_{-i} psi*_{i+m}:  acting on a state.
/// Only finitely many i act nontrivially on each basis vector.
FockState apply_band(const OneBandMatrix& a, const FockState& st);

/// Terms of the band bilinear on one basis vector: (target, sign, entry).
struct BandMove {
  ChargedPartition target;
  int sign;
  BandEntry entry;
};
std::vector<BandMove> band_moves(const OneBandMatrix& a, const ChargedPartition& p);

/// Bilinear pairing in the orthonormal charged-partition basis.
LaurentSeries inner_product(const FockState& bra, const FockState& ket);

/// Text dump: one line per term, sorted by (s, weight, lambda).
std::string dump_state(const FockState& st);

}  // namespace qtoda
