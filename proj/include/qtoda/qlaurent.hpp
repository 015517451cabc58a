#pragma once

// Truncated multivariate formal Laurent series over exact rationals.
//
// A series lives in the variables x (with x^2 = q), Q and a finite list of
// time variables. Every series carries its own precision: a term
// x^a Q^b t^c is known iff a < precision.x, b < precision.Q and
// deg(c) < precision.tdeg. Terms outside that box are unknown, never
// silently treated as zero.

#include <array>
#include <compare>
#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "json.hpp"

namespace qtoda {

using Rational = mpq_class;

/// Sentinel precision for "exact in this grading".
inline constexpr int kExact = std::numeric_limits<int>::max() / 4;
inline constexpr int kMaxTimeVars = 12;

class SeriesError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class VarSystemMismatch : public SeriesError {
 public:
  using SeriesError::SeriesError;
};

/// Raised when a requested coefficient can no longer be known at the
/// working precision. The message names the stage that lost it.
class PrecisionUnderflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VarSystem {
  int x_order = 16;      // generation precision: infinite expansions stop below x^x_order
  int Q_order = 4;       // largest tracked Q exponent
  int time_degree = 0;   // largest tracked total time degree
  bool q_half_allowed = true;
  std::vector<std::string> time_vars;

  static std::shared_ptr<const VarSystem> make(int x_order, int Q_order,
                                               std::vector<std::string> time_vars = {},
                                               int time_degree = 0);

  int time_var_count() const { return static_cast<int>(time_vars.size()); }
  int time_index(std::string_view name) const;

  /// Algebraic compatibility. x_order only controls how far infinite
  /// expansions are generated, so it does not take part.
  bool compatible(const VarSystem& other) const;

  /// Same algebra with a different generation precision.
  std::shared_ptr<const VarSystem> with_x_order(int x_order) const;
};

using VarsPtr = std::shared_ptr<const VarSystem>;

struct Monomial {
  int x = 0;
  int Q = 0;
  std::array<std::uint8_t, kMaxTimeVars> t{};

  int tdeg() const;
  Monomial operator*(const Monomial& o) const;
  auto operator<=>(const Monomial&) const = default;

  static Monomial x_pow(int e) { Monomial m; m.x = e; return m; }
  static Monomial Q_pow(int e) { Monomial m; m.Q = e; return m; }
};

/// Exclusive upper bounds of the known region.
struct Precision {
  int x = kExact;
  int Q = kExact;
  int tdeg = kExact;
  bool operator==(const Precision&) const = default;
};

Precision meet(const Precision& a, const Precision& b);

class LaurentSeries {
 public:
  using Term = std::pair<Monomial, Rational>;

  explicit LaurentSeries(VarsPtr vars);
  LaurentSeries(VarsPtr vars, const Precision& prec);

  static LaurentSeries constant(VarsPtr vars, const Rational& c);
  static LaurentSeries monomial(VarsPtr vars, const Monomial& m, const Rational& c = 1);
  static LaurentSeries x_power(VarsPtr vars, int e, const Rational& c = 1);
  static LaurentSeries time_var(VarsPtr vars, int index);
  static LaurentSeries time_var(VarsPtr vars, std::string_view name);
  /// Builds a series from raw terms; duplicate monomials are summed.
  static LaurentSeries from_terms(VarsPtr vars, std::vector<Term> terms, const Precision& prec);

  const VarsPtr& vars() const { return vars_; }
  const Precision& precision() const { return prec_; }
  const std::vector<Term>& terms() const { return terms_; }

  bool empty() const { return terms_.empty(); }
  bool is_exact() const;
  Rational coeff(const Monomial& m) const;
  bool known(const Monomial& m) const;

  /// Lowest exponent present; the precision bound when there are no terms.
  int x_valuation() const;
  int Q_valuation() const;
  int tdeg_valuation() const;

  LaurentSeries& operator+=(const LaurentSeries& o);
  LaurentSeries& operator-=(const LaurentSeries& o);
  LaurentSeries& operator*=(const LaurentSeries& o);
  LaurentSeries operator-() const;

  LaurentSeries scaled(const Rational& c) const;
  /// Multiplication by the exact monomial m.
  LaurentSeries shifted(const Monomial& m, const Rational& c = 1) const;
  /// Restricts the known region (drops terms that fall outside).
  LaurentSeries truncated(const Precision& p) const;
  LaurentSeries truncated_x(int p) const;
  LaurentSeries rebound(VarsPtr vars) const;

 private:
  void normalize();

  VarsPtr vars_;
  Precision prec_;
  std::vector<Term> terms_;
};

LaurentSeries operator+(LaurentSeries a, const LaurentSeries& b);
LaurentSeries operator-(LaurentSeries a, const LaurentSeries& b);
LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b);

LaurentSeries series_add(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries series_mul(const LaurentSeries& a, const LaurentSeries& b);
/// exp(a) for a without constant term and with positive valuation in some grading.
LaurentSeries series_exp(const LaurentSeries& a);

/// q^k / (1 - q^k) expanded in non-negative powers of q (k != 0, either sign).
LaurentSeries geometric_fraction(const VarsPtr& vars, int k);
/// sign = +1: q^k/(1-q^k); sign = -1: q^{-k}/(1-q^{-k}). k must be positive.
LaurentSeries expand_qfrac(const VarsPtr& vars, int k, int sign = 1);

/// d/dt_index.
LaurentSeries time_derivative(const LaurentSeries& a, int index);

/// Coefficient-wise equality on the common known region.
bool agree(const LaurentSeries& a, const LaurentSeries& b);

/// Substitutes a linear combination of series for every time variable:
/// t_i -> images[i]. Images must have positive time valuation.
LaurentSeries substitute_times(const LaurentSeries& a, const std::vector<LaurentSeries>& images);

nlohmann::json to_json(const LaurentSeries& a);
LaurentSeries series_from_json(const VarsPtr& vars, const nlohmann::json& j);
std::string to_string(const LaurentSeries& a);

}  // namespace qtoda
