#pragma once

// Double Hurwitz numbers: symmetric-group count and extraction from the
// tau function with g = q^{W0} Q^{L0}.

#include <string>
#include <vector>

#include "json.hpp"
#include "qtoda/partition.hpp"
#include "qtoda/qlaurent.hpp"

namespace qtoda {

struct HurwitzQuery {
  Partition mu;
  Partition nu;
  int b = 0;
  int degree() const;
};

/// (1/d!) #{(sigma, tau_1..tau_b): sigma of type mu, tau_i transpositions,
/// tau_b ... tau_1 sigma of type nu}. Disconnected covers are included.
Rational hurwitz_bruteforce(const HurwitzQuery& q);
inline constexpr int kBruteForceMaxDegree = 6;
inline constexpr int kBruteForceMaxBranch = 8;

/// Convention constants mapping tau coefficients to Hurwitz numbers:
/// with c_j the coefficient of x^j Q^d prod T_{mu_i} prod Tb_{nu_j},
///   H = sign_ell^{l(nu)} * (prod mu_i prod nu_j)^{-divide_parts}
///       * bfact^{[b!]} * sum_j c_j (beta_sign (j/2 - shift d) / scale)^b / b!
struct HurwitzCalibration {
  int shift = 0;        // 0 or 1
  int scale = 1;        // 1 or 2
  int beta_sign = 1;    // +1 or -1
  bool b_factorial = false;
  bool divide_parts = false;
  bool sign_ell = false;
  int fitted_dmax = 0;
  int fitted_bmax = 0;
  std::vector<std::string> log;
};

nlohmann::json to_json(const HurwitzCalibration& c);
HurwitzCalibration calibration_from_json(const nlohmann::json& j);
HurwitzCalibration load_calibration(const std::string& path);
/// Path of the checked-in calibration record.
std::string default_calibration_path();

/// Coefficient of Q^d prod T_{mu_i} prod Tb_{nu_j} in tau(0,T,Tbar) as a
/// Laurent polynomial in x; tau is evaluated through the operator pipeline
/// and cached per degree.
LaurentSeries hurwitz_tau_coefficient(const Partition& mu, const Partition& nu);

/// The uncalibrated beta expansion: sum_j c_j (beta_sign (j/2 - shift d)/scale)^b / b!
/// with the other conventions applied as in HurwitzCalibration.
Rational hurwitz_from_tau(const HurwitzQuery& q, const HurwitzCalibration& c);

/// Tries every convention on all queries with d <= dmax, b <= bmax and keeps
/// the one with zero residual. Throws if none or more than one fits.
HurwitzCalibration calibrate_conventions(int dmax, int bmax = 4);

}  // namespace qtoda
