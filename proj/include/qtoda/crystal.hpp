#pragma once

// Melting crystal oracles: plane partitions and explicit basis sums.

#include <vector>

#include "qtoda/report.hpp"

namespace qtoda {

/// Rows of a plane partition, weakly decreasing along rows and columns.
struct PlanePartition {
  std::vector<std::vector<int>> rows;
  int volume() const;
  bool valid() const;
};

/// Number of plane partitions of each volume 0..vmax, counted as
/// two-sided sequences of interlacing diagonal slices.
std::vector<long long> enumerate_plane_partitions(int vmax);

/// <0|G_-|lambda> = q^{(|lambda| + 2 n(lambda))/2} / prod_h (1 - q^h).
LaurentSeries schur_principal(const VarsPtr& vars, const Partition& lambda);

/// sum_lambda c_lambda^2 exp(sum t_k h_k(lambda,s)) Q^{L0(lambda,s)} with the
/// hook-formula coefficients. flip_L0 replaces the Q exponent by
/// L0(s,0) + (M - L0(s,0) - |lambda|) (negative control).
LaurentSeries crystal_Z_direct(const VarsPtr& vars, int s, const std::vector<LaurentSeries>& t,
                               bool flip_L0 = false);

/// prod_{n>=1} (1 - Q q^n)^{-n}, expanded directly.
LaurentSeries crystal_product(const VarsPtr& vars);

/// Coefficients of q^0..q^vmax after setting Q = 1. Needs Q_order >= vmax
/// and x-precision > 2 vmax.
std::vector<Rational> counts_at_Q1(const LaurentSeries& z, int vmax);

struct CrystalConfig {
  int x_order = 12;
  int Q_order = 4;
  int D = 1;  // time degree of the t1 case
  std::vector<int> sectors{0};
  int vmax = 5;
  bool flip_L0 = false;
};

/// Operator pipeline vs basis sum vs product at t = 0, s = 0; pipeline vs
/// basis sum with t1 active per sector; plane-partition counts vs Q = 1.
IdentityReport check_crystal_consistency(const CrystalConfig& c);

}  // namespace qtoda
