#pragma once

// Operators on the fermionic Fock space: currents J_m, the quantum torus
// bilinears V^(k)_m, the diagonal operators W_0, L_0, H_k, the transfer
// matrices G_{+-} and pipelines built from them.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qtoda/fock.hpp"
#include "qtoda/report.hpp"

namespace qtoda {

OneBandMatrix vkm_band(int k, int m);
OneBandMatrix j_band(int m);
OneBandMatrix w0_band();
OneBandMatrix l0_band();

FockState apply_Vkm(int k, int m, const FockState& st);
/// J_m through direct particle moves (all entries are 1).
FockState apply_J(int m, const FockState& st);

/// Eigenvalues of the diagonal bilinears on a basis vector, computed from
/// the defining sums and memoized.
long long eigenvalue_W0(const ChargedPartition& p);
long long eigenvalue_L0(const ChargedPartition& p);
/// Eigenvalue of H_k = V^(k)_0: a Laurent polynomial in x.
LaurentSeries eigenvalue_H(const VarsPtr& vars, int k, const ChargedPartition& p);

enum class Direction { Plus, Minus };

/// Gamma_{+-}(x^z) = exp(sum_k x^{zk} J_{+-k} / k) or its inverse. Adds
/// (Minus) or removes (Plus) horizontal strips; the inverse uses vertical
/// strips with alternating signs. Output components are kept up to weight
/// cap and coefficients are truncated below x^x_target.
FockState apply_gamma(Direction dir, bool inverse, int z, const FockState& st, int cap, int x_target);

/// G_{+-} = exp(sum_k q^{k/2} / (k (1-q^k)) J_{+-k}) = prod_{i>=1} Gamma_{+-}(x^{2i-1}).
FockState apply_G(Direction dir, bool inverse, const FockState& st, int cap = kUnboundedWeight);

/// Multiplies each basis vector by factor(p). min_x_exp(p) bounds the x
/// valuation of factor(p) from below and is used to move the tail.
FockState apply_diagonal(const FockState& st, const std::function<LaurentSeries(const ChargedPartition&)>& factor,
                         const std::function<int(const ChargedPartition&)>& min_x_exp, const std::string& name);

/// exp(sum_k c_k J_{+-k}); c[k-1] multiplies J_{+-k}. Coefficients need
/// positive time degree or positive x valuation.
FockState apply_expJ(Direction dir, const std::vector<LaurentSeries>& c, const FockState& st,
                     int cap = kUnboundedWeight);

// ---------------------------------------------------------------- pipelines

struct OpBand {
  OneBandMatrix a;
};
/// V^(k)_m - shift.
struct OpVkm {
  int k = 0;
  int m = 0;
  std::optional<LaurentSeries> shift;
};
struct OpScalar {
  LaurentSeries c;
};
/// q^{c W_0}; 2c must be an integer.
struct OpQW0 {
  Rational c;
};
struct OpQL0 {};
struct OpG {
  Direction dir = Direction::Plus;
  bool inverse = false;
};
/// exp(sum_k t_k H_k).
struct OpExpH {
  std::vector<LaurentSeries> t;
};
struct OpExpJ {
  Direction dir = Direction::Plus;
  std::vector<LaurentSeries> c;
};

using ElementaryOperator = std::variant<OpBand, OpVkm, OpScalar, OpQW0, OpQL0, OpG, OpExpH, OpExpJ>;

std::string op_name(const ElementaryOperator& op);

/// Operators as written left to right; the rightmost acts first.
struct OperatorPipeline {
  std::vector<ElementaryOperator> ops;
  std::string describe() const;
};

/// Applies the pipeline, keeping only what is needed for the components
/// of weight <= final_cap of the result. Lowering factors see complete
/// inputs; raising factors are cut at the weights later stages can use.
/// Precision problems are rethrown naming the stage.
FockState apply_pipeline(const OperatorPipeline& p, const FockState& st, int final_cap = kUnboundedWeight);

/// Weight cap an operator needs on its input to produce components up to
/// out_cap on its output.
int required_input_cap(const ElementaryOperator& op, int out_cap, const std::vector<int>& sectors, int Q_order);

// ---------------------------------------------------------------- checks

struct CheckGrid {
  int x_order = 16;  // target x-precision
  int kmax = 2;
  int mmax = 2;
  std::vector<int> sectors{0};
  int wmax = 6;
};

/// [V^(k)_m, V^(l)_n] against the centrally extended bracket, as matrix
/// elements between all basis vectors up to wmax.
CaseResult check_bilinear_case(int target, int k, int l, int m, int n, int s, int wmax);
IdentityReport check_bilinear_commutators(const CheckGrid& g);

/// G_-G_+ (V^(k)_m - d_{m,0} c_k) = (-1)^k (V^(k)_{m+k} - d_{m+k,0} c_k) G_-G_+
/// with c_k = q^k/(1-q^k); for k = 0 the constant is dropped on both sides.
CaseResult check_shift1_case(int target, int k, int m, int s, int wmax);
IdentityReport check_shift1(const CheckGrid& g);

/// q^{W_0/2} V^(k)_m q^{-W_0/2} = V^(k-m)_m.
CaseResult check_shift2_case(int target, int k, int m, int s, int wmax);
IdentityReport check_shift2(const CheckGrid& g);

/// The anomaly constant q^a/(1-q^a) for a != 0 (either sign).
LaurentSeries anomaly_constant(const VarsPtr& vars, int a);

}  // namespace qtoda
