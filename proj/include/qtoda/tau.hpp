#pragma once

// Toda tau functions <s| exp(sum T_k J_k) g exp(-sum Tbar_k J_{-k}) |s>
// for pipelines g, and the identities relating them to the melting
// crystal partition function.

#include <string>
#include <vector>

#include "qtoda/operators.hpp"

namespace qtoda {

enum class GModel { Crystal, Vertex, Hurwitz, Broken };

std::string model_name(GModel m);
GModel parse_model(const std::string& name);

/// crystal: q^{W0/2} G_- G_+ Q^{L0} G_- G_+ q^{W0/2}
/// vertex:  q^{W0/2} G_+ G_- q^{W0/2}
/// hurwitz: q^{W0} Q^{L0}   (e^{-beta W0} with q = e^{-beta})
/// broken:  the crystal pipeline with its first G_+ left out
OperatorPipeline g_pipeline(GModel m);

/// Pipeline of transposed factors in reverse order. Supports the diagonal
/// factors, G and current exponentials.
OperatorPipeline transpose(const OperatorPipeline& p);

struct TauSpec {
  int s = 0;
  OperatorPipeline g;
  /// T[k-1] multiplies J_k, Tbar[k-1] multiplies J_{-k}; entries must have
  /// positive time degree.
  std::vector<LaurentSeries> T;
  std::vector<LaurentSeries> Tbar;
};

/// The tau function at the precision of vars. When g contains Q^{L0} the
/// basis is inserted at that factor, so both halves stay finite.
LaurentSeries tau_eval(const TauSpec& spec, const VarsPtr& vars);

/// Time variables T1..TK, Tb1..TbK.
VarsPtr tau_vars(int x_order, int Q_order, int D, int K);
std::vector<LaurentSeries> tau_times(const VarsPtr& vars, const std::string& prefix, int K);

/// tau(s, T, Tbar) with the variables of tau_vars, retried until the
/// result is known below x^target, then truncated there.
LaurentSeries tau_series(GModel model, int s, int target, int Q_order, int D, int K);

/// <s| G_+ exp(sum t_k H_k) Q^{L0} G_- |s>.
LaurentSeries melting_Z_operator(const VarsPtr& vars, int s, const std::vector<LaurentSeries>& t);

/// Times t1..tK shared by both sides of the main identity.
VarsPtr coupling_vars(int x_order, int Q_order, int D, int K);

struct TauConfig {
  int x_order = 12;
  int Q_order = 4;
  int D = 2;
  int K = 2;
};

/// Z(Q,s,t) = exp(sum t_k q^k/(1-q^k)) q^{-s(s+1)(2s+1)/6} tau(s,T,0) with
/// T_k = (-1)^k t_k, and tau(s,T,0) = tau(s,0,-T). Two cases per sector.
IdentityReport check_main_identity(const TauConfig& c, const std::vector<int>& sectors);

/// J_k g = g J_{-k} (general = false) or
/// Q^k (V^(k)_m - d_{m,0} c_k) g = g (V^(-k)_{-2k-m} - d_{2k+m,0} c_{-k})
/// with c_a = q^a/(1-q^a), as matrix elements up to weight wmax.
CaseResult check_intertwining_case(GModel model, bool general, int k, int m, int s, int wmax, int target,
                                   int Q_order);
IdentityReport check_intertwining(GModel model, int kmax, int mmax, const std::vector<int>& sectors, int wmax,
                                  int target, int Q_order);

/// (d/dT_k + d/dTbar_k) tau = 0 up to time degree D-1, k = 1..K.
IdentityReport check_constraint(GModel model, const TauConfig& c, const std::vector<int>& sectors);

/// tau(s,T,Tbar) = tau(s,T-Tbar,0) to time degree D.
IdentityReport check_difference_dependence(GModel model, const TauConfig& c, const std::vector<int>& sectors);

}  // namespace qtoda
