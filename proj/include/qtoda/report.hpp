#pragma once

// Pass/fail records shared by every identity check.

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qtoda/fock.hpp"

namespace qtoda {

struct CaseResult {
  nlohmann::json params;
  bool pass = false;
  /// Every coefficient below x^verified_precision was compared.
  int verified_precision = 0;
  /// Zero when pass; otherwise the first coefficient that differs.
  std::string first_mismatch;
};

struct IdentityReport {
  std::string identity;
  nlohmann::json config;
  std::vector<CaseResult> cases;

  bool pass() const;
  int min_verified_precision() const;
};

nlohmann::json to_json(const CaseResult& c);
nlohmann::json to_json(const IdentityReport& r);

/// Outcome of comparing two states on all basis vectors of weight <= wmax
/// in the listed charge sectors.
struct StateComparison {
  bool equal = true;
  int precision = kExact;
  std::string first_mismatch;
};

StateComparison compare_states(const FockState& a, const FockState& b, const std::vector<int>& sectors,
                               int wmax);
StateComparison compare_series(const LaurentSeries& a, const LaurentSeries& b);

/// Repeats attempt(x_order) with a growing working precision until the
/// verified precision reaches target. Throws PrecisionUnderflow after
/// max_extra extra orders.
CaseResult with_precision(int target, int first_margin, const std::function<CaseResult(int)>& attempt,
                          int max_extra = 64);

}  // namespace qtoda
