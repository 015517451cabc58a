#include "qtoda/report.hpp"

#include <algorithm>

namespace qtoda {

bool IdentityReport::pass() const {
  return std::all_of(cases.begin(), cases.end(), [](const CaseResult& c) { return c.pass; });
}

int IdentityReport::min_verified_precision() const {
  int p = kExact;
  for (const auto& c : cases) p = std::min(p, c.verified_precision);
  return p;
}

namespace {
nlohmann::json precision_json(int p) { return p >= kExact ? nlohmann::json(nullptr) : nlohmann::json(p); }
}  // namespace

nlohmann::json to_json(const CaseResult& c) {
  nlohmann::json j;
  j["params"] = c.params;
  j["pass"] = c.pass;
  j["verified_x_precision"] = precision_json(c.verified_precision);
  j["max_deviation"] = c.pass ? "0" : c.first_mismatch;
  return j;
}

nlohmann::json to_json(const IdentityReport& r) {
  nlohmann::json j;
  j["identity"] = r.identity;
  j["config"] = r.config;
  j["pass"] = r.pass();
  j["cases_checked"] = r.cases.size();
  j["cases_failed"] = std::count_if(r.cases.begin(), r.cases.end(), [](const CaseResult& c) { return !c.pass; });
  j["min_verified_x_precision"] = precision_json(r.min_verified_precision());
  auto arr = nlohmann::json::array();
  for (const auto& c : r.cases) arr.push_back(to_json(c));
  j["cases"] = std::move(arr);
  return j;
}

StateComparison compare_series(const LaurentSeries& a, const LaurentSeries& b) {
  StateComparison out;
  LaurentSeries d = a - b;
  out.precision = d.precision().x;
  if (!d.empty()) {
    out.equal = false;
    out.first_mismatch = to_string(d);
  }
  return out;
}

StateComparison compare_states(const FockState& a, const FockState& b, const std::vector<int>& sectors,
                               int wmax) {
  StateComparison out;
  for (int s : sectors) {
    for (const auto& lam : partitions_up_to(wmax)) {
      const ChargedPartition p{s, lam};
      auto c = compare_series(a.coeff(p), b.coeff(p));
      out.precision = std::min(out.precision, c.precision);
      if (!c.equal && out.equal) {
        out.equal = false;
        out.first_mismatch = format_charged(p) + ": " + c.first_mismatch;
      }
    }
  }
  return out;
}

CaseResult with_precision(int target, int first_margin, const std::function<CaseResult(int)>& attempt,
                          int max_extra) {
  int work = target + std::max(0, first_margin);
  for (;;) {
    CaseResult r = attempt(work);
    // a mismatch below the target is a genuine failure at any precision
    if (r.verified_precision >= target || !r.pass) return r;
    const int next = work + std::max(2, target - r.verified_precision);
    if (next - target > max_extra) {
      throw PrecisionUnderflow("working precision x^" + std::to_string(work) + " verifies only x^" +
                               std::to_string(r.verified_precision) + ", target x^" +
                               std::to_string(target));
    }
    work = next;
  }
}

}  // namespace qtoda
