#include "qtoda/hurwitz.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>

#include "qtoda/tau.hpp"

#ifndef QTODA_DATA_DIR
#define QTODA_DATA_DIR "data"
#endif

namespace qtoda {

int HurwitzQuery::degree() const { return weight(mu); }

namespace {

using Perm = std::vector<int>;

Partition cycle_type(const Perm& p) {
  const int n = static_cast<int>(p.size());
  std::vector<bool> seen(n, false);
  Partition out;
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (int j = i; !seen[j]; j = p[j]) {
      seen[j] = true;
      ++len;
    }
    out.push_back(len);
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

mpz_class factorial(int n) {
  mpz_class f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

Rational hurwitz_bruteforce(const HurwitzQuery& q) {
  const int d = q.degree();
  if (d < 1 || weight(q.nu) != d || !is_partition(q.mu) || !is_partition(q.nu)) {
    throw std::invalid_argument("mu and nu must be partitions of the same positive degree");
  }
  if (d > kBruteForceMaxDegree || q.b < 0 || q.b > kBruteForceMaxBranch) {
    throw std::invalid_argument("brute force limited to d <= " + std::to_string(kBruteForceMaxDegree) + ", b <= " +
                                std::to_string(kBruteForceMaxBranch));
  }
  std::vector<Perm> perms;
  Perm p(d);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::map<Perm, int> index;
  for (size_t i = 0; i < perms.size(); ++i) index[perms[i]] = static_cast<int>(i);

  std::vector<mpz_class> count(perms.size(), 0);
  for (size_t i = 0; i < perms.size(); ++i) {
    if (cycle_type(perms[i]) == q.mu) count[i] = 1;
  }
  for (int step = 0; step < q.b; ++step) {
    std::vector<mpz_class> next(perms.size(), 0);
    for (size_t i = 0; i < perms.size(); ++i) {
      if (count[i] == 0) continue;
      for (int a = 0; a < d; ++a) {
        for (int c = a + 1; c < d; ++c) {
          // (a c) composed after the current permutation
          Perm r = perms[i];
          for (int& v : r) v = v == a ? c : (v == c ? a : v);
          next[index[r]] += count[i];
        }
      }
    }
    count = std::move(next);
  }
  mpz_class total = 0;
  for (size_t i = 0; i < perms.size(); ++i) {
    if (cycle_type(perms[i]) == q.nu) total += count[i];
  }
  Rational r(total, factorial(d));
  r.canonicalize();
  return r;
}

// ---------------------------------------------------------------- tau side

LaurentSeries hurwitz_tau_coefficient(const Partition& mu, const Partition& nu) {
  const int d = weight(mu);
  if (d < 1 || weight(nu) != d) throw std::invalid_argument("mu and nu must be partitions of the same degree");
  static std::mutex mu_lock;
  static std::map<int, LaurentSeries> cache;
  LaurentSeries tau(VarSystem::make(0, 0));
  {
    std::lock_guard<std::mutex> lock(mu_lock);
    if (auto it = cache.find(d); it != cache.end()) tau = it->second;
  }
  if (tau.vars()->time_var_count() == 0) {
    auto vars = tau_vars(4 * d * d + 8, d, 2 * d, d);
    TauSpec spec{0, g_pipeline(GModel::Hurwitz), tau_times(vars, "T", d), tau_times(vars, "Tb", d)};
    tau = tau_eval(spec, vars);
    std::lock_guard<std::mutex> lock(mu_lock);
    cache.emplace(d, tau);
  }
  Monomial pattern;
  pattern.Q = d;
  for (int part : mu) ++pattern.t[part - 1];
  for (int part : nu) ++pattern.t[d + part - 1];
  std::vector<LaurentSeries::Term> terms;
  auto vars = VarSystem::make(tau.vars()->x_order, 0);
  for (const auto& [m, c] : tau.terms()) {
    Monomial rest = m;
    rest.x = 0;
    if (rest == pattern) terms.emplace_back(Monomial::x_pow(m.x), c);
  }
  Precision p;
  p.x = tau.precision().x;
  return LaurentSeries::from_terms(vars, std::move(terms), p);
}

Rational hurwitz_from_tau(const HurwitzQuery& q, const HurwitzCalibration& c) {
  const int d = q.degree();
  const LaurentSeries coeff = hurwitz_tau_coefficient(q.mu, q.nu);
  if (!coeff.is_exact()) throw PrecisionUnderflow("tau coefficient is not exact");
  Rational sum = 0;
  for (const auto& [m, a] : coeff.terms()) {
    Rational beta_coeff(c.beta_sign * (m.x - 2 * c.shift * d), 2 * c.scale);
    beta_coeff.canonicalize();
    Rational pw = 1;
    for (int i = 0; i < q.b; ++i) pw *= beta_coeff;
    sum += a * pw;
  }
  Rational r = sum / Rational(factorial(q.b));
  if (c.b_factorial) r *= Rational(factorial(q.b));
  if (c.divide_parts) {
    long long prod = 1;
    for (int part : q.mu) prod *= part;
    for (int part : q.nu) prod *= part;
    r /= Rational(static_cast<long>(prod));
  }
  if (c.sign_ell && q.nu.size() % 2 == 1) r = -r;
  r.canonicalize();
  return r;
}

// ---------------------------------------------------------------- calibration

nlohmann::json to_json(const HurwitzCalibration& c) {
  return {{"shift", c.shift},
          {"scale", c.scale},
          {"beta_sign", c.beta_sign},
          {"b_factorial", c.b_factorial},
          {"divide_parts", c.divide_parts},
          {"sign_ell", c.sign_ell},
          {"fitted_dmax", c.fitted_dmax},
          {"fitted_bmax", c.fitted_bmax},
          {"log", c.log}};
}

HurwitzCalibration calibration_from_json(const nlohmann::json& j) {
  HurwitzCalibration c;
  c.shift = j.at("shift").get<int>();
  c.scale = j.at("scale").get<int>();
  c.beta_sign = j.at("beta_sign").get<int>();
  c.b_factorial = j.at("b_factorial").get<bool>();
  c.divide_parts = j.at("divide_parts").get<bool>();
  c.sign_ell = j.at("sign_ell").get<bool>();
  c.fitted_dmax = j.value("fitted_dmax", 0);
  c.fitted_bmax = j.value("fitted_bmax", 0);
  if (j.contains("log")) c.log = j.at("log").get<std::vector<std::string>>();
  return c;
}

HurwitzCalibration load_calibration(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read calibration record " + path);
  return calibration_from_json(nlohmann::json::parse(in));
}

std::string default_calibration_path() { return std::string(QTODA_DATA_DIR) + "/hurwitz_calibration.json"; }

HurwitzCalibration calibrate_conventions(int dmax, int bmax) {
  if (dmax < 1) throw std::invalid_argument("calibration needs dmax >= 1");
  std::vector<std::pair<HurwitzQuery, Rational>> data;
  for (int d = 1; d <= dmax; ++d)
    for (const auto& mu : partitions_of(d))
      for (const auto& nu : partitions_of(d))
        for (int b = 0; b <= bmax; ++b) {
          HurwitzQuery q{mu, nu, b};
          data.emplace_back(q, hurwitz_bruteforce(q));
        }
  std::vector<HurwitzCalibration> fits;
  std::vector<std::string> log;
  log.push_back("fit data: " + std::to_string(data.size()) + " queries, d <= " + std::to_string(dmax) +
                ", b <= " + std::to_string(bmax));
  for (int shift : {0, 1})
    for (int scale : {1, 2})
      for (int sign : {1, -1})
        for (bool bf : {false, true})
          for (bool dp : {false, true})
            for (bool se : {false, true}) {
              HurwitzCalibration c{shift, scale, sign, bf, dp, se, dmax, bmax, {}};
              int misses = 0;
              std::string first;
              for (const auto& [q, h] : data) {
                if (hurwitz_from_tau(q, c) != h) {
                  if (misses++ == 0) {
                    first = "mu=" + format_partition(q.mu) + " nu=" + format_partition(q.nu) +
                            " b=" + std::to_string(q.b);
                  }
                }
              }
              std::string line = "shift=" + std::to_string(shift) + " scale=" + std::to_string(scale) +
                                 " beta_sign=" + std::to_string(sign) + " b_factorial=" + (bf ? "1" : "0") +
                                 " divide_parts=" + (dp ? "1" : "0") + " sign_ell=" + (se ? "1" : "0") +
                                 ": " + std::to_string(misses) + " mismatches";
              if (misses) line += " (first " + first + ")";
              log.push_back(line);
              if (misses == 0) fits.push_back(c);
            }
  if (fits.empty()) throw std::runtime_error("no convention reproduces the brute-force counts");
  if (fits.size() > 1) throw std::runtime_error("calibration data does not pin down a unique convention");
  HurwitzCalibration out = fits.front();
  log.push_back("selected the unique zero-residual convention");
  out.log = std::move(log);
  return out;
}

}  // namespace qtoda
