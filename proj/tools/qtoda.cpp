#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qtoda/crystal.hpp"
#include "qtoda/hurwitz.hpp"
#include "qtoda/qtorus.hpp"
#include "qtoda/tau.hpp"

using namespace qtoda;
using nlohmann::json;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kUnderflow = 3 };

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    size_t used = 0;
    const int v = std::stoi(item, &used);
    if (used != item.size()) throw std::invalid_argument("not an integer: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

json qtorus_grid(int x_order, int kmax, int mmax, int half_width) {
  auto vars = VarSystem::make(x_order, 0);
  json cases = json::array();
  int failed = 0;
  for (int k = -kmax; k <= kmax; ++k)
    for (int l = -kmax; l <= kmax; ++l)
      for (int m = -mmax; m <= mmax; ++m)
        for (int n = -mmax; n <= mmax; ++n) {
          auto r = check_qtorus_relation(vars, k, l, m, n, half_width);
          if (!r.pass) ++failed;
          cases.push_back(to_json(r));
        }
  return {{"identity", "quantum torus relations on a finite window"},
          {"config", {{"qorder", x_order}, {"kmax", kmax}, {"mmax", mmax}, {"window", half_width}}},
          {"pass", failed == 0},
          {"cases_checked", cases.size()},
          {"cases_failed", failed},
          {"cases", cases}};
}

struct Output {
  std::string path;
  void write(const json& j) const {
    const std::string text = j.dump(2) + "\n";
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
  }
};

int status_of(const json& report) { return report.at("pass").get<bool>() ? kPass : kFail; }

json all_reports(int x_order) {
  json reports = json::array();
  reports.push_back(qtorus_grid(std::max(x_order, 16), 3, 3, 12));
  CheckGrid g;
  g.x_order = x_order;
  g.kmax = 2;
  g.mmax = 2;
  g.sectors = {-2, -1, 0, 1, 2};
  g.wmax = 6;
  reports.push_back(to_json(check_bilinear_commutators(g)));
  reports.push_back(to_json(check_shift1(g)));
  reports.push_back(to_json(check_shift2(g)));
  TauConfig tc{x_order, 4, 2, 2};
  reports.push_back(to_json(check_main_identity(tc, {-1, 0, 1, 2})));
  reports.push_back(to_json(check_intertwining(GModel::Crystal, 2, 2, {0}, 4, x_order, 4)));
  TauConfig cc{x_order, 4, 3, 2};
  for (GModel m : {GModel::Crystal, GModel::Vertex, GModel::Hurwitz}) {
    reports.push_back(to_json(check_constraint(m, cc, {0})));
  }
  reports.push_back(to_json(check_difference_dependence(GModel::Crystal, cc, {0})));
  CrystalConfig crys;
  crys.x_order = x_order;
  crys.sectors = {-1, 0, 1, 2};
  reports.push_back(to_json(check_crystal_consistency(crys)));
  return reports;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum torus, fermionic Fock space and Toda tau function checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Output out;
  app.add_option("-o,--out", out.path, "write the JSON result to this file");

  int qorder = 16, Qorder = 4, tdegree = 2, kmax = 2, mmax = 2, wmax = 6, window = 12;
  std::string charges = "0";
  std::string model = "crystal";

  auto nonneg = CLI::NonNegativeNumber;

  auto* qt = app.add_subcommand("check-qtorus", "commutators of v^(k)_m on a finite window");
  int qt_kmax = 3, qt_mmax = 3;
  qt->add_option("--kmax", qt_kmax)->check(nonneg);
  qt->add_option("--mmax", qt_mmax)->check(nonneg);
  qt->add_option("--window", window, "half width of the index window")->check(CLI::PositiveNumber);
  qt->add_option("--qorder", qorder)->check(nonneg);

  std::vector<CLI::App*> grid_cmds;
  for (const char* name : {"check-bilinear", "check-shift1", "check-shift2"}) {
    auto* c = app.add_subcommand(name, std::string("operator identity grid: ") + name);
    c->add_option("--kmax", kmax)->check(nonneg);
    c->add_option("--mmax", mmax)->check(nonneg);
    c->add_option("--charge", charges, "comma separated charge sectors");
    c->add_option("--wmax", wmax)->check(nonneg);
    c->add_option("--qorder", qorder)->check(nonneg);
    grid_cmds.push_back(c);
  }

  auto* mi = app.add_subcommand("check-main-identity", "Z(Q,s,t) against the tau function");
  std::string mi_charges = "-1,0,1,2";
  int tau_qorder = 12;
  mi->add_option("--charge", mi_charges);
  mi->add_option("--qorder", tau_qorder)->check(nonneg);
  mi->add_option("--Qorder", Qorder)->check(nonneg);
  mi->add_option("--tdegree", tdegree)->check(nonneg);
  mi->add_option("--kmax", kmax)->check(nonneg);

  auto* it = app.add_subcommand("check-intertwining", "J_k g = g J_-k and the general V form");
  int it_wmax = 4;
  it->add_option("--model", model)->check(CLI::IsMember({"crystal", "vertex", "hurwitz", "broken"}));
  it->add_option("--kmax", kmax)->check(nonneg);
  it->add_option("--mmax", mmax)->check(nonneg);
  it->add_option("--charge", charges);
  it->add_option("--wmax", it_wmax)->check(nonneg);
  it->add_option("--qorder", tau_qorder)->check(nonneg);
  it->add_option("--Qorder", Qorder)->check(nonneg);

  auto* co = app.add_subcommand("check-constraint", "(d/dT_k + d/dTbar_k) tau = 0");
  int co_tdegree = 3;
  co->add_option("--model", model)->check(CLI::IsMember({"crystal", "vertex", "hurwitz", "broken"}));
  co->add_option("--charge", charges);
  co->add_option("--qorder", tau_qorder)->check(nonneg);
  co->add_option("--Qorder", Qorder)->check(nonneg);
  co->add_option("--tdegree", co_tdegree)->check(nonneg);
  co->add_option("--kmax", kmax)->check(nonneg);

  auto* ta = app.add_subcommand("tau", "tau(s,T,Tbar) as a series");
  int charge = 0;
  ta->add_option("--model", model)->check(CLI::IsMember({"crystal", "vertex", "hurwitz", "broken"}));
  ta->add_option("--charge", charge);
  ta->add_option("--qorder", tau_qorder)->check(nonneg);
  ta->add_option("--Qorder", Qorder)->check(nonneg);
  ta->add_option("--tdegree", tdegree)->check(nonneg);
  ta->add_option("--kmax", kmax)->check(nonneg);

  auto* cr = app.add_subcommand("crystal", "melting crystal partition function and its oracles");
  std::string oracle;
  int vmax = 5, cr_tdegree = 0;
  auto* cr_qorder = cr->add_option("--qorder", tau_qorder)->check(nonneg);
  auto* cr_Qorder = cr->add_option("--Qorder", Qorder)->check(nonneg);
  cr->add_option("--charge", charge);
  cr->add_option("--tdegree", cr_tdegree)->check(nonneg);
  cr->add_option("--oracle", oracle)->check(CLI::IsMember({"plane-partitions"}));
  cr->add_option("--vmax", vmax)->check(nonneg);

  auto* hu = app.add_subcommand("hurwitz", "double Hurwitz numbers");
  int d = 1, b = 0;
  std::string mu_text, nu_text, calib_path = default_calibration_path();
  bool use_oracle = false;
  hu->add_option("--d", d)->check(CLI::PositiveNumber);
  hu->add_option("--mu", mu_text, "comma separated parts");
  hu->add_option("--nu", nu_text, "comma separated parts");
  hu->add_option("--b", b)->check(nonneg);
  hu->add_flag("--oracle", use_oracle, "count in the symmetric group instead");
  hu->add_option("--calibration", calib_path);
  auto* cal = hu->add_subcommand("calibrate", "fit the convention constants on small degrees");
  int dmax = 2, bmax = 4;
  cal->add_option("--dmax", dmax)->check(CLI::PositiveNumber);
  cal->add_option("--bmax", bmax)->check(nonneg);

  auto* all = app.add_subcommand("check-all", "every identity on the default grids");
  int all_qorder = 12;
  all->add_option("--qorder", all_qorder)->check(nonneg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (qt->parsed()) {
      json r = qtorus_grid(qorder, qt_kmax, qt_mmax, window);
      out.write(r);
      return status_of(r);
    }
    for (auto* c : grid_cmds) {
      if (!c->parsed()) continue;
      CheckGrid g{qorder, kmax, mmax, parse_int_list(charges), wmax};
      const std::string name = c->get_name();
      IdentityReport r = name == "check-bilinear" ? check_bilinear_commutators(g)
                         : name == "check-shift1" ? check_shift1(g)
                                                  : check_shift2(g);
      out.write(to_json(r));
      return r.pass() ? kPass : kFail;
    }
    if (mi->parsed()) {
      auto r = check_main_identity(TauConfig{tau_qorder, Qorder, tdegree, kmax}, parse_int_list(mi_charges));
      out.write(to_json(r));
      return r.pass() ? kPass : kFail;
    }
    if (it->parsed()) {
      auto r = check_intertwining(parse_model(model), kmax, mmax, parse_int_list(charges), it_wmax, tau_qorder,
                                  Qorder);
      out.write(to_json(r));
      return r.pass() ? kPass : kFail;
    }
    if (co->parsed()) {
      TauConfig c{tau_qorder, Qorder, co_tdegree, kmax};
      auto sectors = parse_int_list(charges);
      auto r = check_constraint(parse_model(model), c, sectors);
      auto diff = check_difference_dependence(parse_model(model), c, sectors);
      json j = {{"constraint", to_json(r)}, {"difference_dependence", to_json(diff)},
                {"pass", r.pass() && diff.pass()}};
      out.write(j);
      return status_of(j);
    }
    if (ta->parsed()) {
      auto s = tau_series(parse_model(model), charge, tau_qorder, Qorder, tdegree, kmax);
      out.write({{"model", model},
                 {"charge", charge},
                 {"pipeline", g_pipeline(parse_model(model)).describe()},
                 {"tau", to_json(s)}});
      return kPass;
    }
    if (cr->parsed()) {
      if (!oracle.empty()) {
        // substituting Q = 1 needs every Q power up to vmax
        const int xo = cr_qorder->count() ? tau_qorder : 2 * vmax + 2;
        const int Qo = cr_Qorder->count() ? Qorder : vmax;
        auto counts = enumerate_plane_partitions(vmax);
        json series = json::array();
        bool match = true;
        const auto sub = counts_at_Q1(crystal_product(coupling_vars(xo, Qo, 0, 0)), vmax);
        for (int n = 0; n <= vmax; ++n) {
          series.push_back(sub[n].get_str());
          match = match && sub[n] == Rational(static_cast<long>(counts[n]));
        }
        json j = {{"oracle", oracle}, {"vmax", vmax}, {"counts", counts}, {"series_at_Q1", series}, {"pass", match}};
        out.write(j);
        return status_of(j);
      }
      auto vars = coupling_vars(tau_qorder, Qorder, cr_tdegree, cr_tdegree > 0 ? 1 : 0);
      std::vector<LaurentSeries> t;
      if (cr_tdegree > 0) t.push_back(LaurentSeries::time_var(vars, 0));
      CrystalConfig cc;
      cc.x_order = tau_qorder;
      cc.Q_order = Qorder;
      cc.D = cr_tdegree;
      cc.sectors = {charge};
      auto rep = check_crystal_consistency(cc);
      json j = {{"charge", charge},
                {"Z", to_json(melting_Z_operator(vars, charge, t))},
                {"consistency", to_json(rep)},
                {"pass", rep.pass()}};
      out.write(j);
      return status_of(j);
    }
    if (cal->parsed()) {
      auto c = calibrate_conventions(dmax, bmax);
      Output{out.path.empty() ? calib_path : out.path}.write(to_json(c));
      std::cerr << "calibration written to " << (out.path.empty() ? calib_path : out.path) << "\n";
      return kPass;
    }
    if (hu->parsed()) {
      HurwitzQuery q{parse_int_list(mu_text), parse_int_list(nu_text), b};
      if (weight(q.mu) != d || weight(q.nu) != d || !is_partition(q.mu) || !is_partition(q.nu)) {
        throw std::invalid_argument("--mu and --nu must be partitions of --d");
      }
      json j = {{"d", d}, {"mu", q.mu}, {"nu", q.nu}, {"b", b}};
      if (use_oracle) {
        j["source"] = "symmetric group count";
        j["value"] = hurwitz_bruteforce(q).get_str();
      } else {
        j["source"] = "tau function";
        j["value"] = hurwitz_from_tau(q, load_calibration(calib_path)).get_str();
      }
      out.write(j);
      return kPass;
    }
    if (all->parsed()) {
      json reports = all_reports(all_qorder);
      bool pass = true;
      json summary = json::array();
      for (const auto& r : reports) {
        pass = pass && r.at("pass").get<bool>();
        summary.push_back({{"identity", r.at("identity")}, {"pass", r.at("pass")}, {"cases_failed", r.at("cases_failed")}});
      }
      out.write({{"pass", pass}, {"summary", summary}, {"reports", reports}});
      return pass ? kPass : kFail;
    }
  } catch (const PrecisionUnderflow& e) {
    std::cerr << "precision underflow: " << e.what() << "\n";
    return kUnderflow;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
