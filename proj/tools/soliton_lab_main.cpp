// Command-line front end: verification suites, decay measurements and
// profile integration, emitting machine-readable reports.
//
//   soliton-lab verify --model cigarxr --identities lemma1,prop3 --points 20
//   soliton-lab decay --model bryant --quantity R --rmin 100 --rmax 10000
//   soliton-lab decay --table-exponents --a 1 --b 1,1.5,2
//   soliton-lab bryant --rmax 1e4 --tol 1e-12 --out profile.csv
//   soliton-lab report --in reports.json --out-csv reports.csv
//
// Exit codes: 0 pass, 1 check failures, 2 usage/config errors.
// SOLITON_LAB_THREADS caps suite parallelism (0 = auto).

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "solitonlab/bryant.hpp"
#include "solitonlab/decay.hpp"
#include "solitonlab/identities.hpp"
#include "solitonlab/report_io.hpp"

using namespace soliton;

namespace {

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> split_csv_doubles(const std::string& text) {
  std::vector<double> out;
  for (const auto& tok : split_csv(text)) out.push_back(std::stod(tok));
  return out;
}

struct ModelSet {
  std::vector<ModelPtr> models;
};

ModelSet build_models(const std::string& spec, double bryant_rmax, double bryant_tol) {
  ModelSet set;
  std::vector<std::string> names = split_csv(spec);
  if (names.size() == 1 && names[0] == "all") names = {"cigar", "cigarxr", "bryant", "euclidean"};
  for (const auto& name : names) {
    if (name == "cigar") {
      set.models.push_back(cigar_model());
    } else if (name == "cigarxr") {
      set.models.push_back(cigar_cross_line_model());
    } else if (name == "euclidean") {
      set.models.push_back(euclidean_model(3));
    } else if (name == "euclidean2") {
      set.models.push_back(euclidean_model(2));
    } else if (name == "bryant") {
      auto profile = std::make_shared<BryantProfile>(bryant_integrate(bryant_rmax, bryant_tol));
      set.models.push_back(bryant_model(profile));
    } else {
      throw Error("unknown model '" + name +
                  "' (valid: cigar, cigarxr, bryant, euclidean, euclidean2, all)");
    }
  }
  if (set.models.empty()) throw Error("no models selected");
  return set;
}

void write_outputs(const std::string& json_path, const std::string& csv_path,
                   const std::vector<ResidualReport>& reports, const ConfigEcho& cfg) {
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    if (!out) throw Error("cannot open output file " + json_path);
    write_reports_json(out, reports, cfg);
  }
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) throw Error("cannot open output file " + csv_path);
    write_reports_csv(out, reports, cfg);
  }
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int cmd_verify(const std::string& models_spec, const std::string& identities_spec, int points,
               std::uint64_t seed, const std::string& sigmas_spec, double fd_step,
               bool richardson, double bryant_rmax, double bryant_tol,
               const std::vector<std::string>& tol_overrides, const std::string& out_json,
               const std::string& out_csv) {
  IdentitySuite suite;
  suite.identities = split_csv(identities_spec);
  expand_identities(suite.identities);  // validate early; throws with the id list
  suite.points = points;
  suite.seed = seed;
  suite.sigmas = split_csv_doubles(sigmas_spec);
  suite.fd.lhs_step = fd_step;
  suite.fd.rhs_step = fd_step;
  suite.fd.richardson = richardson;
  for (const auto& t : tol_overrides) {
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw Error("tolerance override must be id=value: " + t);
    suite.tolerances[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
  }

  const ModelSet set = build_models(models_spec, bryant_rmax, bryant_tol);
  const auto reports = run_suite(set.models, suite);

  ConfigEcho cfg = {{"command", "verify"},
                    {"model", models_spec},
                    {"identities", identities_spec},
                    {"points", std::to_string(points)},
                    {"seed", std::to_string(seed)},
                    {"sigmas", sigmas_spec},
                    {"fd_step", fmt(fd_step)},
                    {"richardson", richardson ? "true" : "false"},
                    {"bryant_rmax", fmt(bryant_rmax)},
                    {"bryant_tol", fmt(bryant_tol)}};
  write_outputs(out_json, out_csv, reports, cfg);

  std::size_t failed = 0, skipped = 0;
  for (const auto& r : reports) {
    if (r.skipped) ++skipped;
    if (!r.passed) ++failed;
  }
  std::cout << "verify: " << reports.size() << " rows, " << skipped << " skipped, " << failed
            << " failed\n";
  return failed == 0 ? 0 : 1;
}

int cmd_decay(const std::string& models_spec, const std::string& quantity_spec, double sigma,
              double rmin, double rmax, int n, bool table_exponents, double a_param,
              const std::string& b_spec, double bryant_rmax, double bryant_tol,
              double expect_exponent, double expect_tol, const std::string& out_json,
              const std::string& out_csv) {
  ConfigEcho cfg = {{"command", "decay"}};
  if (table_exponents) {
    // sigma-selection and exponent table over the (a, b) grid.
    cfg["a"] = fmt(a_param);
    cfg["b"] = b_spec;
    std::ostringstream table;
    table << "a,b,sigma,e1,e2,effective,asymptotically_round\n";
    for (double b : split_csv_doubles(b_spec)) {
      const TheoremParams params{a_param, b};
      const double sig = sigma_select(params);
      const MainExponents e = main_exponents(params);
      table << fmt(a_param) << ',' << fmt(b) << ',' << fmt(sig) << ',' << fmt(e.e1) << ','
            << fmt(e.e2) << ',' << fmt(e.effective) << ','
            << (e.asymptotically_round ? "true" : "false") << "\n";
    }
    if (!out_csv.empty()) {
      std::ofstream out(out_csv);
      out << "# command = decay\n" << table.str();
    }
    std::cout << table.str();
    return 0;
  }

  const ModelSet set = build_models(models_spec, bryant_rmax, bryant_tol);
  const DecayQuantity quantity = parse_decay_quantity(quantity_spec);
  std::vector<DecayFit> fits;
  for (const auto& m : set.models)
    fits.push_back(measure_decay(*m, quantity, sigma, rmin, rmax, n));

  cfg["model"] = models_spec;
  cfg["quantity"] = quantity_spec;
  cfg["sigma"] = fmt(sigma);
  cfg["rmin"] = fmt(rmin);
  cfg["rmax"] = fmt(rmax);
  cfg["n"] = std::to_string(n);
  if (!out_json.empty()) {
    std::ofstream out(out_json);
    write_fits_json(out, fits, cfg);
  }
  if (!out_csv.empty()) {
    std::ofstream out(out_csv);
    write_fits_csv(out, fits, cfg);
  }
  int rc = 0;
  for (const auto& f : fits) {
    std::cout << f.model << " " << f.quantity << ": exponent=" << fmt(f.exponent)
              << " constant=" << fmt(f.constant) << " r2=" << fmt(f.r2) << " verdict=" << f.verdict
              << "\n";
    if (std::isfinite(expect_exponent)) {
      if (f.verdict != "power-law" || std::abs(f.exponent - expect_exponent) > expect_tol) rc = 1;
    }
  }
  return rc;
}

int cmd_bryant(double rmax, double tol, const std::string& out_path) {
  const BryantProfile profile = bryant_integrate(rmax, tol);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw Error("cannot open output file " + out_path);
    write_profile_csv(profile, out);
  } else {
    write_profile_csv(profile, std::cout);
  }
  const BryantProfile::State far = profile.state_at(profile.grid_max());
  std::cerr << "bryant: nodes=" << profile.node_count()
            << " drift=" << fmt(profile.hamilton_drift()) << " defect=" << fmt(profile.ode_defect())
            << " R*r(rmax)=" << fmt(BryantProfile::scalar_curvature(far) * far.r)
            << " df(rmax)=" << fmt(far.df) << "\n";
  return 0;
}

int cmd_report(const std::string& in_path, const std::string& out_json,
               const std::string& out_csv) {
  std::ifstream in(in_path);
  if (!in) throw Error("cannot open input file " + in_path);
  const auto reports = read_reports_json(in);
  const ConfigEcho cfg = {{"command", "report"}, {"in", in_path}};
  write_outputs(out_json, out_csv, reports, cfg);
  std::cout << "report: re-rendered " << reports.size() << " rows\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for steady soliton level-set flow identities"};
  app.require_subcommand(1);
  app.set_config("--config", "", "plain key = value configuration file");

  // verify
  auto* verify = app.add_subcommand("verify", "run identity suites at seeded points");
  std::string v_models = "cigar,cigarxr";
  std::string v_ids = "all";
  int v_points = 20;
  std::uint64_t v_seed = 12345;
  std::string v_sigmas = "-1,0,2";
  double v_fd = 1e-3;
  bool v_rich = false;
  double v_brmax = 150.0, v_btol = 1e-12;
  std::vector<std::string> v_tols;
  std::string v_json, v_csv;
  verify->add_option("--model", v_models, "models (csv or 'all')");
  verify->add_option("--identities", v_ids, "identity ids or groups (csv or 'all')");
  verify->add_option("--points", v_points, "seeded points per model");
  verify->add_option("--seed", v_seed, "sampler seed");
  verify->add_option("--sigmas", v_sigmas, "sigma list for sigma-parameterized identities");
  verify->add_option("--fd-step", v_fd, "finite-difference step");
  verify->add_flag("--richardson", v_rich, "Richardson-extrapolate fd stencils");
  verify->add_option("--bryant-rmax", v_brmax, "bryant integration range");
  verify->add_option("--bryant-tol", v_btol, "bryant integration tolerance");
  verify->add_option("--tolerance", v_tols, "per-identity tolerance override id=value");
  verify->add_option("--out-json", v_json, "write the JSON report here");
  verify->add_option("--out-csv", v_csv, "write the CSV report here");

  // decay
  auto* decay = app.add_subcommand("decay", "radial decay fits and exponent tables");
  std::string d_models = "bryant";
  std::string d_quantity = "R";
  double d_sigma = 0.0, d_rmin = 100.0, d_rmax = 10000.0;
  int d_n = 32;
  bool d_table = false;
  double d_a = 1.0;
  std::string d_b = "1";
  double d_brmax = 1.1e4, d_btol = 1e-12;
  double d_expect = std::numeric_limits<double>::quiet_NaN(), d_expect_tol = 0.05;
  std::string d_json, d_csv;
  decay->add_option("--model", d_models, "models (csv)");
  decay->add_option("--quantity", d_quantity,
                    "R, L22_mag, grad_lambda_norm, hess_lambda_norm, U_sigma, H, grad_norm_sq");
  decay->add_option("--sigma", d_sigma, "sigma for U_sigma");
  decay->add_option("--rmin", d_rmin, "smallest radial distance");
  decay->add_option("--rmax", d_rmax, "largest radial distance");
  decay->add_option("--n", d_n, "sample count");
  decay->add_flag("--table-exponents", d_table, "emit the sigma/exponent table instead");
  decay->add_option("--a", d_a, "decay-bound parameter a");
  decay->add_option("--b", d_b, "decay-bound parameter b (csv for a table)");
  decay->add_option("--bryant-rmax", d_brmax, "bryant integration range");
  decay->add_option("--bryant-tol", d_btol, "bryant integration tolerance");
  decay->add_option("--expect-exponent", d_expect, "fail (exit 1) unless the fit matches");
  decay->add_option("--expect-tol", d_expect_tol, "tolerance for --expect-exponent");
  decay->add_option("--out-json", d_json, "write fits as JSON");
  decay->add_option("--out-csv", d_csv, "write fits as CSV");

  // bryant
  auto* bry = app.add_subcommand("bryant", "integrate the rotationally symmetric profile");
  double b_rmax = 1e4, b_tol = 1e-10;
  std::string b_out;
  bry->add_option("--rmax", b_rmax, "integration range");
  bry->add_option("--tol", b_tol, "local error tolerance");
  bry->add_option("--out", b_out, "profile CSV path (stdout when omitted)");

  // report
  auto* rep = app.add_subcommand("report", "re-render a JSON report");
  std::string r_in, r_json, r_csv;
  rep->add_option("--in", r_in, "input JSON report")->required();
  rep->add_option("--out-json", r_json, "re-rendered JSON path");
  rep->add_option("--out-csv", r_csv, "re-rendered CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // usage/config problems are exit 2
  }

  try {
    if (verify->parsed())
      return cmd_verify(v_models, v_ids, v_points, v_seed, v_sigmas, v_fd, v_rich, v_brmax,
                        v_btol, v_tols, v_json, v_csv);
    if (decay->parsed())
      return cmd_decay(d_models, d_quantity, d_sigma, d_rmin, d_rmax, d_n, d_table, d_a, d_b,
                       d_brmax, d_btol, d_expect, d_expect_tol, d_json, d_csv);
    if (bry->parsed()) {
      try {
        return cmd_bryant(b_rmax, b_tol, b_out);
      } catch (const IntegrationFailureError& e) {
        std::cerr << "error: " << e.what() << " (last valid r = " << e.last_valid_r << ")\n";
        return 1;
      }
    }
    if (rep->parsed()) return cmd_report(r_in, r_json, r_csv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
