#include "solitonlab/report_io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>

#include <json.hpp>

namespace soliton {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string joined(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += fmt17(v[i]);
  }
  return s;
}

ordered_json report_to_json(const ResidualReport& r) {
  ordered_json j;
  j["identity"] = r.identity;
  j["model"] = r.model;
  ordered_json pt = ordered_json::array();
  for (int i = 0; i < r.point.dim; ++i) pt.push_back(r.point.x[i]);
  j["point"] = pt;
  j["sigma"] = r.sigma ? ordered_json(*r.sigma) : ordered_json(nullptr);
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["abs_residual"] = r.abs_residual;
  j["rel_residual"] = r.rel_residual;
  j["fd_step"] = r.fd_step ? ordered_json(*r.fd_step) : ordered_json(nullptr);
  j["order_estimate"] = r.order_estimate ? ordered_json(*r.order_estimate) : ordered_json(nullptr);
  j["status"] = r.status;
  j["tolerance"] = r.tolerance;
  j["passed"] = r.passed;
  return j;
}

ordered_json config_to_json(const ConfigEcho& config) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : config) j[k] = v;
  return j;
}

}  // namespace

std::string reports_to_json(const std::vector<ResidualReport>& reports, const ConfigEcho& config) {
  ordered_json doc;
  doc["format_version"] = kReportFormatVersion;
  doc["config"] = config_to_json(config);
  ordered_json arr = ordered_json::array();
  for (const auto& r : reports) arr.push_back(report_to_json(r));
  doc["reports"] = arr;
  return doc.dump(2) + "\n";
}

void write_reports_json(std::ostream& out, const std::vector<ResidualReport>& reports,
                        const ConfigEcho& config) {
  out << reports_to_json(reports, config);
}

void write_reports_csv(std::ostream& out, const std::vector<ResidualReport>& reports,
                       const ConfigEcho& config) {
  out << "# format_version = " << kReportFormatVersion << "\n";
  for (const auto& [k, v] : config) out << "# " << k << " = " << v << "\n";
  out << "identity,model,point_x,point_y,point_z,sigma,lhs,rhs,abs_residual,rel_residual,"
         "fd_step,order_estimate,status,tolerance,passed\n";
  for (const auto& r : reports) {
    out << r.identity << ',' << r.model << ',' << fmt17(r.point.x[0]) << ','
        << fmt17(r.point.x[1]) << ',' << (r.point.dim > 2 ? fmt17(r.point.x[2]) : "") << ','
        << (r.sigma ? fmt17(*r.sigma) : "") << ',' << joined(r.lhs) << ',' << joined(r.rhs)
        << ',' << fmt17(r.abs_residual) << ',' << fmt17(r.rel_residual) << ','
        << (r.fd_step ? fmt17(*r.fd_step) : "") << ','
        << (r.order_estimate ? fmt17(*r.order_estimate) : "") << ',' << '"' << r.status << '"'
        << ',' << fmt17(r.tolerance) << ',' << (r.passed ? "true" : "false") << "\n";
  }
}

std::string fits_to_json(const std::vector<DecayFit>& fits, const ConfigEcho& config) {
  ordered_json doc;
  doc["format_version"] = kReportFormatVersion;
  doc["config"] = config_to_json(config);
  ordered_json arr = ordered_json::array();
  for (const auto& f : fits) {
    ordered_json j;
    j["quantity"] = f.quantity;
    j["model"] = f.model;
    j["r_min"] = f.r_min;
    j["r_max"] = f.r_max;
    j["n"] = f.n;
    j["exponent"] = f.exponent;
    j["constant"] = f.constant;
    j["r2"] = f.r2;
    j["residual_spread"] = f.residual_spread;
    j["verdict"] = f.verdict;
    arr.push_back(j);
  }
  doc["fits"] = arr;
  return doc.dump(2) + "\n";
}

void write_fits_json(std::ostream& out, const std::vector<DecayFit>& fits,
                     const ConfigEcho& config) {
  out << fits_to_json(fits, config);
}

void write_fits_csv(std::ostream& out, const std::vector<DecayFit>& fits,
                    const ConfigEcho& config) {
  out << "# format_version = " << kReportFormatVersion << "\n";
  for (const auto& [k, v] : config) out << "# " << k << " = " << v << "\n";
  out << "quantity,model,r_min,r_max,n,exponent,constant,r2,residual_spread,verdict\n";
  for (const auto& f : fits) {
    out << f.quantity << ',' << f.model << ',' << fmt17(f.r_min) << ',' << fmt17(f.r_max) << ','
        << f.n << ',' << fmt17(f.exponent) << ',' << fmt17(f.constant) << ',' << fmt17(f.r2)
        << ',' << fmt17(f.residual_spread) << ",\"" << f.verdict << "\"\n";
  }
}

std::vector<ResidualReport> read_reports_json(std::istream& in) {
  ordered_json doc = ordered_json::parse(in);
  std::vector<ResidualReport> out;
  for (const auto& j : doc.at("reports")) {
    ResidualReport r;
    r.identity = j.at("identity").get<std::string>();
    r.model = j.at("model").get<std::string>();
    const auto& pt = j.at("point");
    r.point.dim = static_cast<int>(pt.size());
    for (std::size_t i = 0; i < pt.size() && i < 3; ++i) r.point.x[i] = pt[i].get<double>();
    if (!j.at("sigma").is_null()) r.sigma = j.at("sigma").get<double>();
    r.lhs = j.at("lhs").get<std::vector<double>>();
    r.rhs = j.at("rhs").get<std::vector<double>>();
    r.abs_residual = j.at("abs_residual").get<double>();
    r.rel_residual = j.at("rel_residual").get<double>();
    if (!j.at("fd_step").is_null()) r.fd_step = j.at("fd_step").get<double>();
    if (!j.at("order_estimate").is_null()) r.order_estimate = j.at("order_estimate").get<double>();
    r.status = j.at("status").get<std::string>();
    r.tolerance = j.at("tolerance").get<double>();
    r.passed = j.at("passed").get<bool>();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace soliton
