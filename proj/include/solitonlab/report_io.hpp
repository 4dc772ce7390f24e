#ifndef SOLITONLAB_REPORT_IO_HPP
#define SOLITONLAB_REPORT_IO_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "solitonlab/decay.hpp"
#include "solitonlab/identities.hpp"

namespace soliton {

inline constexpr const char* kReportFormatVersion = "1";

using ConfigEcho = std::map<std::string, std::string>;

// JSON document: { format_version, config, reports: [...] }.  Field names and
// order are stable; output is byte-reproducible for identical inputs.
std::string reports_to_json(const std::vector<ResidualReport>& reports, const ConfigEcho& config);
void write_reports_json(std::ostream& out, const std::vector<ResidualReport>& reports,
                        const ConfigEcho& config);
// Flat CSV with `# key = value` config header lines; reals use 17 significant
// digits; array-valued sides are ';'-joined inside the cell.
void write_reports_csv(std::ostream& out, const std::vector<ResidualReport>& reports,
                       const ConfigEcho& config);

std::string fits_to_json(const std::vector<DecayFit>& fits, const ConfigEcho& config);
void write_fits_json(std::ostream& out, const std::vector<DecayFit>& fits,
                     const ConfigEcho& config);
void write_fits_csv(std::ostream& out, const std::vector<DecayFit>& fits,
                    const ConfigEcho& config);

// Re-reads a JSON report document (the `reports` array) for re-rendering.
std::vector<ResidualReport> read_reports_json(std::istream& in);

}  // namespace soliton

#endif
