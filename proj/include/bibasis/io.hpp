// CSV import/export of lattice vectors and systems, and JSON reports.
//
// CSV layout: the first row describes the space as `kind,p,dim_or_level`
// (e.g. `Lp_dyadic,2,3`), then one row of coordinates per vector. Numbers use
// the shortest round-trip form with a '.' decimal point in every locale.
#ifndef BIBASIS_IO_HPP
#define BIBASIS_IO_HPP

#include "bibasis/checks.hpp"
#include "bibasis/constants.hpp"
#include "bibasis/systems.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace bibasis {

std::string_view tool_version() noexcept;

/// Shortest decimal that parses back to the same double; "inf", "-inf", "nan".
std::string format_number(double value);

void write_csv(std::ostream& os, const System& system);
void write_csv(std::ostream& os, const LVec& v);
/// Rows of +-1 integers, no header.
void write_csv(std::ostream& os, const SignMatrix& matrix);

/// Throws std::invalid_argument on malformed input.
System read_system_csv(std::istream& is, std::string name = "custom");
LVec read_lvec_csv(std::istream& is);

nlohmann::ordered_json to_json(const ConstantEstimate& estimate);
nlohmann::ordered_json to_json(const CheckOutcome& outcome);

/// {tool_version, invocation, outcomes, estimates}.
nlohmann::ordered_json make_report(const std::string& invocation,
                                   const std::vector<CheckOutcome>& outcomes,
                                   const std::vector<ConstantEstimate>& estimates);

} // namespace bibasis

#endif // BIBASIS_IO_HPP
