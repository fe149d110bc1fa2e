#ifndef STABCHECK_REPORT_IO_HPP
#define STABCHECK_REPORT_IO_HPP

#include <iosfwd>
#include <string>

#include "stabcheck/checker.hpp"

namespace stabcheck {

/// Serializes the report to its JSON schema (schema_version field, betti
/// tables keyed "H0".."Hk", condition results as objects). Deterministic:
/// serialize(parse(serialize(r))) == serialize(r).
std::string report_to_json(const Report& report);

/// Parses a report back from its JSON schema. Throws Error on malformed
/// input.
Report report_from_json(const std::string& text);

/// Stabilization-curve data: one `resolution,degree,betti,torsion` row per
/// resolution and degree, torsion factors joined by ';'.
void write_betti_csv(const Report& report, std::ostream& os);

}  // namespace stabcheck

#endif  // STABCHECK_REPORT_IO_HPP
