#ifndef ISOFLUX_IO_HPP_
#define ISOFLUX_IO_HPP_

#include <cstdint>
#include <map>
#include <string>

#include "isoflux/axisym.hpp"
#include "isoflux/polyline.hpp"

namespace isoflux {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

/// Writes via a temp file in the same directory followed by a rename.
void atomic_write(const std::string& path, const std::string& content);

/// Flat `key=value` lines; '#' starts a comment; blank lines ignored.
std::map<std::string, std::string> parse_flat_config(const std::string& path);
std::map<std::string, std::string> parse_flat_config_text(const std::string& text);

/// FNV-1a 64-bit hash in hex; used as the config digest embedded in outputs.
std::string fnv1a_hex(const std::string& text);

/// Field export: `r,z,u,inside`, one row per node, row-major in z then r.
/// A leading '#' comment line carries the digest and seed when non-empty.
std::string axisym_field_csv(const AxisymField& field, const std::string& comment);

/// Curve CSV: header `x,y,z`, one vertex per row (meridian curves: `x,z`).
std::string curve_csv(const Polyline3& c, const std::string& comment);
std::string curve_csv(const MeridianCurve& c, const std::string& comment);
/// Sidecar `{closed, multiplicity}` for the curve CSV.
std::string curve_sidecar_json(const Polyline3& c);

/// Reads a curve CSV (with optional sidecar fields applied by the caller).
Polyline3 read_curve_csv(const std::string& path);

}  // namespace isoflux

#endif  // ISOFLUX_IO_HPP_
