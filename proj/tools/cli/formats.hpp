#pragma once

// Text formats for packings, weights, quotients and colorings. Each file
// starts with a version tag line; lines starting with '#' are metadata and
// are skipped on read. Reals are written with 17 significant digits,
// rationals as p/q.

#include <iosfwd>
#include <map>
#include <string>

#include "hypack/packing.hpp"
#include "hypack/shift.hpp"
#include "hypack/transport.hpp"

namespace hypack::cli {

inline constexpr const char* kVersion = "0.1.0";

using Params = std::map<std::string, std::string>;

/// "# hypack <version>", "# command: ...", "# seed: ...", "# params: k=v ...".
void write_metadata(std::ostream& os, const std::string& command, std::uint64_t seed, const Params& params);

std::string format_real(double v);
mpq_class parse_rational(const std::string& s);

void write_packing(std::ostream& os, const PeriodicPacking& p);
PeriodicPacking read_packing(std::istream& is);

void write_weights(std::ostream& os, const CylinderWeights& w);
CylinderWeights read_weights(std::istream& is);

void write_quotient(std::ostream& os, const QuotientSystem& q);
QuotientSystem read_quotient(std::istream& is);

/// The embedding is stored by reference: the default free group with the
/// recorded basepoint.
void write_coloring(std::ostream& os, const PackingColoring& c);
PackingColoring read_coloring(std::istream& is);

PeriodicPacking load_packing(const std::string& path);
CylinderWeights load_weights(const std::string& path);
QuotientSystem load_quotient(const std::string& path);
PackingColoring load_coloring(const std::string& path);

/// Opens `path` for writing; throws DomainError when that fails.
std::ofstream open_output(const std::string& path);

}  // namespace hypack::cli
