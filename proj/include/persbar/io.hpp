#pragma once

#include <iosfwd>
#include <string>

#include "persbar/path.hpp"
#include "persbar/persistence.hpp"

namespace persbar {

/// Shortest-roundtrip-safe decimal text for a double (17 significant digits).
std::string format_double(double v);

/// Path CSV: header `t,value`. The reader throws DomainError on a bad header,
/// malformed numbers or non-increasing times.
void write_path_csv(std::ostream& os, const SampledPath& f);
SampledPath read_path_csv(std::istream& is);
SampledPath read_path_csv_file(const std::string& filename);

/// Barcode CSV: header `birth,death,length`, rows in decreasing length.
void write_barcode_csv(std::ostream& os, const Barcode& bc);

/// Diagram CSV: header `b,d,convention`.
void write_diagram_csv(std::ostream& os, const Barcode& bc, Convention convention);

}  // namespace persbar
