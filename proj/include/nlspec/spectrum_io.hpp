#pragma once

#include "nlspec/spectra.hpp"

#include <string>
#include <string_view>

namespace nlspec {

/// Spectrum CSV, version 1:
///
///   # nlspec-spectrum v1
///   # domain=disk(radius=1)
///   # bc=dirichlet
///   # mu=1
///   # lambda=1
///   # method=bessel
///   # grid=0
///   index,eigenvalue,multiplicity
///   1,1.1322144642800000e+01,2
///
/// Indices start at 1. Eigenvalues carry 17 significant digits, so the round trip is exact.
/// Files whose column header is "index,eigenvalue" take multiplicity 1 for every row.
inline constexpr std::string_view kSpectrumHeader = "# nlspec-spectrum v1";

std::string spectrum_to_csv(const Spectrum& spectrum);

/// Throws MalformedFile (with the offending line number) or SortedViolation.
Spectrum spectrum_from_csv(std::string_view text);

void spectrum_export(const Spectrum& spectrum, const std::string& path);
Spectrum spectrum_import(const std::string& path);

/// Writes to a sibling temporary file and renames it over path.
void write_file_atomic(const std::string& path, std::string_view content);
std::string read_file(const std::string& path);

}  // namespace nlspec
