#pragma once

// File formats and the small text languages used by the command line.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "chaos/criterion.hpp"
#include "chaos/law.hpp"
#include "chaos/process.hpp"
#include "chaos/spectral.hpp"

namespace chaos::io {

using nlohmann::json;

/// Shortest round-trip decimal form ("%.17g").
std::string format_double(double x);

/// {"dim": n, "entries": [[...], ...]} or {"diag": [...]}.
SymmetricKernel kernel_from_json(const json& j);

/// CSV with header `index,eigenvalue`.
std::string spectrum_csv(const Spectrum& s);
json spectrum_json(const Spectrum& s, const SpectralProfile& profile);

/// CSV with header `r,value,flavor`.
std::string cumulants_csv(const CumulantVector& c);

struct SpectraSequence {
  std::vector<Spectrum> spectra;
  std::vector<double> sds;          // empty means all zero
  std::vector<std::string> labels;  // one per spectrum
};

/// Either a bare array of eigenvalue arrays, or
/// {"spectra": [[...], ...], "sds": [...], "labels": [...]}; an element may
/// also be a kernel object, in which case it is diagonalized.
SpectraSequence sequence_from_json(const json& j);

/// Target mini-language: gaussian[:sd=x], semicircular[:sd=x], chisq:r=k,
/// freepoisson:r=k, tetilla, or inline JSON {"mu0":..,"values":[..],
/// "mults":[..],"flavor":"classical"|"free"}.
LimitTarget parse_target(std::string_view text);

/// Law language: `mu0=x;eigs=a,b,c[;flavor=free]` (keys optional), or any
/// target expression, whose expanded spectrum is used.
SecondChaosLaw parse_law(std::string_view text);

json report_json(const CriterionReport& r);
/// `n,res_a,res_b,res_c_1..res_c_a`, one row per sequence element.
std::string residual_table_csv(const CriterionReport& r, const std::vector<std::string>& labels);

json study_json(const QvStudy& s);
/// `n,kappa2,kappa3,kappa4,kappa5,kappa6,res_a,res_b`.
std::string study_csv(const QvStudy& s);

/// Writes via a sibling temporary file and rename.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace chaos::io
