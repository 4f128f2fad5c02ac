#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dnl/fingerprint.hpp"

namespace dnl {

/// Positioning error statistics for one algorithm on one test set.
/// cdf68/cdf95 are square roots of the nearest-rank percentiles of the
/// ascending-sorted squared errors (index ceil(q*n) - 1).
struct ErrorReport {
    std::string algorithm;
    std::size_t n = 0;
    double mae = 0.0;    // meters
    double rmse = 0.0;   // meters
    double cdf68 = 0.0;  // meters
    double cdf95 = 0.0;  // meters
    std::vector<double> squared_errors;  // m², input order
};

/// (px - tx)² + (py - ty)²
double squared_error(const Position& pred, const Position& truth);

ErrorReport compute_report(std::span<const Position> preds, std::span<const Position> truths,
                           std::string name);

/// Writes report.md (one row per report, 2 decimal places) and cdf.csv
/// (algorithm, sorted error in meters, cumulative fraction) into `out_dir`.
void emit_comparison(const std::vector<ErrorReport>& reports,
                     const std::filesystem::path& out_dir);

}  // namespace dnl
