#include "dnl/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "dnl/csv.hpp"
#include "dnl/errors.hpp"

namespace dnl {

double squared_error(const Position& pred, const Position& truth) {
    const double dx = pred.x - truth.x;
    const double dy = pred.y - truth.y;
    return dx * dx + dy * dy;
}

namespace {

std::size_t nearest_rank_index(double q, std::size_t n) {
    const double rank = std::ceil(q * static_cast<double>(n));
    const std::size_t idx = static_cast<std::size_t>(std::max(rank, 1.0));
    return std::min(idx, n) - 1;
}

}  // namespace

ErrorReport compute_report(std::span<const Position> preds, std::span<const Position> truths,
                           std::string name) {
    if (preds.size() != truths.size()) {
        throw ContractViolation("compute_report: " + std::to_string(preds.size()) +
                                " predictions vs " + std::to_string(truths.size()) + " truths");
    }
    if (preds.empty()) throw ContractViolation("compute_report: empty sample set");

    ErrorReport report;
    report.algorithm = std::move(name);
    report.n = preds.size();
    report.squared_errors.reserve(preds.size());

    double sum_sq = 0.0;
    double sum_abs = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const double e = squared_error(preds[i], truths[i]);
        report.squared_errors.push_back(e);
        sum_sq += e;
        sum_abs += std::sqrt(e);
    }
    const double n = static_cast<double>(report.n);
    report.mae = sum_abs / n;
    report.rmse = std::sqrt(sum_sq / n);

    std::vector<double> sorted = report.squared_errors;
    std::sort(sorted.begin(), sorted.end());
    report.cdf68 = std::sqrt(sorted[nearest_rank_index(0.68, report.n)]);
    report.cdf95 = std::sqrt(sorted[nearest_rank_index(0.95, report.n)]);
    return report;
}

void emit_comparison(const std::vector<ErrorReport>& reports,
                     const std::filesystem::path& out_dir) {
    if (reports.empty()) throw ContractViolation("emit_comparison: no reports");

    std::ofstream md(out_dir / "report.md");
    if (!md) throw IoError("cannot write " + (out_dir / "report.md").string());
    md << "| Algorithm | MAE | RMSE | 68%CDF | 95%CDF |\n";
    md << "|---|---|---|---|---|\n";
    char buf[160];
    for (const ErrorReport& r : reports) {
        std::snprintf(buf, sizeof(buf), "| %s | %.2f | %.2f | %.2f | %.2f |\n",
                      r.algorithm.c_str(), r.mae, r.rmse, r.cdf68, r.cdf95);
        md << buf;
    }
    md << "\nAll values in meters; n = " << reports.front().n << " test samples.\n";
    md << "Percentiles use the nearest-rank convention (no interpolation): the\n";
    md << "q-CDF error is the square root of the ceil(q*n)-th smallest squared error.\n";

    std::ofstream cdf(out_dir / "cdf.csv");
    if (!cdf) throw IoError("cannot write " + (out_dir / "cdf.csv").string());
    cdf << "algorithm,error_m,cum_fraction\n";
    for (const ErrorReport& r : reports) {
        std::vector<double> sorted = r.squared_errors;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            cdf << r.algorithm << ',' << csv::format_double(std::sqrt(sorted[i])) << ','
                << csv::format_double(static_cast<double>(i + 1) /
                                      static_cast<double>(sorted.size()))
                << '\n';
        }
    }
}

}  // namespace dnl
