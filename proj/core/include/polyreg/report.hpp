#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polyreg/config.hpp"
#include "polyreg/invariance.hpp"
#include "polyreg/solvers.hpp"

namespace polyreg {

/// Version string echoed into every report.
std::string_view version() noexcept;

/// A fit under one coding of the markers.
struct CodingFit {
    /// `original` or `translated`.
    std::string coding;
    Eigen::VectorXd shift;
    FitResult fit;
};

struct ReportBundle {
    std::string command;
    RunConfig config;
    PolynomialModel model;
    bool model_complete = false;
    std::vector<CodingFit> fits;
    std::optional<InvarianceReport> invariance;
};

/// Structured text, one `key=value` per line. Estimates, fitted values and
/// SSRs are rounded to config.decimals; invariance diagnostics are printed
/// in scientific notation. Contains no timestamps, so identical inputs give
/// byte-identical output.
std::string render_report(const ReportBundle& bundle);

/// CSV of full-precision coefficients: `monomial,<coding>...[,diff]`.
std::string render_coefficient_csv(const ReportBundle& bundle);

/// Reads the `config.*` lines of a rendered report back into a RunConfig.
/// Throws ConfigError on missing or malformed keys.
RunConfig parse_config_echo(std::string_view report_text);

/// Plain-text table of a corollary suite run.
std::string render_suite(const SuiteSummary& summary);

}  // namespace polyreg
