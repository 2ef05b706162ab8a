#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "polyreg/config.hpp"
#include "polyreg/invariance.hpp"
#include "polyreg/report.hpp"

namespace polyreg {

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "POLYREG_OUTPUT_DIR";

struct CommandOutput {
    int exit_code = 0;
    std::string text;
    std::optional<ReportBundle> bundle;
};

/// Fits the configured model under the configured coding.
CommandOutput cmd_fit(const RunConfig& config);

/// Fits under the original and the translated coding and compares. Exit
/// code 1 when config.expect_invariant is set and the verdict is NOT_INVARIANT.
CommandOutput cmd_invariance(const RunConfig& config);

/// Completeness verdict and missing monomials of a model spec. The variable
/// count defaults to the largest index the spec mentions.
CommandOutput cmd_check_model(std::string_view spec, std::optional<VariableIndex> num_variables);

/// Runs the corollary suite. Exit code 1 when any scenario fails.
CommandOutput cmd_suite(const SuiteOptions& options);

/// Prints the translated polynomial g(x) = f(x + shift). `shift` must be
/// explicit (or none); the variable count defaults to the shift length.
CommandOutput cmd_expand(std::string_view polynomial, const TranslationSetting& shift,
                         std::optional<VariableIndex> num_variables);

/// `flag` if given, else $POLYREG_OUTPUT_DIR if set.
std::optional<std::filesystem::path> output_directory(const std::optional<std::string>& flag);

/// Writes report.txt and coefficients.csv into `dir`, creating it if needed.
void write_outputs(const ReportBundle& bundle, const std::filesystem::path& dir);

}  // namespace polyreg
