#pragma once

#include <filesystem>
#include <istream>

#include <Eigen/Dense>

#include "polyreg/marker_coding.hpp"

namespace polyreg {

/// Numeric CSV: comma delimiter, '.' decimal separator, no quoting. Cells
/// may carry surrounding blanks; blank lines are skipped. When `header` is
/// set the first non-blank line is discarded. Every row must have the width
/// of the first. Errors name the 1-based line.
///
/// Throws ParseError (ragged row, non-numeric or non-finite cell, no data).
Eigen::MatrixXd parse_numeric_csv(std::istream& in, bool header);

/// Loads an n x p marker matrix, rows in file order.
MarkerMatrix load_markers(const std::filesystem::path& path, bool header = false);

/// Loads a single-column phenotype file.
Eigen::VectorXd load_phenotype(const std::filesystem::path& path, bool header = false);

}  // namespace polyreg
