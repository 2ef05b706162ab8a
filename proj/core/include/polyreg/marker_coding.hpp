#pragma once

#include <span>

#include <Eigen/Dense>

#include "polyreg/polynomial.hpp"

namespace polyreg {

/// n x p matrix of marker codes; rows are individuals, columns are loci.
/// Any finite real coding is allowed.
class MarkerMatrix {
public:
    /// Throws DimensionMismatch for an empty matrix and polyreg::Error on
    /// non-finite entries.
    explicit MarkerMatrix(Eigen::MatrixXd values);

    const Eigen::MatrixXd& values() const noexcept { return values_; }
    Eigen::Index rows() const noexcept { return values_.rows(); }
    Eigen::Index cols() const noexcept { return values_.cols(); }
    double operator()(Eigen::Index i, Eigen::Index j) const noexcept { return values_(i, j); }

    /// Row i as a contiguous vector.
    Eigen::VectorXd row(Eigen::Index i) const { return values_.row(i).transpose(); }

    friend bool operator==(const MarkerMatrix& a, const MarkerMatrix& b) {
        return a.values_ == b.values_;
    }

private:
    Eigen::MatrixXd values_;
};

/// Per-column shift P; the translated coding is M - 1 P^t.
class TranslationVector {
public:
    /// Throws polyreg::Error on non-finite entries.
    explicit TranslationVector(Eigen::VectorXd shifts);

    static TranslationVector zero(Eigen::Index p) {
        return TranslationVector(Eigen::VectorXd::Zero(p));
    }

    const Eigen::VectorXd& shifts() const noexcept { return shifts_; }
    Eigen::Index size() const noexcept { return shifts_.size(); }
    std::span<const double> span() const noexcept {
        return {shifts_.data(), static_cast<std::size_t>(shifts_.size())};
    }

    TranslationVector operator-() const { return TranslationVector(-shifts_); }

private:
    Eigen::VectorXd shifts_;
};

/// Regression design: one column per model monomial, in canonical order.
struct DesignMatrix {
    PolynomialModel model;
    Eigen::MatrixXd values;
};

/// Per-column arithmetic means; translating by them centers every column.
TranslationVector column_mean_translation(const MarkerMatrix& markers);

/// Elementwise M(i, j) - P(j). Throws DimensionMismatch when lengths differ.
MarkerMatrix apply_translation(const MarkerMatrix& markers, const TranslationVector& shift);

/// Column for monomial m at row i is prod_k M(i, k)^{d_k}; the intercept
/// column is all ones. Throws DimensionMismatch when the model's variable
/// count differs from the matrix's column count.
DesignMatrix build_design_matrix(const MarkerMatrix& markers, const PolynomialModel& model);

}  // namespace polyreg
