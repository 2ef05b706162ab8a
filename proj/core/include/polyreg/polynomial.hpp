#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polyreg/monomial.hpp"

namespace polyreg {

/// Canonically ordered, duplicate-free set of monomials over `num_variables`
/// marker columns. Defines the columns of a regression design.
class PolynomialModel {
public:
    /// Sorts `monomials` canonically. Throws ModelError on duplicates, on a
    /// variable index >= num_variables, or when num_variables == 0.
    PolynomialModel(std::vector<Monomial> monomials, VariableIndex num_variables);

    std::span<const Monomial> monomials() const noexcept { return monomials_; }
    std::size_t size() const noexcept { return monomials_.size(); }
    VariableIndex num_variables() const noexcept { return num_variables_; }
    const Monomial& operator[](std::size_t i) const noexcept { return monomials_[i]; }

    std::optional<std::size_t> index_of(const Monomial& m) const noexcept;
    bool contains(const Monomial& m) const noexcept { return index_of(m).has_value(); }
    bool has_intercept() const noexcept {
        return !monomials_.empty() && monomials_.front().is_intercept();
    }

    /// Highest total degree D over all monomials (0 for an empty model).
    Exponent max_total_degree() const noexcept;

    friend bool operator==(const PolynomialModel&, const PolynomialModel&) = default;

private:
    std::vector<Monomial> monomials_;
    VariableIndex num_variables_;
};

/// One real coefficient per monomial of a model.
class PolynomialCoefficients {
public:
    /// Throws DimensionMismatch when values.size() != model.size().
    PolynomialCoefficients(PolynomialModel model, std::vector<double> values);

    /// All-zero coefficients.
    explicit PolynomialCoefficients(PolynomialModel model);

    const PolynomialModel& model() const noexcept { return model_; }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    /// Coefficient of `m`, or 0 when `m` is not part of the model.
    double coefficient(const Monomial& m) const noexcept;

    friend bool operator==(const PolynomialCoefficients&, const PolynomialCoefficients&) = default;

private:
    PolynomialModel model_;
    std::vector<double> values_;
};

struct CompletenessResult {
    bool complete = true;
    /// Divisor monomials absent from the model, canonically ordered, no repeats.
    std::vector<Monomial> missing;
};

/// A model is complete when every divisor of each of its monomials is also
/// part of the model.
CompletenessResult completeness_check(const PolynomialModel& model);

/// Smallest complete model containing every monomial of `model`.
PolynomialModel complete_closure(const PolynomialModel& model);

/// Returns g with g(x) = f(x + shift) identically, by multinomial expansion
/// of each monomial. The monomials of g are those of f plus any divisor
/// receiving a nonzero contribution, so g's model is a subset of the closure
/// of f's model. Coefficients of monomials of the highest total degree are
/// copied unchanged from f.
///
/// Throws DimensionMismatch when shift.size() != num_variables.
PolynomialCoefficients translate_polynomial(const PolynomialCoefficients& f,
                                            std::span<const double> shift);

/// Sum over monomials of coefficient times product. Throws DimensionMismatch
/// when x.size() != num_variables.
double evaluate_polynomial(const PolynomialCoefficients& f, std::span<const double> x);

/// Complete model of all square-free monomials of total degree <= degree over
/// `num_variables` variables, intercept included. degree == 2 is the
/// first-order epistasis model.
PolynomialModel auto_degree_model(VariableIndex num_variables, Exponent degree);

/// Parses model text: monomials separated by newlines or ';', 1-based marker
/// indices joined by '*' with optional '^power'. The intercept is implicit;
/// the token `0` removes it and `const` states it explicitly. Blank entries
/// and '#' comments are ignored. Throws ModelError.
PolynomialModel parse_model(std::string_view text, VariableIndex num_variables);

/// Inverse of parse_model, entries joined by `separator`.
std::string format_model(const PolynomialModel& model, std::string_view separator = ";");

/// Parses polynomial text: terms separated by newlines or ';', each
/// `[coef:]monomial` with coefficient 1 when omitted. No implicit intercept.
/// Repeated monomials have their coefficients summed.
PolynomialCoefficients parse_polynomial(std::string_view text, VariableIndex num_variables);

/// Indices of the model's monomials by descending total degree, canonical
/// order within a degree.
std::vector<std::size_t> display_order(const PolynomialModel& model);

/// Human-readable sum in display_order, e.g. `1*x1*x2 + 2*x1 + 1*x2 + 2`,
/// with `digits` significant digits.
std::string format_polynomial(const PolynomialCoefficients& f, int digits = 10);

}  // namespace polyreg
