#pragma once

#include <random>

#include <Eigen/Dense>

#include "polyreg/marker_coding.hpp"
#include "polyreg/polynomial.hpp"

namespace polyreg {

enum class Coding { Discrete, Continuous };

/// Random regression instance for property sweeps.
struct RandomInstance {
    MarkerMatrix markers;
    Eigen::VectorXd y;
    TranslationVector shift;
    Coding coding;
};

/// Draws the marker matrix, response and translation for `model`.
///   n     uniform in [max(6, model.size() + 2), 20]
///   codes uniform on {0, 1, 2} (Discrete) or U(-1, 2) (Continuous)
///   shift U(-2, 2) per column
///   y     standard normal noise plus sum_m c_m X_m with c_m ~ N(0, 1)
RandomInstance draw_instance(const PolynomialModel& model, Coding coding, std::mt19937_64& rng);

/// Random complete model over `num_variables` variables with highest total
/// degree exactly `degree`: the closure of one or two random monomials of
/// that degree. With max_power_per_variable == 1 the monomials are square-free.
PolynomialModel random_complete_model(VariableIndex num_variables, Exponent degree,
                                      Exponent max_power_per_variable, std::mt19937_64& rng);

/// Random coefficients, each N(0, 1).
PolynomialCoefficients random_coefficients(const PolynomialModel& model, std::mt19937_64& rng);

}  // namespace polyreg
