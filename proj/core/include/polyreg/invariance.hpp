#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "polyreg/marker_coding.hpp"
#include "polyreg/polynomial.hpp"
#include "polyreg/solvers.hpp"

namespace polyreg {

enum class Verdict { Invariant, NotInvariant };

std::string_view to_string(Verdict verdict) noexcept;

/// Analytic translation check of a single polynomial (no refitting).
struct Proposition1Report {
    PolynomialCoefficients translated;
    double ssr_original = 0.0;
    double ssr_translated = 0.0;
    /// |ssr_translated - ssr_original| / (1 + ssr_original)
    double ssr_relative_diff = 0.0;
    bool top_degree_bitwise_equal = false;
    bool passed = false;
};

/// Tolerance on the SSR relative difference in check_proposition1.
inline constexpr double kProposition1SsrTolerance = 1e-9;

/// Translates f by `shift` and compares the SSR of f on `markers` with the
/// SSR of the translated polynomial on the translated markers, and the
/// highest-degree coefficients bit for bit. Holds for any coefficients, not
/// only fitted ones. Throws DimensionMismatch.
Proposition1Report check_proposition1(const PolynomialCoefficients& f,
                                      const MarkerMatrix& markers,
                                      const TranslationVector& shift,
                                      const Eigen::VectorXd& y);

/// Paired fit under the original and the translated coding.
struct InvarianceReport {
    FitResult original;
    FitResult translated;
    /// Infinity norm of the difference of the fitted values.
    double max_pred_diff = 0.0;
    /// Largest |coefficient difference| over monomials of the highest total degree.
    double max_topdeg_coef_diff = 0.0;
    /// translated - original, per monomial in canonical order.
    std::vector<std::pair<Monomial, double>> per_coefficient_diffs;
    double ssr_original = 0.0;
    double ssr_translated = 0.0;
    /// Invariant iff max_pred_diff <= tolerance and max_topdeg_coef_diff <= tolerance.
    Verdict verdict = Verdict::NotInvariant;
    double tolerance = 0.0;
    /// Whether the model was complete; invariance claims require it.
    bool model_complete = false;
};

/// Fits `model` with the same method and penalty on `markers` and on
/// apply_translation(markers, shift). Solver errors propagate.
InvarianceReport run_invariance_experiment(const MarkerMatrix& markers, const Eigen::VectorXd& y,
                                           const PolynomialModel& model,
                                           const PenaltySpec& penalty,
                                           const TranslationVector& shift, Method method,
                                           double tolerance);

/// What a scenario of the corollary suite is expected to show.
enum class Expectation {
    /// Every trial invariant.
    Invariant,
    /// At least one trial with max_pred_diff above the witness threshold
    /// within the witness budget.
    Witness,
    /// Partial model: selected coefficients invariant on every trial, the
    /// others changing on at least one.
    PartialInvariance,
};

struct ScenarioResult {
    std::string id;
    std::string description;
    Expectation expectation = Expectation::Invariant;
    int trials = 0;
    /// Trials meeting the scenario's per-trial criterion (invariance for
    /// Invariant and PartialInvariance, witness for Witness).
    int passes = 0;
    /// Trials showing a change above the witness threshold.
    int witnesses = 0;
    /// 1-based index of the first witness trial, 0 when none was found.
    int first_witness = 0;
    /// Ill-conditioned draws that were rejected and redrawn.
    int redraws = 0;
    /// Trials aborted by a solver error.
    int errors = 0;
    std::string first_error;
    double worst_pred_diff = 0.0;
    double worst_topdeg_diff = 0.0;
    bool ok = false;
};

struct SuiteOptions {
    std::uint64_t seed = 0;
    int trials = 100;
    /// Relative tolerance for invariance verdicts.
    double tolerance = 1e-6;
    /// A trial is a non-invariance witness when max_pred_diff exceeds this.
    double witness_threshold = 1e-3;
    /// Witness scenarios must find one within this many trials.
    int witness_budget = 20;
    /// Largest admissible redraw share, redraws / (trials + redraws).
    double max_redraw_rate = 0.2;
    /// Worker threads; 0 uses the hardware concurrency. Results do not depend on it.
    unsigned threads = 0;
};

struct SuiteSummary {
    std::uint64_t seed = 0;
    int trials = 0;
    std::vector<ScenarioResult> scenarios;
    bool all_ok() const noexcept;
};

/// Randomized scenarios for the translation-invariance statements:
///   C1  OLS on complete models of degree 1..3             -> invariant
///   C2  ridge or LASSO penalizing only top-degree terms   -> invariant
///   C3  RRBLUP, degree 1, intercept unpenalized           -> invariant
///   C4  additive LASSO, intercept unpenalized             -> invariant
///   E3a ridge with a penalized intercept                  -> witness
///   E3b RRBLUP without an intercept                       -> witness
///   E3c LASSO penalizing degrees 1 and 2                  -> witness
///   R   OLS on {1, M1, M2, M3, M2*M3}: coefficients of M1 and M2*M3 invariant
///   X   OLS on the incomplete model {1, M1, M1*M2}        -> witness
/// Failures are reported in the summary, never thrown.
SuiteSummary corollary_suite(const SuiteOptions& options);

}  // namespace polyreg
