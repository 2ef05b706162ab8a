#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "polyreg/marker_coding.hpp"
#include "polyreg/polynomial.hpp"

namespace polyreg {

enum class Norm { None, L2, L1 };

std::string_view to_string(Norm norm) noexcept;

struct PenaltyEntry {
    Norm norm = Norm::None;
    double weight = 0.0;

    /// Weight actually applied; NONE entries contribute nothing.
    double effective_weight() const noexcept { return norm == Norm::None ? 0.0 : weight; }
    friend bool operator==(const PenaltyEntry&, const PenaltyEntry&) = default;
};

/// One (norm, weight) entry per model monomial, in the model's canonical
/// order. A spec is either all-L2-or-NONE or all-L1-or-NONE.
class PenaltySpec {
public:
    /// Throws ConfigError on negative or non-finite weights or when L1 and L2
    /// entries are mixed.
    explicit PenaltySpec(std::vector<PenaltyEntry> entries);

    /// Every entry NONE.
    static PenaltySpec none(const PolynomialModel& model);

    /// Monomials whose total degree appears in `weight_by_degree` get `norm`
    /// with that weight; all others are NONE. RRBLUP is
    /// by_degree(model, Norm::L2, {{1, lambda}}).
    static PenaltySpec by_degree(const PolynomialModel& model, Norm norm,
                                 const std::map<Exponent, double>& weight_by_degree);

    std::span<const PenaltyEntry> entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    const PenaltyEntry& operator[](std::size_t i) const noexcept { return entries_[i]; }

    /// L2 or L1 if any entry uses it, otherwise None.
    Norm kind() const noexcept { return kind_; }

    /// Sum of lambda_m theta_m^2 (L2) or lambda_m |theta_m| (L1).
    double penalty_value(const Eigen::VectorXd& theta) const;

    friend bool operator==(const PenaltySpec&, const PenaltySpec&) = default;

private:
    std::vector<PenaltyEntry> entries_;
    Norm kind_ = Norm::None;
};

struct FitResult {
    PolynomialCoefficients coefficients;
    Eigen::VectorXd fitted;
    Eigen::VectorXd residuals;
    double ssr = 0.0;
    /// ssr plus the penalty term.
    double objective = 0.0;
    /// Condition estimate of the factorized system (direct solvers only, 0 otherwise).
    double condition = 0.0;
    /// Coordinate-descent sweeps (LASSO only).
    long sweeps = 0;
};

/// Gram matrices whose condition estimate exceeds this are rejected.
inline constexpr double kRankDeficientCondition = 1e12;

/// 1-norm condition estimate of X^t X + diag(weights); infinity when the
/// matrix is not positive definite. Only L2 weights enter the diagonal.
double gram_condition_estimate(const DesignMatrix& design, const PenaltySpec& penalty);
double gram_condition_estimate(const DesignMatrix& design);

/// Least squares: solves (X^t X) theta = X^t y.
/// Throws RankDeficient when the condition estimate exceeds 1e12.
FitResult fit_ols(const DesignMatrix& design, const Eigen::VectorXd& y);

/// Weighted ridge with unpenalized slots: solves (X^t X + D) theta = X^t y,
/// D = diag(lambda_m) with 0 for NONE entries. The objective is
/// ||y - X theta||^2 + sum lambda_m theta_m^2, with no 1/2 or 1/n factors.
/// Throws ConfigError for an L1 spec and RankDeficient as fit_ols.
FitResult fit_ridge_weighted(const DesignMatrix& design, const Eigen::VectorXd& y,
                             const PenaltySpec& penalty);

struct LassoOptions {
    /// Converged once no coefficient moves more than this in a sweep...
    double coefficient_tolerance = 1e-10;
    /// ...and the worst coordinatewise KKT violation is below this.
    double kkt_tolerance = 1e-9;
    long max_sweeps = 100000;
};

/// Weighted LASSO, minimizing ||y - X theta||^2 + sum lambda_m |theta_m| by
/// cyclic coordinate descent from zero. NONE coordinates are refit jointly by
/// an exact least-squares step at the start of each sweep; penalized
/// coordinates are then soft-thresholded in canonical order.
///
/// Throws ConfigError for an L2 spec, RankDeficient when the unpenalized block
/// is singular and NonConvergence when the tolerances are not met within
/// max_sweeps.
FitResult fit_lasso_weighted(const DesignMatrix& design, const Eigen::VectorXd& y,
                             const PenaltySpec& penalty, const LassoOptions& options = {});

/// Largest number of monomials lasso_oracle_small accepts.
inline constexpr std::size_t kLassoOracleMaxMonomials = 6;

/// Exact LASSO minimizer by enumerating all 3^k sign patterns of the k L1
/// coordinates. Each pattern's stationarity system is solved in closed form;
/// sign-inconsistent and singular patterns are discarded and the feasible
/// candidate of least objective is returned.
///
/// Throws TooLarge beyond kLassoOracleMaxMonomials monomials.
FitResult lasso_oracle_small(const DesignMatrix& design, const Eigen::VectorXd& y,
                             const PenaltySpec& penalty);

enum class Method { Ols, Ridge, Lasso };

std::string_view to_string(Method method) noexcept;

/// Runs `method`. Throws ConfigError when the penalty norm does not suit the
/// method: OLS takes only NONE entries, ridge no L1 entries, LASSO no L2 entries.
FitResult fit(const DesignMatrix& design, const Eigen::VectorXd& y, Method method,
              const PenaltySpec& penalty);

/// y_hat(i) = f(M(i, .)). Throws DimensionMismatch.
Eigen::VectorXd predict(const PolynomialCoefficients& f, const MarkerMatrix& markers);

}  // namespace polyreg
