#include "polyreg/solvers.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "polyreg/errors.hpp"

namespace polyreg {

std::string_view to_string(Norm norm) noexcept {
    switch (norm) {
        case Norm::None: return "none";
        case Norm::L2: return "l2";
        case Norm::L1: return "l1";
    }
    return "?";
}

std::string_view to_string(Method method) noexcept {
    switch (method) {
        case Method::Ols: return "ols";
        case Method::Ridge: return "ridge";
        case Method::Lasso: return "lasso";
    }
    return "?";
}

PenaltySpec::PenaltySpec(std::vector<PenaltyEntry> entries) : entries_(std::move(entries)) {
    for (const auto& e : entries_) {
        if (e.norm == Norm::None) continue;
        if (!std::isfinite(e.weight) || e.weight < 0.0) {
            throw ConfigError("penalty weights must be finite and non-negative");
        }
        if (kind_ != Norm::None && kind_ != e.norm) {
            throw ConfigError("a penalty spec cannot mix L1 and L2 entries");
        }
        kind_ = e.norm;
    }
}

PenaltySpec PenaltySpec::none(const PolynomialModel& model) {
    return PenaltySpec(std::vector<PenaltyEntry>(model.size()));
}

PenaltySpec PenaltySpec::by_degree(const PolynomialModel& model, Norm norm,
                                   const std::map<Exponent, double>& weight_by_degree) {
    std::vector<PenaltyEntry> entries(model.size());
    for (std::size_t i = 0; i < model.size(); ++i) {
        if (auto it = weight_by_degree.find(model[i].total_degree());
            it != weight_by_degree.end()) {
            entries[i] = {norm, it->second};
        }
    }
    return PenaltySpec(std::move(entries));
}

double PenaltySpec::penalty_value(const Eigen::VectorXd& theta) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const double t = theta(static_cast<Eigen::Index>(i));
        switch (entries_[i].norm) {
            case Norm::None: break;
            case Norm::L2: sum += entries_[i].weight * t * t; break;
            case Norm::L1: sum += entries_[i].weight * std::abs(t); break;
        }
    }
    return sum;
}

namespace {

void check_shapes(const DesignMatrix& design, const Eigen::VectorXd& y,
                  const PenaltySpec* penalty) {
    if (design.values.rows() != y.size()) {
        throw DimensionMismatch("design has " + std::to_string(design.values.rows()) +
                                " rows, response has " + std::to_string(y.size()));
    }
    if (static_cast<std::size_t>(design.values.cols()) != design.model.size()) {
        throw DimensionMismatch("design matrix columns do not match its model");
    }
    if (penalty && penalty->size() != design.model.size()) {
        throw DimensionMismatch("penalty has " + std::to_string(penalty->size()) +
                                " entries, model has " + std::to_string(design.model.size()) +
                                " monomials");
    }
}

Eigen::VectorXd l2_diagonal(const PenaltySpec& penalty) {
    Eigen::VectorXd d(static_cast<Eigen::Index>(penalty.size()));
    for (std::size_t i = 0; i < penalty.size(); ++i) {
        d(static_cast<Eigen::Index>(i)) =
            penalty[i].norm == Norm::L2 ? penalty[i].weight : 0.0;
    }
    return d;
}

double condition_of(const Eigen::MatrixXd& gram, const Eigen::LLT<Eigen::MatrixXd>& llt) {
    if (gram.size() == 0) return 1.0;
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    const double rcond = llt.rcond();
    return rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
}

FitResult finish(const DesignMatrix& design, const Eigen::VectorXd& y, Eigen::VectorXd theta,
                 double penalty_term) {
    Eigen::VectorXd fitted = design.values * theta;
    Eigen::VectorXd residuals = y - fitted;
    const double ssr = residuals.squaredNorm();
    std::vector<double> values(theta.data(), theta.data() + theta.size());
    return FitResult{PolynomialCoefficients(design.model, std::move(values)),
                     std::move(fitted),
                     std::move(residuals),
                     ssr,
                     ssr + penalty_term,
                     0.0,
                     0};
}

FitResult solve_regularized(const DesignMatrix& design, const Eigen::VectorXd& y,
                            const PenaltySpec& penalty) {
    const Eigen::MatrixXd& x = design.values;
    Eigen::MatrixXd gram = x.transpose() * x;
    gram.diagonal() += l2_diagonal(penalty);
    const Eigen::VectorXd rhs = x.transpose() * y;

    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    const double cond = condition_of(gram, llt);
    if (!(cond <= kRankDeficientCondition)) {
        throw RankDeficient("Gram matrix is singular or ill-conditioned (condition estimate " +
                                std::to_string(cond) + "); the solution is not unique",
                            cond);
    }
    Eigen::VectorXd theta = llt.solve(rhs);
    // One step of iterative refinement.
    theta += llt.solve(rhs - gram * theta);

    FitResult result = finish(design, y, theta, penalty.penalty_value(theta));
    result.condition = cond;
    return result;
}

}  // namespace

double gram_condition_estimate(const DesignMatrix& design, const PenaltySpec& penalty) {
    Eigen::MatrixXd gram = design.values.transpose() * design.values;
    gram.diagonal() += l2_diagonal(penalty);
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    return condition_of(gram, llt);
}

double gram_condition_estimate(const DesignMatrix& design) {
    return gram_condition_estimate(design, PenaltySpec::none(design.model));
}

FitResult fit_ols(const DesignMatrix& design, const Eigen::VectorXd& y) {
    check_shapes(design, y, nullptr);
    return solve_regularized(design, y, PenaltySpec::none(design.model));
}

FitResult fit_ridge_weighted(const DesignMatrix& design, const Eigen::VectorXd& y,
                             const PenaltySpec& penalty) {
    check_shapes(design, y, &penalty);
    if (penalty.kind() == Norm::L1) throw ConfigError("ridge fit given an L1 penalty spec");
    return solve_regularized(design, y, penalty);
}

namespace {

double soft_threshold(double z, double t) noexcept {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

/// Worst violation of the coordinatewise optimality conditions.
double lasso_kkt_violation(const Eigen::MatrixXd& x, const Eigen::VectorXd& r,
                           const Eigen::VectorXd& theta, const PenaltySpec& penalty) {
    double worst = 0.0;
    for (Eigen::Index m = 0; m < x.cols(); ++m) {
        const double corr = x.col(m).dot(r);
        const auto& e = penalty[static_cast<std::size_t>(m)];
        double v;
        if (e.norm == Norm::None) {
            v = std::abs(corr);
        } else if (theta(m) != 0.0) {
            v = std::abs(2.0 * corr - e.weight * (theta(m) > 0 ? 1.0 : -1.0));
        } else {
            v = std::max(0.0, std::abs(2.0 * corr) - e.weight);
        }
        worst = std::max(worst, v);
    }
    return worst;
}

/// Exact minimizer for a fixed support and sign pattern, or nullopt when the
/// pattern is not optimal. Columns with sign 0 that are unpenalized stay free.
std::optional<Eigen::VectorXd> solve_sign_pattern(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                                  const PenaltySpec& penalty,
                                                  const std::vector<int>& sign, double kkt_tolerance) {
    std::vector<Eigen::Index> active;
    for (Eigen::Index m = 0; m < x.cols(); ++m) {
        if (penalty[static_cast<std::size_t>(m)].norm == Norm::None || sign[static_cast<std::size_t>(m)] != 0) {
            active.push_back(m);
        }
    }
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(x.cols());
    if (!active.empty()) {
        const auto na = static_cast<Eigen::Index>(active.size());
        Eigen::MatrixXd xa(x.rows(), na);
        Eigen::VectorXd rhs(na);
        for (Eigen::Index j = 0; j < na; ++j) {
            const Eigen::Index m = active[static_cast<std::size_t>(j)];
            xa.col(j) = x.col(m);
            const auto& e = penalty[static_cast<std::size_t>(m)];
            rhs(j) = x.col(m).dot(y) -
                     (e.norm == Norm::None ? 0.0 : 0.5 * e.weight * sign[static_cast<std::size_t>(m)]);
        }
        const Eigen::MatrixXd gram = xa.transpose() * xa;
        Eigen::LLT<Eigen::MatrixXd> llt(gram);
        if (!(condition_of(gram, llt) <= kRankDeficientCondition)) return std::nullopt;
        Eigen::VectorXd ta = llt.solve(rhs);
        ta += llt.solve(rhs - gram * ta);
        for (Eigen::Index j = 0; j < na; ++j) {
            const Eigen::Index m = active[static_cast<std::size_t>(j)];
            const int s = sign[static_cast<std::size_t>(m)];
            if (s != 0 && ta(j) * s <= 0.0) return std::nullopt;
            theta(m) = ta(j);
        }
    }
    const Eigen::VectorXd r = y - x * theta;
    if (lasso_kkt_violation(x, r, theta, penalty) > kkt_tolerance) return std::nullopt;
    return theta;
}

}  // namespace

FitResult fit_lasso_weighted(const DesignMatrix& design, const Eigen::VectorXd& y,
                             const PenaltySpec& penalty, const LassoOptions& options) {
    check_shapes(design, y, &penalty);
    if (penalty.kind() == Norm::L2) throw ConfigError("LASSO fit given an L2 penalty spec");

    const Eigen::MatrixXd& x = design.values;
    const Eigen::Index k = x.cols();

    std::vector<Eigen::Index> free_idx, pen_idx;
    for (Eigen::Index m = 0; m < k; ++m) {
        (penalty[static_cast<std::size_t>(m)].norm == Norm::None ? free_idx : pen_idx).push_back(m);
    }

    // Unpenalized block, refit exactly each sweep.
    const auto nf = static_cast<Eigen::Index>(free_idx.size());
    Eigen::MatrixXd xf(x.rows(), nf);
    for (Eigen::Index j = 0; j < nf; ++j) xf.col(j) = x.col(free_idx[j]);
    Eigen::MatrixXd free_gram = xf.transpose() * xf;
    Eigen::LLT<Eigen::MatrixXd> free_llt(free_gram);
    if (nf > 0) {
        const double cond = condition_of(free_gram, free_llt);
        if (!(cond <= kRankDeficientCondition)) {
            throw RankDeficient("unpenalized block of the LASSO design is singular", cond);
        }
    }

    const Eigen::VectorXd col_sq = x.colwise().squaredNorm().transpose();
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(k);
    Eigen::VectorXd r = y;

    // Once the support and signs stop changing, try the exact solution for
    // that pattern; slow terminal convergence on correlated columns is common.
    std::vector<int> sign(static_cast<std::size_t>(k), 0), last_tried;
    auto current_sign = [&] {
        for (Eigen::Index m : pen_idx) {
            sign[static_cast<std::size_t>(m)] = theta(m) > 0.0 ? 1 : (theta(m) < 0.0 ? -1 : 0);
        }
        return sign;
    };
    std::vector<int> previous;

    long sweep = 0;
    while (true) {
        if (sweep >= options.max_sweeps) {
            throw NonConvergence("coordinate descent did not converge within " +
                                 std::to_string(options.max_sweeps) + " sweeps");
        }
        ++sweep;
        double max_change = 0.0;

        if (nf > 0) {
            Eigen::VectorXd old(nf);
            for (Eigen::Index j = 0; j < nf; ++j) old(j) = theta(free_idx[j]);
            const Eigen::VectorXd partial = r + xf * old;
            Eigen::VectorXd fresh = free_llt.solve(xf.transpose() * partial);
            fresh += free_llt.solve(xf.transpose() * (partial - xf * fresh));
            r = partial - xf * fresh;
            for (Eigen::Index j = 0; j < nf; ++j) {
                max_change = std::max(max_change, std::abs(fresh(j) - old(j)));
                theta(free_idx[j]) = fresh(j);
            }
        }

        for (Eigen::Index m : pen_idx) {
            const double a = col_sq(m);
            const double old = theta(m);
            double fresh = 0.0;
            if (a > 0.0) {
                // argmin a t^2 - 2 z t + lambda |t|
                const double z = x.col(m).dot(r) + a * old;
                fresh = soft_threshold(z, 0.5 * penalty[static_cast<std::size_t>(m)].weight) / a;
            }
            if (fresh != old) {
                r -= (fresh - old) * x.col(m);
                theta(m) = fresh;
                max_change = std::max(max_change, std::abs(fresh - old));
            }
        }

        const std::vector<int> now = current_sign();
        if (now == previous && now != last_tried) {
            last_tried = now;
            if (auto exact = solve_sign_pattern(x, y, penalty, now, options.kkt_tolerance)) {
                theta = *exact;
                break;
            }
        }
        previous = now;

        if (max_change <= options.coefficient_tolerance) {
            // Recompute the residual from scratch to shed accumulated drift.
            r = y - x * theta;
            if (lasso_kkt_violation(x, r, theta, penalty) <= options.kkt_tolerance) break;
        }
    }

    FitResult result = finish(design, y, theta, penalty.penalty_value(theta));
    result.sweeps = sweep;
    return result;
}

FitResult lasso_oracle_small(const DesignMatrix& design, const Eigen::VectorXd& y,
                             const PenaltySpec& penalty) {
    check_shapes(design, y, &penalty);
    if (design.model.size() > kLassoOracleMaxMonomials) {
        throw TooLarge("exhaustive LASSO oracle handles at most " +
                       std::to_string(kLassoOracleMaxMonomials) + " monomials, got " +
                       std::to_string(design.model.size()));
    }
    if (penalty.kind() == Norm::L2) throw ConfigError("LASSO oracle given an L2 penalty spec");

    const Eigen::MatrixXd& x = design.values;
    const Eigen::Index k = x.cols();
    std::vector<Eigen::Index> pen_idx;
    for (Eigen::Index m = 0; m < k; ++m) {
        if (penalty[static_cast<std::size_t>(m)].norm == Norm::L1) pen_idx.push_back(m);
    }

    std::size_t patterns = 1;
    for (std::size_t i = 0; i < pen_idx.size(); ++i) patterns *= 3;

    bool found = false;
    double best_obj = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best = Eigen::VectorXd::Zero(k);
    std::vector<int> sign(static_cast<std::size_t>(k), 0);

    for (std::size_t code = 0; code < patterns; ++code) {
        // Base-3 digits map to signs -1, 0, +1.
        std::size_t c = code;
        for (Eigen::Index m : pen_idx) {
            sign[static_cast<std::size_t>(m)] = static_cast<int>(c % 3) - 1;
            c /= 3;
        }
        std::vector<Eigen::Index> active;
        for (Eigen::Index m = 0; m < k; ++m) {
            const bool penalized = penalty[static_cast<std::size_t>(m)].norm == Norm::L1;
            if (!penalized || sign[static_cast<std::size_t>(m)] != 0) active.push_back(m);
        }

        Eigen::VectorXd theta = Eigen::VectorXd::Zero(k);
        if (!active.empty()) {
            const auto na = static_cast<Eigen::Index>(active.size());
            Eigen::MatrixXd xa(x.rows(), na);
            Eigen::VectorXd shift(na);
            for (Eigen::Index j = 0; j < na; ++j) {
                xa.col(j) = x.col(active[j]);
                const auto& e = penalty[static_cast<std::size_t>(active[j])];
                shift(j) = e.norm == Norm::L1
                               ? 0.5 * e.weight * sign[static_cast<std::size_t>(active[j])]
                               : 0.0;
            }
            // Stationarity: X_a^t X_a theta_a = X_a^t y - lambda_a sign_a / 2
            Eigen::FullPivLU<Eigen::MatrixXd> lu(xa.transpose() * xa);
            if (!lu.isInvertible()) continue;
            const Eigen::VectorXd sol = lu.solve(xa.transpose() * y - shift);
            bool consistent = true;
            for (Eigen::Index j = 0; j < na; ++j) {
                const int s = sign[static_cast<std::size_t>(active[j])];
                if (penalty[static_cast<std::size_t>(active[j])].norm == Norm::L1 &&
                    !(s * sol(j) > 0.0)) {
                    consistent = false;
                    break;
                }
                theta(active[j]) = sol(j);
            }
            if (!consistent) continue;
        }
        const double obj = (y - x * theta).squaredNorm() + penalty.penalty_value(theta);
        if (obj < best_obj) {
            best_obj = obj;
            best = theta;
            found = true;
        }
    }
    if (!found) {
        throw RankDeficient("no sign pattern yields a nonsingular stationarity system",
                            std::numeric_limits<double>::infinity());
    }
    return finish(design, y, best, penalty.penalty_value(best));
}

FitResult fit(const DesignMatrix& design, const Eigen::VectorXd& y, Method method,
              const PenaltySpec& penalty) {
    switch (method) {
        case Method::Ols:
            if (penalty.kind() != Norm::None) {
                throw ConfigError("OLS does not accept " + std::string(to_string(penalty.kind())) +
                                  " penalties");
            }
            return fit_ols(design, y);
        case Method::Ridge: return fit_ridge_weighted(design, y, penalty);
        case Method::Lasso: return fit_lasso_weighted(design, y, penalty);
    }
    throw ConfigError("unknown method");
}

Eigen::VectorXd predict(const PolynomialCoefficients& f, const MarkerMatrix& markers) {
    if (static_cast<Eigen::Index>(f.model().num_variables()) != markers.cols()) {
        throw DimensionMismatch("model has " + std::to_string(f.model().num_variables()) +
                                " variables, marker matrix has " +
                                std::to_string(markers.cols()) + " columns");
    }
    Eigen::VectorXd out(markers.rows());
    for (Eigen::Index i = 0; i < markers.rows(); ++i) {
        const Eigen::VectorXd row = markers.row(i);
        out(i) = evaluate_polynomial(f, {row.data(), static_cast<std::size_t>(row.size())});
    }
    return out;
}

}  // namespace polyreg
