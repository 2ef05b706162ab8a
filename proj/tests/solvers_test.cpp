#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "reference_data.hpp"
#include "oracles.hpp"
#include "polyreg/errors.hpp"
#include "polyreg/instance_generator.hpp"
#include "polyreg/solvers.hpp"

namespace polyreg {
namespace {

using testdata::epistasis_model;
using testdata::reference_markers;
using testdata::reference_phenotype;

Eigen::VectorXd coef_vector(const FitResult& r) {
    return Eigen::Map<const Eigen::VectorXd>(r.coefficients.values().data(),
                                             static_cast<Eigen::Index>(r.coefficients.values().size()));
}

DesignMatrix reference_design(bool centered) {
    const auto m = reference_markers();
    return build_design_matrix(centered ? apply_translation(m, column_mean_translation(m)) : m,
                               epistasis_model());
}

void expect_coefs(const FitResult& r, std::initializer_list<double> expected, double tol) {
    ASSERT_EQ(r.coefficients.values().size(), expected.size());
    std::size_t i = 0;
    for (double e : expected) EXPECT_NEAR(r.coefficients[i++], e, tol) << "coefficient " << i - 1;
}

TEST(PenaltySpecTest, Validation) {
    EXPECT_THROW(PenaltySpec({{Norm::L2, 1.0}, {Norm::L1, 1.0}}), ConfigError);
    EXPECT_THROW(PenaltySpec({{Norm::L2, -1.0}}), ConfigError);
    EXPECT_THROW(PenaltySpec({{Norm::L1, NAN}}), ConfigError);
    EXPECT_NO_THROW(PenaltySpec({{Norm::None, -5.0}, {Norm::L1, 0.0}}));
    const auto spec = PenaltySpec::by_degree(epistasis_model(), Norm::L2, {{1, 1.0}, {2, 3.0}});
    EXPECT_EQ(spec.kind(), Norm::L2);
    EXPECT_EQ(spec[0].norm, Norm::None);
    EXPECT_EQ(spec[3].weight, 3.0);
    EXPECT_EQ(PenaltySpec::none(epistasis_model()).kind(), Norm::None);
}

TEST(FitOlsTest, ReferenceNonCentered) {
    const auto r = fit_ols(reference_design(false), reference_phenotype());
    expect_coefs(r, {1.83, -0.97, 1.88, -1.14}, 0.01);
    EXPECT_EQ(r.objective, r.ssr);
}

TEST(FitOlsTest, ReferenceCentered) {
    expect_coefs(fit_ols(reference_design(true), reference_phenotype()), {0.33, -2.11, 0.06, -1.14}, 0.01);
}

TEST(FitOlsTest, ZeroResponse) {
    const auto r = fit_ols(reference_design(false), Eigen::VectorXd::Zero(5));
    for (double c : r.coefficients.values()) EXPECT_EQ(c, 0.0);
    EXPECT_EQ(r.ssr, 0.0);
}

TEST(FitOlsTest, RankDeficient) {
    // Three individuals, four parameters.
    const auto m = reference_markers();
    const MarkerMatrix few(m.values().topRows(3));
    EXPECT_THROW(fit_ols(build_design_matrix(few, epistasis_model()), Eigen::VectorXd::Ones(3)),
                 RankDeficient);
    // Identical columns.
    Eigen::MatrixXd dup(5, 2);
    dup.col(0) = m.values().col(0);
    dup.col(1) = m.values().col(0);
    EXPECT_THROW(fit_ols(build_design_matrix(MarkerMatrix(dup), auto_degree_model(2, 1)),
                         reference_phenotype()),
                 RankDeficient);
    EXPECT_THROW(fit_ols(reference_design(false), Eigen::VectorXd::Zero(4)), DimensionMismatch);
}

TEST(FitOlsTest, MatchesQrOracleAndResidualIsOrthogonal) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const auto model = random_complete_model(3, 1 + trial % 3, 2, rng);
        const auto inst = draw_instance(model, trial % 2 ? Coding::Discrete : Coding::Continuous, rng);
        const auto x = build_design_matrix(inst.markers, model);
        if (gram_condition_estimate(x) > 1e10) continue;
        const auto r = fit_ols(x, inst.y);
        const Eigen::VectorXd ref = oracle::least_squares_qr(x.values, inst.y);
        EXPECT_LE((coef_vector(r) - ref).lpNorm<Eigen::Infinity>(),
                  1e-8 * std::max(1.0, ref.lpNorm<Eigen::Infinity>()));
        EXPECT_LE((x.values.transpose() * r.residuals).lpNorm<Eigen::Infinity>(),
                  1e-8 * inst.y.norm());
        EXPECT_NEAR(r.ssr, r.residuals.squaredNorm(), 1e-12 * (1.0 + r.ssr));
        EXPECT_LE((r.residuals - (inst.y - r.fitted)).lpNorm<Eigen::Infinity>(), 1e-12);
    }
}

TEST(FitRidgeTest, ERRBLUP1NonCentered) {
    const auto pen = PenaltySpec::by_degree(epistasis_model(), Norm::L2, {{1, 1.0}, {2, 1.0}});
    expect_coefs(fit_ridge_weighted(reference_design(false), reference_phenotype(), pen),
                 {1.81, -0.89, 0.71, -0.48}, 0.01);
}

TEST(FitRidgeTest, ERRBLUP2Centered) {
    const auto pen = PenaltySpec::by_degree(epistasis_model(), Norm::L2, {{1, 0.0}, {2, 1.0}});
    expect_coefs(fit_ridge_weighted(reference_design(true), reference_phenotype(), pen),
                 {0.33, -2.11, 0.11, -0.57}, 0.01);
}

TEST(FitRidgeTest, ZeroWeightsEqualOls) {
    const auto pen = PenaltySpec::by_degree(epistasis_model(), Norm::L2, {{0, 0.0}, {1, 0.0}, {2, 0.0}});
    for (bool centered : {false, true}) {
        const auto x = reference_design(centered);
        const Eigen::VectorXd a = coef_vector(fit_ridge_weighted(x, reference_phenotype(), pen));
        const Eigen::VectorXd b = coef_vector(fit_ols(x, reference_phenotype()));
        EXPECT_LE((a - b).lpNorm<Eigen::Infinity>(), 1e-10 * b.lpNorm<Eigen::Infinity>());
    }
}

TEST(FitRidgeTest, RejectsL1Spec) {
    const auto pen = PenaltySpec::by_degree(epistasis_model(), Norm::L1, {{1, 1.0}});
    EXPECT_THROW(fit_ridge_weighted(reference_design(false), reference_phenotype(), pen), ConfigError);
    EXPECT_THROW(fit(reference_design(false), reference_phenotype(), Method::Ols,
                     PenaltySpec::by_degree(epistasis_model(), Norm::L2, {{1, 1.0}})),
                 ConfigError);
}

TEST(FitRidgeTest, RandomizedOptimalityProperties) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> w(0.0, 5.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto model = random_complete_model(1 + trial % 4, 1 + trial % 3, 3, rng);
        const auto inst = draw_instance(model, trial % 2 ? Coding::Discrete : Coding::Continuous, rng);
        const auto x = build_design_matrix(inst.markers, model);
        std::vector<PenaltyEntry> entries(model.size());
        for (std::size_t i = 1; i < model.size(); ++i) entries[i] = {Norm::L2, w(rng)};
        const PenaltySpec pen(entries);
        if (gram_condition_estimate(x, pen) > 1e10) continue;

        const auto r = fit_ridge_weighted(x, inst.y, pen);
        const Eigen::VectorXd theta = coef_vector(r);
        Eigen::VectorXd d(static_cast<Eigen::Index>(model.size()));
        for (std::size_t i = 0; i < model.size(); ++i) d(static_cast<Eigen::Index>(i)) = entries[i].effective_weight();

        // Normal-equation residual.
        const Eigen::VectorXd xty = x.values.transpose() * inst.y;
        const Eigen::MatrixXd lhs = x.values.transpose() * x.values + Eigen::MatrixXd(d.asDiagonal());
        EXPECT_LE((lhs * theta - xty).lpNorm<Eigen::Infinity>(), 1e-8 * xty.lpNorm<Eigen::Infinity>());

        // Independent route: QR on the augmented least-squares system.
        const Eigen::VectorXd ref = oracle::ridge_augmented_qr(x.values, inst.y, d);
        EXPECT_LE((theta - ref).lpNorm<Eigen::Infinity>(), 1e-7 * std::max(1.0, ref.lpNorm<Eigen::Infinity>()));

        // Objective is ssr plus penalty, and no +-1e-4 coordinate move lowers it.
        auto objective = [&](const Eigen::VectorXd& t) {
            return (inst.y - x.values * t).squaredNorm() + (d.array() * t.array().square()).sum();
        };
        EXPECT_NEAR(r.objective, objective(theta), 1e-10 * (1.0 + r.objective));
        for (Eigen::Index m = 0; m < theta.size(); ++m) {
            for (double h : {1e-4, -1e-4}) {
                Eigen::VectorXd t = theta;
                t(m) += h;
                EXPECT_GE(objective(t), r.objective - 1e-12 * (1.0 + r.objective));
            }
        }
    }
}

TEST(FitRidgeTest, LargerScaleNeverGrowsWeightedNorm) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        const auto model = random_complete_model(2 + trial % 3, 1 + trial % 2, 2, rng);
        const auto inst = draw_instance(model, Coding::Continuous, rng);
        const auto x = build_design_matrix(inst.markers, model);
        if (gram_condition_estimate(x) > 1e10) continue;
        std::vector<double> base(model.size());
        std::uniform_real_distribution<double> w(0.01, 1.0);
        for (auto& b : base) b = w(rng);
        double previous = INFINITY;
        for (double scale = 1e-3; scale <= 1e4; scale *= 10) {
            std::vector<PenaltyEntry> entries(model.size());
            for (std::size_t i = 1; i < model.size(); ++i) entries[i] = {Norm::L2, base[i] * scale};
            const auto theta = coef_vector(fit_ridge_weighted(x, inst.y, PenaltySpec(entries)));
            // The base-weighted norm is the one that must shrink.
            double norm = 0.0;
            for (std::size_t i = 1; i < model.size(); ++i) norm += base[i] * theta(static_cast<Eigen::Index>(i)) * theta(static_cast<Eigen::Index>(i));
            EXPECT_LE(norm, previous * (1.0 + 1e-10) + 1e-14);
            previous = norm;
        }
    }
}

TEST(FitLassoTest, ZeroPenaltyEqualsOls) {
    const auto pen = PenaltySpec::by_degree(epistasis_model(), Norm::L1, {{1, 0.0}, {2, 0.0}});
    for (bool centered : {false, true}) {
        const auto x = reference_design(centered);
        const auto r = fit_lasso_weighted(x, reference_phenotype(), pen);
        const Eigen::VectorXd ols = coef_vector(fit_ols(x, reference_phenotype()));
        EXPECT_LE((coef_vector(r) - ols).lpNorm<Eigen::Infinity>(), 1e-6 * ols.lpNorm<Eigen::Infinity>());
    }
}

TEST(FitLassoTest, HugePenaltyShrinksToMean) {
    const auto pen = PenaltySpec::by_degree(epistasis_model(), Norm::L1, {{1, 1e9}, {2, 1e9}});
    const auto r = fit_lasso_weighted(reference_design(false), reference_phenotype(), pen);
    EXPECT_NEAR(r.coefficients[0], reference_phenotype().mean(), 1e-12);
    for (std::size_t i = 1; i < 4; ++i) EXPECT_EQ(r.coefficients[i], 0.0);
}

TEST(FitLassoTest, AdditiveModelInvariantUnderCentering) {
    const auto model = auto_degree_model(2, 1);
    const auto pen = PenaltySpec::by_degree(model, Norm::L1, {{1, 1.0}});
    const auto m = reference_markers();
    const auto y = reference_phenotype();
    const auto x_nc = build_design_matrix(m, model);
    const auto x_c = build_design_matrix(apply_translation(m, column_mean_translation(m)), model);
    const auto nc = fit_lasso_weighted(x_nc, y, pen);
    const auto c = fit_lasso_weighted(x_c, y, pen);
    EXPECT_LE((nc.fitted - c.fitted).lpNorm<Eigen::Infinity>(), 1e-6);
    EXPECT_LE((coef_vector(nc) - coef_vector(lasso_oracle_small(x_nc, y, pen))).lpNorm<Eigen::Infinity>(), 1e-6);
    EXPECT_LE((coef_vector(c) - coef_vector(lasso_oracle_small(x_c, y, pen))).lpNorm<Eigen::Infinity>(), 1e-6);
    EXPECT_NEAR(nc.coefficients[1], c.coefficients[1], 1e-6);
    EXPECT_NEAR(nc.coefficients[2], c.coefficients[2], 1e-6);
}

TEST(FitLassoTest, KktHoldsOnRandomFits) {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> w(0.0, 6.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto model = random_complete_model(1 + trial % 4, 1 + trial % 3, 3, rng);
        const auto inst = draw_instance(model, trial % 2 ? Coding::Discrete : Coding::Continuous, rng);
        const auto x = build_design_matrix(inst.markers, model);
        if (gram_condition_estimate(x) > 1e8) continue;
        std::vector<PenaltyEntry> entries(model.size());
        for (std::size_t i = 0; i < model.size(); ++i) {
            if (model[i].total_degree() > 0) entries[i] = {Norm::L1, w(rng)};
        }
        const PenaltySpec pen(entries);
        const auto r = fit_lasso_weighted(x, inst.y, pen);
        EXPECT_LE(oracle::lasso_kkt_violation(x.values, inst.y, coef_vector(r), pen), 1e-8);
        EXPECT_GE(r.objective, r.ssr);
    }
}

TEST(FitLassoTest, ConvergesOnCorrelatedColumns) {
    // Cubic single-marker models: plain coordinate descent crawls here.
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> w(0.0, 4.0);
    int fitted = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const auto model = random_complete_model(1 + trial % 2, 3, 3, rng);
        const auto inst = draw_instance(model, Coding::Continuous, rng);
        const auto x = build_design_matrix(inst.markers, model);
        if (gram_condition_estimate(x) > 1e10) continue;
        std::vector<PenaltyEntry> entries(model.size());
        for (std::size_t i = 1; i < model.size(); ++i) entries[i] = {Norm::L1, trial % 3 ? w(rng) : 0.0};
        const PenaltySpec pen(entries);
        const auto r = fit_lasso_weighted(x, inst.y, pen);
        EXPECT_LE(oracle::lasso_kkt_violation(x.values, inst.y, coef_vector(r), pen), 1e-8);
        if (model.size() <= kLassoOracleMaxMonomials) {
            EXPECT_LE((coef_vector(r) - coef_vector(lasso_oracle_small(x, inst.y, pen))).lpNorm<Eigen::Infinity>(),
                      1e-6);
        }
        ++fitted;
    }
    EXPECT_GT(fitted, 30);
}

TEST(FitLassoTest, ErrorPaths) {
    const auto pen = PenaltySpec::by_degree(epistasis_model(), Norm::L1, {{1, 0.1}, {2, 0.1}});
    LassoOptions one_sweep;
    one_sweep.max_sweeps = 1;
    EXPECT_THROW(fit_lasso_weighted(reference_design(false), reference_phenotype(), pen, one_sweep),
                 NonConvergence);
    EXPECT_THROW(fit_lasso_weighted(reference_design(false), reference_phenotype(),
                                    PenaltySpec::by_degree(epistasis_model(), Norm::L2, {{1, 1.0}})),
                 ConfigError);
}

TEST(LassoOracleTest, OrthonormalColumnSoftThreshold) {
    std::mt19937_64 rng(61);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::VectorXd col(8), y(8);
        for (Eigen::Index i = 0; i < 8; ++i) {
            col(i) = normal(rng);
            y(i) = normal(rng);
        }
        col.normalize();
        const double lambda = std::abs(normal(rng)) * 2.0;
        const DesignMatrix x{PolynomialModel({Monomial::variable(0)}, 1), col};
        const PenaltySpec pen({{Norm::L1, lambda}});
        const double expected = oracle::soft_threshold_1d(col.dot(y), lambda);
        EXPECT_NEAR(lasso_oracle_small(x, y, pen).coefficients[0], expected, 1e-12);
        EXPECT_NEAR(fit_lasso_weighted(x, y, pen).coefficients[0], expected, 1e-10);
    }
}

TEST(LassoOracleTest, ZeroPenaltyIsOlsAndSizeLimit) {
    const auto pen = PenaltySpec::by_degree(epistasis_model(), Norm::L1, {{1, 0.0}, {2, 0.0}});
    const auto x = reference_design(false);
    EXPECT_LE((coef_vector(lasso_oracle_small(x, reference_phenotype(), pen)) -
               coef_vector(fit_ols(x, reference_phenotype())))
                  .lpNorm<Eigen::Infinity>(),
              1e-9);

    const auto big = auto_degree_model(3, 2);  // 7 monomials
    Eigen::MatrixXd m = Eigen::MatrixXd::Random(12, 3);
    EXPECT_THROW(lasso_oracle_small(build_design_matrix(MarkerMatrix(m), big), Eigen::VectorXd::Zero(12),
                                    PenaltySpec::none(big)),
                 TooLarge);
}

TEST(LassoOracleTest, AgreesWithCoordinateDescent) {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> w(0.0, 8.0), code(-1.0, 2.0);
    std::normal_distribution<double> normal;
    int compared = 0;
    for (int trial = 0; trial < 100; ++trial) {
        // n = 10, three monomials: intercept plus two markers.
        const auto model = auto_degree_model(2, 1);
        Eigen::MatrixXd m(10, 2);
        Eigen::VectorXd y(10);
        for (Eigen::Index i = 0; i < 10; ++i) {
            m(i, 0) = code(rng);
            m(i, 1) = code(rng);
            y(i) = normal(rng) + 2.0 * m(i, 0) - m(i, 1);
        }
        const auto x = build_design_matrix(MarkerMatrix(m), model);
        const bool free_intercept = trial % 2 == 0;
        const PenaltySpec pen({{free_intercept ? Norm::None : Norm::L1, w(rng)},
                               {Norm::L1, w(rng)},
                               {Norm::L1, w(rng)}});
        const auto cd = fit_lasso_weighted(x, y, pen);
        const auto exact = lasso_oracle_small(x, y, pen);
        EXPECT_LE((coef_vector(cd) - coef_vector(exact)).lpNorm<Eigen::Infinity>(), 1e-6) << trial;
        EXPECT_NEAR(cd.objective, exact.objective, 1e-9 * (1.0 + exact.objective));
        ++compared;
    }
    EXPECT_EQ(compared, 100);
}

TEST(PredictTest, ReferenceFittedValues) {
    const auto m = reference_markers();
    const auto ols = fit_ols(reference_design(false), reference_phenotype());
    const Eigen::VectorXd yhat = predict(ols.coefficients, m);
    const double expected[] = {-0.91, 2.34, -0.11, -0.51, 0.86};
    for (int i = 0; i < 5; ++i) EXPECT_NEAR(yhat(i), expected[i], 0.01);
    EXPECT_LE((yhat - ols.fitted).lpNorm<Eigen::Infinity>(), 1e-12);

    const auto centered = apply_translation(m, column_mean_translation(m));
    const auto pen = PenaltySpec::by_degree(epistasis_model(), Norm::L2, {{1, 0.0}, {2, 1.0}});
    const auto r2 = fit_ridge_weighted(reference_design(true), reference_phenotype(), pen);
    const Eigen::VectorXd yhat2 = predict(r2.coefficients, centered);
    const double expected2[] = {-0.63, 2.06, -0.40, -0.51, 1.15};
    for (int i = 0; i < 5; ++i) EXPECT_NEAR(yhat2(i), expected2[i], 0.01);
}

TEST(PredictTest, ZeroCoefficientsAndMismatch) {
    const PolynomialCoefficients zero(epistasis_model());
    EXPECT_EQ(predict(zero, reference_markers()), Eigen::VectorXd::Zero(5));
    EXPECT_THROW(predict(PolynomialCoefficients(auto_degree_model(3, 1)), reference_markers()),
                 DimensionMismatch);
}

}  // namespace
}  // namespace polyreg
