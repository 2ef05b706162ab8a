#include "polyreg/invariance.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <functional>
#include <optional>
#include <thread>

#include "polyreg/errors.hpp"
#include "polyreg/instance_generator.hpp"

namespace polyreg {

std::string_view to_string(Verdict verdict) noexcept {
    return verdict == Verdict::Invariant ? "INVARIANT" : "NOT_INVARIANT";
}

Proposition1Report check_proposition1(const PolynomialCoefficients& f,
                                      const MarkerMatrix& markers,
                                      const TranslationVector& shift,
                                      const Eigen::VectorXd& y) {
    if (y.size() != markers.rows()) {
        throw DimensionMismatch("response has " + std::to_string(y.size()) +
                                " entries, marker matrix has " + std::to_string(markers.rows()) +
                                " rows");
    }
    PolynomialCoefficients g = translate_polynomial(f, shift.span());
    const MarkerMatrix shifted = apply_translation(markers, shift);

    const double ssr0 = (y - predict(f, markers)).squaredNorm();
    const double ssr1 = (y - predict(g, shifted)).squaredNorm();

    bool bitwise = true;
    const Exponent top = f.model().max_total_degree();
    for (std::size_t i = 0; i < f.model().size(); ++i) {
        const Monomial& m = f.model()[i];
        if (m.total_degree() != top) continue;
        const auto j = g.model().index_of(m);
        if (!j || std::bit_cast<std::uint64_t>(g[*j]) != std::bit_cast<std::uint64_t>(f[i])) {
            bitwise = false;
        }
    }

    Proposition1Report report{std::move(g), ssr0, ssr1, std::abs(ssr1 - ssr0) / (1.0 + ssr0),
                              bitwise, false};
    report.passed = report.top_degree_bitwise_equal &&
                    report.ssr_relative_diff <= kProposition1SsrTolerance;
    return report;
}

InvarianceReport run_invariance_experiment(const MarkerMatrix& markers, const Eigen::VectorXd& y,
                                           const PolynomialModel& model,
                                           const PenaltySpec& penalty,
                                           const TranslationVector& shift, Method method,
                                           double tolerance) {
    const MarkerMatrix shifted = apply_translation(markers, shift);
    FitResult original = fit(build_design_matrix(markers, model), y, method, penalty);
    FitResult translated = fit(build_design_matrix(shifted, model), y, method, penalty);

    InvarianceReport report{std::move(original), std::move(translated), 0.0, 0.0, {}};
    report.max_pred_diff = (report.original.fitted - report.translated.fitted).lpNorm<Eigen::Infinity>();
    const Exponent top = model.max_total_degree();
    for (std::size_t i = 0; i < model.size(); ++i) {
        const double diff = report.translated.coefficients[i] - report.original.coefficients[i];
        report.per_coefficient_diffs.emplace_back(model[i], diff);
        if (model[i].total_degree() == top) {
            report.max_topdeg_coef_diff = std::max(report.max_topdeg_coef_diff, std::abs(diff));
        }
    }
    report.ssr_original = report.original.ssr;
    report.ssr_translated = report.translated.ssr;
    report.tolerance = tolerance;
    report.verdict = report.max_pred_diff <= tolerance && report.max_topdeg_coef_diff <= tolerance
                         ? Verdict::Invariant
                         : Verdict::NotInvariant;
    report.model_complete = completeness_check(model).complete;
    return report;
}

bool SuiteSummary::all_ok() const noexcept {
    return std::all_of(scenarios.begin(), scenarios.end(),
                       [](const ScenarioResult& s) { return s.ok; });
}

namespace {

struct TrialSetup {
    PolynomialModel model;
    PenaltySpec penalty;
    Method method;
    Coding coding;
};

struct Scenario {
    std::string id;
    std::string description;
    Expectation expectation;
    std::function<TrialSetup(int trial, std::mt19937_64&)> setup;
};

struct TrialOutcome {
    bool pass = false;
    bool witness = false;
    int redraws = 0;
    double pred_diff = 0.0;
    double topdeg_diff = 0.0;
    std::optional<std::string> error;
};

constexpr int kMaxRedrawsPerTrial = 200;
constexpr double kRedrawCondition = 1e10;

Coding random_coding(std::mt19937_64& rng) {
    return std::bernoulli_distribution(0.5)(rng) ? Coding::Discrete : Coding::Continuous;
}

VariableIndex random_p(std::mt19937_64& rng, VariableIndex lo = 1, VariableIndex hi = 4) {
    return std::uniform_int_distribution<VariableIndex>(lo, hi)(rng);
}

/// Complete model of exact degree D; powers capped at 2 for {0,1,2} codes,
/// where x^3 is a combination of 1, x and x^2.
std::pair<PolynomialModel, Coding> random_complete_setup(Exponent degree, std::mt19937_64& rng) {
    const Coding coding = random_coding(rng);
    const Exponent cap = coding == Coding::Discrete ? 2 : 3;
    const VariableIndex p_min = (degree + cap - 1) / cap;
    const VariableIndex p = random_p(rng, std::max<VariableIndex>(1, p_min), 4);
    const Exponent max_power =
        (p >= degree && std::bernoulli_distribution(0.5)(rng)) ? 1 : cap;
    return {random_complete_model(p, degree, max_power, rng), coding};
}

PolynomialModel without_intercept(const PolynomialModel& model) {
    std::vector<Monomial> kept;
    for (const auto& m : model.monomials()) {
        if (!m.is_intercept()) kept.push_back(m);
    }
    return PolynomialModel(std::move(kept), model.num_variables());
}

PenaltySpec top_degree_penalty(const PolynomialModel& model, Norm norm, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> weight(0.1, 5.0);
    std::vector<PenaltyEntry> entries(model.size());
    const Exponent top = model.max_total_degree();
    for (std::size_t i = 0; i < model.size(); ++i) {
        if (model[i].total_degree() == top) entries[i] = {norm, weight(rng)};
    }
    return PenaltySpec(std::move(entries));
}

std::vector<Scenario> scenarios() {
    using Dist = std::uniform_real_distribution<double>;
    std::vector<Scenario> out;
    out.push_back({"C1", "OLS, complete models of degree 1-3", Expectation::Invariant,
                   [](int trial, std::mt19937_64& rng) {
                       auto [model, coding] = random_complete_setup(1 + trial % 3, rng);
                       PenaltySpec pen = PenaltySpec::none(model);
                       return TrialSetup{std::move(model), std::move(pen), Method::Ols, coding};
                   }});
    out.push_back({"C2", "ridge/LASSO penalizing only top-degree monomials",
                   Expectation::Invariant, [](int trial, std::mt19937_64& rng) {
                       auto [model, coding] = random_complete_setup(1 + trial % 3, rng);
                       const bool ridge = (trial / 3) % 2 == 0;
                       PenaltySpec pen = top_degree_penalty(model, ridge ? Norm::L2 : Norm::L1, rng);
                       return TrialSetup{std::move(model), std::move(pen),
                                         ridge ? Method::Ridge : Method::Lasso, coding};
                   }});
    out.push_back({"C3", "RRBLUP, degree 1, intercept unpenalized", Expectation::Invariant,
                   [](int, std::mt19937_64& rng) {
                       const Coding coding = random_coding(rng);
                       PolynomialModel model = auto_degree_model(random_p(rng), 1);
                       PenaltySpec pen = PenaltySpec::by_degree(model, Norm::L2, {{1, Dist(0.1, 5.0)(rng)}});
                       return TrialSetup{std::move(model), std::move(pen), Method::Ridge, coding};
                   }});
    out.push_back({"C4", "additive LASSO, intercept unpenalized", Expectation::Invariant,
                   [](int, std::mt19937_64& rng) {
                       const Coding coding = random_coding(rng);
                       PolynomialModel model = auto_degree_model(random_p(rng), 1);
                       PenaltySpec pen = PenaltySpec::by_degree(model, Norm::L1, {{1, Dist(0.1, 10.0)(rng)}});
                       return TrialSetup{std::move(model), std::move(pen), Method::Lasso, coding};
                   }});
    out.push_back({"E3a", "ridge with a penalized intercept", Expectation::Witness,
                   [](int, std::mt19937_64& rng) {
                       const Coding coding = random_coding(rng);
                       PolynomialModel model = auto_degree_model(random_p(rng), 1);
                       const double lambda = Dist(0.5, 5.0)(rng);
                       PenaltySpec pen = PenaltySpec::by_degree(model, Norm::L2, {{0, lambda}, {1, lambda}});
                       return TrialSetup{std::move(model), std::move(pen), Method::Ridge, coding};
                   }});
    out.push_back({"E3b", "RRBLUP without an intercept", Expectation::Witness,
                   [](int, std::mt19937_64& rng) {
                       const Coding coding = random_coding(rng);
                       PolynomialModel model = without_intercept(auto_degree_model(random_p(rng), 1));
                       PenaltySpec pen = PenaltySpec::by_degree(model, Norm::L2, {{1, Dist(0.5, 5.0)(rng)}});
                       return TrialSetup{std::move(model), std::move(pen), Method::Ridge, coding};
                   }});
    out.push_back({"E3c", "LASSO penalizing degrees 1 and 2", Expectation::Witness,
                   [](int, std::mt19937_64& rng) {
                       const Coding coding = random_coding(rng);
                       PolynomialModel model = auto_degree_model(random_p(rng, 2, 4), 2);
                       const double lambda = Dist(0.5, 5.0)(rng);
                       PenaltySpec pen = PenaltySpec::by_degree(model, Norm::L1, {{1, lambda}, {2, lambda}});
                       return TrialSetup{std::move(model), std::move(pen), Method::Lasso, coding};
                   }});
    out.push_back({"R", "OLS on {1, M1, M2, M3, M2*M3}: M1 and M2*M3 coefficients invariant",
                   Expectation::PartialInvariance, [](int, std::mt19937_64& rng) {
                       PolynomialModel model({Monomial(), Monomial::variable(0), Monomial::variable(1),
                                              Monomial::variable(2), Monomial({{1, 1}, {2, 1}})},
                                             3);
                       PenaltySpec pen = PenaltySpec::none(model);
                       return TrialSetup{std::move(model), std::move(pen), Method::Ols, random_coding(rng)};
                   }});
    out.push_back({"X", "OLS on the incomplete model {1, M1, M1*M2}", Expectation::Witness,
                   [](int, std::mt19937_64& rng) {
                       PolynomialModel model({Monomial(), Monomial::variable(0), Monomial({{0, 1}, {1, 1}})}, 2);
                       PenaltySpec pen = PenaltySpec::none(model);
                       return TrialSetup{std::move(model), std::move(pen), Method::Ols, random_coding(rng)};
                   }});
    return out;
}

double max_abs_coefficient(const InvarianceReport& r) {
    double m = 0.0;
    for (double v : r.original.coefficients.values()) m = std::max(m, std::abs(v));
    for (double v : r.translated.coefficients.values()) m = std::max(m, std::abs(v));
    return m;
}

TrialOutcome run_trial(const Scenario& scenario, std::size_t scenario_index, int trial,
                       const SuiteOptions& options) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed),
                      static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(scenario_index), static_cast<std::uint32_t>(trial)};
    std::mt19937_64 rng(seq);

    TrialOutcome out;
    try {
        const TrialSetup setup = scenario.setup(trial, rng);
        std::optional<RandomInstance> inst;
        while (true) {
            inst.emplace(draw_instance(setup.model, setup.coding, rng));
            const MarkerMatrix shifted = apply_translation(inst->markers, inst->shift);
            const double c0 = gram_condition_estimate(build_design_matrix(inst->markers, setup.model));
            const double c1 = gram_condition_estimate(build_design_matrix(shifted, setup.model));
            if (c0 <= kRedrawCondition && c1 <= kRedrawCondition) break;
            if (++out.redraws >= kMaxRedrawsPerTrial) {
                throw Error("no well-conditioned instance after " +
                            std::to_string(kMaxRedrawsPerTrial) + " draws");
            }
        }

        const InvarianceReport r =
            run_invariance_experiment(inst->markers, inst->y, setup.model, setup.penalty,
                                      inst->shift, setup.method, options.tolerance);
        out.pred_diff = r.max_pred_diff;
        out.topdeg_diff = r.max_topdeg_coef_diff;
        const double pred_tol = options.tolerance * (1.0 + inst->y.lpNorm<Eigen::Infinity>());
        const double coef_tol = options.tolerance * (1.0 + max_abs_coefficient(r));
        const bool invariant = r.max_pred_diff <= pred_tol && r.max_topdeg_coef_diff <= coef_tol;

        switch (scenario.expectation) {
            case Expectation::Invariant:
                out.pass = invariant;
                out.witness = r.max_pred_diff > options.witness_threshold;
                break;
            case Expectation::Witness:
                out.witness = r.max_pred_diff > options.witness_threshold;
                out.pass = out.witness;
                break;
            case Expectation::PartialInvariance: {
                auto diff = [&](const Monomial& m) {
                    const auto idx = setup.model.index_of(m);
                    return std::abs(r.per_coefficient_diffs[*idx].second);
                };
                const double d_b1 = diff(Monomial::variable(0));
                const double d_h23 = diff(Monomial({{1, 1}, {2, 1}}));
                out.pass = r.max_pred_diff <= pred_tol && d_b1 <= coef_tol && d_h23 <= coef_tol;
                out.witness = diff(Monomial()) > options.witness_threshold &&
                              diff(Monomial::variable(1)) > options.witness_threshold &&
                              diff(Monomial::variable(2)) > options.witness_threshold;
                break;
            }
        }
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

}  // namespace

SuiteSummary corollary_suite(const SuiteOptions& options) {
    const std::vector<Scenario> all = scenarios();
    const int trials = std::max(0, options.trials);
    const std::size_t total = all.size() * static_cast<std::size_t>(trials);
    std::vector<TrialOutcome> outcomes(total);

    unsigned threads = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
    threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::max<std::size_t>(total, 1)));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < total; k = next++) {
            const std::size_t s = k / static_cast<std::size_t>(trials);
            const int t = static_cast<int>(k % static_cast<std::size_t>(trials));
            outcomes[k] = run_trial(all[s], s, t, options);
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
        worker();
    }

    SuiteSummary summary;
    summary.seed = options.seed;
    summary.trials = trials;
    for (std::size_t s = 0; s < all.size(); ++s) {
        ScenarioResult res;
        res.id = all[s].id;
        res.description = all[s].description;
        res.expectation = all[s].expectation;
        res.trials = trials;
        for (int t = 0; t < trials; ++t) {
            const TrialOutcome& o = outcomes[s * static_cast<std::size_t>(trials) + static_cast<std::size_t>(t)];
            res.redraws += o.redraws;
            if (o.error) {
                if (res.errors++ == 0) res.first_error = *o.error;
                continue;
            }
            res.passes += o.pass ? 1 : 0;
            if (o.witness) {
                ++res.witnesses;
                if (res.first_witness == 0) res.first_witness = t + 1;
            }
            res.worst_pred_diff = std::max(res.worst_pred_diff, o.pred_diff);
            res.worst_topdeg_diff = std::max(res.worst_topdeg_diff, o.topdeg_diff);
        }
        const double redraw_rate =
            trials + res.redraws > 0 ? static_cast<double>(res.redraws) / (trials + res.redraws) : 0.0;
        const bool healthy = res.errors == 0 && redraw_rate <= options.max_redraw_rate;
        switch (res.expectation) {
            case Expectation::Invariant: res.ok = healthy && res.passes == trials; break;
            case Expectation::Witness:
                res.ok = healthy && res.first_witness >= 1 && res.first_witness <= options.witness_budget;
                break;
            case Expectation::PartialInvariance:
                res.ok = healthy && res.passes == trials && res.witnesses >= 1;
                break;
        }
        summary.scenarios.push_back(std::move(res));
    }
    return summary;
}

}  // namespace polyreg
