#include "polyreg/instance_generator.hpp"

#include <algorithm>

#include "polyreg/errors.hpp"

namespace polyreg {

RandomInstance draw_instance(const PolynomialModel& model, Coding coding, std::mt19937_64& rng) {
    const int p = static_cast<int>(model.num_variables());
    const int n_min = std::max(6, static_cast<int>(model.size()) + 2);
    const int n = std::uniform_int_distribution<int>(n_min, std::max(n_min, 20))(rng);

    Eigen::MatrixXd m(n, p);
    if (coding == Coding::Discrete) {
        std::uniform_int_distribution<int> code(0, 2);
        for (Eigen::Index j = 0; j < p; ++j) {
            for (Eigen::Index i = 0; i < n; ++i) m(i, j) = code(rng);
        }
    } else {
        std::uniform_real_distribution<double> code(-1.0, 2.0);
        for (Eigen::Index j = 0; j < p; ++j) {
            for (Eigen::Index i = 0; i < n; ++i) m(i, j) = code(rng);
        }
    }
    MarkerMatrix markers(std::move(m));

    std::uniform_real_distribution<double> unif_shift(-2.0, 2.0);
    Eigen::VectorXd shift(p);
    for (Eigen::Index j = 0; j < p; ++j) shift(j) = unif_shift(rng);

    std::normal_distribution<double> normal(0.0, 1.0);
    const DesignMatrix design = build_design_matrix(markers, model);
    Eigen::VectorXd signal_coef(static_cast<Eigen::Index>(model.size()));
    for (Eigen::Index c = 0; c < signal_coef.size(); ++c) signal_coef(c) = normal(rng);
    Eigen::VectorXd y = design.values * signal_coef;
    for (Eigen::Index i = 0; i < n; ++i) y(i) += normal(rng);

    return RandomInstance{std::move(markers), std::move(y), TranslationVector(std::move(shift)),
                          coding};
}

PolynomialModel random_complete_model(VariableIndex num_variables, Exponent degree,
                                      Exponent max_power_per_variable, std::mt19937_64& rng) {
    if (degree > num_variables * max_power_per_variable) {
        throw ModelError("cannot build a degree-" + std::to_string(degree) + " monomial over " +
                         std::to_string(num_variables) + " variables with powers <= " +
                         std::to_string(max_power_per_variable));
    }
    std::uniform_int_distribution<VariableIndex> pick(0, num_variables - 1);
    auto draw_top = [&] {
        while (true) {
            std::vector<Exponent> power(num_variables, 0);
            bool ok = true;
            for (Exponent d = 0; d < degree && ok; ++d) {
                ok = ++power[pick(rng)] <= max_power_per_variable;
            }
            if (!ok) continue;
            std::vector<Monomial::Factor> f;
            for (VariableIndex v = 0; v < num_variables; ++v) {
                if (power[v] > 0) f.emplace_back(v, power[v]);
            }
            return Monomial(std::move(f));
        }
    };
    std::vector<Monomial> tops{draw_top()};
    if (std::bernoulli_distribution(0.5)(rng)) {
        Monomial second = draw_top();
        if (second != tops.front()) tops.push_back(std::move(second));
    }
    return complete_closure(PolynomialModel(std::move(tops), num_variables));
}

PolynomialCoefficients random_coefficients(const PolynomialModel& model, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> values(model.size());
    for (auto& v : values) v = normal(rng);
    return PolynomialCoefficients(model, std::move(values));
}

}  // namespace polyreg
