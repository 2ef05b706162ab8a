#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "polyreg/marker_coding.hpp"
#include "polyreg/polynomial.hpp"
#include "polyreg/solvers.hpp"

namespace polyreg {

/// `deg:K` selects every monomial of total degree K; `deg:0` is the intercept.
struct DegreeSelector {
    Exponent degree = 0;
    friend bool operator==(const DegreeSelector&, const DegreeSelector&) = default;
};

using PenaltySelector = std::variant<DegreeSelector, Monomial>;

/// One `--penalty` argument, `SELECTOR=NORM[:WEIGHT]`, e.g. `deg:1=l2:1`,
/// `1*2=l1:0.5`, `deg:0=none`. Later rules override earlier ones.
struct PenaltyRule {
    PenaltySelector selector;
    Norm norm = Norm::None;
    double weight = 0.0;
    friend bool operator==(const PenaltyRule&, const PenaltyRule&) = default;
};

/// `none`, `mean` or an explicit comma-separated vector.
struct TranslationSetting {
    enum class Kind { None, MeanCenter, Explicit };
    Kind kind = Kind::None;
    std::vector<double> values;
    friend bool operator==(const TranslationSetting&, const TranslationSetting&) = default;
};

struct RunConfig {
    std::string marker_path;
    std::string phenotype_path;
    bool header = false;
    /// Model text, `@path` to a model file, or `auto-degree:D`.
    std::string model_spec = "auto-degree:1";
    std::vector<PenaltyRule> penalties;
    TranslationSetting translation;
    Method method = Method::Ols;
    double tolerance = 1e-6;
    std::uint64_t seed = 0;
    int decimals = 2;
    bool expect_invariant = false;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Throws ConfigError.
PenaltyRule parse_penalty_rule(std::string_view text);
std::string format_penalty_rule(const PenaltyRule& rule);

/// Throws ConfigError.
TranslationSetting parse_translation(std::string_view text);
std::string format_translation(const TranslationSetting& setting);

/// Throws ConfigError.
Method parse_method(std::string_view text);

/// LASSO for any L1 rule, ridge for any L2 rule, OLS otherwise.
Method infer_method(const std::vector<PenaltyRule>& rules);

/// Resolves `auto-degree:D`, `@path` or inline model text against p variables.
/// Throws ConfigError or ModelError.
PolynomialModel resolve_model(std::string_view spec, VariableIndex num_variables);

/// Largest 1-based marker index mentioned in inline model text, or nullopt
/// for `auto-degree:` and `@path` specs.
std::optional<VariableIndex> infer_num_variables(std::string_view spec);

/// Applies the rules in order. Monomials not selected by any rule are NONE.
/// Throws ConfigError when a selector matches no model monomial, when L1 and
/// L2 are mixed, or when the penalty norm does not suit `method`.
PenaltySpec build_penalty(const PolynomialModel& model, const std::vector<PenaltyRule>& rules,
                          Method method);

/// Throws DimensionMismatch when an explicit vector has the wrong length.
TranslationVector resolve_translation(const TranslationSetting& setting,
                                      const MarkerMatrix& markers);

}  // namespace polyreg
