#include "polyreg/commands.hpp"

#include <cstdlib>
#include <fstream>

#include "polyreg/csv.hpp"
#include "polyreg/errors.hpp"
#include "text_util.hpp"

namespace polyreg {

namespace {

struct LoadedData {
    MarkerMatrix markers;
    Eigen::VectorXd y;
    PolynomialModel model;
    PenaltySpec penalty;
    TranslationVector shift;
};

LoadedData load(const RunConfig& c) {
    if (c.marker_path.empty()) throw ConfigError("--markers is required");
    if (c.phenotype_path.empty()) throw ConfigError("--pheno is required");
    MarkerMatrix markers = load_markers(c.marker_path, c.header);
    Eigen::VectorXd y = load_phenotype(c.phenotype_path, c.header);
    if (y.size() != markers.rows()) {
        throw DimensionMismatch("phenotype has " + std::to_string(y.size()) +
                                " rows, markers have " + std::to_string(markers.rows()));
    }
    PolynomialModel model = resolve_model(c.model_spec, static_cast<VariableIndex>(markers.cols()));
    PenaltySpec penalty = build_penalty(model, c.penalties, c.method);
    TranslationVector shift = resolve_translation(c.translation, markers);
    return {std::move(markers), std::move(y), std::move(model), std::move(penalty),
            std::move(shift)};
}

}  // namespace

CommandOutput cmd_fit(const RunConfig& config) {
    LoadedData d = load(config);
    const bool translated = config.translation.kind != TranslationSetting::Kind::None;
    const MarkerMatrix coded = translated ? apply_translation(d.markers, d.shift) : d.markers;
    FitResult result = fit(build_design_matrix(coded, d.model), d.y, config.method, d.penalty);

    ReportBundle bundle{"fit", config, d.model, completeness_check(d.model).complete, {}, {}};
    bundle.fits.push_back({translated ? "translated" : "original", d.shift.shifts(), std::move(result)});
    CommandOutput out{0, render_report(bundle), std::move(bundle)};
    return out;
}

CommandOutput cmd_invariance(const RunConfig& config) {
    LoadedData d = load(config);
    InvarianceReport report = run_invariance_experiment(d.markers, d.y, d.model, d.penalty,
                                                        d.shift, config.method, config.tolerance);
    ReportBundle bundle{"invariance", config, d.model, report.model_complete, {}, {}};
    bundle.fits.push_back({"original", Eigen::VectorXd::Zero(d.shift.size()), report.original});
    bundle.fits.push_back({"translated", d.shift.shifts(), report.translated});
    const bool failed = config.expect_invariant && report.verdict != Verdict::Invariant;
    bundle.invariance = std::move(report);
    CommandOutput out{failed ? 1 : 0, render_report(bundle), std::move(bundle)};
    return out;
}

CommandOutput cmd_check_model(std::string_view spec, std::optional<VariableIndex> num_variables) {
    if (!num_variables) num_variables = infer_num_variables(spec);
    if (!num_variables) {
        throw ConfigError("the number of variables is needed for '" + std::string(spec) +
                          "' (pass --vars or --markers)");
    }
    const PolynomialModel model = resolve_model(spec, *num_variables);
    const CompletenessResult r = completeness_check(model);
    std::string missing;
    for (const auto& m : r.missing) {
        if (!missing.empty()) missing += ';';
        missing += to_string(m);
    }
    std::string text = "model=" + format_model(model) + "\n";
    text += "variables=" + std::to_string(*num_variables) + "\n";
    text += std::string("complete=") + (r.complete ? "true" : "false") + "\n";
    text += "missing=" + missing + "\n";
    return {0, std::move(text), std::nullopt};
}

CommandOutput cmd_suite(const SuiteOptions& options) {
    const SuiteSummary summary = corollary_suite(options);
    return {summary.all_ok() ? 0 : 1, render_suite(summary), std::nullopt};
}

CommandOutput cmd_expand(std::string_view polynomial, const TranslationSetting& shift,
                         std::optional<VariableIndex> num_variables) {
    if (shift.kind == TranslationSetting::Kind::MeanCenter) {
        throw ConfigError("expand needs an explicit translation vector, not 'mean'");
    }
    if (!num_variables) {
        if (shift.kind == TranslationSetting::Kind::Explicit) {
            num_variables = static_cast<VariableIndex>(shift.values.size());
        } else {
            PolynomialCoefficients probe =
                parse_polynomial(polynomial, std::numeric_limits<VariableIndex>::max());
            VariableIndex p = 1;
            for (const auto& m : probe.model().monomials()) p = std::max(p, m.min_num_variables());
            num_variables = p;
        }
    }
    const PolynomialCoefficients f = parse_polynomial(polynomial, *num_variables);
    std::vector<double> p(*num_variables, 0.0);
    if (shift.kind == TranslationSetting::Kind::Explicit) {
        if (shift.values.size() != *num_variables) {
            throw DimensionMismatch("translation has " + std::to_string(shift.values.size()) +
                                    " entries for " + std::to_string(*num_variables) +
                                    " variables");
        }
        p = shift.values;
    }
    const PolynomialCoefficients g = translate_polynomial(f, p);

    std::string text = "input=" + format_polynomial(f) + "\n";
    text += "shift=" + format_translation({TranslationSetting::Kind::Explicit, p}) + "\n";
    text += "translated=" + format_polynomial(g) + "\n";
    for (std::size_t i : display_order(g.model())) {
        text += "term." + to_string(g.model()[i]) + "=" + detail::format_double(g[i]) + "\n";
    }
    return {0, std::move(text), std::nullopt};
}

std::optional<std::filesystem::path> output_directory(const std::optional<std::string>& flag) {
    if (flag && !flag->empty()) return std::filesystem::path(*flag);
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) {
        return std::filesystem::path(env);
    }
    return std::nullopt;
}

void write_outputs(const ReportBundle& bundle, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto write = [&](const std::filesystem::path& file, const std::string& content) {
        std::ofstream out(file, std::ios::binary);
        if (!out) throw Error("cannot write '" + file.string() + "'");
        out << content;
    };
    write(dir / "report.txt", render_report(bundle));
    write(dir / "coefficients.csv", render_coefficient_csv(bundle));
}

}  // namespace polyreg
