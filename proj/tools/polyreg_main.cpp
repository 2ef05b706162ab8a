// polyreg: penalized polynomial regression and coding-translation checks.
//
//   polyreg fit        --markers M.csv --pheno y.csv --model auto-degree:2 --penalty deg:1=l2:1 ...
//   polyreg invariance --markers M.csv --pheno y.csv ... --translate mean [--expect-invariant]
//   polyreg check-model --model "1;1*2"
//   polyreg suite      --seed 1 --trials 100
//   polyreg expand     --poly "1*2" --translate 1,2

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "polyreg/commands.hpp"
#include "polyreg/csv.hpp"
#include "polyreg/errors.hpp"

namespace {

struct RunFlags {
    std::string markers;
    std::string pheno;
    std::string model = "auto-degree:1";
    std::vector<std::string> penalties;
    std::string translate;
    std::string method;
    double tol = 1e-6;
    std::uint64_t seed = 0;
    int decimals = 2;
    bool expect_invariant = false;
    bool header = false;
    std::string out;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, const std::string& default_translate) {
    f.translate = default_translate;
    cmd->add_option("--markers", f.markers, "Marker CSV (n rows, p columns)")->required();
    cmd->add_option("--pheno", f.pheno, "Phenotype CSV (single column)")->required();
    cmd->add_option("--model", f.model,
                    "Model text ('1;2;1*2', intercept implicit, '0' drops it), @file, or "
                    "auto-degree:D")
        ->capture_default_str();
    cmd->add_option("--penalty", f.penalties,
                    "SELECTOR=NORM[:WEIGHT], e.g. deg:1=l2:1 or 1*2=l1:0.5 (repeatable)");
    cmd->add_option("--translate", f.translate, "none | mean | v1,v2,...")->capture_default_str();
    cmd->add_option("--method", f.method, "ols | ridge | lasso (inferred from --penalty if omitted)");
    cmd->add_option("--tol", f.tol, "Invariance tolerance")->capture_default_str();
    cmd->add_option("--seed", f.seed, "Seed echoed into the report")->capture_default_str();
    cmd->add_option("--decimals", f.decimals, "Decimals shown in the report")
        ->capture_default_str()
        ->check(CLI::Range(0, 17));
    cmd->add_flag("--expect-invariant", f.expect_invariant,
                  "Exit with status 1 when the verdict is NOT_INVARIANT");
    cmd->add_flag("--header", f.header, "CSV files start with a header row");
    cmd->add_option("--out", f.out,
                    std::string("Directory for report.txt and coefficients.csv (default $") +
                        polyreg::kOutputDirEnv + ")");
}

polyreg::RunConfig to_config(const RunFlags& f) {
    polyreg::RunConfig c;
    c.marker_path = f.markers;
    c.phenotype_path = f.pheno;
    c.header = f.header;
    c.model_spec = f.model;
    for (const auto& p : f.penalties) c.penalties.push_back(polyreg::parse_penalty_rule(p));
    c.translation = polyreg::parse_translation(f.translate);
    c.method = f.method.empty() ? polyreg::infer_method(c.penalties) : polyreg::parse_method(f.method);
    c.tolerance = f.tol;
    c.seed = f.seed;
    c.decimals = f.decimals;
    c.expect_invariant = f.expect_invariant;
    return c;
}

int emit(const polyreg::CommandOutput& out, const std::string& out_flag) {
    std::cout << out.text;
    if (out.bundle) {
        if (auto dir = polyreg::output_directory(out_flag.empty() ? std::nullopt
                                                                  : std::optional(out_flag))) {
            polyreg::write_outputs(*out.bundle, *dir);
        }
    }
    return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Penalized polynomial regression over marker codings"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(polyreg::version()));

    RunFlags fit_flags;
    auto* fit = app.add_subcommand("fit", "Fit a polynomial model under one coding");
    add_run_flags(fit, fit_flags, "none");

    RunFlags inv_flags;
    auto* inv = app.add_subcommand("invariance",
                                   "Fit under the original and a translated coding and compare");
    add_run_flags(inv, inv_flags, "mean");

    std::string check_spec;
    std::optional<unsigned> check_vars;
    std::string check_markers;
    bool check_header = false;
    auto* check = app.add_subcommand("check-model", "Report whether a model is complete");
    check->add_option("--model", check_spec, "Model text, @file, or auto-degree:D")->required();
    check->add_option("--vars", check_vars, "Number of marker variables");
    check->add_option("--markers", check_markers, "Take the variable count from this CSV");
    check->add_flag("--header", check_header, "Marker CSV starts with a header row");

    polyreg::SuiteOptions suite_opts;
    auto* suite = app.add_subcommand("suite", "Run the randomized invariance scenarios");
    suite->add_option("--seed", suite_opts.seed, "Base seed")->capture_default_str();
    suite->add_option("--trials", suite_opts.trials, "Trials per scenario")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    suite->add_option("--tol", suite_opts.tolerance, "Relative invariance tolerance")
        ->capture_default_str();
    suite->add_option("--threads", suite_opts.threads, "Worker threads (0 = all cores)")
        ->capture_default_str();

    std::string expand_poly;
    std::string expand_translate = "none";
    std::optional<unsigned> expand_vars;
    auto* expand = app.add_subcommand("expand", "Print f(x + P) as a polynomial in x");
    expand->add_option("--poly", expand_poly, "Terms '[coef:]monomial' separated by ';'")->required();
    expand->add_option("--translate", expand_translate, "none | v1,v2,...")->capture_default_str();
    expand->add_option("--vars", expand_vars, "Number of variables (default: length of P)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*fit) return emit(polyreg::cmd_fit(to_config(fit_flags)), fit_flags.out);
        if (*inv) return emit(polyreg::cmd_invariance(to_config(inv_flags)), inv_flags.out);
        if (*check) {
            std::optional<polyreg::VariableIndex> p;
            if (check_vars) p = *check_vars;
            if (!check_markers.empty()) {
                p = static_cast<polyreg::VariableIndex>(
                    polyreg::load_markers(check_markers, check_header).cols());
            }
            return emit(polyreg::cmd_check_model(check_spec, p), {});
        }
        if (*suite) return emit(polyreg::cmd_suite(suite_opts), {});
        if (*expand) {
            std::optional<polyreg::VariableIndex> p;
            if (expand_vars) p = *expand_vars;
            return emit(polyreg::cmd_expand(expand_poly, polyreg::parse_translation(expand_translate), p),
                        {});
        }
    } catch (const polyreg::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
