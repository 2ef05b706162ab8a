#include "polyreg/report.hpp"

#include <cstdio>
#include <map>

#include "polyreg/errors.hpp"
#include "text_util.hpp"

#ifndef POLYREG_VERSION
#define POLYREG_VERSION "0.0.0"
#endif

namespace polyreg {

std::string_view version() noexcept { return POLYREG_VERSION; }

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string join_values(const Eigen::VectorXd& v, int decimals) {
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i > 0) out += ',';
        out += decimals < 0 ? detail::format_double(v(i)) : detail::format_fixed(v(i), decimals);
    }
    return out;
}

std::string_view expectation_name(Expectation e) {
    switch (e) {
        case Expectation::Invariant: return "invariant";
        case Expectation::Witness: return "witness";
        case Expectation::PartialInvariance: return "partial";
    }
    return "?";
}

}  // namespace

std::string render_report(const ReportBundle& b) {
    const RunConfig& c = b.config;
    const int dp = c.decimals;
    std::string out;
    auto line = [&](std::string_view key, std::string_view value) {
        out.append(key).append("=").append(value).append("\n");
    };

    line("polyreg.version", version());
    line("command", b.command);

    line("config.markers", c.marker_path);
    line("config.pheno", c.phenotype_path);
    line("config.header", c.header ? "true" : "false");
    line("config.model", c.model_spec);
    std::string pen;
    for (const auto& r : c.penalties) {
        if (!pen.empty()) pen += ';';
        pen += format_penalty_rule(r);
    }
    line("config.penalty", pen);
    line("config.translate", format_translation(c.translation));
    line("config.method", to_string(c.method));
    line("config.tol", detail::format_double(c.tolerance));
    line("config.seed", std::to_string(c.seed));
    line("config.decimals", std::to_string(c.decimals));
    line("config.expect_invariant", c.expect_invariant ? "true" : "false");

    line("model.monomials", format_model(b.model));
    line("model.complete", b.model_complete ? "true" : "false");

    for (const auto& cf : b.fits) {
        const std::string prefix = "fit." + cf.coding + ".";
        line(prefix + "shift", join_values(cf.shift, -1));
        const auto& coef = cf.fit.coefficients;
        for (std::size_t i = 0; i < coef.model().size(); ++i) {
            line(prefix + "coef." + to_string(coef.model()[i]), detail::format_fixed(coef[i], dp));
        }
        line(prefix + "yhat", join_values(cf.fit.fitted, dp));
        line(prefix + "ssr", detail::format_fixed(cf.fit.ssr, dp));
        line(prefix + "objective", detail::format_fixed(cf.fit.objective, dp));
    }

    if (b.invariance) {
        const InvarianceReport& r = *b.invariance;
        line("invariance.max_pred_diff", sci(r.max_pred_diff));
        line("invariance.max_topdeg_coef_diff", sci(r.max_topdeg_coef_diff));
        for (const auto& [m, d] : r.per_coefficient_diffs) {
            line("invariance.diff." + to_string(m), sci(d));
        }
        line("invariance.ssr_original", detail::format_fixed(r.ssr_original, dp));
        line("invariance.ssr_translated", detail::format_fixed(r.ssr_translated, dp));
        line("invariance.tolerance", detail::format_double(r.tolerance));
        line("invariance.model_complete", r.model_complete ? "true" : "false");
        line("invariance.verdict", to_string(r.verdict));
    }
    return out;
}

std::string render_coefficient_csv(const ReportBundle& b) {
    std::string out = "monomial";
    for (const auto& cf : b.fits) out += "," + cf.coding;
    if (b.invariance) out += ",diff";
    out += "\n";
    for (std::size_t i = 0; i < b.model.size(); ++i) {
        out += to_string(b.model[i]);
        for (const auto& cf : b.fits) out += "," + detail::format_double(cf.fit.coefficients[i]);
        if (b.invariance) out += "," + detail::format_double(b.invariance->per_coefficient_diffs[i].second);
        out += "\n";
    }
    return out;
}

RunConfig parse_config_echo(std::string_view text) {
    std::map<std::string, std::string, std::less<>> kv;
    for (auto raw : detail::split(text, '\n')) {
        if (!raw.starts_with("config.")) continue;
        const auto eq = raw.find('=');
        if (eq == std::string_view::npos) continue;
        kv.emplace(std::string(raw.substr(7, eq - 7)), std::string(raw.substr(eq + 1)));
    }
    auto get = [&](std::string_view key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw ConfigError("report lacks config." + std::string(key));
        return it->second;
    };
    auto get_bool = [&](std::string_view key) {
        const std::string& v = get(key);
        if (v != "true" && v != "false") {
            throw ConfigError("config." + std::string(key) + " must be true or false");
        }
        return v == "true";
    };

    RunConfig c;
    c.marker_path = get("markers");
    c.phenotype_path = get("pheno");
    c.header = get_bool("header");
    c.model_spec = get("model");
    for (auto part : detail::split(get("penalty"), ';')) {
        if (!detail::trim(part).empty()) c.penalties.push_back(parse_penalty_rule(part));
    }
    c.translation = parse_translation(get("translate"));
    c.method = parse_method(get("method"));
    if (!detail::parse_double(get("tol"), c.tolerance)) throw ConfigError("malformed config.tol");
    try {
        c.seed = std::stoull(get("seed"));
        c.decimals = std::stoi(get("decimals"));
    } catch (const std::logic_error&) {
        throw ConfigError("malformed config.seed or config.decimals");
    }
    c.expect_invariant = get_bool("expect_invariant");
    return c;
}

std::string render_suite(const SuiteSummary& s) {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "seed=%llu trials=%d\n",
                  static_cast<unsigned long long>(s.seed), s.trials);
    out += buf;
    std::snprintf(buf, sizeof buf, "%-4s %-9s %7s %9s %13s %8s %6s %11s %11s  %s\n", "id",
                  "expect", "passes", "witnesses", "first_witness", "redraws", "errors",
                  "worst_pred", "worst_top", "status");
    out += buf;
    for (const auto& r : s.scenarios) {
        std::snprintf(buf, sizeof buf, "%-4s %-9s %3d/%-3d %9d %13d %8d %6d %11.3e %11.3e  %s\n",
                      r.id.c_str(), std::string(expectation_name(r.expectation)).c_str(),
                      r.passes, r.trials, r.witnesses, r.first_witness, r.redraws, r.errors,
                      r.worst_pred_diff, r.worst_topdeg_diff, r.ok ? "OK" : "FAIL");
        out += buf;
        if (!r.first_error.empty()) out += "     first error: " + r.first_error + "\n";
    }
    out += s.all_ok() ? "suite=OK\n" : "suite=FAIL\n";
    return out;
}

}  // namespace polyreg
