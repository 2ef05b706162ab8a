#include "polyreg/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "polyreg/errors.hpp"
#include "text_util.hpp"

namespace polyreg {

namespace {

constexpr std::string_view kAutoDegree = "auto-degree:";
constexpr std::string_view kDegree = "deg:";

Exponent parse_degree(std::string_view text, std::string_view context) {
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError("invalid degree '" + std::string(text) + "' in '" +
                          std::string(context) + "'");
    }
    return v;
}

Norm parse_norm(std::string_view text) {
    if (text == "none") return Norm::None;
    if (text == "l2") return Norm::L2;
    if (text == "l1") return Norm::L1;
    throw ConfigError("unknown penalty norm '" + std::string(text) + "' (expected none, l2, l1)");
}

}  // namespace

PenaltyRule parse_penalty_rule(std::string_view text) {
    const std::string_view t = detail::trim(text);
    const auto eq = t.rfind('=');
    if (eq == std::string_view::npos) {
        throw ConfigError("penalty '" + std::string(t) + "' is not of the form SELECTOR=NORM[:WEIGHT]");
    }
    const std::string_view sel = detail::trim(t.substr(0, eq));
    const std::string_view rhs = detail::trim(t.substr(eq + 1));

    PenaltyRule rule;
    if (sel.starts_with(kDegree)) {
        rule.selector = DegreeSelector{parse_degree(detail::trim(sel.substr(kDegree.size())), t)};
    } else {
        try {
            rule.selector = parse_monomial(sel);
        } catch (const ModelError& e) {
            throw ConfigError("unknown penalty selector '" + std::string(sel) + "': " + e.what());
        }
    }

    const auto colon = rhs.find(':');
    rule.norm = parse_norm(detail::trim(rhs.substr(0, colon)));
    if (colon != std::string_view::npos) {
        const std::string_view w = detail::trim(rhs.substr(colon + 1));
        if (!detail::parse_double(w, rule.weight) || rule.weight < 0.0) {
            throw ConfigError("invalid penalty weight '" + std::string(w) + "' in '" +
                              std::string(t) + "'");
        }
    } else if (rule.norm != Norm::None) {
        throw ConfigError("penalty '" + std::string(t) + "' needs a weight, e.g. " +
                          std::string(sel) + "=" + std::string(to_string(rule.norm)) + ":1");
    }
    if (rule.norm == Norm::None) rule.weight = 0.0;
    return rule;
}

std::string format_penalty_rule(const PenaltyRule& rule) {
    std::string out = std::visit(
        [](const auto& s) -> std::string {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, DegreeSelector>) {
                return std::string(kDegree) + std::to_string(s.degree);
            } else {
                return to_string(s);
            }
        },
        rule.selector);
    out += '=';
    out += to_string(rule.norm);
    if (rule.norm != Norm::None) out += ":" + detail::format_double(rule.weight);
    return out;
}

TranslationSetting parse_translation(std::string_view text) {
    const std::string_view t = detail::trim(text);
    if (t == "none" || t.empty()) return {};
    if (t == "mean") return {TranslationSetting::Kind::MeanCenter, {}};
    TranslationSetting s{TranslationSetting::Kind::Explicit, {}};
    for (auto part : detail::split(t, ',')) {
        double v = 0.0;
        if (!detail::parse_double(detail::trim(part), v)) {
            throw ConfigError("invalid translation entry '" + std::string(detail::trim(part)) +
                              "' (expected none, mean, or v1,v2,...)");
        }
        s.values.push_back(v);
    }
    return s;
}

std::string format_translation(const TranslationSetting& setting) {
    switch (setting.kind) {
        case TranslationSetting::Kind::None: return "none";
        case TranslationSetting::Kind::MeanCenter: return "mean";
        case TranslationSetting::Kind::Explicit: break;
    }
    std::string out;
    for (double v : setting.values) {
        if (!out.empty()) out += ',';
        out += detail::format_double(v);
    }
    return out;
}

Method parse_method(std::string_view text) {
    const std::string_view t = detail::trim(text);
    if (t == "ols") return Method::Ols;
    if (t == "ridge") return Method::Ridge;
    if (t == "lasso") return Method::Lasso;
    throw ConfigError("unknown method '" + std::string(t) + "' (expected ols, ridge, lasso)");
}

Method infer_method(const std::vector<PenaltyRule>& rules) {
    bool l1 = false, l2 = false;
    for (const auto& r : rules) {
        l1 |= r.norm == Norm::L1;
        l2 |= r.norm == Norm::L2;
    }
    if (l1 && l2) throw ConfigError("penalty rules mix L1 and L2 norms");
    return l1 ? Method::Lasso : l2 ? Method::Ridge : Method::Ols;
}

PolynomialModel resolve_model(std::string_view spec, VariableIndex num_variables) {
    const std::string_view t = detail::trim(spec);
    if (t.starts_with(kAutoDegree)) {
        return auto_degree_model(num_variables,
                                 parse_degree(detail::trim(t.substr(kAutoDegree.size())), t));
    }
    if (t.starts_with('@')) {
        const std::string path(t.substr(1));
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open model file '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_model(ss.str(), num_variables);
    }
    return parse_model(t, num_variables);
}

std::optional<VariableIndex> infer_num_variables(std::string_view spec) {
    const std::string_view t = detail::trim(spec);
    if (t.starts_with(kAutoDegree) || t.starts_with('@')) return std::nullopt;
    // Parse against a generous bound, then read off the largest index.
    const PolynomialModel model = parse_model(t, std::numeric_limits<VariableIndex>::max());
    VariableIndex p = 1;
    for (const auto& m : model.monomials()) p = std::max(p, m.min_num_variables());
    return p;
}

PenaltySpec build_penalty(const PolynomialModel& model, const std::vector<PenaltyRule>& rules,
                          Method method) {
    std::vector<PenaltyEntry> entries(model.size());
    for (const auto& rule : rules) {
        bool matched = false;
        for (std::size_t i = 0; i < model.size(); ++i) {
            const bool hit = std::visit(
                [&](const auto& s) {
                    if constexpr (std::is_same_v<std::decay_t<decltype(s)>, DegreeSelector>) {
                        return model[i].total_degree() == s.degree;
                    } else {
                        return model[i] == s;
                    }
                },
                rule.selector);
            if (hit) {
                entries[i] = {rule.norm, rule.weight};
                matched = true;
            }
        }
        if (!matched) {
            throw ConfigError("penalty selector '" + format_penalty_rule(rule) +
                              "' matches no monomial of the model");
        }
    }
    PenaltySpec spec(std::move(entries));
    if (method == Method::Ols && spec.kind() != Norm::None) {
        throw ConfigError("method ols does not accept penalties");
    }
    if (method == Method::Ridge && spec.kind() == Norm::L1) {
        throw ConfigError("method ridge needs l2 penalties, got l1");
    }
    if (method == Method::Lasso && spec.kind() == Norm::L2) {
        throw ConfigError("method lasso needs l1 penalties, got l2");
    }
    return spec;
}

TranslationVector resolve_translation(const TranslationSetting& setting,
                                      const MarkerMatrix& markers) {
    switch (setting.kind) {
        case TranslationSetting::Kind::None: return TranslationVector::zero(markers.cols());
        case TranslationSetting::Kind::MeanCenter: return column_mean_translation(markers);
        case TranslationSetting::Kind::Explicit: break;
    }
    if (static_cast<Eigen::Index>(setting.values.size()) != markers.cols()) {
        throw DimensionMismatch("translation has " + std::to_string(setting.values.size()) +
                                " entries, marker matrix has " + std::to_string(markers.cols()) +
                                " columns");
    }
    return TranslationVector(
        Eigen::Map<const Eigen::VectorXd>(setting.values.data(),
                                          static_cast<Eigen::Index>(setting.values.size())));
}

}  // namespace polyreg
