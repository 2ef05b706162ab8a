#include "polyreg/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>

#include "polyreg/errors.hpp"
#include "text_util.hpp"

namespace polyreg {

PolynomialModel::PolynomialModel(std::vector<Monomial> monomials, VariableIndex num_variables)
    : monomials_(std::move(monomials)), num_variables_(num_variables) {
    if (num_variables_ == 0) throw ModelError("a model needs at least one variable");
    std::sort(monomials_.begin(), monomials_.end());
    if (auto dup = std::adjacent_find(monomials_.begin(), monomials_.end());
        dup != monomials_.end()) {
        throw ModelError("duplicate monomial '" + to_string(*dup) + "' in model");
    }
    for (const auto& m : monomials_) {
        if (m.min_num_variables() > num_variables_) {
            throw ModelError("monomial '" + to_string(m) + "' refers to a variable beyond the " +
                             std::to_string(num_variables_) + " available");
        }
    }
}

std::optional<std::size_t> PolynomialModel::index_of(const Monomial& m) const noexcept {
    auto it = std::lower_bound(monomials_.begin(), monomials_.end(), m);
    if (it == monomials_.end() || *it != m) return std::nullopt;
    return static_cast<std::size_t>(it - monomials_.begin());
}

Exponent PolynomialModel::max_total_degree() const noexcept {
    // Canonical order is graded, so the last monomial has the highest degree.
    return monomials_.empty() ? 0 : monomials_.back().total_degree();
}

PolynomialCoefficients::PolynomialCoefficients(PolynomialModel model, std::vector<double> values)
    : model_(std::move(model)), values_(std::move(values)) {
    if (values_.size() != model_.size()) {
        throw DimensionMismatch("expected " + std::to_string(model_.size()) +
                                " coefficients, got " + std::to_string(values_.size()));
    }
}

PolynomialCoefficients::PolynomialCoefficients(PolynomialModel model)
    : model_(std::move(model)), values_(model_.size(), 0.0) {}

double PolynomialCoefficients::coefficient(const Monomial& m) const noexcept {
    auto idx = model_.index_of(m);
    return idx ? values_[*idx] : 0.0;
}

CompletenessResult completeness_check(const PolynomialModel& model) {
    std::set<Monomial> missing;
    for (const auto& m : model.monomials()) {
        for (auto& d : m.divisors()) {
            if (!model.contains(d)) missing.insert(std::move(d));
        }
    }
    CompletenessResult result;
    result.complete = missing.empty();
    result.missing.assign(missing.begin(), missing.end());
    return result;
}

PolynomialModel complete_closure(const PolynomialModel& model) {
    std::set<Monomial> all;
    for (const auto& m : model.monomials()) {
        for (auto& d : m.divisors()) all.insert(std::move(d));
    }
    return PolynomialModel(std::vector<Monomial>(all.begin(), all.end()), model.num_variables());
}

namespace {

double binomial(Exponent n, Exponent k) {
    double r = 1.0;
    for (Exponent i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / i;
    return r;
}

double ipow(double base, Exponent e) {
    double r = 1.0;
    for (Exponent i = 0; i < e; ++i) r *= base;
    return r;
}

}  // namespace

PolynomialCoefficients translate_polynomial(const PolynomialCoefficients& f,
                                            std::span<const double> shift) {
    const PolynomialModel& model = f.model();
    if (shift.size() != model.num_variables()) {
        throw DimensionMismatch("translation has length " + std::to_string(shift.size()) +
                                ", model has " + std::to_string(model.num_variables()) +
                                " variables");
    }
    const Exponent top = model.max_total_degree();

    std::map<Monomial, double> acc;
    for (const auto& m : model.monomials()) acc.emplace(m, 0.0);

    for (std::size_t i = 0; i < model.size(); ++i) {
        const Monomial& m = model[i];
        const double a = f[i];
        const auto factors = m.factors();
        // prod_k (x_k + P_k)^{d_k} = sum_{delta <= d} prod_k C(d_k, delta_k) P_k^{d_k - delta_k} x^delta
        std::vector<Exponent> delta(factors.size(), 0);
        while (true) {
            double term = a;
            std::vector<Monomial::Factor> kept;
            for (std::size_t k = 0; k < factors.size(); ++k) {
                const auto [var, d] = factors[k];
                term *= binomial(d, delta[k]) * ipow(shift[var], d - delta[k]);
                if (delta[k] > 0) kept.emplace_back(var, delta[k]);
            }
            if (term != 0.0) acc[Monomial(std::move(kept))] += term;

            std::size_t k = 0;
            while (k < factors.size() && delta[k] == factors[k].second) {
                delta[k] = 0;
                ++k;
            }
            if (k == factors.size()) break;
            ++delta[k];
        }
    }

    std::vector<Monomial> monomials;
    std::vector<double> values;
    monomials.reserve(acc.size());
    values.reserve(acc.size());
    for (auto& [m, v] : acc) {
        values.push_back(m.total_degree() == top ? f.coefficient(m) : v);
        monomials.push_back(m);
    }
    // std::map iterates in canonical order, so the model constructor's sort is a no-op.
    return PolynomialCoefficients(PolynomialModel(std::move(monomials), model.num_variables()),
                                  std::move(values));
}

double evaluate_polynomial(const PolynomialCoefficients& f, std::span<const double> x) {
    if (x.size() != f.model().num_variables()) {
        throw DimensionMismatch("point has length " + std::to_string(x.size()) + ", model has " +
                                std::to_string(f.model().num_variables()) + " variables");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < f.model().size(); ++i) sum += f[i] * f.model()[i].evaluate(x);
    return sum;
}

PolynomialModel auto_degree_model(VariableIndex num_variables, Exponent degree) {
    if (degree > kMaxTotalDegree) {
        throw ModelError("auto-degree " + std::to_string(degree) + " exceeds the maximum of " +
                         std::to_string(kMaxTotalDegree));
    }
    std::vector<Monomial> out;
    std::vector<VariableIndex> chosen;
    // Depth-first enumeration of variable subsets of size <= degree.
    auto recurse = [&](auto&& self, VariableIndex next) -> void {
        std::vector<Monomial::Factor> f;
        for (auto v : chosen) f.emplace_back(v, 1);
        out.emplace_back(std::move(f));
        if (chosen.size() == degree) return;
        for (VariableIndex v = next; v < num_variables; ++v) {
            chosen.push_back(v);
            self(self, v + 1);
            chosen.pop_back();
        }
    };
    recurse(recurse, 0);
    return PolynomialModel(std::move(out), num_variables);
}

namespace {

std::vector<std::string_view> model_entries(std::string_view text) {
    std::vector<std::string_view> out;
    for (auto line : detail::split_any(text, "\n;")) {
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

}  // namespace

PolynomialModel parse_model(std::string_view text, VariableIndex num_variables) {
    bool drop_intercept = false;
    bool explicit_intercept = false;
    std::vector<Monomial> monomials;
    for (auto entry : model_entries(text)) {
        if (entry == "0") {
            drop_intercept = true;
            continue;
        }
        Monomial m = parse_monomial(entry);
        if (m.is_intercept()) explicit_intercept = true;
        if (std::find(monomials.begin(), monomials.end(), m) != monomials.end()) {
            throw ModelError("monomial '" + std::string(entry) + "' listed twice");
        }
        monomials.push_back(std::move(m));
    }
    if (drop_intercept && explicit_intercept) {
        throw ModelError("model text both removes (`0`) and includes (`const`) the intercept");
    }
    if (!drop_intercept && !explicit_intercept) monomials.emplace_back();
    if (monomials.empty()) throw ModelError("model text defines no monomials");
    return PolynomialModel(std::move(monomials), num_variables);
}

std::string format_model(const PolynomialModel& model, std::string_view separator) {
    std::string out;
    auto append = [&](const std::string& s) {
        if (!out.empty()) out += separator;
        out += s;
    };
    if (!model.has_intercept()) append("0");
    for (const auto& m : model.monomials()) append(to_string(m));
    return out;
}

PolynomialCoefficients parse_polynomial(std::string_view text, VariableIndex num_variables) {
    std::map<Monomial, double> terms;
    for (auto entry : model_entries(text)) {
        double coef = 1.0;
        std::string_view mono = entry;
        if (auto colon = entry.find(':'); colon != std::string_view::npos) {
            if (!detail::parse_double(detail::trim(entry.substr(0, colon)), coef)) {
                throw ModelError("invalid coefficient in term '" + std::string(entry) + "'");
            }
            mono = entry.substr(colon + 1);
        }
        terms[parse_monomial(mono)] += coef;
    }
    if (terms.empty()) throw ModelError("polynomial text defines no terms");
    std::vector<Monomial> monomials;
    std::vector<double> values;
    for (auto& [m, c] : terms) {
        monomials.push_back(m);
        values.push_back(c);
    }
    return PolynomialCoefficients(PolynomialModel(std::move(monomials), num_variables),
                                  std::move(values));
}

std::vector<std::size_t> display_order(const PolynomialModel& model) {
    std::vector<std::size_t> order(model.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return model[a].total_degree() > model[b].total_degree();
    });
    return order;
}

std::string format_polynomial(const PolynomialCoefficients& f, int digits) {
    std::string out;
    const auto& model = f.model();
    for (std::size_t r : display_order(model)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*g", digits, std::abs(f[r]));
        std::string term = buf;
        for (const auto& [var, power] : model[r].factors()) {
            term += "*x" + std::to_string(var + 1);
            if (power > 1) term += "^" + std::to_string(power);
        }
        if (out.empty()) {
            out = (f[r] < 0 ? "-" : "") + term;
        } else {
            out += (f[r] < 0 ? " - " : " + ") + term;
        }
    }
    return out.empty() ? "0" : out;
}

}  // namespace polyreg
