#include "polyreg/monomial.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "polyreg/errors.hpp"
#include "text_util.hpp"

namespace polyreg {

Monomial::Monomial(std::vector<Factor> factors) {
    std::sort(factors.begin(), factors.end());
    for (const auto& [var, power] : factors) {
        if (power == 0) continue;
        if (!factors_.empty() && factors_.back().first == var) {
            factors_.back().second += power;
        } else {
            factors_.emplace_back(var, power);
        }
    }
    for (const auto& [var, power] : factors_) {
        if (power > kMaxExponent) {
            throw ModelError("exponent " + std::to_string(power) + " of variable " +
                             std::to_string(var + 1) + " exceeds the maximum of " +
                             std::to_string(kMaxExponent));
        }
        degree_ += power;
    }
    if (degree_ > kMaxTotalDegree) {
        throw ModelError("total degree " + std::to_string(degree_) + " exceeds the maximum of " +
                         std::to_string(kMaxTotalDegree));
    }
}

Exponent Monomial::power_of(VariableIndex var) const noexcept {
    auto it = std::lower_bound(factors_.begin(), factors_.end(), var,
                               [](const Factor& f, VariableIndex v) { return f.first < v; });
    return (it != factors_.end() && it->first == var) ? it->second : 0;
}

bool Monomial::is_divisible_by(const Monomial& other) const noexcept {
    return std::all_of(other.factors_.begin(), other.factors_.end(), [&](const Factor& f) {
        return power_of(f.first) >= f.second;
    });
}

std::vector<Monomial> Monomial::divisors() const {
    // Mixed-radix counter over 0..power for each factor.
    std::vector<Exponent> delta(factors_.size(), 0);
    std::vector<Monomial> out;
    while (true) {
        std::vector<Factor> f;
        f.reserve(factors_.size());
        for (std::size_t k = 0; k < factors_.size(); ++k) {
            if (delta[k] > 0) f.emplace_back(factors_[k].first, delta[k]);
        }
        out.emplace_back(std::move(f));
        std::size_t k = 0;
        while (k < factors_.size() && delta[k] == factors_[k].second) {
            delta[k] = 0;
            ++k;
        }
        if (k == factors_.size()) break;
        ++delta[k];
    }
    std::sort(out.begin(), out.end());
    return out;
}

Monomial Monomial::operator*(const Monomial& other) const {
    std::vector<Factor> f(factors_);
    f.insert(f.end(), other.factors_.begin(), other.factors_.end());
    return Monomial(std::move(f));
}

double Monomial::evaluate(std::span<const double> x) const noexcept {
    double v = 1.0;
    for (const auto& [var, power] : factors_) {
        const double xv = x[var];
        for (Exponent e = 0; e < power; ++e) v *= xv;
    }
    return v;
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) noexcept {
    if (auto c = a.degree_ <=> b.degree_; c != 0) return c;
    return std::lexicographical_compare_three_way(a.factors_.begin(), a.factors_.end(),
                                                  b.factors_.begin(), b.factors_.end());
}

std::string to_string(const Monomial& m) {
    if (m.is_intercept()) return "const";
    std::string out;
    for (const auto& [var, power] : m.factors()) {
        if (!out.empty()) out += '*';
        out += std::to_string(var + 1);
        if (power > 1) {
            out += '^';
            out += std::to_string(power);
        }
    }
    return out;
}

namespace {

unsigned parse_unsigned(std::string_view token, std::string_view context) {
    unsigned value = 0;
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (token.empty() || ec != std::errc() || ptr != last) {
        throw ModelError("invalid number '" + std::string(token) + "' in monomial '" +
                         std::string(context) + "'");
    }
    return value;
}

}  // namespace

Monomial parse_monomial(std::string_view text) {
    const std::string_view trimmed = detail::trim(text);
    if (trimmed == "const") return Monomial();
    if (trimmed.empty()) throw ModelError("empty monomial");

    std::vector<Monomial::Factor> factors;
    for (std::string_view part : detail::split(trimmed, '*')) {
        part = detail::trim(part);
        Exponent power = 1;
        if (auto caret = part.find('^'); caret != std::string_view::npos) {
            power = parse_unsigned(detail::trim(part.substr(caret + 1)), trimmed);
            part = detail::trim(part.substr(0, caret));
            if (power == 0) {
                throw ModelError("zero exponent in monomial '" + std::string(trimmed) + "'");
            }
        }
        const unsigned index = parse_unsigned(part, trimmed);
        if (index == 0) {
            throw ModelError("marker indices are 1-based in monomial '" + std::string(trimmed) +
                             "'");
        }
        factors.emplace_back(static_cast<VariableIndex>(index - 1), power);
    }
    return Monomial(std::move(factors));
}

}  // namespace polyreg
