#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace polyreg {

/// 0-based marker column.
using VariableIndex = std::uint32_t;
using Exponent = std::uint32_t;

/// Upper bound on any single exponent and on the total degree of a monomial.
inline constexpr Exponent kMaxExponent = 8;
inline constexpr Exponent kMaxTotalDegree = 8;

/// Product of marker variables, stored as sorted (variable, power) pairs with
/// strictly positive powers. The empty product is the intercept.
///
/// Monomials are totally ordered graded-lexicographically: first by total
/// degree, then lexicographically on the sorted (variable, power) pairs.
class Monomial {
public:
    using Factor = std::pair<VariableIndex, Exponent>;

    /// The intercept.
    Monomial() = default;

    /// Factors may be given in any order; repeated variables have their
    /// powers summed and zero powers are dropped. Throws ModelError when the
    /// degree bounds are exceeded.
    explicit Monomial(std::vector<Factor> factors);
    Monomial(std::initializer_list<Factor> factors)
        : Monomial(std::vector<Factor>(factors)) {}

    static Monomial intercept() { return Monomial(); }
    static Monomial variable(VariableIndex var, Exponent power = 1) {
        return Monomial({{var, power}});
    }

    std::span<const Factor> factors() const noexcept { return factors_; }
    bool is_intercept() const noexcept { return factors_.empty(); }
    Exponent total_degree() const noexcept { return degree_; }

    /// Power of `var` in this monomial (0 when absent).
    Exponent power_of(VariableIndex var) const noexcept;

    /// Largest variable index plus one; 0 for the intercept.
    VariableIndex min_num_variables() const noexcept {
        return factors_.empty() ? 0 : factors_.back().first + 1;
    }

    /// True when every power of `other` is <= the matching power here.
    bool is_divisible_by(const Monomial& other) const noexcept;

    /// All divisors (including the intercept and the monomial itself),
    /// canonically ordered.
    std::vector<Monomial> divisors() const;

    /// Product of two monomials.
    Monomial operator*(const Monomial& other) const;

    /// Evaluates the product on a point; `x` must cover every variable.
    double evaluate(std::span<const double> x) const noexcept;

    friend bool operator==(const Monomial& a, const Monomial& b) noexcept {
        return a.factors_ == b.factors_;
    }
    friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) noexcept;

private:
    std::vector<Factor> factors_;
    Exponent degree_ = 0;
};

inline Exponent total_degree(const Monomial& m) noexcept { return m.total_degree(); }

/// Text form with 1-based indices: `const`, `2`, `1*2`, `1^2*3`.
std::string to_string(const Monomial& m);

/// Parses the 1-based text form. Accepts `const` for the intercept.
/// Throws ModelError on malformed text.
Monomial parse_monomial(std::string_view text);

}  // namespace polyreg
