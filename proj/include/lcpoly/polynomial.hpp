#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lcpoly/rng.hpp"

namespace lcpoly {

using Exponent = std::vector<std::uint16_t>;

/// Graded-lexicographic order, largest first: higher total degree first,
/// ties broken lexicographically with x1 most significant.
struct GradedLexGreater {
    bool operator()(const Exponent& a, const Exponent& b) const noexcept;
};

[[nodiscard]] unsigned total_degree(const Exponent& e) noexcept;

/// Unit vector in R^dim.
class Direction {
public:
    /// Normalizes `components`; throws std::invalid_argument on a zero or non-finite vector.
    static Direction normalized(std::vector<double> components);
    static Direction axis(std::size_t dim, std::size_t index);

    [[nodiscard]] std::size_t dim() const noexcept { return components_.size(); }
    [[nodiscard]] std::span<const double> components() const noexcept { return components_; }
    [[nodiscard]] double operator[](std::size_t i) const { return components_[i]; }
    [[nodiscard]] Direction flipped() const;

private:
    explicit Direction(std::vector<double> unit) : components_(std::move(unit)) {}
    std::vector<double> components_;
};

/// Sparse multivariate polynomial with double coefficients.
///
/// Terms are kept canonical: no zero coefficients, every exponent has length
/// dim(). The zero polynomial has degree 0.
class Polynomial {
public:
    using Terms = std::map<Exponent, double, GradedLexGreater>;

    explicit Polynomial(std::size_t dim);

    static Polynomial constant(std::size_t dim, double value);
    /// The coordinate x_{index+1} (index is zero-based).
    static Polynomial variable(std::size_t dim, std::size_t index);
    static Polynomial monomial(Exponent exponent, double coefficient);

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] unsigned degree() const noexcept { return degree_; }
    [[nodiscard]] const Terms& terms() const noexcept { return terms_; }
    [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }
    [[nodiscard]] bool is_constant() const noexcept { return degree_ == 0; }
    [[nodiscard]] double coefficient(const Exponent& e) const;
    [[nodiscard]] double constant_term() const;

    /// Adds `coefficient * x^exponent`, dropping the term if it cancels.
    void add_term(const Exponent& exponent, double coefficient);

    [[nodiscard]] double eval(std::span<const double> x) const;
    [[nodiscard]] double operator()(std::span<const double> x) const { return eval(x); }

    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator-=(const Polynomial& other);
    Polynomial& operator*=(double scale);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
    friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(Polynomial a) { return a *= -1.0; }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.dim_ == b.dim_ && a.terms_ == b.terms_;
    }

private:
    void recompute_degree() noexcept;
    void require_same_dim(const Polynomial& other, const char* op) const;

    std::size_t dim_;
    Terms terms_;
    unsigned degree_ = 0;
    unsigned max_exponent_ = 0;
};

[[nodiscard]] Polynomial add(const Polynomial& p, const Polynomial& q);
[[nodiscard]] Polynomial subtract(const Polynomial& p, const Polynomial& q);
[[nodiscard]] Polynomial scale(const Polynomial& p, double lambda);
[[nodiscard]] Polynomial multiply(const Polynomial& p, const Polynomial& q);
[[nodiscard]] Polynomial power(const Polynomial& p, unsigned exponent);

[[nodiscard]] double eval(const Polynomial& p, std::span<const double> x);

[[nodiscard]] Polynomial partial_derivative(const Polynomial& p, std::size_t index);
/// Σ_i e_i ∂p/∂x_i.
[[nodiscard]] Polynomial directional_derivative(const Polynomial& p, const Direction& e);
[[nodiscard]] std::vector<Polynomial> gradient(const Polynomial& p);

/// q(y) = p(A y + b), A given row-major dim × dim.
[[nodiscard]] Polynomial compose_affine(const Polynomial& p, std::span<const double> matrix,
                                        std::span<const double> shift);

/// Every monomial of total degree ≤ `degree` gets an independent coefficient
/// uniform on [-coefficient_scale, coefficient_scale], visited in graded-lex
/// order. The top-degree block is redrawn if it vanishes entirely.
[[nodiscard]] Polynomial random_polynomial(std::size_t dim, unsigned degree,
                                           double coefficient_scale, RandomStream& rng);

/// All exponents of total degree ≤ degree, in graded-lex order (largest first).
[[nodiscard]] std::vector<Exponent> monomials_up_to(std::size_t dim, unsigned degree);

}  // namespace lcpoly
