#include "lcpoly/polynomial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "lcpoly/error.hpp"

namespace lcpoly {

bool GradedLexGreater::operator()(const Exponent& a, const Exponent& b) const noexcept {
    const unsigned da = total_degree(a);
    const unsigned db = total_degree(b);
    if (da != db) {
        return da > db;
    }
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

unsigned total_degree(const Exponent& e) noexcept {
    return std::accumulate(e.begin(), e.end(), 0u);
}

Direction Direction::normalized(std::vector<double> components) {
    if (components.empty()) {
        throw std::invalid_argument("direction must have at least one component");
    }
    double norm2 = 0.0;
    for (double c : components) {
        if (!std::isfinite(c)) {
            throw std::invalid_argument("direction has a non-finite component");
        }
        norm2 += c * c;
    }
    if (norm2 == 0.0) {
        throw std::invalid_argument("direction must be nonzero");
    }
    const double norm = std::sqrt(norm2);
    for (double& c : components) {
        c /= norm;
    }
    return Direction(std::move(components));
}

Direction Direction::axis(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw std::invalid_argument("axis index out of range");
    }
    std::vector<double> e(dim, 0.0);
    e[index] = 1.0;
    return Direction(std::move(e));
}

Direction Direction::flipped() const {
    std::vector<double> e(components_);
    for (double& c : e) {
        c = -c;
    }
    return Direction(std::move(e));
}

Polynomial::Polynomial(std::size_t dim) : dim_(dim) {
    if (dim == 0) {
        throw std::invalid_argument("polynomial dimension must be positive");
    }
}

Polynomial Polynomial::constant(std::size_t dim, double value) {
    Polynomial p(dim);
    p.add_term(Exponent(dim, 0), value);
    return p;
}

Polynomial Polynomial::variable(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw std::invalid_argument("variable index out of range");
    }
    Exponent e(dim, 0);
    e[index] = 1;
    Polynomial p(dim);
    p.add_term(e, 1.0);
    return p;
}

Polynomial Polynomial::monomial(Exponent exponent, double coefficient) {
    Polynomial p(exponent.size());
    p.add_term(exponent, coefficient);
    return p;
}

double Polynomial::coefficient(const Exponent& e) const {
    const auto it = terms_.find(e);
    return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::constant_term() const { return coefficient(Exponent(dim_, 0)); }

void Polynomial::add_term(const Exponent& exponent, double coefficient) {
    if (exponent.size() != dim_) {
        throw DimensionMismatch("monomial exponent", dim_, exponent.size());
    }
    if (coefficient == 0.0) {
        return;
    }
    auto [it, inserted] = terms_.try_emplace(exponent, coefficient);
    if (!inserted) {
        it->second += coefficient;
        if (it->second == 0.0) {
            terms_.erase(it);
        }
    }
    recompute_degree();
}

void Polynomial::recompute_degree() noexcept {
    // Graded order puts the highest-degree term first.
    degree_ = terms_.empty() ? 0 : total_degree(terms_.begin()->first);
    max_exponent_ = 0;
    for (const auto& [e, c] : terms_) {
        for (auto k : e) {
            max_exponent_ = std::max<unsigned>(max_exponent_, k);
        }
    }
}

void Polynomial::require_same_dim(const Polynomial& other, const char* op) const {
    if (other.dim_ != dim_) {
        throw DimensionMismatch(op, dim_, other.dim_);
    }
}

double Polynomial::eval(std::span<const double> x) const {
    if (x.size() != dim_) {
        throw DimensionMismatch("polynomial evaluation", dim_, x.size());
    }
    if (terms_.empty()) {
        return 0.0;
    }
    const std::size_t stride = max_exponent_ + 1;
    std::array<double, 256> stack_table;
    std::vector<double> heap_table;
    double* table = stack_table.data();
    if (dim_ * stride > stack_table.size()) {
        heap_table.resize(dim_ * stride);
        table = heap_table.data();
    }
    for (std::size_t i = 0; i < dim_; ++i) {
        double* row = table + i * stride;
        row[0] = 1.0;
        for (std::size_t k = 1; k < stride; ++k) {
            row[k] = row[k - 1] * x[i];
        }
    }
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
        double term = c;
        for (std::size_t i = 0; i < dim_; ++i) {
            if (e[i] != 0) {
                term *= table[i * stride + e[i]];
            }
        }
        sum += term;
    }
    return sum;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    require_same_dim(other, "polynomial addition");
    for (const auto& [e, c] : other.terms_) {
        add_term(e, c);
    }
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
    require_same_dim(other, "polynomial subtraction");
    for (const auto& [e, c] : other.terms_) {
        add_term(e, -c);
    }
    return *this;
}

Polynomial& Polynomial::operator*=(double scale) {
    if (scale == 0.0) {
        terms_.clear();
    } else {
        for (auto it = terms_.begin(); it != terms_.end();) {
            it->second *= scale;
            // Underflow to zero must not leave a stored zero coefficient.
            it = it->second == 0.0 ? terms_.erase(it) : std::next(it);
        }
    }
    recompute_degree();
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.require_same_dim(b, "polynomial multiplication");
    Polynomial out(a.dim_);
    Exponent e(a.dim_);
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            for (std::size_t i = 0; i < a.dim_; ++i) {
                e[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
            }
            out.add_term(e, ca * cb);
        }
    }
    return out;
}

Polynomial add(const Polynomial& p, const Polynomial& q) { return p + q; }
Polynomial subtract(const Polynomial& p, const Polynomial& q) { return p - q; }
Polynomial scale(const Polynomial& p, double lambda) { return p * lambda; }
Polynomial multiply(const Polynomial& p, const Polynomial& q) { return p * q; }

Polynomial power(const Polynomial& p, unsigned exponent) {
    Polynomial result = Polynomial::constant(p.dim(), 1.0);
    Polynomial base = p;
    while (exponent > 0) {
        if (exponent & 1u) {
            result = result * base;
        }
        exponent >>= 1u;
        if (exponent > 0) {
            base = base * base;
        }
    }
    return result;
}

double eval(const Polynomial& p, std::span<const double> x) { return p.eval(x); }

Polynomial partial_derivative(const Polynomial& p, std::size_t index) {
    if (index >= p.dim()) {
        throw std::invalid_argument("partial derivative index out of range");
    }
    Polynomial out(p.dim());
    for (const auto& [e, c] : p.terms()) {
        if (e[index] == 0) {
            continue;
        }
        Exponent d = e;
        const double k = d[index];
        --d[index];
        out.add_term(d, c * k);
    }
    return out;
}

Polynomial directional_derivative(const Polynomial& p, const Direction& e) {
    if (e.dim() != p.dim()) {
        throw DimensionMismatch("directional derivative", p.dim(), e.dim());
    }
    Polynomial out(p.dim());
    for (std::size_t i = 0; i < p.dim(); ++i) {
        if (e[i] != 0.0) {
            out += partial_derivative(p, i) * e[i];
        }
    }
    return out;
}

std::vector<Polynomial> gradient(const Polynomial& p) {
    std::vector<Polynomial> g;
    g.reserve(p.dim());
    for (std::size_t i = 0; i < p.dim(); ++i) {
        g.push_back(partial_derivative(p, i));
    }
    return g;
}

Polynomial compose_affine(const Polynomial& p, std::span<const double> matrix,
                          std::span<const double> shift) {
    const std::size_t n = p.dim();
    if (matrix.size() != n * n) {
        throw DimensionMismatch("affine matrix", n * n, matrix.size());
    }
    if (shift.size() != n) {
        throw DimensionMismatch("affine shift", n, shift.size());
    }
    // x_i = Σ_j A_ij y_j + b_i
    std::vector<Polynomial> substituted;
    substituted.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Polynomial xi = Polynomial::constant(n, shift[i]);
        for (std::size_t j = 0; j < n; ++j) {
            xi += Polynomial::variable(n, j) * matrix[i * n + j];
        }
        substituted.push_back(std::move(xi));
    }
    Polynomial out(n);
    for (const auto& [e, c] : p.terms()) {
        Polynomial term = Polynomial::constant(n, c);
        for (std::size_t i = 0; i < n; ++i) {
            if (e[i] != 0) {
                term = term * power(substituted[i], e[i]);
            }
        }
        out += term;
    }
    return out;
}

std::vector<Exponent> monomials_up_to(std::size_t dim, unsigned degree) {
    std::vector<Exponent> out;
    Exponent e(dim, 0);
    // Enumerate compositions of each total degree by recursion on coordinates.
    auto fill = [&](auto&& self, std::size_t i, unsigned remaining) -> void {
        if (i + 1 == dim) {
            e[i] = static_cast<std::uint16_t>(remaining);
            out.push_back(e);
            return;
        }
        for (unsigned k = remaining + 1; k-- > 0;) {
            e[i] = static_cast<std::uint16_t>(k);
            self(self, i + 1, remaining - k);
        }
    };
    for (unsigned d = degree + 1; d-- > 0;) {
        fill(fill, 0, d);
    }
    return out;
}

Polynomial random_polynomial(std::size_t dim, unsigned degree, double coefficient_scale,
                             RandomStream& rng) {
    if (dim == 0) {
        throw std::invalid_argument("random_polynomial: dim must be positive");
    }
    if (!(coefficient_scale > 0.0)) {
        throw std::invalid_argument("random_polynomial: coefficient_scale must be positive");
    }
    const auto monomials = monomials_up_to(dim, degree);
    std::vector<double> coeff(monomials.size());
    for (double& c : coeff) {
        c = rng.uniform(-coefficient_scale, coefficient_scale);
    }
    const std::size_t top =
        static_cast<std::size_t>(std::count_if(monomials.begin(), monomials.end(), [&](const auto& m) {
            return total_degree(m) == degree;
        }));
    while (std::all_of(coeff.begin(), coeff.begin() + static_cast<std::ptrdiff_t>(top),
                       [](double c) { return c == 0.0; })) {
        for (std::size_t i = 0; i < top; ++i) {
            coeff[i] = rng.uniform(-coefficient_scale, coefficient_scale);
        }
    }
    Polynomial p(dim);
    for (std::size_t i = 0; i < monomials.size(); ++i) {
        p.add_term(monomials[i], coeff[i]);
    }
    return p;
}

}  // namespace lcpoly
