#include "lcpoly/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "lcpoly/error.hpp"

namespace lcpoly {
namespace {

class Parser {
public:
    Parser(std::string_view text, std::size_t dim) : text_(text), dim_(dim) {}

    Polynomial parse_all() {
        skip_space();
        if (pos_ == text_.size()) {
            throw ParseError("empty expression", pos_);
        }
        Polynomial p = expr();
        skip_space();
        if (pos_ != text_.size()) {
            throw ParseError(std::string("unexpected character '") + text_[pos_] + "'", pos_);
        }
        return p;
    }

private:
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    [[nodiscard]] bool at_end() {
        skip_space();
        return pos_ == text_.size();
    }

    Polynomial expr() {
        Polynomial p = term();
        while (true) {
            if (accept('+')) {
                p += term();
            } else if (accept('-')) {
                p -= term();
            } else {
                return p;
            }
        }
    }

    Polynomial term() {
        Polynomial p = factor();
        while (accept('*')) {
            p = p * factor();
            check_degree(p);
        }
        return p;
    }

    Polynomial factor() {
        Polynomial base = atom();
        if (accept('^')) {
            skip_space();
            const std::size_t at = pos_;
            const unsigned k = unsigned_integer("exponent");
            if (static_cast<unsigned long long>(k) * std::max(1u, base.degree()) > kMaxParsedDegree) {
                throw ParseError("exponent too large", at);
            }
            base = power(base, k);
        }
        return base;
    }

    Polynomial atom() {
        skip_space();
        if (pos_ == text_.size()) {
            throw ParseError("unexpected end of expression", pos_);
        }
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Polynomial p = expr();
            if (!accept(')')) {
                throw ParseError("expected ')'", pos_);
            }
            return p;
        }
        if (c == '-') {
            ++pos_;
            return -atom();
        }
        if (c == 'x') {
            const std::size_t at = pos_;
            ++pos_;
            if (pos_ == text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                throw ParseError("expected variable index after 'x'", pos_);
            }
            const unsigned index = unsigned_integer("variable index");
            if (index == 0 || index > dim_) {
                throw ParseError("variable x" + std::to_string(index) + " out of range for dimension " +
                                     std::to_string(dim_),
                                 at);
            }
            return Polynomial::variable(dim_, index - 1);
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return Polynomial::constant(dim_, number());
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    unsigned unsigned_integer(const char* what) {
        const std::size_t start = pos_;
        unsigned value = 0;
        const auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
        if (ec != std::errc() || ptr == text_.data() + start) {
            throw ParseError(std::string("expected non-negative integer ") + what, start);
        }
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return value;
    }

    double number() {
        // decimal := digits ["." digits] | "." digits, then optional exponent.
        const std::size_t start = pos_;
        auto digits = [&] {
            const std::size_t from = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
            return pos_ - from;
        };
        std::size_t mantissa = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            mantissa += digits();
        }
        if (mantissa == 0) {
            throw ParseError("malformed number", start);
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
                ++pos_;
            }
            if (digits() == 0) {
                throw ParseError("malformed exponent in number", start);
            }
        }
        double value = 0.0;
        const auto [ptr, ec] =
            std::from_chars(text_.data() + start, text_.data() + pos_, value, std::chars_format::general);
        if (ec != std::errc() || ptr != text_.data() + pos_ || !std::isfinite(value)) {
            throw ParseError("number out of range", start);
        }
        return value;
    }

    void check_degree(const Polynomial& p) const {
        if (p.degree() > kMaxParsedDegree) {
            throw ParseError("polynomial degree exceeds limit", pos_);
        }
    }

    std::string_view text_;
    std::size_t dim_;
    std::size_t pos_ = 0;
};

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_monomial(const Exponent& e) {
    std::string out;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) {
            continue;
        }
        if (!out.empty()) {
            out += '*';
        }
        out += 'x';
        out += std::to_string(i + 1);
        if (e[i] > 1) {
            out += '^';
            out += std::to_string(e[i]);
        }
    }
    return out;
}

}  // namespace

Polynomial parse(std::string_view text, std::size_t dim) {
    if (dim == 0) {
        throw std::invalid_argument("parse: dimension must be positive");
    }
    return Parser(text, dim).parse_all();
}

std::string to_string(const Polynomial& p) {
    if (p.is_zero()) {
        return "0";
    }
    std::string out;
    bool first = true;
    for (const auto& [e, c] : p.terms()) {
        const std::string mono = format_monomial(e);
        const double mag = std::fabs(c);
        if (first) {
            if (c < 0.0) {
                // "-x1^2" would parse as (-x1)^2, so a negative leading term
                // always carries its coefficient.
                out += '-';
                out += format_number(mag);
                if (!mono.empty()) {
                    out += '*' + mono;
                }
            } else if (mono.empty()) {
                out += format_number(mag);
            } else if (mag == 1.0) {
                out += mono;
            } else {
                out += format_number(mag) + '*' + mono;
            }
            first = false;
            continue;
        }
        out += c < 0.0 ? " - " : " + ";
        if (mono.empty()) {
            out += format_number(mag);
        } else if (mag == 1.0) {
            out += mono;
        } else {
            out += format_number(mag) + '*' + mono;
        }
    }
    return out;
}

}  // namespace lcpoly
