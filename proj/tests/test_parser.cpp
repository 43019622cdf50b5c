#include <doctest.h>

#include <string>

#include "lcpoly/error.hpp"
#include "lcpoly/parser.hpp"
#include "lcpoly/rng.hpp"

using namespace lcpoly;

namespace {

std::string random_number(RandomStream& rng) {
    switch (rng.below(4)) {
        case 0: return std::to_string(rng.below(10));
        case 1: return std::to_string(rng.below(100)) + "." + std::to_string(rng.below(1000));
        case 2: return std::to_string(1 + rng.below(9)) + "e-" + std::to_string(rng.below(4));
        default: return "0.25";
    }
}

// Grammar-valid expressions with bounded nesting so the degree stays small.
std::string random_expr(RandomStream& rng, std::size_t dim, int depth) {
    const auto atom = [&]() -> std::string {
        const auto pick = rng.below(depth > 0 ? 4 : 2);
        if (pick == 0) return random_number(rng);
        if (pick == 1) return "x" + std::to_string(1 + rng.below(dim));
        if (pick == 2) return "(" + random_expr(rng, dim, depth - 1) + ")";
        return "-" + std::string(rng.below(2) ? "x1" : "(" + random_expr(rng, dim, depth - 1) + ")");
    };
    const auto factor = [&]() {
        std::string s = atom();
        if (rng.below(3) == 0) {
            s += "^" + std::to_string(rng.below(3));
        }
        return s;
    };
    const auto term = [&]() {
        std::string s = factor();
        for (auto k = rng.below(3); k > 0; --k) {
            s += rng.below(2) ? "*" : " * ";
            s += factor();
        }
        return s;
    };
    std::string s = term();
    for (auto k = rng.below(4); k > 0; --k) {
        s += rng.below(2) ? " + " : "-";
        s += term();
    }
    return s;
}

}  // namespace

TEST_SUITE("parser") {
    TEST_CASE("grammar examples") {
        const Polynomial p = parse("x1^2*x2 - 3", 2);
        CHECK(p.degree() == 3);
        CHECK(p.terms().size() == 2);
        CHECK(p.coefficient({2, 1}) == 1.0);
        CHECK(p.coefficient({0, 0}) == -3.0);

        const Polynomial z = parse("0", 3);
        CHECK(z.is_zero());
        CHECK(z.degree() == 0);

        const Polynomial sq = parse("(x1+x2)^2", 2);
        CHECK(sq.terms().size() == 3);
        CHECK(sq.coefficient({2, 0}) == 1.0);
        CHECK(sq.coefficient({1, 1}) == 2.0);
        CHECK(sq.coefficient({0, 2}) == 1.0);
    }

    TEST_CASE("literals, whitespace and unary minus") {
        CHECK(parse(" 1.5e2 * x1 ", 1).coefficient({1}) == 150.0);
        CHECK(parse("-x1^2", 1) == parse("x1^2", 1));
        CHECK(parse("-(x1^2)", 1).coefficient({2}) == -1.0);
        CHECK(parse("x1 - -x1", 1).coefficient({1}) == 2.0);
        CHECK(parse("x1^0", 1) == Polynomial::constant(1, 1.0));
    }

    TEST_CASE("errors carry a position") {
        CHECK_THROWS_AS((void)parse("x1 +", 1), ParseError);
        CHECK_THROWS_AS((void)parse("x3", 2), ParseError);
        CHECK_THROWS_AS((void)parse("x0", 2), ParseError);
        CHECK_THROWS_AS((void)parse("x1 / 2", 1), ParseError);
        CHECK_THROWS_AS((void)parse("x1^-1", 1), ParseError);
        CHECK_THROWS_AS((void)parse("(x1", 1), ParseError);
        CHECK_THROWS_AS((void)parse("", 1), ParseError);
        try {
            (void)parse("x1 + * 2", 1);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.position() == 5);
        }
    }

    TEST_CASE("canonical text") {
        CHECK(to_string(parse("3 + x2 + x1^2", 2)) == "x1^2 + x2 + 3");
        CHECK(to_string(Polynomial(2)) == "0");
        CHECK(to_string(parse("-x1*x2 + 0.5", 2)) == "-1*x1*x2 + 0.5");
        CHECK(to_string(parse("x1 - 2", 1)) == "x1 - 2");
    }

    TEST_CASE("round trip on generated expressions") {
        RandomStream rng(99);
        int checked = 0;
        for (int i = 0; i < 10000; ++i) {
            const std::size_t dim = 1 + rng.below(3);
            const std::string text = random_expr(rng, dim, 2);
            const Polynomial p = parse(text, dim);
            const std::string canonical = to_string(p);
            const Polynomial q = parse(canonical, dim);
            CHECK_MESSAGE(p == q, text);
            CHECK(to_string(q) == canonical);
            ++checked;
        }
        CHECK(checked == 10000);
    }
}
