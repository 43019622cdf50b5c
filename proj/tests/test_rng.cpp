#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcpoly/parallel.hpp"
#include "lcpoly/rng.hpp"

using namespace lcpoly;

TEST_SUITE("rng") {
    TEST_CASE("philox4x32-10 known-answer vectors") {
        using C = Philox4x32::Counter;
        using K = Philox4x32::Key;
        CHECK(Philox4x32::apply(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
        CHECK(Philox4x32::apply(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
              C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
        CHECK(Philox4x32::apply(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
              C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
    }

    TEST_CASE("streams are pure functions of seed and stream id") {
        RandomStream a(42, 7);
        RandomStream b(42, 7);
        RandomStream c(43, 7);
        std::vector<std::uint64_t> va;
        std::vector<std::uint64_t> vb;
        std::vector<std::uint64_t> vc;
        for (int i = 0; i < 1000; ++i) {
            va.push_back(a());
            vb.push_back(b());
            vc.push_back(c());
        }
        CHECK(va == vb);
        CHECK(va != vc);
    }

    TEST_CASE("split children are distinct and reproducible") {
        const RandomStream root(5);
        std::set<std::uint64_t> ids;
        for (std::uint64_t k = 0; k < 1000; ++k) {
            ids.insert(root.split(k).stream_id());
        }
        CHECK(ids.size() == 1000);
        RandomStream x = root.split(3);
        RandomStream y = RandomStream(5).split(3);
        CHECK(x() == y());
        CHECK(root.split(1).split(2).stream_id() != root.split(2).split(1).stream_id());
    }

    TEST_CASE("uniform and normal moments") {
        RandomStream rng(1);
        constexpr int n = 200000;
        double su = 0.0;
        double sz = 0.0;
        double sz2 = 0.0;
        double sz4 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double u = rng.uniform();
            CHECK_UNARY(u >= 0.0);
            CHECK_UNARY(u < 1.0);
            su += u;
            const double z = rng.normal();
            sz += z;
            sz2 += z * z;
            sz4 += z * z * z * z;
        }
        CHECK(su / n == doctest::Approx(0.5).epsilon(3.0 * std::sqrt(1.0 / 12.0 / n) / 0.5));
        CHECK(std::abs(sz / n) < 4.0 / std::sqrt(double(n)));
        CHECK(sz2 / n == doctest::Approx(1.0).epsilon(0.01));
        CHECK(sz4 / n == doctest::Approx(3.0).epsilon(0.03));
    }

    TEST_CASE("below covers the range uniformly") {
        RandomStream rng(9);
        std::vector<int> counts(7, 0);
        for (int i = 0; i < 70000; ++i) {
            ++counts[rng.below(7)];
        }
        for (int c : counts) {
            CHECK(std::abs(c - 10000) < 500);
        }
    }

    TEST_CASE("experiment ids differ by name") {
        CHECK(experiment_id("sample") != experiment_id("estimate-constant"));
        static_assert(experiment_id("a") == experiment_id("a"));
    }

    TEST_CASE("parallel_for visits every index once and rethrows by index") {
        std::vector<int> hits(100, 0);
        parallel_for(100, 4, [&](std::size_t i) { hits[i] += 1; });
        CHECK(std::count(hits.begin(), hits.end(), 1) == 100);
        CHECK_THROWS_WITH(parallel_for(10, 3,
                                       [](std::size_t i) {
                                           if (i == 4 || i == 8) {
                                               throw std::runtime_error("cell " + std::to_string(i));
                                           }
                                       }),
                          "cell 4");
    }
}
