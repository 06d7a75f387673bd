#include <set>
#include <stdexcept>

#include "doctest.h"
#include "polar/gf.hpp"

using namespace polar;

TEST_CASE("prime field GF(3)") {
    const Field& F = Field::get(3, 1);
    CHECK(F.q() == 3);
    CHECK(F.add(1, 2) == 0);
    CHECK(F.mul(2, 2) == 1);
    CHECK(F.inv(2) == 2);
    CHECK(F.neg(1) == 2);
}

TEST_CASE("GF(9) uses the expected defining polynomial") {
    const Field& F = Field::get(3, 2);
    CHECK(F.q() == 9);
    // x^2 + 2x + 2
    CHECK(F.modulus() == std::vector<fe>{2, 2, 1});
    // exhaustive root check over GF(3): an irreducible quadratic has no roots
    for (int x = 0; x < 3; ++x) CHECK((x * x + 2 * x + 2) % 3 != 0);
}

TEST_CASE("GF(4) and construction errors") {
    const Field& F = Field::get(2, 2);
    CHECK(F.q() == 4);
    CHECK_THROWS_AS(Field::get(4, 1), std::invalid_argument);   // non-prime
    CHECK_THROWS_AS(Field::get(6, 2), std::invalid_argument);   // non-prime
    CHECK_THROWS_AS(Field::get(2, 17), std::invalid_argument);  // 2^17 > 2^16
}

TEST_CASE("field axioms, exhaustively on small fields") {
    for (auto [p, m] : {std::pair{2, 2}, {3, 1}, {3, 2}, {2, 3}, {5, 1}}) {
        const Field& F = Field::get(p, m);
        std::uint32_t q = F.q();
        for (std::uint32_t a = 0; a < q; ++a) {
            REQUIRE(F.add(0, (fe)a) == a);
            REQUIRE(F.mul(1, (fe)a) == a);
            REQUIRE(F.add((fe)a, F.neg((fe)a)) == 0);
            if (a) REQUIRE(F.mul((fe)a, F.inv((fe)a)) == 1);
            for (std::uint32_t b = 0; b < q; ++b) {
                REQUIRE(F.add((fe)a, (fe)b) == F.add((fe)b, (fe)a));
                REQUIRE(F.mul((fe)a, (fe)b) == F.mul((fe)b, (fe)a));
                for (std::uint32_t c = 0; c < q; ++c) {
                    REQUIRE(F.mul(F.add((fe)a, (fe)b), (fe)c) ==
                            F.add(F.mul((fe)a, (fe)c), F.mul((fe)b, (fe)c)));
                    REQUIRE(F.mul(F.mul((fe)a, (fe)b), (fe)c) == F.mul((fe)a, F.mul((fe)b, (fe)c)));
                }
            }
        }
    }
}

TEST_CASE("sigma is the order-2 automorphism of GF(9)/GF(3)") {
    const Field& F = Field::get(3, 2);
    CHECK(F.q0() == 3);
    CHECK(F.frob(0) == 0);
    int fixed = 0;
    for (std::uint32_t x = 0; x < 9; ++x) {
        CHECK(F.frob(F.frob((fe)x)) == x);
        if (F.sigma_fixed((fe)x)) ++fixed;
        for (std::uint32_t y = 0; y < 9; ++y) {
            REQUIRE(F.frob(F.add((fe)x, (fe)y)) == F.add(F.frob((fe)x), F.frob((fe)y)));
            REQUIRE(F.frob(F.mul((fe)x, (fe)y)) == F.mul(F.frob((fe)x), F.frob((fe)y)));
        }
    }
    CHECK(fixed == 3);
    CHECK_THROWS_AS(Field::get(3, 1).frob(1), std::invalid_argument);
}

TEST_CASE("trace and norm land in the fixed subfield; norm surjective") {
    const Field& F = Field::get(3, 2);
    CHECK(F.trace(0) == 0);
    CHECK(F.norm(0) == 0);
    std::set<fe> norms, traces;
    int trace_kernel = 0;
    for (std::uint32_t x = 0; x < 9; ++x) {
        CHECK(F.sigma_fixed(F.trace((fe)x)));
        CHECK(F.sigma_fixed(F.norm((fe)x)));
        norms.insert(F.norm((fe)x));
        traces.insert(F.trace((fe)x));
        if (F.trace((fe)x) == 0) ++trace_kernel;
    }
    CHECK(norms.size() == 3);  // every GF(3) value is a norm
    CHECK(traces.size() == 3);
    CHECK(trace_kernel == 3);
}

TEST_CASE("solve_norm returns the least solution") {
    const Field& F = Field::get(3, 2);
    CHECK(F.solve_norm(0) == 0);
    // least x in GF(9) with x * x^3 = x^4 = 1, by brute force over 9 elements
    fe expect = 0;
    for (std::uint32_t x = 1; x < 9; ++x)
        if (F.pow((fe)x, 4) == 1) { expect = (fe)x; break; }
    CHECK(F.solve_norm(1) == expect);
    for (fe a : {(fe)0, (fe)1, (fe)2}) CHECK(F.norm(F.solve_norm(a)) == a);
    CHECK_THROWS_AS(F.solve_norm(F.delta()), std::invalid_argument);  // not sigma-fixed
}

TEST_CASE("solve_trace and delta") {
    for (auto [p, m] : {std::pair{3, 2}, {2, 2}, {5, 2}}) {
        const Field& F = Field::get(p, m);
        for (std::uint32_t a = 0; a < F.q(); ++a) {
            if (!F.sigma_fixed((fe)a)) continue;
            CHECK(F.trace(F.solve_trace((fe)a)) == a);
        }
        fe d = F.delta();
        CHECK(d != 0);
        if (p != 2) {
            CHECK(F.add(d, F.frob(d)) == 0);
            CHECK(!F.sigma_fixed(d));
        } else {
            CHECK(d == 1);
        }
    }
}

TEST_CASE("larger fields still construct") {
    const Field& F = Field::get(2, 8);
    CHECK(F.q() == 256);
    CHECK(F.mul(F.generator(), F.inv(F.generator())) == 1);
    CHECK(Field::get(7, 2).q0() == 7);
}
