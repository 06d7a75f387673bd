#include <map>

#include "doctest.h"
#include "polar/geometry.hpp"
#include "support/oracle.hpp"

using namespace polar;

// Cross-check enumeration, isotropy and relation codes against the naive
// exhaustive-search oracle on the smallest symplectic instance; the Hermitian
// instance runs in the acceptance suite.
TEST_CASE("library agrees with the exhaustive oracle on Sp_4(3)") {
    FormSpace V(Field::get(3, 1), 2, FormKind::Symplectic);
    const Field& F = V.field();
    oracle::NSpace N(V);
    PolarComplex C(V);
    Geometry G1 = build_geometry(C, 1);
    Geometry G2 = build_geometry(C, 2);

    // point counts
    auto iso = N.isotropic_points();
    CHECK(iso.size() == G1.num_points());

    // every oracle isotropic point appears in the library enumeration
    for (const auto& v : iso) {
        std::vector<fe> row(v.begin(), v.end());
        REQUIRE(G1.find_point(span_of_vector(F, row)).has_value());
    }

    // t.i. flags agree on every 2-space of V
    auto all2 = N.all_two_spaces();
    std::size_t ti_count = 0;
    for (const auto& rows : all2) {
        Mat m(0, 4);
        for (const auto& r : rows) m.append_row(std::vector<fe>(r.begin(), r.end()));
        Subspace U = span_of(F, std::move(m));
        bool lib_ti = V.totally_isotropic(U);
        bool orc_ti = N.pairwise_isotropic(rows);
        REQUIRE(lib_ti == orc_ti);
        if (orc_ti) {
            ++ti_count;
            REQUIRE(G2.find_point(U).has_value());
        } else {
            REQUIRE(!G2.find_point(U).has_value());
        }
    }
    CHECK(ti_count == G2.num_points());
    CHECK(N.ti_two_spaces().size() == G2.num_points());
    CHECK(N.ti_two_spaces().size() == G1.num_lines());  // lines of the polar space

    // line membership: each t.i. 2-space's points are exactly a line of Gamma_1
    for (const auto& rows : N.ti_two_spaces()) {
        auto pts = N.span_points(rows);
        std::vector<std::uint32_t> ids;
        for (const auto& v : pts) {
            auto id = G1.find_point(span_of_vector(F, std::vector<fe>(v.begin(), v.end())));
            REQUIRE(id);
            ids.push_back(*id);
        }
        std::sort(ids.begin(), ids.end());
        bool found = false;
        for (std::uint32_t l = 0; l < G1.num_lines() && !found; ++l) {
            auto lp = G1.line(l);
            found = std::equal(lp.begin(), lp.end(), ids.begin(), ids.end());
        }
        REQUIRE(found);
    }

    // relation codes agree on every pair of Gamma_2 points
    std::vector<oracle::NSub> osubs(G2.num_points());
    for (const auto& rows : N.ti_two_spaces()) {
        Mat m(0, 4);
        for (const auto& r : rows) m.append_row(std::vector<fe>(r.begin(), r.end()));
        auto id = G2.find_point(span_of(F, std::move(m)));
        REQUIRE(id);
        osubs[*id] = rows;
    }
    for (std::uint32_t x = 0; x < G2.num_points(); ++x)
        for (std::uint32_t y = x; y < G2.num_points(); ++y)
            REQUIRE(N.classify(osubs[x], osubs[y]) == rel_name(classify(G2, x, y)));
}
