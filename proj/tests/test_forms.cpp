#include <random>
#include <stdexcept>

#include "doctest.h"
#include "polar/forms.hpp"
#include "support/oracle.hpp"

using namespace polar;

namespace {
std::vector<fe> random_vec(const Field& F, int d, std::mt19937_64& rng) {
    std::vector<fe> v(d);
    for (fe& x : v) x = (fe)(rng() % F.q());
    return v;
}
Subspace span_rows(const Field& F, std::initializer_list<std::vector<fe>> rows) {
    Mat m(0, (int)rows.begin()->size());
    for (const auto& r : rows) m.append_row(r);
    return span_of(F, std::move(m));
}
}  // namespace

TEST_CASE("hyperbolic pairings of the designated basis") {
    for (auto kind : {FormKind::Symplectic, FormKind::Hermitian}) {
        const Field& F = kind == FormKind::Hermitian ? Field::get(3, 2) : Field::get(3, 1);
        FormSpace V(F, 3, kind);
        for (int i = 0; i < 6; ++i)
            for (int j = i; j < 6; ++j) {
                fe want = (j == i + 3) ? (fe)1 : (fe)0;
                CHECK(V.eval(V.unit(i), V.unit(j)) == want);
            }
    }
    CHECK_THROWS_AS(FormSpace(Field::get(3, 1), 2, FormKind::Hermitian), std::invalid_argument);
}

TEST_CASE("symplectic alternation and hermitian symmetry") {
    std::mt19937_64 rng(5);
    FormSpace S(Field::get(3, 1), 2, FormKind::Symplectic);
    for (int i = 0; i < 100; ++i) {
        auto v = random_vec(S.field(), 4, rng);
        CHECK(S.eval(v, v) == 0);
    }
    FormSpace H(Field::get(3, 2), 2, FormKind::Hermitian);
    for (int i = 0; i < 100; ++i) {
        auto u = random_vec(H.field(), 4, rng), v = random_vec(H.field(), 4, rng);
        CHECK(H.eval(u, v) == H.field().frob(H.eval(v, u)));
    }
}

TEST_CASE("form agrees with the explicit Gram matrix oracle") {
    std::mt19937_64 rng(9);
    for (auto kind : {FormKind::Symplectic, FormKind::Hermitian}) {
        const Field& F = kind == FormKind::Hermitian ? Field::get(3, 2) : Field::get(3, 1);
        FormSpace V(F, 2, kind);
        oracle::NSpace N(V);
        for (int i = 0; i < 50; ++i) {
            auto u = random_vec(F, 4, rng), v = random_vec(F, 4, rng);
            oracle::NVec nu(u.begin(), u.end()), nv(v.begin(), v.end());
            CHECK((int)V.eval(u, v) == N.form(nu, nv));
        }
    }
}

TEST_CASE("perp") {
    FormSpace V(Field::get(3, 1), 2, FormKind::Symplectic);
    const Field& F = V.field();
    // V^perp = 0 (non-degeneracy)
    Mat full(4, 4);
    for (int i = 0; i < 4; ++i) full.at(i, i) = 1;
    CHECK(V.perp(span_of(F, full)).dim() == 0);
    // <e1>^perp in Sp_4(3) = <e1, e2, e4>
    Subspace e1 = span_rows(F, {V.unit(0)});
    Subspace p = V.perp(e1);
    CHECK(p.dim() == 3);
    CHECK(contains_vector(F, p, V.unit(0)));
    CHECK(contains_vector(F, p, V.unit(1)));
    CHECK(contains_vector(F, p, V.unit(3)));
    CHECK(!contains_vector(F, p, V.unit(2)));
}

TEST_CASE("perp properties on random subspaces") {
    std::mt19937_64 rng(13);
    for (auto kind : {FormKind::Symplectic, FormKind::Hermitian}) {
        const Field& F = kind == FormKind::Hermitian ? Field::get(3, 2) : Field::get(3, 1);
        FormSpace V(F, 3, kind);
        for (int trial = 0; trial < 50; ++trial) {
            Mat m(1 + (int)(rng() % 4), 6);
            for (fe& x : m.a) x = (fe)(rng() % F.q());
            Subspace U = span_of(F, m);
            if (U.dim() == 0) continue;
            Subspace Up = V.perp(U);
            REQUIRE(U.dim() + Up.dim() == 6);
            REQUIRE(V.perp(Up) == U);
        }
    }
}

TEST_CASE("radical") {
    FormSpace V(Field::get(3, 1), 3, FormKind::Symplectic);
    const Field& F = V.field();
    Mat full(6, 6);
    for (int i = 0; i < 6; ++i) full.at(i, i) = 1;
    CHECK(V.radical(span_of(F, full)).dim() == 0);
    Subspace ti = span_rows(F, {V.unit(0), V.unit(1)});
    CHECK(V.radical(ti) == ti);
    // radical of <e1, e2, f1> = <e2>
    Subspace W = span_rows(F, {V.unit(0), V.unit(1), V.unit(3)});
    Subspace R = V.radical(W);
    CHECK(R.dim() == 1);
    CHECK(contains_vector(F, R, V.unit(1)));
}

TEST_CASE("totally isotropic test agrees with perp containment on all 2-spaces") {
    FormSpace V(Field::get(3, 1), 2, FormKind::Symplectic);
    const Field& F = V.field();
    oracle::NSpace N(V);
    int ti_count = 0;
    for (const auto& rows : N.all_two_spaces()) {
        Mat m(0, 4);
        for (const auto& r : rows) m.append_row(std::vector<fe>(r.begin(), r.end()));
        Subspace U = span_of(F, std::move(m));
        REQUIRE(U.dim() == 2);
        bool lib = V.totally_isotropic(U);
        bool via_perp = subspace_leq(F, U, V.perp(U));
        REQUIRE(lib == via_perp);
        ti_count += lib;
    }
    CHECK(ti_count == 40);  // t.i. 2-spaces of Sp_4(3)
    CHECK(V.totally_isotropic(span_rows(F, {V.unit(0), V.unit(1)})));
    CHECK(!V.totally_isotropic(span_rows(F, {V.unit(0), V.unit(2)})));
}

TEST_CASE("hyperbolic basis reproduces the designated basis on the standard space") {
    for (auto kind : {FormKind::Symplectic, FormKind::Hermitian}) {
        const Field& F = kind == FormKind::Hermitian ? Field::get(3, 2) : Field::get(3, 1);
        for (int n : {2, 3}) {
            FormSpace V(F, n, kind);
            Mat full(2 * n, 2 * n);
            for (int i = 0; i < 2 * n; ++i) full.at(i, i) = 1;
            auto hb = V.hyperbolic_basis(span_of(F, full));
            REQUIRE((int)hb.size() == 2 * n);
            for (int i = 0; i < 2 * n; ++i) CHECK(hb[i] == V.unit(i));
        }
    }
}

TEST_CASE("hyperbolic basis of an anisotropic-looking hermitian plane") {
    FormSpace V(Field::get(3, 2), 2, FormKind::Hermitian);
    const Field& F = V.field();
    // both RREF rows have nonzero norm; Witt index is still 1
    std::vector<fe> r1 = {1, 0, 1, 0}, r2 = {0, 1, 0, 1};
    Subspace W = span_rows(F, {r1, r2});
    CHECK(V.eval(W.basis.row(0), W.basis.row(0)) != 0);
    auto hb = V.hyperbolic_basis(W);
    REQUIRE(hb.size() == 2);
    CHECK(V.eval(hb[0], hb[0]) == 0);
    CHECK(V.eval(hb[1], hb[1]) == 0);
    CHECK(V.eval(hb[0], hb[1]) == 1);
    CHECK(contains_vector(F, W, hb[0]));
    CHECK(contains_vector(F, W, hb[1]));
}

TEST_CASE("hyperbolic basis postcondition replay on witt complements") {
    for (auto kind : {FormKind::Symplectic, FormKind::Hermitian}) {
        const Field& F = kind == FormKind::Hermitian ? Field::get(3, 2) : Field::get(3, 1);
        FormSpace V(F, 3, kind);
        auto parts = V.witt_complement();
        auto hb = V.hyperbolic_basis(parts.W);
        int m = (int)hb.size() / 2;
        REQUIRE(m == 2);
        for (int i = 0; i < 2 * m; ++i)
            for (int j = i; j < 2 * m; ++j) {
                fe want = (j == i + m) ? (fe)1 : (fe)0;
                REQUIRE(V.eval(hb[i], hb[j]) == want);
            }
    }
    // degenerate input rejected
    FormSpace V(Field::get(3, 1), 2, FormKind::Symplectic);
    Subspace bad = span_rows(V.field(), {V.unit(0), V.unit(1)});
    CHECK_THROWS_AS(V.hyperbolic_basis(bad), std::invalid_argument);
}

TEST_CASE("transvections") {
    FormSpace V(Field::get(3, 2), 2, FormKind::Hermitian);
    const Field& F = V.field();
    std::mt19937_64 rng(17);
    std::vector<fe> u = V.unit(0);
    CHECK_THROWS_AS(V.transvect(std::vector<fe>{1, 0, 1, 0}, 1, u), std::invalid_argument);
    for (int trial = 0; trial < 50; ++trial) {
        fe lam = (fe)(1 + rng() % 2);  // nonzero element of the fixed field GF(3)
        auto v = random_vec(F, 4, rng), w = random_vec(F, 4, rng);
        // t(u) = u and t fixes u^perp pointwise
        CHECK(V.transvect(u, lam, u) == u);
        Subspace up = V.perp(span_rows(F, {u}));
        for (int r = 0; r < up.dim(); ++r) {
            std::vector<fe> x(up.basis.row(r).begin(), up.basis.row(r).end());
            CHECK(V.transvect(u, lam, x) == x);
        }
        // isometry for lambda in the fixed subfield
        CHECK(V.eval(V.transvect(u, lam, v), V.transvect(u, lam, w)) == V.eval(v, w));
        // matrix route agrees and has determinant 1
        Mat T = V.transvection_matrix(u, lam);
        std::vector<fe> tv(4, 0);
        for (int j = 0; j < 4; ++j)
            for (int i = 0; i < 4; ++i) tv[j] = F.add(tv[j], F.mul(v[i], T.at(i, j)));
        CHECK(tv == V.transvect(u, lam, v));
        CHECK(det(F, T) == 1);
    }
}

TEST_CASE("witt complement") {
    FormSpace V(Field::get(3, 1), 2, FormKind::Symplectic);
    const Field& F = V.field();
    auto parts = V.witt_complement();
    CHECK(parts.W == span_rows(F, {V.unit(0), V.unit(2)}));
    CHECK(parts.P == span_rows(F, {V.unit(1)}));
    CHECK(parts.Q == span_rows(F, {V.unit(3)}));
    CHECK(parts.W.dim() + 2 == 4);
    CHECK(V.radical(parts.W).dim() == 0);
    // W^perp = <P,Q> is a hyperbolic line: non-degenerate with an isotropic point
    Subspace wp = V.perp(parts.W);
    CHECK(wp == sum(F, parts.P, parts.Q));
    CHECK(V.radical(wp).dim() == 0);
    CHECK(V.eval(parts.P.basis.row(0), parts.Q.basis.row(0)) == 1);
    CHECK_THROWS_AS(FormSpace(F, 1, FormKind::Symplectic).witt_complement(), std::invalid_argument);
}

TEST_CASE("isotropy of x + ay along a hyperbolic pair tracks the trace") {
    FormSpace V(Field::get(3, 2), 2, FormKind::Hermitian);
    const Field& F = V.field();
    auto x = V.unit(0), y = V.unit(2);
    REQUIRE(V.eval(x, y) == 1);
    for (std::uint32_t a = 0; a < 9; ++a) {
        std::vector<fe> v(4);
        for (int i = 0; i < 4; ++i) v[i] = F.add(x[i], F.mul((fe)a, y[i]));
        CHECK(V.isotropic(v) == (F.trace((fe)a) == 0));
    }
}

TEST_CASE("witt index found by greedy extension equals n") {
    for (auto kind : {FormKind::Symplectic, FormKind::Hermitian}) {
        const Field& F = kind == FormKind::Hermitian ? Field::get(3, 2) : Field::get(3, 1);
        for (int n : {2, 3}) {
            FormSpace V(F, n, kind);
            // extend greedily by isotropic vectors of a complement inside the perp
            Subspace U = Subspace::zero(2 * n);
            for (int guard = 0; guard <= n; ++guard) {
                Mat full(2 * n, 2 * n);
                for (int i = 0; i < 2 * n; ++i) full.at(i, i) = 1;
                Subspace amb = U.dim() ? V.perp(U) : span_of(F, full);
                Mat comp(0, 2 * n);
                RowReducer R(F, 2 * n);
                for (int r = 0; r < U.dim(); ++r) R.add(U.basis.row(r));
                for (int r = 0; r < amb.dim(); ++r)
                    if (R.add(amb.basis.row(r))) comp.append_row(amb.basis.row(r));
                if (comp.rows == 0) break;
                std::vector<fe> v;
                try {
                    v = V.isotropic_in(span_of(F, comp));
                } catch (const std::exception&) {
                    break;
                }
                Mat rows = U.basis;
                rows.append_row(v);
                Subspace ext = span_of(F, rows);
                REQUIRE(V.totally_isotropic(ext));
                U = ext;
            }
            CHECK(U.dim() == n);
        }
    }
}

TEST_CASE("complete_hyperbolic extends a partial frame") {
    FormSpace V(Field::get(3, 2), 3, FormKind::Hermitian);
    std::vector<std::optional<std::vector<fe>>> es(3), fs(3);
    es[0] = V.unit(0);
    fs[2] = V.unit(5);
    auto E = V.complete_hyperbolic(es, fs);
    REQUIRE((int)E.size() == 6);
    CHECK(E[0] == V.unit(0));
    CHECK(E[5] == V.unit(5));
    for (int i = 0; i < 6; ++i)
        for (int j = i; j < 6; ++j) {
            fe want = (j == i + 3) ? (fe)1 : (fe)0;
            REQUIRE(V.eval(E[i], E[j]) == want);
        }
}
