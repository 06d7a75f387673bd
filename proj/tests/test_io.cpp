#include <cstdio>

#include "doctest.h"
#include "polar/io.hpp"

using namespace polar;

TEST_CASE("field metadata round trip") {
    const Field& F = Field::get(3, 2);
    json j = field_to_json(F);
    CHECK(&field_from_json(j) == &F);
    j["poly"] = std::vector<int>{1, 0, 1};
    CHECK_THROWS_AS(field_from_json(j), std::invalid_argument);
}

TEST_CASE("subspace round trip") {
    const Field& F = Field::get(3, 1);
    Mat m(2, 4);
    m.at(0, 0) = 1;
    m.at(1, 1) = 2;
    Subspace s = span_of(F, m);
    CHECK(subspace_from_json(F, subspace_to_json(s), 4) == s);
}

TEST_CASE("geometry export and reload") {
    FormSpace V(Field::get(3, 1), 2, FormKind::Symplectic);
    PolarComplex C(V);
    Geometry G = build_geometry(C, 1);
    json j = geometry_to_json(G);
    CHECK(j["schema"] == 1);
    CHECK(j["form"] == "sp");
    CHECK(j["points"].size() == 40);
    CHECK(j["lines"].size() == 40);
    LoadedGeometry L = geometry_from_json(j);
    CHECK(L.geometry.num_points() == 40);
    CHECK(L.geometry.line_pts == G.line_pts);
}

TEST_CASE("genset and certificate serialisation") {
    FormSpace V(Field::get(3, 1), 2, FormKind::Symplectic);
    GenSetBuild S = build_genset(V, 2);
    json j = genset_to_json(V, 2, S, 0);
    CHECK(j["size"] == 5);
    CHECK(j["expected"] == 5);
    GenSetBuild back = genset_from_json(V, j);
    CHECK(back.points == S.points);
    CHECK(back.tags == S.tags);

    PolarComplex C(V);
    Geometry G = build_geometry(C, 2);
    EmbeddedGeometry E = embed(G);
    RankCertificate cert = certify(G, E, resolve_ids(G, S));
    json cj = certificate_to_json(cert);
    CHECK(cj["verdict"] == "certified-minimal");
    CHECK(cj["set_size"] == 5);
    CHECK(cj["closure_full"] == true);
}

TEST_CASE("embedding serialisation") {
    FormSpace V(Field::get(3, 1), 2, FormKind::Symplectic);
    PolarComplex C(V);
    Geometry G = build_geometry(C, 2);
    EmbeddedGeometry E = embed(G);
    json j = embedding_to_json(E);
    CHECK(j["width"] == 6);
    CHECK(j["span_dim"] == 5);
    CHECK(j["vectors"].size() == 40);
}

TEST_CASE("file round trip") {
    json j{{"schema", 1}, {"x", 42}};
    std::string path = "io_test_tmp.json";
    write_json_file(path, j);
    CHECK(read_json_file(path) == j);
    std::remove(path.c_str());
    CHECK_THROWS(read_json_file("does/not/exist.json"));
}
