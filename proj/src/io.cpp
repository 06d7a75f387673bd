#include "polar/io.hpp"

#include <fstream>
#include <stdexcept>

namespace polar {

json field_to_json(const Field& F) {
    return json{{"p", F.p()}, {"m", F.m()}, {"poly", F.modulus()}, {"generator", F.generator()}};
}

const Field& field_from_json(const json& j) {
    const Field& F = Field::get(j.at("p").get<int>(), j.at("m").get<int>());
    if (j.contains("poly") && j.at("poly").get<std::vector<fe>>() != F.modulus())
        throw std::invalid_argument("field polynomial mismatch (encodings would differ)");
    return F;
}

const char* form_name(FormKind k) { return k == FormKind::Symplectic ? "sp" : "her"; }

FormKind form_from_name(const std::string& s) {
    if (s == "sp") return FormKind::Symplectic;
    if (s == "her") return FormKind::Hermitian;
    throw std::invalid_argument("unknown form kind: " + s);
}

json subspace_to_json(const Subspace& s) {
    json rows = json::array();
    for (int r = 0; r < s.dim(); ++r)
        rows.push_back(std::vector<fe>(s.basis.row(r).begin(), s.basis.row(r).end()));
    return rows;
}

Subspace subspace_from_json(const Field& F, const json& j, int ambient) {
    Mat m(0, ambient);
    for (const auto& row : j) {
        auto v = row.get<std::vector<fe>>();
        if ((int)v.size() != ambient) throw std::invalid_argument("row length mismatch");
        m.append_row(v);
    }
    return span_of(F, std::move(m));
}

json space_meta(const FormSpace& V, int k) {
    return json{{"schema", kSchemaVersion},
                {"field", field_to_json(V.field())},
                {"form", form_name(V.kind())},
                {"n", V.n()},
                {"k", k}};
}

json geometry_to_json(const Geometry& G) {
    json j = space_meta(*G.V, G.k);
    j["kind"] = "geometry";
    json pts = json::array();
    for (std::uint32_t i = 0; i < G.num_points(); ++i) pts.push_back(subspace_to_json(G.point_subspace(i)));
    j["points"] = std::move(pts);
    json lines = json::array();
    for (std::uint32_t l = 0; l < G.num_lines(); ++l) {
        auto pl = G.line(l);
        lines.push_back(std::vector<std::uint32_t>(pl.begin(), pl.end()));
    }
    j["lines"] = std::move(lines);
    return j;
}

LoadedGeometry geometry_from_json(const json& j) {
    const Field& F = field_from_json(j.at("field"));
    auto V = std::make_unique<FormSpace>(F, j.at("n").get<int>(),
                                         form_from_name(j.at("form").get<std::string>()));
    int k = j.at("k").get<int>();
    PolarComplex C(*V);
    Geometry G = build_geometry(C, k);
    // cross-check the file against the fresh enumeration
    if (j.at("points").size() != G.num_points() || j.at("lines").size() != G.num_lines())
        throw std::invalid_argument("geometry file does not match enumeration");
    for (std::uint32_t i = 0; i < G.num_points(); ++i) {
        Subspace s = subspace_from_json(F, j.at("points")[i], V->dim());
        auto id = G.find_point(s);
        if (!id || *id != i) throw std::invalid_argument("geometry file point order mismatch");
    }
    return LoadedGeometry{std::move(V), std::move(G)};
}

json genset_to_json(const FormSpace& V, int k, const GenSetBuild& S, std::uint64_t seed) {
    json j = space_meta(V, k);
    j["kind"] = "genset";
    j["size"] = S.points.size();
    j["expected"] = expected_rank(V.kind(), V.n(), k);
    j["seed"] = seed;
    json pts = json::array(), tags = json::array();
    for (std::size_t i = 0; i < S.points.size(); ++i) {
        pts.push_back(subspace_to_json(S.points[i]));
        tags.push_back(gen_tag_name(S.tags[i]));
    }
    j["points"] = std::move(pts);
    j["tags"] = std::move(tags);
    j["trace"] = S.trace;
    return j;
}

GenSetBuild genset_from_json(const FormSpace& V, const json& j) {
    GenSetBuild out;
    for (const auto& p : j.at("points"))
        out.points.push_back(subspace_from_json(V.field(), p, V.dim()));
    for (const auto& t : j.at("tags")) {
        std::string s = t.get<std::string>();
        bool found = false;
        for (GenTag g : {GenTag::BaseApartment, GenTag::BaseDual, GenTag::Carried, GenTag::HatPK1,
                         GenTag::HatQK1, GenTag::HatK2})
            if (s == gen_tag_name(g)) {
                out.tags.push_back(g);
                found = true;
                break;
            }
        if (!found) throw std::invalid_argument("unknown provenance tag: " + s);
    }
    if (j.contains("trace")) out.trace = j.at("trace").get<std::vector<std::string>>();
    return out;
}

json certificate_to_json(const RankCertificate& c) {
    json j{{"schema", kSchemaVersion},
           {"kind", "certificate"},
           {"set_size", c.set_size},
           {"lower_bound", c.lower_bound},
           {"d_k", c.d_k},
           {"closure_full", c.closure_full},
           {"verdict", verdict_name(c.verdict)},
           {"exploratory", c.exploratory}};
    if (c.li) j["li_bound"] = *c.li;
    return j;
}

json embedding_to_json(const EmbeddedGeometry& E) {
    json j = space_meta(*E.G->V, E.G->k);
    j["kind"] = "embedding";
    j["width"] = E.width;
    j["span_dim"] = E.span_dim;
    if (E.baer_dim) j["baer_dim"] = *E.baer_dim;
    json vecs = json::array();
    for (std::uint32_t i = 0; i < E.G->num_points(); ++i) {
        auto v = E.at(i);
        vecs.push_back(std::vector<fe>(v.begin(), v.end()));
    }
    j["vectors"] = std::move(vecs);
    return j;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(1, '\t') << "\n";
}

}  // namespace polar
