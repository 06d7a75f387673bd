#pragma once

#include <string>

#include "json.hpp"
#include "polar/genset.hpp"

namespace polar {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

json field_to_json(const Field& F);
const Field& field_from_json(const json& j);

const char* form_name(FormKind k);
FormKind form_from_name(const std::string& s);

json subspace_to_json(const Subspace& s);
Subspace subspace_from_json(const Field& F, const json& j, int ambient);

// form/field metadata shared by every file kind
json space_meta(const FormSpace& V, int k);

json geometry_to_json(const Geometry& G);
// Rebuilds a Geometry (points, lines, adjacency) from its JSON export. The
// backing complex is created on the fly and owned by the returned pair.
struct LoadedGeometry {
    std::unique_ptr<FormSpace> space;
    Geometry geometry;
};
LoadedGeometry geometry_from_json(const json& j);

json genset_to_json(const FormSpace& V, int k, const GenSetBuild& S, std::uint64_t seed);
GenSetBuild genset_from_json(const FormSpace& V, const json& j);

json certificate_to_json(const RankCertificate& c);

json embedding_to_json(const EmbeddedGeometry& E);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace polar
