#include "freqstokes/mesh_io.hpp"

#include <fstream>
#include <set>
#include <vector>

#include <json.hpp>

namespace freqstokes {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& ctx, const std::string& what) {
    throw MeshError(ctx + ": " + what);
}

// nlohmann keeps the last value for repeated keys, so duplicates are caught
// during the parse with a callback.
json parse_checked(const std::string& text, const std::string& ctx) {
    std::vector<std::set<std::string>> keys;
    json::parser_callback_t cb = [&](int, json::parse_event_t event, json& parsed) {
        if (event == json::parse_event_t::object_start) {
            keys.emplace_back();
        } else if (event == json::parse_event_t::object_end) {
            keys.pop_back();
        } else if (event == json::parse_event_t::key) {
            if (!keys.back().insert(parsed.get<std::string>()).second)
                fail(ctx, "duplicate key '" + parsed.get<std::string>() + "'");
        }
        return true;
    };
    try {
        return json::parse(text, cb);
    } catch (const json::parse_error& e) {
        fail(ctx, std::string("invalid JSON: ") + e.what());
    }
}

} // namespace

Mesh mesh_from_json_string(const std::string& text, const std::string& ctx) {
    json doc = parse_checked(text, ctx);
    if (!doc.is_object()) fail(ctx, "top level is not an object");
    for (const char* field : {"dimension", "nodes", "elements", "patches"})
        if (!doc.contains(field)) fail(ctx, std::string("missing field '") + field + "'");

    if (!doc["dimension"].is_number_integer()) fail(ctx, "'dimension' must be an integer");
    const int dim = doc["dimension"].get<int>();
    if (dim != 2 && dim != 3) fail(ctx, "'dimension' must be 2 or 3");

    std::vector<Vec3> nodes;
    if (!doc["nodes"].is_array()) fail(ctx, "'nodes' must be an array");
    nodes.reserve(doc["nodes"].size());
    for (size_t i = 0; i < doc["nodes"].size(); ++i) {
        const auto& row = doc["nodes"][i];
        if (!row.is_array() || row.size() != static_cast<size_t>(dim))
            fail(ctx, "nodes[" + std::to_string(i) + "] must be an array of " +
                          std::to_string(dim) + " numbers");
        Vec3 p;
        for (int d = 0; d < dim; ++d) {
            if (!row[d].is_number()) fail(ctx, "nodes[" + std::to_string(i) + "] has a non-number");
            p[d] = row[d].get<double>();
        }
        nodes.push_back(p);
    }

    std::vector<int> elems;
    if (!doc["elements"].is_array()) fail(ctx, "'elements' must be an array");
    const int nen = dim + 1;
    elems.reserve(doc["elements"].size() * nen);
    for (size_t e = 0; e < doc["elements"].size(); ++e) {
        const auto& row = doc["elements"][e];
        if (!row.is_array() || row.size() != static_cast<size_t>(nen))
            fail(ctx, "elements[" + std::to_string(e) + "] must be an array of " +
                          std::to_string(nen) + " node indices");
        for (int a = 0; a < nen; ++a) {
            if (!row[a].is_number_integer())
                fail(ctx, "elements[" + std::to_string(e) + "] has a non-integer index");
            elems.push_back(row[a].get<int>());
        }
    }

    Mesh::PatchMap patches;
    if (!doc["patches"].is_object()) fail(ctx, "'patches' must be an object");
    for (const auto& [name, facets] : doc["patches"].items()) {
        if (!facets.is_array()) fail(ctx, "patches." + name + " must be an array");
        auto& flat = patches[name];
        flat.reserve(facets.size() * dim);
        for (size_t f = 0; f < facets.size(); ++f) {
            const auto& row = facets[f];
            if (!row.is_array() || row.size() != static_cast<size_t>(dim))
                fail(ctx, "patches." + name + "[" + std::to_string(f) + "] must be an array of " +
                              std::to_string(dim) + " node indices");
            for (int a = 0; a < dim; ++a) {
                if (!row[a].is_number_integer())
                    fail(ctx, "patches." + name + "[" + std::to_string(f) + "] has a non-integer index");
                flat.push_back(row[a].get<int>());
            }
        }
    }

    try {
        return Mesh(dim, std::move(nodes), std::move(elems), std::move(patches));
    } catch (const MeshError& e) {
        fail(ctx, e.what());
    }
}

std::string mesh_to_json_string(const Mesh& mesh) {
    json doc;
    doc["dimension"] = mesh.dimension();
    auto& jn = doc["nodes"] = json::array();
    for (const auto& p : mesh.nodes()) {
        json row = json::array({p.x, p.y});
        if (mesh.dimension() == 3) row.push_back(p.z);
        jn.push_back(std::move(row));
    }
    auto& je = doc["elements"] = json::array();
    for (int e = 0; e < mesh.num_elements(); ++e) {
        json row = json::array();
        for (int v : mesh.element(e)) row.push_back(v);
        je.push_back(std::move(row));
    }
    auto& jp = doc["patches"] = json::object();
    for (const auto& [name, flat] : mesh.patches()) {
        json list = json::array();
        const int nf = static_cast<int>(flat.size()) / mesh.dimension();
        for (int f = 0; f < nf; ++f) {
            json row = json::array();
            for (int a = 0; a < mesh.dimension(); ++a)
                row.push_back(flat[static_cast<size_t>(f) * mesh.dimension() + a]);
            list.push_back(std::move(row));
        }
        jp[name] = std::move(list);
    }
    return doc.dump();
}

Mesh read_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MeshError(path + ": cannot open for reading");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return mesh_from_json_string(text, path);
}

void write_mesh(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw MeshError(path + ": cannot open for writing");
    out << mesh_to_json_string(mesh) << '\n';
    if (!out) throw MeshError(path + ": write failed");
}

} // namespace freqstokes
