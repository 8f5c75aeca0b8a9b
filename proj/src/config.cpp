#include "freqstokes/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

namespace freqstokes {

using nlohmann::json;

void CaseConfig::validate() const {
    if (!(rho > 0.0)) throw ConfigError("rho must be positive");
    if (!(mu > 0.0)) throw ConfigError("mu must be positive");
    if (!(omega >= 0.0)) throw ConfigError("omega must be non-negative");
    if (!(c_stab > 0.0)) throw ConfigError("c_stab must be positive");
    if (!(tolerance > 0.0 && tolerance < 1.0)) throw ConfigError("tolerance must be in (0, 1)");
    if (max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
    std::set<std::string> seen;
    for (const auto& bc : bcs) {
        if (bc.patch.empty()) throw ConfigError("boundary condition with empty patch name");
        if (!seen.insert(bc.patch).second)
            throw ConfigError("patch '" + bc.patch + "' carries more than one boundary condition");
    }
}

namespace {

Vec3 vec_from(const json& arr, const std::string& where) {
    if (!arr.is_array() || arr.size() < 2 || arr.size() > 3)
        throw ConfigError(where + " must be an array of 2 or 3 numbers");
    Vec3 v;
    for (size_t d = 0; d < arr.size(); ++d) {
        if (!arr[d].is_number()) throw ConfigError(where + " has a non-number entry");
        v[static_cast<int>(d)] = arr[d].get<double>();
    }
    return v;
}

} // namespace

CaseConfig case_from_json_string(const std::string& text, const std::string& ctx) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(ctx + ": invalid JSON: " + e.what());
    }
    if (!doc.is_object()) throw ConfigError(ctx + ": top level is not an object");

    static const std::set<std::string> known = {"rho",       "mu",  "omega", "c_stab",
                                                "tolerance", "max_iterations", "bcs"};
    for (const auto& [key, _] : doc.items())
        if (!known.count(key)) throw ConfigError(ctx + ": unknown field '" + key + "'");

    CaseConfig cfg;
    auto num = [&](const char* key, double fallback, bool required = false) {
        if (!doc.contains(key)) {
            if (required) throw ConfigError(ctx + ": missing field '" + std::string(key) + "'");
            return fallback;
        }
        if (!doc[key].is_number()) throw ConfigError(ctx + ": '" + std::string(key) + "' must be a number");
        return doc[key].get<double>();
    };
    cfg.rho = num("rho", cfg.rho, true);
    cfg.mu = num("mu", cfg.mu, true);
    cfg.omega = num("omega", cfg.omega, true);
    cfg.c_stab = num("c_stab", cfg.c_stab);
    cfg.tolerance = num("tolerance", cfg.tolerance);
    if (doc.contains("max_iterations")) {
        if (!doc["max_iterations"].is_number_integer())
            throw ConfigError(ctx + ": 'max_iterations' must be an integer");
        cfg.max_iterations = doc["max_iterations"].get<int>();
    }
    if (doc.contains("bcs")) {
        if (!doc["bcs"].is_array()) throw ConfigError(ctx + ": 'bcs' must be an array");
        for (size_t i = 0; i < doc["bcs"].size(); ++i) {
            const auto& jb = doc["bcs"][i];
            const std::string where = ctx + ": bcs[" + std::to_string(i) + "]";
            if (!jb.is_object()) throw ConfigError(where + " must be an object");
            BoundaryCondition bc;
            if (!jb.contains("patch") || !jb["patch"].is_string())
                throw ConfigError(where + " missing string field 'patch'");
            bc.patch = jb["patch"].get<std::string>();
            if (!jb.contains("kind") || !jb["kind"].is_string())
                throw ConfigError(where + " missing string field 'kind'");
            const std::string kind = jb["kind"].get<std::string>();
            if (kind == "dirichlet") bc.kind = BcKind::dirichlet;
            else if (kind == "neumann") bc.kind = BcKind::neumann;
            else throw ConfigError(where + ": kind must be 'dirichlet' or 'neumann'");
            if (jb.contains("real")) bc.value_real = vec_from(jb["real"], where + ".real");
            if (jb.contains("imag")) bc.value_imag = vec_from(jb["imag"], where + ".imag");
            cfg.bcs.push_back(std::move(bc));
        }
    }
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(ctx + ": " + e.what());
    }
    return cfg;
}

CaseConfig read_case(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open for reading");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return case_from_json_string(text, path);
}

std::string case_to_json_string(const CaseConfig& cfg) {
    json doc;
    doc["rho"] = cfg.rho;
    doc["mu"] = cfg.mu;
    doc["omega"] = cfg.omega;
    doc["c_stab"] = cfg.c_stab;
    doc["tolerance"] = cfg.tolerance;
    doc["max_iterations"] = cfg.max_iterations;
    auto& jb = doc["bcs"] = json::array();
    for (const auto& bc : cfg.bcs) {
        json one;
        one["patch"] = bc.patch;
        one["kind"] = bc.kind == BcKind::dirichlet ? "dirichlet" : "neumann";
        one["real"] = {bc.value_real.x, bc.value_real.y, bc.value_real.z};
        one["imag"] = {bc.value_imag.x, bc.value_imag.y, bc.value_imag.z};
        jb.push_back(std::move(one));
    }
    return doc.dump();
}

} // namespace freqstokes
