#include "freqstokes/mesh.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>

namespace freqstokes {

namespace {

double signed_measure(int dim, const Vec3* p) {
    if (dim == 2) return 0.5 * (cross(p[1] - p[0], p[2] - p[0]).z);
    return dot(cross(p[1] - p[0], p[2] - p[0]), p[3] - p[0]) / 6.0;
}

// Hashable key for a facet given by sorted node indices.
struct FacetKey {
    std::array<int, 3> n{-1, -1, -1};
    bool operator==(const FacetKey&) const = default;
};
struct FacetKeyHash {
    size_t operator()(const FacetKey& k) const {
        size_t h = 1469598103934665603ull;
        for (int v : k.n) {
            h ^= static_cast<size_t>(v) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

FacetKey make_key(std::span<const int> nodes) {
    FacetKey k;
    for (size_t i = 0; i < nodes.size(); ++i) k.n[i] = nodes[i];
    std::sort(k.n.begin(), k.n.begin() + nodes.size());
    return k;
}

} // namespace

Mesh::Mesh(int dimension, std::vector<Vec3> nodes, std::vector<int> elements, PatchMap patches)
    : dim_(dimension), nodes_(std::move(nodes)), elements_(std::move(elements)),
      patches_(std::move(patches)) {
    if (dim_ != 2 && dim_ != 3) throw MeshError("mesh dimension must be 2 or 3");
    if (elements_.size() % (dim_ + 1) != 0)
        throw MeshError("element array length is not a multiple of nodes per element");
    validate_and_canonicalize();
}

void Mesh::validate_and_canonicalize() {
    const int nen = dim_ + 1;
    const int nel = num_elements();
    const int nnd = num_nodes();

    for (int e = 0; e < nel; ++e) {
        int* en = elements_.data() + static_cast<size_t>(e) * nen;
        for (int a = 0; a < nen; ++a) {
            if (en[a] < 0 || en[a] >= nnd)
                throw MeshError("element " + std::to_string(e) + " references node index " +
                                std::to_string(en[a]) + " outside [0, " + std::to_string(nnd) + ")");
            for (int b = 0; b < a; ++b)
                if (en[a] == en[b])
                    throw MeshError("element " + std::to_string(e) + " repeats node " +
                                    std::to_string(en[a]));
        }
        Vec3 p[4];
        for (int a = 0; a < nen; ++a) p[a] = nodes_[en[a]];
        double vol = signed_measure(dim_, p);
        if (vol < 0.0) { // canonical orientation: swap last two nodes
            std::swap(en[nen - 2], en[nen - 1]);
            vol = -vol;
        }
        double hmax = 0.0;
        for (int a = 0; a < nen; ++a)
            for (int b = 0; b < a; ++b) hmax = std::max(hmax, norm(nodes_[en[a]] - nodes_[en[b]]));
        if (vol <= 1e-14 * std::pow(hmax, dim_))
            throw MeshError("element " + std::to_string(e) + " is degenerate (measure " +
                            std::to_string(vol) + ")");
    }

    // Face incidence: boundary faces appear in exactly one element.
    std::unordered_map<FacetKey, std::pair<int, int>, FacetKeyHash> face_count; // (element, count)
    std::array<int, 3> fbuf{};
    for (int e = 0; e < nel; ++e) {
        auto en = element(e);
        for (int skip = 0; skip < nen; ++skip) {
            int m = 0;
            for (int a = 0; a < nen; ++a)
                if (a != skip) fbuf[m++] = en[a];
            FacetKey key = make_key(std::span<const int>(fbuf.data(), dim_));
            auto [it, inserted] = face_count.try_emplace(key, std::pair<int, int>{e, 0});
            it->second.second += 1;
        }
    }

    std::unordered_map<FacetKey, std::string, FacetKeyHash> claimed;
    for (auto& [name, facets] : patches_) {
        if (name.empty()) throw MeshError("patch with empty name");
        if (facets.size() % dim_ != 0)
            throw MeshError("patch '" + name + "': facet array length not a multiple of " +
                            std::to_string(dim_));
        auto& owners = facet_elem_[name];
        const int nf = static_cast<int>(facets.size()) / dim_;
        owners.resize(nf);
        for (int f = 0; f < nf; ++f) {
            std::span<const int> fn(facets.data() + static_cast<size_t>(f) * dim_, dim_);
            for (int v : fn)
                if (v < 0 || v >= nnd)
                    throw MeshError("patch '" + name + "' facet " + std::to_string(f) +
                                    " references node index " + std::to_string(v));
            FacetKey key = make_key(fn);
            auto it = face_count.find(key);
            if (it == face_count.end())
                throw MeshError("patch '" + name + "' facet " + std::to_string(f) +
                                " is not a face of any element");
            if (it->second.second != 1)
                throw MeshError("patch '" + name + "' facet " + std::to_string(f) +
                                " is an interior face (shared by " +
                                std::to_string(it->second.second) + " elements)");
            auto [cit, fresh] = claimed.try_emplace(key, name);
            if (!fresh)
                throw MeshError("facet " + std::to_string(f) + " of patch '" + name +
                                "' already belongs to patch '" + cit->second + "'");
            owners[f] = it->second.first;
        }
    }
}

int Mesh::num_facets(const std::string& name) const {
    auto it = patches_.find(name);
    if (it == patches_.end()) throw MeshError("unknown patch '" + name + "'");
    return static_cast<int>(it->second.size()) / dim_;
}

std::span<const int> Mesh::facet(const std::string& name, int f) const {
    auto it = patches_.find(name);
    if (it == patches_.end()) throw MeshError("unknown patch '" + name + "'");
    return {it->second.data() + static_cast<size_t>(f) * dim_, static_cast<size_t>(dim_)};
}

const std::vector<int>& Mesh::facet_owners(const std::string& name) const {
    auto it = facet_elem_.find(name);
    if (it == facet_elem_.end()) throw MeshError("unknown patch '" + name + "'");
    return it->second;
}

int Mesh::facet_element(const std::string& name, int f) const { return facet_owners(name)[f]; }

FacetGeometry Mesh::facet_geometry(const std::string& name, int f) const {
    auto fn = facet(name, f);
    FacetGeometry g;
    Vec3 centroid;
    for (int v : fn) centroid += nodes_[v];
    centroid = centroid / static_cast<double>(dim_);
    if (dim_ == 3) {
        Vec3 n = cross(nodes_[fn[1]] - nodes_[fn[0]], nodes_[fn[2]] - nodes_[fn[0]]);
        g.measure = 0.5 * norm(n);
        g.normal = n / (2.0 * g.measure);
    } else {
        Vec3 t = nodes_[fn[1]] - nodes_[fn[0]];
        g.measure = norm(t);
        g.normal = Vec3{t.y, -t.x, 0.0} / g.measure;
    }
    // orient outward from the owning element
    auto en = element(facet_element(name, f));
    Vec3 ec;
    for (int v : en) ec += nodes_[v];
    ec = ec / static_cast<double>(dim_ + 1);
    if (dot(g.normal, centroid - ec) < 0.0) g.normal = g.normal * -1.0;
    return g;
}

double Mesh::patch_measure(const std::string& name) const {
    double total = 0.0;
    for (int f = 0; f < num_facets(name); ++f) total += facet_geometry(name, f).measure;
    return total;
}

double Mesh::element_measure(int e) const {
    Vec3 p[4];
    auto en = element(e);
    for (int a = 0; a < dim_ + 1; ++a) p[a] = nodes_[en[a]];
    return signed_measure(dim_, p);
}

double Mesh::total_measure() const {
    double total = 0.0;
    for (int e = 0; e < num_elements(); ++e) total += element_measure(e);
    return total;
}

std::vector<char> Mesh::patch_node_mask(const std::vector<std::string>& names) const {
    std::vector<char> mask(num_nodes(), 0);
    for (const auto& name : names) {
        auto it = patches_.find(name);
        if (it == patches_.end()) throw MeshError("unknown patch '" + name + "'");
        for (int v : it->second) mask[v] = 1;
    }
    return mask;
}

} // namespace freqstokes
