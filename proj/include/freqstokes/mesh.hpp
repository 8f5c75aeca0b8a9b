#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "freqstokes/geometry.hpp"

namespace freqstokes {

class MeshError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FacetGeometry {
    double measure = 0.0; // facet area (3D) or edge length (2D)
    Vec3 normal;          // unit, points out of the adjacent element
};

/// Unstructured simplex mesh (3-node triangles or 4-node tetrahedra) with
/// named boundary patches. Immutable after construction; construction
/// validates indices, fixes element orientation to positive signed measure,
/// rejects degenerate elements and checks that every patch facet is a
/// boundary face of exactly one element.
class Mesh {
public:
    using PatchMap = std::map<std::string, std::vector<int>>;

    Mesh(int dimension, std::vector<Vec3> nodes, std::vector<int> elements, PatchMap patches);

    int dimension() const { return dim_; }
    int nodes_per_element() const { return dim_ + 1; }
    int nodes_per_facet() const { return dim_; }
    int num_nodes() const { return static_cast<int>(nodes_.size()); }
    int num_elements() const { return static_cast<int>(elements_.size()) / (dim_ + 1); }

    const Vec3& node(int i) const { return nodes_[i]; }
    const std::vector<Vec3>& nodes() const { return nodes_; }
    std::span<const int> element(int e) const {
        return {elements_.data() + static_cast<size_t>(e) * (dim_ + 1), static_cast<size_t>(dim_ + 1)};
    }
    const std::vector<int>& element_nodes() const { return elements_; }

    const PatchMap& patches() const { return patches_; }
    bool has_patch(const std::string& name) const { return patches_.count(name) > 0; }
    int num_facets(const std::string& name) const;
    std::span<const int> facet(const std::string& name, int f) const;
    /// Element owning a boundary facet.
    int facet_element(const std::string& name, int f) const;
    /// Measure and outward unit normal of a boundary facet.
    FacetGeometry facet_geometry(const std::string& name, int f) const;
    double patch_measure(const std::string& name) const;

    /// Signed measure of an element (volume in 3D, area in 2D); positive by construction.
    double element_measure(int e) const;
    double total_measure() const;

    /// Marks nodes lying on any of the listed patches.
    std::vector<char> patch_node_mask(const std::vector<std::string>& names) const;

private:
    void validate_and_canonicalize();
    const std::vector<int>& facet_owners(const std::string& name) const;

    int dim_;
    std::vector<Vec3> nodes_;
    std::vector<int> elements_; // flat, stride dim_+1
    PatchMap patches_;          // flat facets, stride dim_
    std::map<std::string, std::vector<int>> facet_elem_; // owning element per patch facet
};

} // namespace freqstokes
