#include "freqstokes/mesh_generate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>

namespace freqstokes {

namespace {

// Splits the prism (b0,b1,b2 | t0,t1,t2), t_k above b_k, into 3 tetrahedra.
// Quad-face diagonals pass through the lowest global node index of each face,
// which makes the choice identical in the two prisms sharing a quad.
void split_prism(const std::array<int, 6>& prism, std::vector<int>& out) {
    std::array<int, 6> v = prism;
    // bring the smallest global index to local position 0
    int smallest = static_cast<int>(std::min_element(v.begin(), v.end()) - v.begin());
    if (smallest >= 3) { // flip prism upside down (keeps vertical adjacency)
        v = {v[3], v[5], v[4], v[0], v[2], v[1]};
        smallest = (smallest == 3) ? 0 : (smallest == 5 ? 1 : 2);
    }
    for (int r = 0; r < smallest; ++r) // rotate bottom ring
        v = {v[1], v[2], v[0], v[4], v[5], v[3]};

    auto emit = [&out](int a, int b, int c, int d) {
        out.insert(out.end(), {a, b, c, d});
    };
    // faces 0-1-4-3 and 0-2-5-3 already split through v[0]; the third quad
    // 1-2-5-4 takes the diagonal through its own smallest index
    if (std::min(v[1], v[5]) < std::min(v[2], v[4])) {
        emit(v[0], v[1], v[2], v[5]);
        emit(v[0], v[1], v[5], v[4]);
        emit(v[0], v[4], v[5], v[3]);
    } else {
        emit(v[0], v[1], v[2], v[4]);
        emit(v[0], v[4], v[2], v[5]);
        emit(v[0], v[4], v[5], v[3]);
    }
}

// Boundary faces (faces owned by exactly one element) in deterministic
// element order, for patch classification.
std::vector<std::array<int, 3>> boundary_faces(int dim, const std::vector<int>& elems) {
    const int nen = dim + 1;
    const int nel = static_cast<int>(elems.size()) / nen;
    std::map<std::array<int, 3>, int> count;
    auto face_key = [&](int e, int skip) {
        std::array<int, 3> f{-1, -1, -1};
        int m = 0;
        for (int a = 0; a < nen; ++a)
            if (a != skip) f[m++] = elems[static_cast<size_t>(e) * nen + a];
        std::sort(f.begin(), f.begin() + dim);
        return f;
    };
    for (int e = 0; e < nel; ++e)
        for (int s = 0; s < nen; ++s) count[face_key(e, s)] += 1;
    std::vector<std::array<int, 3>> result;
    for (int e = 0; e < nel; ++e)
        for (int s = 0; s < nen; ++s) {
            auto key = face_key(e, s);
            if (count[key] == 1) {
                result.push_back(key);
                count[key] = 0; // emit once
            }
        }
    return result;
}

} // namespace

Mesh generate_pipe(double radius, double length, int n_radial, int n_azimuthal, int n_axial) {
    if (radius <= 0.0 || length <= 0.0)
        throw MeshError("pipe radius and length must be positive");
    if (n_radial < 2 || n_axial < 2)
        throw MeshError("pipe n_radial and n_axial must be at least 2");
    if (n_azimuthal < 3)
        throw MeshError("pipe n_azimuthal must be at least 3 (rings degenerate below that)");

    // disc nodes: centre + rings
    std::vector<Vec3> disc;
    disc.push_back({0.0, 0.0, 0.0});
    std::vector<int> ring_start(n_radial + 1, 0);
    ring_start[0] = 0; // centre
    for (int k = 1; k <= n_radial; ++k) {
        ring_start[k] = static_cast<int>(disc.size());
        const int nk = n_azimuthal * k;
        const double rk = radius * k / n_radial;
        for (int j = 0; j < nk; ++j) {
            double th = 2.0 * std::numbers::pi * j / nk;
            disc.push_back({rk * std::cos(th), rk * std::sin(th), 0.0});
        }
    }
    const int disc_n = static_cast<int>(disc.size());

    // disc triangles: fan around the centre, then a zipper between rings
    std::vector<std::array<int, 3>> tris;
    for (int j = 0; j < n_azimuthal; ++j)
        tris.push_back({0, ring_start[1] + j, ring_start[1] + (j + 1) % n_azimuthal});
    for (int k = 2; k <= n_radial; ++k) {
        const int m = n_azimuthal * (k - 1), n = n_azimuthal * k;
        const int in0 = ring_start[k - 1], out0 = ring_start[k];
        int i = 0, j = 0;
        while (i < m || j < n) {
            // compare next angles (i+1)/m vs (j+1)/n exactly in integers
            if (j < n && (i == m || static_cast<long>(j + 1) * m <= static_cast<long>(i + 1) * n)) {
                tris.push_back({out0 + j % n, out0 + (j + 1) % n, in0 + i % m});
                ++j;
            } else {
                tris.push_back({in0 + i % m, out0 + j % n, in0 + (i + 1) % m});
                ++i;
            }
        }
    }

    // extrude layers and split prisms
    std::vector<Vec3> nodes;
    nodes.reserve(static_cast<size_t>(disc_n) * (n_axial + 1));
    for (int l = 0; l <= n_axial; ++l) {
        const double z = (l == n_axial) ? length : length * l / n_axial;
        for (const auto& p : disc) nodes.push_back({p.x, p.y, z});
    }
    std::vector<int> elems;
    elems.reserve(static_cast<size_t>(tris.size()) * n_axial * 12);
    for (int l = 0; l < n_axial; ++l) {
        const int lo = l * disc_n, hi = (l + 1) * disc_n;
        for (const auto& t : tris)
            split_prism({lo + t[0], lo + t[1], lo + t[2], hi + t[0], hi + t[1], hi + t[2]}, elems);
    }

    // classify boundary faces by layer
    Mesh::PatchMap patches;
    auto& inlet = patches["inlet"];
    auto& outlet = patches["outlet"];
    auto& wall = patches["wall"];
    const double ztol = 1e-9 * length;
    for (const auto& f : boundary_faces(3, elems)) {
        double zmin = nodes[f[0]].z, zmax = zmin;
        for (int v : f) {
            zmin = std::min(zmin, nodes[v].z);
            zmax = std::max(zmax, nodes[v].z);
        }
        auto* dst = &wall;
        if (zmax < ztol) dst = &inlet;
        else if (zmin > length - ztol) dst = &outlet;
        dst->insert(dst->end(), f.begin(), f.end());
    }

    return Mesh(3, std::move(nodes), std::move(elems), std::move(patches));
}

PipeCounts pipe_counts_for_target(double radius, double length, int target_elements) {
    if (target_elements < 24) throw MeshError("target element count too small for a pipe mesh");
    const int n_az = 8;
    const double aspect = 1.875; // axial spacing / radial spacing
    double nr = std::cbrt(static_cast<double>(target_elements) * aspect * radius /
                          (3.0 * n_az * length));
    int n_r = std::max(2, static_cast<int>(std::lround(nr)));
    int n_ax = std::max(2, static_cast<int>(std::lround(length * n_r / (aspect * radius))));
    return {n_r, n_az, n_ax};
}

Mesh generate_pipe_target(double radius, double length, int target_elements) {
    PipeCounts c = pipe_counts_for_target(radius, length, target_elements);
    return generate_pipe(radius, length, c.n_radial, c.n_azimuthal, c.n_axial);
}

Mesh generate_channel(double height, double length, int n_y, int n_x) {
    if (height <= 0.0 || length <= 0.0)
        throw MeshError("channel height and length must be positive");
    if (n_y < 1 || n_x < 1) throw MeshError("channel n_y and n_x must be at least 1");

    std::vector<Vec3> nodes;
    nodes.reserve(static_cast<size_t>(n_x + 1) * (n_y + 1));
    for (int j = 0; j <= n_y; ++j) {
        const double y = (j == n_y) ? height : height * j / n_y;
        for (int i = 0; i <= n_x; ++i) {
            const double x = (i == n_x) ? length : length * i / n_x;
            nodes.push_back({x, y, 0.0});
        }
    }
    auto id = [n_x](int i, int j) { return j * (n_x + 1) + i; };

    std::vector<int> elems;
    elems.reserve(static_cast<size_t>(n_x) * n_y * 6);
    for (int j = 0; j < n_y; ++j)
        for (int i = 0; i < n_x; ++i) {
            // lowest global index is the (i,j) corner; diagonal through it
            int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
            elems.insert(elems.end(), {a, b, c});
            elems.insert(elems.end(), {a, c, d});
        }

    Mesh::PatchMap patches;
    auto& inlet = patches["inlet"];
    auto& outlet = patches["outlet"];
    auto& wall = patches["wall"];
    const double xtol = 1e-9 * length, ytol = 1e-9 * height;
    for (const auto& f : boundary_faces(2, elems)) {
        double x0 = std::max(nodes[f[0]].x, nodes[f[1]].x);
        double x1 = std::min(nodes[f[0]].x, nodes[f[1]].x);
        auto* dst = &wall;
        if (x0 < xtol) dst = &inlet;
        else if (x1 > length - xtol) dst = &outlet;
        else {
            double ymax = std::max(nodes[f[0]].y, nodes[f[1]].y);
            double ymin = std::min(nodes[f[0]].y, nodes[f[1]].y);
            if (!(ymax < ytol || ymin > height - ytol))
                throw MeshError("channel boundary edge not on any side"); // unreachable
        }
        dst->insert(dst->end(), f.begin(), f.begin() + 2);
    }

    return Mesh(2, std::move(nodes), std::move(elems), std::move(patches));
}

} // namespace freqstokes
