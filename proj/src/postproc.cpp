#include "freqstokes/postproc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace freqstokes {

using cplx = std::complex<double>;

cplx patch_flow_rate(const SolutionField& field, const std::string& patch) {
    const Mesh& mesh = *field.mesh;
    if (!mesh.has_patch(patch)) throw PostprocError("unknown patch '" + patch + "'");
    const int nfn = mesh.nodes_per_facet();
    cplx q = 0.0;
    for (int f = 0; f < mesh.num_facets(patch); ++f) {
        const FacetGeometry geom = mesh.facet_geometry(patch, f);
        Vec3 mean_r, mean_i;
        for (int v : mesh.facet(patch, f)) {
            mean_r += field.u_r[v];
            mean_i += field.u_i[v];
        }
        q += cplx(dot(mean_r, geom.normal), dot(mean_i, geom.normal)) * (geom.measure / nfn);
    }
    return q;
}

double mass_imbalance(const SolutionField& field, const std::vector<std::string>& patches) {
    if (patches.size() < 2) throw PostprocError("mass imbalance needs at least 2 patches");
    cplx total = 0.0;
    double denom = 0.0;
    for (const auto& p : patches) {
        const cplx q = patch_flow_rate(field, p);
        total += q;
        denom += std::abs(q);
    }
    if (denom == 0.0) return 0.0;
    return std::abs(total) / denom;
}

double error_norm(const SolutionField& field, const ReferenceSpec& ref) {
    const Mesh& mesh = *field.mesh;
    std::vector<char> excluded = mesh.patch_node_mask(ref.excluded_patches);
    // widen by one element
    std::vector<char> band = excluded;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        auto en = mesh.element(e);
        if (std::any_of(en.begin(), en.end(), [&](int v) { return excluded[v]; }))
            for (int v : en) band[v] = 1;
    }
    double num = 0.0, den = 0.0;
    for (int i = 0; i < mesh.num_nodes(); ++i) {
        if (band[i]) continue;
        const cplx u(dot(field.u_r[i], ref.axis), dot(field.u_i[i], ref.axis));
        const cplx r = ref.axial(mesh.node(i));
        num += std::norm(u - r);
        den += std::norm(r);
    }
    if (den == 0.0) throw PostprocError("error norm: reference vanishes on the sampled nodes");
    return std::sqrt(num / den);
}

TimeSample reconstruct_time(const std::vector<const SolutionField*>& modes, double t) {
    if (modes.empty()) throw PostprocError("time reconstruction needs at least one mode");
    const int nnd = modes[0]->mesh->num_nodes();
    for (size_t a = 0; a < modes.size(); ++a) {
        if (modes[a]->mesh->num_nodes() != nnd)
            throw PostprocError("time reconstruction: modes live on different meshes");
        for (size_t b = 0; b < a; ++b)
            if (modes[a]->omega == modes[b]->omega)
                throw PostprocError("time reconstruction: duplicate omega " +
                                    std::to_string(modes[a]->omega));
    }
    TimeSample out;
    out.u.assign(nnd, Vec3{});
    out.p.assign(nnd, 0.0);
    for (const SolutionField* f : modes) {
        const double c = std::cos(f->omega * t), s = std::sin(f->omega * t);
        for (int i = 0; i < nnd; ++i) {
            out.u[i] += f->u_r[i] * c - f->u_i[i] * s;
            out.p[i] += f->p_r[i] * c - f->p_i[i] * s;
        }
    }
    return out;
}

void export_vtk(const SolutionField& field, const std::string& path) {
    const Mesh& mesh = *field.mesh;
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw PostprocError(path + ": cannot open for writing");
    const int nnd = mesh.num_nodes(), nel = mesh.num_elements();
    const int nen = mesh.nodes_per_element();

    std::fprintf(f, "# vtk DataFile Version 3.0\n");
    std::fprintf(f, "frequency-domain stokes solution\n");
    std::fprintf(f, "ASCII\nDATASET UNSTRUCTURED_GRID\n");
    std::fprintf(f, "POINTS %d double\n", nnd);
    for (const auto& p : mesh.nodes()) std::fprintf(f, "%.17g %.17g %.17g\n", p.x, p.y, p.z);
    std::fprintf(f, "CELLS %d %d\n", nel, nel * (nen + 1));
    for (int e = 0; e < nel; ++e) {
        std::fprintf(f, "%d", nen);
        for (int v : mesh.element(e)) std::fprintf(f, " %d", v);
        std::fprintf(f, "\n");
    }
    std::fprintf(f, "CELL_TYPES %d\n", nel);
    for (int e = 0; e < nel; ++e) std::fprintf(f, "%d\n", mesh.dimension() == 3 ? 10 : 5);

    std::fprintf(f, "POINT_DATA %d\n", nnd);
    auto vectors = [&](const char* name, const std::vector<Vec3>& v) {
        std::fprintf(f, "VECTORS %s double\n", name);
        for (const auto& a : v) std::fprintf(f, "%.17g %.17g %.17g\n", a.x, a.y, a.z);
    };
    auto scalars = [&](const char* name, const std::vector<double>& v) {
        std::fprintf(f, "SCALARS %s double\nLOOKUP_TABLE default\n", name);
        for (double a : v) std::fprintf(f, "%.17g\n", a);
    };
    vectors("u_r", field.u_r);
    vectors("u_i", field.u_i);
    scalars("p_r", field.p_r);
    scalars("p_i", field.p_i);
    if (std::fclose(f) != 0) throw PostprocError(path + ": write failed");
}

void export_csv_profile(const SolutionField& field, const LineSpec& line, const std::string& path) {
    const Mesh& mesh = *field.mesh;
    const Vec3 d = line.direction / norm(line.direction);
    std::vector<std::pair<double, int>> picks; // (signed coordinate, node)
    for (int i = 0; i < mesh.num_nodes(); ++i) {
        const Vec3 rel = mesh.node(i) - line.origin;
        const double s = dot(rel, d);
        if (norm(rel - d * s) <= line.tolerance) picks.emplace_back(s, i);
    }
    std::stable_sort(picks.begin(), picks.end());

    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw PostprocError(path + ": cannot open for writing");
    std::fprintf(f, "coord,u_r,u_i,p_r,p_i\n");
    for (const auto& [s, i] : picks) {
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s / line.coord_scale,
                     dot(field.u_r[i], line.component_axis) / line.u_scale,
                     dot(field.u_i[i], line.component_axis) / line.u_scale, field.p_r[i],
                     field.p_i[i]);
    }
    if (std::fclose(f) != 0) throw PostprocError(path + ": write failed");
}

} // namespace freqstokes
