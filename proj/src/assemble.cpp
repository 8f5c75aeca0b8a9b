#include "freqstokes/assemble.hpp"

#include <algorithm>

#include "freqstokes/fem.hpp"

namespace freqstokes {

std::vector<double> boundary_load_weights(const Mesh& mesh, const std::string& patch) {
    if (!mesh.has_patch(patch)) throw ConfigError("unknown patch '" + patch + "'");
    std::vector<double> w(mesh.num_nodes(), 0.0);
    const int nfn = mesh.nodes_per_facet();
    for (int f = 0; f < mesh.num_facets(patch); ++f) {
        const double share = mesh.facet_geometry(patch, f).measure / nfn;
        for (int v : mesh.facet(patch, f)) w[v] += share;
    }
    return w;
}

BlockSystem assemble(const Mesh& mesh, const CaseConfig& cfg) {
    cfg.validate();
    const int dim = mesh.dimension();
    const int nen = dim + 1;
    const int nnd = mesh.num_nodes();
    const int bs = 2 * (dim + 1);
    const int pr = dim, ui0 = dim + 1, pi = 2 * dim + 1;

    for (const auto& bc : cfg.bcs) {
        if (!mesh.has_patch(bc.patch))
            throw ConfigError("boundary condition references missing patch '" + bc.patch + "'");
        if (bc.kind == BcKind::dirichlet && mesh.num_facets(bc.patch) == 0)
            throw ConfigError("dirichlet patch '" + bc.patch + "' has no facets");
    }

    // Dirichlet nodes and their prescribed values; nodes shared with
    // non-Dirichlet patches stay Dirichlet, later conditions overwrite.
    std::vector<char> dirichlet(nnd, 0);
    std::vector<Vec3> g_r(nnd), g_i(nnd);
    for (const auto& bc : cfg.bcs) {
        if (bc.kind != BcKind::dirichlet) continue;
        for (int v : mesh.patches().at(bc.patch)) {
            dirichlet[v] = 1;
            g_r[v] = bc.value_real;
            g_i[v] = bc.value_imag;
        }
    }

    // node-pair adjacency from shared elements
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<size_t>(mesh.num_elements()) * nen * nen);
    for (int e = 0; e < mesh.num_elements(); ++e) {
        auto en = mesh.element(e);
        for (int a = 0; a < nen; ++a)
            for (int b = 0; b < nen; ++b) pairs.emplace_back(en[a], en[b]);
    }

    BlockSystem sys;
    sys.matrix = BlockSparseMatrix(dim, nnd, std::move(pairs));
    sys.rhs.assign(sys.matrix.size(), 0.0);

    const auto& lut = block_slot_lookup(dim);
    auto slot = [&](int r, int c) { return lut[r * bs + c]; };
    const double rw = cfg.rho * cfg.omega;

    Vec3 coords[4];
    for (int e = 0; e < mesh.num_elements(); ++e) {
        auto en = mesh.element(e);
        for (int a = 0; a < nen; ++a) coords[a] = mesh.node(en[a]);
        ElementMatrices em;
        try {
            em = element_matrices(dim, coords, cfg);
        } catch (const FemError& err) {
            throw FemError("element " + std::to_string(e) + ": " + err.what());
        }

        for (int A = 0; A < nen; ++A) {
            const int i = en[A];
            const bool vi = dirichlet[i];
            for (int B = 0; B < nen; ++B) {
                const int j = en[B];
                const bool vj = dirichlet[j];
                const int pk = sys.matrix.find_pair(i, j);
                double* v = sys.matrix.pair_values(pk);

                const double visc = cfg.mu * em.L[A][B];
                const double freq = rw * em.M[A][B];
                const Vec3 gA = em.gvec[A]; // G_AB
                const Vec3 gB = em.gvec[B]; // D_AB

                if (!vi && !vj) {
                    for (int k = 0; k < dim; ++k) {
                        v[slot(k, k)] += visc;            //  mu L
                        v[slot(ui0 + k, ui0 + k)] -= visc; // -mu L
                        v[slot(k, ui0 + k)] -= freq;       // -rho w M
                        v[slot(ui0 + k, k)] -= freq;
                    }
                }
                if (!vi) {
                    for (int k = 0; k < dim; ++k) {
                        v[slot(k, pr)] -= gA[k];      // -G
                        v[slot(ui0 + k, pi)] += gA[k]; // +G
                    }
                }
                if (!vj) {
                    for (int k = 0; k < dim; ++k) {
                        v[slot(pr, k)] -= gB[k];      // -D
                        v[slot(pi, ui0 + k)] += gB[k]; // +D
                    }
                }
                v[slot(pr, pr)] -= em.tau_r * em.L[A][B];
                v[slot(pi, pi)] += em.tau_r * em.L[A][B];
                v[slot(pr, pi)] += em.tau_i * em.L[A][B];
                v[slot(pi, pr)] += em.tau_i * em.L[A][B];

                // lift prescribed velocity at node j into the rhs (b = -R)
                if (vj) {
                    double* bi = sys.rhs.data() + static_cast<size_t>(i) * bs;
                    if (!vi) {
                        for (int k = 0; k < dim; ++k) {
                            bi[k] -= visc * g_r[j][k] - freq * g_i[j][k];
                            bi[ui0 + k] += visc * g_i[j][k] + freq * g_r[j][k];
                        }
                    }
                    bi[pr] += dot(gB, g_r[j]);
                    bi[pi] -= dot(gB, g_i[j]);
                }
            }
        }
    }

    // identity placeholders on constrained velocity slots
    for (int i = 0; i < nnd; ++i) {
        if (!dirichlet[i]) continue;
        double* v = sys.matrix.pair_values(sys.matrix.find_pair(i, i));
        for (int k = 0; k < dim; ++k) {
            v[slot(k, k)] = 1.0;
            v[slot(ui0 + k, ui0 + k)] = 1.0;
        }
    }

    // traction loads on Neumann patches (uncovered patches default to h = 0)
    for (const auto& bc : cfg.bcs) {
        if (bc.kind != BcKind::neumann) continue;
        const auto w = boundary_load_weights(mesh, bc.patch);
        for (int i = 0; i < nnd; ++i) {
            if (w[i] == 0.0 || dirichlet[i]) continue;
            double* bi = sys.rhs.data() + static_cast<size_t>(i) * bs;
            for (int k = 0; k < dim; ++k) {
                bi[k] += w[i] * bc.value_real[k];
                bi[ui0 + k] -= w[i] * bc.value_imag[k];
            }
        }
    }

    sys.free_velocity_slot.assign(nnd, -1);
    for (int i = 0; i < nnd; ++i)
        if (!dirichlet[i]) sys.free_velocity_slot[i] = sys.num_free_velocity_nodes++;
    return sys;
}

} // namespace freqstokes
