#include "freqstokes/solution.hpp"

namespace freqstokes {

SolutionField extract_solution(const Mesh& mesh, const CaseConfig& cfg, std::span<const double> x) {
    const int dim = mesh.dimension();
    const int bs = 2 * (dim + 1);
    const int nnd = mesh.num_nodes();
    if (static_cast<int>(x.size()) != nnd * bs)
        throw LinSolveError("solution vector does not match the mesh");

    SolutionField f;
    f.mesh = &mesh;
    f.u_r.resize(nnd);
    f.u_i.resize(nnd);
    f.p_r.resize(nnd);
    f.p_i.resize(nnd);
    f.omega = cfg.omega;
    for (int i = 0; i < nnd; ++i) {
        const double* xi = x.data() + static_cast<size_t>(i) * bs;
        for (int k = 0; k < dim; ++k) {
            f.u_r[i][k] = xi[k];
            f.u_i[i][k] = xi[dim + 1 + k];
        }
        f.p_r[i] = xi[dim];
        f.p_i[i] = xi[2 * dim + 1];
    }
    for (const auto& bc : cfg.bcs) {
        if (bc.kind != BcKind::dirichlet) continue;
        for (int v : mesh.patches().at(bc.patch)) {
            f.u_r[v] = bc.value_real;
            f.u_i[v] = bc.value_imag;
        }
    }
    return f;
}

} // namespace freqstokes
