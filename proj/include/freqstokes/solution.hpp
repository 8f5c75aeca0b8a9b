#pragma once

#include <vector>

#include "freqstokes/block_system.hpp"
#include "freqstokes/config.hpp"
#include "freqstokes/linsolve.hpp"
#include "freqstokes/mesh.hpp"

namespace freqstokes {

/// Nodal solution of one frequency mode over the full mesh. Dirichlet nodes
/// carry exactly the prescribed boundary values.
struct SolutionField {
    const Mesh* mesh = nullptr;
    std::vector<Vec3> u_r, u_i;
    std::vector<double> p_r, p_i;
    double omega = 0.0;
    double alpha = -1.0; // Womersley number when the geometry defines one, else -1
    SolveReport report;
};

/// Unpacks the solved unknown vector (per-node layout [u_r, p_r, u_i, p_i])
/// and re-injects the prescribed Dirichlet velocities.
SolutionField extract_solution(const Mesh& mesh, const CaseConfig& cfg, std::span<const double> x);

} // namespace freqstokes
