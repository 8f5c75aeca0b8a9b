#pragma once

#include "freqstokes/block_system.hpp"
#include "freqstokes/config.hpp"
#include "freqstokes/mesh.hpp"

namespace freqstokes {

/// Per-facet nodal contribution of a constant traction: each facet
/// distributes (measure / nodes-per-facet) * h to its nodes. Returns the
/// magnitude weights before any sign convention.
std::vector<double> boundary_load_weights(const Mesh& mesh, const std::string& patch);

/// Assembles the coupled real/imaginary velocity-pressure tangent system and
/// right-hand side. Velocity unknowns are reduced at Dirichlet nodes with the
/// prescribed values lifted into the right-hand side; pressure unknowns exist
/// at every node. The sign convention keeps the matrix exactly symmetric
/// (imaginary momentum and real continuity rows enter negated).
BlockSystem assemble(const Mesh& mesh, const CaseConfig& cfg);

} // namespace freqstokes
