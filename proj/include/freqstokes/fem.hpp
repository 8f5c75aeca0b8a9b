#pragma once

#include <stdexcept>

#include "freqstokes/config.hpp"
#include "freqstokes/geometry.hpp"

namespace freqstokes {

class FemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Gradients of the linear barycentric shape functions (constant over a
/// simplex) and the element measure (volume in 3D, area in 2D).
struct ShapeGeometry {
    int n = 0; // nodes per element = dim+1
    Vec3 grad[4];
    double measure = 0.0;
};
ShapeGeometry shape_gradients(int dim, const Vec3* coords);

/// Covariant tensor of the parent-to-physical map, xi_ij = sum_k dzeta_k/dx_i
/// dzeta_k/dx_j, with zeta the coordinates of the standard simplex keyed to
/// the element's stored node order. xi_dd is the double contraction xi:xi.
struct CovariantMetric {
    double xi[3][3] = {};
    double xi_dd = 0.0;
};
CovariantMetric covariant_metric(int dim, const Vec3* coords);

/// Complex stabilization parameter multiplying the pressure Laplacian added
/// to the continuity equation:
///   tau_r = c mu sqrt(xi:xi) / ((rho omega)^2 + mu^2 xi:xi)
///   tau_i = c rho omega      / ((rho omega)^2 + mu^2 xi:xi)
struct Tau {
    double r = 0.0, i = 0.0;
};
Tau stabilization_tau(double rho, double omega, double mu, double c_stab, double xi_colon_xi);
inline Tau stabilization_tau(const CaseConfig& cfg, double xi_colon_xi) {
    return stabilization_tau(cfg.rho, cfg.omega, cfg.mu, cfg.c_stab, xi_colon_xi);
}

/// Exact integrals of the linear-simplex element matrices:
///   L_AB = int grad(N_A).grad(N_B),  M_AB = int N_A N_B,
///   G_AB = int grad(N_A) N_B = gvec[A] for every B,  D_AB = G_BA.
struct ElementMatrices {
    int n = 0;
    double measure = 0.0;
    double L[4][4] = {};
    double M[4][4] = {};
    Vec3 gvec[4];
    double tau_r = 0.0, tau_i = 0.0;

    Vec3 G(int A, int /*B*/) const { return gvec[A]; }
    Vec3 D(int /*A*/, int B) const { return gvec[B]; }
};
ElementMatrices element_matrices(int dim, const Vec3* coords, const CaseConfig& cfg);

} // namespace freqstokes
