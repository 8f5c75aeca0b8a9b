#include "freqstokes/fem.hpp"

#include <cmath>

namespace freqstokes {

ShapeGeometry shape_gradients(int dim, const Vec3* p) {
    ShapeGeometry s;
    s.n = dim + 1;
    if (dim == 3) {
        const Vec3 e1 = p[1] - p[0], e2 = p[2] - p[0], e3 = p[3] - p[0];
        const double det = dot(cross(e1, e2), e3);
        s.measure = det / 6.0;
        if (!(std::abs(s.measure) > 0.0)) throw FemError("degenerate tetrahedron");
        // rows of J^{-1} are the parent-coordinate gradients grad(zeta_k)
        const Vec3 r1 = cross(e2, e3) / det;
        const Vec3 r2 = cross(e3, e1) / det;
        const Vec3 r3 = cross(e1, e2) / det;
        s.grad[1] = r1;
        s.grad[2] = r2;
        s.grad[3] = r3;
        s.grad[0] = (r1 + r2 + r3) * -1.0;
    } else if (dim == 2) {
        const Vec3 e1 = p[1] - p[0], e2 = p[2] - p[0];
        const double det = e1.x * e2.y - e1.y * e2.x;
        s.measure = det / 2.0;
        if (!(std::abs(s.measure) > 0.0)) throw FemError("degenerate triangle");
        s.grad[1] = {e2.y / det, -e2.x / det, 0.0};
        s.grad[2] = {-e1.y / det, e1.x / det, 0.0};
        s.grad[0] = (s.grad[1] + s.grad[2]) * -1.0;
    } else {
        throw FemError("dimension must be 2 or 3");
    }
    return s;
}

CovariantMetric covariant_metric(int dim, const Vec3* p) {
    const ShapeGeometry s = shape_gradients(dim, p);
    CovariantMetric m;
    // grad(zeta_k) = grad(N_k) for k = 1..dim in the standard simplex map
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            double v = 0.0;
            for (int k = 1; k <= dim; ++k) v += s.grad[k][i] * s.grad[k][j];
            m.xi[i][j] = v;
            m.xi_dd += v * v;
        }
    return m;
}

Tau stabilization_tau(double rho, double omega, double mu, double c_stab, double xi_dd) {
    if (!(xi_dd > 0.0)) throw FemError("xi:xi must be positive");
    const double rw = rho * omega;
    const double denom = rw * rw + mu * mu * xi_dd;
    return {c_stab * mu * std::sqrt(xi_dd) / denom, c_stab * rw / denom};
}

ElementMatrices element_matrices(int dim, const Vec3* p, const CaseConfig& cfg) {
    const ShapeGeometry s = shape_gradients(dim, p);
    if (s.measure <= 0.0) throw FemError("element has non-positive measure");
    ElementMatrices em;
    em.n = s.n;
    em.measure = s.measure;
    const double mass_off = s.measure / ((s.n) * (s.n + 1.0));
    for (int A = 0; A < s.n; ++A) {
        em.gvec[A] = s.grad[A] * (s.measure / s.n);
        for (int B = 0; B < s.n; ++B) {
            em.L[A][B] = dot(s.grad[A], s.grad[B]) * s.measure;
            em.M[A][B] = mass_off * (A == B ? 2.0 : 1.0);
        }
    }
    const Tau tau = stabilization_tau(cfg, covariant_metric(dim, p).xi_dd);
    em.tau_r = tau.r;
    em.tau_i = tau.i;
    return em;
}

} // namespace freqstokes
