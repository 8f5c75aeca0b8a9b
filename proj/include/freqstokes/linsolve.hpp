#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "freqstokes/block_system.hpp"

namespace freqstokes {

struct SolveReport {
    int iterations = 0;
    std::vector<double> residual_history; // norms, length iterations + 1
    bool converged = false;
    bool breakdown = false;
    double achieved_relative_residual = 0.0;
};

struct JacobiScaling {
    std::vector<double> s;       // diagonal of S, K' = S K S, x = S x'
    int zero_diagonal_count = 0; // rows guarded with a unit factor
};

/// Symmetric Jacobi scaling with S_ii = 1/sqrt(|K_ii|): every diagonal entry
/// of the scaled matrix has magnitude one and symmetry is preserved. Zero
/// diagonal entries keep a unit factor and are counted as warnings.
JacobiScaling jacobi_scale_in_place(BlockSystem& system);

/// Recover the solution of the unscaled system from the scaled one.
void unscale_solution(const JacobiScaling& scaling, std::span<double> x);

/// Plain conjugate gradient with zero initial guess on a symmetric (possibly
/// indefinite) operator. Stops when ||r_k|| / ||r_0|| <= tolerance in the
/// 2-norm of the system handed in (the scaled residual when used after
/// jacobi_scale_in_place). The residual is recomputed from scratch every
/// kResidualRecomputeInterval iterations to bound accumulation drift.
/// Breakdown (p^T A p vanishing to machine zero) is reported as failure with
/// the history intact. Convergence may be nonmonotonic; no restarts.
inline constexpr int kResidualRecomputeInterval = 50;

template <typename MatVec>
std::vector<double> conjugate_gradient(MatVec&& apply, std::span<const double> b, double tolerance,
                                       int max_iterations, SolveReport& report) {
    const size_t n = b.size();
    std::vector<double> x(n, 0.0), r(b.begin(), b.end()), p, Ap(n, 0.0);

    auto dot_seq = [](const std::vector<double>& a, const std::vector<double>& c) {
        double s = 0.0;
        for (size_t i = 0; i < a.size(); ++i) s += a[i] * c[i];
        return s;
    };

    report = SolveReport{};
    double rr = dot_seq(r, r);
    const double norm0 = std::sqrt(rr);
    report.residual_history.push_back(norm0);
    if (norm0 == 0.0) {
        report.converged = true;
        return x;
    }

    p = r;
    for (int it = 1; it <= max_iterations; ++it) {
        apply(std::span<const double>(p), std::span<double>(Ap));
        const double pAp = dot_seq(p, Ap);
        if (!std::isfinite(pAp) || std::abs(pAp) < 1e-300) {
            report.breakdown = true;
            break;
        }
        const double alpha = rr / pAp;
        for (size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
        if (it % kResidualRecomputeInterval == 0) {
            apply(std::span<const double>(x), std::span<double>(Ap));
            for (size_t i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
        } else {
            for (size_t i = 0; i < n; ++i) r[i] -= alpha * Ap[i];
        }
        const double rr_new = dot_seq(r, r);
        report.iterations = it;
        report.residual_history.push_back(std::sqrt(rr_new));
        if (std::sqrt(rr_new) / norm0 <= tolerance) {
            report.converged = true;
            rr = rr_new;
            break;
        }
        const double beta = rr_new / rr;
        rr = rr_new;
        for (size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }

    report.achieved_relative_residual = report.residual_history.back() / norm0;
    return x;
}

/// Scaled-system dump in Matrix Market coordinate format (symmetric, lower
/// triangle, 1-based); structural zeros are omitted.
void write_matrix_market(const BlockSparseMatrix& matrix, const std::string& path);

} // namespace freqstokes
