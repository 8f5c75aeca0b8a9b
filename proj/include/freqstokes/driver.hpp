#pragma once

#include <optional>
#include <string>
#include <vector>

#include "freqstokes/config.hpp"
#include "freqstokes/mesh.hpp"
#include "freqstokes/postproc.hpp"
#include "freqstokes/solution.hpp"
#include "freqstokes/womersley.hpp"

namespace freqstokes {

enum class GeometryKind { pipe, channel };

struct RunOptions {
    bool deterministic = false; // single worker thread, no timings in reports
    std::string dump_system;    // Matrix Market path for the scaled system, "" = off
};

struct RunTimings {
    double assemble_s = 0.0, scale_s = 0.0, solve_s = 0.0, total_s = 0.0;
};

struct RunResult {
    SolutionField field;
    RunTimings timings;
    int jacobi_zero_diagonal_warnings = 0;
};

/// Assemble, Jacobi-scale, solve with conjugate gradient and unscale. The
/// result is produced whether or not the solver converged (check
/// field.report.converged).
RunResult solve_case(const Mesh& mesh, const CaseConfig& cfg, const RunOptions& opts = {});

/// Geometry inferred from patches, used to build analytic references and
/// Womersley numbers. `h` is the traction magnitude of the inlet condition.
struct PipeGeometry {
    double radius = 0.0, length = 0.0, h = 0.0;
    Vec3 axis{0.0, 0.0, 1.0};
    Vec3 inlet_center;
};
PipeGeometry infer_pipe_geometry(const Mesh& mesh, const CaseConfig& cfg);

struct ChannelGeometry {
    double half_height = 0.0, length = 0.0, h = 0.0;
    double center_y = 0.0;
};
ChannelGeometry infer_channel_geometry(const Mesh& mesh, const CaseConfig& cfg);

/// Womersley number of a case on a given geometry; -1 when no reference
/// geometry applies.
double case_alpha(const Mesh& mesh, const CaseConfig& cfg, GeometryKind kind);
/// omega reproducing a target Womersley number on the mesh geometry.
double omega_for_alpha(const Mesh& mesh, const CaseConfig& cfg, GeometryKind kind, double alpha);

/// Error-norm reference for a solved case (pipe or channel analytic profile).
ReferenceSpec reference_spec(const Mesh& mesh, const CaseConfig& cfg, GeometryKind kind);

struct VerifyRow {
    double alpha = 0.0;
    double error = 0.0;
    double q_r_star = 0.0, q_i_star = 0.0;         // outlet flow / steady reference
    double q_ref_r_star = 0.0, q_ref_i_star = 0.0; // analytic flow / steady reference
    int iterations = 0;
    bool converged = false;
};
std::vector<VerifyRow> verify_alpha_sweep(const Mesh& mesh, const CaseConfig& base,
                                          GeometryKind kind, const std::vector<double>& alphas,
                                          const RunOptions& opts = {});

/// The eleven Womersley numbers 0, sqrt(2), 2, ..., 2^5.
std::vector<double> default_alpha_grid();

enum class SweepParam { alpha, tolerance, c_stab, mesh_resolution };

struct SweepSpec {
    SweepParam param = SweepParam::tolerance;
    std::vector<double> values; // non-empty, strictly monotone
    CaseConfig base;
    GeometryKind geometry = GeometryKind::pipe;
    int jobs = 1; // >1 runs independent cases concurrently
};

struct SweepRow {
    double value = 0.0;
    double error = 0.0;
    double imbalance = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// One row per sweep value in input order. `mesh` drives every parameter
/// except mesh_resolution, which regenerates a pipe per value (target element
/// counts) via `pipe_radius`/`pipe_length`.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const Mesh* mesh, double pipe_radius,
                                double pipe_length, const RunOptions& opts = {});

/// JSON run report embedding the fully resolved configuration, mesh stats,
/// solver history and flow rates. Timings are omitted in deterministic mode
/// so identical runs produce byte-identical reports.
std::string run_report_json(const Mesh& mesh, const CaseConfig& cfg, const RunResult& result,
                            const RunOptions& opts);

/// Worker cap: FREQSTOKES_THREADS when set, otherwise the OpenMP default.
int thread_limit();
void apply_thread_limit(const RunOptions& opts);

} // namespace freqstokes
