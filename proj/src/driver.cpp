#include "freqstokes/driver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <thread>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "freqstokes/assemble.hpp"
#include "freqstokes/linsolve.hpp"
#include "freqstokes/mesh_generate.hpp"

namespace freqstokes {

using nlohmann::json;

int thread_limit() {
    if (const char* env = std::getenv("FREQSTOKES_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void apply_thread_limit(const RunOptions& opts) {
#ifdef _OPENMP
    omp_set_num_threads(opts.deterministic ? 1 : thread_limit());
#else
    (void)opts;
#endif
}

RunResult solve_case(const Mesh& mesh, const CaseConfig& cfg, const RunOptions& opts) {
    using clock = std::chrono::steady_clock;
    apply_thread_limit(opts);

    RunResult out;
    const auto t0 = clock::now();
    BlockSystem sys = assemble(mesh, cfg);
    const auto t1 = clock::now();
    const JacobiScaling scaling = jacobi_scale_in_place(sys);
    out.jacobi_zero_diagonal_warnings = scaling.zero_diagonal_count;
    if (!opts.dump_system.empty()) write_matrix_market(sys.matrix, opts.dump_system);
    const auto t2 = clock::now();

    SolveReport report;
    std::vector<double> x = conjugate_gradient(
        [&sys](std::span<const double> p, std::span<double> Ap) { sys.matrix.matvec(p, Ap); },
        sys.rhs, cfg.tolerance, cfg.max_iterations, report);
    unscale_solution(scaling, x);
    const auto t3 = clock::now();

    out.field = extract_solution(mesh, cfg, x);
    out.field.report = std::move(report);
    out.field.alpha = case_alpha(mesh, cfg, mesh.dimension() == 3 ? GeometryKind::pipe
                                                                  : GeometryKind::channel);
    auto sec = [](auto a, auto b) { return std::chrono::duration<double>(b - a).count(); };
    out.timings = {sec(t0, t1), sec(t1, t2), sec(t2, t3), sec(t0, t3)};
    return out;
}

namespace {

const BoundaryCondition* find_bc(const CaseConfig& cfg, const std::string& patch) {
    for (const auto& bc : cfg.bcs)
        if (bc.patch == patch) return &bc;
    return nullptr;
}

double inlet_traction_magnitude(const CaseConfig& cfg) {
    const BoundaryCondition* bc = find_bc(cfg, "inlet");
    if (!bc || bc->kind != BcKind::neumann) return 0.0;
    const double hr = norm(bc->value_real);
    return hr > 0.0 ? hr : norm(bc->value_imag);
}

Vec3 patch_centroid(const Mesh& mesh, const std::string& patch) {
    const auto mask = mesh.patch_node_mask({patch});
    Vec3 c;
    int n = 0;
    for (int i = 0; i < mesh.num_nodes(); ++i)
        if (mask[i]) {
            c += mesh.node(i);
            ++n;
        }
    if (n == 0) throw PostprocError("patch '" + patch + "' has no nodes");
    return c / static_cast<double>(n);
}

} // namespace

PipeGeometry infer_pipe_geometry(const Mesh& mesh, const CaseConfig& cfg) {
    if (mesh.dimension() != 3 || !mesh.has_patch("inlet") || !mesh.has_patch("outlet"))
        throw PostprocError("pipe geometry needs a 3D mesh with inlet and outlet patches");
    PipeGeometry g;
    g.inlet_center = patch_centroid(mesh, "inlet");
    const Vec3 out_c = patch_centroid(mesh, "outlet");
    g.length = norm(out_c - g.inlet_center);
    g.axis = (out_c - g.inlet_center) / g.length;
    const auto mask = mesh.patch_node_mask({"inlet"});
    for (int i = 0; i < mesh.num_nodes(); ++i) {
        if (!mask[i]) continue;
        const Vec3 rel = mesh.node(i) - g.inlet_center;
        g.radius = std::max(g.radius, norm(rel - g.axis * dot(rel, g.axis)));
    }
    g.h = inlet_traction_magnitude(cfg);
    return g;
}

ChannelGeometry infer_channel_geometry(const Mesh& mesh, const CaseConfig& cfg) {
    if (mesh.dimension() != 2 || !mesh.has_patch("inlet") || !mesh.has_patch("outlet"))
        throw PostprocError("channel geometry needs a 2D mesh with inlet and outlet patches");
    ChannelGeometry g;
    const auto mask = mesh.patch_node_mask({"inlet"});
    double ymin = 0.0, ymax = 0.0;
    bool first = true;
    for (int i = 0; i < mesh.num_nodes(); ++i) {
        if (!mask[i]) continue;
        const double y = mesh.node(i).y;
        ymin = first ? y : std::min(ymin, y);
        ymax = first ? y : std::max(ymax, y);
        first = false;
    }
    double xmin = mesh.node(0).x, xmax = xmin;
    for (const auto& p : mesh.nodes()) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
    }
    g.half_height = 0.5 * (ymax - ymin);
    g.center_y = 0.5 * (ymax + ymin);
    g.length = xmax - xmin;
    g.h = inlet_traction_magnitude(cfg);
    return g;
}

double case_alpha(const Mesh& mesh, const CaseConfig& cfg, GeometryKind kind) {
    try {
        const double scale = (kind == GeometryKind::pipe)
                                 ? infer_pipe_geometry(mesh, cfg).radius
                                 : infer_channel_geometry(mesh, cfg).half_height;
        return scale * std::sqrt(cfg.rho * cfg.omega / cfg.mu);
    } catch (const PostprocError&) {
        return -1.0;
    }
}

double omega_for_alpha(const Mesh& mesh, const CaseConfig& cfg, GeometryKind kind, double alpha) {
    const double scale = (kind == GeometryKind::pipe)
                             ? infer_pipe_geometry(mesh, cfg).radius
                             : infer_channel_geometry(mesh, cfg).half_height;
    return alpha * alpha * cfg.mu / (cfg.rho * scale * scale);
}

ReferenceSpec reference_spec(const Mesh& mesh, const CaseConfig& cfg, GeometryKind kind) {
    ReferenceSpec spec;
    if (kind == GeometryKind::pipe) {
        const PipeGeometry g = infer_pipe_geometry(mesh, cfg);
        const PipeReference ref = PipeReference::from_omega(cfg.omega, g.radius, g.length, cfg.mu,
                                                            cfg.rho, g.h);
        spec.axis = g.axis;
        spec.axial = [ref, g](const Vec3& p) {
            const Vec3 rel = p - g.inlet_center;
            return ref.velocity(norm(rel - g.axis * dot(rel, g.axis)));
        };
    } else {
        const ChannelGeometry g = infer_channel_geometry(mesh, cfg);
        const double alpha =
            g.half_height * std::sqrt(cfg.rho * cfg.omega / cfg.mu);
        const ChannelReference ref{alpha, g.half_height, g.length, cfg.mu, g.h};
        spec.axis = {1.0, 0.0, 0.0};
        spec.axial = [ref, g](const Vec3& p) { return ref.velocity(p.y - g.center_y); };
    }
    return spec;
}

std::vector<double> default_alpha_grid() {
    std::vector<double> grid{0.0};
    for (int k = 1; k <= 10; ++k) grid.push_back(std::pow(2.0, 0.5 * k));
    return grid;
}

std::vector<VerifyRow> verify_alpha_sweep(const Mesh& mesh, const CaseConfig& base,
                                          GeometryKind kind, const std::vector<double>& alphas,
                                          const RunOptions& opts) {
    if (kind != GeometryKind::pipe)
        throw PostprocError("flow-rate verification is defined for pipe geometry");
    const PipeGeometry g = infer_pipe_geometry(mesh, base);
    const PipeReference steady = PipeReference::from_alpha(0.0, g.radius, g.length, base.mu,
                                                           base.rho, g.h);
    const double q0 = steady.steady_flow_rate();

    std::vector<VerifyRow> rows;
    for (double alpha : alphas) {
        CaseConfig cfg = base;
        cfg.omega = omega_for_alpha(mesh, base, kind, alpha);
        const RunResult run = solve_case(mesh, cfg, opts);
        const auto q = patch_flow_rate(run.field, "outlet");
        const auto q_ref =
            PipeReference::from_alpha(alpha, g.radius, g.length, cfg.mu, cfg.rho, g.h).flow_rate();
        VerifyRow row;
        row.alpha = alpha;
        row.error = error_norm(run.field, reference_spec(mesh, cfg, kind));
        row.q_r_star = q.real() / q0;
        row.q_i_star = q.imag() / q0;
        row.q_ref_r_star = q_ref.real() / q0;
        row.q_ref_i_star = q_ref.imag() / q0;
        row.iterations = run.field.report.iterations;
        row.converged = run.field.report.converged;
        rows.push_back(row);
    }
    return rows;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const Mesh* mesh, double pipe_radius,
                                double pipe_length, const RunOptions& opts) {
    if (spec.values.empty()) throw ConfigError("sweep values list is empty");
    for (size_t i = 1; i < spec.values.size(); ++i) {
        const bool up = spec.values[1] > spec.values[0];
        if ((up && spec.values[i] <= spec.values[i - 1]) ||
            (!up && spec.values[i] >= spec.values[i - 1]))
            throw ConfigError("sweep values must be strictly monotone");
    }
    if (spec.param != SweepParam::mesh_resolution && mesh == nullptr)
        throw ConfigError("sweep needs a mesh for this parameter");

    std::vector<SweepRow> rows(spec.values.size());
    auto run_one = [&](size_t idx, const RunOptions& o) {
        const double value = spec.values[idx];
        CaseConfig cfg = spec.base;
        const Mesh* m = mesh;
        std::optional<Mesh> generated;
        switch (spec.param) {
        case SweepParam::alpha:
            cfg.omega = omega_for_alpha(*mesh, spec.base, spec.geometry, value);
            break;
        case SweepParam::tolerance:
            cfg.tolerance = value;
            break;
        case SweepParam::c_stab:
            cfg.c_stab = value;
            break;
        case SweepParam::mesh_resolution:
            generated.emplace(generate_pipe_target(pipe_radius, pipe_length,
                                                   static_cast<int>(std::lround(value))));
            m = &*generated;
            break;
        }
        const RunResult run = solve_case(*m, cfg, o);
        SweepRow row;
        row.value = value;
        std::vector<std::string> all_patches;
        for (const auto& [name, _] : m->patches()) all_patches.push_back(name);
        row.imbalance = mass_imbalance(run.field, all_patches);
        row.error = error_norm(run.field, reference_spec(*m, cfg, spec.geometry));
        row.iterations = run.field.report.iterations;
        row.converged = run.field.report.converged;
        rows[idx] = row;
    };

    const int jobs = std::max(1, std::min<int>(spec.jobs, thread_limit()));
    if (jobs == 1 || spec.values.size() == 1) {
        for (size_t i = 0; i < spec.values.size(); ++i) run_one(i, opts);
    } else {
        // independent modes run concurrently, one worker thread per case
        RunOptions seq = opts;
        seq.deterministic = true;
        std::vector<std::thread> pool;
        std::atomic<size_t> next{0};
        for (int t = 0; t < jobs; ++t)
            pool.emplace_back([&] {
                for (size_t i = next.fetch_add(1); i < spec.values.size(); i = next.fetch_add(1))
                    run_one(i, seq);
            });
        for (auto& th : pool) th.join();
    }
    return rows;
}

std::string run_report_json(const Mesh& mesh, const CaseConfig& cfg, const RunResult& result,
                            const RunOptions& opts) {
    json doc;
    doc["case"] = json::parse(case_to_json_string(cfg));
    json jm;
    jm["dimension"] = mesh.dimension();
    jm["nodes"] = mesh.num_nodes();
    jm["elements"] = mesh.num_elements();
    json jp;
    for (const auto& [name, flat] : mesh.patches())
        jp[name] = static_cast<int>(flat.size()) / mesh.dimension();
    jm["patches"] = std::move(jp);
    doc["mesh"] = std::move(jm);
    if (result.field.alpha >= 0.0) doc["alpha"] = result.field.alpha;
    doc["omega"] = cfg.omega;

    const SolveReport& rep = result.field.report;
    json js;
    js["iterations"] = rep.iterations;
    js["converged"] = rep.converged;
    js["breakdown"] = rep.breakdown;
    js["achieved_relative_residual"] = rep.achieved_relative_residual;
    js["residual_history"] = rep.residual_history;
    js["jacobi_zero_diagonal_warnings"] = result.jacobi_zero_diagonal_warnings;
    doc["solver"] = std::move(js);

    json jf;
    for (const auto& [name, _] : mesh.patches()) {
        const auto q = patch_flow_rate(result.field, name);
        jf[name] = {{"real", q.real()}, {"imag", q.imag()}};
    }
    doc["flow_rates"] = std::move(jf);
    std::vector<std::string> all_patches;
    for (const auto& [name, _] : mesh.patches()) all_patches.push_back(name);
    if (all_patches.size() >= 2) doc["mass_imbalance"] = mass_imbalance(result.field, all_patches);

    if (!opts.deterministic) {
        doc["timings"] = {{"assemble_s", result.timings.assemble_s},
                          {"scale_s", result.timings.scale_s},
                          {"solve_s", result.timings.solve_s},
                          {"total_s", result.timings.total_s}};
    }
    return doc.dump(2);
}

} // namespace freqstokes
