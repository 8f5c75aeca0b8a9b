#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "freqstokes/driver.hpp"
#include "freqstokes/mesh_generate.hpp"
#include "freqstokes/mesh_io.hpp"

namespace fs = std::filesystem;
using namespace freqstokes;

namespace {

// 0 = success, CLI11 codes for usage errors, then:
constexpr int kExitConfig = 2;
constexpr int kExitMesh = 3;
constexpr int kExitNoConvergence = 4;
constexpr int kExitOther = 5;

GeometryKind parse_geometry(const std::string& s) {
    if (s == "pipe") return GeometryKind::pipe;
    if (s == "channel") return GeometryKind::channel;
    throw ConfigError("geometry must be 'pipe' or 'channel'");
}

Vec3 any_perpendicular(const Vec3& axis) {
    const Vec3 trial = std::abs(axis.x) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
    const Vec3 p = trial - axis * dot(trial, axis);
    return p / norm(p);
}

// Mid-length sampling line for the solved-field profile, snapped to the
// nearest node layer so generated meshes emit a full diameter.
LineSpec profile_line(const Mesh& mesh, const CaseConfig& cfg, GeometryKind kind) {
    LineSpec line;
    if (kind == GeometryKind::pipe) {
        const PipeGeometry g = infer_pipe_geometry(mesh, cfg);
        double best = 1e300, s_mid = 0.0;
        for (const auto& p : mesh.nodes()) {
            const double s = dot(p - g.inlet_center, g.axis);
            if (std::abs(s - 0.5 * g.length) < best) {
                best = std::abs(s - 0.5 * g.length);
                s_mid = s;
            }
        }
        line.origin = g.inlet_center + g.axis * s_mid;
        line.direction = any_perpendicular(g.axis);
        line.component_axis = g.axis;
        line.tolerance = 1e-6 * g.radius;
        line.coord_scale = g.radius;
        const double u0 = PipeReference::from_alpha(0.0, g.radius, g.length, cfg.mu, cfg.rho, g.h)
                              .steady_centerline();
        line.u_scale = (u0 > 0.0) ? u0 : 1.0;
    } else {
        const ChannelGeometry g = infer_channel_geometry(mesh, cfg);
        double best = 1e300, x_mid = 0.0;
        for (const auto& p : mesh.nodes()) {
            if (std::abs(p.x - 0.5 * g.length) < best) {
                best = std::abs(p.x - 0.5 * g.length);
                x_mid = p.x;
            }
        }
        line.origin = {x_mid, g.center_y, 0.0};
        line.direction = {0.0, 1.0, 0.0};
        line.component_axis = {1.0, 0.0, 0.0};
        line.tolerance = 1e-6 * g.half_height;
        line.coord_scale = g.half_height;
        const ChannelReference ref{0.0, g.half_height, g.length, cfg.mu, g.h};
        line.u_scale = (g.h > 0.0) ? ref.steady_centerline() : 1.0;
    }
    return line;
}

int cmd_solve(const std::string& case_path, const std::string& mesh_path, const std::string& outdir,
              const std::string& dump_system, bool deterministic) {
    const CaseConfig cfg = read_case(case_path);
    const Mesh mesh = read_mesh(mesh_path);
    fs::create_directories(outdir);

    RunOptions opts;
    opts.deterministic = deterministic;
    opts.dump_system = dump_system;
    const RunResult result = solve_case(mesh, cfg, opts);

    export_vtk(result.field, (fs::path(outdir) / "solution.vtk").string());
    const GeometryKind kind = mesh.dimension() == 3 ? GeometryKind::pipe : GeometryKind::channel;
    try {
        export_csv_profile(result.field, profile_line(mesh, cfg, kind),
                           (fs::path(outdir) / "profile.csv").string());
    } catch (const PostprocError& e) {
        std::fprintf(stderr, "warning: profile not written: %s\n", e.what());
    }
    std::ofstream rep((fs::path(outdir) / "report.json").string());
    rep << run_report_json(mesh, cfg, result, opts) << '\n';

    const auto& sr = result.field.report;
    std::printf("%s: %d iterations, relative residual %.3e%s\n",
                sr.converged ? "converged" : "NOT CONVERGED", sr.iterations,
                sr.achieved_relative_residual, sr.breakdown ? " (breakdown)" : "");
    return sr.converged ? 0 : kExitNoConvergence;
}

int cmd_verify(const std::string& case_path, const std::string& mesh_path,
               const std::string& geometry, std::vector<double> alphas, const std::string& out,
               bool deterministic) {
    const CaseConfig cfg = read_case(case_path);
    const Mesh mesh = read_mesh(mesh_path);
    if (alphas.empty()) alphas = default_alpha_grid();
    RunOptions opts;
    opts.deterministic = deterministic;
    const auto rows = verify_alpha_sweep(mesh, cfg, parse_geometry(geometry), alphas, opts);

    std::FILE* f = std::fopen(out.c_str(), "w");
    if (!f) throw PostprocError(out + ": cannot open for writing");
    std::fprintf(f, "alpha,error_norm,q_r_star,q_i_star,q_ref_r_star,q_ref_i_star,n_itr\n");
    bool all_converged = true;
    for (const auto& r : rows) {
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", r.alpha, r.error, r.q_r_star,
                     r.q_i_star, r.q_ref_r_star, r.q_ref_i_star, r.iterations);
        std::printf("alpha %-8.4g error %.4e n_itr %d%s\n", r.alpha, r.error, r.iterations,
                    r.converged ? "" : " [not converged]");
        all_converged = all_converged && r.converged;
    }
    std::fclose(f);
    return all_converged ? 0 : kExitNoConvergence;
}

int cmd_sweep(const std::string& param, const std::vector<double>& values,
              const std::string& case_path, const std::string& mesh_path,
              const std::string& geometry, double pipe_radius, double pipe_length, int jobs,
              const std::string& out, bool deterministic) {
    SweepSpec spec;
    if (param == "alpha") spec.param = SweepParam::alpha;
    else if (param == "tolerance") spec.param = SweepParam::tolerance;
    else if (param == "c_stab") spec.param = SweepParam::c_stab;
    else if (param == "mesh_resolution") spec.param = SweepParam::mesh_resolution;
    else throw ConfigError("unknown sweep parameter '" + param + "'");
    spec.values = values;
    spec.base = read_case(case_path);
    spec.geometry = parse_geometry(geometry);
    spec.jobs = jobs;

    std::optional<Mesh> mesh;
    if (spec.param != SweepParam::mesh_resolution) {
        if (mesh_path.empty()) throw ConfigError("--mesh is required for this sweep parameter");
        mesh.emplace(read_mesh(mesh_path));
    }
    RunOptions opts;
    opts.deterministic = deterministic;
    const auto rows =
        run_sweep(spec, mesh ? &*mesh : nullptr, pipe_radius, pipe_length, opts);

    std::FILE* f = std::fopen(out.c_str(), "w");
    if (!f) throw PostprocError(out + ": cannot open for writing");
    std::fprintf(f, "value,error,imbalance,n_itr\n");
    bool all_converged = true;
    for (const auto& r : rows) {
        std::fprintf(f, "%.17g,%.17g,%.17g,%d\n", r.value, r.error, r.imbalance, r.iterations);
        std::printf("%s %-12.6g error %.4e imbalance %.4e n_itr %d%s\n", param.c_str(), r.value,
                    r.error, r.imbalance, r.iterations, r.converged ? "" : " [not converged]");
        all_converged = all_converged && r.converged;
    }
    std::fclose(f);
    return all_converged ? 0 : kExitNoConvergence;
}

int cmd_womersley_table(double alpha, int samples, double radius, double length, double mu,
                        double rho, double h, const std::string& out) {
    const PipeReference ref = PipeReference::from_alpha(alpha, radius, length, mu, rho, h);
    const double u0 = ref.steady_centerline();
    std::FILE* f = std::fopen(out.c_str(), "w");
    if (!f) throw PostprocError(out + ": cannot open for writing");
    std::fprintf(f, "r_over_R,u_r,u_i\n");
    for (int i = 0; i < samples; ++i) {
        const double x = (samples == 1) ? 0.0 : static_cast<double>(i) / (samples - 1);
        const auto u = ref.velocity(x * radius) / u0;
        std::fprintf(f, "%.17g,%.17g,%.17g\n", x, u.real(), u.imag());
    }
    std::fclose(f);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"frequency-domain stabilized finite-element solver for unsteady Stokes flow"};
    app.require_subcommand(1);
    bool deterministic = false;
    app.add_flag("--deterministic", deterministic,
                 "single worker thread, omit timings from reports");

    // generate
    auto* gen = app.add_subcommand("generate", "generate a canonical mesh");
    gen->require_subcommand(1);
    auto* gp = gen->add_subcommand("pipe", "cylinder with inlet/outlet/wall patches");
    double p_radius = 1.0, p_length = 15.0;
    int p_nr = 0, p_naz = 8, p_nax = 0, p_target = 0;
    std::string gp_out;
    gp->add_option("--radius", p_radius, "pipe radius")->capture_default_str();
    gp->add_option("--length", p_length, "pipe length")->capture_default_str();
    gp->add_option("--n-radial", p_nr, "rings in the disc");
    gp->add_option("--n-azimuthal", p_naz, "sectors on the first ring")->capture_default_str();
    gp->add_option("--n-axial", p_nax, "extrusion layers");
    gp->add_option("--target-elements", p_target, "size the counts for ~this many tetrahedra");
    gp->add_option("-o,--output", gp_out, "mesh file to write")->required();

    auto* gc = gen->add_subcommand("channel", "rectangle with inlet/outlet/wall patches");
    double c_height = 1.0, c_length = 10.0;
    int c_ny = 0, c_nx = 0;
    std::string gc_out;
    gc->add_option("--height", c_height, "channel height")->capture_default_str();
    gc->add_option("--length", c_length, "channel length")->capture_default_str();
    gc->add_option("--ny", c_ny, "cells across")->required();
    gc->add_option("--nx", c_nx, "cells along")->required();
    gc->add_option("-o,--output", gc_out, "mesh file to write")->required();

    // solve
    auto* sv = app.add_subcommand("solve", "assemble and solve one frequency mode");
    std::string sv_case, sv_mesh, sv_out = "out", sv_dump;
    sv->add_option("--case", sv_case, "case configuration JSON")->required();
    sv->add_option("--mesh", sv_mesh, "mesh file")->required();
    sv->add_option("-o,--output", sv_out, "output directory")->capture_default_str();
    sv->add_option("--dump-system", sv_dump, "write the scaled system in Matrix Market format");

    // verify
    auto* vf = app.add_subcommand("verify", "alpha sweep against the analytic reference");
    std::string vf_case, vf_mesh, vf_geom = "pipe", vf_out = "verify.csv";
    std::vector<double> vf_alphas;
    vf->add_option("--case", vf_case, "case configuration JSON")->required();
    vf->add_option("--mesh", vf_mesh, "mesh file")->required();
    vf->add_option("--geometry", vf_geom, "pipe|channel")->capture_default_str();
    vf->add_option("--alphas", vf_alphas, "Womersley numbers (default 0, sqrt(2), ..., 32)")
        ->delimiter(',');
    vf->add_option("-o,--output", vf_out, "CSV to write")->capture_default_str();

    // sweep
    auto* sw = app.add_subcommand("sweep", "parameter sweep with error/imbalance/iterations");
    std::string sw_param, sw_case, sw_mesh, sw_geom = "pipe", sw_out = "sweep.csv";
    std::vector<double> sw_values;
    double sw_pradius = 1.0, sw_plength = 15.0;
    int sw_jobs = 1;
    sw->add_option("--param", sw_param, "alpha|tolerance|c_stab|mesh_resolution")->required();
    sw->add_option("--values", sw_values, "sweep values, strictly monotone")
        ->required()
        ->delimiter(',');
    sw->add_option("--case", sw_case, "case configuration JSON")->required();
    sw->add_option("--mesh", sw_mesh, "mesh file (all parameters except mesh_resolution)");
    sw->add_option("--geometry", sw_geom, "pipe|channel")->capture_default_str();
    sw->add_option("--pipe-radius", sw_pradius, "generated pipe radius (mesh_resolution)")
        ->capture_default_str();
    sw->add_option("--pipe-length", sw_plength, "generated pipe length (mesh_resolution)")
        ->capture_default_str();
    sw->add_option("--jobs", sw_jobs, "run this many cases concurrently")->capture_default_str();
    sw->add_option("-o,--output", sw_out, "CSV to write")->capture_default_str();

    // womersley-table
    auto* wt = app.add_subcommand("womersley-table",
                                  "tabulate the analytic pipe profile, normalized by the "
                                  "steady centerline velocity");
    double wt_alpha = 0.0, wt_radius = 1.0, wt_length = 15.0, wt_mu = 1.0, wt_rho = 1.0,
           wt_h = 1.0;
    int wt_samples = 51;
    std::string wt_out = "womersley.csv";
    wt->add_option("--alpha", wt_alpha, "Womersley number")->required();
    wt->add_option("--samples", wt_samples, "points across the radius")->capture_default_str();
    wt->add_option("--radius", wt_radius)->capture_default_str();
    wt->add_option("--length", wt_length)->capture_default_str();
    wt->add_option("--mu", wt_mu)->capture_default_str();
    wt->add_option("--rho", wt_rho)->capture_default_str();
    wt->add_option("--traction", wt_h, "inlet traction magnitude")->capture_default_str();
    wt->add_option("-o,--output", wt_out, "CSV to write")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gp->parsed()) {
            Mesh mesh = (p_target > 0)
                            ? generate_pipe_target(p_radius, p_length, p_target)
                            : generate_pipe(p_radius, p_length, p_nr, p_naz, p_nax);
            write_mesh(mesh, gp_out);
            std::printf("wrote %s: %d nodes, %d elements\n", gp_out.c_str(), mesh.num_nodes(),
                        mesh.num_elements());
            return 0;
        }
        if (gc->parsed()) {
            Mesh mesh = generate_channel(c_height, c_length, c_ny, c_nx);
            write_mesh(mesh, gc_out);
            std::printf("wrote %s: %d nodes, %d elements\n", gc_out.c_str(), mesh.num_nodes(),
                        mesh.num_elements());
            return 0;
        }
        if (sv->parsed()) return cmd_solve(sv_case, sv_mesh, sv_out, sv_dump, deterministic);
        if (vf->parsed())
            return cmd_verify(vf_case, vf_mesh, vf_geom, vf_alphas, vf_out, deterministic);
        if (sw->parsed())
            return cmd_sweep(sw_param, sw_values, sw_case, sw_mesh, sw_geom, sw_pradius,
                             sw_plength, sw_jobs, sw_out, deterministic);
        if (wt->parsed())
            return cmd_womersley_table(wt_alpha, wt_samples, wt_radius, wt_length, wt_mu, wt_rho,
                                       wt_h, wt_out);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const MeshError& e) {
        std::fprintf(stderr, "mesh error: %s\n", e.what());
        return kExitMesh;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitOther;
    }
    return 0;
}
