#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "freqstokes/driver.hpp"
#include "freqstokes/mesh_generate.hpp"
#include "freqstokes/mesh_io.hpp"
#include "freqstokes/womersley.hpp"

namespace py = pybind11;
using namespace freqstokes;

namespace {

Vec3 vec_from_seq(const std::vector<double>& v, const char* what) {
    if (v.size() < 2 || v.size() > 3) throw ConfigError(std::string(what) + ": expected 2 or 3 numbers");
    Vec3 out;
    for (size_t i = 0; i < v.size(); ++i) out[static_cast<int>(i)] = v[i];
    return out;
}

py::array_t<double> nodes_array(const Mesh& m) {
    py::array_t<double> arr({m.num_nodes(), m.dimension()});
    auto a = arr.mutable_unchecked<2>();
    for (int i = 0; i < m.num_nodes(); ++i)
        for (int d = 0; d < m.dimension(); ++d) a(i, d) = m.node(i)[d];
    return arr;
}

py::array_t<int> elements_array(const Mesh& m) {
    py::array_t<int> arr({m.num_elements(), m.nodes_per_element()});
    auto a = arr.mutable_unchecked<2>();
    for (int e = 0; e < m.num_elements(); ++e) {
        auto en = m.element(e);
        for (int k = 0; k < m.nodes_per_element(); ++k) a(e, k) = en[k];
    }
    return arr;
}

py::array_t<double> vec_field_array(const std::vector<Vec3>& v, int dim) {
    py::array_t<double> arr({static_cast<int>(v.size()), dim});
    auto a = arr.mutable_unchecked<2>();
    for (size_t i = 0; i < v.size(); ++i)
        for (int d = 0; d < dim; ++d) a(static_cast<int>(i), d) = v[i][d];
    return arr;
}

GeometryKind geometry_kind(const std::string& s) {
    if (s == "pipe") return GeometryKind::pipe;
    if (s == "channel") return GeometryKind::channel;
    throw ConfigError("geometry must be 'pipe' or 'channel'");
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "frequency-domain stabilized finite-element Stokes solver";

    py::register_exception<MeshError>(m, "MeshError");
    py::register_exception<ConfigError>(m, "ConfigError");

    py::class_<Mesh>(m, "Mesh")
        .def_property_readonly("dimension", &Mesh::dimension)
        .def_property_readonly("num_nodes", &Mesh::num_nodes)
        .def_property_readonly("num_elements", &Mesh::num_elements)
        .def_property_readonly("nodes", &nodes_array)
        .def_property_readonly("elements", &elements_array)
        .def_property_readonly("patch_names",
                               [](const Mesh& me) {
                                   std::vector<std::string> names;
                                   for (const auto& [n, _] : me.patches()) names.push_back(n);
                                   return names;
                               })
        .def("num_facets", &Mesh::num_facets)
        .def("patch_facets",
             [](const Mesh& me, const std::string& name) {
                 const int nf = me.num_facets(name);
                 py::array_t<int> arr({nf, me.nodes_per_facet()});
                 auto a = arr.mutable_unchecked<2>();
                 for (int f = 0; f < nf; ++f) {
                     auto fn = me.facet(name, f);
                     for (int k = 0; k < me.nodes_per_facet(); ++k) a(f, k) = fn[k];
                 }
                 return arr;
             })
        .def("facet_geometry",
             [](const Mesh& me, const std::string& name, int f) {
                 const FacetGeometry g = me.facet_geometry(name, f);
                 return py::make_tuple(g.measure,
                                       py::make_tuple(g.normal.x, g.normal.y, g.normal.z));
             })
        .def("patch_measure", &Mesh::patch_measure)
        .def("total_measure", &Mesh::total_measure)
        .def("__repr__", [](const Mesh& me) {
            return "<Mesh dim=" + std::to_string(me.dimension()) +
                   " nodes=" + std::to_string(me.num_nodes()) +
                   " elements=" + std::to_string(me.num_elements()) + ">";
        });

    py::class_<BoundaryCondition>(m, "BoundaryCondition")
        .def(py::init([](const std::string& patch, const std::string& kind,
                         const std::vector<double>& real, const std::vector<double>& imag) {
                 BoundaryCondition bc;
                 bc.patch = patch;
                 if (kind == "dirichlet") bc.kind = BcKind::dirichlet;
                 else if (kind == "neumann") bc.kind = BcKind::neumann;
                 else throw ConfigError("kind must be 'dirichlet' or 'neumann'");
                 bc.value_real = vec_from_seq(real, "real");
                 bc.value_imag = vec_from_seq(imag, "imag");
                 return bc;
             }),
             py::arg("patch"), py::arg("kind"), py::arg("real"),
             py::arg("imag") = std::vector<double>{0.0, 0.0, 0.0});

    py::class_<CaseConfig>(m, "CaseConfig")
        .def(py::init([](double rho, double mu, double omega, double c_stab, double tolerance,
                         int max_iterations, const std::vector<BoundaryCondition>& bcs) {
                 CaseConfig cfg;
                 cfg.rho = rho;
                 cfg.mu = mu;
                 cfg.omega = omega;
                 cfg.c_stab = c_stab;
                 cfg.tolerance = tolerance;
                 cfg.max_iterations = max_iterations;
                 cfg.bcs = bcs;
                 cfg.validate();
                 return cfg;
             }),
             py::arg("rho") = 1.0, py::arg("mu") = 1.0, py::arg("omega") = 0.0,
             py::arg("c_stab") = 0.03125, py::arg("tolerance") = 1e-3,
             py::arg("max_iterations") = 10000,
             py::arg("bcs") = std::vector<BoundaryCondition>{})
        .def_readwrite("rho", &CaseConfig::rho)
        .def_readwrite("mu", &CaseConfig::mu)
        .def_readwrite("omega", &CaseConfig::omega)
        .def_readwrite("c_stab", &CaseConfig::c_stab)
        .def_readwrite("tolerance", &CaseConfig::tolerance)
        .def_readwrite("max_iterations", &CaseConfig::max_iterations)
        .def("to_json", &case_to_json_string);
    m.def("case_from_json", &case_from_json_string, py::arg("text"),
          py::arg("context") = "<string>");

    py::class_<SolutionField>(m, "Solution")
        .def_property_readonly("u_r",
                               [](const SolutionField& f) {
                                   return vec_field_array(f.u_r, f.mesh->dimension());
                               })
        .def_property_readonly("u_i",
                               [](const SolutionField& f) {
                                   return vec_field_array(f.u_i, f.mesh->dimension());
                               })
        .def_property_readonly("p_r", [](const SolutionField& f) { return py::array(py::cast(f.p_r)); })
        .def_property_readonly("p_i", [](const SolutionField& f) { return py::array(py::cast(f.p_i)); })
        .def_readonly("omega", &SolutionField::omega)
        .def_readonly("alpha", &SolutionField::alpha)
        .def_property_readonly("iterations",
                               [](const SolutionField& f) { return f.report.iterations; })
        .def_property_readonly("converged",
                               [](const SolutionField& f) { return f.report.converged; })
        .def_property_readonly(
            "residual_history",
            [](const SolutionField& f) { return py::array(py::cast(f.report.residual_history)); })
        .def_property_readonly("achieved_relative_residual",
                               [](const SolutionField& f) {
                                   return f.report.achieved_relative_residual;
                               })
        .def("flow_rate", &patch_flow_rate, py::arg("patch"))
        .def("mass_imbalance", &mass_imbalance, py::arg("patches"))
        .def("error_norm",
             [](const SolutionField& f, const CaseConfig& cfg, const std::string& geometry) {
                 return error_norm(f, reference_spec(*f.mesh, cfg, geometry_kind(geometry)));
             },
             py::arg("config"), py::arg("geometry") = "pipe")
        .def("export_vtk", &export_vtk, py::arg("path"));

    m.def("generate_pipe", &generate_pipe, py::arg("radius"), py::arg("length"),
          py::arg("n_radial"), py::arg("n_azimuthal"), py::arg("n_axial"));
    m.def("generate_pipe_target", &generate_pipe_target, py::arg("radius"), py::arg("length"),
          py::arg("target_elements"));
    m.def("generate_channel", &generate_channel, py::arg("height"), py::arg("length"),
          py::arg("n_y"), py::arg("n_x"));
    m.def("read_mesh", &read_mesh, py::arg("path"));
    m.def("write_mesh", &write_mesh, py::arg("mesh"), py::arg("path"));

    m.def(
        "solve",
        [](const Mesh& mesh, const CaseConfig& cfg, bool deterministic) {
            RunOptions opts;
            opts.deterministic = deterministic;
            return solve_case(mesh, cfg, opts).field;
        },
        py::arg("mesh"), py::arg("config"), py::arg("deterministic") = false,
        py::keep_alive<0, 1>());

    m.def("omega_for_alpha",
          [](const Mesh& mesh, const CaseConfig& cfg, double alpha, const std::string& geometry) {
              return omega_for_alpha(mesh, cfg, geometry_kind(geometry), alpha);
          },
          py::arg("mesh"), py::arg("config"), py::arg("alpha"), py::arg("geometry") = "pipe");
    m.def("default_alpha_grid", &default_alpha_grid);

    m.def("bessel_j", &bessel_j, py::arg("order"), py::arg("z"));
    m.def(
        "pipe_velocity",
        [](double alpha, double r, double radius, double length, double mu, double rho, double h) {
            return PipeReference::from_alpha(alpha, radius, length, mu, rho, h).velocity(r);
        },
        py::arg("alpha"), py::arg("r"), py::arg("radius") = 1.0, py::arg("length") = 15.0,
        py::arg("mu") = 1.0, py::arg("rho") = 1.0, py::arg("h") = 1.0);
    m.def(
        "pipe_flow_rate",
        [](double alpha, double radius, double length, double mu, double rho, double h) {
            return PipeReference::from_alpha(alpha, radius, length, mu, rho, h).flow_rate();
        },
        py::arg("alpha"), py::arg("radius") = 1.0, py::arg("length") = 15.0, py::arg("mu") = 1.0,
        py::arg("rho") = 1.0, py::arg("h") = 1.0);
    m.def(
        "channel_velocity",
        [](double alpha, double y, double half_height, double length, double mu, double h) {
            return ChannelReference{alpha, half_height, length, mu, h}.velocity(y);
        },
        py::arg("alpha"), py::arg("y"), py::arg("half_height") = 0.5, py::arg("length") = 10.0,
        py::arg("mu") = 1.0, py::arg("h") = 1.0);

    m.def(
        "reconstruct_time",
        [](const std::vector<const SolutionField*>& modes, double t) {
            const TimeSample s = reconstruct_time(modes, t);
            const int dim = modes.at(0)->mesh->dimension();
            return py::make_tuple(vec_field_array(s.u, dim), py::array(py::cast(s.p)));
        },
        py::arg("modes"), py::arg("t"));
}
