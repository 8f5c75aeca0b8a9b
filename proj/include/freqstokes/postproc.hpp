#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "freqstokes/solution.hpp"

namespace freqstokes {

class PostprocError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Outward flow rate through a patch, integral of u.n with exact linear-facet
/// integration (facet mean velocity times normal times measure).
std::complex<double> patch_flow_rate(const SolutionField& field, const std::string& patch);

/// ||sum q|| / sum ||q|| over the listed patches (complex magnitudes);
/// defined as 0 when every flow vanishes.
double mass_imbalance(const SolutionField& field, const std::vector<std::string>& patches);

/// Analytic reference for the error norm: complex axial velocity at a point
/// plus the axial direction used to extract the computed component.
struct ReferenceSpec {
    std::function<std::complex<double>(const Vec3&)> axial;
    Vec3 axis{0.0, 0.0, 1.0};
    /// Nodes on these patches, and nodes sharing an element with them, are
    /// excluded (traction end effects).
    std::vector<std::string> excluded_patches{"inlet", "outlet"};
};

/// Discrete nodal 2-norm of the complex axial-velocity error over the mesh,
/// divided by the reference norm.
double error_norm(const SolutionField& field, const ReferenceSpec& ref);

/// Real nodal field at time t from a set of frequency modes:
/// u(x,t) = Re[ sum_omega u(x,omega) e^{i omega t} ]; the omega = 0 mode
/// contributes its real part only.
struct TimeSample {
    std::vector<Vec3> u;
    std::vector<double> p;
};
TimeSample reconstruct_time(const std::vector<const SolutionField*>& modes, double t);

/// Legacy ASCII VTK 3.0 unstructured grid with point data u_r, u_i, p_r, p_i.
void export_vtk(const SolutionField& field, const std::string& path);

/// Profile along a line: nodes within `tolerance` of the line are emitted in
/// order of their signed coordinate along `direction`. Velocity columns hold
/// the component along `component_axis` divided by `u_scale`; the coordinate
/// is divided by `coord_scale`. CSV header: coord,u_r,u_i,p_r,p_i.
struct LineSpec {
    Vec3 origin;
    Vec3 direction{1.0, 0.0, 0.0};
    Vec3 component_axis{0.0, 0.0, 1.0};
    double tolerance = 1e-8;
    double coord_scale = 1.0;
    double u_scale = 1.0;
};
void export_csv_profile(const SolutionField& field, const LineSpec& line, const std::string& path);

} // namespace freqstokes
