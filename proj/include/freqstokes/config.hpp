#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "freqstokes/geometry.hpp"

namespace freqstokes {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class BcKind { dirichlet, neumann };

/// Velocity (dirichlet, g) or traction (neumann, h) imposed on one patch,
/// constant over the patch, split into real and imaginary parts.
struct BoundaryCondition {
    std::string patch;
    BcKind kind = BcKind::neumann;
    Vec3 value_real;
    Vec3 value_imag;
};

struct CaseConfig {
    double rho = 1.0;            // density
    double mu = 1.0;             // dynamic viscosity
    double omega = 0.0;          // angular frequency of the mode
    double c_stab = 0.03125;     // stabilization constant c = 2^-5
    double tolerance = 1e-3;     // eps_LS, relative residual of the scaled system
    int max_iterations = 10000;
    std::vector<BoundaryCondition> bcs;

    void validate() const;
};

/// Case JSON: {rho, mu, omega, c_stab, tolerance, max_iterations,
/// bcs: [{patch, kind: "dirichlet"|"neumann", real: [...], imag: [...]}]}.
/// Absent optional fields take the defaults above.
CaseConfig case_from_json_string(const std::string& text, const std::string& context = "<string>");
CaseConfig read_case(const std::string& path);
/// Serializes with every default resolved, so run reports are self-describing.
std::string case_to_json_string(const CaseConfig& config);

} // namespace freqstokes
