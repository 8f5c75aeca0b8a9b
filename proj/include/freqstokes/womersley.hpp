#pragma once

#include <complex>

namespace freqstokes {

/// Bessel functions of the first kind J0, J1 at complex argument, validated
/// for |z| <= 64 (relative error <= 1e-10). Ascending power series with
/// compensated extended-precision summation for small |z|, Hankel's
/// large-argument expansion beyond; arguments with negative real part are
/// folded with J0(-z) = J0(z), J1(-z) = -J1(z).
std::complex<double> bessel_j0(std::complex<double> z);
std::complex<double> bessel_j1(std::complex<double> z);
std::complex<double> bessel_j(int order, std::complex<double> z);

/// Oscillatory pipe flow driven by a traction of magnitude h at the inlet and
/// zero at the outlet, expressed in the frequency domain. alpha is the
/// Womersley number R sqrt(rho omega / mu); j^{3/2} is fixed to the principal
/// branch exp(i 3 pi / 4).
struct PipeReference {
    double alpha = 0.0;
    double radius = 1.0;
    double length = 15.0;
    double mu = 1.0;
    double rho = 1.0;
    double h = 1.0;

    static PipeReference from_alpha(double alpha, double radius, double length, double mu,
                                    double rho, double h);
    static PipeReference from_omega(double omega, double radius, double length, double mu,
                                    double rho, double h);

    double omega() const { return alpha * alpha * mu / (rho * radius * radius); }
    /// Axial velocity at radius r in [0, radius].
    std::complex<double> velocity(double r) const;
    std::complex<double> flow_rate() const;
    double steady_centerline() const { return h * radius * radius / (4.0 * mu * length); }
    double steady_flow_rate() const;
};

/// Oscillatory plane-channel flow between walls at y = +-half_height, same
/// driving convention as the pipe; alpha = half_height sqrt(rho omega / mu).
struct ChannelReference {
    double alpha = 0.0;
    double half_height = 0.5;
    double length = 1.0;
    double mu = 1.0;
    double h = 1.0;

    /// Streamwise velocity at distance y from the centreline, |y| <= half_height.
    std::complex<double> velocity(double y) const;
    double steady_centerline() const {
        return h * half_height * half_height / (2.0 * mu * length);
    }
};

} // namespace freqstokes
