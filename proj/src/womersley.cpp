#include "freqstokes/womersley.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace freqstokes {

namespace {

using cplx = std::complex<double>;
using lcplx = std::complex<long double>;

constexpr double kSeriesLimit = 15.0; // series/asymptotic switchover
constexpr double kDomainLimit = 64.0; // validated argument range

// Ascending series with Kahan-compensated extended-precision accumulation.
// Near the switchover the leading terms grow to ~e^|z| before cancelling, so
// the compensation and the long-double terms keep ~1e-12 of the result.
lcplx ascending_series(int order, lcplx z) {
    const lcplx q = -z * z / lcplx(4.0L);
    lcplx term = (order == 0) ? lcplx(1.0L) : z / lcplx(2.0L);
    lcplx sum = term, comp = 0.0L;
    for (int m = 1; m < 200; ++m) {
        term *= q / lcplx(static_cast<long double>(m) * (m + order));
        const lcplx y = term - comp;
        const lcplx t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (std::abs(term) <= 1e-25L * std::abs(sum) && 2 * m > std::abs(z)) break;
    }
    return sum;
}

// Hankel's expansion: J_nu(z) ~ sqrt(2/(pi z)) [P cos chi - Q sin chi],
// chi = z - (2 nu + 1) pi / 4, with the P/Q series truncated at the smallest
// term.
cplx hankel_asymptotic(int order, cplx z) {
    const double mu = 4.0 * order * order;
    cplx term(1.0, 0.0), p(1.0, 0.0), q(0.0, 0.0);
    double prev = 1e300;
    for (int k = 1; k < 40; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (8.0 * k) / z;
        if (std::abs(term) >= prev) break; // divergent tail reached
        prev = std::abs(term);
        const int phase = k % 4;
        if (phase == 1) q += term;
        else if (phase == 2) p -= term;
        else if (phase == 3) q -= term;
        else p += term;
        if (prev < 1e-18) break;
    }
    const cplx chi = z - cplx((2.0 * order + 1.0) * std::numbers::pi / 4.0, 0.0);
    return std::sqrt(cplx(2.0, 0.0) / (std::numbers::pi * z)) *
           (p * std::cos(chi) - q * std::sin(chi));
}

cplx bessel_impl(int order, cplx z) {
    if (std::abs(z) > kDomainLimit)
        throw std::domain_error("bessel_j: |z| beyond the validated range (64)");
    double sign = 1.0;
    if (z.real() < 0.0) { // J0 even, J1 odd
        z = -z;
        if (order == 1) sign = -1.0;
    }
    if (std::abs(z) <= kSeriesLimit) {
        const lcplx s = ascending_series(order, lcplx(z.real(), z.imag()));
        return sign * cplx(static_cast<double>(s.real()), static_cast<double>(s.imag()));
    }
    return sign * hankel_asymptotic(order, z);
}

const cplx kJ32 = std::polar(1.0, 3.0 * std::numbers::pi / 4.0); // j^{3/2}
const cplx kJ12 = std::polar(1.0, std::numbers::pi / 4.0);       // j^{1/2}

} // namespace

cplx bessel_j0(cplx z) { return bessel_impl(0, z); }
cplx bessel_j1(cplx z) { return bessel_impl(1, z); }
cplx bessel_j(int order, cplx z) {
    if (order != 0 && order != 1) throw std::domain_error("bessel_j: order must be 0 or 1");
    return bessel_impl(order, z);
}

PipeReference PipeReference::from_alpha(double alpha, double radius, double length, double mu,
                                        double rho, double h) {
    if (alpha < 0.0) throw std::domain_error("alpha must be non-negative");
    return {alpha, radius, length, mu, rho, h};
}

PipeReference PipeReference::from_omega(double omega, double radius, double length, double mu,
                                        double rho, double h) {
    if (omega < 0.0) throw std::domain_error("omega must be non-negative");
    return {radius * std::sqrt(rho * omega / mu), radius, length, mu, rho, h};
}

cplx PipeReference::velocity(double r) const {
    if (r < 0.0 || r > radius * (1.0 + 1e-9))
        throw std::domain_error("pipe velocity: r outside [0, R]");
    r = std::min(r, radius);
    if (alpha == 0.0) return cplx(h * (radius * radius - r * r) / (4.0 * mu * length), 0.0);
    const cplx k = kJ32 * alpha;
    const cplx j0k = bessel_j0(k);
    return cplx(0.0, -1.0) * (h * radius * radius / (length * mu * alpha * alpha)) *
           (1.0 - bessel_j0(k * (r / radius)) / j0k);
}

double PipeReference::steady_flow_rate() const {
    return std::numbers::pi * h * std::pow(radius, 4) / (8.0 * mu * length);
}

cplx PipeReference::flow_rate() const {
    if (alpha == 0.0) return cplx(steady_flow_rate(), 0.0);
    const cplx k = kJ32 * alpha;
    return cplx(0.0, -1.0) * (std::numbers::pi * h * std::pow(radius, 4) /
                              (length * mu * alpha * alpha)) *
           (1.0 + 2.0 * kJ12 * bessel_j1(k) / (alpha * bessel_j0(k)));
}

cplx ChannelReference::velocity(double y) const {
    const double b = half_height;
    if (std::abs(y) > b * (1.0 + 1e-9))
        throw std::domain_error("channel velocity: |y| outside [0, b]");
    y = std::clamp(y, -b, b);
    if (alpha == 0.0) return cplx(h * (b * b - y * y) / (2.0 * mu * length), 0.0);
    const cplx lam = kJ12 * (alpha / b);
    return cplx(0.0, -1.0) * (h * b * b / (mu * length * alpha * alpha)) *
           (1.0 - std::cosh(lam * y) / std::cosh(lam * b));
}

} // namespace freqstokes
