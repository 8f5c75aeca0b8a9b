#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "freqstokes/womersley.hpp"

using namespace freqstokes;
using cplx = std::complex<double>;

namespace {

// Frozen 40-digit oracle values (mpmath), J0/J1 at z = alpha exp(i 3pi/4)
// and at generic points covering both evaluation regimes.
struct FrozenBessel {
    cplx z, j0, j1;
};
const std::vector<FrozenBessel> kFrozen = {
    // z = alpha * exp(i 3pi/4)
    {{-0.7071067811865475244, 0.7071067811865475244},
     {0.98438178121308688397, 0.24956604003665972142},
     {-0.39586826101971139132, 0.30755663137553655438}},
    {{-1.0, 1.0},
     {0.9376084768060292766, 0.49652994760912213217},
     {-0.61416033492290361017, 0.36502802882708778851}},
    {{-1.4142135623730950488, 1.4142135623730950488},
     {0.75173418271380822855, 0.9722916273066612061},
     {-0.99707765192642853334, 0.29977543700203351499}},
    {{-2.8284271247461900976, 2.8284271247461900976},
     {-2.5634165572585797541, 2.2926903226992998336},
     {-1.8692484590318993424, -2.5638216885610780456}},
    {{-5.6568542494923801952, 5.6568542494923801952},
     {20.97395561073025607, -35.016725164881512426},
     {32.506861295691418416, 21.673535103011480976}},
    {{-11.31370849898476039, 11.31370849898476039},
     {-659.496904358532424, -8190.7100202055955971},
     {8024.8314836705164165, -459.7761809663957458}},
    {{-13.788582233137676726, 13.788582233137676726}, // just inside the series regime
     {59956.933112233757414, 64879.423497279548492},
     {-64811.458612504521404, 57672.240581592108421}},
    {{-14.49568901432422425, 14.49568901432422425}, // just past the switchover
     {6749.3140202042539364, 174572.75939951084743},
     {-171682.46496872076351, 3568.5191049018788184}},
    {{-22.627416997969520781, 22.627416997969520781},
     {-461091834.83547370454, -113200912.72205214468},
     {117102453.03185678038, -454733947.27087119445}},
    {{-45.254833995939041562, 45.254833995939041562},
     {1436827154569229273.0, 1732571765230425754.2},
     {-1730982928990678214.7, 1419265577711231903.1}},
    // generic points
    {{3.0, 4.0}, {-8.8121437936979055484, -4.59843789974303514},
     {3.6541102814142644218, -8.4031042565830871925}},
    {{18.0, -7.0}, {11.463006604086139376, -99.110585882923125421},
     {-97.927677723222768596, -13.771440255642748453}},
    {{22.0, 9.0}, {-552.99480394603279601, -368.12611818435766819},
     {354.40573190725820494, -555.90492421647642693}},
    {{-15.0, 2.0}, {-0.10246827747721026634, 0.7375897696750035956},
     {-0.75913341907093362165, -0.12623171752681541511}},
    {{10.0, 0.0}, {-0.2459357644513483352, 0.0}, {0.04347274616886143667, 0.0}},
    {{0.5, -0.25}, {0.95271009715390977309, 0.061039853225906519842},
     {0.24795115470221499109, -0.11436217382852286178}},
};

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) {
                x[i] = t;
                w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
                break;
            }
        }
    }
}

// 1D finite-difference oracle for the oscillatory channel: complex
// tridiagonal solve of mu u'' - i rho w u = -h/L with no-slip walls.
std::vector<cplx> channel_fd_oracle(double alpha, double b, double L, double mu, double h, int N) {
    const cplx iw = cplx(0.0, 1.0) * (mu * alpha * alpha / (b * b)); // i rho w
    const double dy = 2.0 * b / N;
    const int m = N - 1; // interior nodes
    std::vector<cplx> lower(m, mu / (dy * dy)), diag(m, -2.0 * mu / (dy * dy) - iw),
        upper(m, mu / (dy * dy)), rhs(m, cplx(-h / L, 0.0));
    for (int i = 1; i < m; ++i) {
        const cplx f = lower[i] / diag[i - 1];
        diag[i] -= f * upper[i - 1];
        rhs[i] -= f * rhs[i - 1];
    }
    std::vector<cplx> u(m);
    u[m - 1] = rhs[m - 1] / diag[m - 1];
    for (int i = m - 2; i >= 0; --i) u[i] = (rhs[i] - upper[i] * u[i + 1]) / diag[i];
    std::vector<cplx> full(N + 1, cplx(0.0, 0.0));
    for (int i = 0; i < m; ++i) full[i + 1] = u[i];
    return full; // u at y_j = -b + j dy
}

} // namespace

TEST_CASE("bessel: series leading terms") {
    CHECK(bessel_j0(cplx(0.0, 0.0)) == cplx(1.0, 0.0));
    CHECK(bessel_j1(cplx(0.0, 0.0)) == cplx(0.0, 0.0));
}

TEST_CASE("bessel matches the extended-precision oracle to 1e-10") {
    for (const auto& t : kFrozen) {
        const cplx j0 = bessel_j0(t.z);
        const cplx j1 = bessel_j1(t.z);
        CHECK(std::abs(j0 - t.j0) <= 1e-10 * std::abs(t.j0));
        CHECK(std::abs(j1 - t.j1) <= 1e-10 * std::abs(t.j1));
    }
}

TEST_CASE("bessel: Kelvin-function identity at x = 1") {
    // J0(j^{3/2} x) = ber(x) + i bei(x)
    const cplx z = std::polar(1.0, 3.0 * std::numbers::pi / 4.0);
    const cplx expect(0.98438178121308688397, 0.24956604003665972142);
    CHECK(std::abs(bessel_j0(z) - expect) < 1e-12);
}

TEST_CASE("bessel: derivative identity J0' = -J1 by central differences") {
    const cplx points[] = {{1.3, 0.4}, {-4.0, 2.5}, {7.1, -6.0}, {0.05, 0.0}, {9.0, 9.0}};
    const double h = 1e-6;
    for (const cplx z : points) {
        const cplx fd = (bessel_j0(z + h) - bessel_j0(z - h)) / (2.0 * h);
        CHECK(std::abs(fd + bessel_j1(z)) <= 1e-8 * (1.0 + std::abs(bessel_j1(z))));
    }
}

TEST_CASE("bessel: domain guards") {
    CHECK_THROWS_AS(bessel_j0(cplx(65.0, 10.0)), std::domain_error);
    CHECK_THROWS_AS(bessel_j(2, cplx(1.0, 0.0)), std::domain_error);
    CHECK(bessel_j(0, cplx(10.0, 0.0)) == bessel_j0(cplx(10.0, 0.0)));
}

TEST_CASE("pipe velocity") {
    SUBCASE("steady branch") {
        const auto ref = PipeReference::from_alpha(0.0, 1.0, 15.0, 1.0, 1.0, 1.0);
        CHECK(ref.velocity(0.0).real() == doctest::Approx(1.0 / 60.0).epsilon(1e-14));
        CHECK(ref.velocity(0.0).imag() == 0.0);
        CHECK(std::abs(ref.velocity(1.0)) == 0.0);
    }
    SUBCASE("no-slip for all validated alpha") {
        for (double a : {std::sqrt(2.0), 2.0, 4.0, 8.0, 16.0, 32.0, 64.0}) {
            const auto ref = PipeReference::from_alpha(a, 1.0, 15.0, 1.0, 1.0, 1.0);
            CHECK(std::abs(ref.velocity(1.0)) <= 1e-12 * std::abs(ref.velocity(0.0)));
        }
    }
    SUBCASE("alpha = 2 centreline regression value (extended-precision oracle)") {
        const auto ref = PipeReference::from_alpha(2.0, 1.0, 15.0, 1.0, 1.0, 1.0);
        const cplx expect(0.0107284608571282018, -0.0083718808969372495889);
        CHECK(std::abs(ref.velocity(0.0) - expect) <= 1e-12 * std::abs(expect));
    }
    SUBCASE("out-of-range radius throws") {
        const auto ref = PipeReference::from_alpha(2.0, 1.0, 15.0, 1.0, 1.0, 1.0);
        CHECK_THROWS_AS(ref.velocity(1.5), std::domain_error);
        CHECK_THROWS_AS(ref.velocity(-0.1), std::domain_error);
    }
}

TEST_CASE("pipe flow rate") {
    SUBCASE("steady branch: pi/120") {
        const auto ref = PipeReference::from_alpha(0.0, 1.0, 15.0, 1.0, 1.0, 1.0);
        CHECK(ref.flow_rate().real() ==
              doctest::Approx(std::numbers::pi / 120.0).epsilon(1e-14));
    }
    SUBCASE("continuous with the steady branch as alpha -> 0") {
        const auto steady = PipeReference::from_alpha(0.0, 1.0, 15.0, 1.0, 1.0, 1.0);
        const auto tiny = PipeReference::from_alpha(1e-3, 1.0, 15.0, 1.0, 1.0, 1.0);
        CHECK(std::abs(tiny.flow_rate() - steady.flow_rate()) <=
              1e-5 * std::abs(steady.flow_rate()));
        CHECK(std::abs(tiny.velocity(0.3) - steady.velocity(0.3)) <=
              1e-5 * std::abs(steady.velocity(0.3)));
    }
    SUBCASE("in-phase flow decays faster than out-of-phase at large alpha") {
        double prev_r = 0.0, prev_i = 0.0;
        bool first = true;
        for (double a : {8.0, 16.0, 32.0}) {
            const auto q = PipeReference::from_alpha(a, 1.0, 15.0, 1.0, 1.0, 1.0).flow_rate();
            CHECK(std::abs(q.real()) < std::abs(q.imag()));
            if (!first) {
                CHECK(std::abs(q.real()) / prev_r < std::abs(q.imag()) / prev_i);
            }
            prev_r = std::abs(q.real());
            prev_i = std::abs(q.imag());
            first = false;
        }
    }
}

TEST_CASE("disc integration of the velocity profile reproduces the flow rate to 1e-8") {
    std::vector<double> gx, gw;
    gauss_legendre(16, gx, gw);
    for (double a : {2.0, 4.0, 8.0, 16.0}) {
        const auto ref = PipeReference::from_alpha(a, 1.0, 15.0, 1.0, 1.0, 1.0);
        cplx q = 0.0;
        const int panels = 8;
        for (int p = 0; p < panels; ++p) {
            const double lo = static_cast<double>(p) / panels, hi = (p + 1.0) / panels;
            for (int i = 0; i < 16; ++i) {
                const double r = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gx[i];
                q += ref.velocity(r) * (2.0 * std::numbers::pi * r) * (0.5 * (hi - lo) * gw[i]);
            }
        }
        CHECK(std::abs(q - ref.flow_rate()) <= 1e-8 * std::abs(ref.flow_rate()));
    }
}

TEST_CASE("channel reference") {
    SUBCASE("steady branch: parabolic with centreline h b^2 / (2 mu L)") {
        const ChannelReference ref{0.0, 1.0, 15.0, 1.0, 1.0};
        CHECK(ref.velocity(0.0).real() == doctest::Approx(1.0 / 30.0).epsilon(1e-14));
        CHECK(ref.velocity(0.0).imag() == 0.0);
        CHECK(ref.velocity(0.5).real() == doctest::Approx((1.0 - 0.25) / 30.0).epsilon(1e-13));
    }
    SUBCASE("no-slip at the walls for all alpha") {
        for (double a : {0.0, 1.0, 5.0, 12.0}) {
            const ChannelReference ref{a, 1.0, 15.0, 1.0, 1.0};
            CHECK(std::abs(ref.velocity(1.0)) <= 1e-13 * std::abs(ref.velocity(0.0)) + 1e-300);
            CHECK(std::abs(ref.velocity(-1.0)) <= 1e-13 * std::abs(ref.velocity(0.0)) + 1e-300);
        }
    }
    SUBCASE("alpha = 5 centreline regression value (closed form, extended precision)") {
        const ChannelReference ref{5.0, 1.0, 15.0, 1.0, 1.0};
        const cplx expect(-0.000059536906956023366133, -0.0028101414951194692279);
        CHECK(std::abs(ref.velocity(0.0) - expect) <= 1e-12 * std::abs(expect));
    }
    SUBCASE("matches the 1D finite-difference oracle to 1e-6") {
        const int N = 32768;
        for (double a : {0.5, 2.0, 5.0}) {
            const ChannelReference ref{a, 1.0, 15.0, 1.0, 1.0};
            const auto fd = channel_fd_oracle(a, 1.0, 15.0, 1.0, 1.0, N);
            double umax = 0.0;
            for (const auto& u : fd) umax = std::max(umax, std::abs(u));
            for (int j = 0; j <= N; j += N / 16) {
                const double y = -1.0 + 2.0 * j / N;
                CHECK(std::abs(ref.velocity(y) - fd[j]) <= 1e-6 * umax);
            }
        }
    }
    SUBCASE("out-of-range y throws") {
        const ChannelReference ref{1.0, 1.0, 15.0, 1.0, 1.0};
        CHECK_THROWS_AS(ref.velocity(1.5), std::domain_error);
    }
}

TEST_CASE("womersley number consistency") {
    const auto ref = PipeReference::from_omega(4.0, 0.5, 7.5, 2.0, 3.0, 1.0);
    CHECK(ref.alpha == doctest::Approx(0.5 * std::sqrt(3.0 * 4.0 / 2.0)).epsilon(1e-14));
    CHECK(ref.omega() == doctest::Approx(4.0).epsilon(1e-14));
}
