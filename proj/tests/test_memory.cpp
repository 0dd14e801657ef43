#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "doctest.h"
#include "radreact/memory.hpp"
#include "radreact/scenario.hpp"

using namespace radreact;

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

// h(w) = 2 pi e^2 int_0^inf g(k) cos(k w) dk by panels of width pi / R.
double h_quadrature(double e, const FormFactor& f, double w, double k_max) {
    const double panel = M_PI / f.radius;
    double sum = 0.0;
    for (double a = 0.0; a < k_max; a += panel)
        sum += GK::integrate([&](double k) { return f.spectral_density(k) * std::cos(k * w); }, a, a + panel, 5, 1e-14);
    return 2.0 * M_PI * e * e * sum;
}

// On-manifold solution of x'' = -x + k x''' (unit mass): x = Re(A e^{z t}).
struct ReducedSolution {
    std::complex<double> A, z;
    double x(double t) const { return (A * std::exp(z * t)).real(); }
    double v(double t) const { return (A * z * std::exp(z * t)).real(); }
};

}  // namespace

TEST_CASE("kernel values at the origin") {
    const double e = 1.3, R = 0.4;
    const MemoryKernel s(e, FormFactor::sphere(R)), b(e, FormFactor::ball(R));
    CHECK(kernel_h(s, 0.0) == e * e / (8.0 * M_PI * R));
    CHECK(std::abs(kernel_h(b, 0.0) / (1.2 * e * e / (8.0 * M_PI * R)) - 1.0) < 1e-10);
}

TEST_CASE("kernels are even and supported on |w| < 2R") {
    const double R = 0.25;
    for (const FormFactor& f : {FormFactor::sphere(R), FormFactor::ball(R)}) {
        const MemoryKernel k(1.0, f);
        for (double w : {0.01, 0.1, 0.3, 0.49}) CHECK(std::abs(k.h(w) - k.h(-w)) <= 1e-12 * k.h(0.0));
        CHECK(k.h(2 * R) == doctest::Approx(0.0));
        CHECK(k.h(2 * R + 1e-9) == 0.0);
        CHECK(k.h(-3 * R) == 0.0);
        const double total = GK::integrate([&](double w) { return k.h(w); }, -2 * R, 2 * R, 10, 1e-14);
        CHECK(total == doctest::Approx(1.0 / (4.0 * M_PI)).epsilon(1e-10));
        // Spectral side: int h dw = 2 pi^2 e^2 g(0).
        CHECK(total == doctest::Approx(2.0 * M_PI * M_PI * f.spectral_density(0.0)).epsilon(1e-6));
    }
    CHECK_THROWS_AS(MemoryKernel(1.0, FormFactor::point()), DomainError);
}

TEST_CASE("ball kernel matches the cosine transform of the form factor") {
    const double e = 0.8, R = 0.5;
    const FormFactor f = FormFactor::ball(R);
    const MemoryKernel k(e, f);
    for (double w : {0.0, 0.2, 0.5, 0.77, 1.3}) CHECK(std::abs(h_quadrature(e, f, w, 4000.0 / R) - k.h(w)) < 1e-6 * k.h(0.0));
}

TEST_CASE("sphere kernel matches the cosine transform of the form factor") {
    const double e = 0.8, R = 0.5;
    const FormFactor f = FormFactor::sphere(R);
    const MemoryKernel k(e, f);
    // The 1/k^2 tail is resolved by averaging two truncations half a period apart.
    for (double w : {0.2, 0.5, 0.77}) {
        const double K = 5000.0 * M_PI / R;
        const double q = 0.5 * (h_quadrature(e, f, w, K) + h_quadrature(e, f, w, K + M_PI / R));
        CHECK(std::abs(q - k.h(w)) < 1e-5 * k.h(0.0));
    }
}

TEST_CASE("W is reproduced from h") {
    const MemoryKernel k(1.0, FormFactor::ball(0.3));
    const Vec3 x(0.1, -0.2, 0.05);
    for (double t : {0.0, 0.1, 0.4, 0.7}) {
        const double r = x.norm();
        CHECK(std::abs(k.W(t, x) - (k.h(r + t) - k.h(r - t)) / r) < 1e-12);
    }
    const Vec3 tiny(1e-7, 0, 0);
    CHECK(k.W(0.2, tiny) == doctest::Approx(k.W(0.2, Vec3::Zero())).epsilon(1e-5));
    // Finite memory: x = q(t) - q(t - tau) with |x| <= vbar tau vanishes once tau >= 2R/(1 - vbar).
    const double vbar = 0.5, tau = 2 * 0.3 / (1 - vbar);
    CHECK(k.W(tau, Vec3(vbar * tau, 0, 0)) == 0.0);
}

TEST_CASE("Taylor coefficients of the delay term") {
    const DdeModel m(0.7, 0.9, 0.2, zero_field());
    const TaylorReduced t = taylor_reduced_rhs(m);
    const double c = m.delay_coefficient();
    CHECK(c * 2.0 * m.R == doctest::Approx(t.mass - m.m_b).epsilon(1e-15));
    CHECK(c * 4.0 * m.R * m.R / 2.0 == doctest::Approx(t.jerk_coefficient).epsilon(1e-15));
    const DdeModel far(0.7, 0.9, 1e8, zero_field());
    CHECK(taylor_reduced_rhs(far).mass == doctest::Approx(0.9).epsilon(1e-9));
    const LdModel ld = taylor_reduced_model(m);
    CHECK(ld.charge.m0() == doctest::Approx(t.mass));
    CHECK(ld.coupling() == doctest::Approx(t.jerk_coefficient));
}

TEST_CASE("constant history in zero field is exactly stationary") {
    const DdeModel m(1.0, 0.5, 0.1, zero_field());
    const Vec3 v0(0.1, -0.2, 0.05);
    const Trajectory tr = integrate_dde(m, HistoryFunction::constant(v0), 3.0);
    for (const auto& s : tr.samples) {
        CHECK(s.s.v == v0);
        CHECK(s.s.a == Vec3::Zero());
    }
    CHECK(tr.back().t == doctest::Approx(3.0));
}

TEST_CASE("Lyapunov functional plus dissipation is conserved") {
    const DdeModel m(1.0, 0.5, 0.1, axial_1d(harmonic_axial_profile(1.0, 1.0, 2.0)));
    HistoryFunction h{[](double t) { return Vec3(0.01 * std::sin(3 * t), 0.02 * std::cos(t), 0); }, Vec3(0.02, 0, 0)};
    auto drift = [&](int substeps, bool& monotone) {
        const Trajectory tr = integrate_dde(m, h, 5.0, DdeControls{substeps});
        const double V0 = tr.samples.front().schott;
        double worst = 0.0, prev = V0;
        monotone = true;
        for (const auto& s : tr.samples) {
            worst = std::max(worst, std::abs(s.schott + s.radiated - V0));
            if (s.schott > prev + 1e-15) monotone = false;
            prev = s.schott;
        }
        return worst / V0;
    };
    bool mono_coarse = false, mono_fine = false;
    const double coarse = drift(8, mono_coarse), fine = drift(32, mono_fine);
    CHECK(coarse < 1e-6);
    CHECK(fine < coarse / 50.0);
    CHECK(mono_coarse);
    CHECK(mono_fine);
}

TEST_CASE("delay equation converges to the Taylor-reduced dynamics as R shrinks") {
    const double k = 0.01;
    const double e = std::sqrt(6.0 * M_PI * k);
    const auto roots = linearized_oscillator_roots(1.0, k);
    ReducedSolution red{{0.01, 0.0}, roots[1]};
    std::vector<double> Rs, err;
    for (double R : {0.2, 0.1, 0.05}) {
        const DdeModel m(e, 1.0 - k / R, R, axial_1d(harmonic_axial_profile(e, 1.0, 1.0)));
        HistoryFunction h{[&](double t) { return Vec3(red.v(t), 0, 0); }, Vec3(red.x(0.0), 0, 0)};
        const Trajectory tr = integrate_dde(m, h, 20.0);
        double d = 0.0;
        for (const auto& s : tr.samples) d = std::max(d, std::abs(s.s.q[0] - red.x(s.t)));
        Rs.push_back(R);
        err.push_back(d / std::abs(red.A));
    }
    CHECK(fit_exponent(Rs, err) == doctest::Approx(1.0).epsilon(0.3));
    CHECK(err.back() < 0.05);
}

TEST_CASE("history validation") {
    const DdeModel m(1.0, 0.5, 0.1, zero_field());
    CHECK_THROWS_AS(integrate_dde(m, HistoryFunction{}, 1.0), DomainError);
    CHECK_THROWS_AS(integrate_dde(m, HistoryFunction::constant(Vec3(1.2, 0, 0)), 1.0), DomainError);
    CHECK_THROWS_AS(DdeModel::from_charge(ChargeModel::extended(1.0, 1.0, FormFactor::ball(0.1)), zero_field()),
                    DomainError);
    const DdeModel s = DdeModel::from_charge(ChargeModel::extended(1.0, 0.7, FormFactor::sphere(0.1)), zero_field());
    CHECK(s.R == 0.1);
    CHECK(s.m_b == doctest::Approx(0.7));
}
