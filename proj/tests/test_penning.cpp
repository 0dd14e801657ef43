#include <cmath>

#include "doctest.h"
#include "radreact/landau_lifshitz.hpp"
#include "radreact/penning.hpp"
#include "radreact/scenario.hpp"

using namespace radreact;

namespace {

// Unit charge with omega_z = 1, omega_c = lambda and coupling beta.
TrapSpec dimensionless_trap(double lambda, double beta) {
    const double m0 = 1.0 / (6.0 * M_PI * beta);
    return TrapSpec(ChargeModel::point(1.0, m0), 1.0, lambda * m0);
}

struct LinearFit {
    double slope = 0.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    double n = x.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return {(n * sxy - sx * sy) / (n * sxx - sx * sx)};
}

// Launches a pure in-plane mode zeta = x + i y ~ r0 e^{-i w t} (positive
// charge, B along +x3) and fits the phase rate and log-amplitude slope.
std::pair<double, double> fitted_mode(const TrapSpec& s, double w, double T) {
    const LlModel m(MassModel::Relativistic, s.charge, 1.0, penning_trap(s.charge.e(), s.charge.m0(), s.omega_z, s.B));
    const double r0 = 1e-5;
    IntegratorControls c;
    c.rtol = 1e-12;
    c.atol = 1e-18;
    const Trajectory tr = integrate_ll(m, Vec3(r0, 0, 0), Vec3(0, -w * r0, 0), 0.0, T, c);
    std::vector<double> t, ph, la;
    double phase = 0.0, prev = 0.0;
    for (const auto& smp : tr.samples) {
        const double ang = std::atan2(smp.s.q[1], smp.s.q[0]);
        double d = ang - prev;
        while (d > M_PI) d -= 2 * M_PI;
        while (d < -M_PI) d += 2 * M_PI;
        phase += d;
        prev = ang;
        t.push_back(smp.t);
        ph.push_back(phase);
        la.push_back(std::log(smp.s.q.head<2>().norm()));
    }
    return {-fit_line(t, ph).slope, -fit_line(t, la).slope};
}

}  // namespace

TEST_CASE("mode identities hold across lambda") {
    for (double lambda : {1.5, 2.0, 5.0, 40.0, 2.7e3, 1e6}) {
        const ModeReport r = mode_analysis(dimensionless_trap(lambda, 1e-3));
        CHECK(r.omega_plus * r.omega_minus == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(r.omega_plus + r.omega_minus == doctest::Approx(lambda).epsilon(1e-12));
        CHECK(r.omega_plus >= r.omega_minus);
        CHECK(r.gamma_plus > 0.0);
        CHECK(r.gamma_minus < 0.0);
        CHECK(r.gamma_z > 0.0);
        CHECK(r.gamma_plus + r.gamma_minus == doctest::Approx(1e-3 * (lambda * lambda - 0.5)).epsilon(1e-12));
        CHECK(r.lambda == doctest::Approx(lambda).epsilon(1e-14));
    }
}

TEST_CASE("large lambda asymptotics") {
    const ModeReport r = mode_analysis(dimensionless_trap(1e4, 1e-3));
    CHECK(r.omega_plus == doctest::Approx(1e4).epsilon(1e-8));
    CHECK(r.omega_minus == doctest::Approx(0.5e-4).epsilon(1e-8));
}

TEST_CASE("electron trap with the quoted parameters") {
    const UnitSystem u = UnitSystem::electron_natural();
    const ChargeModel e = electron_preset(u);
    const TrapSpec s(e, 4e8, u.field_from_gauss(6e4));
    const ModeReport r = mode_analysis(s);
    CHECK(std::abs(r.omega_plus / 1.1e12 - 1.0) < 0.1);
    CHECK(std::abs(r.omega_minus / 7.4e4 - 1.0) < 0.1);
    CHECK(std::abs(r.lambda / 2.7e3 - 1.0) < 0.1);
    CHECK(std::abs(u.field_to_gauss(critical_field(e, 4e8)) / 30.0 - 1.0) < 0.2);
    CHECK(s.slow_motion_ok(0.01));
    CHECK(s.radius_ok(1e-3 * s.radius_scale()));
    CHECK_FALSE(s.radius_ok(s.radius_scale()));
}

TEST_CASE("critical field") {
    const ChargeModel c = ChargeModel::point(2.0, 3.0);
    CHECK(critical_field(c, 2.0) == doctest::Approx(2.0 * critical_field(c, 1.0)).epsilon(1e-15));
    const TrapSpec at(c, 1.0, critical_field(c, 1.0));
    CHECK(at.lambda() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    const TrapSpec below(c, 1.0, 0.9 * critical_field(c, 1.0));
    try {
        mode_analysis(below);
        FAIL("expected InstabilityBoundary");
    } catch (const InstabilityBoundary& err) {
        CHECK(err.critical_field() == doctest::Approx(critical_field(c, 1.0)).epsilon(1e-15));
    }
}

TEST_CASE("dampings diverge as (lambda - sqrt 2)^(-1/2)") {
    std::vector<double> d, gp, gm;
    for (double delta : {1e-4, 1e-5, 1e-6}) {
        const double lambda = std::sqrt(2.0) + delta;
        const ModeReport r = mode_analysis(dimensionless_trap(lambda, 1e-3));
        d.push_back(delta);
        gp.push_back(r.gamma_plus);
        gm.push_back(-r.gamma_minus);
    }
    CHECK(fit_exponent(d, gp) == doctest::Approx(-0.5).epsilon(0.1));
    CHECK(fit_exponent(d, gm) == doctest::Approx(-0.5).epsilon(0.1));
}

TEST_CASE("eigen oracle without radiation gives the bare spectrum") {
    for (double lambda : {2.0, 7.0}) {
        const TrapSpec s = dimensionless_trap(lambda, 1e-3);
        const ModeReport r = mode_analysis(s);
        const auto ev = numeric_eigen_oracle(s, 0.0);
        const double expect[4] = {-r.omega_plus, -r.omega_minus, r.omega_minus, r.omega_plus};
        for (int i = 0; i < 4; ++i) {
            CHECK(std::abs(ev[i].real()) < 1e-10);
            CHECK(ev[i].imag() == doctest::Approx(expect[i]).epsilon(1e-10));
        }
    }
}

TEST_CASE("eigen oracle real parts converge to the damping rates") {
    for (double lambda : {2.0, 4.0}) {
        std::vector<double> betas, errp, errm;
        for (double beta : {1e-2, 1e-3, 1e-4}) {
            const TrapSpec s = dimensionless_trap(lambda, beta);
            const ModeReport r = mode_analysis(s);
            const auto ev = numeric_eigen_oracle(s);
            betas.push_back(beta);
            errp.push_back(std::abs(ev[3].real() + r.gamma_plus) / r.gamma_plus);
            errm.push_back(std::abs(ev[2].real() + r.gamma_minus) / std::abs(r.gamma_minus));
            CHECK(ev[0].real() == doctest::Approx(ev[3].real()).epsilon(1e-8));
        }
        // First-order agreement: the relative error shrinks at least linearly in beta.
        CHECK(fit_exponent(betas, errp) >= 0.7);
        CHECK(fit_exponent(betas, errm) >= 0.7);
        CHECK(errp.back() < 1e-3);
        CHECK(errm.back() < 1e-3);
    }
}

TEST_CASE("Landau-Lifshitz trajectories reproduce the mode report") {
    const TrapSpec s = dimensionless_trap(1.6, 1e-3);
    const ModeReport r = mode_analysis(s);
    SUBCASE("cyclotron mode") {
        const auto [w, g] = fitted_mode(s, r.omega_plus, 300.0);
        CHECK(w == doctest::Approx(r.omega_plus).epsilon(1e-4));
        CHECK(g == doctest::Approx(r.gamma_plus).epsilon(0.05));
    }
    SUBCASE("magnetron mode") {
        const auto [w, g] = fitted_mode(s, r.omega_minus, 3000.0);
        CHECK(w == doctest::Approx(r.omega_minus).epsilon(1e-4));
        CHECK(g == doctest::Approx(r.gamma_minus).epsilon(0.05));
    }
    SUBCASE("axial mode energy decay") {
        const LlModel m(MassModel::Relativistic, s.charge, 1.0,
                        penning_trap(s.charge.e(), s.charge.m0(), s.omega_z, s.B));
        const Trajectory tr = integrate_ll(m, Vec3(0, 0, 1e-5), Vec3::Zero(), 0.0, 500.0);
        std::vector<double> t, le;
        for (const auto& smp : tr.samples) {
            t.push_back(smp.t);
            le.push_back(std::log(smp.s.q[2] * smp.s.q[2] + smp.s.v[2] * smp.s.v[2] / (s.omega_z * s.omega_z)));
        }
        CHECK(-fit_line(t, le).slope == doctest::Approx(r.gamma_z).epsilon(0.05));
    }
}
