#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "doctest.h"
#include "radreact/units.hpp"

using namespace radreact;

namespace {
// CODATA 2018 reference values.
constexpr double kClassicalElectronRadius = 2.8179403262e-15;  // m
constexpr double kElectronChargeToMass = 1.75882001076e11;     // C/kg

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("electron natural units: time unit is one second") {
    const UnitSystem u = UnitSystem::electron_natural();
    CHECK(u.time_unit() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(u.scale(Quantity::Velocity) == si::c);
    CHECK(u.to_si(Quantity::Mass, 1.0) == doctest::Approx(si::m_e).epsilon(1e-15));
    CHECK(u.to_internal(Quantity::Time, 2.5) == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("Heaviside-Lorentz electron charge reproduces the classical electron radius") {
    const UnitSystem u = UnitSystem::electron_natural();
    const ChargeModel el = electron_preset(u);
    const double r_internal = el.e() * el.e() / (4.0 * M_PI * el.m0());
    CHECK(rel(u.to_si(Quantity::Length, r_internal), kClassicalElectronRadius) < 1e-9);
}

TEST_CASE("electron beta equals 2 r_e / (3 c)") {
    const UnitSystem u = UnitSystem::electron_natural();
    const ChargeModel el = electron_preset(u);
    CHECK(rel(u.to_si(Quantity::Time, el.beta()), 2.0 * kClassicalElectronRadius / (3.0 * si::c)) < 1e-9);
    CHECK(el.beta() == doctest::Approx(el.k() / el.m0()).epsilon(1e-15));
}

TEST_CASE("electron preset carries negative charge") {
    CHECK(electron_preset().e() < 0.0);
    CHECK(proton_preset().e() > 0.0);
}

TEST_CASE("cyclotron frequency at one tesla matches e/m_e") {
    const UnitSystem u = UnitSystem::electron_natural();
    const ChargeModel el = electron_preset(u);
    const double B = u.to_internal(Quantity::MagneticField, 1.0);
    const double wc = u.to_si(Quantity::Frequency, cyclotron_frequency(el, B));
    CHECK(rel(wc, kElectronChargeToMass) < 1e-9);
    CHECK(u.field_to_gauss(B) == doctest::Approx(1e4).epsilon(1e-14));
    CHECK(u.field_from_gauss(1e4) == doctest::Approx(B).epsilon(1e-14));
}

TEST_CASE("unit conversions round trip") {
    const UnitSystem u(0.37, 2.5e-3);
    for (auto q : {Quantity::Length, Quantity::Time, Quantity::Mass, Quantity::Energy, Quantity::Velocity,
                   Quantity::Acceleration, Quantity::Charge, Quantity::ElectricField, Quantity::MagneticField,
                   Quantity::Frequency, Quantity::Potential})
        CHECK(u.to_internal(q, u.to_si(q, 1.7)) == doctest::Approx(1.7).epsilon(1e-14));
    // e^2/(4 pi r) is an energy: charge^2 / length scales as energy.
    const double Q = u.scale(Quantity::Charge);
    CHECK(Q * Q / (si::eps0 * u.scale(Quantity::Length)) == doctest::Approx(u.scale(Quantity::Energy)).epsilon(1e-14));
}

TEST_CASE("self-energies of sphere and ball") {
    const double e = 0.7, R = 0.3;
    CHECK(FormFactor::sphere(R).self_energy(e) == doctest::Approx(e * e / (8.0 * M_PI * R)).epsilon(1e-15));
    CHECK(FormFactor::ball(R).self_energy(e) == doctest::Approx(3.0 * e * e / (20.0 * M_PI * R)).epsilon(1e-15));
    CHECK(FormFactor::point().self_energy(e) == 0.0);
}

TEST_CASE("self-energy equals (1/2) int |rho_hat|^2 / k^2 by quadrature") {
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double e = 1.3, R = 0.5;
    for (const FormFactor f : {FormFactor::sphere(R), FormFactor::ball(R)}) {
        // 2 pi e^2 int_0^inf |rho_hat|^2 dk, summed over periods of the oscillation
        double sum = 0.0;
        const double period = M_PI / R;
        for (int i = 0; i < 20000; ++i) {
            const double piece = GK::integrate([&](double k) { return f.spectral_density(k); }, i * period, (i + 1) * period, 5, 1e-14);
            sum += piece;
        }
        // tail beyond the last period: sin^2 averages to 1/2, so |rho_hat|^2 ~ c/k^2 (sphere) or c/k^4 (ball)
        const double K = 20000 * period;
        const double tail = f.kind == FormKind::SphereShell ? 0.5 / (R * R * K) : 1.5 / (std::pow(R, 4) * K * K * K);
        sum += tail / std::pow(2.0 * M_PI, 3);
        CHECK(rel(2.0 * M_PI * e * e * sum, f.self_energy(e)) < 1e-6);
    }
}

TEST_CASE("ball density integrates to one") {
    const FormFactor f = FormFactor::ball(0.4);
    const double total = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double r) { return 4.0 * M_PI * r * r * f.density(r); }, 0.0, 0.4);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(f.density(0.41) == 0.0);
}

TEST_CASE("charge model mass bookkeeping") {
    const FormFactor f = FormFactor::sphere(0.2);
    const ChargeModel a = ChargeModel::extended(1.0, 2.0, f);
    CHECK(a.m0() == doctest::Approx(2.0 + 4.0 / 3.0 * f.self_energy(1.0)).epsilon(1e-15));
    const ChargeModel b = ChargeModel::with_experimental_mass(1.0, 5.0, f);
    CHECK(b.m_b() + 4.0 / 3.0 * b.m_e() == doctest::Approx(5.0).epsilon(1e-15));
    const ChargeModel p = ChargeModel::point(1.0, 3.0);
    CHECK(p.m_b() == 3.0);
    CHECK(p.m_e() == 0.0);
    CHECK(p.beta() == doctest::Approx(1.0 / (6.0 * M_PI * 3.0)).epsilon(1e-15));
}

TEST_CASE("form kind names round trip") {
    for (auto k : {FormKind::PointLimit, FormKind::SphereShell, FormKind::UniformBall})
        CHECK(form_kind_from_string(to_string(k)) == k);
    CHECK_THROWS_AS(form_kind_from_string("cube"), DomainError);
}

TEST_CASE("reference field makes beta omega_c equal one") {
    const ChargeModel el = electron_preset();
    const double B = UnitSystem::electron_natural().field_from_gauss(1e3);
    const ReferenceField r = reference_field_and_epsilon(el, B);
    CHECK(el.beta() * cyclotron_frequency(el, r.B0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.epsilon * r.B0 == doctest::Approx(B).epsilon(1e-14));
    CHECK_THROWS_AS(reference_field_and_epsilon(el, -1.0), DomainError);
}
