#include <cmath>
#include <random>

#include "doctest.h"
#include "radreact/landau_lifshitz.hpp"

using namespace radreact;

namespace {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

const ChargeModel kUnit = ChargeModel::point(1.0, 1.0);
const Mat4 kEta = Eigen::Vector4d(1, -1, -1, -1).asDiagonal();

// Contravariant field tensor F^{mu nu} for signature (+,-,-,-).
Mat4 field_tensor(const Vec3& E, const Vec3& B) {
    Mat4 F = Mat4::Zero();
    for (int i = 0; i < 3; ++i) {
        F(0, i + 1) = -E[i];
        F(i + 1, 0) = E[i];
    }
    F(1, 2) = -B[2];
    F(2, 1) = B[2];
    F(1, 3) = B[1];
    F(3, 1) = -B[1];
    F(2, 3) = -B[0];
    F(3, 2) = B[0];
    return F;
}

// Covariant Landau-Lifshitz equation for the four-velocity, projected to dv/dt.
Vec3 covariant_ll(const LlModel& m, const Vec3& q, const Vec3& v) {
    const double e = m.charge.e(), m0 = m.charge.m0(), em = e / m0, tau = m.coupling() / m0;
    const double g = gamma_of(v);
    const Vec4 u(g, g * v[0], g * v[1], g * v[2]);
    const Vec4 ul = kEta * u;
    const FieldValue f = m.field.value(q);
    const FieldGradient dg = m.field.gradient(q);
    const Mat4 F = field_tensor(f.E, f.B);
    const Mat4 dF = g * field_tensor(dg.dE * v, dg.dB * v);
    const Mat4 Flow = kEta * F * kEta;
    const Vec4 w = F * ul;
    const Vec4 du = em * w + tau * (em * dF * ul + em * em * F * (Flow * u) + em * em * w.dot(kEta * w) * u);
    return (du.tail<3>() - v * du[0]) / (g * g);
}

std::vector<std::pair<Vec3, Vec3>> random_states(int n, double vmax) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::pair<Vec3, Vec3>> out;
    while (static_cast<int>(out.size()) < n) {
        Vec3 v(u(rng), u(rng), u(rng));
        if (v.norm() > 1.0) continue;
        out.push_back({Vec3(u(rng), u(rng), u(rng)), vmax * v});
    }
    return out;
}

FieldMap mixed_field() {
    return superpose({penning_trap(1.0, 1.0, 0.7, 1.3), uniform_electric(Vec3(0.2, -0.1, 0.3)),
                      central_potential(harmonic_profile(1.0, 1.0, 0.4))});
}

IntegratorControls tight() {
    IntegratorControls c;
    c.rtol = 1e-12;
    c.atol = 1e-15;
    return c;
}

}  // namespace

TEST_CASE("explicit force agrees with the covariant Landau-Lifshitz equation") {
    const LlModel m(MassModel::Relativistic, kUnit, 0.8, mixed_field());
    for (const auto& [q, v] : random_states(20, 0.95)) {
        const Vec3 a = ll_acceleration(m, q, v), o = covariant_ll(m, q, v);
        CHECK((a - o).norm() < 1e-12 * o.norm());
    }
}

TEST_CASE("substitution form agrees with the explicit form") {
    const LlModel m(MassModel::Relativistic, kUnit, 0.8, mixed_field());
    for (const auto& [q, v] : random_states(20, 0.9)) {
        const Vec3 a = ll_acceleration(m, q, v);
        CHECK((ll_acceleration_substitution(m, q, v) - a).norm() < 1e-10 * a.norm());
    }
    const LlModel ms(MassModel::SemiRelAbraham, kUnit, 0.8, mixed_field());
    for (const auto& [q, v] : random_states(5, 0.9)) {
        const Vec3 a = ll_acceleration(m, q, v);
        CHECK((ll_acceleration(ms, q, v) - a).norm() < 1e-10 * a.norm());
    }
}

TEST_CASE("extended charge uses the soliton mass") {
    const ChargeModel c = ChargeModel::extended(1.0, 0.6, FormFactor::ball(0.2));
    const LlModel m(MassModel::SemiRelAbraham, c, 0.01, uniform_magnetic(1.0, Vec3::UnitZ()));
    const Vec3 v(0.4, 0.1, 0.0);
    const Vec3 a = ll_acceleration(m, Vec3::Zero(), v);
    const Vec3 h = effective_mass_matrix(c, v).solve(c.e() * v.cross(Vec3::UnitZ()));
    CHECK((a - h).norm() < 0.05 * h.norm());
    CHECK((a - h).norm() > 0.0);
}

TEST_CASE("constant field closed forms") {
    const double B = 1.0, gamma0 = 10.0, eps = 0.01 / kUnit.beta();
    const ConstantBClosedForms cf(kUnit, B, gamma0, eps);
    CHECK(cf.omega_c() == doctest::Approx(1.0));
    CHECK(cf.gamma_of_t(0.0) == doctest::Approx(gamma0).epsilon(1e-15));
    CHECK(cf.radius_of_t(0.0) == doctest::Approx(cf.initial_radius()).epsilon(1e-15));
    CHECK(cf.gamma_of_t(1e4) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cf.speed_of_angle(2 * M_PI) / cf.speed_of_angle(0.0) ==
          doctest::Approx(std::exp(-2 * M_PI * cf.beta() * cf.omega_c())).epsilon(1e-14));
    const double t = cf.time_to_radius_ratio(0.1);
    CHECK(cf.radius_of_t(t) / cf.initial_radius() == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(cf.radius_ultrarel(cf.time_to_radius_ratio_ultrarel(0.1)) / cf.initial_radius() ==
          doctest::Approx(0.1).epsilon(1e-14));
    const ConstantBClosedForms ur(kUnit, B, 1e5, eps);
    CHECK(ur.radius_ultrarel(1e-7) == doctest::Approx(ur.radius_of_t(1e-7)).epsilon(1e-4));
    CHECK_THROWS_AS(ConstantBClosedForms(kUnit, B, 0.5, eps), DomainError);
}

TEST_CASE("numerical synchrotron decay matches the closed forms") {
    const double B = 1.0, gamma0 = 10.0, eps = 0.01 / kUnit.beta();
    const ConstantBClosedForms cf(kUnit, B, gamma0, eps);
    const LlModel m(MassModel::Relativistic, kUnit, eps, uniform_magnetic(B, Vec3::UnitZ()));
    const double T = 3.0 / cf.rate();
    const Trajectory tr = integrate_ll(m, Vec3::Zero(), Vec3(cf.initial_speed(), 0, 0), 0.0, T, tight());
    double worst_gamma = 0.0, worst_u = 0.0, worst_r = 0.0, phi = 0.0, prev = 0.0;
    const double u0 = cf.initial_speed();
    for (const auto& s : tr.samples) {
        const Vec3& v = s.s.v;
        const double ang = std::atan2(v[1], v[0]);
        double d = ang - prev;
        while (d > M_PI) d -= 2 * M_PI;
        while (d < -M_PI) d += 2 * M_PI;
        phi += d;
        prev = ang;
        const double g = gamma_of(v);
        worst_gamma = std::max(worst_gamma, std::abs(g / cf.gamma_of_t(s.t) - 1.0));
        worst_u = std::max(worst_u, std::abs(v.norm() * std::exp(cf.beta() * cf.omega_c() * std::abs(phi)) / u0 - 1.0));
        worst_r = std::max(worst_r, std::abs(g * v.norm() / cf.omega_c() / cf.radius_of_t(s.t) - 1.0));
    }
    CHECK(worst_gamma < 1e-8);
    CHECK(worst_u < 1e-10);
    CHECK(worst_r < 1e-8);
    CHECK(std::abs(phi) / (2 * M_PI) == doctest::Approx(cf.revolutions(T)).epsilon(1e-8));
}

TEST_CASE("central potential force and angular momentum decay") {
    const RadialProfile p = harmonic_profile(1.0, 1.0, 0.9);
    const LlModel m(MassModel::Relativistic, kUnit, 0.5, central_potential(p));
    for (const auto& [q, v] : random_states(10, 0.8)) {
        const Vec3 a = central_potential_rhs(m, p, q, v);
        CHECK((a - ll_acceleration(m, q, v)).norm() < 1e-12 * a.norm());
        const Vec3 dL = q.cross(relativistic_mass_matrix(kUnit.m0(), v).apply(a));
        const Vec3 decay = angular_momentum_decay(m, p, q, v);
        CHECK((decay - dL).norm() < 1e-12 * (1.0 + dL.norm()));
    }
    CHECK_THROWS_AS(central_potential_rhs(m, p, Vec3::Zero(), Vec3::Zero()), DomainError);
}

TEST_CASE("axial motion and its balance law") {
    const AxialProfile p = double_well_profile(0.3);
    const LlModel m(MassModel::Relativistic, kUnit, 0.6, axial_1d(p));
    for (double x : {-1.3, -0.2, 0.4, 1.1})
        for (double v : {-0.7, 0.1, 0.5}) {
            const double a = axial_1d_rhs(m, p, x, v);
            CHECK(a == doctest::Approx(ll_acceleration(m, Vec3(x, 0, 0), Vec3(v, 0, 0))[0]).epsilon(1e-12));
            const double h = 1e-6;
            const double fd = (axial_balance_energy(m, p, x + h * v, v + h * a) -
                               axial_balance_energy(m, p, x - h * v, v - h * a)) / (2 * h);
            CHECK(fd == doctest::Approx(axial_balance_rate(m, p, x, v)).epsilon(1e-6));
        }
}

TEST_CASE("radiated energy and mechanical energy loss on a constant field run") {
    const double eps = 0.01 / kUnit.beta();
    const LlModel m(MassModel::Relativistic, kUnit, eps, uniform_magnetic(1.0, Vec3::UnitZ()));
    const Trajectory tr = integrate_ll(m, Vec3::Zero(), Vec3(0.8, 0, 0), 0.0, 50.0, tight());
    const double loss = tr.samples.front().energy - tr.back().energy;
    CHECK(tr.back().radiated == doctest::Approx(loss).epsilon(0.01));
}
