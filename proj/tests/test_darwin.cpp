#include <cmath>

#include "doctest.h"
#include "radreact/darwin.hpp"
#include "radreact/scenario.hpp"

using namespace radreact;

namespace {

ManyBodyState three_body(double c) {
    ManyBodyState s;
    s.c = c;
    s.particles.push_back({ChargeModel::point(1.0, 1.0), Vec3(0.5, 0, 0), Vec3(0, 0.12, 0.01)});
    s.particles.push_back({ChargeModel::point(-1.0, 1.5), Vec3(-0.5, 0, 0), Vec3(0, -0.08, 0)});
    s.particles.push_back({ChargeModel::extended(0.5, 2.0, FormFactor::sphere(0.05)), Vec3(0, 3, 0.5), Vec3(0.05, 0, -0.02)});
    return s;
}

// Circular two-body orbit with each speed v (opposite charges, unit masses, separation 1).
ManyBodyState circular_pair(double v) {
    const double kappa = 0.5 * 4.0 * v * v;  // mu v_rel^2 r with mu = 1/2, v_rel = 2 v
    const double e = std::sqrt(4.0 * M_PI * kappa);
    ManyBodyState s;
    s.particles.push_back({ChargeModel::point(e, 1.0), Vec3(0.5, 0, 0), Vec3(0, v, 0)});
    s.particles.push_back({ChargeModel::point(-e, 1.0), Vec3(-0.5, 0, 0), Vec3(0, -v, 0)});
    return s;
}

Vec3 canonical_fd(ManyBodyState s, std::size_t i) {
    const double h = 1e-6;
    Vec3 p;
    const Vec3 v0 = s.particles[i].v;
    for (int k = 0; k < 3; ++k) {
        s.particles[i].v = v0;
        s.particles[i].v[k] += h;
        const double lp = darwin_lagrangian_terms(s).lagrangian();
        s.particles[i].v[k] -= 2 * h;
        const double lm = darwin_lagrangian_terms(s).lagrangian();
        p[k] = (lp - lm) / (2 * h);
    }
    return p;
}

IntegratorControls tight() {
    IntegratorControls c;
    c.rtol = 1e-12;
    c.atol = 1e-14;
    return c;
}

}  // namespace

TEST_CASE("static pair reduces to Coulomb in the non-relativistic limit") {
    ManyBodyState s;
    s.particles.push_back({ChargeModel::point(1.0, 1.0), Vec3(0, 0, 0), Vec3::Zero()});
    s.particles.push_back({ChargeModel::point(1.0, 2.0), Vec3(2, 0, 0), Vec3::Zero()});
    const auto Fc = coulomb_forces(s);
    CHECK((Fc[0] - Vec3(-1.0 / (16 * M_PI), 0, 0)).norm() < 1e-16);
    CHECK((Fc[0] + Fc[1]).norm() < 1e-16);
    std::vector<double> cs, dev;
    for (double c : {10.0, 20.0, 40.0}) {
        s.c = c;
        const DarwinForces f = darwin_forces(s);
        cs.push_back(1.0 / c);
        dev.push_back((f.forces[0] - Fc[0]).norm());
        CHECK((f.accelerations[0] - Fc[0]).norm() < 1e-2 * Fc[0].norm());
    }
    CHECK(fit_exponent(cs, dev) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("Darwin force deviation from Coulomb scales as 1/c^2 for moving charges") {
    std::vector<double> cs, dev;
    for (double c : {5.0, 10.0, 20.0}) {
        const ManyBodyState s = three_body(c);
        const DarwinForces f = darwin_forces(s);
        const auto Fc = coulomb_forces(s);
        cs.push_back(1.0 / c);
        dev.push_back((f.forces[0] - Fc[0]).norm());
    }
    CHECK(fit_exponent(cs, dev) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("canonical momentum rates sum to zero") {
    const DarwinForces f = darwin_forces(three_body(1.0));
    Vec3 sum = Vec3::Zero();
    double scale = 0.0;
    for (const Vec3& r : f.momentum_rates) {
        sum += r;
        scale = std::max(scale, r.norm());
    }
    CHECK(sum.norm() < 1e-14 * scale);
}

TEST_CASE("Euler-Lagrange equations against numerical derivatives of L") {
    const ManyBodyState s = three_body(1.0);
    const DarwinForces f = darwin_forces(s);
    const double h = 1e-6;
    Vec3 total = Vec3::Zero();
    for (std::size_t i = 0; i < s.size(); ++i) {
        // dL/dq_i
        Vec3 dLdq;
        for (int k = 0; k < 3; ++k) {
            ManyBodyState p = s, m = s;
            p.particles[i].q[k] += h;
            m.particles[i].q[k] -= h;
            dLdq[k] = (darwin_lagrangian_terms(p).lagrangian() - darwin_lagrangian_terms(m).lagrangian()) / (2 * h);
        }
        CHECK((dLdq - f.momentum_rates[i]).norm() < 1e-7 * (1.0 + dLdq.norm()));
        // d/dt dL/dv_i along the flow
        ManyBodyState fw = s, bw = s;
        for (std::size_t j = 0; j < s.size(); ++j) {
            fw.particles[j].q += h * s.particles[j].v;
            fw.particles[j].v += h * f.accelerations[j];
            bw.particles[j].q -= h * s.particles[j].v;
            bw.particles[j].v -= h * f.accelerations[j];
        }
        const Vec3 dpdt = (canonical_fd(fw, i) - canonical_fd(bw, i)) / (2 * h);
        CHECK((dpdt - dLdq).norm() < 1e-5 * (1.0 + dLdq.norm()));
        total += canonical_fd(s, i);
    }
    CHECK((total - darwin_momentum(s)).norm() < 1e-8);
}

TEST_CASE("Darwin energy is the Legendre transform of L") {
    const ManyBodyState s = three_body(1.0);
    double vp = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) vp += s.particles[i].v.dot(canonical_fd(s, i));
    CHECK(darwin_energy(s) == doctest::Approx(vp - darwin_lagrangian_terms(s).lagrangian()).epsilon(1e-9));
}

TEST_CASE("Darwin dynamics conserve energy and momentum") {
    const ManyBodyState s = three_body(1.0);
    const ManyBodyRun run = integrate_darwin(s, 0.0, 40.0, tight());
    CHECK(run.status == Termination::Completed);
    const double E0 = darwin_energy(s);
    const Vec3 P0 = darwin_momentum(s);
    double pscale = 0.0;
    for (const auto& p : s.particles) pscale += p.charge.m0() * p.v.norm();
    double worstE = 0.0, worstP = 0.0;
    const auto& tr0 = run.trajectories[0].samples;
    for (std::size_t n = 0; n < tr0.size(); ++n) {
        ManyBodyState cur = s;
        for (std::size_t i = 0; i < s.size(); ++i) {
            cur.particles[i].q = run.trajectories[i].samples[n].s.q;
            cur.particles[i].v = run.trajectories[i].samples[n].s.v;
        }
        worstE = std::max(worstE, std::abs(darwin_energy(cur) - E0) / std::abs(E0));
        worstP = std::max(worstP, (darwin_momentum(cur) - P0).norm() / pscale);
        CHECK(tr0[n].energy == doctest::Approx(darwin_energy(cur)).epsilon(1e-15));
    }
    CHECK(worstE < 1e-8);
    CHECK(worstP < 1e-8);
}

TEST_CASE("attracting head-on pair halts on collision") {
    ManyBodyState s;
    s.particles.push_back({ChargeModel::point(1.0, 1.0), Vec3(0.5, 0, 0), Vec3::Zero()});
    s.particles.push_back({ChargeModel::point(-1.0, 1.0), Vec3(-0.5, 0, 0), Vec3::Zero()});
    const ManyBodyRun run = integrate_darwin(s, 0.0, 100.0, {}, 0.05);
    CHECK(run.status == Termination::CollisionHalt);
    CHECK(run.message.find("CollisionHalt") != std::string::npos);
    CHECK(run.trajectories[0].t_end() < 100.0);
}

TEST_CASE("retarded oracle starts from Coulomb forces for charges at rest") {
    ManyBodyState s;
    s.particles.push_back({ChargeModel::point(1.0, 1.0), Vec3(0.5, 0, 0), Vec3::Zero()});
    s.particles.push_back({ChargeModel::point(1.0, 2.0), Vec3(-0.5, 0, 0), Vec3::Zero()});
    const ManyBodyRun run = retarded_twobody_oracle(s, 0.0, 2.0);
    const auto Fc = coulomb_forces(s);
    CHECK((run.trajectories[0].samples.front().s.a - Fc[0]).norm() < 1e-14);
    CHECK((run.trajectories[1].samples.front().s.a - Fc[1] / 2.0).norm() < 1e-14);
    const auto Fr = retarded_forces(run, s, 0.0);
    CHECK((Fr[0] - Fc[0]).norm() < 1e-14);
    CHECK(run.trajectories[0].back().s.q[0] > 0.5);
    s.c = 2.0;
    CHECK_THROWS_AS(retarded_twobody_oracle(s, 0.0, 1.0), DomainError);
}

TEST_CASE("retarded and Darwin forces agree to the next order in v") {
    std::vector<double> scales, ratios;
    for (double sc : {1.0, 0.5}) {
        ManyBodyState s = circular_pair(0.1 * sc);
        ratios.push_back(darwin_retarded_residual_ratio(s, 40.0 / sc, 5.0, tight()));
        scales.push_back(sc);
    }
    CHECK(ratios[1] < ratios[0]);
    CHECK(fit_exponent(scales, ratios) == doctest::Approx(1.0).epsilon(0.1));
}
