#include "radreact/darwin.hpp"

#include <cmath>
#include <limits>

#include "radreact/lorentz_dirac.hpp"
#include "radreact/radiation.hpp"
#include "radreact/soliton.hpp"

namespace radreact {

namespace {

double kinetic_mass(const ChargeModel& c) { return c.m_b() + 4.0 / 3.0 * c.m_e(); }
double quartic_mass(const ChargeModel& c) { return c.m_b() / 8.0 + 2.0 / 15.0 * c.m_e(); }
double pair_kappa(const Particle& a, const Particle& b) { return a.charge.e() * b.charge.e() / (4.0 * M_PI); }

// Pair term of the interaction Lagrangian seen from particle s with r = q_s - q_o.
struct PairTerms {
    Vec3 grad_r;     // d ell / d q_s
    Vec3 velocity;   // velocity part of d/dt (d ell / d v_s)
    Mat3 coupling;   // coefficient of a_o in d/dt (d ell / d v_s)
    Vec3 canonical;  // d ell / d v_s
};

PairTerms pair_terms(double k, const Vec3& r, const Vec3& us, const Vec3& uo, double c2) {
    const double R = r.norm();
    if (!(R > 0.0)) throw DomainError("darwin", "coincident positions");
    const double R3 = R * R * R, R5 = R3 * R * R;
    const double h = 0.5 / c2;
    const double ur_s = us.dot(r), ur_o = uo.dot(r);
    const Vec3 rd = us - uo;
    const double r_rd = r.dot(rd);
    PairTerms p;
    p.grad_r = k * (r / R3 + h * (-us.dot(uo) * r / R3 + (us * ur_o + uo * ur_s) / R3 - 3.0 * ur_s * ur_o * r / R5));
    p.velocity = k * h * (-uo * r_rd / R3 + rd * ur_o / R3 + r * uo.dot(rd) / R3 - 3.0 * r * ur_o * r_rd / R5);
    const Vec3 n = r / R;
    p.coupling = k * h / R * (Mat3::Identity() + n * n.transpose());
    p.canonical = k * h * (uo / R + r * ur_o / R3);
    return p;
}

Mat3 kinetic_hessian(const Particle& p, double c2) {
    const double M = kinetic_mass(p.charge), mu = quartic_mass(p.charge);
    const double u2 = p.v.squaredNorm();
    return (M + 4.0 * mu * u2 / c2) * Mat3::Identity() + 8.0 * mu / c2 * p.v * p.v.transpose();
}

void check_state(const ManyBodyState& s) {
    if (!(s.c > 0.0)) throw DomainError("darwin", "light speed must be positive");
    for (const auto& p : s.particles)
        if (!(p.v.norm() < s.c)) throw DomainError("darwin", "particle speed must stay below c");
}

}  // namespace

double ManyBodyState::min_separation() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < particles.size(); ++i)
        for (std::size_t j = i + 1; j < particles.size(); ++j) m = std::min(m, (particles[i].q - particles[j].q).norm());
    return m;
}

DarwinTerms darwin_lagrangian_terms(const ManyBodyState& state) {
    check_state(state);
    const double c2 = state.c * state.c;
    DarwinTerms t;
    const auto& ps = state.particles;
    for (const auto& p : ps) {
        const double u2 = p.v.squaredNorm();
        t.T0 += 0.5 * kinetic_mass(p.charge) * u2;
        t.T1 += quartic_mass(p.charge) * u2 * u2 / c2;
    }
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
            const Vec3 r = ps[i].q - ps[j].q;
            const double R = r.norm();
            if (!(R > 0.0)) throw DomainError("darwin", "coincident positions");
            const Vec3 n = r / R;
            const double k = pair_kappa(ps[i], ps[j]);
            t.U0 += k / R;
            t.U1 -= 0.5 * k / (c2 * R) * (ps[i].v.dot(ps[j].v) + ps[i].v.dot(n) * ps[j].v.dot(n));
        }
    return t;
}

DarwinForces darwin_forces(const ManyBodyState& state) {
    check_state(state);
    const double c2 = state.c * state.c;
    const auto& ps = state.particles;
    const std::size_t N = ps.size();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3 * N, 3 * N);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(3 * N);
    DarwinForces out;
    out.momentum_rates.assign(N, Vec3::Zero());
    for (std::size_t i = 0; i < N; ++i) {
        A.block<3, 3>(3 * i, 3 * i) = kinetic_hessian(ps[i], c2);
        for (std::size_t j = 0; j < N; ++j) {
            if (j == i) continue;
            const PairTerms p = pair_terms(pair_kappa(ps[i], ps[j]), ps[i].q - ps[j].q, ps[i].v, ps[j].v, c2);
            A.block<3, 3>(3 * i, 3 * j) = p.coupling;
            b.segment<3>(3 * i) += p.grad_r - p.velocity;
            out.momentum_rates[i] += p.grad_r;
        }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    if (!(std::abs(lu.determinant()) > 0.0)) throw DomainError("darwin", "singular acceleration coupling");
    const Eigen::VectorXd a = lu.solve(b);
    out.accelerations.resize(N);
    for (std::size_t i = 0; i < N; ++i) out.accelerations[i] = a.segment<3>(3 * i);
    out.forces = darwin_interaction_forces(state, out.accelerations);
    return out;
}

std::vector<Vec3> darwin_interaction_forces(const ManyBodyState& state, const std::vector<Vec3>& acc) {
    check_state(state);
    const double c2 = state.c * state.c;
    const auto& ps = state.particles;
    std::vector<Vec3> F(ps.size(), Vec3::Zero());
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t j = 0; j < ps.size(); ++j) {
            if (j == i) continue;
            const PairTerms p = pair_terms(pair_kappa(ps[i], ps[j]), ps[i].q - ps[j].q, ps[i].v, ps[j].v, c2);
            F[i] += p.grad_r - p.velocity - p.coupling * acc[j];
        }
    return F;
}

std::vector<Vec3> coulomb_forces(const ManyBodyState& state) {
    const auto& ps = state.particles;
    std::vector<Vec3> F(ps.size(), Vec3::Zero());
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t j = 0; j < ps.size(); ++j) {
            if (j == i) continue;
            const Vec3 r = ps[i].q - ps[j].q;
            const double R = r.norm();
            if (!(R > 0.0)) throw DomainError("darwin", "coincident positions");
            F[i] += pair_kappa(ps[i], ps[j]) * r / (R * R * R);
        }
    return F;
}

double darwin_energy(const ManyBodyState& state) {
    const DarwinTerms t = darwin_lagrangian_terms(state);
    return t.T0 + 3.0 * t.T1 + t.U0 - t.U1;
}

Vec3 darwin_momentum(const ManyBodyState& state) {
    check_state(state);
    const double c2 = state.c * state.c;
    const auto& ps = state.particles;
    Vec3 P = Vec3::Zero();
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const double u2 = ps[i].v.squaredNorm();
        P += (kinetic_mass(ps[i].charge) + 4.0 * quartic_mass(ps[i].charge) * u2 / c2) * ps[i].v;
        for (std::size_t j = 0; j < ps.size(); ++j) {
            if (j == i) continue;
            P += pair_terms(pair_kappa(ps[i], ps[j]), ps[i].q - ps[j].q, ps[i].v, ps[j].v, c2).canonical;
        }
    }
    return P;
}

namespace {

ManyBodyState unpack(const ManyBodyState& tmpl, const OdeState& y) {
    ManyBodyState s = tmpl;
    for (std::size_t i = 0; i < s.particles.size(); ++i) {
        s.particles[i].q = Vec3(y[6 * i], y[6 * i + 1], y[6 * i + 2]);
        s.particles[i].v = Vec3(y[6 * i + 3], y[6 * i + 4], y[6 * i + 5]);
    }
    return s;
}

OdeState pack(const ManyBodyState& s) {
    OdeState y(6 * s.particles.size());
    for (std::size_t i = 0; i < s.particles.size(); ++i)
        for (int k = 0; k < 3; ++k) {
            y[6 * i + k] = s.particles[i].q[k];
            y[6 * i + 3 + k] = s.particles[i].v[k];
        }
    return y;
}

TrajectorySample particle_sample(double t, const OdeState& y, const OdeState& dy, std::size_t i, double energy) {
    TrajectorySample s;
    s.t = t;
    s.s.q = Vec3(y[6 * i], y[6 * i + 1], y[6 * i + 2]);
    s.s.v = Vec3(y[6 * i + 3], y[6 * i + 4], y[6 * i + 5]);
    s.s.a = Vec3(dy[6 * i + 3], dy[6 * i + 4], dy[6 * i + 5]);
    s.energy = energy;
    s.schott = energy;
    return s;
}

}  // namespace

ManyBodyRun integrate_darwin(const ManyBodyState& state0, double t0, double t1, const IntegratorControls& controls,
                             double collision_radius) {
    check_state(state0);
    if (state0.particles.empty()) throw DomainError("darwin", "no particles");
    const double radius = collision_radius > 0.0 ? collision_radius : 1e-3 * state0.min_separation();
    ManyBodyRun run;
    run.trajectories.resize(state0.size());
    auto rhs = [&](const OdeState& y, OdeState& dy, double) {
        const ManyBodyState s = unpack(state0, y);
        const DarwinForces f = darwin_forces(s);
        for (std::size_t i = 0; i < s.size(); ++i)
            for (int k = 0; k < 3; ++k) {
                dy[6 * i + k] = y[6 * i + 3 + k];
                dy[6 * i + 3 + k] = f.accelerations[i][k];
            }
    };
    auto obs = [&](double t, const OdeState& y, const OdeState& dy) {
        const ManyBodyState s = unpack(state0, y);
        const double E = darwin_energy(s);
        for (std::size_t i = 0; i < s.size(); ++i) run.trajectories[i].samples.push_back(particle_sample(t, y, dy, i, E));
        if (s.size() > 1 && s.min_separation() < radius) {
            run.status = Termination::CollisionHalt;
            run.message = "CollisionHalt: pair distance below " + std::to_string(radius) + " at t = " + std::to_string(t);
            return StepAction::Stop;
        }
        return StepAction::Continue;
    };
    integrate_ode(rhs, pack(state0), t0, t1, controls, obs);
    for (auto& tr : run.trajectories) tr.status = run.status;
    return run;
}

namespace {

Vec3 lorentz_from(const WorldLine& source, const Particle& src, const Particle& target, double t) {
    const LwFields f = lw_fields(source, src.charge.e(), target.q, t);
    return target.charge.e() * (f.E + target.v.cross(f.B));
}

}  // namespace

ManyBodyRun retarded_twobody_oracle(const ManyBodyState& state0, double t0, double t1,
                                    const IntegratorControls& controls, double collision_radius) {
    check_state(state0);
    if (state0.size() != 2) throw DomainError("darwin", "the retarded oracle needs exactly two particles");
    if (state0.c != 1.0) throw DomainError("darwin", "the retarded oracle needs c = 1");
    const double radius = collision_radius > 0.0 ? collision_radius : 0.5 * state0.min_separation();
    IntegratorControls ctl = controls;
    ctl.max_step = std::min(ctl.max_step, 0.25 * radius);

    std::array<HistoryBuffer, 2> hist{HistoryBuffer(kVelocityGuard), HistoryBuffer(kVelocityGuard)};
    auto accel = [&](const ManyBodyState& s, double t) {
        std::array<Vec3, 2> a;
        for (std::size_t i = 0; i < 2; ++i) {
            const std::size_t j = 1 - i;
            const Vec3 F = lorentz_from(hist[j], s.particles[j], s.particles[i], t);
            a[i] = effective_mass_matrix(s.particles[i].charge, s.particles[i].v).solve(F);
        }
        return a;
    };
    // Seed the buffers at t0; fields at t0 only see the straight-line prehistory.
    for (std::size_t i = 0; i < 2; ++i) {
        TrajectorySample s;
        s.t = t0;
        s.s.q = state0.particles[i].q;
        s.s.v = state0.particles[i].v;
        hist[i].append(s);
    }
    const std::array<Vec3, 2> a0 = accel(state0, t0);
    for (std::size_t i = 0; i < 2; ++i) {
        TrajectorySample s;
        s.t = t0;
        s.s = {state0.particles[i].q, state0.particles[i].v, a0[i]};
        hist[i] = HistoryBuffer(kVelocityGuard);
        hist[i].append(s);
    }

    ManyBodyRun run;
    run.trajectories.resize(2);
    auto rhs = [&](const OdeState& y, OdeState& dy, double t) {
        const ManyBodyState s = unpack(state0, y);
        const std::array<Vec3, 2> a = accel(s, t);
        for (std::size_t i = 0; i < 2; ++i)
            for (int k = 0; k < 3; ++k) {
                dy[6 * i + k] = y[6 * i + 3 + k];
                dy[6 * i + 3 + k] = a[i][k];
            }
    };
    auto obs = [&](double t, const OdeState& y, const OdeState& dy) {
        const ManyBodyState s = unpack(state0, y);
        const double E = darwin_energy(s);
        for (std::size_t i = 0; i < 2; ++i) {
            const TrajectorySample smp = particle_sample(t, y, dy, i, E);
            if (t > hist[i].t_last()) hist[i].append(smp);
            run.trajectories[i].samples.push_back(smp);
        }
        if (s.min_separation() < radius) {
            run.status = Termination::CollisionHalt;
            run.message = "CollisionHalt: pair distance below " + std::to_string(radius) + " at t = " + std::to_string(t);
            return StepAction::Stop;
        }
        return StepAction::Continue;
    };
    integrate_ode(rhs, pack(state0), t0, t1, ctl, obs);
    for (auto& tr : run.trajectories) tr.status = run.status;
    return run;
}

std::vector<Vec3> retarded_forces(const ManyBodyRun& run, const ManyBodyState& charges, double t) {
    if (run.trajectories.size() != 2 || charges.size() != 2)
        throw DomainError("darwin", "retarded forces need two trajectories");
    std::vector<Vec3> F(2);
    std::array<HistoryBuffer, 2> lines{HistoryBuffer(run.trajectories[0], kVelocityGuard),
                                       HistoryBuffer(run.trajectories[1], kVelocityGuard)};
    for (std::size_t i = 0; i < 2; ++i) {
        const std::size_t j = 1 - i;
        Particle target = charges.particles[i];
        const JetState si = lines[i].at(t);
        target.q = si.q;
        target.v = si.v;
        F[i] = lorentz_from(lines[j], charges.particles[j], target, t);
    }
    return F;
}

double darwin_retarded_residual_ratio(const ManyBodyState& state0, double t1, double t_start,
                                      const IntegratorControls& controls) {
    const ManyBodyRun ret = retarded_twobody_oracle(state0, 0.0, t1, controls);
    double num = 0.0, den = 0.0;
    const auto& tr0 = ret.trajectories[0].samples;
    for (std::size_t i = 0; i < tr0.size(); ++i) {
        const double t = tr0[i].t;
        if (t < t_start) continue;
        ManyBodyState cur = state0;
        std::vector<Vec3> acc(2);
        for (std::size_t j = 0; j < 2; ++j) {
            const TrajectorySample& smp = ret.trajectories[j].samples[i];
            cur.particles[j].q = smp.s.q;
            cur.particles[j].v = smp.s.v;
            acc[j] = smp.s.a;
        }
        const auto Fr = retarded_forces(ret, state0, t);
        const auto Fd = darwin_interaction_forces(cur, acc);
        const auto Fc = coulomb_forces(cur);
        for (std::size_t j = 0; j < 2; ++j) {
            num = std::max(num, (Fr[j] - Fd[j]).norm());
            den = std::max(den, (Fd[j] - Fc[j]).norm());
        }
    }
    if (!(den > 0.0)) throw DomainError("darwin", "no samples after the transient window");
    return num / den;
}

}  // namespace radreact
