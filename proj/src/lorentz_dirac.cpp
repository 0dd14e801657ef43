#include "radreact/lorentz_dirac.hpp"

#include <algorithm>
#include <cmath>

namespace radreact {

std::string to_string(MassModel m) {
    return m == MassModel::SemiRelAbraham ? "semirel_abraham" : "relativistic";
}

MassModel mass_model_from_string(const std::string& s) {
    if (s == "semirel_abraham") return MassModel::SemiRelAbraham;
    if (s == "relativistic") return MassModel::Relativistic;
    throw DomainError("lorentz_dirac", "unknown mass model '" + s + "'");
}

LdModel::LdModel(MassModel mm, ChargeModel c, double eps, FieldMap f)
    : mass_model(mm), charge(std::move(c)), epsilon(eps), field(std::move(f)) {
    if (!(eps > 0.0)) throw DomainError("lorentz_dirac", "epsilon must be positive");
}

void check_velocity(const Vec3& v, const char* module) {
    if (!v.allFinite()) throw DomainError(module, "non-finite velocity");
    if (v.norm() > kVelocityGuard) throw DomainError(module, "velocity guard |v| <= 1 - 1e-9 violated");
}

MassMatrix mass_matrix(const LdModel& model, const Vec3& v) {
    if (model.mass_model == MassModel::Relativistic) return relativistic_mass_matrix(model.charge.m0(), v);
    return effective_mass_matrix(model.charge, v);
}

Vec3 lorentz_force(const LdModel& model, const Vec3& q, const Vec3& v) {
    const FieldValue f = model.field.value(q);
    return model.charge.e() * (f.E + v.cross(f.B));
}

Vec3 manifold_acceleration(const LdModel& model, const Vec3& q, const Vec3& v) {
    return mass_matrix(model, v).solve(lorentz_force(model, q, v));
}

double mechanical_energy(const LdModel& model, const Vec3& q, const Vec3& v) {
    const double kinetic = model.mass_model == MassModel::Relativistic ? model.charge.m0() * gamma_of(v)
                                                                        : energy_of_velocity(model.charge, v);
    return kinetic + model.charge.e() * model.field.potential(q);
}

double schott_energy(const LdModel& model, const JetState& s) {
    const double g2 = 1.0 / (1.0 - s.v.squaredNorm());
    return mechanical_energy(model, s.q, s.v) - model.coupling() * g2 * g2 * s.v.dot(s.a);
}

double radiated_power(const LdModel& model, const Vec3& v, const Vec3& a) {
    const double g2 = 1.0 / (1.0 - v.squaredNorm());
    const double va = v.dot(a);
    return model.coupling() * (g2 * g2 * a.squaredNorm() + g2 * g2 * g2 * va * va);
}

JetDerivative ld_rhs(const LdModel& model, const JetState& s) {
    check_velocity(s.v, "lorentz_dirac");
    const Vec3& v = s.v;
    const Vec3& a = s.a;
    const double g2 = 1.0 / (1.0 - v.squaredNorm());
    const double va = v.dot(a);
    const double ek = model.coupling();
    const Vec3 lhs = mass_matrix(model, v).apply(a) - lorentz_force(model, s.q, v);
    const Vec3 rest = ek * (3.0 * g2 * g2 * va * a + 3.0 * g2 * g2 * g2 * va * va * v);
    const Vec3 jerk = kappa_inv(v) * (lhs - rest) / (ek * g2);
    return {v, a, jerk};
}

namespace {

OdeState pack(const JetState& s, double radiated) {
    return {s.q[0], s.q[1], s.q[2], s.v[0], s.v[1], s.v[2], s.a[0], s.a[1], s.a[2], radiated};
}

JetState unpack(const OdeState& y) {
    return {Vec3(y[0], y[1], y[2]), Vec3(y[3], y[4], y[5]), Vec3(y[6], y[7], y[8])};
}

void ld_system(const LdModel& model, const OdeState& y, OdeState& dy) {
    const JetState s = unpack(y);
    const JetDerivative d = ld_rhs(model, s);
    for (int i = 0; i < 3; ++i) {
        dy[i] = d.v[i];
        dy[3 + i] = d.a[i];
        dy[6 + i] = d.jerk[i];
    }
    dy[9] = radiated_power(model, s.v, s.a);
}

TrajectorySample make_sample(const LdModel& model, double t, const OdeState& y, const OdeState& dy) {
    TrajectorySample smp;
    smp.t = t;
    smp.s = unpack(y);
    smp.jerk = Vec3(dy[6], dy[7], dy[8]);
    smp.energy = mechanical_energy(model, smp.s.q, smp.s.v);
    smp.schott = schott_energy(model, smp.s);
    smp.radiated = y[9];
    return smp;
}

// Least-squares slope of log|a - h| over the trailing window.
double fit_growth_rate(const LdModel& model, const std::vector<TrajectorySample>& samples, double window) {
    const double t_last = samples.back().t;
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto it = samples.rbegin(); it != samples.rend() && t_last - it->t <= window; ++it) {
        const double d = (it->s.a - manifold_acceleration(model, it->s.q, it->s.v)).norm();
        if (!(d > 0.0)) continue;
        const double x = it->t, yv = std::log(d);
        n += 1;
        sx += x;
        sy += yv;
        sxx += x * x;
        sxy += x * yv;
    }
    if (n < 2) return 0.0;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

Trajectory integrate_forward(const LdModel& model, const JetState& s0, double t0, double t1,
                             const LdControls& controls) {
    if (!(t1 >= t0)) throw DomainError("lorentz_dirac", "forward integration needs t1 >= t0");
    check_velocity(s0.v, "lorentz_dirac");
    Trajectory traj;
    const double eb = model.epsilon * model.charge.beta();
    const double a_floor = controls.a_floor > 0.0 ? controls.a_floor : 1e-12 / eb;
    int over = 0;
    auto rhs = [&model](const OdeState& y, OdeState& dy, double) { ld_system(model, y, dy); };
    auto obs = [&](double t, const OdeState& y, const OdeState& dy) {
        traj.samples.push_back(make_sample(model, t, y, dy));
        if (!controls.detect_runaway) return StepAction::Continue;
        const JetState& s = traj.samples.back().s;
        const double h = manifold_acceleration(model, s.q, s.v).norm();
        if (s.a.norm() > controls.runaway_factor * std::max(h, a_floor)) ++over;
        else over = 0;
        return over >= controls.runaway_steps ? StepAction::Stop : StepAction::Continue;
    };
    const OdeRun run = integrate_ode(rhs, pack(s0, 0.0), t0, t1, controls, obs);
    if (run.stopped) {
        traj.status = Termination::RunawayDetected;
        traj.runaway_rate = fit_growth_rate(model, traj.samples, 3.0 * eb);
        traj.message = "RunawayDetected: |a| exceeded " + std::to_string(controls.runaway_factor) +
                       " x max(|h|, a_floor) for " + std::to_string(controls.runaway_steps) + " steps";
    }
    return traj;
}

Trajectory integrate_backward(const LdModel& model, const Vec3& qT, const Vec3& vT, double T,
                              const IntegratorControls& controls) {
    if (!(T > 0.0)) throw DomainError("lorentz_dirac", "backward integration needs T > 0");
    check_velocity(vT, "lorentz_dirac");
    const JetState sT{qT, vT, manifold_acceleration(model, qT, vT)};
    Trajectory traj;
    auto rhs = [&model](const OdeState& y, OdeState& dy, double) { ld_system(model, y, dy); };
    auto obs = [&](double t, const OdeState& y, const OdeState& dy) {
        traj.samples.push_back(make_sample(model, t, y, dy));
        return StepAction::Continue;
    };
    integrate_ode(rhs, pack(sT, 0.0), T, 0.0, controls, obs);
    std::reverse(traj.samples.begin(), traj.samples.end());
    const double r0 = traj.samples.front().radiated;
    for (auto& s : traj.samples) s.radiated -= r0;
    return traj;
}

std::array<std::complex<double>, 3> linearized_oscillator_roots(double omega0, double ek) {
    if (!(omega0 > 0.0) || !(ek > 0.0)) throw DomainError("lorentz_dirac", "need omega0 > 0 and ek > 0");
    auto f = [&](double z) { return ek * z * z * z - z * z - omega0 * omega0; };
    auto df = [&](double z) { return 3.0 * ek * z * z - 2.0 * z; };
    // The real root exceeds 1/ek; f is convex there, so Newton from the right
    // converges monotonically.
    double z = 1.0 / ek + omega0;
    while (f(z) <= 0.0) z *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double step = f(z) / df(z);
        z -= step;
        if (std::abs(step) <= 1e-16 * std::abs(z)) break;
    }
    // Deflate: ek (x - z)(x^2 + p x + q) with q = w0^2/(ek z), p = q/z.
    const double q = omega0 * omega0 / (ek * z);
    const double p = q / z;
    const double disc = 4.0 * q - p * p;
    std::complex<double> r1, r2;
    if (disc >= 0.0) {
        const double im = 0.5 * std::sqrt(disc);
        r1 = {-0.5 * p, -im};
        r2 = {-0.5 * p, im};
    } else {
        const double sq = std::sqrt(-disc);
        const double x1 = -0.5 * (p + sq);
        r1 = {x1, 0.0};
        r2 = {q / x1, 0.0};
    }
    return {r1, r2, {z, 0.0}};
}

}  // namespace radreact
