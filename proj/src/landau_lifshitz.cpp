#include "radreact/landau_lifshitz.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <algorithm>
#include <cmath>

namespace radreact {

Vec3 ll_acceleration(const LlModel& model, const Vec3& q, const Vec3& v) {
    check_velocity(v, "landau_lifshitz");
    if (model.mass_model == MassModel::SemiRelAbraham) return ll_acceleration_substitution(model, q, v);
    const double e = model.charge.e();
    const double m0 = model.charge.m0();
    const double g = gamma_of(v);
    const double g2 = g * g;
    const FieldValue f = model.field.value(q);
    const FieldGradient dg = model.field.gradient(q);
    const Vec3& E = f.E;
    const Vec3& B = f.B;
    const Vec3 F = e * (E + v.cross(B));
    const Vec3 dF = dg.dE * v + v.cross(dg.dB * v);  // (v.grad)(E + v x B)
    const Vec3 ExB = E.cross(B);
    const double vE = v.dot(E), vB = v.dot(B);
    const double scalar = -E.squaredNorm() - B.squaredNorm() + vE * vE + vB * vB + 2.0 * v.dot(ExB);
    const double em = e / m0;
    const Vec3 corr = em * g * dF + em * em * (ExB + vE * E + vB * B + scalar * g2 * v);
    const Vec3 rhs = F + model.coupling() * corr;
    return kappa_inv(v) * rhs / (m0 * g);
}

Vec3 ll_acceleration_substitution(const LlModel& model, const Vec3& q, const Vec3& v) {
    check_velocity(v, "landau_lifshitz");
    const double e = model.charge.e();
    const double g2 = 1.0 / (1.0 - v.squaredNorm());
    const FieldValue f = model.field.value(q);
    const FieldGradient dg = model.field.gradient(q);
    const Vec3 F = e * (f.E + v.cross(f.B));
    const MassMatrix m = mass_matrix(model, v);
    const Vec3 h = m.solve(F);
    // d/dt F along (q', v') = (v, h)
    const Vec3 Fdot = e * (dg.dE * v + v.cross(dg.dB * v) + h.cross(f.B));
    Mat3 mdot;
    if (model.mass_model == MassModel::Relativistic) {
        const double m0 = model.charge.m0();
        const double g = std::sqrt(g2);
        const double vh = v.dot(h);
        mdot = m0 * g * g2 * vh * Mat3::Identity() + 3.0 * m0 * g * g2 * g2 * vh * v * v.transpose() +
               m0 * g * g2 * (h * v.transpose() + v * h.transpose());
    } else {
        mdot = effective_mass_derivative(model.charge, v, h);
    }
    const Vec3 hdot = m.solve(Fdot - mdot * h);
    const double vh = v.dot(h);
    const Vec3 corr = g2 * kappa(v) * hdot + 3.0 * g2 * g2 * g2 * vh * vh * v + 3.0 * g2 * g2 * vh * h;
    return m.solve(F + model.coupling() * corr);
}

LlDerivative ll_rhs(const LlModel& model, const Vec3& q, const Vec3& v) { return {v, ll_acceleration(model, q, v)}; }

Trajectory integrate_ll(const LlModel& model, const Vec3& q0, const Vec3& v0, double t0, double t1,
                        const IntegratorControls& controls) {
    check_velocity(v0, "landau_lifshitz");
    Trajectory traj;
    auto rhs = [&model](const OdeState& y, OdeState& dy, double) {
        const Vec3 q(y[0], y[1], y[2]), v(y[3], y[4], y[5]);
        const Vec3 a = ll_acceleration(model, q, v);
        for (int i = 0; i < 3; ++i) {
            dy[i] = v[i];
            dy[3 + i] = a[i];
        }
        dy[6] = radiated_power(model, v, a);
    };
    auto obs = [&](double t, const OdeState& y, const OdeState& dy) {
        TrajectorySample s;
        s.t = t;
        s.s.q = Vec3(y[0], y[1], y[2]);
        s.s.v = Vec3(y[3], y[4], y[5]);
        s.s.a = Vec3(dy[3], dy[4], dy[5]);
        s.energy = mechanical_energy(model, s.s.q, s.s.v);
        s.schott = schott_energy(model, s.s);
        s.radiated = y[6];
        traj.samples.push_back(s);
        return StepAction::Continue;
    };
    const OdeState y0{q0[0], q0[1], q0[2], v0[0], v0[1], v0[2], 0.0};
    integrate_ode(rhs, y0, t0, t1, controls, obs);
    if (t1 < t0) std::reverse(traj.samples.begin(), traj.samples.end());
    return traj;
}

ConstantBClosedForms::ConstantBClosedForms(const ChargeModel& charge, double B, double gamma0, double epsilon)
    : omega_c_(cyclotron_frequency(charge, B)), beta_(epsilon * charge.beta()), gamma0_(gamma0) {
    if (!(gamma0 >= 1.0)) throw DomainError("landau_lifshitz", "gamma0 must be >= 1");
    if (!(B > 0.0)) throw DomainError("landau_lifshitz", "field must be positive");
}

double ConstantBClosedForms::gamma_of_t(double t) const {
    const double x = std::exp(-2.0 * rate() * t);
    return (gamma0_ + 1.0 + (gamma0_ - 1.0) * x) / (gamma0_ + 1.0 - (gamma0_ - 1.0) * x);
}

double ConstantBClosedForms::speed_of_angle(double phi) const {
    return initial_speed() * std::exp(-beta_ * omega_c_ * phi);
}

double ConstantBClosedForms::radius_of_t(double t) const {
    const double x = std::exp(-2.0 * rate() * t);
    return initial_radius() * std::exp(-rate() * t) / (1.0 + 0.5 * (gamma0_ - 1.0) * (1.0 - x));
}

double ConstantBClosedForms::radius_ultrarel(double t) const {
    return initial_radius() / (1.0 + gamma0_ * rate() * t);
}

double ConstantBClosedForms::time_to_radius_ratio(double ratio) const {
    if (!(ratio > 0.0 && ratio <= 1.0)) throw DomainError("landau_lifshitz", "radius ratio must be in (0, 1]");
    const double r0 = initial_radius();
    auto f = [&](double t) { return radius_of_t(t) / r0 - ratio; };
    double hi = 1.0 / rate();
    while (f(hi) > 0.0) hi *= 2.0;
    boost::math::tools::eps_tolerance<double> tol(50);
    std::uintmax_t it = 200;
    const auto br = boost::math::tools::toms748_solve(f, 0.0, hi, tol, it);
    return 0.5 * (br.first + br.second);
}

double ConstantBClosedForms::time_to_radius_ratio_ultrarel(double ratio) const {
    return (1.0 / ratio - 1.0) / (gamma0_ * rate());
}

double ConstantBClosedForms::revolutions(double t) const {
    auto f = [&](double s) { return omega_c_ / (2.0 * M_PI * gamma_of_t(s)); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, t, 25, 1e-13);
}

Vec3 central_potential_rhs(const LlModel& model, const RadialProfile& profile, const Vec3& q, const Vec3& v) {
    check_velocity(v, "landau_lifshitz");
    const double r = q.norm();
    if (r == 0.0) throw DomainError("landau_lifshitz", "central potential evaluated at r = 0");
    const Vec3 n = q / r;
    const double e = model.charge.e(), m0 = model.charge.m0(), em = e / m0;
    const double g = gamma_of(v), g2 = g * g;
    const double d1 = profile.dphi(r), d2 = profile.d2phi(r);
    const double vn = v.dot(n);
    const Vec3 corr = em * g * (-vn * d2 * n - (v - vn * n) * d1 / r) +
                      em * em * d1 * d1 * (vn * n - g2 * v + g2 * vn * vn * v);
    const Vec3 rhs = -e * d1 * n + model.coupling() * corr;
    return kappa_inv(v) * rhs / (m0 * g);
}

Vec3 angular_momentum_decay(const LlModel& model, const RadialProfile& profile, const Vec3& q, const Vec3& v) {
    const double r = q.norm();
    if (r == 0.0) throw DomainError("landau_lifshitz", "central potential evaluated at r = 0");
    const double e = model.charge.e(), m0 = model.charge.m0(), em = e / m0;
    const double g = gamma_of(v);
    const double vn = v.dot(q / r);
    const double d1 = profile.dphi(r);
    const double lambda = model.epsilon * model.charge.beta() * (-em * d1 / r - em * em * g * (1.0 - vn * vn) * d1 * d1);
    return lambda * q.cross(m0 * g * v);
}

double axial_1d_rhs(const LlModel& model, const AxialProfile& profile, double x, double v) {
    if (!(std::abs(v) <= kVelocityGuard)) throw DomainError("landau_lifshitz", "velocity guard violated");
    const double e = model.charge.e(), m0 = model.charge.m0();
    const double g = 1.0 / std::sqrt(1.0 - v * v);
    return (-e * profile.dphi(x) - model.coupling() * (e / m0) * g * profile.d2phi(x) * v) / (m0 * g * g * g);
}

double axial_balance_energy(const LlModel& model, const AxialProfile& profile, double x, double v) {
    const double e = model.charge.e(), m0 = model.charge.m0();
    const double g = 1.0 / std::sqrt(1.0 - v * v);
    return m0 * g + e * profile.phi(x) + model.coupling() * (e / m0) * g * profile.dphi(x) * v;
}

double axial_balance_rate(const LlModel& model, const AxialProfile& profile, double x, double v) {
    const double e = model.charge.e(), m0 = model.charge.m0(), em = e / m0;
    const double g = 1.0 / std::sqrt(1.0 - v * v);
    const double ek = model.coupling();
    const double d1 = profile.dphi(x);
    return -ek * em * em * d1 * d1 - (ek * em) * (ek * em) * g * d1 * profile.d2phi(x) * v / m0;
}

}  // namespace radreact
