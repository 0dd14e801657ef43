#include "radreact/memory.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

namespace radreact {

MemoryKernel::MemoryKernel(double e, FormFactor form) : e_(e), form_(form) {
    if (form.kind == FormKind::PointLimit || !(form.radius > 0.0))
        throw DomainError("memory", "kernel needs a sphere or ball of positive radius");
}

namespace {

// (1 - w^2) * (1 - w^2) convolution on [0, 2].
double ball_profile(double u) {
    if (u >= 2.0) return 0.0;
    const double u2 = u * u, u3 = u2 * u;
    return 16.0 / 15.0 - 4.0 / 3.0 * u2 + 2.0 / 3.0 * u3 - u2 * u3 / 30.0;
}

double ball_profile_derivative(double u) {
    if (u >= 2.0) return 0.0;
    const double u2 = u * u;
    return -8.0 / 3.0 * u + 2.0 * u2 - u2 * u2 / 6.0;
}

}  // namespace

double MemoryKernel::h(double w) const {
    const double R = form_.radius;
    const double u = std::abs(w) / R;
    if (u >= 2.0) return 0.0;
    const double c = e_ * e_ / (8.0 * M_PI * R);
    if (form_.kind == FormKind::SphereShell) return c * (1.0 - 0.5 * u);
    return c * 9.0 / 8.0 * ball_profile(u);
}

double MemoryKernel::dh(double w) const {
    const double R = form_.radius;
    const double u = std::abs(w) / R;
    if (u >= 2.0 || w == 0.0) return 0.0;
    const double c = e_ * e_ / (8.0 * M_PI * R * R);
    const double s = w > 0.0 ? 1.0 : -1.0;
    if (form_.kind == FormKind::SphereShell) return -0.5 * c * s;
    return c * 9.0 / 8.0 * ball_profile_derivative(u) * s;
}

double MemoryKernel::W(double t, const Vec3& x) const {
    const double r = x.norm();
    if (r == 0.0) return 2.0 * dh(t);
    return (h(r + t) - h(r - t)) / r;
}

double kernel_h(const MemoryKernel& kernel, double w) { return kernel.h(w); }

HistoryFunction HistoryFunction::constant(const Vec3& v0, const Vec3& q0) {
    return {[v0](double) { return v0; }, q0};
}

DdeModel::DdeModel(double e_, double m_b_, double R_, FieldMap f) : e(e_), m_b(m_b_), R(R_), field(std::move(f)) {
    if (!(R_ > 0.0)) throw DomainError("memory", "radius must be positive");
    if (!(m_b_ > 0.0)) throw DomainError("memory", "bare mass must be positive");
}

DdeModel DdeModel::from_charge(const ChargeModel& charge, FieldMap field) {
    if (charge.form().kind != FormKind::SphereShell)
        throw DomainError("memory", "the delay equation holds for the charged sphere only");
    return DdeModel(charge.e(), charge.m_b(), charge.form().radius, std::move(field));
}

Vec3 delay_rhs(const DdeModel& model, const Vec3& q, const Vec3& v, const Vec3& v_delayed) {
    const FieldValue f = model.field.value(q);
    return (model.e * (f.E + v.cross(f.B)) + model.delay_coefficient() * (v_delayed - v)) / model.m_b;
}

namespace {

struct Node {
    double t;
    Vec3 q, v, a;
    double S;  // int_0^t v^2
    double D;  // cumulative dissipation
};

}  // namespace

Trajectory integrate_dde(const DdeModel& model, const HistoryFunction& history, double t1,
                         const DdeControls& controls) {
    if (!history.v) throw DomainError("memory", "history window too short: no velocity history");
    if (!(t1 > 0.0)) throw DomainError("memory", "end time must be positive");
    if (controls.substeps_per_radius < 1) throw DomainError("memory", "substeps_per_radius must be >= 1");
    const double R = model.R, lag = 2.0 * R;
    const int per_window = 2 * controls.substeps_per_radius;
    const double H = lag / per_window;
    const double c = model.delay_coefficient();
    for (int i = 0; i <= per_window; ++i) {
        const Vec3 vh = history.v(-lag + i * H);
        if (!vh.allFinite() || vh.norm() >= 1.0) throw DomainError("memory", "history violates |v| < 1");
    }
    // Integral of v^2 over the prescribed history, used until the lag leaves it.
    auto hist_v2 = [&](double a, double b) {
        if (b <= a) return 0.0;
        return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            [&](double s) { return history.v(s).squaredNorm(); }, a, b, 10, 1e-13);
    };
    std::vector<Node> nodes;
    nodes.reserve(static_cast<std::size_t>(t1 / H) + 2);
    // Delayed velocity; exact grid points reuse stored nodes, midpoints use Hermite.
    auto delayed = [&](double s) -> Vec3 {
        const double td = s - lag;
        if (td <= 0.0) return history.v(td);
        const double x = td / H;
        std::size_t i = static_cast<std::size_t>(std::floor(x));
        if (i >= nodes.size() - 1) i = nodes.size() - 2;
        const Node& n0 = nodes[i];
        const Node& n1 = nodes[i + 1];
        return hermite(n0.t, n1.t, n0.v, n1.v, n0.a, n1.a, td);
    };
    Trajectory traj;
    auto record = [&](const Node& n) {
        TrajectorySample s;
        s.t = n.t;
        s.s = {n.q, n.v, n.a};
        s.energy = 0.5 * model.m_b * n.v.squaredNorm() + model.e * model.field.potential(n.q);
        double window;
        if (n.t >= lag) {
            const double td = n.t - lag;
            const std::size_t i = static_cast<std::size_t>(std::llround(td / H));
            window = n.S - nodes[i].S;
        } else {
            window = n.S + hist_v2(n.t - lag, 0.0);
        }
        s.schott = s.energy + 0.5 * c * window;
        s.radiated = n.D;
        traj.samples.push_back(s);
    };
    Node cur{0.0, history.q0, history.v(0.0), Vec3::Zero(), 0.0, 0.0};
    if (cur.v.norm() >= kVelocityGuard) throw DomainError("memory", "velocity guard violated");
    cur.a = delay_rhs(model, cur.q, cur.v, history.v(-lag));
    nodes.push_back(cur);
    record(cur);
    const long n_steps = static_cast<long>(std::ceil(t1 / H - 1e-9));
    struct D {
        Vec3 dq, dv;
        double dS, dD;
    };
    auto f = [&](double t, const Vec3& q, const Vec3& v) {
        const Vec3 vd = delayed(t);
        return D{v, delay_rhs(model, q, v, vd), v.squaredNorm(), 0.5 * c * (v - vd).squaredNorm()};
    };
    for (long n = 0; n < n_steps; ++n) {
        const double t = cur.t;
        const D k1 = f(t, cur.q, cur.v);
        const D k2 = f(t + 0.5 * H, cur.q + 0.5 * H * k1.dq, cur.v + 0.5 * H * k1.dv);
        const D k3 = f(t + 0.5 * H, cur.q + 0.5 * H * k2.dq, cur.v + 0.5 * H * k2.dv);
        const D k4 = f(t + H, cur.q + H * k3.dq, cur.v + H * k3.dv);
        Node nx;
        nx.t = (n + 1) * H;
        nx.q = cur.q + H / 6.0 * (k1.dq + 2.0 * k2.dq + 2.0 * k3.dq + k4.dq);
        nx.v = cur.v + H / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
        nx.S = cur.S + H / 6.0 * (k1.dS + 2.0 * k2.dS + 2.0 * k3.dS + k4.dS);
        nx.D = cur.D + H / 6.0 * (k1.dD + 2.0 * k2.dD + 2.0 * k3.dD + k4.dD);
        if (!nx.v.allFinite() || nx.v.norm() > kVelocityGuard)
            throw DomainError("memory", "velocity guard violated at t = " + std::to_string(nx.t));
        nx.a = delay_rhs(model, nx.q, nx.v, delayed(nx.t));
        nodes.push_back(nx);
        record(nx);
        cur = nx;
    }
    return traj;
}

TaylorReduced taylor_reduced_rhs(const DdeModel& model) {
    return {model.m_b + model.e * model.e / (6.0 * M_PI * model.R), model.e * model.e / (6.0 * M_PI)};
}

LdModel taylor_reduced_model(const DdeModel& model) {
    const TaylorReduced t = taylor_reduced_rhs(model);
    return LdModel(MassModel::Relativistic, ChargeModel::point(model.e, t.mass), 1.0, model.field);
}

}  // namespace radreact
