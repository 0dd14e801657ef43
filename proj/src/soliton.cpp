#include "radreact/soliton.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

namespace radreact {

namespace sd = soliton_detail;

namespace {

double checked_speed(const Vec3& v) {
    const double s = v.norm();
    if (!(s < 1.0)) throw DomainError("soliton", "velocity must satisfy |v| < 1");
    return s;
}

Vec3 unit_or_zero(const Vec3& v) {
    const double s = v.norm();
    return s > 0.0 ? Vec3(v / s) : Vec3(Vec3::Zero());
}

// Total momentum magnitude as a function of rapidity w = atanh(s).
double momentum_scalar(const ChargeModel& m, double s) {
    const double g = 1.0 / std::sqrt(1.0 - s * s);
    return s * (m.m_b() * g + m.m_e() * sd::p_over_s(s));
}

double momentum_scalar_derivative(const ChargeModel& m, double s) {
    const double g = 1.0 / std::sqrt(1.0 - s * s);
    return m.m_b() * g * g * g + m.m_e() * sd::p_prime(s);
}

double magnitude(double x) { return std::abs(x); }
double magnitude(const Vec3& x) { return x.norm(); }

// Orthonormal frame with the given polar axis.
void frame(const Vec3& axis, Vec3& e1, Vec3& e2) {
    const Vec3 t = std::abs(axis[0]) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    e1 = axis.cross(t).normalized();
    e2 = axis.cross(e1);
}

// Integral over the unit sphere of f(omega) with polar axis p. The polar
// angle is integrated adaptively on [0, theta_max], the azimuth by the
// trapezoid rule (spectrally accurate for periodic integrands) with doubling.
template <class F, class R>
R sphere_integral(const Vec3& p, double theta_max, F&& f, R zero, bool endpoint_singular) {
    Vec3 e1, e2;
    frame(p, e1, e2);
    auto azimuthal = [&](double theta) {
        const double st = std::sin(theta), ct = std::cos(theta);
        auto trap = [&](int n) {
            R acc = zero;
            for (int k = 0; k < n; ++k) {
                const double ph = 2.0 * M_PI * (k + 0.5) / n;
                const Vec3 w = ct * p + st * (std::cos(ph) * e1 + std::sin(ph) * e2);
                acc += f(w, theta);
            }
            return R(acc * (2.0 * M_PI / n) * st);
        };
        int n = 16;
        R prev = trap(n);
        for (;;) {
            n *= 2;
            R cur = trap(n);
            const double scale = magnitude(cur) + 1e-300;
            if (magnitude(R(cur - prev)) <= 1e-13 * scale || n >= 4096) return cur;
            prev = cur;
        }
    };
    if (endpoint_singular) {
        boost::math::quadrature::tanh_sinh<double> ts;
        if constexpr (std::is_same_v<R, double>) {
            return ts.integrate(azimuthal, 0.0, theta_max, 1e-11);
        } else {
            R out = zero;
            for (int i = 0; i < 3; ++i)
                out[i] = ts.integrate([&](double th) { return azimuthal(th)[i]; }, 0.0, theta_max, 1e-11);
            return out;
        }
    }
    if constexpr (std::is_same_v<R, double>) {
        return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(azimuthal, 0.0, theta_max, 20, 1e-11);
    } else {
        R out = zero;
        for (int i = 0; i < 3; ++i)
            out[i] = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                [&](double th) { return azimuthal(th)[i]; }, 0.0, theta_max, 20, 1e-11);
        return out;
    }
}

}  // namespace

Vec3 momentum_of_velocity(const ChargeModel& model, const Vec3& v) {
    const double s = checked_speed(v);
    const double g = 1.0 / std::sqrt(1.0 - s * s);
    return v * (model.m_b() * g + model.m_e() * sd::p_over_s(s));
}

double energy_of_velocity(const ChargeModel& model, const Vec3& v) {
    const double s = checked_speed(v);
    const double g = 1.0 / std::sqrt(1.0 - s * s);
    return model.m_b() * g + model.m_e() * sd::energy(s);
}

EnergyMomentum energy_momentum(const ChargeModel& model, const Vec3& v) {
    return {energy_of_velocity(model, v), momentum_of_velocity(model, v), v};
}

Vec3 velocity_of_momentum(const ChargeModel& model, const Vec3& P) {
    const double p = P.norm();
    if (!std::isfinite(p)) throw DomainError("soliton", "momentum must be finite");
    if (p == 0.0) return Vec3::Zero();
    // Monotone root in rapidity w, s = tanh(w): safeguarded Newton.
    double lo = 0.0, hi = 1.0;
    while (momentum_scalar(model, std::tanh(hi)) < p) {
        lo = hi;
        hi *= 2.0;
        if (hi > 40.0) break;
    }
    double w = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double s = std::tanh(w);
        const double f = momentum_scalar(model, s) - p;
        if (f > 0.0) hi = w;
        else lo = w;
        const double c = 1.0 - s * s;
        const double df = momentum_scalar_derivative(model, s) * c;
        double wn = w - f / df;
        if (!(wn > lo && wn < hi)) wn = 0.5 * (lo + hi);
        if (std::abs(wn - w) <= 1e-15 * std::max(1.0, w)) {
            w = wn;
            break;
        }
        w = wn;
    }
    return std::tanh(w) * P / p;
}

double effective_energy(const ChargeModel& model, const Vec3& P) {
    return energy_of_velocity(model, velocity_of_momentum(model, P));
}

MassMatrix field_mass_matrix(const ChargeModel& model, const Vec3& v) {
    const double s = checked_speed(v);
    const double me = model.m_e();
    MassMatrix m;
    m.a = me * sd::p_over_s(s);
    m.b = me * sd::d_coeff(s) * s * s;
    m.n = unit_or_zero(v);
    return m;
}

MassMatrix effective_mass_matrix(const ChargeModel& model, const Vec3& v) {
    const double s = checked_speed(v);
    double A, C;
    sd::mass_coefficients(model.m_b(), model.m_e(), s, A, C);
    return {A, C * s * s, unit_or_zero(v)};
}

MassMatrix relativistic_mass_matrix(double m0, const Vec3& v) {
    const double s = checked_speed(v);
    const double g = 1.0 / std::sqrt(1.0 - s * s);
    return {m0 * g, m0 * g * g * g * s * s, unit_or_zero(v)};
}

Mat3 effective_mass_derivative(const ChargeModel& model, const Vec3& v, const Vec3& w) {
    const double s = checked_speed(v);
    double A, C;
    sd::mass_coefficients(model.m_b(), model.m_e(), s, A, C);
    Mat3 out = C * (w * v.transpose() + v * w.transpose());
    if (s > 0.0) {
        const double h = 1e-30;
        std::complex<double> Ac, Cc;
        sd::mass_coefficients(model.m_b(), model.m_e(), std::complex<double>(s, h), Ac, Cc);
        const double ds = v.dot(w) / s;
        out += (Ac.imag() / h) * ds * Mat3::Identity() + (Cc.imag() / h) * ds * v * v.transpose();
    }
    return out;
}

namespace {

double quad_form(double ginv2, const Vec3& v, const Vec3& d) {
    const double vd = v.dot(d);
    return ginv2 * d.squaredNorm() + vd * vd;
}

}  // namespace

double soliton_potential(const ChargeModel& model, const Vec3& v, const Vec3& x) {
    const double s = checked_speed(v);
    const double ginv2 = 1.0 - s * s;
    const double e = model.e();
    const FormFactor& ff = model.form();
    const double R = ff.radius;
    const double r = x.norm();
    switch (ff.kind) {
        case FormKind::PointLimit: {
            const double Q = quad_form(ginv2, v, x);
            if (Q == 0.0) throw DomainError("soliton", "potential evaluated on the point charge");
            return e / (4.0 * M_PI * std::sqrt(Q));
        }
        case FormKind::SphereShell: {
            const Vec3 p = r > 0.0 ? Vec3(x / r) : Vec3(Vec3::UnitZ());
            auto f = [&](const Vec3& w, double) { return 1.0 / std::sqrt(quad_form(ginv2, v, x - R * w)); };
            return e / (16.0 * M_PI * M_PI) * sphere_integral(p, M_PI, f, 0.0, false);
        }
        case FormKind::UniformBall: {
            const double rho0 = 3.0 * e / (4.0 * M_PI * R * R * R);
            // Rays from x along w (polar axis towards the centre): the radial
            // integral of rho * kernel is elementary.
            const Vec3 p = r > 0.0 ? Vec3(-x / r) : Vec3(Vec3::UnitZ());
            if (r <= R) {
                auto f = [&](const Vec3& w, double th) {
                    const double st = std::sin(th), ct = std::cos(th);
                    const double dmax = r * ct + std::sqrt(R * R - r * r * st * st);
                    const double vw = v.dot(w);
                    return dmax * dmax / (2.0 * std::sqrt(ginv2 + vw * vw));
                };
                return rho0 / (4.0 * M_PI) * sphere_integral(p, M_PI, f, 0.0, false);
            }
            const double tmax = std::asin(R / r);
            auto f = [&](const Vec3& w, double th) {
                const double st = std::sin(th), ct = std::cos(th);
                const double S = std::sqrt(std::max(0.0, R * R - r * r * st * st));
                const double vw = v.dot(w);
                return 2.0 * r * ct * S / std::sqrt(ginv2 + vw * vw);
            };
            return rho0 / (4.0 * M_PI) * sphere_integral(p, tmax, f, 0.0, true);
        }
    }
    return 0.0;
}

Vec3 soliton_potential_gradient(const ChargeModel& model, const Vec3& v, const Vec3& x) {
    const double s = checked_speed(v);
    const double ginv2 = 1.0 - s * s;
    const double e = model.e();
    const FormFactor& ff = model.form();
    const double R = ff.radius;
    const double r = x.norm();
    const Vec3 p = r > 0.0 ? Vec3(x / r) : Vec3(Vec3::UnitZ());
    switch (ff.kind) {
        case FormKind::PointLimit: {
            const double Q = quad_form(ginv2, v, x);
            if (Q == 0.0) throw DomainError("soliton", "potential evaluated on the point charge");
            return -e / (4.0 * M_PI) * (ginv2 * x + v * v.dot(x)) / (Q * std::sqrt(Q));
        }
        case FormKind::SphereShell: {
            auto f = [&](const Vec3& w, double) -> Vec3 {
                const Vec3 d = x - R * w;
                const double Q = quad_form(ginv2, v, d);
                return (ginv2 * d + v * v.dot(d)) / (Q * std::sqrt(Q));
            };
            return -e / (16.0 * M_PI * M_PI) * sphere_integral(p, M_PI, f, Vec3(Vec3::Zero()), false);
        }
        case FormKind::UniformBall: {
            // grad phi = int K(x - y) grad rho(y) dy, and grad rho is a surface
            // layer -rho0 n delta(|y| - R).
            const double rho0 = 3.0 * e / (4.0 * M_PI * R * R * R);
            auto f = [&](const Vec3& w, double) -> Vec3 {
                return w / std::sqrt(quad_form(ginv2, v, x - R * w));
            };
            return -rho0 * R * R / (4.0 * M_PI) * sphere_integral(p, M_PI, f, Vec3(Vec3::Zero()), false);
        }
    }
    return Vec3::Zero();
}

FieldValue soliton_fields(const ChargeModel& model, const Vec3& v, const Vec3& x) {
    const Vec3 g = soliton_potential_gradient(model, v, x);
    return {-g + v * v.dot(g), -v.cross(g)};
}

HistoricalEnergyMomenta historical_energy_momenta(const ChargeModel& model, const Vec3& v) {
    const double s = checked_speed(v);
    const double g = 1.0 / std::sqrt(1.0 - s * s);
    const double mb = model.m_b(), me = model.m_e();
    HistoricalEnergyMomenta h;
    h.lorentz_four_momentum << (mb + me) * g, (mb + me) * g * v;
    h.E_L = mb * g + me * g * (1.0 + s * s / 3.0);
    h.P_L = (mb + 4.0 / 3.0 * me) * g * v;
    return h;
}

}  // namespace radreact
