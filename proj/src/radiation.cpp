#include "radreact/radiation.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>
#include <array>
#include <cmath>
#include <mutex>

namespace radreact {

namespace {

class StaticLine : public WorldLine {
public:
    explicit StaticLine(const Vec3& q) : q_(q) {}
    JetState at(double) const override { return {q_, Vec3::Zero(), Vec3::Zero()}; }
    double speed_bound() const override { return 0.0; }

private:
    Vec3 q_;
};

class UniformLine : public WorldLine {
public:
    UniformLine(const Vec3& q, const Vec3& v) : q_(q), v_(v) {}
    JetState at(double t) const override { return {q_ + t * v_, v_, Vec3::Zero()}; }
    double speed_bound() const override { return v_.norm(); }

private:
    Vec3 q_, v_;
};

class CircularLine : public WorldLine {
public:
    CircularLine(const Vec3& c, double r, double w, double p) : c_(c), r_(r), w_(w), p_(p) {}
    JetState at(double t) const override {
        const double th = w_ * t + p_;
        const double cs = std::cos(th), sn = std::sin(th);
        return {c_ + r_ * Vec3(cs, sn, 0.0), r_ * w_ * Vec3(-sn, cs, 0.0), -r_ * w_ * w_ * Vec3(cs, sn, 0.0)};
    }
    double speed_bound() const override { return std::abs(r_ * w_); }

private:
    Vec3 c_;
    double r_, w_, p_;
};

void check_bound(double v_bar) {
    if (!(v_bar >= 0.0 && v_bar < 1.0)) throw DomainError("radiation", "world line speed bound must be in [0, 1)");
}

}  // namespace

std::shared_ptr<const WorldLine> static_line(const Vec3& q0) { return std::make_shared<StaticLine>(q0); }

std::shared_ptr<const WorldLine> uniform_line(const Vec3& q0, const Vec3& v) {
    check_bound(v.norm());
    return std::make_shared<UniformLine>(q0, v);
}

std::shared_ptr<const WorldLine> circular_line(const Vec3& center, double radius, double omega, double phase) {
    check_bound(std::abs(radius * omega));
    return std::make_shared<CircularLine>(center, radius, omega, phase);
}

HistoryBuffer::HistoryBuffer(double speed_bound) : v_bar_(speed_bound) { check_bound(speed_bound); }

HistoryBuffer::HistoryBuffer(const Trajectory& traj, double speed_bound) : traj_(traj), v_bar_(speed_bound) {
    check_bound(speed_bound);
    if (traj_.samples.empty()) throw DomainError("radiation", "empty trajectory");
}

void HistoryBuffer::append(const TrajectorySample& s) {
    if (!traj_.samples.empty() && !(s.t > traj_.samples.back().t))
        throw DomainError("radiation", "history samples must increase in time");
    traj_.samples.push_back(s);
}

JetState HistoryBuffer::at(double t) const {
    if (traj_.samples.empty()) throw DomainError("radiation", "empty history");
    const TrajectorySample& first = traj_.samples.front();
    if (t <= first.t) return {first.s.q + (t - first.t) * first.s.v, first.s.v, Vec3::Zero()};
    const double tl = traj_.samples.back().t;
    if (t > tl + 1e-12 * (1.0 + std::abs(tl))) throw DomainError("radiation", "world line evaluated past its end");
    return traj_.at(std::min(t, tl));
}

std::shared_ptr<const WorldLine> trajectory_line(const Trajectory& traj, double speed_bound) {
    return std::make_shared<HistoryBuffer>(traj, speed_bound);
}

double retarded_time(const WorldLine& line, const Vec3& x, double t, RetardedSolveInfo* info) {
    const double tol = 1e-12 * (1.0 + std::abs(t));
    double tr = t - (x - line.at(std::min(t, line.t_end())).q).norm();
    int it = 0;
    for (; it < 10000; ++it) {
        const double next = t - (x - line.at(tr).q).norm();
        const double d = std::abs(next - tr);
        if (info) info->corrections.push_back(d);
        tr = next;
        if (d <= tol) break;
    }
    if (info) info->iterations = it + 1;
    const JetState s = line.at(tr);
    const Vec3 r = x - s.q;
    const double dist = r.norm();
    if (!(dist > 0.0)) throw DomainError("radiation", "observer on the world line (Coulomb singularity)");
    const double g = tr - t + dist;
    const double dg = 1.0 - r.dot(s.v) / dist;
    return tr - g / dg;
}

LwFields lw_fields(const WorldLine& line, double e, const Vec3& x, double t) {
    LwFields out;
    out.t_ret = retarded_time(line, x, t);
    const JetState s = line.at(out.t_ret);
    const Vec3 r = x - s.q;
    const double dist = r.norm();
    if (!(dist > 0.0)) throw DomainError("radiation", "observer on the world line (Coulomb singularity)");
    const Vec3 n = r / dist;
    const double k = 1.0 - s.v.dot(n);
    const double k3 = k * k * k;
    const double c = e / (4.0 * M_PI);
    out.n = n;
    out.E_near = c * (1.0 - s.v.squaredNorm()) * (n - s.v) / (k3 * dist * dist);
    out.E_far = c * n.cross((n - s.v).cross(s.a)) / (k3 * dist);
    out.E = out.E_near + out.E_far;
    out.B = n.cross(out.E);
    return out;
}

Vec3 far_field_bracket(double e, const Vec3& omega, const Vec3& v, const Vec3& a) {
    const double k = 1.0 - omega.dot(v);
    return -e / (4.0 * M_PI) * (a / k + omega.dot(a) * (v - omega) / (k * k));
}

Vec3 far_field_bracket_rearranged(double e, const Vec3& omega, const Vec3& v, const Vec3& a) {
    const double k = 1.0 - omega.dot(v);
    return e / (4.0 * M_PI) * omega.cross((omega - v).cross(a)) / (k * k);
}

Vec3 far_field_amplitude(const WorldLine& line, double e, const Vec3& omega, double t) {
    if (std::abs(omega.norm() - 1.0) > 1e-12) throw DomainError("radiation", "direction must be a unit vector");
    const Vec3 qt = line.at(t).q;
    double tr = t;
    const double tol = 1e-13 * (1.0 + std::abs(t));
    for (int it = 0; it < 10000; ++it) {
        const double next = t - omega.dot(qt - line.at(tr).q);
        const double d = std::abs(next - tr);
        tr = next;
        if (d <= tol) break;
    }
    const JetState s = line.at(tr);
    return far_field_bracket(e, omega, s.v, s.a) / (1.0 - omega.dot(s.v));
}

double larmor_power(double e, const Vec3& v, const Vec3& a) {
    const double g2 = 1.0 / (1.0 - v.squaredNorm());
    const double va = v.dot(a);
    return e * e / (6.0 * M_PI) * (g2 * g2 * a.squaredNorm() + g2 * g2 * g2 * va * va);
}

double larmor_power_cross_form(double e, const Vec3& v, const Vec3& a) {
    const double g2 = 1.0 / (1.0 - v.squaredNorm());
    return e * e / (6.0 * M_PI) * g2 * g2 * g2 * (a.squaredNorm() - v.cross(a).squaredNorm());
}

namespace {

struct GaussLegendre {
    std::vector<double> x, w;
};

GaussLegendre gauss_legendre(int n) {
    GaussLegendre g;
    for (double r : boost::math::legendre_p_zeros<double>(n)) {
        const double dp = boost::math::legendre_p_prime(n, r);
        const double w = 2.0 / ((1.0 - r * r) * dp * dp);
        g.x.push_back(r);
        g.w.push_back(w);
        if (r != 0.0) {
            g.x.push_back(-r);
            g.w.push_back(w);
        }
    }
    return g;
}

// Nodes for n = 8, 16, ..., 512 are computed once.
const GaussLegendre& cached_gauss_legendre(int n) {
    constexpr int kLevels = 7;
    static std::array<std::once_flag, kLevels> flags;
    static std::array<GaussLegendre, kLevels> rules;
    for (int level = 0; level < kLevels; ++level)
        if (n == (8 << level)) {
            std::call_once(flags[level], [&] { rules[level] = gauss_legendre(n); });
            return rules[level];
        }
    thread_local GaussLegendre other;
    other = gauss_legendre(n);
    return other;
}

SphereRule product_rule(int n, const Vec3& axis, double boost) {
    if (n < 1) throw DomainError("radiation", "sphere rule needs n >= 1");
    const Vec3 z = axis.normalized();
    const Vec3 helper = std::abs(z.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 x = (helper - helper.dot(z) * z).normalized();
    const Vec3 y = z.cross(x);
    const GaussLegendre& g = cached_gauss_legendre(n);
    const int m = 2 * n;
    SphereRule rule;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        // Aberration map c = (c' + s)/(1 + s c'), dc = (1 - s^2)/(1 + s c')^2 dc'.
        const double d = 1.0 + boost * g.x[i];
        const double ct = (g.x[i] + boost) / d, st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        const double wt = g.w[i] * (1.0 - boost * boost) / (d * d);
        for (int j = 0; j < m; ++j) {
            const double ph = 2.0 * M_PI * j / m;
            rule.nodes.push_back(ct * z + st * (std::cos(ph) * x + std::sin(ph) * y));
            rule.weights.push_back(wt * 2.0 * M_PI / m);
        }
    }
    return rule;
}

}  // namespace

SphereRule SphereRule::product(int n, const Vec3& axis) { return product_rule(n, axis, 0.0); }

SphereRule SphereRule::boosted(int n, const Vec3& axis, double speed) {
    if (!(speed >= 0.0 && speed < 1.0)) throw DomainError("radiation", "boost speed must lie in [0, 1)");
    return product_rule(n, axis, speed);
}

double angular_power_fixed(double e, const Vec3& v, const Vec3& a, const SphereRule& rule) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const Vec3& w = rule.nodes[i];
        const double k = 1.0 - w.dot(v);
        const Vec3 E = far_field_bracket(e, w, v, a) / k;
        sum += rule.weights[i] * k * E.squaredNorm();
    }
    return sum;
}

double angular_power(double e, const Vec3& v, const Vec3& a, double rel_tol) {
    const double s = v.norm();
    if (!(s < 1.0)) throw DomainError("radiation", "|v| must be below 1");
    const Vec3 axis = s > 0.0 ? Vec3(v / s) : Vec3(Vec3::UnitZ());
    double prev = angular_power_fixed(e, v, a, SphereRule::boosted(8, axis, s));
    for (int n = 16; n <= 512; n *= 2) {
        const double cur = angular_power_fixed(e, v, a, SphereRule::boosted(n, axis, s));
        if (std::abs(cur - prev) <= rel_tol * std::abs(cur)) return cur;
        prev = cur;
    }
    return prev;
}

RadiatedEnergy radiated_energy(const WorldLine& line, double e, double t0, double t1) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    auto closed = [&](double t) {
        const JetState s = line.at(t);
        return larmor_power(e, s.v, s.a);
    };
    auto angular = [&](double t) {
        const JetState s = line.at(t);
        return angular_power(e, s.v, s.a, 1e-12);
    };
    return {GK::integrate(angular, t0, t1, 20, 1e-10), GK::integrate(closed, t0, t1, 20, 1e-10)};
}

RadiatedEnergy radiated_energy(const Trajectory& traj, double e) {
    // Piecewise smooth between samples: one fixed Kronrod rule per interval.
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    RadiatedEnergy out{0.0, 0.0};
    for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i) {
        const double a = traj.samples[i].t, b = traj.samples[i + 1].t;
        if (!(b > a)) continue;
        out.angular += GK::integrate([&](double t) {
            const JetState s = traj.at(t);
            return angular_power(e, s.v, s.a, 1e-12);
        }, a, b, 0);
        out.closed += GK::integrate([&](double t) {
            const JetState s = traj.at(t);
            return larmor_power(e, s.v, s.a);
        }, a, b, 0);
    }
    return out;
}

}  // namespace radreact
