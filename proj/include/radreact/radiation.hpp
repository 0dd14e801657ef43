#pragma once

#include <limits>
#include <memory>
#include <vector>

#include "radreact/trajectory.hpp"
#include "radreact/units.hpp"

namespace radreact {

// Prescribed world line t -> (q, v, a) with a declared speed bound v_bar < 1.
class WorldLine {
public:
    virtual ~WorldLine() = default;
    virtual JetState at(double t) const = 0;
    virtual double speed_bound() const = 0;
    // Last time at which the line may be evaluated.
    virtual double t_end() const { return std::numeric_limits<double>::infinity(); }
};

std::shared_ptr<const WorldLine> static_line(const Vec3& q0);
std::shared_ptr<const WorldLine> uniform_line(const Vec3& q0, const Vec3& v);
// Circle of the given radius in the x1-x2 plane, angular velocity omega.
std::shared_ptr<const WorldLine> circular_line(const Vec3& center, double radius, double omega, double phase = 0.0);

// Dense past trajectory with straight-line prehistory before the first sample.
// Samples must be appended in increasing time; evaluation past the last
// sample is an error.
class HistoryBuffer : public WorldLine {
public:
    explicit HistoryBuffer(double speed_bound);
    HistoryBuffer(const Trajectory& traj, double speed_bound);

    void append(const TrajectorySample& s);
    JetState at(double t) const override;
    double speed_bound() const override { return v_bar_; }
    double t_last() const { return traj_.samples.back().t; }
    double t_end() const override { return traj_.samples.empty() ? -std::numeric_limits<double>::infinity() : t_last(); }
    std::size_t size() const { return traj_.samples.size(); }

private:
    Trajectory traj_;
    double v_bar_;
};

std::shared_ptr<const WorldLine> trajectory_line(const Trajectory& traj, double speed_bound);

struct RetardedSolveInfo {
    int iterations = 0;
    std::vector<double> corrections;  // |t_{n+1} - t_n| of the fixed-point sweep
};

// t_ret = t - |x - q(t_ret)|: fixed-point iteration, then one Newton step.
double retarded_time(const WorldLine& line, const Vec3& x, double t, RetardedSolveInfo* info = nullptr);

struct LwFields {
    Vec3 E, B;
    Vec3 E_near, E_far;  // parts falling off as |x-q|^-2 and |x-q|^-1
    double t_ret;
    Vec3 n;  // unit vector from q(t_ret) to x
};
LwFields lw_fields(const WorldLine& line, double e, const Vec3& x, double t);

// -(e/4 pi) [(1 - w.v)^-1 a + (1 - w.v)^-2 (w.a)(v - w)]
Vec3 far_field_bracket(double e, const Vec3& omega, const Vec3& v, const Vec3& a);
// (e/4 pi) (1 - w.v)^-2 w x ((w - v) x a)
Vec3 far_field_bracket_rearranged(double e, const Vec3& omega, const Vec3& v, const Vec3& a);
// lim R E(q(t) + R w, t + R) for the point charge: the bracket times the
// Jacobian (1 - w.v)^-1, evaluated at the retarded argument
// t_r = t - w.(q(t) - q(t_r)).
Vec3 far_field_amplitude(const WorldLine& line, double e, const Vec3& omega, double t);

// (e^2/6 pi) [gamma^4 a^2 + gamma^6 (v.a)^2]
double larmor_power(double e, const Vec3& v, const Vec3& a);
// (e^2/6 pi) gamma^6 [a^2 - (v x a)^2]
double larmor_power_cross_form(double e, const Vec3& v, const Vec3& a);

// Product Gauss-Legendre x trapezoid rule on the unit sphere.
struct SphereRule {
    std::vector<Vec3> nodes;
    std::vector<double> weights;
    // n Legendre nodes in cos(theta) about `axis`, 2n azimuthal nodes.
    static SphereRule product(int n, const Vec3& axis = Vec3::UnitZ());
    // Polar nodes mapped by the aberration of a boost with the given speed
    // along axis; concentrates nodes in the forward radiation cone.
    static SphereRule boosted(int n, const Vec3& axis, double speed);
};

// int dOmega (1 - w.v) |E_inf(w)|^2 with E_inf the point-charge far field at
// the emission state (v, a). Boosted rules along v; the order doubles from 8
// until the relative change is below rel_tol.
double angular_power(double e, const Vec3& v, const Vec3& a, double rel_tol = 1e-10);
double angular_power_fixed(double e, const Vec3& v, const Vec3& a, const SphereRule& rule);

struct RadiatedEnergy {
    double angular;  // time integral of angular_power
    double closed;   // time integral of larmor_power
};
RadiatedEnergy radiated_energy(const WorldLine& line, double e, double t0, double t1);
// Over a stored trajectory, interval by interval between samples.
RadiatedEnergy radiated_energy(const Trajectory& traj, double e);

}  // namespace radreact
