#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "radreact/types.hpp"

namespace radreact {

// Kinematic jet (q, v, a) of a particle.
struct JetState {
    Vec3 q = Vec3::Zero();
    Vec3 v = Vec3::Zero();
    Vec3 a = Vec3::Zero();
};

struct TrajectorySample {
    double t = 0.0;
    JetState s;
    Vec3 jerk = Vec3::Constant(std::numeric_limits<double>::quiet_NaN());  // NaN when unknown
    double energy = 0.0;    // mechanical energy H
    double schott = 0.0;    // H - eps k gamma^4 (v.a)
    double radiated = 0.0;  // cumulative radiated energy
};

enum class Termination { Completed, RunawayDetected, CollisionHalt };
std::string to_string(Termination t);

struct Trajectory {
    std::vector<TrajectorySample> samples;
    Termination status = Termination::Completed;
    std::string message;
    std::optional<double> runaway_rate;  // fitted growth rate of |a - h| when a runaway was detected

    double t_begin() const { return samples.front().t; }
    double t_end() const { return samples.back().t; }
    const TrajectorySample& back() const { return samples.back(); }

    // Cubic Hermite interpolation: q from (q, v), v from (v, a), a from
    // (a, jerk) when the jerk is stored, linear otherwise.
    JetState at(double t) const;
    // Sample index i with samples[i].t <= t < samples[i+1].t (clamped).
    std::size_t locate(double t) const;
};

// Max |q_a(t) - q_b(t)| over the samples of a inside the common time range.
double max_position_deviation(const Trajectory& a, const Trajectory& b);

// Hermite cubic on [t0, t1] with values y0, y1 and slopes d0, d1.
Vec3 hermite(double t0, double t1, const Vec3& y0, const Vec3& y1, const Vec3& d0, const Vec3& d1, double t);
Vec3 hermite_derivative(double t0, double t1, const Vec3& y0, const Vec3& y1, const Vec3& d0, const Vec3& d1,
                        double t);

}  // namespace radreact
