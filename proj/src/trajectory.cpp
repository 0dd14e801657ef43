#include "radreact/trajectory.hpp"

#include <algorithm>

namespace radreact {

std::string to_string(Termination t) {
    switch (t) {
        case Termination::Completed: return "completed";
        case Termination::RunawayDetected: return "runaway_detected";
        case Termination::CollisionHalt: return "collision_halt";
    }
    return "?";
}

Vec3 hermite(double t0, double t1, const Vec3& y0, const Vec3& y1, const Vec3& d0, const Vec3& d1, double t) {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s, h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    return h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
}

Vec3 hermite_derivative(double t0, double t1, const Vec3& y0, const Vec3& y1, const Vec3& d0, const Vec3& d1,
                        double t) {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double s2 = s * s;
    const double g00 = 6 * s2 - 6 * s, g10 = 3 * s2 - 4 * s + 1, g01 = -6 * s2 + 6 * s, g11 = 3 * s2 - 2 * s;
    return (g00 * y0 + g01 * y1) / h + g10 * d0 + g11 * d1;
}

std::size_t Trajectory::locate(double t) const {
    if (samples.size() < 2) return 0;
    auto it = std::upper_bound(samples.begin(), samples.end(), t,
                               [](double x, const TrajectorySample& s) { return x < s.t; });
    std::size_t i = it == samples.begin() ? 0 : static_cast<std::size_t>(it - samples.begin()) - 1;
    return std::min(i, samples.size() - 2);
}

JetState Trajectory::at(double t) const {
    if (samples.empty()) throw DomainError("trajectory", "empty trajectory");
    if (samples.size() == 1) return samples.front().s;
    const std::size_t i = locate(t);
    const TrajectorySample& A = samples[i];
    const TrajectorySample& B = samples[i + 1];
    JetState out;
    out.q = hermite(A.t, B.t, A.s.q, B.s.q, A.s.v, B.s.v, t);
    out.v = hermite(A.t, B.t, A.s.v, B.s.v, A.s.a, B.s.a, t);
    if (A.jerk.allFinite() && B.jerk.allFinite()) {
        out.a = hermite(A.t, B.t, A.s.a, B.s.a, A.jerk, B.jerk, t);
    } else {
        const double w = (t - A.t) / (B.t - A.t);
        out.a = (1.0 - w) * A.s.a + w * B.s.a;
    }
    return out;
}

double max_position_deviation(const Trajectory& a, const Trajectory& b) {
    const double lo = std::max(a.t_begin(), b.t_begin()), hi = std::min(a.t_end(), b.t_end());
    double d = 0.0;
    for (const auto& s : a.samples)
        if (s.t >= lo && s.t <= hi) d = std::max(d, (s.s.q - b.at(s.t).q).norm());
    return d;
}

}  // namespace radreact
