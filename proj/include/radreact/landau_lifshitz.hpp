#pragma once

#include <functional>

#include "radreact/lorentz_dirac.hpp"

namespace radreact {

using LlModel = LdModel;

// Acceleration on the critical manifold. Relativistic: the explicit
// three-vector Landau-Lifshitz force. SemiRelAbraham: substitution form with
// h = m(v)^{-1} F.
Vec3 ll_acceleration(const LlModel& model, const Vec3& q, const Vec3& v);
// The substitution construction for either mass model: differentiate the
// unperturbed equation along the flow and insert it in the radiation term.
Vec3 ll_acceleration_substitution(const LlModel& model, const Vec3& q, const Vec3& v);

struct LlDerivative {
    Vec3 v, a;
};
LlDerivative ll_rhs(const LlModel& model, const Vec3& q, const Vec3& v);

Trajectory integrate_ll(const LlModel& model, const Vec3& q0, const Vec3& v0, double t0, double t1,
                        const IntegratorControls& controls = {});

// Closed forms for a uniform magnetic field with in-plane motion.
class ConstantBClosedForms {
public:
    ConstantBClosedForms(const ChargeModel& charge, double B, double gamma0, double epsilon = 1.0);

    double omega_c() const { return omega_c_; }
    double beta() const { return beta_; }
    // beta omega_c^2, the decay rate of gamma^2 - 1 near rest.
    double rate() const { return beta_ * omega_c_ * omega_c_; }
    double gamma0() const { return gamma0_; }
    double initial_speed() const { return std::sqrt(1.0 - 1.0 / (gamma0_ * gamma0_)); }
    double initial_radius() const { return initial_speed() * gamma0_ / omega_c_; }

    double gamma_of_t(double t) const;
    double speed_of_angle(double phi) const;     // u(phi) = u0 e^{-beta omega_c phi}
    double radius_of_t(double t) const;          // with r0 = u0 gamma0 / omega_c
    double radius_ultrarel(double t) const;      // r0 / (1 + gamma0 beta omega_c^2 t)

    // Time at which radius_of_t / r0 (resp. radius_ultrarel / r0) equals ratio.
    double time_to_radius_ratio(double ratio) const;
    double time_to_radius_ratio_ultrarel(double ratio) const;
    // Revolutions completed by time t: adaptive quadrature of omega_c / (2 pi gamma_t).
    double revolutions(double t) const;

private:
    double omega_c_, beta_, gamma0_;
};

// Central potential phi(r), B = 0: explicit relativistic Landau-Lifshitz
// acceleration and the angular momentum rate dL/dt = lambda L.
Vec3 central_potential_rhs(const LlModel& model, const RadialProfile& profile, const Vec3& q, const Vec3& v);
Vec3 angular_momentum_decay(const LlModel& model, const RadialProfile& profile, const Vec3& q, const Vec3& v);

// One-dimensional motion along x1 in phi(x1).
double axial_1d_rhs(const LlModel& model, const AxialProfile& profile, double x, double v);
// The conserved-up-to-loss quantity m0 gamma + e phi + eps k (e/m0) gamma phi' v
// and its exact rate of change along the flow.
double axial_balance_energy(const LlModel& model, const AxialProfile& profile, double x, double v);
double axial_balance_rate(const LlModel& model, const AxialProfile& profile, double x, double v);

}  // namespace radreact
