#pragma once

#include <array>
#include <complex>

#include "radreact/fields.hpp"
#include "radreact/ode.hpp"
#include "radreact/soliton.hpp"
#include "radreact/trajectory.hpp"
#include "radreact/units.hpp"

namespace radreact {

// SemiRelAbraham uses the soliton mass m(v); Relativistic uses m0 gamma kappa(v).
enum class MassModel { SemiRelAbraham, Relativistic };
std::string to_string(MassModel m);
MassModel mass_model_from_string(const std::string& s);

struct LdModel {
    MassModel mass_model = MassModel::Relativistic;
    ChargeModel charge = ChargeModel::point(1.0, 1.0);
    double epsilon = 1.0;
    FieldMap field;

    LdModel(MassModel mm, ChargeModel c, double eps, FieldMap f);
    // eps * e^2/(6 pi)
    double coupling() const { return epsilon * charge.k(); }
};

// Largest admissible speed; beyond it the equations refuse to evaluate.
inline constexpr double kVelocityGuard = 1.0 - 1e-9;
void check_velocity(const Vec3& v, const char* module);

MassMatrix mass_matrix(const LdModel& model, const Vec3& v);
Vec3 lorentz_force(const LdModel& model, const Vec3& q, const Vec3& v);
// Zeroth-order manifold h(q, v) = m(v)^{-1} e (E + v x B).
Vec3 manifold_acceleration(const LdModel& model, const Vec3& q, const Vec3& v);
// H = E_s(v) + e phi (Abraham) or m0 gamma + e phi (relativistic).
double mechanical_energy(const LdModel& model, const Vec3& q, const Vec3& v);
// G = H - eps k gamma^4 (v.a).
double schott_energy(const LdModel& model, const JetState& s);
// eps k [gamma^4 a^2 + gamma^6 (v.a)^2].
double radiated_power(const LdModel& model, const Vec3& v, const Vec3& a);

struct JetDerivative {
    Vec3 v, a, jerk;
};
JetDerivative ld_rhs(const LdModel& model, const JetState& s);

struct LdControls : IntegratorControls {
    bool detect_runaway = true;
    double runaway_factor = 10.0;
    int runaway_steps = 3;
    double a_floor = 0.0;  // 0: 1e-12 / (eps beta)
};

Trajectory integrate_forward(const LdModel& model, const JetState& s0, double t0, double t1,
                             const LdControls& controls = {});
// Seeds a(T) = h(q_T, v_T) and integrates from T down to 0; the returned
// trajectory is ordered forward in time.
Trajectory integrate_backward(const LdModel& model, const Vec3& qT, const Vec3& vT, double T,
                              const IntegratorControls& controls = {});

// Roots of ek z^3 - z^2 - w0^2 = 0: the two stable roots first (ordered by
// imaginary part), the runaway root last.
std::array<std::complex<double>, 3> linearized_oscillator_roots(double omega0, double ek);

}  // namespace radreact
