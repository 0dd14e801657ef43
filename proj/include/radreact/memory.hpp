#pragma once

#include <functional>

#include "radreact/fields.hpp"
#include "radreact/lorentz_dirac.hpp"
#include "radreact/trajectory.hpp"
#include "radreact/units.hpp"

namespace radreact {

// Self-force kernel of a rigid charge: W_t(x) = |x|^{-1} (h(|x| + t) - h(|x| - t)).
class MemoryKernel {
public:
    MemoryKernel(double e, FormFactor form);

    double h(double w) const;
    double dh(double w) const;
    double W(double t, const Vec3& x) const;
    double radius() const { return form_.radius; }
    const FormFactor& form() const { return form_; }
    double charge() const { return e_; }

private:
    double e_;
    FormFactor form_;
};

double kernel_h(const MemoryKernel& kernel, double w);

// Velocity history on [-2R, 0] plus q(0).
struct HistoryFunction {
    std::function<Vec3(double)> v;
    Vec3 q0 = Vec3::Zero();

    static HistoryFunction constant(const Vec3& v0, const Vec3& q0 = Vec3::Zero());
};

// Charged sphere of radius R and bare mass m_b in a static external field.
struct DdeModel {
    double e;
    double m_b;
    double R;
    FieldMap field;

    DdeModel(double e, double m_b, double R, FieldMap field);
    // Sphere-shell charge model; R from the form factor and m_b from the model.
    static DdeModel from_charge(const ChargeModel& charge, FieldMap field);
    // e^2 / (12 pi R^2)
    double delay_coefficient() const { return e * e / (12.0 * M_PI * R * R); }
};

Vec3 delay_rhs(const DdeModel& model, const Vec3& q, const Vec3& v, const Vec3& v_delayed);

struct DdeControls {
    int substeps_per_radius = 8;  // substep = R / substeps_per_radius
};

// Method of steps with RK4 substeps and cubic Hermite history. Samples carry
// energy = (1/2) m_b v^2 + e phi, schott = energy + (e^2/24 pi R^2) int_{t-2R}^t v^2
// (non-increasing), radiated = cumulative dissipation, so schott + radiated
// is constant along exact solutions.
Trajectory integrate_dde(const DdeModel& model, const HistoryFunction& history, double t1,
                         const DdeControls& controls = {});

struct TaylorReduced {
    double mass;              // m_b + e^2/(6 pi R)
    double jerk_coefficient;  // e^2/(6 pi)
};
TaylorReduced taylor_reduced_rhs(const DdeModel& model);
// Point-charge Lorentz-Dirac model with the renormalised mass, for use with
// the lorentz_dirac integrators in the small-velocity regime.
LdModel taylor_reduced_model(const DdeModel& model);

}  // namespace radreact
