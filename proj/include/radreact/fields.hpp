#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "radreact/types.hpp"

namespace radreact {

struct FieldValue {
    Vec3 E = Vec3::Zero();
    Vec3 B = Vec3::Zero();
};

// Jacobians, dE(i, j) = dE_i / dx_j.
struct FieldGradient {
    Mat3 dE = Mat3::Zero();
    Mat3 dB = Mat3::Zero();
};

class FieldSource {
public:
    virtual ~FieldSource() = default;
    virtual FieldValue value(const Vec3& x) const = 0;
    virtual FieldGradient gradient(const Vec3& x) const = 0;
    // Electrostatic potential phi with E = -grad phi (magnetic parts contribute 0).
    virtual double potential(const Vec3& x) const = 0;
    virtual bool analytic_gradient() const { return true; }
};

// Static external field. Cheap to copy; the evaluator is shared and immutable.
class FieldMap {
public:
    FieldMap();
    explicit FieldMap(std::shared_ptr<const FieldSource> src) : src_(std::move(src)) {}

    FieldValue value(const Vec3& x) const { return src_->value(x); }
    FieldGradient gradient(const Vec3& x) const { return src_->gradient(x); }
    double potential(const Vec3& x) const { return src_->potential(x); }
    bool analytic_gradient() const { return src_->analytic_gradient(); }

private:
    std::shared_ptr<const FieldSource> src_;
};

// Central differences with h = max(1e-6, 1e-6 |x|).
FieldGradient finite_difference_gradient(const FieldMap& map, const Vec3& x);

FieldMap zero_field();
FieldMap uniform_magnetic(double B, const Vec3& axis);
FieldMap uniform_electric(const Vec3& E);

// e phi = (1/2) m wz^2 (-x1^2/2 - x2^2/2 + x3^2).
FieldMap quadrupole(double e, double m, double omega_z);
FieldMap penning_trap(double e, double m, double omega_z, double B);

// Radial profile phi(r) with two derivatives. If phi'(r)/r has a finite limit
// at r = 0 (e.g. harmonic), declare it to allow evaluation at the origin.
struct RadialProfile {
    std::function<double(double)> phi, dphi, d2phi;
    std::optional<double> dphi_over_r_at_zero;
};
RadialProfile harmonic_profile(double e, double m, double omega0);
RadialProfile constant_profile(double value);
FieldMap central_potential(RadialProfile profile);

struct AxialProfile {
    std::function<double(double)> phi, dphi, d2phi;
};
AxialProfile linear_axial_profile(double a0);
AxialProfile harmonic_axial_profile(double e, double m, double omega0);
// phi = scale * (x^2 - 1)^2
AxialProfile double_well_profile(double scale);
FieldMap axial_1d(AxialProfile profile);

FieldMap superpose(const std::vector<FieldMap>& maps);

// Field given only by values; gradients come from central differences.
FieldMap from_callable(std::function<FieldValue(const Vec3&)> f, std::function<double(const Vec3&)> phi = nullptr);

}  // namespace radreact
