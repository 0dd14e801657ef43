#include "radreact/units.hpp"

#include <cmath>

namespace radreact {

UnitSystem::UnitSystem(double length_unit_m, double mass_unit_kg)
    : length_unit_(length_unit_m), mass_unit_(mass_unit_kg) {
    if (!(length_unit_m > 0.0) || !(mass_unit_kg > 0.0))
        throw DomainError("units", "unit scales must be positive");
}

UnitSystem UnitSystem::electron_natural() { return UnitSystem(si::c * 1.0, si::m_e); }

double UnitSystem::scale(Quantity q) const {
    const double L = length_unit_;
    const double M = mass_unit_;
    const double T = time_unit();
    const double energy = M * si::c * si::c;
    const double charge = std::sqrt(si::eps0 * energy * L);
    switch (q) {
        case Quantity::Length: return L;
        case Quantity::Time: return T;
        case Quantity::Mass: return M;
        case Quantity::Energy: return energy;
        case Quantity::Velocity: return si::c;
        case Quantity::Acceleration: return si::c / T;
        case Quantity::Charge: return charge;
        case Quantity::ElectricField: return energy / (L * charge);
        case Quantity::MagneticField: return M / (T * charge);
        case Quantity::Frequency: return 1.0 / T;
        case Quantity::Potential: return energy / charge;
    }
    throw DomainError("units", "unknown quantity");
}

double FormFactor::self_energy(double e) const {
    switch (kind) {
        case FormKind::PointLimit: return 0.0;
        case FormKind::SphereShell: return e * e / (8.0 * M_PI * radius);
        case FormKind::UniformBall: return 3.0 * e * e / (20.0 * M_PI * radius);
    }
    return 0.0;
}

double FormFactor::spectral_density(double k) const {
    const double norm = 1.0 / std::pow(2.0 * M_PI, 3);
    const double x = k * radius;
    switch (kind) {
        case FormKind::PointLimit: return norm;
        case FormKind::SphereShell: {
            const double s = x < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
            return norm * s * s;
        }
        case FormKind::UniformBall: {
            double s;
            if (x < 1e-2) s = 1.0 - x * x / 10.0 + x * x * x * x / 280.0;
            else s = 3.0 * (std::sin(x) - x * std::cos(x)) / (x * x * x);
            return norm * s * s;
        }
    }
    return 0.0;
}

double FormFactor::density(double r) const {
    if (kind == FormKind::UniformBall && r <= radius) return 3.0 / (4.0 * M_PI * radius * radius * radius);
    return 0.0;
}

std::string to_string(FormKind k) {
    switch (k) {
        case FormKind::PointLimit: return "point";
        case FormKind::SphereShell: return "sphere";
        case FormKind::UniformBall: return "ball";
    }
    return "?";
}

FormKind form_kind_from_string(const std::string& s) {
    if (s == "point") return FormKind::PointLimit;
    if (s == "sphere") return FormKind::SphereShell;
    if (s == "ball") return FormKind::UniformBall;
    throw DomainError("units", "unknown form factor '" + s + "'");
}

ChargeModel::ChargeModel(double e, double m0, double m_b, FormFactor form)
    : e_(e), m0_(m0), m_b_(m_b), m_e_(form.self_energy(e)), beta_(e * e / (6.0 * M_PI * m0)), form_(form) {
    if (!(m0 > 0.0)) throw DomainError("units", "experimental mass must be positive");
    if (form.kind != FormKind::PointLimit && !(form.radius > 0.0))
        throw DomainError("units", "extended form factor needs a positive radius");
    if (!(e != 0.0)) throw DomainError("units", "charge must be nonzero");
}

ChargeModel ChargeModel::point(double e, double m0) { return ChargeModel(e, m0, m0, FormFactor::point()); }

ChargeModel ChargeModel::extended(double e, double m_b, FormFactor form) {
    const double m0 = m_b + 4.0 / 3.0 * form.self_energy(e);
    return ChargeModel(e, m0, m_b, form);
}

ChargeModel ChargeModel::with_experimental_mass(double e, double m0, FormFactor form) {
    return ChargeModel(e, m0, m0 - 4.0 / 3.0 * form.self_energy(e), form);
}

ChargeModel electron_preset(const UnitSystem& units) {
    return ChargeModel::point(-units.to_internal(Quantity::Charge, si::e), units.to_internal(Quantity::Mass, si::m_e));
}

ChargeModel proton_preset(const UnitSystem& units) {
    return ChargeModel::point(units.to_internal(Quantity::Charge, si::e), units.to_internal(Quantity::Mass, si::m_p));
}

double cyclotron_frequency(const ChargeModel& model, double B) {
    if (B < 0.0) throw DomainError("units", "field strength must be non-negative");
    return std::abs(model.e()) * B / model.m0();
}

ReferenceField reference_field_and_epsilon(const ChargeModel& model, double B_lab) {
    if (!(B_lab > 0.0)) throw DomainError("units", "laboratory field must be positive");
    const double B0 = model.m0() / (model.beta() * std::abs(model.e()));
    return {B0, B_lab / B0};
}

}  // namespace radreact
