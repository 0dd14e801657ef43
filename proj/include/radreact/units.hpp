#pragma once

#include "radreact/types.hpp"

namespace radreact {

namespace si {
inline constexpr double c = 299792458.0;             // m/s
inline constexpr double e = 1.602176634e-19;         // C
inline constexpr double m_e = 9.1093837015e-31;      // kg
inline constexpr double m_p = 1.67262192369e-27;     // kg
inline constexpr double eps0 = 8.8541878128e-12;     // F/m
inline constexpr double tesla_per_gauss = 1e-4;
}  // namespace si

enum class Quantity { Length, Time, Mass, Energy, Velocity, Acceleration, Charge, ElectricField, MagneticField, Frequency, Potential };

// Natural Heaviside-Lorentz units with c = 1. A unit system is fixed by the
// length unit (the time unit is length/c) and the mass unit. Charges carry
// the Heaviside-Lorentz normalisation: e^2/(4 pi r) is an energy.
class UnitSystem {
public:
    UnitSystem(double length_unit_m, double mass_unit_kg);

    // Time unit 1 s, mass unit the electron mass. Frequencies come out in rad/s.
    static UnitSystem electron_natural();

    double length_unit() const { return length_unit_; }
    double mass_unit() const { return mass_unit_; }
    double time_unit() const { return length_unit_ / si::c; }
    double speed_of_light() const { return 1.0; }

    // SI value per internal unit of quantity q.
    double scale(Quantity q) const;
    double to_internal(Quantity q, double value_si) const { return value_si / scale(q); }
    double to_si(Quantity q, double internal_value) const { return internal_value * scale(q); }

    double field_from_gauss(double gauss) const { return to_internal(Quantity::MagneticField, gauss * si::tesla_per_gauss); }
    double field_to_gauss(double b) const { return to_si(Quantity::MagneticField, b) / si::tesla_per_gauss; }

private:
    double length_unit_;
    double mass_unit_;
};

enum class FormKind { PointLimit, SphereShell, UniformBall };

struct FormFactor {
    FormKind kind = FormKind::PointLimit;
    double radius = 0.0;

    static FormFactor point() { return {}; }
    static FormFactor sphere(double R) { return {FormKind::SphereShell, R}; }
    static FormFactor ball(double R) { return {FormKind::UniformBall, R}; }

    // Electrostatic self-energy of total charge e; zero in the point limit.
    double self_energy(double e) const;
    // |rho_hat(k)|^2 / e^2 with rho_hat = (2 pi)^{-3/2} int rho e^{-ikx}.
    double spectral_density(double k) const;
    // Charge density per unit charge at distance r (ball only; 0 elsewhere).
    double density(double r) const;
};

std::string to_string(FormKind k);
FormKind form_kind_from_string(const std::string& s);

// Particle identity. m0 is the experimental (rest) mass, m_b the bare mass.
// Extended charges satisfy m0 = m_b + (4/3) m_e; in the point limit m_e = 0
// and m_b = m0.
class ChargeModel {
public:
    static ChargeModel point(double e, double m0);
    static ChargeModel extended(double e, double m_b, FormFactor form);
    // Extended charge whose bare mass is fixed by the experimental mass.
    static ChargeModel with_experimental_mass(double e, double m0, FormFactor form);

    double e() const { return e_; }
    double m0() const { return m0_; }
    double m_b() const { return m_b_; }
    double m_e() const { return m_e_; }
    const FormFactor& form() const { return form_; }
    // beta = e^2/(6 pi m0), a time.
    double beta() const { return beta_; }
    // k = e^2/(6 pi), the radiation reaction coupling.
    double k() const { return e_ * e_ / (6.0 * M_PI); }

private:
    ChargeModel(double e, double m0, double m_b, FormFactor form);
    double e_, m0_, m_b_, m_e_, beta_;
    FormFactor form_;
};

ChargeModel electron_preset(const UnitSystem& units = UnitSystem::electron_natural());
ChargeModel proton_preset(const UnitSystem& units = UnitSystem::electron_natural());

// omega_c = e B / m0 (B in internal units, B >= 0).
double cyclotron_frequency(const ChargeModel& model, double B);

struct ReferenceField {
    double B0;       // field with beta * omega_c(B0) = 1
    double epsilon;  // B_lab / B0
};
ReferenceField reference_field_and_epsilon(const ChargeModel& model, double B_lab);

}  // namespace radreact
