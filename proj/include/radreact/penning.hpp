#pragma once

#include <array>
#include <complex>

#include "radreact/units.hpp"

namespace radreact {

// Ideal Penning trap: uniform B along x3 plus the quadrupole potential
// e phi = (1/2) m0 wz^2 (x3^2 - x1^2/2 - x2^2/2).
struct TrapSpec {
    ChargeModel charge;
    double omega_z;
    double B;

    TrapSpec(ChargeModel c, double omega_z, double B);
    double omega_c() const { return cyclotron_frequency(charge, B); }
    double lambda() const { return omega_c() / omega_z; }
    // Radius scale c omega_c / omega_z^2 below which the slow-motion expansion holds.
    double radius_scale() const { return omega_c() / (omega_z * omega_z); }
    bool slow_motion_ok(double v_max, double margin = 0.1) const { return v_max <= margin; }
    bool radius_ok(double r_max, double margin = 0.1) const { return r_max <= margin * radius_scale(); }
};

struct ModeReport {
    double omega_plus, omega_minus, omega_z, omega_c, lambda;
    // Signed damping rates; gamma_minus < 0 is antifriction.
    double gamma_plus, gamma_minus, gamma_z;
    double lifetime_plus() const { return 1.0 / std::abs(gamma_plus); }
    double lifetime_minus() const { return 1.0 / std::abs(gamma_minus); }
    double lifetime_z() const { return 1.0 / std::abs(gamma_z); }
};

// Raised for lambda <= sqrt(2); carries the critical field.
class InstabilityBoundary : public DomainError {
public:
    InstabilityBoundary(double B_c, const std::string& what) : DomainError("penning", what), B_c_(B_c) {}
    double critical_field() const { return B_c_; }

private:
    double B_c_;
};

ModeReport mode_analysis(const TrapSpec& spec);
// B_c with omega_c(B_c) = sqrt(2) omega_z.
double critical_field(const ChargeModel& charge, double omega_z);

// Eigenvalues of the linearised in-plane Landau-Lifshitz flow for (r, u),
// with radiation coupling beta (default: the charge's beta). Sorted by
// imaginary part.
std::array<std::complex<double>, 4> numeric_eigen_oracle(const TrapSpec& spec);
std::array<std::complex<double>, 4> numeric_eigen_oracle(const TrapSpec& spec, double beta);

}  // namespace radreact
