#pragma once

#include <complex>

#include "radreact/fields.hpp"
#include "radreact/units.hpp"

namespace radreact {

struct EnergyMomentum {
    double E_s;
    Vec3 P_s;
    Vec3 v;
};

// Symmetric 3x3 matrix a*1 + b*n n^T with n a unit vector (or zero when b = 0).
struct MassMatrix {
    double a = 0.0;
    double b = 0.0;
    Vec3 n = Vec3::Zero();

    Mat3 matrix() const { return a * Mat3::Identity() + b * n * n.transpose(); }
    Vec3 apply(const Vec3& x) const { return a * x + b * n * n.dot(x); }
    Vec3 solve(const Vec3& y) const { return (y - b / (a + b) * n * n.dot(y)) / a; }
};

namespace soliton_detail {

inline constexpr double kSeriesBelow = 0.5;
inline constexpr int kSeriesTerms = 40;

// Field-momentum profiles per unit m_e as functions of s = |v|:
//   p_over_s = p_f(s)/s,  p_prime = p_f'(s),  d = (p_f' - p_f/s)/s^2,
//   energy = L/s - 1, with L = log((1+s)/(1-s)).
// Templated so that the mass derivative can use complex-step differentiation.
template <class T>
T p_over_s(T s) {
    using std::atanh;
    using std::real;
    if (std::abs(real(s)) < kSeriesBelow) {
        const T s2 = s * s;
        T sum = 0.0, pw = 1.0;
        for (int n = 0; n < kSeriesTerms; ++n) {
            sum += pw * (1.0 / (2 * n + 3) + 1.0 / (2 * n + 1));
            pw *= s2;
        }
        return sum;
    }
    const T L = 2.0 * atanh(s);
    return (1.0 + s * s) * L / (2.0 * s * s * s) - 1.0 / (s * s);
}

template <class T>
T p_prime(T s) {
    using std::atanh;
    using std::real;
    if (std::abs(real(s)) < kSeriesBelow) {
        const T s2 = s * s;
        T sum = 0.0, pw = 1.0;
        for (int n = 0; n < kSeriesTerms; ++n) {
            sum += pw * (2.0 * (2 * n + 2) / (2 * n + 3));
            pw *= s2;
        }
        return sum;
    }
    const T L = 2.0 * atanh(s);
    return 2.0 / (s * s * (1.0 - s * s)) - L / (s * s * s);
}

template <class T>
T d_coeff(T s) {
    using std::real;
    if (std::abs(real(s)) < kSeriesBelow) {
        const T s2 = s * s;
        T sum = 0.0, pw = 1.0;
        for (int n = 1; n <= kSeriesTerms; ++n) {
            sum += pw * ((4.0 * n + 3.0) / (2 * n + 3) - 1.0 / (2 * n + 1));
            pw *= s2;
        }
        return sum;
    }
    return (p_prime(s) - p_over_s(s)) / (s * s);
}

template <class T>
T energy(T s) {
    using std::atanh;
    using std::real;
    if (std::abs(real(s)) < kSeriesBelow) {
        const T s2 = s * s;
        T sum = 1.0, pw = s2;
        for (int n = 1; n <= kSeriesTerms; ++n) {
            sum += 2.0 * pw / (2 * n + 1);
            pw *= s2;
        }
        return sum;
    }
    return 2.0 * atanh(s) / s - 1.0;
}

// Effective mass m(v) = A(s) 1 + C(s) v v^T.
template <class T>
void mass_coefficients(double m_b, double m_e, T s, T& A, T& C) {
    using std::sqrt;
    const T g = 1.0 / sqrt(1.0 - s * s);
    A = m_b * g + m_e * p_over_s(s);
    C = m_b * g * g * g + m_e * d_coeff(s);
}

}  // namespace soliton_detail

Vec3 momentum_of_velocity(const ChargeModel& model, const Vec3& v);
double energy_of_velocity(const ChargeModel& model, const Vec3& v);
EnergyMomentum energy_momentum(const ChargeModel& model, const Vec3& v);
// Inverse of momentum_of_velocity; defines E_eff(p) = E_s(v(p)).
Vec3 velocity_of_momentum(const ChargeModel& model, const Vec3& P);
double effective_energy(const ChargeModel& model, const Vec3& P);

MassMatrix field_mass_matrix(const ChargeModel& model, const Vec3& v);
MassMatrix effective_mass_matrix(const ChargeModel& model, const Vec3& v);
// m0 gamma kappa(v).
MassMatrix relativistic_mass_matrix(double m0, const Vec3& v);
// Directional derivative of effective_mass_matrix at v along w.
Mat3 effective_mass_derivative(const ChargeModel& model, const Vec3& v, const Vec3& w);

// Comoving potential and fields of the charge moving with velocity v,
// centred at the origin.
double soliton_potential(const ChargeModel& model, const Vec3& v, const Vec3& x);
Vec3 soliton_potential_gradient(const ChargeModel& model, const Vec3& v, const Vec3& x);
FieldValue soliton_fields(const ChargeModel& model, const Vec3& v, const Vec3& x);

struct HistoricalEnergyMomenta {
    Eigen::Vector4d lorentz_four_momentum;  // (m_b + m_e) gamma (1, v)
    double E_L;                             // m_b gamma + m_e gamma (1 + v^2/3)
    Vec3 P_L;                               // (m_b + 4/3 m_e) gamma v
};
HistoricalEnergyMomenta historical_energy_momenta(const ChargeModel& model, const Vec3& v);

}  // namespace radreact
