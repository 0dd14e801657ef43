#include "radreact/penning.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace radreact {

TrapSpec::TrapSpec(ChargeModel c, double wz, double b) : charge(std::move(c)), omega_z(wz), B(b) {
    if (!(wz > 0.0)) throw DomainError("penning", "omega_z must be positive");
    if (!(b >= 0.0)) throw DomainError("penning", "B must be non-negative");
}

double critical_field(const ChargeModel& charge, double omega_z) {
    return std::sqrt(2.0) * omega_z * charge.m0() / std::abs(charge.e());
}

ModeReport mode_analysis(const TrapSpec& spec) {
    const double wz = spec.omega_z, wc = spec.omega_c();
    if (!(wc > std::sqrt(2.0) * wz))
        throw InstabilityBoundary(critical_field(spec.charge, wz), "lambda <= sqrt(2): the trap is unstable");
    const double d = std::sqrt(wc * wc - 2.0 * wz * wz);
    ModeReport r;
    r.omega_plus = 0.5 * (wc + d);
    // Product form avoids cancellation for large lambda.
    r.omega_minus = 0.5 * wz * wz / r.omega_plus;
    r.omega_z = wz;
    r.omega_c = wc;
    r.lambda = wc / wz;
    const double beta = spec.charge.beta();
    const double wp = r.omega_plus, wm = r.omega_minus;
    r.gamma_plus = beta * wp * wp * wp / (wp - wm);
    r.gamma_minus = beta * wm * wm * wm / (wm - wp);
    r.gamma_z = beta * wz * wz;
    return r;
}

std::array<std::complex<double>, 4> numeric_eigen_oracle(const TrapSpec& spec) {
    return numeric_eigen_oracle(spec, spec.charge.beta());
}

std::array<std::complex<double>, 4> numeric_eigen_oracle(const TrapSpec& spec, double beta) {
    // u' = (1/2) wz^2 r - w J u - beta [(w^2 - wz^2/2) u + (1/2) w wz^2 J r],
    // J = z x, w = e B / m0 (signed).
    const double wz2 = spec.omega_z * spec.omega_z;
    const double w = spec.charge.e() * spec.B / spec.charge.m0();
    Eigen::Matrix2cd J;
    J << 0.0, -1.0, 1.0, 0.0;
    const Eigen::Matrix2cd I = Eigen::Matrix2cd::Identity();
    Eigen::Matrix4cd M = Eigen::Matrix4cd::Zero();
    M.block<2, 2>(0, 2) = I;
    M.block<2, 2>(2, 0) = 0.5 * wz2 * I - beta * 0.5 * w * wz2 * J;
    M.block<2, 2>(2, 2) = -w * J - beta * (w * w - 0.5 * wz2) * I;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(M, false);
    std::array<std::complex<double>, 4> out;
    for (int i = 0; i < 4; ++i) out[i] = solver.eigenvalues()[i];
    std::sort(out.begin(), out.end(), [](auto a, auto b) { return a.imag() < b.imag(); });
    return out;
}

}  // namespace radreact
