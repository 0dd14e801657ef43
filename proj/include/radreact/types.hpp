#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace radreact {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Base class for every error raised by the library. `module` names the
// subsystem that refused the input so the CLI can report it.
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& what)
        : std::runtime_error(module + ": " + what), module_(std::move(module)) {}
    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

// Precondition violated by the caller (|v| >= 1, r = 0, bad axis, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Integration could not proceed (step underflow, solver failure).
class IntegrationError : public Error {
public:
    using Error::Error;
};

inline double gamma_of(const Vec3& v) { return 1.0 / std::sqrt(1.0 - v.squaredNorm()); }

// kappa(v) = 1 + gamma^2 v v^T and its inverse 1 - v v^T.
inline Mat3 kappa(const Vec3& v) { return Mat3::Identity() + v * v.transpose() / (1.0 - v.squaredNorm()); }
inline Mat3 kappa_inv(const Vec3& v) { return Mat3::Identity() - v * v.transpose(); }

}  // namespace radreact
