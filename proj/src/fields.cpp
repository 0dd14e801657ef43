#include "radreact/fields.hpp"

#include <cmath>

namespace radreact {

namespace {

class ZeroSource final : public FieldSource {
public:
    FieldValue value(const Vec3&) const override { return {}; }
    FieldGradient gradient(const Vec3&) const override { return {}; }
    double potential(const Vec3&) const override { return 0.0; }
};

class UniformSource final : public FieldSource {
public:
    UniformSource(Vec3 E, Vec3 B) : E_(E), B_(B) {}
    FieldValue value(const Vec3&) const override { return {E_, B_}; }
    FieldGradient gradient(const Vec3&) const override { return {}; }
    double potential(const Vec3& x) const override { return -E_.dot(x); }

private:
    Vec3 E_, B_;
};

// phi = (1/2) x^T Q x, E = -Q x.
class QuadraticSource final : public FieldSource {
public:
    explicit QuadraticSource(Mat3 Q) : Q_(Q) {}
    FieldValue value(const Vec3& x) const override { return {-Q_ * x, Vec3::Zero()}; }
    FieldGradient gradient(const Vec3&) const override { return {-Q_, Mat3::Zero()}; }
    double potential(const Vec3& x) const override { return 0.5 * x.dot(Q_ * x); }

private:
    Mat3 Q_;
};

class CentralSource final : public FieldSource {
public:
    explicit CentralSource(RadialProfile p) : p_(std::move(p)) {}

    FieldValue value(const Vec3& x) const override {
        const double r = x.norm();
        if (r == 0.0) {
            if (!p_.dphi_over_r_at_zero) throw DomainError("fields", "central potential evaluated at r = 0");
            return {};
        }
        return {-p_.dphi(r) / r * x, Vec3::Zero()};
    }

    FieldGradient gradient(const Vec3& x) const override {
        const double r = x.norm();
        FieldGradient g;
        if (r == 0.0) {
            if (!p_.dphi_over_r_at_zero) throw DomainError("fields", "central potential evaluated at r = 0");
            g.dE = -*p_.dphi_over_r_at_zero * Mat3::Identity();
            return g;
        }
        const Vec3 n = x / r;
        const Mat3 nn = n * n.transpose();
        g.dE = -(p_.d2phi(r) * nn + p_.dphi(r) / r * (Mat3::Identity() - nn));
        return g;
    }

    double potential(const Vec3& x) const override { return p_.phi(x.norm()); }

private:
    RadialProfile p_;
};

class AxialSource final : public FieldSource {
public:
    explicit AxialSource(AxialProfile p) : p_(std::move(p)) {}
    FieldValue value(const Vec3& x) const override { return {Vec3(-p_.dphi(x[0]), 0.0, 0.0), Vec3::Zero()}; }
    FieldGradient gradient(const Vec3& x) const override {
        FieldGradient g;
        g.dE(0, 0) = -p_.d2phi(x[0]);
        return g;
    }
    double potential(const Vec3& x) const override { return p_.phi(x[0]); }

private:
    AxialProfile p_;
};

class SumSource final : public FieldSource {
public:
    explicit SumSource(std::vector<FieldMap> maps) : maps_(std::move(maps)) {}
    FieldValue value(const Vec3& x) const override {
        FieldValue s;
        for (const auto& m : maps_) {
            const FieldValue f = m.value(x);
            s.E += f.E;
            s.B += f.B;
        }
        return s;
    }
    FieldGradient gradient(const Vec3& x) const override {
        FieldGradient s;
        for (const auto& m : maps_) {
            const FieldGradient g = m.gradient(x);
            s.dE += g.dE;
            s.dB += g.dB;
        }
        return s;
    }
    double potential(const Vec3& x) const override {
        double s = 0.0;
        for (const auto& m : maps_) s += m.potential(x);
        return s;
    }
    bool analytic_gradient() const override {
        for (const auto& m : maps_)
            if (!m.analytic_gradient()) return false;
        return true;
    }

private:
    std::vector<FieldMap> maps_;
};

class CallableSource final : public FieldSource {
public:
    CallableSource(std::function<FieldValue(const Vec3&)> f, std::function<double(const Vec3&)> phi)
        : f_(std::move(f)), phi_(std::move(phi)) {}
    FieldValue value(const Vec3& x) const override { return f_(x); }
    FieldGradient gradient(const Vec3& x) const override {
        const double h = std::max(1e-6, 1e-6 * x.norm());
        FieldGradient g;
        for (int j = 0; j < 3; ++j) {
            Vec3 xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            const FieldValue fp = f_(xp), fm = f_(xm);
            g.dE.col(j) = (fp.E - fm.E) / (2.0 * h);
            g.dB.col(j) = (fp.B - fm.B) / (2.0 * h);
        }
        return g;
    }
    double potential(const Vec3& x) const override { return phi_ ? phi_(x) : 0.0; }
    bool analytic_gradient() const override { return false; }

private:
    std::function<FieldValue(const Vec3&)> f_;
    std::function<double(const Vec3&)> phi_;
};

}  // namespace

FieldMap::FieldMap() : src_(std::make_shared<ZeroSource>()) {}

FieldGradient finite_difference_gradient(const FieldMap& map, const Vec3& x) {
    const double h = std::max(1e-6, 1e-6 * x.norm());
    FieldGradient g;
    for (int j = 0; j < 3; ++j) {
        Vec3 xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        const FieldValue fp = map.value(xp), fm = map.value(xm);
        g.dE.col(j) = (fp.E - fm.E) / (2.0 * h);
        g.dB.col(j) = (fp.B - fm.B) / (2.0 * h);
    }
    return g;
}

FieldMap zero_field() { return FieldMap(); }

FieldMap uniform_magnetic(double B, const Vec3& axis) {
    if (std::abs(axis.norm() - 1.0) > 1e-12) throw DomainError("fields", "magnetic axis must be a unit vector");
    return FieldMap(std::make_shared<UniformSource>(Vec3::Zero(), B * axis));
}

FieldMap uniform_electric(const Vec3& E) { return FieldMap(std::make_shared<UniformSource>(E, Vec3::Zero())); }

FieldMap quadrupole(double e, double m, double omega_z) {
    if (!(omega_z > 0.0)) throw DomainError("fields", "axial frequency must be positive");
    const double s = m * omega_z * omega_z / e;
    const Mat3 Q = s * Vec3(-0.5, -0.5, 1.0).asDiagonal();
    return FieldMap(std::make_shared<QuadraticSource>(Q));
}

FieldMap penning_trap(double e, double m, double omega_z, double B) {
    if (!(B > 0.0)) throw DomainError("fields", "trap field must be positive");
    return superpose({quadrupole(e, m, omega_z), uniform_magnetic(B, Vec3::UnitZ())});
}

RadialProfile harmonic_profile(double e, double m, double omega0) {
    const double s = m * omega0 * omega0 / e;
    return {[s](double r) { return 0.5 * s * r * r; }, [s](double r) { return s * r; }, [s](double) { return s; }, s};
}

RadialProfile constant_profile(double value) {
    return {[value](double) { return value; }, [](double) { return 0.0; }, [](double) { return 0.0; }, 0.0};
}

FieldMap central_potential(RadialProfile profile) {
    if (!profile.phi || !profile.dphi || !profile.d2phi) throw DomainError("fields", "radial profile incomplete");
    return FieldMap(std::make_shared<CentralSource>(std::move(profile)));
}

AxialProfile linear_axial_profile(double a0) {
    return {[a0](double x) { return -a0 * x; }, [a0](double) { return -a0; }, [](double) { return 0.0; }};
}

AxialProfile harmonic_axial_profile(double e, double m, double omega0) {
    const double s = m * omega0 * omega0 / e;
    return {[s](double x) { return 0.5 * s * x * x; }, [s](double x) { return s * x; }, [s](double) { return s; }};
}

AxialProfile double_well_profile(double scale) {
    return {[scale](double x) { return scale * (x * x - 1.0) * (x * x - 1.0); },
            [scale](double x) { return 4.0 * scale * x * (x * x - 1.0); },
            [scale](double x) { return scale * (12.0 * x * x - 4.0); }};
}

FieldMap axial_1d(AxialProfile profile) {
    if (!profile.phi || !profile.dphi || !profile.d2phi) throw DomainError("fields", "axial profile incomplete");
    return FieldMap(std::make_shared<AxialSource>(std::move(profile)));
}

FieldMap superpose(const std::vector<FieldMap>& maps) {
    if (maps.empty()) throw DomainError("fields", "superpose needs at least one map");
    return FieldMap(std::make_shared<SumSource>(maps));
}

FieldMap from_callable(std::function<FieldValue(const Vec3&)> f, std::function<double(const Vec3&)> phi) {
    return FieldMap(std::make_shared<CallableSource>(std::move(f), std::move(phi)));
}

}  // namespace radreact
