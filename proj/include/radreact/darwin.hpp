#pragma once

#include <vector>

#include "radreact/ode.hpp"
#include "radreact/trajectory.hpp"
#include "radreact/units.hpp"

namespace radreact {

struct Particle {
    ChargeModel charge;
    Vec3 q = Vec3::Zero();
    Vec3 v = Vec3::Zero();
};

// N charges with an explicit light speed c (internal units have c = 1).
struct ManyBodyState {
    std::vector<Particle> particles;
    double c = 1.0;

    std::size_t size() const { return particles.size(); }
    double min_separation() const;
};

// L = T0 + T1 - U0 - U1.
struct DarwinTerms {
    double T0 = 0.0, T1 = 0.0, U0 = 0.0, U1 = 0.0;
    double lagrangian() const { return T0 + T1 - U0 - U1; }
};
DarwinTerms darwin_lagrangian_terms(const ManyBodyState& state);

struct DarwinForces {
    std::vector<Vec3> accelerations;
    // d/dt of the kinetic momentum, (m_eff + 4 mu v^2/c^2) a + 8 mu/c^2 v (v.a):
    // the force exerted by the other charges.
    std::vector<Vec3> forces;
    // d/dt of the canonical momenta; they sum to zero.
    std::vector<Vec3> momentum_rates;
};
// Euler-Lagrange equations with the acceleration coupling solved exactly.
DarwinForces darwin_forces(const ManyBodyState& state);
// Interaction force on each particle for prescribed accelerations.
std::vector<Vec3> darwin_interaction_forces(const ManyBodyState& state, const std::vector<Vec3>& accelerations);
std::vector<Vec3> coulomb_forces(const ManyBodyState& state);

double darwin_energy(const ManyBodyState& state);
// Total canonical momentum sum_j dL/dv_j.
Vec3 darwin_momentum(const ManyBodyState& state);

struct ManyBodyRun {
    std::vector<Trajectory> trajectories;  // one per particle
    Termination status = Termination::Completed;
    std::string message;
};

// Halts with CollisionHalt once a pair distance drops below collision_radius
// (default 1e-3 of the initial minimum separation). Sample energy holds the
// total Darwin energy.
ManyBodyRun integrate_darwin(const ManyBodyState& state0, double t0, double t1, const IntegratorControls& controls = {},
                             double collision_radius = 0.0);

// Two charges driven by each other's retarded Lienard-Wiechert fields with
// straight-line prehistory before t0. Needs c = 1. The default collision
// radius is half the initial separation; steps are capped at a quarter of the
// collision radius so stage evaluations only reach stored history.
ManyBodyRun retarded_twobody_oracle(const ManyBodyState& state0, double t0, double t1,
                                    const IntegratorControls& controls = {}, double collision_radius = 0.0);

// Retarded Lorentz force on each particle at time t from the other's trajectory.
std::vector<Vec3> retarded_forces(const ManyBodyRun& run, const ManyBodyState& charges, double t);

// Runs the retarded oracle on [0, t1] and returns
// max |F_ret - F_darwin| / max |F_darwin - F_coulomb| over samples with t >= t_start,
// all forces evaluated on the oracle trajectory.
double darwin_retarded_residual_ratio(const ManyBodyState& state0, double t1, double t_start,
                                      const IntegratorControls& controls = {});

}  // namespace radreact
