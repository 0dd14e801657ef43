#include "radreact/ode.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "radreact/types.hpp"

namespace radreact {

namespace odeint = boost::numeric::odeint;

OdeRun integrate_ode(const OdeRhs& rhs, OdeState y0, double t0, double t1, const IntegratorControls& controls,
                     const StepObserver& observer) {
    using Stepper = odeint::runge_kutta_dopri5<OdeState>;
    auto stepper = odeint::make_controlled(controls.atol, controls.rtol, Stepper());
    auto system = [&rhs](const OdeState& y, OdeState& dy, double t) { rhs(y, dy, t); };

    OdeRun run;
    const double dir = t1 >= t0 ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    double t = t0;
    OdeState y = std::move(y0);
    OdeState dydt(y.size());
    rhs(y, dydt, t);
    if (observer && observer(t, y, dydt) == StepAction::Stop) {
        run.stopped = true;
        run.t_end = t;
        return run;
    }
    if (span == 0.0) {
        run.t_end = t;
        return run;
    }
    double h = controls.initial_step > 0.0 ? controls.initial_step : span * 1e-6;
    h = std::min(h, controls.max_step);
    double dt = dir * h;
    while (dir * (t1 - t) > 0.0) {
        if (run.steps >= controls.max_steps) throw IntegrationError("integrator", "maximum number of steps exceeded");
        const double remaining = t1 - t;
        bool last = false;
        if (std::abs(dt) > controls.max_step) dt = dir * controls.max_step;
        if (std::abs(dt) >= std::abs(remaining)) {
            dt = remaining;
            last = true;
        }
        const odeint::controlled_step_result res = stepper.try_step(system, y, dydt, t, dt);
        if (res == odeint::fail) {
            if (std::abs(dt) < 1e-14 * std::max(1.0, std::abs(t)))
                throw IntegrationError("integrator", "step size underflow at t = " + std::to_string(t));
            continue;
        }
        if (last) t = t1;  // avoid round-off drift at the end point
        ++run.steps;
        if (observer && observer(t, y, dydt) == StepAction::Stop) {
            run.stopped = true;
            break;
        }
    }
    run.t_end = t;
    return run;
}

}  // namespace radreact
