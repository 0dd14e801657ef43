#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace radreact {

using OdeState = std::vector<double>;
using OdeRhs = std::function<void(const OdeState& y, OdeState& dydt, double t)>;

struct IntegratorControls {
    double atol = 1e-12;
    double rtol = 1e-10;
    double initial_step = 0.0;  // 0: pick from the time span
    double max_step = std::numeric_limits<double>::infinity();
    long max_steps = 20'000'000;
};

enum class StepAction { Continue, Stop };

// Called after every accepted step with the new time, state and derivative.
using StepObserver = std::function<StepAction(double t, const OdeState& y, const OdeState& dydt)>;

struct OdeRun {
    bool stopped = false;  // observer requested a stop
    long steps = 0;
    double t_end = 0.0;
};

// Adaptive Dormand-Prince 5(4) from t0 to t1 (t1 < t0 integrates backwards).
// The observer also sees the initial point. Throws IntegrationError on step
// underflow or when max_steps is exhausted.
OdeRun integrate_ode(const OdeRhs& rhs, OdeState y0, double t0, double t1, const IntegratorControls& controls,
                     const StepObserver& observer);

}  // namespace radreact
