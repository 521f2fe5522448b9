#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "sparsewave/types.hpp"

namespace spw {

// rhs(t, y, dydt) fills dydt; dydt is pre-sized to y.size().
using OdeRhs = std::function<void(double, const std::vector<cplx>&, std::vector<cplx>&)>;

// Called after every accepted step with the new (t, y).
using OdeObserver = std::function<void(double, const std::vector<cplx>&)>;

// Dormand-Prince 5(4) with PI-free step control. Integrates y from t0 to t1
// (either direction) in place. Throws ConvergenceError when the step size
// collapses below ~1e-14 of the span; the exception carries the t reached.
void rk45_integrate(const OdeRhs& rhs, double t0, double t1, std::vector<cplx>& y,
                    double rel_tol, double abs_tol = 1e-14,
                    const OdeObserver& observer = nullptr);

}  // namespace spw
