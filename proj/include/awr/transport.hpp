#pragma once

#include "awr/grid.hpp"
#include "awr/trajectory.hpp"

#include <optional>

namespace awr {

/// Characteristic feet of every lattice node. `unwrapped` keeps the continuous
/// displacement (for differencing), `wrapped` is reduced into the periodic cell.
struct Feet {
    Field unwrapped;
    Field wrapped;
};

/// Backward RK4 trace of dX/dt = v(t, X) from t_from down to t_to, started at
/// every lattice node, with `substeps` classical RK4 steps.
Feet trace_feet(const VelocityTrajectory& v, double t_from, double t_to, int substeps);

struct TransportOptions {
    int substeps = 4;
    InterpMethod method = InterpMethod::QuinticSpline;
};

/// Semi-Lagrangian solve of eta_t + v . grad(eta) = g starting at v.start().
///
/// Each step traces the characteristic through every node back one step and
/// sets eta(t_{k+1}, x) = eta(t_k, foot) + int g along the path (trapezoidal
/// on the RK4 substep points). Works componentwise on vector fields, reusing
/// the feet. Returns steps+1 levels.
Trajectory advect(const Field& eta0, const VelocityTrajectory& v,
                  const SampledTrajectory* source, double t_end, double dt,
                  const TransportOptions& options = {});

struct FlowMapDiagnostics {
    double sup_grad_minus_identity = 0.0;  ///< max |d(X_i)/d(y_j) - delta_ij|
    double jacobian_min = 1.0;
    double jacobian_max = 1.0;
};

/// Forward-traces X(start + T, y) from every node and differences the
/// displacement X - y centrally across neighbours.
FlowMapDiagnostics flow_diagnostics(const VelocityTrajectory& v, double T,
                                    int substeps_per_level = 4);

} // namespace awr
