#pragma once

#include "awr/offset.hpp"
#include "awr/parabolic.hpp"
#include "awr/trajectory.hpp"
#include "awr/transport.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace awr {

/// Optional right-hand sides for verification runs: g(t) enters the transport
/// equation for w, b(t) the continuity equation for rho. Empty means zero.
struct SlabForcing {
    std::function<Field(double)> transport;
    std::function<Field(double)> parabolic;
};

struct PicardOptions {
    int levels = 32;  ///< time steps per slab
    double tol_fix = 1e-10;
    int max_iter = 30;
    double tol_mp = 1e-8;
    TransportOptions transport;
    SlabForcing forcing;
};

/// One Picard iterate on a slab: trajectories of rho, w, u and, for the
/// Newtonian closure, the potential, all on the same time levels.
struct SlabState {
    Trajectory rho;
    Trajectory w;
    Trajectory u;
    std::optional<std::vector<Potential>> phi;
    int iteration = 0;
    /// delta_w + delta_rho of the iteration that produced this state.
    double last_delta = 0.0;
    /// Coefficients of the parabolic solve that produced rho (empty at
    /// iteration 0). Kept for the slab audits.
    Trajectory mobility;
    Trajectory drift;
    std::vector<StepReport> parabolic_reports;

    const std::vector<double>& times() const { return rho.times; }
    double dt() const { return rho.times[1] - rho.times[0]; }
};

struct IterationReport {
    int iter = 0;
    double delta_w = 0.0;
    double delta_rho = 0.0;
    /// Ratio of successive delta_w + delta_rho; 0 at iteration 1.
    double kappa = 0.0;
    double bound_M = 0.0;
    double min_rho = 0.0;
    double max_rho = 0.0;
    double mass = 0.0;
    bool envelope_violated = false;
    bool converged = false;
};

/// Iterate 0: (rho0, w0 = u0 + grad p(rho0) [+ grad Phi]) held constant on
/// `levels` + 1 uniform levels of [t0, t0 + T].
SlabState init_slab(const Field& rho0, const Field& u0, const OffsetModel& model, double T,
                    int levels, double t0 = 0.0);

/// One sweep of the scheme: transport w with u^n, parabolic solve for rho with
/// mobility rho^n p'(rho^n) and velocity w^{n+1} (minus grad Phi_n), new
/// potential, new closure velocity. Errors carry the iteration and level.
std::pair<SlabState, IterationReport> iterate_once(const SlabState& state, const OffsetModel& model,
                                                   const PicardOptions& options = {});

/// Invariant audit of a converged slab.
struct SlabAudit {
    double mass_drift = 0.0;  ///< max relative |mass(t) - mass(t0)|
    double min_rho = 0.0;
    double max_rho = 0.0;
    bool positive = false;
    /// Envelope tolerance actually used: tol_mp plus the measured scheme error.
    double tol_mp = 0.0;
    bool envelopes_ok = true;
    /// Singular closures: theta from the initial density and the check
    /// theta/2 < rho < rho_sup - theta/2. Always true for PowerLaw.
    double theta = 0.0;
    bool barrier_ok = true;
    double jacobian_min = 1.0;
    double grad_x_minus_identity = 0.0;
    /// Newtonian closure: max |-Lap Phi - (rho - <rho>)| over levels.
    double potential_residual = 0.0;

    bool passed() const;
};

SlabAudit audit_slab(const SlabState& state, const OffsetModel& model, const PicardOptions& options);

struct SlabResult {
    SlabState state;
    std::vector<IterationReport> reports;
    SlabAudit audit;
};

/// Iterates until delta_w + delta_rho <= tol_fix. Throws ConvergenceFailure
/// with the kappa history after max_iter iterations.
SlabResult solve_slab(const Field& rho0, const Field& u0, const OffsetModel& model, double T,
                      const PicardOptions& options = {}, double t0 = 0.0);

struct SlabSummary {
    double t_start = 0.0;
    std::vector<IterationReport> reports;
    SlabAudit audit;
};

struct MarchResult {
    Trajectory rho;
    Trajectory w;
    Trajectory u;
    std::vector<SlabSummary> slabs;
};

using SlabObserver = std::function<void(const SlabResult&)>;

/// Consecutive slabs of length slab_T covering [0, T_total], each started
/// from the previous endpoint (rho, u). A failing slab aborts the march with
/// its start time in the message; `observer` sees every completed slab.
MarchResult march(const Field& rho0, const Field& u0, const OffsetModel& model, double T_total,
                  double slab_T, const PicardOptions& options = {},
                  const SlabObserver& observer = {});

/// Total momentum, the integral of rho w per component.
Point momentum(const Field& rho, const Field& w);

/// max over levels and components of |momentum(t) - momentum(t0)|.
double momentum_drift(const Trajectory& rho, const Trajectory& w);

/// Residuals of rho_t + div(rho u) = 0 and (rho w)_t + div(rho w (x) u) = 0
/// with u the closure velocity, using centered differences in time and
/// spectral derivatives in space. Sup norm over the interior levels.
struct FormulationResidual {
    double mass = 0.0;
    double momentum = 0.0;
};

FormulationResidual formulation_residual(const Trajectory& rho, const Trajectory& w,
                                         const OffsetModel& model);

} // namespace awr
