#pragma once

#include "awr/grid.hpp"
#include "awr/trajectory.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace awr {

/// Mobility floor below which the dissipation counts as degenerate.
inline constexpr double kMobilityFloor = 1e-10;

/// rho_t + div(rho v) - div(a grad rho) = b on [t0, t0 + t_end], with v, a and
/// the optional b sampled on the uniform levels t0 + k dt.
struct ParabolicProblem {
    Trajectory velocity;
    Trajectory mobility;
    std::optional<Trajectory> source;
    Field rho0;
    double t_end = 0.0;
    double dt = 0.0;
    /// Absolute slack of the max-min envelope audit.
    double tol_mp = 1e-8;

    int steps() const;
    /// Checks alignment, ranks and the mobility floor; throws InvalidArgument
    /// or DegenerateDissipation.
    void validate() const;
};

struct StepReport {
    double time = 0.0;
    double min_rho = 0.0;
    double max_rho = 0.0;
    double mass = 0.0;
    /// Exponential envelopes inf(rho0) exp(-I), sup(rho0) exp(I) with I the
    /// running integral of ||div v||_inf. Infinite when a source is present.
    double maxmin_lower_bound = 0.0;
    double maxmin_upper_bound = 0.0;
    bool violated = false;
    /// dt ||v||_inf / h > 1 at this level; informational only.
    bool cfl_advisory = false;
};

/// Stabilized semi-implicit stepper. With s = max a over the levels involved,
/// s Lap(rho) is implicit (diagonal spectral inverse) and the remainder
/// div((a - s) grad rho) - div(rho v) + b is explicit with de-aliased fluxes.
/// The first step is Richardson-extrapolated IMEX Euler; later steps are
/// SBDF2. All terms are in
/// divergence form, so the k = 0 mode only moves with b.
class ParabolicStepper {
public:
    explicit ParabolicStepper(const ParabolicProblem& problem);

    /// Advances `state` from `level` to `level + 1`. Levels must be visited in
    /// order starting at 0.
    std::pair<Field, StepReport> step(const Field& state, int level);

    /// Report for the initial level.
    StepReport initial_report() const;

private:
    struct Explicit {
        Spectrum rho_hat;
        Spectrum g_hat;  // de-aliased div(a grad rho - rho v) + b
        Spectrum h_hat;  // de-aliased Lap rho
    };
    Explicit explicit_terms(const Field& state, int level) const;
    Explicit explicit_terms(const Field& state, const Field& a, const Field& v,
                            const Field* source) const;
    StepReport make_report(const Field& rho, int level) const;

    const ParabolicProblem& problem_;
    std::vector<double> div_sup_;      // ||div v||_inf per level
    std::vector<double> div_integral_; // trapezoidal running integral
    std::vector<double> mobility_max_;
    std::vector<double> laplacian_;    // -|k|^2 per bin
    std::vector<unsigned char> keep_;  // de-aliasing mask
    double rho0_inf_ = 0.0;
    double rho0_sup_ = 0.0;
    std::optional<Explicit> previous_;
    int next_level_ = 0;
};

struct ParabolicSolution {
    Trajectory rho;
    std::vector<StepReport> reports;  ///< one per level, level 0 included

    bool any_violation() const;
};

ParabolicSolution solve(const ParabolicProblem& problem);

/// Sup-norm difference between the solution at dt and at dt/2 (coefficients
/// interpolated linearly to the half levels), compared on the coarse levels.
double estimate_scheme_error(const ParabolicProblem& problem);

struct PositivityReport {
    double min_rho = 0.0;
    std::size_t min_level = 0;
    bool positive = false;
    /// Caller attests the source has the div(rho b) form.
    bool form_attested = false;
    /// Non-positivity under a positive initial density and attested form.
    bool hard_violation = false;
};

PositivityReport positivity_guard(const Trajectory& rho, bool form_check);

} // namespace awr
