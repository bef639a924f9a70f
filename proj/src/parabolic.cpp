#include "awr/parabolic.hpp"

#include "awr/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace awr {

int ParabolicProblem::steps() const { return step_count(t_end, dt); }

void ParabolicProblem::validate() const {
    const int n = steps();
    const Torus& t = rho0.torus();
    if (!rho0.is_scalar()) throw InvalidArgument("parabolic: rho0 must be scalar");
    rho0.require_finite("parabolic initial data");
    auto check = [&](const Trajectory& traj, int comps, const char* name) {
        traj.validate();
        if (static_cast<int>(traj.levels()) != n + 1 || traj.torus() != t ||
            traj.components() != comps) {
            throw InvalidArgument(std::string("parabolic: ") + name +
                                  " trajectory not aligned with the time grid");
        }
        for (int k = 0; k <= n; ++k) {
            const double expected = traj.times[0] + k * dt;
            if (std::abs(traj.times[k] - expected) > 1e-12 * std::max(1.0, std::abs(expected))) {
                throw InvalidArgument(std::string("parabolic: ") + name + " levels not uniform in dt");
            }
        }
    };
    check(velocity, t.dim(), "velocity");
    check(mobility, 1, "mobility");
    if (source) check(*source, 1, "source");
    double floor = std::numeric_limits<double>::infinity();
    for (const auto& a : mobility.fields) floor = std::min(floor, a.min());
    if (!(floor >= kMobilityFloor)) {
        std::ostringstream msg;
        msg << "degenerate dissipation: mobility floor " << floor << " below " << kMobilityFloor;
        throw DegenerateDissipation(msg.str());
    }
}

ParabolicStepper::ParabolicStepper(const ParabolicProblem& problem) : problem_(problem) {
    problem.validate();
    const Torus& t = problem.rho0.torus();
    const int n = problem.steps();
    div_sup_.resize(n + 1);
    div_integral_.assign(n + 1, 0.0);
    mobility_max_.resize(n + 1);
    for (int k = 0; k <= n; ++k) {
        div_sup_[k] = divergence(problem.velocity[k]).sup_norm();
        mobility_max_[k] = problem.mobility[k].max();
        if (k > 0) div_integral_[k] = div_integral_[k - 1] + 0.5 * problem.dt * (div_sup_[k - 1] + div_sup_[k]);
    }
    laplacian_.resize(t.nodes());
    keep_.resize(t.nodes());
    for (std::size_t b = 0; b < t.nodes(); ++b) {
        const auto idx = t.unravel(b);
        double k2 = 0.0;
        bool keep = true;
        for (int a = 0; a < t.dim(); ++a) {
            const double k = t.wavenumber(a, idx[a]);
            k2 += k * k;
            if (3 * std::abs(t.mode(a, idx[a])) > t.size(a)) keep = false;
        }
        laplacian_[b] = -k2;
        keep_[b] = keep;
    }
    rho0_inf_ = problem.rho0.min();
    rho0_sup_ = problem.rho0.max();
}

ParabolicStepper::Explicit ParabolicStepper::explicit_terms(const Field& rho, int level) const {
    return explicit_terms(rho, problem_.mobility[level], problem_.velocity[level],
                          problem_.source ? &(*problem_.source)[level] : nullptr);
}

ParabolicStepper::Explicit ParabolicStepper::explicit_terms(const Field& rho, const Field& a,
                                                            const Field& v, const Field* source) const {
    const Torus& t = rho.torus();
    Explicit e{transform(rho), Spectrum(t, 1), Spectrum(t, 1)};

    // flux = a grad rho - rho v, gradient taken spectrally (Nyquist dropped)
    Spectrum grad_hat(t, t.dim());
    for (std::size_t b = 0; b < t.nodes(); ++b) {
        const auto idx = t.unravel(b);
        for (int d = 0; d < t.dim(); ++d) {
            const double k = t.is_nyquist(d, idx[d]) ? 0.0 : t.wavenumber(d, idx[d]);
            grad_hat.at(d, b) = Complex(0.0, k) * e.rho_hat.at(0, b);
        }
    }
    Field flux = multiply(a, inverse(grad_hat));
    flux -= multiply(rho, v);
    const Spectrum flux_hat = transform(flux);
    std::optional<Spectrum> b_hat;
    if (source) b_hat = transform(*source);

    for (std::size_t b = 0; b < t.nodes(); ++b) {
        Complex g(0.0, 0.0);
        Complex h(0.0, 0.0);
        if (keep_[b]) {
            const auto idx = t.unravel(b);
            double k2 = 0.0;
            for (int d = 0; d < t.dim(); ++d) {
                if (t.is_nyquist(d, idx[d])) continue;
                const double k = t.wavenumber(d, idx[d]);
                g += Complex(0.0, k) * flux_hat.at(d, b);
                k2 += k * k;
            }
            h = -k2 * e.rho_hat.at(0, b);
        }
        if (b_hat) g += b_hat->at(0, b);
        e.g_hat.at(0, b) = g;
        e.h_hat.at(0, b) = h;
    }
    return e;
}

StepReport ParabolicStepper::make_report(const Field& rho, int level) const {
    StepReport r;
    r.time = problem_.mobility.times[level];
    r.min_rho = rho.min();
    r.max_rho = rho.max();
    r.mass = integral(rho);
    if (problem_.source) {
        r.maxmin_lower_bound = -std::numeric_limits<double>::infinity();
        r.maxmin_upper_bound = std::numeric_limits<double>::infinity();
    } else {
        r.maxmin_lower_bound = rho0_inf_ * std::exp(-div_integral_[level]);
        r.maxmin_upper_bound = rho0_sup_ * std::exp(div_integral_[level]);
        r.violated = r.min_rho < r.maxmin_lower_bound - problem_.tol_mp ||
                     r.max_rho > r.maxmin_upper_bound + problem_.tol_mp;
    }
    const double vmax = problem_.velocity[level].sup_norm();
    r.cfl_advisory = problem_.dt * vmax / rho.torus().min_spacing() > 1.0;
    return r;
}

StepReport ParabolicStepper::initial_report() const { return make_report(problem_.rho0, 0); }

std::pair<Field, StepReport> ParabolicStepper::step(const Field& state, int level) {
    if (level != next_level_ || level >= problem_.steps()) {
        throw InvalidArgument("parabolic step: levels must be advanced in order within the run");
    }
    state.require_finite("parabolic step input");
    const Torus& t = state.torus();
    const double dt = problem_.dt;
    double s = std::max(mobility_max_[level], mobility_max_[level + 1]);
    if (previous_) s = std::max(s, mobility_max_[level - 1]);

    Explicit cur = explicit_terms(state, level);
    Spectrum next(t, 1);
    // one IMEX Euler step of size h from rho_hat with explicit terms e
    auto euler = [&](const Explicit& e, double h, Spectrum& out) {
        for (std::size_t b = 0; b < t.nodes(); ++b) {
            const double k2 = -laplacian_[b];
            const Complex r = e.g_hat.at(0, b) - s * e.h_hat.at(0, b);
            out.at(0, b) = (e.rho_hat.at(0, b) + h * r) / (1.0 + h * s * k2);
        }
    };
    if (!previous_) {
        // Start-up: Richardson extrapolation of IMEX Euler (two half steps
        // against one full step) so the first level is second-order accurate
        // and does not seed the parasitic SBDF2 mode.
        Spectrum full(t, 1), half(t, 1);
        euler(cur, dt, full);
        euler(cur, 0.5 * dt, half);
        auto midpoint = [&](const Trajectory& traj) {
            Field m = traj[level];
            m += traj[level + 1];
            m *= 0.5;
            return m;
        };
        const Field a_mid = midpoint(problem_.mobility);
        const Field v_mid = midpoint(problem_.velocity);
        std::optional<Field> b_mid;
        if (problem_.source) b_mid = midpoint(*problem_.source);
        const Explicit mid = explicit_terms(inverse(half), a_mid, v_mid, b_mid ? &*b_mid : nullptr);
        euler(mid, 0.5 * dt, half);
        for (std::size_t b = 0; b < t.nodes(); ++b) next.at(0, b) = 2.0 * half.at(0, b) - full.at(0, b);
    } else {
        for (std::size_t b = 0; b < t.nodes(); ++b) {
            const double k2 = -laplacian_[b];
            const Complex r_cur = cur.g_hat.at(0, b) - s * cur.h_hat.at(0, b);
            const Complex r_prev = previous_->g_hat.at(0, b) - s * previous_->h_hat.at(0, b);
            const Complex rhs = 4.0 * cur.rho_hat.at(0, b) - previous_->rho_hat.at(0, b) +
                                2.0 * dt * (2.0 * r_cur - r_prev);
            next.at(0, b) = rhs / (3.0 + 2.0 * dt * s * k2);
        }
    }
    Field rho = inverse(next);
    if (!rho.all_finite()) {
        throw NonFiniteError("parabolic: non-finite density at level " + std::to_string(level + 1));
    }
    previous_ = std::move(cur);
    ++next_level_;
    StepReport report = make_report(rho, level + 1);
    return {std::move(rho), report};
}

bool ParabolicSolution::any_violation() const {
    return std::any_of(reports.begin(), reports.end(), [](const StepReport& r) { return r.violated; });
}

ParabolicSolution solve(const ParabolicProblem& problem) {
    ParabolicStepper stepper(problem);
    const int n = problem.steps();
    std::vector<Field> levels{problem.rho0};
    std::vector<StepReport> reports{stepper.initial_report()};
    levels.reserve(n + 1);
    reports.reserve(n + 1);
    for (int k = 0; k < n; ++k) {
        auto [rho, report] = stepper.step(levels.back(), k);
        levels.push_back(std::move(rho));
        reports.push_back(report);
    }
    return {Trajectory(problem.mobility.times, std::move(levels)), std::move(reports)};
}

namespace {

Trajectory refine(const Trajectory& traj) {
    std::vector<double> times;
    std::vector<Field> fields;
    for (std::size_t k = 0; k + 1 < traj.levels(); ++k) {
        times.push_back(traj.times[k]);
        fields.push_back(traj.fields[k]);
        Field mid = traj.fields[k];
        mid += traj.fields[k + 1];
        mid *= 0.5;
        times.push_back(0.5 * (traj.times[k] + traj.times[k + 1]));
        fields.push_back(std::move(mid));
    }
    times.push_back(traj.times.back());
    fields.push_back(traj.fields.back());
    return Trajectory(std::move(times), std::move(fields));
}

} // namespace

double estimate_scheme_error(const ParabolicProblem& problem) {
    const ParabolicSolution coarse = solve(problem);
    ParabolicProblem fine_problem{refine(problem.velocity), refine(problem.mobility),
                                  problem.source ? std::optional(refine(*problem.source))
                                                 : std::nullopt,
                                  problem.rho0, problem.t_end, 0.5 * problem.dt, problem.tol_mp};
    const ParabolicSolution fine = solve(fine_problem);
    double err = 0.0;
    for (std::size_t k = 0; k < coarse.rho.levels(); ++k) {
        err = std::max(err, (coarse.rho[k] - fine.rho[2 * k]).sup_norm());
    }
    return err;
}

PositivityReport positivity_guard(const Trajectory& rho, bool form_check) {
    PositivityReport r;
    r.min_rho = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < rho.levels(); ++k) {
        const double m = rho[k].min();
        if (m < r.min_rho) {
            r.min_rho = m;
            r.min_level = k;
        }
    }
    r.positive = r.min_rho > 0.0;
    r.form_attested = form_check;
    r.hard_violation = !r.positive && rho[0].min() > 0.0 && form_check;
    return r;
}

} // namespace awr
