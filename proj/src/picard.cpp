#include "awr/picard.hpp"

#include "awr/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace awr {

namespace {

/// Re-raises solver errors with a location prefix, keeping their type.
template <class F>
auto with_context(const std::string& where, F&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const DomainViolation& e) {
        throw DomainViolation(where + ": " + e.what());
    } catch (const NonFiniteError& e) {
        throw NonFiniteError(where + ": " + e.what());
    } catch (const DegenerateDissipation& e) {
        throw DegenerateDissipation(where + ": " + e.what());
    }
}

std::string where(int iter, const char* stage, int level = -1) {
    std::ostringstream s;
    s << "iteration " << iter << ", " << stage;
    if (level >= 0) s << " at level " << level;
    return s.str();
}

Trajectory sample_in_time(const std::function<Field(double)>& fn, const std::vector<double>& times) {
    std::vector<Field> fields;
    fields.reserve(times.size());
    for (double t : times) fields.push_back(fn(t));
    return Trajectory(times, std::move(fields));
}

Field offset_gradient(const OffsetModel& model, const Field& rho, const std::optional<Potential>& phi) {
    Field g = grad_p_field(model, rho);
    if (phi) g += phi->grad_phi;
    return g;
}

double potential_residual(const Field& rho, const Potential& pot) {
    Field r = laplacian(pot.phi);
    r *= -1.0;
    r -= rho;
    const double m = mean(rho);
    for (auto& v : r.values()) v += m;
    return r.sup_norm();
}

} // namespace

SlabState init_slab(const Field& rho0, const Field& u0, const OffsetModel& model, double T,
                    int levels, double t0) {
    if (levels < 1) throw InvalidArgument("init_slab: need at least one time step");
    if (!(T > 0.0)) throw InvalidArgument("init_slab: slab length must be positive");
    if (!rho0.is_scalar()) throw InvalidArgument("init_slab: rho0 must be scalar");
    if (rho0.torus() != u0.torus() || u0.components() != u0.torus().dim()) {
        throw InvalidArgument("init_slab: u0 must be a vector field on the density torus");
    }
    rho0.require_finite("initial density");
    u0.require_finite("initial velocity");
    model.require_admissible(rho0, "initial density");

    std::optional<Potential> phi0;
    if (model.newtonian()) phi0 = solve_potential(rho0);
    Field w0 = u0;
    w0 += offset_gradient(model, rho0, phi0);

    const auto times = uniform_times(t0, T / levels, levels);
    SlabState s;
    s.rho = Trajectory::constant(rho0, times);
    s.w = Trajectory::constant(w0, times);
    s.u = Trajectory::constant(u0, times);
    if (phi0) s.phi = std::vector<Potential>(times.size(), *phi0);
    return s;
}

std::pair<SlabState, IterationReport> iterate_once(const SlabState& state, const OffsetModel& model,
                                                   const PicardOptions& options) {
    const int iter = state.iteration + 1;
    const auto& times = state.times();
    const double dt = state.dt();
    const double T = times.back() - times.front();
    const std::size_t nlev = times.size();
    const InterpMethod method = options.transport.method;

    SlabState next;
    next.iteration = iter;

    // (1) w^{n+1}_t + u^n . grad w^{n+1} = g
    {
        const SampledTrajectory u(state.u, method);
        std::optional<SampledTrajectory> g;
        if (options.forcing.transport) g.emplace(sample_in_time(options.forcing.transport, times), method);
        next.w = with_context(where(iter, "transport"), [&] {
            return advect(state.w[0], u, g ? &*g : nullptr, T, dt, options.transport);
        });
    }

    // (2) mobility from the previous density, (3) parabolic solve with the
    // new w, shifted by grad Phi_n for the Newtonian closure
    std::vector<Field> mob, drift;
    mob.reserve(nlev);
    drift.reserve(nlev);
    for (std::size_t k = 0; k < nlev; ++k) {
        mob.push_back(with_context(where(iter, "mobility", k), [&] { return mobility_field(model, state.rho[k]); }));
        Field v = next.w[k];
        if (state.phi) v -= (*state.phi)[k].grad_phi;
        drift.push_back(std::move(v));
    }
    next.mobility = Trajectory(times, std::move(mob));
    next.drift = Trajectory(times, std::move(drift));
    ParabolicProblem problem{next.drift, next.mobility, std::nullopt, state.rho[0], T, dt, options.tol_mp};
    if (options.forcing.parabolic) problem.source = sample_in_time(options.forcing.parabolic, times);
    ParabolicSolution sol = with_context(where(iter, "parabolic"), [&] { return solve(problem); });
    next.rho = std::move(sol.rho);
    next.parabolic_reports = std::move(sol.reports);

    // (4) potential, (5) closure velocity
    std::vector<Field> u;
    u.reserve(nlev);
    if (model.newtonian()) next.phi.emplace();
    for (std::size_t k = 0; k < nlev; ++k) {
        std::optional<Potential> phi;
        if (model.newtonian()) {
            phi = solve_potential(next.rho[k]);
            next.phi->push_back(*phi);
        }
        u.push_back(with_context(where(iter, "closure", k), [&] {
            return closure_u(model, next.w[k], next.rho[k], phi);
        }));
    }
    next.u = Trajectory(times, std::move(u));

    // (6) contraction metric and monitors
    IterationReport r;
    r.iter = iter;
    double h3_sq = 0.0, rho_h2 = 0.0;
    r.min_rho = std::numeric_limits<double>::infinity();
    r.max_rho = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < nlev; ++k) {
        r.delta_w = std::max(r.delta_w, sobolev_norm(next.w[k] - state.w[k], 2));
        const Field drho = next.rho[k] - state.rho[k];
        rho_h2 = std::max(rho_h2, sobolev_norm(drho, 2));
        if (k > 0) h3_sq += dt * std::pow(sobolev_norm(drho, 3), 2);
        r.bound_M = std::max(r.bound_M, sobolev_norm(next.w[k], 3) + sobolev_norm(next.rho[k], 3));
        r.min_rho = std::min(r.min_rho, next.rho[k].min());
        r.max_rho = std::max(r.max_rho, next.rho[k].max());
    }
    r.delta_rho = rho_h2 + std::sqrt(h3_sq);
    const double delta = r.delta_w + r.delta_rho;
    r.kappa = (iter > 1 && state.last_delta > 0.0) ? delta / state.last_delta : 0.0;
    r.mass = next.parabolic_reports.back().mass;
    r.envelope_violated = std::any_of(next.parabolic_reports.begin(), next.parabolic_reports.end(),
                                      [](const StepReport& s) { return s.violated; });
    r.converged = delta <= options.tol_fix;
    next.last_delta = delta;
    return {std::move(next), r};
}

bool SlabAudit::passed() const {
    return positive && envelopes_ok && barrier_ok && jacobian_min > 0.0 && mass_drift <= 1e-10 &&
           potential_residual <= 1e-12;
}

SlabAudit audit_slab(const SlabState& state, const OffsetModel& model, const PicardOptions& options) {
    SlabAudit a;
    const Trajectory& rho = state.rho;
    const PositivityReport pos = positivity_guard(rho, true);
    a.positive = pos.positive;
    a.min_rho = pos.min_rho;
    a.max_rho = -std::numeric_limits<double>::infinity();
    const double m0 = integral(rho[0]);
    for (std::size_t k = 0; k < rho.levels(); ++k) {
        a.max_rho = std::max(a.max_rho, rho[k].max());
        // a source changes the mass on purpose
        if (!options.forcing.parabolic) a.mass_drift = std::max(a.mass_drift, std::abs(integral(rho[k]) - m0) / std::abs(m0));
    }

    a.tol_mp = options.tol_mp;
    if (state.iteration > 0 && !options.forcing.parabolic) {
        ParabolicProblem p{state.drift, state.mobility, std::nullopt, rho[0], rho.end() - rho.start(),
                           state.dt(), options.tol_mp};
        a.tol_mp += estimate_scheme_error(p);
        for (std::size_t k = 0; k < state.parabolic_reports.size(); ++k) {
            const StepReport& r = state.parabolic_reports[k];
            if (r.min_rho < r.maxmin_lower_bound - a.tol_mp || r.max_rho > r.maxmin_upper_bound + a.tol_mp) {
                a.envelopes_ok = false;
            }
        }
    }

    if (model.is_singular()) {
        const double sup = model.rho_sup();
        a.theta = std::min(rho[0].min(), sup - rho[0].max());
        a.barrier_ok = a.min_rho > 0.5 * a.theta && a.max_rho < sup - 0.5 * a.theta;
    }

    const auto flow = flow_diagnostics(SampledTrajectory(state.u, options.transport.method),
                                       rho.end() - rho.start(), options.transport.substeps);
    a.jacobian_min = flow.jacobian_min;
    a.grad_x_minus_identity = flow.sup_grad_minus_identity;

    if (state.phi) {
        for (std::size_t k = 0; k < rho.levels(); ++k) {
            a.potential_residual = std::max(a.potential_residual, potential_residual(rho[k], (*state.phi)[k]));
        }
    }
    return a;
}

SlabResult solve_slab(const Field& rho0, const Field& u0, const OffsetModel& model, double T,
                      const PicardOptions& options, double t0) {
    if (options.max_iter < 1) throw InvalidArgument("solve_slab: max_iter must be >= 1");
    SlabResult result;
    SlabState state = init_slab(rho0, u0, model, T, options.levels, t0);
    std::vector<double> kappas;
    for (int n = 0; n < options.max_iter; ++n) {
        auto [next, report] = iterate_once(state, model, options);
        state = std::move(next);
        result.reports.push_back(report);
        if (report.iter > 1) kappas.push_back(report.kappa);
        if (report.converged) {
            result.audit = audit_slab(state, model, options);
            result.state = std::move(state);
            return result;
        }
    }
    std::ostringstream msg;
    msg << "Picard iteration on [" << t0 << ", " << t0 + T << "] did not reach tol_fix "
        << options.tol_fix << " in " << options.max_iter << " iterations (last delta "
        << state.last_delta << ")";
    throw ConvergenceFailure(msg.str(), std::move(kappas));
}

MarchResult march(const Field& rho0, const Field& u0, const OffsetModel& model, double T_total,
                  double slab_T, const PicardOptions& options, const SlabObserver& observer) {
    const int slabs = step_count(T_total, slab_T);
    MarchResult out;
    std::vector<double> times;
    std::vector<Field> rho, w, u;
    Field r0 = rho0, v0 = u0;
    for (int s = 0; s < slabs; ++s) {
        const double start = s * slab_T;
        SlabResult slab = [&] {
            try {
                return solve_slab(r0, v0, model, slab_T, options, start);
            } catch (const ConvergenceFailure& e) {
                throw ConvergenceFailure("slab starting at t=" + std::to_string(start) + ": " + e.what(),
                                         e.kappa_history);
            } catch (const DomainViolation& e) {
                throw DomainViolation("slab starting at t=" + std::to_string(start) + ": " + e.what());
            } catch (const NonFiniteError& e) {
                throw NonFiniteError("slab starting at t=" + std::to_string(start) + ": " + e.what());
            } catch (const DegenerateDissipation& e) {
                throw DegenerateDissipation("slab starting at t=" + std::to_string(start) + ": " + e.what());
            }
        }();
        const SlabState& st = slab.state;
        for (std::size_t k = (s == 0 ? 0 : 1); k < st.rho.levels(); ++k) {
            times.push_back(st.rho.times[k]);
            rho.push_back(st.rho[k]);
            w.push_back(st.w[k]);
            u.push_back(st.u[k]);
        }
        r0 = st.rho.fields.back();
        v0 = st.u.fields.back();
        if (observer) observer(slab);
        out.slabs.push_back({start, slab.reports, slab.audit});
    }
    out.rho = Trajectory(times, std::move(rho));
    out.w = Trajectory(times, std::move(w));
    out.u = Trajectory(std::move(times), std::move(u));
    return out;
}

Point momentum(const Field& rho, const Field& w) {
    Point m{0.0, 0.0, 0.0};
    for (int a = 0; a < w.components(); ++a) m[a] = integral(multiply(rho, w.component_field(a)));
    return m;
}

double momentum_drift(const Trajectory& rho, const Trajectory& w) {
    const Point m0 = momentum(rho[0], w[0]);
    double drift = 0.0;
    for (std::size_t k = 1; k < rho.levels(); ++k) {
        const Point m = momentum(rho[k], w[k]);
        for (int a = 0; a < w.components(); ++a) drift = std::max(drift, std::abs(m[a] - m0[a]));
    }
    return drift;
}

FormulationResidual formulation_residual(const Trajectory& rho, const Trajectory& w,
                                         const OffsetModel& model) {
    if (rho.levels() < 3) throw InvalidArgument("formulation_residual: need at least three levels");
    const int dim = rho.torus().dim();
    auto velocity = [&](std::size_t k) {
        std::optional<Potential> phi;
        if (model.newtonian()) phi = solve_potential(rho[k]);
        return closure_u(model, w[k], rho[k], phi);
    };
    auto rho_w = [&](std::size_t k) {
        Field m = w[k];
        for (int a = 0; a < dim; ++a) m.set_component(a, multiply(rho[k], w[k].component_field(a)));
        return m;
    };
    FormulationResidual res;
    for (std::size_t k = 1; k + 1 < rho.levels(); ++k) {
        const double span = rho.times[k + 1] - rho.times[k - 1];
        const Field u = velocity(k);

        Field r = rho[k + 1] - rho[k - 1];
        r *= 1.0 / span;
        r += divergence(multiply(rho[k], u));
        res.mass = std::max(res.mass, r.sup_norm());

        Field dm = rho_w(k + 1) - rho_w(k - 1);
        dm *= 1.0 / span;
        const Field m = rho_w(k);
        for (int a = 0; a < dim; ++a) {
            Field flux = multiply(m.component_field(a), u);
            Field ra = dm.component_field(a);
            ra += divergence(flux);
            res.momentum = std::max(res.momentum, ra.sup_norm());
        }
    }
    return res;
}

} // namespace awr
