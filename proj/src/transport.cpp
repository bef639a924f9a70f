#include "awr/transport.hpp"

#include "awr/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace awr {

namespace {

struct PathPoint {
    double t;
    Point x;
};

Point axpy(const Point& x, double s, const Point& v, int dim) {
    Point out = x;
    for (int a = 0; a < dim; ++a) out[a] += s * v[a];
    return out;
}

/// Classical RK4 from (t_from, x0) to t_to. Records every substep point when
/// `path` is given (including both ends).
Point trace_node(const VelocityTrajectory& v, const Point& x0, double t_from, double t_to,
                 int substeps, std::vector<PathPoint>* path) {
    const int dim = v.torus().dim();
    const double h = (t_to - t_from) / substeps;
    Point x = x0;
    double t = t_from;
    if (path) {
        path->clear();
        path->push_back({t, x});
    }
    for (int s = 0; s < substeps; ++s) {
        const Point k1 = v.vector_value(t, x);
        const Point k2 = v.vector_value(t + 0.5 * h, axpy(x, 0.5 * h, k1, dim));
        const Point k3 = v.vector_value(t + 0.5 * h, axpy(x, 0.5 * h, k2, dim));
        const Point k4 = v.vector_value(t + h, axpy(x, h, k3, dim));
        for (int a = 0; a < dim; ++a) x[a] += h / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
        // the last substep lands exactly on t_to
        t = s + 1 == substeps ? t_to : t_from + (s + 1) * h;
        if (path) path->push_back({t, x});
    }
    return x;
}

double wrap(double x, double length) {
    double r = std::fmod(x, length);
    if (r < 0.0) r += length;
    return r >= length ? 0.0 : r;
}

void require_span(const SampledTrajectory& v, double t) {
    const double slack = 1e-12 * std::max(1.0, std::abs(t));
    if (t < v.start() - slack || t > v.end() + slack) {
        std::ostringstream msg;
        msg << "time " << t << " outside trajectory span [" << v.start() << ", " << v.end() << "]";
        throw InvalidArgument(msg.str());
    }
}

} // namespace

Feet trace_feet(const VelocityTrajectory& v, double t_from, double t_to, int substeps) {
    if (substeps < 1) throw InvalidArgument("trace_feet: substeps must be >= 1");
    if (!(t_from > t_to)) throw InvalidArgument("trace_feet: requires t_from > t_to");
    if (v.components() != v.torus().dim()) throw InvalidArgument("trace_feet: vector velocity required");
    require_span(v, t_from);
    require_span(v, t_to);
    const Torus& t = v.torus();
    Feet feet{Field::vector(t), Field::vector(t)};
    for (std::size_t i = 0; i < t.nodes(); ++i) {
        const Point foot = trace_node(v, t.node(i), t_from, t_to, substeps, nullptr);
        for (int a = 0; a < t.dim(); ++a) {
            feet.unwrapped.at(a, i) = foot[a];
            feet.wrapped.at(a, i) = wrap(foot[a], t.length(a));
        }
    }
    return feet;
}

Trajectory advect(const Field& eta0, const VelocityTrajectory& v,
                  const SampledTrajectory* source, double t_end, double dt,
                  const TransportOptions& options) {
    if (options.substeps < 1) throw InvalidArgument("advect: substeps must be >= 1");
    if (eta0.torus() != v.torus()) throw InvalidArgument("advect: data and velocity tori differ");
    if (source && (source->torus() != eta0.torus() || source->components() != eta0.components())) {
        throw InvalidArgument("advect: source must match the transported field");
    }
    eta0.require_finite("advect initial data");
    const int steps = step_count(t_end, dt);
    const double t0 = v.start();
    const auto times = uniform_times(t0, dt, steps);
    require_span(v, times.back());
    if (source) {
        require_span(*source, t0);
        require_span(*source, times.back());
    }

    const Torus& t = eta0.torus();
    const int ncomp = eta0.components();
    std::vector<Field> levels;
    levels.reserve(steps + 1);
    levels.push_back(eta0);
    std::vector<PathPoint> path;
    for (int k = 0; k < steps; ++k) {
        std::vector<Interpolant> interp;
        for (int c = 0; c < ncomp; ++c) interp.emplace_back(levels[k].component_field(c), options.method);
        Field next(t, ncomp);
        for (std::size_t i = 0; i < t.nodes(); ++i) {
            const Point foot = trace_node(v, t.node(i), times[k + 1], times[k], options.substeps,
                                          source ? &path : nullptr);
            for (int c = 0; c < ncomp; ++c) {
                double value = interp[c](foot);
                if (source) {
                    double integral = 0.0;
                    double prev = source->value(c, path[0].t, path[0].x);
                    for (std::size_t j = 1; j < path.size(); ++j) {
                        const double cur = source->value(c, path[j].t, path[j].x);
                        integral += 0.5 * (prev + cur) * (path[j - 1].t - path[j].t);
                        prev = cur;
                    }
                    value += integral;
                }
                next.at(c, i) = value;
            }
        }
        if (!next.all_finite()) {
            throw NonFiniteError("advect: non-finite value at step " + std::to_string(k + 1));
        }
        levels.push_back(std::move(next));
    }
    return Trajectory(times, std::move(levels));
}

FlowMapDiagnostics flow_diagnostics(const VelocityTrajectory& v, double T, int substeps_per_level) {
    if (!(T > 0.0)) throw InvalidArgument("flow_diagnostics: T must be positive");
    const double t_end = v.start() + T;
    require_span(v, t_end);
    const auto& times = v.trajectory().times;
    const auto spanned = std::count_if(times.begin(), times.end(),
                                       [&](double s) { return s > v.start() && s <= t_end + 1e-12; });
    const int substeps = std::max<int>(16, substeps_per_level * std::max<long>(1, spanned));

    const Torus& t = v.torus();
    const int dim = t.dim();
    Field disp = Field::vector(t);
    for (std::size_t i = 0; i < t.nodes(); ++i) {
        const Point y = t.node(i);
        const Point x = trace_node(v, y, v.start(), t_end, substeps, nullptr);
        for (int a = 0; a < dim; ++a) disp.at(a, i) = x[a] - y[a];
    }

    FlowMapDiagnostics diag{0.0, std::numeric_limits<double>::infinity(),
                            -std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < t.nodes(); ++i) {
        const auto idx = t.unravel(i);
        double jac[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        for (int j = 0; j < dim; ++j) {
            auto up = idx, down = idx;
            up[j] = (idx[j] + 1) % t.size(j);
            down[j] = (idx[j] - 1 + t.size(j)) % t.size(j);
            const std::size_t iu = t.ravel(up), id = t.ravel(down);
            for (int c = 0; c < dim; ++c) {
                const double d = (disp.at(c, iu) - disp.at(c, id)) / (2.0 * t.spacing(j));
                jac[c][j] += d;
                diag.sup_grad_minus_identity = std::max(diag.sup_grad_minus_identity, std::abs(d));
            }
        }
        double det = 0.0;
        if (dim == 1) {
            det = jac[0][0];
        } else if (dim == 2) {
            det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        } else {
            det = jac[0][0] * (jac[1][1] * jac[2][2] - jac[1][2] * jac[2][1]) -
                  jac[0][1] * (jac[1][0] * jac[2][2] - jac[1][2] * jac[2][0]) +
                  jac[0][2] * (jac[1][0] * jac[2][1] - jac[1][1] * jac[2][0]);
        }
        diag.jacobian_min = std::min(diag.jacobian_min, det);
        diag.jacobian_max = std::max(diag.jacobian_max, det);
    }
    return diag;
}

} // namespace awr
