#include "awr/trajectory.hpp"

#include "awr/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace awr {

namespace {

double time_slack(double a, double b) { return 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

} // namespace

Trajectory::Trajectory(std::vector<double> t, std::vector<Field> f)
    : times(std::move(t)), fields(std::move(f)) {
    validate();
}

Trajectory Trajectory::constant(const Field& f, std::vector<double> t) {
    std::vector<Field> fields(t.size(), f);
    return Trajectory(std::move(t), std::move(fields));
}

void Trajectory::validate() const {
    if (times.empty() || times.size() != fields.size()) {
        throw InvalidArgument("trajectory: times and fields must be non-empty and aligned");
    }
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] > times[k - 1])) {
            throw InvalidArgument("trajectory: times must be strictly increasing");
        }
        if (fields[k].torus() != fields[0].torus() ||
            fields[k].components() != fields[0].components()) {
            throw InvalidArgument("trajectory: all levels must share torus and rank");
        }
    }
}

Field Trajectory::at_time(double t) const {
    if (t < start() - time_slack(t, start()) || t > end() + time_slack(t, end())) {
        std::ostringstream msg;
        msg << "time " << t << " outside trajectory span [" << start() << ", " << end() << "]";
        throw InvalidArgument(msg.str());
    }
    if (levels() == 1) return fields.front();
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t hi = std::clamp<std::size_t>(it - times.begin(), 1, levels() - 1);
    const double theta = std::clamp((t - times[hi - 1]) / (times[hi] - times[hi - 1]), 0.0, 1.0);
    Field out = fields[hi - 1];
    out *= (1.0 - theta);
    out.axpy(theta, fields[hi]);
    return out;
}

std::vector<double> uniform_times(double t0, double dt, int steps) {
    std::vector<double> t(steps + 1);
    for (int k = 0; k <= steps; ++k) t[k] = t0 + k * dt;
    return t;
}

int step_count(double span, double dt) {
    if (!(dt > 0.0) || !(span > 0.0)) throw InvalidArgument("time step and span must be positive");
    const double ratio = span / dt;
    const long steps = std::lround(ratio);
    if (steps < 1 || std::abs(steps * dt - span) > 1e-12 * std::max(1.0, span)) {
        std::ostringstream msg;
        msg << "dt = " << dt << " does not divide the span " << span;
        throw InvalidArgument(msg.str());
    }
    return static_cast<int>(steps);
}

SampledTrajectory::SampledTrajectory(Trajectory traj, InterpMethod method)
    : traj_(std::move(traj)) {
    traj_.validate();
    interp_.reserve(traj_.levels());
    for (const auto& f : traj_.fields) interp_.emplace_back(f, method);
}

std::pair<std::size_t, double> SampledTrajectory::locate(double t) const {
    const auto& times = traj_.times;
    if (t < start() - time_slack(t, start()) || t > end() + time_slack(t, end())) {
        std::ostringstream msg;
        msg << "time " << t << " outside trajectory span [" << start() << ", " << end() << "]";
        throw InvalidArgument(msg.str());
    }
    if (times.size() == 1) return {0, 0.0};
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t hi = std::clamp<std::size_t>(it - times.begin(), 1, times.size() - 1);
    const double theta = std::clamp((t - times[hi - 1]) / (times[hi] - times[hi - 1]), 0.0, 1.0);
    return {hi, theta};
}

double SampledTrajectory::value(int component, double t, const Point& x) const {
    const auto [hi, theta] = locate(t);
    if (theta == 1.0) return interp_[hi](component, x);
    if (hi == 0 || theta == 0.0) return interp_[hi == 0 ? 0 : hi - 1](component, x);
    return (1.0 - theta) * interp_[hi - 1](component, x) + theta * interp_[hi](component, x);
}

Point SampledTrajectory::vector_value(double t, const Point& x) const {
    Point v{0.0, 0.0, 0.0};
    for (int c = 0; c < components(); ++c) v[c] = value(c, t, x);
    return v;
}

} // namespace awr
