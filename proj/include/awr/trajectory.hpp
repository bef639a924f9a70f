#pragma once

#include "awr/grid.hpp"
#include "awr/interpolation.hpp"

#include <vector>

namespace awr {

/// Fields stored at strictly increasing time levels, all on one torus with one
/// component count. Values between levels are linear in time.
struct Trajectory {
    std::vector<double> times;
    std::vector<Field> fields;

    Trajectory() = default;
    Trajectory(std::vector<double> t, std::vector<Field> f);

    /// The same field at every level.
    static Trajectory constant(const Field& f, std::vector<double> times);

    std::size_t levels() const { return times.size(); }
    const Torus& torus() const { return fields.front().torus(); }
    int components() const { return fields.front().components(); }
    double start() const { return times.front(); }
    double end() const { return times.back(); }
    const Field& operator[](std::size_t level) const { return fields[level]; }
    Field& operator[](std::size_t level) { return fields[level]; }

    /// Linear-in-time sample; throws InvalidArgument outside [start, end].
    Field at_time(double t) const;

    /// Throws InvalidArgument if the invariants fail.
    void validate() const;
};

/// t0, t0 + dt, ..., t0 + steps*dt.
std::vector<double> uniform_times(double t0, double dt, int steps);

/// Number of steps of size dt in a span, requiring divisibility to 1e-12.
int step_count(double span, double dt);

/// Continuous-in-space, linear-in-time evaluation of a trajectory. Holds one
/// interpolant per level.
class SampledTrajectory {
public:
    explicit SampledTrajectory(Trajectory traj, InterpMethod method = InterpMethod::QuinticSpline);

    const Trajectory& trajectory() const { return traj_; }
    const Torus& torus() const { return traj_.torus(); }
    int components() const { return traj_.components(); }
    double start() const { return traj_.start(); }
    double end() const { return traj_.end(); }

    double value(int component, double t, const Point& x) const;
    Point vector_value(double t, const Point& x) const;

private:
    /// Level index and weight of the upper level for time t.
    std::pair<std::size_t, double> locate(double t) const;

    Trajectory traj_;
    std::vector<Interpolant> interp_;
};

using VelocityTrajectory = SampledTrajectory;

} // namespace awr
