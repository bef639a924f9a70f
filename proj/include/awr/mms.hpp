#pragma once

#include "awr/interpolation.hpp"
#include "awr/offset.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace awr {

/// Closed-form (rho*, w*) with the forcings that make them exact solutions of
/// w_t + u.grad w = g and rho_t + div(rho v) - div(a grad rho) = b.
///
/// Catalog ids: "constant", "heat-mode", "traveling-wave", "product".
class ManufacturedCase {
public:
    using Scalar = std::function<double(double t, const Point& x)>;
    using Vector = std::function<double(int component, double t, const Point& x)>;

    ManufacturedCase(std::string id, OffsetModel model, Torus torus, Scalar rho, Scalar rho_t, Vector w,
                     Vector w_t, std::optional<double> constant_mobility = std::nullopt,
                     std::optional<Point> phase_velocity = std::nullopt);

    const std::string& id() const { return id_; }
    const OffsetModel& model() const { return model_; }
    const Torus& torus() const { return torus_; }

    Field rho(double t) const;
    Field rho_t(double t) const;
    Field w(double t) const;
    Field w_t(double t) const;
    /// u* = closure(w*, rho*) including the potential for the Newtonian closure.
    Field u(double t) const;
    /// Velocity seen by the continuity equation: w*, minus grad Phi* when nonlocal.
    Field drift(double t) const;
    /// a(rho*): the model's rho p'(rho), or the case's constant mobility.
    Field mobility(double t) const;

    /// g = w*_t + (u* . grad) w*, spectral derivatives.
    Field forcing_transport(double t) const;
    /// b = rho*_t + div(rho* v*) - div(a grad rho*), spectral derivatives.
    Field forcing_parabolic(double t) const;

    /// Largest sup-norm gap between the forcings and the same identities
    /// evaluated through the expanded (non-conservative) route.
    double forcing_audit(double t) const;

    /// Heat-mode fixes the mobility; such cases cannot drive the coupled scheme.
    bool has_constant_mobility() const { return constant_mobility_.has_value(); }
    /// Constant velocity that translates w* exactly with zero forcing, if any.
    const std::optional<Point>& phase_velocity() const { return phase_velocity_; }

private:
    std::string id_;
    OffsetModel model_;
    Torus torus_;
    Scalar rho_, rho_t_;
    Vector w_, w_t_;
    std::optional<double> constant_mobility_;
    std::optional<Point> phase_velocity_;
};

/// Heat-mode diffusivity.
inline constexpr double kHeatModeNu = 0.1;

/// Builds a catalog case on a torus. Density levels scale with the model:
/// mean 1 for PowerLaw, 0.7 rho_sup for singular closures, so rho* stays in
/// [0.5, 0.9] rho_sup. Throws InvalidArgument for an unknown id and
/// DomainViolation if rho* is inadmissible.
ManufacturedCase build_case(const std::string& id, const OffsetModel& model, const Torus& torus);

std::vector<std::string> catalog_ids();

enum class StudyKind {
    TransportSpatial,   ///< w* translated by its phase velocity, h refined
    TransportTemporal,  ///< w* under u*(t) with forcing g, dt refined
    ParabolicTemporal,  ///< rho* with v*, a(rho*), b sampled exactly, dt refined
    Coupled,            ///< full Picard scheme with g and b, h and dt refined
};

struct StudyConfig {
    std::string case_id = "traveling-wave";
    OffsetModel model = OffsetModel::power_law(2.0);
    int dim = 1;
    StudyKind kind = StudyKind::TransportTemporal;
    /// Per-row lattice sizes and steps; a single entry is broadcast.
    std::vector<int> resolutions;
    std::vector<double> dts;
    double t_end = 0.5;
    InterpMethod method = InterpMethod::QuinticSpline;
    double tol_fix = 1e-10;
};

struct StudyRow {
    double h = 0.0;
    double dt = 0.0;
    double err_sup = 0.0;
    double err_l2 = 0.0;
    /// Orders against the previous row, with respect to h when h changes and
    /// to dt otherwise. NaN on the first row.
    double order_sup = 0.0;
    double order_l2 = 0.0;
};

std::vector<StudyRow> convergence_study(const StudyConfig& config);

/// Versioned CSV: h, dt, err_sup, err_l2, order_sup, order_l2.
void write_study_csv(std::ostream& out, const std::vector<StudyRow>& rows);

const char* study_kind_name(StudyKind kind);

} // namespace awr
