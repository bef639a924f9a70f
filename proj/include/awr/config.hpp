#pragma once

#include "awr/offset.hpp"
#include "awr/picard.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace awr {

/// Run description read from a flat `section.key = value` text file. Lines
/// starting with '#' are comments. Every key is optional; omitted keys keep
/// the defaults below. See README for the key reference.
struct RunConfig {
    // domain
    int dim = 1;
    std::vector<int> n = {64};              ///< one entry per axis (a single entry is broadcast)
    std::vector<double> length = {6.283185307179586};

    // offset
    std::string variant = "power_law";      ///< power_law | singular_rational | singular_reciprocal
    double gamma = 2.0;
    double a = 1.0;
    double alpha = 1.0;
    double beta = 2.0;
    double eps = 1.0;
    double rho_max = 1.0;
    bool nonlocal = false;

    // initial data: "sine", a manufactured catalog id, or "snapshot"
    std::string initial = "sine";
    double rho_mean = 1.0;
    double rho_amplitude = 0.05;
    double u_amplitude = 0.05;
    std::string rho_snapshot;
    std::string u_snapshot;

    // time
    double T_total = 0.05;
    double slab_T = 0.05;
    int M_levels = 10;  ///< time levels per slab

    // tolerances
    double tol_fix = 1e-10;
    double tol_mp = 1e-8;
    int max_iter = 30;

    // transport
    std::string interpolation = "quintic";  ///< quintic | cubic | trig

    // output
    std::string directory = "awr-out";
    int snapshot_stride = 0;  ///< 0 writes only the final level
    int heatmap_axis = 0;     ///< 3D runs: the sliced axis
    int heatmap_slice = 0;

    bool operator==(const RunConfig&) const = default;
};

/// Throws ConfigError naming the line for syntax errors, unknown or repeated
/// keys and badly typed values. Does not validate ranges.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Writes every key, so parse_config(emit_config(c)) == c.
void emit_config(std::ostream& out, const RunConfig& config);

/// Range and consistency checks, file existence and admissibility of the
/// initial density. Throws ConfigError.
void validate(const RunConfig& config);

Torus make_torus(const RunConfig& config);
OffsetModel make_model(const RunConfig& config);
PicardOptions make_options(const RunConfig& config);
InterpMethod parse_interpolation(const std::string& name);

/// (rho0, u0) on the configured torus. Throws ConfigError if the density is
/// not admissible for the offset.
std::pair<Field, Field> initial_data(const RunConfig& config);

} // namespace awr
