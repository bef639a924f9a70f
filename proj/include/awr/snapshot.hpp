#pragma once

#include "awr/grid.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace awr {

/// On-disk field snapshot, little-endian throughout:
///
///   "AWRS" | u32 version | u32 dim | u32 N[dim] | f64 L[dim] |
///   u32 components | f64 time | f64 values[nodes * components]
///
/// Values are row-major over the lattice with components interleaved per node.
inline constexpr std::uint32_t kSnapshotVersion = 1;

struct Snapshot {
    Field field;
    double time = 0.0;
};

void write_snapshot(std::ostream& out, const Field& field, double time);
void write_snapshot(const std::string& path, const Field& field, double time);
Snapshot read_snapshot(std::istream& in);
Snapshot read_snapshot(const std::string& path);

/// Binary PGM (P5) of one component of a 2D field, or of the slice
/// x_axis = index of a 3D field. Linear min-max scaling to 0..255; a
/// constant slice maps to 0. Rows run along the first remaining axis.
void write_heatmap(const std::string& path, const Field& field, int component, int axis,
                   int index);

} // namespace awr
