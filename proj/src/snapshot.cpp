#include "awr/snapshot.hpp"

#include "awr/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <vector>

namespace awr {

namespace {

template <class T>
void put(std::ostream& out, T value) {
    static_assert(sizeof(T) == 4 || sizeof(T) == 8);
    std::array<unsigned char, sizeof(T)> bytes{};
    std::uint64_t bits = 0;
    std::memcpy(&bits, &value, sizeof(T));
    for (std::size_t k = 0; k < sizeof(T); ++k) bytes[k] = static_cast<unsigned char>(bits >> (8 * k));
    out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

template <class T>
T get(std::istream& in) {
    std::array<unsigned char, sizeof(T)> bytes{};
    in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
    if (!in) throw ConfigError("snapshot: unexpected end of file");
    std::uint64_t bits = 0;
    for (std::size_t k = 0; k < sizeof(T); ++k) bits |= std::uint64_t(bytes[k]) << (8 * k);
    T value;
    std::memcpy(&value, &bits, sizeof(T));
    return value;
}

} // namespace

void write_snapshot(std::ostream& out, const Field& field, double time) {
    const Torus& t = field.torus();
    out.write("AWRS", 4);
    put<std::uint32_t>(out, kSnapshotVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.dim()));
    for (int a = 0; a < t.dim(); ++a) put<std::uint32_t>(out, static_cast<std::uint32_t>(t.size(a)));
    for (int a = 0; a < t.dim(); ++a) put<double>(out, t.length(a));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(field.components()));
    put<double>(out, time);
    for (std::size_t i = 0; i < field.nodes(); ++i) {
        for (int c = 0; c < field.components(); ++c) put<double>(out, field.at(c, i));
    }
}

void write_snapshot(const std::string& path, const Field& field, double time) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open snapshot for writing: " + path);
    write_snapshot(out, field, time);
    if (!out) throw ConfigError("failed writing snapshot: " + path);
}

Snapshot read_snapshot(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "AWRS", 4) != 0) throw ConfigError("snapshot: bad magic");
    const auto version = get<std::uint32_t>(in);
    if (version != kSnapshotVersion) {
        throw ConfigError("snapshot: unsupported version " + std::to_string(version));
    }
    const auto dim = static_cast<int>(get<std::uint32_t>(in));
    if (dim < 1 || dim > 3) throw ConfigError("snapshot: bad dimension");
    std::array<int, 3> sizes{8, 8, 8};
    std::array<double, 3> lengths{1.0, 1.0, 1.0};
    for (int a = 0; a < dim; ++a) sizes[a] = static_cast<int>(get<std::uint32_t>(in));
    for (int a = 0; a < dim; ++a) lengths[a] = get<double>(in);
    const auto components = static_cast<int>(get<std::uint32_t>(in));
    const double time = get<double>(in);
    Torus torus = [&] {
        try {
            return Torus(dim, sizes, lengths);
        } catch (const InvalidArgument& e) {
            throw ConfigError(std::string("snapshot: ") + e.what());
        }
    }();
    if (components != 1 && components != dim) throw ConfigError("snapshot: bad component count");
    Field f(torus, components);
    for (std::size_t i = 0; i < f.nodes(); ++i) {
        for (int c = 0; c < components; ++c) f.at(c, i) = get<double>(in);
    }
    return {std::move(f), time};
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open snapshot: " + path);
    return read_snapshot(in);
}

void write_heatmap(const std::string& path, const Field& field, int component, int axis,
                   int index) {
    const Torus& t = field.torus();
    if (t.dim() < 2) throw InvalidArgument("heatmap needs a 2D or 3D field");
    if (component < 0 || component >= field.components()) {
        throw InvalidArgument("heatmap: component out of range");
    }
    std::array<int, 2> axes{0, 1};
    if (t.dim() == 3) {
        if (axis < 0 || axis > 2) throw InvalidArgument("heatmap: axis out of range");
        if (index < 0 || index >= t.size(axis)) throw InvalidArgument("heatmap: index out of range");
        int k = 0;
        for (int a = 0; a < 3; ++a) {
            if (a != axis) axes[k++] = a;
        }
    }
    const int rows = t.size(axes[0]);
    const int cols = t.size(axes[1]);
    std::vector<double> slice(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            std::array<int, 3> idx{0, 0, 0};
            if (t.dim() == 3) idx[axis] = index;
            idx[axes[0]] = r;
            idx[axes[1]] = c;
            slice[static_cast<std::size_t>(r) * cols + c] = field.at(component, t.ravel(idx));
        }
    }
    double lo = slice.front(), hi = slice.front();
    for (double v : slice) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open heatmap for writing: " + path);
    out << "P5\n" << cols << " " << rows << "\n255\n";
    for (double v : slice) {
        const double s = hi > lo ? (v - lo) / (hi - lo) : 0.0;
        const auto byte = static_cast<unsigned char>(std::lround(255.0 * s));
        out.put(static_cast<char>(byte));
    }
}

} // namespace awr
