#include "awr/error.hpp"
#include "awr/grid.hpp"
#include "awr/interpolation.hpp"
#include "awr/snapshot.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace awr;
using awr::testing::random_series;
using std::numbers::pi;

namespace {

double max_diff(const Field& a, const Field& b) { return (a - b).sup_norm(); }

} // namespace

TEST(Torus, RejectsBadSizes) {
    EXPECT_THROW(Torus::uniform(1, 6), InvalidArgument);
    EXPECT_THROW(Torus::uniform(1, 9), InvalidArgument);
    EXPECT_THROW(Torus::uniform(4, 8), InvalidArgument);
    EXPECT_THROW(Torus(2, {8, 8, 1}, {1.0, -1.0, 1.0}), InvalidArgument);
    const Torus t(2, {8, 16, 1}, {1.0, 2.0, 0.0});
    EXPECT_EQ(t.nodes(), 128u);
    EXPECT_DOUBLE_EQ(t.spacing(1), 0.125);
}

TEST(Torus, RavelRoundTrip) {
    const Torus t(3, {8, 10, 12}, {1, 1, 1});
    for (std::size_t i = 0; i < t.nodes(); i += 37) EXPECT_EQ(t.ravel(t.unravel(i)), i);
}

TEST(Transform, ConstantField) {
    for (int dim = 1; dim <= 3; ++dim) {
        const Torus t = Torus::uniform(dim, 8);
        const Spectrum s = transform(Field::constant(t, 1, 1.0));
        EXPECT_NEAR(s.at(0, 0).real(), 1.0, 1e-15);
        for (std::size_t b = 1; b < t.nodes(); ++b) EXPECT_EQ(std::abs(s.at(0, b)), 0.0);
    }
}

TEST(Transform, SingleSineMode) {
    const Torus t = Torus::uniform(1, 32);
    const Spectrum s = transform(Field::sample(t, [](const Point& x) { return std::sin(x[0]); }));
    for (std::size_t b = 0; b < t.nodes(); ++b) {
        const int k = t.mode(0, static_cast<int>(b));
        if (std::abs(k) == 1) {
            EXPECT_NEAR(std::abs(s.at(0, b)), 0.5, 1e-15);
        } else {
            EXPECT_LT(std::abs(s.at(0, b)), 1e-16);
        }
    }
    // conjugate symmetry of a real field
    EXPECT_NEAR(std::abs(s.coefficient(0, {1, 0, 0}) - std::conj(s.coefficient(0, {-1, 0, 0}))),
                0.0, 1e-16);
}

TEST(Transform, RoundTripAndParseval) {
    for (int dim = 1; dim <= 3; ++dim) {
        const Torus t(dim, {16, 12, 10}, {2 * pi, 3.0, 5.0});
        const Field f = Field::sample(t, [&](const Point& x) {
            return std::exp(std::sin(2 * pi * x[0] / t.length(0))) +
                   (dim > 1 ? std::cos(2 * pi * x[1] / t.length(1)) : 0.0);
        });
        const Field back = inverse(transform(f));
        EXPECT_LE(max_diff(f, back), 1e-13 * f.sup_norm());

        double quad = 0.0;
        for (double v : f.values()) quad += v * v;
        quad *= t.volume() / static_cast<double>(t.nodes());
        const double h0 = sobolev_norm(f, 0);
        EXPECT_NEAR(h0 * h0, quad, 1e-12 * quad);
    }
}

TEST(Transform, RejectsNonFiniteNamingNode) {
    const Torus t = Torus::uniform(2, 8);
    Field f = Field::constant(t, 1, 1.0);
    f[t.ravel({3, 5, 0})] = std::nan("");
    try {
        transform(f);
        FAIL() << "expected NonFiniteError";
    } catch (const NonFiniteError& e) {
        EXPECT_NE(std::string(e.what()).find("(3, 5)"), std::string::npos) << e.what();
    }
}

TEST(Operators, SingleModeDerivatives) {
    const Torus t = Torus::uniform(1, 32);
    const Field f = Field::sample(t, [](const Point& x) { return std::sin(x[0]); });
    const Field g = gradient(f);
    EXPECT_LE(max_diff(g, Field::sample(t, [](const Point& x) { return std::cos(x[0]); })), 1e-13);
    EXPECT_LE(gradient(Field::constant(t, 1, 3.7)).sup_norm(), 1e-15);
}

TEST(Operators, LaplacianEigenfunction) {
    const Torus t = Torus::uniform(2, 32);
    const Field f = Field::sample(t, [](const Point& x) { return std::sin(2 * x[0]) * std::cos(3 * x[1]); });
    Field expected = f;
    expected *= -13.0;
    EXPECT_LE(max_diff(laplacian(f), expected), 1e-12);
}

TEST(Operators, NonDefaultPeriodRescalesWavenumbers) {
    const Torus t(1, {32, 1, 1}, {3.0, 1.0, 1.0});
    const double k = 2 * pi / 3.0;
    const Field f = Field::sample(t, [&](const Point& x) { return std::sin(2 * k * x[0]); });
    const Field g = gradient(f);
    EXPECT_LE(max_diff(g, Field::sample(t, [&](const Point& x) { return 2 * k * std::cos(2 * k * x[0]); })),
              1e-12);
}

TEST(Operators, DivergenceOfGradientIsLaplacian) {
    for (int dim = 1; dim <= 3; ++dim) {
        for (unsigned seed = 1; seed <= 5; ++seed) {
            const Torus t = Torus::uniform(dim, 16);
            const Field f = awr::testing::sample(t, random_series(dim, 4, 6, seed));
            EXPECT_LE(max_diff(divergence(gradient(f)), laplacian(f)), 1e-12 * f.sup_norm());
        }
    }
}

TEST(Operators, DealiasKeepsLowModesOnly) {
    const Torus t = Torus::uniform(1, 24);
    const Field low = Field::sample(t, [](const Point& x) { return std::cos(8 * x[0]); });
    const Field high = Field::sample(t, [](const Point& x) { return std::cos(9 * x[0]); });
    EXPECT_LE(max_diff(dealias(low), low), 1e-14);
    EXPECT_LE(dealias(high).sup_norm(), 1e-14);
}

TEST(Sobolev, SineNorms) {
    const Torus t = Torus::uniform(1, 32);
    const Field f = Field::sample(t, [](const Point& x) { return std::sin(x[0]); });
    EXPECT_NEAR(sobolev_norm(f, 0), std::sqrt(pi), 1e-13);
    EXPECT_NEAR(sobolev_norm(f, 1), std::sqrt(2 * pi), 1e-13);
    for (int k = 0; k <= 4; ++k) EXPECT_EQ(sobolev_norm(Field::scalar(t), k), 0.0);
    EXPECT_THROW(sobolev_norm(f, 5), InvalidArgument);
}

TEST(Sobolev, MonotoneInOrder) {
    const Torus t = Torus::uniform(2, 16);
    for (unsigned seed = 1; seed <= 10; ++seed) {
        const Field f = awr::testing::sample(t, random_series(2, 5, 4, seed, 0.3));
        for (int k = 0; k < 4; ++k) EXPECT_LE(sobolev_norm(f, k), sobolev_norm(f, k + 1));
    }
}

TEST(Mean, MatchesDirectSum) {
    const Torus t = Torus::uniform(1, 32);
    EXPECT_NEAR(mean(Field::constant(t, 1, 2.5)), 2.5, 1e-15);
    EXPECT_NEAR(mean(Field::sample(t, [](const Point& x) { return std::sin(x[0]); })), 0.0, 1e-15);
    const Torus t3(3, {8, 10, 12}, {1, 2, 3});
    const Field f = awr::testing::sample(t3, random_series(3, 3, 5, 11, 0.7));
    double direct = 0.0;
    for (double v : f.values()) direct += v;
    direct /= static_cast<double>(f.nodes());
    EXPECT_NEAR(mean(f), direct, 1e-14);
}

TEST(Interpolation, BSplineWeightsPartitionUnity) {
    for (int degree : {3, 5}) {
        for (double s : {0.0, 0.1, 0.5, 0.77, 0.999}) {
            double w[6] = {};
            bspline_weights(degree, s, w);
            double sum = 0.0;
            for (int j = 0; j <= degree; ++j) sum += w[j];
            EXPECT_NEAR(sum, 1.0, 1e-15);
        }
    }
}

TEST(Interpolation, KnownFunction) {
    const Torus t = Torus::uniform(1, 64);
    const Field f = Field::sample(t, [](const Point& x) { return std::sin(x[0]); });
    const std::vector<Point> pts{{pi / 3, 0, 0}};
    EXPECT_NEAR(interpolate(f, pts)[0], std::sin(pi / 3), 1e-9);
    EXPECT_NEAR(interpolate(f, pts, InterpMethod::Trigonometric)[0], std::sin(pi / 3), 1e-13);
}

TEST(Interpolation, NodeCoincidenceIsExact) {
    const Torus t = Torus::uniform(2, 16);
    const Field f = awr::testing::sample(t, random_series(2, 7, 9, 3));
    for (auto method : {InterpMethod::QuinticSpline, InterpMethod::CubicSpline, InterpMethod::Trigonometric}) {
        const Interpolant interp(f, method);
        for (std::size_t i = 0; i < t.nodes(); i += 7) EXPECT_EQ(interp(t.node(i)), f[i]);
        // wrapped periodic image of a node
        Point p = t.node(5);
        p[0] -= t.length(0);
        EXPECT_EQ(interp(p), f[5]);
    }
}

TEST(Interpolation, TrigMatchesDirectSeries) {
    for (int dim = 1; dim <= 3; ++dim) {
        const Torus t = Torus::uniform(dim, 12);
        const auto series = random_series(dim, 4, 6, 40 + dim, 0.2);
        const Field f = awr::testing::sample(t, series);
        const Interpolant interp(f, InterpMethod::Trigonometric);
        std::mt19937_64 gen(7);
        std::uniform_real_distribution<double> u(-10.0, 10.0);
        for (int n = 0; n < 50; ++n) {
            const Point p{u(gen), u(gen), u(gen)};
            Point q = p;
            for (int a = dim; a < 3; ++a) q[a] = 0.0;
            EXPECT_NEAR(interp(q), series(q), 1e-12);
        }
    }
}

TEST(Interpolation, SplineConvergenceOrder) {
    auto max_error = [](int n, InterpMethod m) {
        const Torus t = Torus::uniform(1, n);
        const Field f = Field::sample(t, [](const Point& x) { return std::sin(3 * x[0]); });
        const Interpolant interp(f, m);
        double err = 0.0;
        for (int j = 0; j < 997; ++j) {
            const double x = 2 * pi * (j + 0.31) / 997.0;
            err = std::max(err, std::abs(interp(Point{x, 0, 0}) - std::sin(3 * x)));
        }
        return err;
    };
    for (auto m : {InterpMethod::CubicSpline, InterpMethod::QuinticSpline}) {
        const double order = std::log2(max_error(32, m) / max_error(64, m));
        EXPECT_GE(order, 3.7) << "method " << static_cast<int>(m);
    }
}

TEST(Snapshot, RoundTripPreservesEverything) {
    const Torus t(2, {8, 10, 1}, {1.5, 2.5, 1.0});
    const Field f = Field::sample_vector(t, [](const Point& x, int c) { return x[0] + 10 * x[1] + 100 * c; });
    std::stringstream buf;
    write_snapshot(buf, f, 0.125);
    const std::string bytes = buf.str();
    ASSERT_EQ(bytes.substr(0, 4), "AWRS");
    // header: magic + version + dim + 2 sizes + 2 lengths + comps + time
    EXPECT_EQ(bytes.size(), 4u + 4 + 4 + 8 + 16 + 4 + 8 + 8 * 2 * 80);
    // the first payload value is component 0, the second component 1 of node 0
    double v1 = 0.0;
    std::memcpy(&v1, bytes.data() + 48 + 8, 8);
    EXPECT_EQ(v1, 100.0);
    const Snapshot s = read_snapshot(buf);
    EXPECT_EQ(s.time, 0.125);
    EXPECT_TRUE(s.field.torus() == t);
    EXPECT_EQ(s.field.values(), f.values());
}

TEST(Snapshot, RejectsBadMagic) {
    std::stringstream buf("NOPE....");
    EXPECT_THROW(read_snapshot(buf), ConfigError);
}

TEST(Heatmap, WritesBinaryPgm) {
    const Torus t(2, {8, 16, 1}, {1.0, 1.0, 1.0});
    const Field f = Field::sample(t, [](const Point& x) { return x[1]; });
    const auto path = std::filesystem::temp_directory_path() / "awr_heatmap_test.pgm";
    write_heatmap(path.string(), f, 0, 2, 0);
    std::ifstream in(path, std::ios::binary);
    std::string magic;
    int w = 0, h = 0, maxv = 0;
    in >> magic >> w >> h >> maxv;
    in.get();
    EXPECT_EQ(magic, "P5");
    EXPECT_EQ(w, 16);
    EXPECT_EQ(h, 8);
    EXPECT_EQ(maxv, 255);
    std::vector<unsigned char> px(w * h);
    in.read(reinterpret_cast<char*>(px.data()), px.size());
    EXPECT_EQ(px[0], 0);
    EXPECT_EQ(px[w - 1], 255);
    std::filesystem::remove(path);
}
