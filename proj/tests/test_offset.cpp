#include "awr/error.hpp"
#include "awr/offset.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace awr;
using std::numbers::pi;

namespace {

double central_difference(const OffsetModel& m, double rho, double h = 1e-6) {
    return (m.p(rho + h) - m.p(rho - h)) / (2 * h);
}

} // namespace

TEST(Offset, PowerLawSubstitution) {
    const auto m = OffsetModel::power_law(2.0);
    EXPECT_DOUBLE_EQ(p_of(m, 0.5), 0.25);
    EXPECT_DOUBLE_EQ(dp_of(m, 0.5), 1.0);
    EXPECT_DOUBLE_EQ(mobility(m, 0.5), 0.5);
    EXPECT_THROW(p_of(m, 0.0), DomainViolation);
    EXPECT_THROW(p_of(m, -1.0), DomainViolation);
}

TEST(Offset, SingularRationalValues) {
    const auto m = OffsetModel::singular_rational(1.0, 1.0, 2.0);
    EXPECT_NEAR(p_of(m, 0.5), 2.0, 1e-14);
    EXPECT_NEAR(dp_of(m, 0.5), 12.0, 1e-13);
    EXPECT_NEAR(mobility(m, 0.5), 6.0, 1e-13);
    EXPECT_NEAR(central_difference(m, 0.5) / 12.0, 1.0, 1e-6);
}

TEST(Offset, SingularBarrierIsAnError) {
    const auto m = OffsetModel::singular_rational(1.0, 1.0, 2.0);
    try {
        p_of(m, 1.0);
        FAIL() << "expected DomainViolation";
    } catch (const DomainViolation& e) {
        const std::string what = e.what();
        EXPECT_NE(what.find("SingularRational"), std::string::npos) << what;
    }
    const auto r = OffsetModel::singular_reciprocal(0.1, 1.0, 0.8);
    EXPECT_THROW(r.dp(0.8), DomainViolation);
    EXPECT_NO_THROW(r.dp(0.79));
}

TEST(Offset, ParameterValidation) {
    EXPECT_THROW(OffsetModel::power_law(0.0), InvalidArgument);
    EXPECT_THROW(OffsetModel::singular_rational(1.0, 1.0, 1.0), InvalidArgument);
    EXPECT_THROW(OffsetModel::singular_rational(0.0, 1.0, 2.0), InvalidArgument);
    EXPECT_THROW(OffsetModel::singular_reciprocal(1.0, 0.0, 1.0), InvalidArgument);
}

TEST(Offset, SweepMobilityPositiveAndDerivativeConsistent) {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int checked = 0;
    for (int n = 0; n < 1000; ++n) {
        const int variant = n % 3;
        OffsetModel m = variant == 0   ? OffsetModel::power_law(0.5 + 3.0 * u(gen))
                        : variant == 1 ? OffsetModel::singular_rational(0.05 + u(gen), 0.5 + 2.0 * u(gen),
                                                                        1.1 + 2.0 * u(gen))
                                       : OffsetModel::singular_reciprocal(0.05 + u(gen), 0.5 + 2.0 * u(gen),
                                                                          0.5 + u(gen));
        const double top = std::isfinite(m.rho_sup()) ? m.rho_sup() : 3.0;
        const double rho = top * (0.05 + 0.85 * u(gen));
        const double dp = m.dp(rho);
        EXPECT_GT(m.mobility(rho), 0.0) << m.name() << " rho=" << rho;
        EXPECT_NEAR(central_difference(m, rho) / dp, 1.0, 1e-6) << m.name() << " rho=" << rho;
        ++checked;
    }
    EXPECT_EQ(checked, 1000);
}

TEST(Offset, ReciprocalMatchesRationalIdentity) {
    for (double beta : {1.5, 2.0, 3.0}) {
        const double eps = 0.3;
        const auto r = OffsetModel::singular_reciprocal(eps, beta, 1.0);
        const auto q = OffsetModel::singular_rational(eps, beta, beta);
        for (int j = 1; j <= 20; ++j) {
            const double rho = j / 21.0;
            EXPECT_NEAR(r.p(rho), q.p(rho), 1e-12 * std::max(1.0, q.p(rho)));
        }
    }
}

TEST(GradP, ConstantDensityGivesZero) {
    const Torus t = Torus::uniform(2, 16);
    const Field rho = Field::constant(t, 1, 0.7);
    for (const auto& m : {OffsetModel::power_law(2.0), OffsetModel::singular_rational(1.0, 1.0, 2.0),
                          OffsetModel::singular_reciprocal(0.5, 1.0, 1.0)}) {
        EXPECT_EQ(grad_p_field(m, rho).sup_norm(), 0.0) << m.name();
    }
}

TEST(GradP, PowerLawAnalytic) {
    const Torus t = Torus::uniform(1, 64);
    const Field rho = Field::sample(t, [](const Point& x) { return 0.5 + 0.1 * std::sin(x[0]); });
    const Field g = grad_p_field(OffsetModel::power_law(2.0), rho);
    const Field exact = Field::sample(t, [](const Point& x) {
        return 2 * (0.5 + 0.1 * std::sin(x[0])) * (0.1 * std::cos(x[0]));
    });
    EXPECT_LE((g - exact).sup_norm(), 1e-10);
}

TEST(GradP, GrowsTowardCongestion) {
    const Torus t = Torus::uniform(1, 128);
    const auto m = OffsetModel::singular_rational(1.0, 1.0, 2.0);
    double previous = 0.0;
    for (double amp : {0.2, 0.3, 0.35, 0.4, 0.42}) {
        // ramp toward the barrier: max rho = 0.5 + amp
        const Field rho = Field::sample(t, [&](const Point& x) { return 0.5 + amp * std::sin(x[0]); });
        const double g = grad_p_field(m, rho).sup_norm();
        EXPECT_GT(g, previous) << "amplitude " << amp;
        previous = g;
    }
}

TEST(GradP, InadmissibleNodeIsReported) {
    const Torus t = Torus::uniform(1, 16);
    Field rho = Field::constant(t, 1, 0.5);
    rho[3] = 1.2;
    try {
        grad_p_field(OffsetModel::singular_rational(1.0, 1.0, 2.0), rho);
        FAIL() << "expected DomainViolation";
    } catch (const DomainViolation& e) {
        EXPECT_NE(std::string(e.what()).find("1.2"), std::string::npos) << e.what();
    }
}

TEST(Potential, SingleMode) {
    const Torus t = Torus::uniform(1, 32);
    const Field rho = Field::sample(t, [](const Point& x) { return 2.0 + std::cos(x[0]); });
    const Potential pot = solve_potential(rho);
    EXPECT_LE((pot.phi - Field::sample(t, [](const Point& x) { return std::cos(x[0]); })).sup_norm(), 1e-13);
    EXPECT_LE((pot.grad_phi - Field::sample(t, [](const Point& x) { return -std::sin(x[0]); })).sup_norm(),
              1e-13);
    EXPECT_EQ(solve_potential(Field::constant(t, 1, 3.0)).phi.sup_norm(), 0.0);
}

TEST(Potential, InvariantsOnRandomDensities) {
    for (int dim = 1; dim <= 3; ++dim) {
        const Torus t = Torus::uniform(dim, dim == 3 ? 12 : 24);
        for (unsigned seed = 1; seed <= 4; ++seed) {
            const Field rho = awr::testing::sample(t, awr::testing::random_series(dim, 3, 5, seed, 2.0, 0.3));
            const Potential pot = solve_potential(rho);
            EXPECT_LE(std::abs(mean(pot.phi)), 1e-12);
            Field residual = laplacian(pot.phi);
            residual *= -1.0;
            residual -= rho;
            for (auto& v : residual.values()) v += mean(rho);
            EXPECT_LE(residual.sup_norm(), 1e-12);
        }
    }
}

TEST(Closure, ConstantDensityLeavesWUnchanged) {
    const Torus t = Torus::uniform(2, 16);
    const Field rho = Field::constant(t, 1, 0.6);
    const Field w = Field::sample_vector(t, [](const Point& x, int c) { return std::sin(x[c]) + c; });
    EXPECT_EQ((closure_u(OffsetModel::power_law(1.5), w, rho) - w).sup_norm(), 0.0);
    const auto nonlocal = OffsetModel::local_plus_newtonian(PowerLaw{1.5});
    EXPECT_EQ((closure_u(nonlocal, w, rho, solve_potential(rho)) - w).sup_norm(), 0.0);
}

TEST(Closure, PowerLawLinearOffset) {
    const Torus t = Torus::uniform(1, 64);
    const Field rho = Field::sample(t, [](const Point& x) { return 1.0 + 0.2 * std::sin(x[0]); });
    const Field u = closure_u(OffsetModel::power_law(1.0), Field::vector(t), rho);
    EXPECT_LE((u - Field::sample(t, [](const Point& x) { return -0.2 * std::cos(x[0]); })).sup_norm(), 1e-10);
}

TEST(Closure, PotentialPresenceMustMatchModel) {
    const Torus t = Torus::uniform(1, 16);
    const Field rho = Field::constant(t, 1, 0.6);
    const Field w = Field::vector(t);
    EXPECT_THROW(closure_u(OffsetModel::power_law(1.0), w, rho, solve_potential(rho)), InvalidArgument);
    EXPECT_THROW(closure_u(OffsetModel::local_plus_newtonian(PowerLaw{1.0}), w, rho), InvalidArgument);
}

TEST(Closure, NonlocalSubtractsPotentialGradient) {
    const Torus t = Torus::uniform(1, 32);
    const Field rho = Field::sample(t, [](const Point& x) { return 1.0 + 0.2 * std::cos(x[0]); });
    const auto model = OffsetModel::local_plus_newtonian(PowerLaw{1.0});
    const Field u = closure_u(model, Field::vector(t), rho, solve_potential(rho));
    // grad p = -0.2 sin x, grad Phi = -0.2 sin x, so u = 0.4 sin x
    EXPECT_LE((u - Field::sample(t, [](const Point& x) { return 0.4 * std::sin(x[0]); })).sup_norm(), 1e-12);
}
