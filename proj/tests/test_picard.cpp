#include "awr/error.hpp"
#include "awr/picard.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace awr;

namespace {

struct SmallData {
    Torus torus = Torus::uniform(1, 64);
    Field rho0 = Field::sample(torus, [](const Point& x) { return 1.0 + 0.05 * std::sin(x[0]); });
    Field u0 = Field::sample(torus, [](const Point& x) { return 0.05 * std::cos(x[0]); });
    OffsetModel model = OffsetModel::power_law(2.0);
};

double max_kappa(const std::vector<IterationReport>& reports) {
    double k = 0.0;
    for (const auto& r : reports) {
        if (r.iter >= 2) k = std::max(k, r.kappa);
    }
    return k;
}

PicardOptions with_levels(int levels) {
    PicardOptions o;
    o.levels = levels;
    return o;
}

} // namespace

TEST(InitSlab, ConstantDensityHasNoOffset) {
    const Torus t = Torus::uniform(2, 16);
    const Field u0 = Field::sample_vector(t, [](const Point&, int c) { return 0.3 - c; });
    const SlabState s = init_slab(Field::constant(t, 1, 1.0), u0, OffsetModel::power_law(2.0), 0.1, 4);
    EXPECT_EQ(s.rho.levels(), 5u);
    EXPECT_DOUBLE_EQ(s.rho.end(), 0.1);
    for (const auto& w : s.w.fields) EXPECT_EQ((w - u0).sup_norm(), 0.0);
}

TEST(InitSlab, PowerLawOffsetGradient) {
    const Torus t = Torus::uniform(1, 64);
    const Field rho0 = Field::sample(t, [](const Point& x) { return 1.0 + 0.2 * std::sin(x[0]); });
    const SlabState s = init_slab(rho0, Field::vector(t), OffsetModel::power_law(1.0), 0.1, 2);
    const Field expected = Field::sample(t, [](const Point& x) { return 0.2 * std::cos(x[0]); });
    EXPECT_LE((s.w[0] - expected).sup_norm(), 1e-10);
    EXPECT_LE((s.w[2] - expected).sup_norm(), 1e-10);
}

TEST(InitSlab, BarrierViolationRejected) {
    const Torus t = Torus::uniform(1, 16);
    const Field rho0 = Field::sample(t, [](const Point& x) { return 0.5 + 0.5 * std::sin(x[0]); });
    EXPECT_THROW(init_slab(rho0, Field::vector(t), OffsetModel::singular_rational(1.0, 1.0, 2.0), 0.1, 4),
                 DomainViolation);
}

TEST(InitSlab, NewtonianAddsPotentialGradient) {
    const Torus t = Torus::uniform(1, 32);
    const Field rho0 = Field::sample(t, [](const Point& x) { return 1.0 + 0.2 * std::cos(x[0]); });
    const SlabState s = init_slab(rho0, Field::vector(t), OffsetModel::local_plus_newtonian(PowerLaw{1.0}), 0.1, 2);
    ASSERT_TRUE(s.phi.has_value());
    // grad p = grad Phi = -0.2 sin x
    EXPECT_LE((s.w[0] - Field::sample(t, [](const Point& x) { return -0.4 * std::sin(x[0]); })).sup_norm(), 1e-12);
}

TEST(Iterate, ConstantStateIsFixedPoint) {
    const Torus t = Torus::uniform(2, 16);
    const Field rho0 = Field::constant(t, 1, 0.7);
    const Field u0 = Field::sample_vector(t, [](const Point&, int c) { return 0.4 + c; });
    for (const auto& model : {OffsetModel::power_law(2.0), OffsetModel::singular_rational(0.5, 1.0, 2.0),
                              OffsetModel::local_plus_newtonian(PowerLaw{1.0})}) {
        const SlabState s = init_slab(rho0, u0, model, 0.2, 4);
        const auto [next, report] = iterate_once(s, model, with_levels(4));
        EXPECT_LE(report.delta_w, 1e-12) << model.name();
        EXPECT_LE(report.delta_rho, 1e-12) << model.name();
        EXPECT_TRUE(report.converged);
        EXPECT_EQ(report.kappa, 0.0);
    }
    const auto result = solve_slab(rho0, u0, OffsetModel::power_law(2.0), 0.2, with_levels(4));
    EXPECT_EQ(result.reports.size(), 1u);
}

TEST(Iterate, SmallDataContracts) {
    const SmallData d;
    const auto result = solve_slab(d.rho0, d.u0, d.model, 0.05, with_levels(10));
    ASSERT_LE(result.reports.size(), 15u);
    EXPECT_TRUE(result.reports.back().converged);
    const double m2 = result.reports[1].bound_M;
    for (const auto& r : result.reports) {
        if (r.iter >= 2) {
            EXPECT_LT(r.kappa, 1.0) << "iteration " << r.iter;
            EXPECT_LE(r.bound_M, 2.0 * m2);
            EXPECT_LE(r.bound_M, 1.01 * m2);
        }
        EXPECT_FALSE(r.envelope_violated);
    }
    EXPECT_TRUE(result.audit.passed());
    EXPECT_LE(result.audit.mass_drift, 1e-10);
}

TEST(Iterate, KappaShrinksWithSlabLength) {
    const SmallData d;
    double previous = 1.0;
    int levels = 16;
    for (double T : {0.05, 0.025, 0.0125, 0.00625}) {
        const double k = max_kappa(solve_slab(d.rho0, d.u0, d.model, T, with_levels(levels)).reports);
        EXPECT_LT(k, previous) << "T=" << T;
        previous = k;
        levels /= 2;
    }
}

TEST(Iterate, ErrorsCarryIterationAndLevel) {
    // w steepens the density toward the barrier; a long slab with a large
    // velocity must abort with a located domain violation
    const Torus t = Torus::uniform(1, 32);
    const Field rho0 = Field::sample(t, [](const Point& x) { return 0.5 + 0.3 * std::sin(x[0]); });
    const Field u0 = Field::sample(t, [](const Point& x) { return -40.0 * std::cos(x[0]); });
    PicardOptions o = with_levels(4);
    o.max_iter = 5;
    try {
        solve_slab(rho0, u0, OffsetModel::singular_rational(0.01, 1.0, 2.0), 1.0, o);
        FAIL() << "expected a solver error";
    } catch (const DomainViolation& e) {
        EXPECT_NE(std::string(e.what()).find("iteration"), std::string::npos) << e.what();
    } catch (const ConvergenceFailure& e) {
        EXPECT_FALSE(e.kappa_history.empty());
    } catch (const NonFiniteError& e) {
        EXPECT_NE(std::string(e.what()).find("iteration"), std::string::npos) << e.what();
    }
}

TEST(SolveSlab, NonConvergenceCarriesKappaHistory) {
    const SmallData d;
    PicardOptions o = with_levels(10);
    o.max_iter = 3;
    o.tol_fix = 1e-30;
    try {
        solve_slab(d.rho0, d.u0, d.model, 0.05, o);
        FAIL() << "expected ConvergenceFailure";
    } catch (const ConvergenceFailure& e) {
        EXPECT_EQ(e.kappa_history.size(), 2u);
        for (double k : e.kappa_history) EXPECT_LT(k, 1.0);
    }
}

TEST(SolveSlab, SingularBarrierBounds) {
    const Torus t = Torus::uniform(1, 64);
    const Field rho0 = Field::sample(t, [](const Point& x) { return 0.5 + 0.3 * std::sin(x[0]); });
    const Field u0 = Field::sample(t, [](const Point& x) { return 0.1 * std::cos(x[0]); });
    const auto model = OffsetModel::singular_rational(0.1, 1.0, 2.0);
    const auto result = solve_slab(rho0, u0, model, 0.02, with_levels(20));
    EXPECT_NEAR(result.audit.theta, 0.2, 1e-12);
    EXPECT_TRUE(result.audit.barrier_ok);
    for (const auto& f : result.state.rho.fields) {
        EXPECT_GT(f.min(), 0.1);
        EXPECT_LT(f.max(), 0.9);
    }
    EXPECT_TRUE(result.audit.passed());
}

TEST(SolveSlab, NewtonianRunStaysPositiveWithExactPotentials) {
    const Torus t = Torus::uniform(2, 32);
    const Field rho0 = Field::sample(t, [](const Point& x) { return 1.0 + 0.2 * std::sin(x[0]) * std::cos(x[1]); });
    const Field u0 = Field::sample_vector(t, [](const Point& x, int c) { return 0.1 * std::cos(x[1 - c]); });
    const auto model = OffsetModel::local_plus_newtonian(PowerLaw{1.5});
    const auto result = solve_slab(rho0, u0, model, 0.05, with_levels(10));
    EXPECT_TRUE(result.audit.positive);
    EXPECT_LE(result.audit.potential_residual, 1e-12);
    EXPECT_LE(result.audit.mass_drift, 1e-10);
    EXPECT_TRUE(result.audit.passed());
}

TEST(SolveSlab, IndependentOfInitialIterate) {
    const SmallData d;
    const PicardOptions o = with_levels(10);
    const auto reference = solve_slab(d.rho0, d.u0, d.model, 0.05, o);
    // start from a perturbed iterate 0 (same initial level)
    SlabState s = init_slab(d.rho0, d.u0, d.model, 0.05, o.levels);
    for (std::size_t k = 1; k < s.rho.levels(); ++k) {
        s.rho[k] += Field::sample(d.torus, [](const Point& x) { return 0.01 * std::cos(2 * x[0]); });
        s.u[k] += Field::sample(d.torus, [](const Point& x) { return 0.02 * std::sin(3 * x[0]); });
    }
    for (int n = 0; n < 20; ++n) {
        auto [next, r] = iterate_once(s, d.model, o);
        s = std::move(next);
        if (r.converged) break;
    }
    EXPECT_LE((s.rho.fields.back() - reference.state.rho.fields.back()).sup_norm(), 1e-9);
    EXPECT_LE((s.w.fields.back() - reference.state.w.fields.back()).sup_norm(), 1e-9);
}

TEST(March, ConstantStateStaysConstant) {
    const Torus t = Torus::uniform(1, 16);
    const Field rho0 = Field::constant(t, 1, 0.9);
    const Field u0 = Field::constant(t, 1, 0.25);
    const auto m = march(rho0, u0, OffsetModel::power_law(2.0), 1.0, 0.25, with_levels(4));
    EXPECT_EQ(m.rho.levels(), 17u);
    EXPECT_EQ(m.slabs.size(), 4u);
    for (const auto& f : m.rho.fields) EXPECT_LE((f - rho0).sup_norm(), 1e-14);
    for (const auto& f : m.u.fields) EXPECT_LE((f - u0).sup_norm(), 1e-14);
}

TEST(March, SlabPartitionSelfConsistency) {
    const SmallData d;
    const auto four = march(d.rho0, d.u0, d.model, 0.2, 0.05, with_levels(10));
    const auto two = march(d.rho0, d.u0, d.model, 0.2, 0.1, with_levels(20));
    EXPECT_LE((four.rho.fields.back() - two.rho.fields.back()).sup_norm(), 1e-5);
    EXPECT_LE((four.w.fields.back() - two.w.fields.back()).sup_norm(), 1e-5);
    for (const auto& slab : four.slabs) EXPECT_TRUE(slab.audit.passed());
}

TEST(March, ObserverSeesEverySlabAndFailureNamesStart) {
    const SmallData d;
    int seen = 0;
    march(d.rho0, d.u0, d.model, 0.1, 0.05, with_levels(5), [&](const SlabResult&) { ++seen; });
    EXPECT_EQ(seen, 2);
    PicardOptions o = with_levels(5);
    o.max_iter = 1;
    o.tol_fix = 1e-30;
    try {
        march(d.rho0, d.u0, d.model, 0.1, 0.05, o);
        FAIL();
    } catch (const ConvergenceFailure& e) {
        EXPECT_NE(std::string(e.what()).find("slab starting at t=0"), std::string::npos) << e.what();
    }
}

TEST(Diagnostics, MomentumOfUniformFlow) {
    const Torus t = Torus::uniform(2, 16);
    const Field rho = Field::constant(t, 1, 2.0);
    const Field w = Field::sample_vector(t, [](const Point&, int c) { return c == 0 ? 0.5 : -1.0; });
    const Point m = momentum(rho, w);
    const double vol = 4 * M_PI * M_PI;
    EXPECT_NEAR(m[0], 2.0 * 0.5 * vol, 1e-12);
    EXPECT_NEAR(m[1], -2.0 * vol, 1e-12);
}

TEST(Diagnostics, MomentumDriftAndResidualDecreaseUnderRefinement) {
    std::vector<double> drift, mass_res, mom_res;
    for (int ref = 0; ref < 3; ++ref) {
        const Torus t = Torus::uniform(1, 16 << ref);
        const Field rho0 = Field::sample(t, [](const Point& x) { return 1.0 + 0.2 * std::sin(x[0]); });
        const Field u0 = Field::sample(t, [](const Point& x) { return 0.3 + 0.2 * std::cos(x[0]); });
        const auto model = OffsetModel::power_law(2.0);
        const auto m = march(rho0, u0, model, 0.4, 0.1, with_levels(4 << ref));
        drift.push_back(momentum_drift(m.rho, m.w));
        const auto r = formulation_residual(m.rho, m.w, model);
        mass_res.push_back(r.mass);
        mom_res.push_back(r.momentum);
    }
    for (std::size_t i = 1; i < drift.size(); ++i) {
        EXPECT_GE(std::log2(drift[i - 1] / drift[i]), 1.0);
        EXPECT_GE(std::log2(mass_res[i - 1] / mass_res[i]), 1.0);
        EXPECT_GE(std::log2(mom_res[i - 1] / mom_res[i]), 1.0);
    }
}
