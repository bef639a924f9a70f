#include "awr/error.hpp"
#include "awr/mms.hpp"
#include "awr/parabolic.hpp"
#include "awr/picard.hpp"
#include "awr/transport.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

using namespace awr;

namespace {

OffsetModel singular() { return OffsetModel::singular_rational(0.1, 1.0, 2.0); }

// The two orders of the finest refinements must both clear the threshold.
void expect_orders(const std::vector<StudyRow>& rows, double threshold) {
    ASSERT_GE(rows.size(), 3u);
    for (std::size_t i = rows.size() - 2; i < rows.size(); ++i) {
        EXPECT_GE(rows[i].order_sup, threshold) << "row " << i;
        EXPECT_GE(rows[i].order_l2, threshold) << "row " << i;
    }
}

} // namespace

TEST(Catalog, ConstantCaseHasZeroForcings) {
    for (int dim : {1, 2}) {
        const Torus torus = Torus::uniform(dim, 16);
        for (const auto& model : {OffsetModel::power_law(2.0), singular()}) {
            const auto c = build_case("constant", model, torus);
            for (double t : {0.0, 0.3}) {
                EXPECT_EQ(c.forcing_transport(t).sup_norm(), 0.0);
                EXPECT_EQ(c.forcing_parabolic(t).sup_norm(), 0.0);
            }
        }
    }
}

TEST(Catalog, SolversReproduceTheConstantCase) {
    const Torus torus = Torus::uniform(2, 16);
    const auto c = build_case("constant", OffsetModel::power_law(2.0), torus);
    PicardOptions o;
    o.levels = 5;
    o.forcing.transport = [&c](double t) { return c.forcing_transport(t); };
    o.forcing.parabolic = [&c](double t) { return c.forcing_parabolic(t); };
    const MarchResult m = march(c.rho(0.0), c.u(0.0), c.model(), 0.5, 0.25, o);
    for (std::size_t k = 0; k < m.rho.levels(); ++k) {
        EXPECT_LE((m.rho[k] - c.rho(m.rho.times[k])).sup_norm(), 1e-14);
        EXPECT_LE((m.w[k] - c.w(m.w.times[k])).sup_norm(), 1e-14);
    }
}

TEST(Catalog, HeatModeHasNoParabolicForcing) {
    for (const auto& model : {OffsetModel::power_law(2.0), singular()}) {
        const auto c = build_case("heat-mode", model, Torus::uniform(1, 32));
        EXPECT_TRUE(c.has_constant_mobility());
        for (double t : {0.0, 0.4, 1.0}) EXPECT_LE(c.forcing_parabolic(t).sup_norm(), 1e-14);
    }
}

TEST(Catalog, TravelingWaveForcingsMatchHandDerivation) {
    // rho = 1 + 0.2 sin(x - t), w = 0.3 + 0.1 cos(x - t), p = rho^2, a = 2 rho^2.
    const Torus torus = Torus::uniform(1, 64);
    const auto c = build_case("traveling-wave", OffsetModel::power_law(2.0), torus);
    const double t = 0.0;
    const Field g = c.forcing_transport(t);
    const Field b = c.forcing_parabolic(t);
    double gap_g = 0.0, gap_b = 0.0;
    for (std::size_t i = 0; i < torus.nodes(); ++i) {
        const double th = torus.node(i)[0] - t;
        const double rho = 1.0 + 0.2 * std::sin(th), rx = 0.2 * std::cos(th), rxx = -0.2 * std::sin(th);
        const double w = 0.3 + 0.1 * std::cos(th), wx = -0.1 * std::sin(th);
        const double u = w - 2.0 * rho * rx;
        const double g_exact = 0.1 * std::sin(th) + u * wx;
        const double b_exact = -rx + (rx * w + rho * wx) - (4.0 * rho * rx * rx + 2.0 * rho * rho * rxx);
        gap_g = std::max(gap_g, std::abs(g[i] - g_exact));
        gap_b = std::max(gap_b, std::abs(b[i] - b_exact));
    }
    EXPECT_LE(gap_g, 1e-12);
    EXPECT_LE(gap_b, 1e-12);
    EXPECT_LE(c.forcing_audit(0.0), 1e-12);
}

TEST(Catalog, AuditsHoldAtEveryLevelOfEveryCase) {
    struct Setup {
        OffsetModel model;
        int dim;
        int n;
    };
    // The singular offset steepens p(rho*) enough that it needs N = 128 to be
    // resolved to roundoff.
    const std::vector<Setup> setups = {
        {OffsetModel::power_law(2.0), 1, 32},
        {OffsetModel::power_law(2.0), 2, 32},
        {OffsetModel::local_plus_newtonian(PowerLaw{1.5}), 1, 64},
        {OffsetModel::local_plus_newtonian(PowerLaw{1.5}), 2, 32},
        {singular(), 1, 128},
        {singular(), 2, 128},
    };
    for (const auto& s : setups) {
        for (const auto& id : catalog_ids()) {
            const auto c = build_case(id, s.model, Torus::uniform(s.dim, s.n));
            for (int k = 0; k <= 8; ++k) {
                const double t = 0.0625 * k;
                EXPECT_LE(c.forcing_audit(t), 1e-10) << id << " " << s.model.name() << " dim " << s.dim << " t " << t;
            }
        }
    }
}

TEST(Catalog, DensitiesStayInsideTheHypothesisRegion) {
    for (const auto& model : {OffsetModel::power_law(2.0), singular(), OffsetModel::singular_reciprocal(0.5, 1.0, 2.0)}) {
        const double scale = model.is_singular() ? model.rho_sup() : 1.0;
        for (const auto& id : catalog_ids()) {
            const auto c = build_case(id, model, Torus::uniform(2, 16));
            for (double t : {0.0, 0.25, 0.5, 1.0}) {
                const Field r = c.rho(t);
                EXPECT_GE(r.min(), 0.5 * scale - 1e-14) << id;
                if (model.is_singular()) EXPECT_LE(r.max(), 0.9 * scale + 1e-14) << id;
            }
        }
    }
}

TEST(Catalog, TimeDerivativesMatchDifferences) {
    const auto c = build_case("product", OffsetModel::power_law(2.0), Torus::uniform(2, 16));
    const double t = 0.3, e = 1e-5;
    const Field drho = (1.0 / (2 * e)) * (c.rho(t + e) - c.rho(t - e));
    const Field dw = (1.0 / (2 * e)) * (c.w(t + e) - c.w(t - e));
    EXPECT_LE((drho - c.rho_t(t)).sup_norm(), 1e-9);
    EXPECT_LE((dw - c.w_t(t)).sup_norm(), 1e-9);
}

TEST(Catalog, RejectsUnknownIds) {
    EXPECT_THROW(build_case("soliton", OffsetModel::power_law(2.0), Torus::uniform(1, 16)), InvalidArgument);
}

TEST(Study, TransportSpatialOrder) {
    StudyConfig c;
    c.kind = StudyKind::TransportSpatial;
    c.resolutions = {12, 16, 24, 32};
    c.dts = {0.05};
    c.t_end = 1.0;
    expect_orders(convergence_study(c), 3.7);
}

TEST(Study, TransportTemporalOrder) {
    StudyConfig c;
    c.kind = StudyKind::TransportTemporal;
    c.resolutions = {64};
    c.dts = {0.1, 0.05, 0.025, 0.0125};
    expect_orders(convergence_study(c), 1.9);
}

TEST(Study, ParabolicTemporalOrders) {
    StudyConfig c;
    c.kind = StudyKind::ParabolicTemporal;
    c.case_id = "heat-mode";
    c.resolutions = {16};
    c.dts = {0.05, 0.025, 0.0125, 0.00625};
    c.t_end = 1.0;
    expect_orders(convergence_study(c), 1.8);

    c.case_id = "traveling-wave";
    c.dts = {0.1, 0.05, 0.025, 0.0125};
    expect_orders(convergence_study(c), 0.9);
}

TEST(Study, CoupledOrder) {
    StudyConfig c;
    c.kind = StudyKind::Coupled;
    c.resolutions = {16, 32, 64};
    c.dts = {0.05, 0.025, 0.0125};
    const auto rows = convergence_study(c);
    EXPECT_TRUE(std::isnan(rows[0].order_sup));
    expect_orders(rows, 0.9);
    EXPECT_LE(rows.back().err_sup, 1e-4);
}

TEST(Study, RejectsShortOrMismatchedTables) {
    StudyConfig c;
    c.resolutions = {32};
    c.dts = {0.1, 0.05};
    EXPECT_THROW(convergence_study(c), InvalidArgument);
    c.dts = {0.1, 0.05, 0.025};
    c.resolutions = {16, 32};
    EXPECT_THROW(convergence_study(c), InvalidArgument);
}

TEST(Study, CoupledRejectsFixedMobility) {
    StudyConfig c;
    c.kind = StudyKind::Coupled;
    c.case_id = "heat-mode";
    c.resolutions = {16};
    c.dts = {0.1, 0.05, 0.025};
    EXPECT_THROW(convergence_study(c), InvalidArgument);
}

TEST(Study, CsvLayout) {
    const double nan = std::nan("");
    std::vector<StudyRow> rows = {{0.5, 0.1, 1e-3, 2e-3, nan, nan}, {0.25, 0.05, 2.5e-4, 5e-4, 2.0, 2.0}};
    std::ostringstream out;
    write_study_csv(out, rows);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "# awr-mms v1");
    std::getline(in, line);
    EXPECT_EQ(line, "h,dt,err_sup,err_l2,order_sup,order_l2");
    std::getline(in, line);
    EXPECT_EQ(line, "0.5,0.1,0.001,0.002,,");
    std::getline(in, line);
    EXPECT_EQ(line, "0.25,0.05,0.00025,0.0005,2,2");
    EXPECT_FALSE(std::getline(in, line));
}
