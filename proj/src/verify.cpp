#include "awr/verify.hpp"

#include "awr/error.hpp"
#include "awr/mms.hpp"
#include "awr/offset.hpp"
#include "awr/parabolic.hpp"
#include "awr/picard.hpp"
#include "awr/transport.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

namespace awr {

namespace {

using std::numbers::pi;

struct Outcome {
    bool passed;
    std::string detail;
};

class Detail {
public:
    Detail() { out_ << std::setprecision(3); }
    template <class T>
    Detail& operator<<(const T& v) {
        out_ << v;
        return *this;
    }
    operator std::string() const { return out_.str(); }

private:
    std::ostringstream out_;
};

CheckResult timed(const std::string& suite, int criterion, const std::string& name,
                  const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r{suite, criterion, name, false, "", 0.0};
    try {
        const Outcome o = body();
        r.passed = o.passed;
        r.detail = o.detail;
    } catch (const std::exception& e) {
        r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

SampledTrajectory steady(const Field& v, double t_end, InterpMethod method = InterpMethod::QuinticSpline) {
    return SampledTrajectory(Trajectory::constant(v, {0.0, t_end}), method);
}

ParabolicProblem steady_problem(const Field& v, const Field& a, const Field& rho0, double t_end, double dt) {
    const auto times = uniform_times(0.0, dt, step_count(t_end, dt));
    return {Trajectory::constant(v, times), Trajectory::constant(a, times), std::nullopt, rho0, t_end, dt};
}

double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i] / x.size(), my += y[i] / y.size();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    return num / den;
}

// ---------------------------------------------------------------- transport

std::vector<CheckResult> transport_suite() {
    const std::string s = "transport";
    std::vector<CheckResult> out;
    out.push_back(timed(s, 1, "exact translation (sin x, v=1, t=pi/2, N=64)", [] {
        const Torus t = Torus::uniform(1, 64);
        const Field eta0 = Field::sample(t, [](const Point& x) { return std::sin(x[0]); });
        const Field one = Field::constant(t, 1, 1.0);
        const Field exact = Field::sample(t, [](const Point& x) { return std::sin(x[0] - pi / 2); });
        const double dt = pi / 64;
        const double e_spline =
            (advect(eta0, steady(one, pi / 2), nullptr, pi / 2, dt).fields.back() - exact).sup_norm();
        const TransportOptions trig{4, InterpMethod::Trigonometric};
        const double e_trig = (advect(eta0, steady(one, pi / 2, InterpMethod::Trigonometric), nullptr, pi / 2, dt, trig)
                                   .fields.back() -
                               exact)
                                  .sup_norm();
        return Outcome{e_spline <= 1e-8 && e_trig <= 1e-12,
                       Detail() << "spline " << e_spline << " (<= 1e-8), trig " << e_trig << " (<= 1e-12)"};
    }));
    out.push_back(timed(s, 11, "flow map |grad X - I| vs T slope", [] {
        const Torus t = Torus::uniform(1, 64);
        const Field v = Field::sample(t, [](const Point& x) { return std::sin(x[0]); });
        const auto traj = steady(v, 0.4);
        std::vector<double> lt, le;
        double jac = 1.0;
        for (double T : {0.4, 0.2, 0.1, 0.05}) {
            const auto d = flow_diagnostics(traj, T);
            jac = std::min(jac, d.jacobian_min);
            lt.push_back(std::log(T));
            le.push_back(std::log(d.sup_grad_minus_identity));
        }
        const double slope = log_slope(lt, le);
        return Outcome{std::abs(slope - 1.0) <= 0.15 && jac > 0.0,
                       Detail() << "slope " << slope << " (1 +- 0.15), jacobian_min " << jac};
    }));
    out.push_back(timed(s, 11, "compressive 2D flow stays invertible", [] {
        const Torus t = Torus::uniform(2, 32);
        const Field v = Field::sample_vector(t, [](const Point& x, int a) { return 0.5 * std::sin(x[a]); });
        const auto d = flow_diagnostics(steady(v, 1.0), 1.0);
        return Outcome{d.jacobian_min > 0.0, Detail() << "jacobian in [" << d.jacobian_min << ", " << d.jacobian_max << "]"};
    }));
    out.push_back(timed(s, 0, "constants are transported exactly", [] {
        const Torus t = Torus::uniform(2, 32);
        const Field v = Field::sample_vector(t, [](const Point& x, int a) { return std::sin(x[1 - a]) + 0.3 * a; });
        const Field c = Field::constant(t, 1, 0.7);
        const double e = (advect(c, steady(v, 1.0), nullptr, 1.0, 0.1).fields.back() - c).sup_norm();
        return Outcome{e <= 1e-14, Detail() << "sup error " << e};
    }));
    return out;
}

// ---------------------------------------------------------------- parabolic

std::vector<CheckResult> parabolic_suite() {
    const std::string s = "parabolic";
    std::vector<CheckResult> out;
    const double nu = 0.1;
    const Torus heat_torus = Torus::uniform(1, 16);
    const Field heat0 = Field::sample(heat_torus, [](const Point& x) { return 1.0 + 0.1 * std::cos(x[0]); });
    auto heat = [&](double dt) {
        return solve(steady_problem(Field::vector(heat_torus), Field::constant(heat_torus, 1, nu), heat0, 1.0, dt))
            .rho.fields.back();
    };
    auto amplitude = [](const Field& f) { return 2.0 * std::abs(transform(f).coefficient(0, {1, 0, 0})); };

    out.push_back(timed(s, 2, "heat-mode decay (nu=0.1, dt=1e-3, t=1)", [&] {
        const double ratio = amplitude(heat(1e-3)) / amplitude(heat0);
        const double rel = std::abs(ratio / std::exp(-nu) - 1.0);
        return Outcome{rel <= 1e-6, Detail() << "relative decay error " << rel << " (<= 1e-6)"};
    }));
    out.push_back(timed(s, 2, "heat-mode self-convergence under dt halving", [&] {
        std::vector<Field> sols;
        for (double dt : {0.04, 0.02, 0.01, 0.005}) sols.push_back(heat(dt));
        const double d1 = (sols[0] - sols[1]).sup_norm(), d2 = (sols[1] - sols[2]).sup_norm(),
                     d3 = (sols[2] - sols[3]).sup_norm();
        const double o1 = std::log2(d1 / d2), o2 = std::log2(d2 / d3);
        return Outcome{o1 >= 1.8 && o2 >= 1.8, Detail() << "orders " << o1 << ", " << o2 << " (>= 1.8)"};
    }));
    out.push_back(timed(s, 4, "mass over 1000 steps (b = 0)", [] {
        const Torus t = Torus::uniform(1, 32);
        const Field v = Field::sample(t, [](const Point& x) { return 0.5 * std::sin(x[0]) + 0.2; });
        const Field a = Field::sample(t, [](const Point& x) { return 0.2 + 0.1 * std::cos(x[0]); });
        const Field rho0 = Field::sample(t, [](const Point& x) { return 1.0 + 0.4 * std::cos(x[0]); });
        const auto sol = solve(steady_problem(v, a, rho0, 1.0, 0.001));
        const double m0 = integral(rho0);
        double drift = 0.0;
        for (const auto& r : sol.reports) drift = std::max(drift, std::abs(r.mass - m0) / m0);
        return Outcome{drift <= 1e-12, Detail() << "relative drift " << drift << " (<= 1e-12)"};
    }));
    out.push_back(timed(s, 5, "divergence-free velocity: inf rho0 <= rho <= sup rho0", [] {
        const Torus t = Torus::uniform(2, 32);
        const Field v =
            Field::sample_vector(t, [](const Point& x, int c) { return c == 0 ? std::sin(x[1]) : std::sin(x[0]); });
        const Field rho0 =
            Field::sample(t, [](const Point& x) { return 1.0 + 0.3 * std::cos(x[0]) * std::sin(2 * x[1]); });
        const auto sol = solve(steady_problem(v, Field::constant(t, 1, 0.1), rho0, 0.5, 0.01));
        double excess = 0.0;
        for (const auto& f : sol.rho.fields) {
            excess = std::max({excess, rho0.min() - f.min(), f.max() - rho0.max()});
        }
        return Outcome{excess <= 1e-8, Detail() << "largest excursion " << excess << " (tol_mp 1e-8)"};
    }));
    out.push_back(timed(s, 5, "variable divergence: exponential envelopes (N=128, dt=1e-3)", [] {
        const Torus t = Torus::uniform(1, 128);
        const Field v = Field::sample(t, [](const Point& x) { return 0.3 * std::sin(x[0]); });
        const Field rho0 = Field::sample(t, [](const Point& x) { return 1.0 + 0.5 * std::cos(x[0]); });
        const auto sol = solve(steady_problem(v, Field::constant(t, 1, 0.1), rho0, 0.5, 1e-3));
        double excess = -std::numeric_limits<double>::infinity();
        for (const auto& r : sol.reports) {
            excess = std::max({excess, r.maxmin_lower_bound - r.min_rho, r.max_rho - r.maxmin_upper_bound});
        }
        const bool grows = sol.reports.back().maxmin_upper_bound > rho0.max();
        return Outcome{excess <= 1e-8 && grows,
                       Detail() << "largest excursion " << excess << " (tol_mp 1e-8), upper envelope "
                                << sol.reports.back().maxmin_upper_bound};
    }));
    out.push_back(timed(s, 6, "positivity of variable-coefficient runs", [] {
        const Torus t = Torus::uniform(2, 32);
        const Field v = Field::sample_vector(t, [](const Point& x, int a) { return 0.8 * std::sin(x[a]); });
        const Field a = Field::sample(t, [](const Point& x) { return 0.05 + 0.04 * std::cos(x[0] + x[1]); });
        const Field rho0 = Field::sample(t, [](const Point& x) { return 0.05 + 0.04 * std::sin(x[0]) * std::sin(x[1]); });
        const auto sol = solve(steady_problem(v, a, rho0, 1.0, 0.005));
        const auto g = positivity_guard(sol.rho, true);
        return Outcome{g.positive && !g.hard_violation, Detail() << "min rho " << g.min_rho << " at level " << g.min_level};
    }));
    return out;
}

// ---------------------------------------------------------------- poisson

std::vector<CheckResult> poisson_suite() {
    const std::string s = "poisson";
    std::vector<CheckResult> out;
    out.push_back(timed(s, 3, "single-mode potential", [] {
        double err = 0.0;
        {
            const Torus t = Torus::uniform(1, 32);
            const Potential p = solve_potential(Field::sample(t, [](const Point& x) { return 2.0 + std::cos(x[0]); }));
            err = std::max(err, (p.phi - Field::sample(t, [](const Point& x) { return std::cos(x[0]); })).sup_norm());
        }
        {
            const Torus t = Torus::uniform(2, 32);
            const Potential p = solve_potential(
                Field::sample(t, [](const Point& x) { return 1.0 + 0.5 * std::cos(x[0]) * std::cos(2 * x[1]); }));
            const Field exact = Field::sample(t, [](const Point& x) { return 0.1 * std::cos(x[0]) * std::cos(2 * x[1]); });
            err = std::max(err, (p.phi - exact).sup_norm());
        }
        return Outcome{err <= 1e-13, Detail() << "sup error " << err << " (<= 1e-13)"};
    }));
    out.push_back(timed(s, 3, "random-field residual -Lap(Phi) - (rho - <rho>)", [] {
        std::mt19937 gen(20240611);
        std::uniform_real_distribution<double> amp(-0.1, 0.1), phase(0.0, 2 * pi);
        double worst = 0.0, worst_mean = 0.0;
        for (int dim = 1; dim <= 3; ++dim) {
            const Torus t = Torus::uniform(dim, dim == 3 ? 16 : 32);
            for (int trial = 0; trial < 4; ++trial) {
                std::vector<std::array<double, 5>> modes;
                for (int m = 0; m < 6; ++m) {
                    std::uniform_int_distribution<int> k(-4, 4);
                    modes.push_back({double(k(gen)), double(dim > 1 ? k(gen) : 0), double(dim > 2 ? k(gen) : 0),
                                     amp(gen), phase(gen)});
                }
                const Field rho = Field::sample(t, [&](const Point& x) {
                    double v = 1.0;
                    for (const auto& m : modes) v += m[3] * std::cos(m[0] * x[0] + m[1] * x[1] + m[2] * x[2] + m[4]);
                    return v;
                });
                const Potential p = solve_potential(rho);
                Field r = laplacian(p.phi);
                r *= -1.0;
                r -= rho;
                const double avg = mean(rho);
                for (auto& v : r.values()) v += avg;
                worst = std::max(worst, r.sup_norm());
                worst_mean = std::max(worst_mean, std::abs(mean(p.phi)));
            }
        }
        return Outcome{worst <= 1e-12 && worst_mean <= 1e-12,
                       Detail() << "residual " << worst << " (<= 1e-12), |<Phi>| " << worst_mean};
    }));
    out.push_back(timed(s, 0, "constant density has zero potential", [] {
        const Potential p = solve_potential(Field::constant(Torus::uniform(2, 16), 1, 3.0));
        const double m = std::max(p.phi.sup_norm(), p.grad_phi.sup_norm());
        return Outcome{m == 0.0, Detail() << "sup |Phi|, |grad Phi| " << m};
    }));
    return out;
}

// ---------------------------------------------------------------- contraction

struct SmallData {
    Torus torus = Torus::uniform(1, 64);
    Field rho0 = Field::sample(torus, [](const Point& x) { return 1.0 + 0.05 * std::sin(x[0]); });
    Field u0 = Field::sample(torus, [](const Point& x) { return 0.05 * std::cos(x[0]); });
    OffsetModel model = OffsetModel::power_law(2.0);
};

PicardOptions levels(int n) {
    PicardOptions o;
    o.levels = n;
    return o;
}

double max_kappa(const std::vector<IterationReport>& reports) {
    double k = 0.0;
    for (const auto& r : reports) {
        if (r.iter >= 2) k = std::max(k, r.kappa);
    }
    return k;
}

struct CorpusRun {
    std::string name;
    std::optional<SlabResult> result;
    std::string error;
};

// Slab runs every corpus-wide criterion is checked on. All start from a
// strictly positive density.
std::vector<CorpusRun> corpus() {
    std::vector<CorpusRun> runs;
    auto add = [&](const std::string& name, const std::function<SlabResult()>& fn) {
        CorpusRun r{name, std::nullopt, ""};
        try {
            r.result = fn();
        } catch (const std::exception& e) {
            r.error = e.what();
        }
        runs.push_back(std::move(r));
    };
    const SmallData d;
    add("small-data T=0.05", [&] { return solve_slab(d.rho0, d.u0, d.model, 0.05, levels(10)); });
    add("small-data T=0.025", [&] { return solve_slab(d.rho0, d.u0, d.model, 0.025, levels(5)); });
    add("singular barrier", [] {
        const Torus t = Torus::uniform(1, 64);
        const Field rho0 = Field::sample(t, [](const Point& x) { return 0.5 + 0.3 * std::sin(x[0]); });
        const Field u0 = Field::sample(t, [](const Point& x) { return 0.1 * std::cos(x[0]); });
        return solve_slab(rho0, u0, OffsetModel::singular_rational(0.1, 1.0, 2.0), 0.02, levels(20));
    });
    add("nonlocal 1D", [] {
        const Torus t = Torus::uniform(1, 64);
        const Field rho0 = Field::sample(t, [](const Point& x) { return 1.0 + 0.2 * std::cos(x[0]); });
        const Field u0 = Field::sample(t, [](const Point& x) { return 0.1 * std::sin(x[0]); });
        return solve_slab(rho0, u0, OffsetModel::local_plus_newtonian(PowerLaw{2.0}), 0.05, levels(10));
    });
    add("nonlocal 2D", [] {
        const Torus t = Torus::uniform(2, 32);
        const Field rho0 =
            Field::sample(t, [](const Point& x) { return 1.0 + 0.2 * std::sin(x[0]) * std::cos(x[1]); });
        const Field u0 = Field::sample_vector(t, [](const Point& x, int c) { return 0.1 * std::cos(x[1 - c]); });
        return solve_slab(rho0, u0, OffsetModel::local_plus_newtonian(PowerLaw{1.5}), 0.05, levels(10));
    });
    add("power-law 2D", [] {
        const Torus t = Torus::uniform(2, 32);
        const Field rho0 = Field::sample(t, [](const Point& x) { return 1.0 + 0.1 * std::cos(x[0] + x[1]); });
        const Field u0 = Field::sample_vector(t, [](const Point& x, int c) { return 0.2 * std::sin(x[c]); });
        return solve_slab(rho0, u0, OffsetModel::power_law(2.0), 0.05, levels(10));
    });
    add("reciprocal 1D", [] {
        const Torus t = Torus::uniform(1, 64);
        const Field rho0 = Field::sample(t, [](const Point& x) { return 1.0 + 0.3 * std::sin(x[0]); });
        const Field u0 = Field::sample(t, [](const Point& x) { return 0.1 * std::cos(2 * x[0]); });
        return solve_slab(rho0, u0, OffsetModel::singular_reciprocal(0.1, 1.0, 2.0), 0.02, levels(20));
    });
    return runs;
}

// Applies `check` to every corpus run; fails on the first run that violates it
// or that did not complete.
Outcome over_corpus(const std::vector<CorpusRun>& runs,
                    const std::function<std::optional<std::string>(const SlabResult&)>& check,
                    const std::function<std::string(const SlabResult&)>& summary) {
    Detail detail;
    bool ok = true;
    for (const auto& r : runs) {
        if (!r.result) {
            ok = false;
            detail << r.name << ": " << r.error << "; ";
            continue;
        }
        if (auto why = check(*r.result)) {
            ok = false;
            detail << r.name << ": " << *why << "; ";
        }
    }
    if (ok) detail << runs.size() << " runs, " << summary(*runs.front().result);
    return {ok, detail};
}

std::vector<CheckResult> contraction_suite() {
    const std::string s = "contraction";
    std::vector<CheckResult> out;
    const SmallData d;
    std::optional<SlabResult> full;
    out.push_back(timed(s, 7, "small-data slab contracts (T=0.05, N=64)", [&] {
        full = solve_slab(d.rho0, d.u0, d.model, 0.05, levels(10));
        const auto& reps = full->reports;
        const double k = max_kappa(reps);
        const bool ok = k < 1.0 && reps.back().converged && reps.size() <= 15;
        return Outcome{ok, Detail() << reps.size() << " iterations (<= 15), max kappa " << k << " (< 1), final delta "
                                    << full->state.last_delta};
    }));
    out.push_back(timed(s, 7, "kappa(T/2) < kappa(T)", [&] {
        const double kT = full ? max_kappa(full->reports) : max_kappa(solve_slab(d.rho0, d.u0, d.model, 0.05, levels(10)).reports);
        const double kh = max_kappa(solve_slab(d.rho0, d.u0, d.model, 0.025, levels(5)).reports);
        return Outcome{kh < kT, Detail() << "kappa(T/2) " << kh << ", kappa(T) " << kT};
    }));

    std::vector<CorpusRun> runs;
    out.push_back(timed(s, 0, "corpus slab audits", [&] {
        runs = corpus();
        return over_corpus(
            runs, [](const SlabResult& r) -> std::optional<std::string> {
                if (r.audit.passed()) return std::nullopt;
                return std::string("audit failed");
            },
            [](const SlabResult&) { return std::string("all audits passed"); });
    }));
    out.push_back(timed(s, 4, "mass drift per converged slab", [&] {
        double worst = 0.0;
        auto o = over_corpus(
            runs,
            [&](const SlabResult& r) -> std::optional<std::string> {
                worst = std::max(worst, r.audit.mass_drift);
                if (r.audit.mass_drift <= 1e-10) return std::nullopt;
                return std::string(Detail() << "drift " << r.audit.mass_drift);
            },
            [&](const SlabResult&) { return std::string(Detail() << "worst relative drift " << worst << " (<= 1e-10)"); });
        return o;
    }));
    out.push_back(timed(s, 6, "positivity on every corpus run", [&] {
        double lowest = std::numeric_limits<double>::infinity();
        return over_corpus(
            runs,
            [&](const SlabResult& r) -> std::optional<std::string> {
                double m = std::numeric_limits<double>::infinity();
                for (const auto& f : r.state.rho.fields) m = std::min(m, f.min());
                lowest = std::min(lowest, m);
                if (m > 0.0 && r.audit.positive) return std::nullopt;
                return std::string(Detail() << "min rho " << m);
            },
            [&](const SlabResult&) { return std::string(Detail() << "lowest density " << lowest); });
    }));
    out.push_back(timed(s, 8, "bound_M <= 2 x its iteration-2 value", [&] {
        double worst = 0.0;
        return over_corpus(
            runs,
            [&](const SlabResult& r) -> std::optional<std::string> {
                if (r.reports.size() < 2) return std::nullopt;
                const double m2 = r.reports[1].bound_M;
                for (const auto& it : r.reports) {
                    if (it.iter < 2) continue;
                    worst = std::max(worst, it.bound_M / m2);
                    if (it.bound_M > 2.0 * m2) return std::string(Detail() << "ratio " << it.bound_M / m2);
                }
                return std::nullopt;
            },
            [&](const SlabResult&) { return std::string(Detail() << "largest ratio " << worst); });
    }));
    out.push_back(timed(s, 9, "singular barrier 0.1 < rho < 0.9 (rho0 in [0.2, 0.8])", [&] {
        for (const auto& r : runs) {
            if (r.name != "singular barrier") continue;
            if (!r.result) return Outcome{false, r.error};
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (const auto& f : r.result->state.rho.fields) {
                lo = std::min(lo, f.min());
                hi = std::max(hi, f.max());
            }
            const bool ok = lo > 0.1 && hi < 0.9 && r.result->audit.barrier_ok;
            return Outcome{ok, Detail() << "rho in [" << lo << ", " << hi << "], theta " << r.result->audit.theta};
        }
        return Outcome{false, "barrier run missing"};
    }));
    out.push_back(timed(s, 11, "jacobian_min > 0 on every corpus run", [&] {
        double lowest = std::numeric_limits<double>::infinity();
        return over_corpus(
            runs,
            [&](const SlabResult& r) -> std::optional<std::string> {
                lowest = std::min(lowest, r.audit.jacobian_min);
                if (r.audit.jacobian_min > 0.0) return std::nullopt;
                return std::string(Detail() << "jacobian_min " << r.audit.jacobian_min);
            },
            [&](const SlabResult&) { return std::string(Detail() << "smallest jacobian " << lowest); });
    }));
    return out;
}

// ---------------------------------------------------------------- mms

Outcome study_outcome(const StudyConfig& c, double threshold) {
    const auto rows = convergence_study(c);
    Detail d;
    bool ok = rows.size() >= 3;
    d << "orders";
    for (std::size_t i = 1; i < rows.size(); ++i) {
        d << " " << rows[i].order_sup;
        if (i + 2 >= rows.size()) ok = ok && rows[i].order_sup >= threshold && rows[i].order_l2 >= threshold;
    }
    d << " (last two >= " << threshold << "), finest error " << rows.back().err_sup;
    return {ok, d};
}

std::vector<CheckResult> mms_suite() {
    const std::string s = "mms";
    std::vector<CheckResult> out;
    out.push_back(timed(s, 0, "forcing audits at every level of every case", [] {
        double worst = 0.0;
        struct Setup {
            OffsetModel model;
            int dim, n;
        };
        for (const auto& st : std::vector<Setup>{{OffsetModel::power_law(2.0), 2, 32},
                                                 {OffsetModel::local_plus_newtonian(PowerLaw{1.5}), 1, 64},
                                                 {OffsetModel::singular_rational(0.1, 1.0, 2.0), 1, 128}}) {
            for (const auto& id : catalog_ids()) {
                const auto c = build_case(id, st.model, Torus::uniform(st.dim, st.n));
                for (int k = 0; k <= 8; ++k) worst = std::max(worst, c.forcing_audit(0.0625 * k));
            }
        }
        const double t0 = build_case("traveling-wave", OffsetModel::power_law(2.0), Torus::uniform(1, 64)).forcing_audit(0.0);
        return Outcome{worst <= 1e-10 && t0 <= 1e-12,
                       Detail() << "worst " << worst << " (<= 1e-10), traveling wave at t=0 " << t0 << " (<= 1e-12)"};
    }));

    StudyConfig c;
    c.kind = StudyKind::TransportSpatial;
    c.resolutions = {12, 16, 24, 32};
    c.dts = {0.05};
    c.t_end = 1.0;
    out.push_back(timed(s, 10, "transport spatial order (quintic spline)", [=] { return study_outcome(c, 3.7); }));

    StudyConfig tt;
    tt.kind = StudyKind::TransportTemporal;
    tt.resolutions = {64};
    tt.dts = {0.1, 0.05, 0.025, 0.0125};
    out.push_back(timed(s, 10, "transport temporal order", [=] { return study_outcome(tt, 1.9); }));

    StudyConfig ph;
    ph.kind = StudyKind::ParabolicTemporal;
    ph.case_id = "heat-mode";
    ph.resolutions = {16};
    ph.dts = {0.05, 0.025, 0.0125, 0.00625};
    ph.t_end = 1.0;
    out.push_back(timed(s, 10, "parabolic temporal order, constant coefficient", [=] { return study_outcome(ph, 1.8); }));

    StudyConfig pv = ph;
    pv.case_id = "traveling-wave";
    pv.dts = {0.1, 0.05, 0.025, 0.0125};
    out.push_back(timed(s, 10, "parabolic temporal order, variable coefficient", [=] { return study_outcome(pv, 0.9); }));

    StudyConfig cp;
    cp.kind = StudyKind::Coupled;
    cp.resolutions = {16, 32, 64};
    cp.dts = {0.05, 0.025, 0.0125};
    out.push_back(timed(s, 10, "coupled Picard order, h and dt halved together", [=] { return study_outcome(cp, 0.9); }));

    // Momentum and formulation consistency under combined dt/h halving.
    std::vector<double> drift, mass_res, mom_res;
    auto refine = [&] {
        if (!drift.empty()) return;
        for (int ref = 0; ref < 3; ++ref) {
            const Torus t = Torus::uniform(1, 16 << ref);
            const Field rho0 = Field::sample(t, [](const Point& x) { return 1.0 + 0.2 * std::sin(x[0]); });
            const Field u0 = Field::sample(t, [](const Point& x) { return 0.3 + 0.2 * std::cos(x[0]); });
            const auto model = OffsetModel::power_law(2.0);
            const auto m = march(rho0, u0, model, 0.4, 0.1, levels(4 << ref));
            drift.push_back(momentum_drift(m.rho, m.w));
            const auto r = formulation_residual(m.rho, m.w, model);
            mass_res.push_back(r.mass);
            mom_res.push_back(r.momentum);
        }
    };
    auto orders = [](const std::vector<double>& v, double& lo) {
        Detail d;
        lo = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < v.size(); ++i) {
            const double o = std::log2(v[i - 1] / v[i]);
            lo = std::min(lo, o);
            d << (i > 1 ? ", " : "") << o;
        }
        return std::string(d);
    };
    out.push_back(timed(s, 12, "momentum drift order under dt/h halving", [&] {
        refine();
        double lo;
        const std::string d = orders(drift, lo);
        return Outcome{lo >= 1.0, Detail() << "drifts " << drift[0] << " .. " << drift.back() << ", orders " << d
                                           << " (>= 1)"};
    }));
    out.push_back(timed(s, 13, "divergence-form residual order under refinement", [&] {
        refine();
        double lo_m, lo_w;
        const std::string dm = orders(mass_res, lo_m), dw = orders(mom_res, lo_w);
        return Outcome{lo_m >= 1.0 && lo_w >= 1.0,
                       Detail() << "mass orders " << dm << ", momentum orders " << dw << " (>= 1)"};
    }));
    return out;
}

} // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"transport", "parabolic", "poisson", "contraction", "mms"};
    return names;
}

std::vector<CheckResult> run_suite(const std::string& name) {
    if (name == "all") {
        std::vector<CheckResult> out;
        for (const auto& n : suite_names()) {
            auto part = run_suite(n);
            out.insert(out.end(), part.begin(), part.end());
        }
        return out;
    }
    if (name == "transport") return transport_suite();
    if (name == "parabolic") return parabolic_suite();
    if (name == "poisson") return poisson_suite();
    if (name == "contraction") return contraction_suite();
    if (name == "mms") return mms_suite();
    throw InvalidArgument("unknown verify suite '" + name + "' (transport, parabolic, poisson, contraction, mms, all)");
}

bool all_passed(const std::vector<CheckResult>& checks) {
    for (const auto& c : checks) {
        if (!c.passed) return false;
    }
    return true;
}

void print_checks(std::ostream& out, const std::vector<CheckResult>& checks) {
    std::size_t width = 0;
    for (const auto& c : checks) width = std::max(width, c.name.size());
    int failed = 0;
    for (const auto& c : checks) {
        out << (c.passed ? "PASS " : "FAIL ") << std::left << std::setw(12) << c.suite << std::setw(width + 2)
            << c.name << std::right << std::fixed << std::setprecision(2) << std::setw(8) << c.seconds << "s  "
            << std::defaultfloat << c.detail << '\n';
        failed += !c.passed;
    }
    out << checks.size() - failed << "/" << checks.size() << " checks passed\n";
}

} // namespace awr
