#include "awr/mms.hpp"

#include "awr/error.hpp"
#include "awr/parabolic.hpp"
#include "awr/picard.hpp"
#include "awr/transport.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace awr {

namespace {

constexpr std::array<double, 3> kBaseVelocity{0.3, -0.2, 0.1};

Field sample_scalar(const Torus& t, const ManufacturedCase::Scalar& f, double time) {
    return Field::sample(t, [&](const Point& x) { return f(time, x); });
}

Field sample_vector(const Torus& t, const ManufacturedCase::Vector& f, double time) {
    return Field::sample_vector(t, [&](const Point& x, int c) { return f(c, time, x); });
}

/// (u . grad) w, componentwise.
Field advective(const Field& u, const Field& w) {
    const int dim = w.torus().dim();
    Field out(w.torus(), dim);
    for (int a = 0; a < dim; ++a) {
        const Field g = gradient(w.component_field(a));
        Field acc = Field::scalar(w.torus());
        for (int b = 0; b < dim; ++b) acc += multiply(u.component_field(b), g.component_field(b));
        out.set_component(a, acc);
    }
    return out;
}

double error_l2(const Field& e) { return sobolev_norm(e, 0); }

} // namespace

ManufacturedCase::ManufacturedCase(std::string id, OffsetModel model, Torus torus, Scalar rho, Scalar rho_t,
                                   Vector w, Vector w_t, std::optional<double> constant_mobility,
                                   std::optional<Point> phase_velocity)
    : id_(std::move(id)),
      model_(std::move(model)),
      torus_(std::move(torus)),
      rho_(std::move(rho)),
      rho_t_(std::move(rho_t)),
      w_(std::move(w)),
      w_t_(std::move(w_t)),
      constant_mobility_(constant_mobility),
      phase_velocity_(phase_velocity) {}

Field ManufacturedCase::rho(double t) const { return sample_scalar(torus_, rho_, t); }
Field ManufacturedCase::rho_t(double t) const { return sample_scalar(torus_, rho_t_, t); }
Field ManufacturedCase::w(double t) const { return sample_vector(torus_, w_, t); }
Field ManufacturedCase::w_t(double t) const { return sample_vector(torus_, w_t_, t); }

Field ManufacturedCase::u(double t) const {
    const Field r = rho(t);
    std::optional<Potential> phi;
    if (model_.newtonian()) phi = solve_potential(r);
    return closure_u(model_, w(t), r, phi);
}

Field ManufacturedCase::drift(double t) const {
    Field v = w(t);
    if (model_.newtonian()) v -= solve_potential(rho(t)).grad_phi;
    return v;
}

Field ManufacturedCase::mobility(double t) const {
    if (constant_mobility_) return Field::constant(torus_, 1, *constant_mobility_);
    return mobility_field(model_, rho(t));
}

Field ManufacturedCase::forcing_transport(double t) const {
    Field g = w_t(t);
    g += advective(u(t), w(t));
    return g;
}

Field ManufacturedCase::forcing_parabolic(double t) const {
    const Field r = rho(t);
    Field flux = multiply(mobility(t), gradient(r));
    flux -= multiply(r, drift(t));
    Field b = rho_t(t);
    b -= divergence(flux);
    return b;
}

double ManufacturedCase::forcing_audit(double t) const {
    const int dim = torus_.dim();
    const Field r = rho(t);
    const Field wv = w(t);
    const Field uv = u(t);
    const Field v = drift(t);
    const Field a = mobility(t);

    // (u . grad) w_a = div(w_a u) - w_a div u
    const Field div_u = divergence(uv);
    Field g = w_t(t);
    for (int c = 0; c < dim; ++c) {
        const Field wc = wv.component_field(c);
        Field term = divergence(multiply(wc, uv));
        term -= multiply(wc, div_u);
        Field gc = g.component_field(c);
        gc += term;
        g.set_component(c, gc);
    }
    double gap = (g - forcing_transport(t)).sup_norm();

    // div(rho v) - div(a grad rho) = grad rho . v + rho div v - grad a . grad rho - a Lap rho
    const Field grad_r = gradient(r);
    const Field grad_a = gradient(a);
    Field b = rho_t(t);
    b += multiply(r, divergence(v));
    b -= multiply(a, laplacian(r));
    for (int c = 0; c < dim; ++c) {
        b += multiply(grad_r.component_field(c), v.component_field(c));
        b -= multiply(grad_r.component_field(c), grad_a.component_field(c));
    }
    gap = std::max(gap, (b - forcing_parabolic(t)).sup_norm());
    return gap;
}

std::vector<std::string> catalog_ids() { return {"constant", "heat-mode", "traveling-wave", "product"}; }

ManufacturedCase build_case(const std::string& id, const OffsetModel& model, const Torus& torus) {
    const int dim = torus.dim();
    const double scale = model.is_singular() ? model.rho_sup() : 1.0;
    const double mean = model.is_singular() ? 0.7 * scale : 1.0;
    auto phase = [dim](double t, const Point& x) {
        double s = -t;
        for (int a = 0; a < dim; ++a) s += x[a];
        return s;
    };
    auto base = [](int c) { return kBaseVelocity[c]; };

    std::optional<ManufacturedCase> c;
    if (id == "constant") {
        Point zero{0.0, 0.0, 0.0};
        c.emplace(
            id, model, torus, [=](double, const Point&) { return mean; }, [](double, const Point&) { return 0.0; },
            [=](int k, double, const Point&) { return base(k); }, [](int, double, const Point&) { return 0.0; },
            std::nullopt, zero);
    } else if (id == "heat-mode") {
        const double nu = kHeatModeNu;
        c.emplace(
            id, model, torus,
            [=](double t, const Point& x) { return mean + 0.1 * scale * std::exp(-nu * t) * std::cos(x[0]); },
            [=](double t, const Point& x) { return -nu * 0.1 * scale * std::exp(-nu * t) * std::cos(x[0]); },
            [](int, double, const Point&) { return 0.0; }, [](int, double, const Point&) { return 0.0; }, nu);
    } else if (id == "traveling-wave") {
        Point pv{0.0, 0.0, 0.0};
        for (int a = 0; a < dim; ++a) pv[a] = 1.0 / dim;
        c.emplace(
            id, model, torus, [=](double t, const Point& x) { return mean + 0.2 * scale * std::sin(phase(t, x)); },
            [=](double t, const Point& x) { return -0.2 * scale * std::cos(phase(t, x)); },
            [=](int k, double t, const Point& x) { return base(k) + 0.1 * std::cos(phase(t, x)); },
            [=](int, double t, const Point& x) { return 0.1 * std::sin(phase(t, x)); }, std::nullopt, pv);
    } else if (id == "product") {
        const int last = dim - 1;
        c.emplace(
            id, model, torus,
            [=](double t, const Point& x) {
                return mean + 0.15 * scale * std::sin(x[0] - t) * std::cos(x[last] + 0.5 * t);
            },
            [=](double t, const Point& x) {
                return 0.15 * scale *
                       (-std::cos(x[0] - t) * std::cos(x[last] + 0.5 * t) -
                        0.5 * std::sin(x[0] - t) * std::sin(x[last] + 0.5 * t));
            },
            [=](int k, double t, const Point& x) {
                return base(k) + 0.1 * std::sin(x[k] + t) * std::cos(x[0] - 0.5 * t);
            },
            [=](int k, double t, const Point& x) {
                return 0.1 * (std::cos(x[k] + t) * std::cos(x[0] - 0.5 * t) +
                              0.5 * std::sin(x[k] + t) * std::sin(x[0] - 0.5 * t));
            });
    } else {
        throw InvalidArgument("unknown manufactured case '" + id + "'");
    }
    for (double t : {0.0, 0.5, 1.0}) model.require_admissible(c->rho(t), "manufactured density");
    return std::move(*c);
}

const char* study_kind_name(StudyKind kind) {
    switch (kind) {
    case StudyKind::TransportSpatial: return "transport-spatial";
    case StudyKind::TransportTemporal: return "transport-temporal";
    case StudyKind::ParabolicTemporal: return "parabolic-temporal";
    case StudyKind::Coupled: return "coupled";
    }
    return "?";
}

std::vector<StudyRow> convergence_study(const StudyConfig& cfg) {
    const std::size_t rows = std::max(cfg.resolutions.size(), cfg.dts.size());
    if (rows < 3) throw InvalidArgument("convergence_study: need at least three refinement levels");
    auto pick = [rows](const auto& list, std::size_t i, const char* name) {
        if (list.size() == 1) return list[0];
        if (list.size() != rows) throw InvalidArgument(std::string("convergence_study: ") + name + " list length");
        return list[i];
    };

    std::vector<StudyRow> out;
    for (std::size_t i = 0; i < rows; ++i) {
        const int n = pick(cfg.resolutions, i, "resolution");
        const double dt = pick(cfg.dts, i, "dt");
        const Torus torus = Torus::uniform(cfg.dim, n);
        const ManufacturedCase c = build_case(cfg.case_id, cfg.model, torus);
        const int steps = step_count(cfg.t_end, dt);
        const auto times = uniform_times(0.0, dt, steps);
        const TransportOptions topt{4, cfg.method};
        std::optional<Field> err;
        switch (cfg.kind) {
        case StudyKind::TransportSpatial: {
            if (!c.phase_velocity()) throw InvalidArgument("case '" + c.id() + "' has no phase velocity");
            const Field v = Field::sample_vector(torus, [&](const Point&, int a) { return (*c.phase_velocity())[a]; });
            const SampledTrajectory vel(Trajectory::constant(v, {0.0, cfg.t_end}), cfg.method);
            err = advect(c.w(0.0), vel, nullptr, cfg.t_end, dt, topt).fields.back() - c.w(cfg.t_end);
            break;
        }
        case StudyKind::TransportTemporal: {
            std::vector<Field> u, g;
            for (double t : times) {
                u.push_back(c.u(t));
                g.push_back(c.forcing_transport(t));
            }
            const SampledTrajectory vel(Trajectory(times, u), cfg.method);
            const SampledTrajectory src(Trajectory(times, g), cfg.method);
            err = advect(c.w(0.0), vel, &src, cfg.t_end, dt, topt).fields.back() - c.w(cfg.t_end);
            break;
        }
        case StudyKind::ParabolicTemporal: {
            std::vector<Field> v, a, b;
            for (double t : times) {
                v.push_back(c.drift(t));
                a.push_back(c.mobility(t));
                b.push_back(c.forcing_parabolic(t));
            }
            ParabolicProblem p{Trajectory(times, v), Trajectory(times, a), Trajectory(times, b), c.rho(0.0),
                               cfg.t_end, dt};
            err = solve(p).rho.fields.back() - c.rho(cfg.t_end);
            break;
        }
        case StudyKind::Coupled: {
            if (c.has_constant_mobility()) {
                throw InvalidArgument("case '" + c.id() + "' fixes the mobility and cannot drive the coupled scheme");
            }
            PicardOptions o;
            o.levels = steps;
            o.tol_fix = cfg.tol_fix;
            o.max_iter = 60;
            o.transport = topt;
            o.forcing.transport = [&c](double t) { return c.forcing_transport(t); };
            o.forcing.parabolic = [&c](double t) { return c.forcing_parabolic(t); };
            const MarchResult m = march(c.rho(0.0), c.u(0.0), cfg.model, cfg.t_end, cfg.t_end, o);
            const Field er = m.rho.fields.back() - c.rho(cfg.t_end);
            const Field ew = m.w.fields.back() - c.w(cfg.t_end);
            StudyRow row{torus.min_spacing(), dt, std::max(er.sup_norm(), ew.sup_norm()),
                         std::hypot(error_l2(er), error_l2(ew)), 0.0, 0.0};
            out.push_back(row);
            continue;
        }
        }
        out.push_back({torus.min_spacing(), dt, err->sup_norm(), error_l2(*err), 0.0, 0.0});
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (i == 0) {
            out[i].order_sup = out[i].order_l2 = nan;
            continue;
        }
        const bool h_changed = out[i].h != out[i - 1].h;
        const double ratio = h_changed ? out[i - 1].h / out[i].h : out[i - 1].dt / out[i].dt;
        out[i].order_sup = std::log(out[i - 1].err_sup / out[i].err_sup) / std::log(ratio);
        out[i].order_l2 = std::log(out[i - 1].err_l2 / out[i].err_l2) / std::log(ratio);
    }
    return out;
}

void write_study_csv(std::ostream& out, const std::vector<StudyRow>& rows) {
    out << "# awr-mms v1\n";
    out << "h,dt,err_sup,err_l2,order_sup,order_l2\n";
    const auto old_precision = out.precision(12);
    auto num = [&](double v) -> std::ostream& {
        if (!std::isnan(v)) out << v;
        return out;
    };
    for (const auto& r : rows) {
        num(r.h) << ',';
        num(r.dt) << ',';
        num(r.err_sup) << ',';
        num(r.err_l2) << ',';
        num(r.order_sup) << ',';
        num(r.order_l2) << '\n';
    }
    out.precision(old_precision);
}

} // namespace awr
