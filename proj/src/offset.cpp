#include "awr/offset.hpp"

#include "awr/error.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace awr {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

OffsetModel::OffsetModel(LocalOffset local, bool newtonian)
    : local_(std::move(local)), newtonian_(newtonian) {
    std::visit(overloaded{
                   [](const PowerLaw& m) {
                       if (!(m.gamma > 0.0)) throw InvalidArgument("PowerLaw: gamma must be > 0");
                   },
                   [](const SingularRational& m) {
                       if (!(m.a > 0.0) || !(m.alpha > 0.0) || !(m.beta > 1.0)) {
                           throw InvalidArgument(
                               "SingularRational: requires a > 0, alpha > 0, beta > 1");
                       }
                   },
                   [](const SingularReciprocal& m) {
                       if (!(m.eps > 0.0) || !(m.beta > 0.0) || !(m.rho_max > 0.0)) {
                           throw InvalidArgument(
                               "SingularReciprocal: requires eps > 0, beta > 0, rho_max > 0");
                       }
                   },
               },
               local_);
}

double OffsetModel::rho_sup() const {
    return std::visit(overloaded{
                          [](const PowerLaw&) { return std::numeric_limits<double>::infinity(); },
                          [](const SingularRational&) { return 1.0; },
                          [](const SingularReciprocal& m) { return m.rho_max; },
                      },
                      local_);
}

std::string OffsetModel::name() const {
    std::string base = std::visit(overloaded{
                                      [](const PowerLaw&) { return std::string("PowerLaw"); },
                                      [](const SingularRational&) {
                                          return std::string("SingularRational");
                                      },
                                      [](const SingularReciprocal&) {
                                          return std::string("SingularReciprocal");
                                      },
                                  },
                                  local_);
    return newtonian_ ? "LocalPlusNewtonian(" + base + ")" : base;
}

void OffsetModel::require_admissible(double rho) const {
    if (admissible(rho)) return;
    std::ostringstream msg;
    msg << name() << ": density " << rho << " outside admissible interval (0, " << rho_sup()
        << ")";
    throw DomainViolation(msg.str());
}

void OffsetModel::require_admissible(const Field& rho, const char* context) const {
    const Torus& t = rho.torus();
    for (std::size_t i = 0; i < rho.nodes(); ++i) {
        if (admissible(rho[i])) continue;
        const auto idx = t.unravel(i);
        std::ostringstream msg;
        msg << context << ": " << name() << " density " << rho[i] << " at node (" << idx[0];
        for (int a = 1; a < t.dim(); ++a) msg << ", " << idx[a];
        msg << ") outside admissible interval (0, " << rho_sup() << ")";
        throw DomainViolation(msg.str());
    }
}

double OffsetModel::p(double rho) const {
    require_admissible(rho);
    return std::visit(overloaded{
                          [&](const PowerLaw& m) { return std::pow(rho, m.gamma); },
                          [&](const SingularRational& m) {
                              return m.a * std::pow(rho, m.alpha) / std::pow(1.0 - rho, m.beta);
                          },
                          [&](const SingularReciprocal& m) {
                              return m.eps * std::pow(1.0 / rho - 1.0 / m.rho_max, -m.beta);
                          },
                      },
                      local_);
}

double OffsetModel::dp(double rho) const {
    require_admissible(rho);
    return std::visit(
        overloaded{
            [&](const PowerLaw& m) { return m.gamma * std::pow(rho, m.gamma - 1.0); },
            [&](const SingularRational& m) {
                const double gap = 1.0 - rho;
                return m.a * std::pow(rho, m.alpha - 1.0) * std::pow(gap, -m.beta - 1.0) *
                       (m.alpha * gap + m.beta * rho);
            },
            [&](const SingularReciprocal& m) {
                const double s = 1.0 / rho - 1.0 / m.rho_max;
                return m.eps * m.beta * std::pow(s, -m.beta - 1.0) / (rho * rho);
            },
        },
        local_);
}

double p_of(const OffsetModel& model, double rho) { return model.p(rho); }
double dp_of(const OffsetModel& model, double rho) { return model.dp(rho); }
double mobility(const OffsetModel& model, double rho) { return model.mobility(rho); }

Field mobility_field(const OffsetModel& model, const Field& rho) {
    model.require_admissible(rho, "mobility");
    return map(rho, [&](double r) { return model.mobility(r); });
}

Field grad_p_field(const OffsetModel& model, const Field& rho) {
    if (!rho.is_scalar()) throw InvalidArgument("grad_p_field expects a scalar density");
    model.require_admissible(rho, "offset gradient");
    const Field p = map(rho, [&](double r) { return model.p(r); });
    return gradient(dealias(p));
}

Potential solve_potential(const Field& rho) {
    if (!rho.is_scalar()) throw InvalidArgument("solve_potential expects a scalar density");
    const Torus& t = rho.torus();
    const Spectrum s = transform(rho);
    Spectrum phi_hat(t, 1);
    Spectrum grad_hat(t, t.dim());
    for (std::size_t b = 1; b < t.nodes(); ++b) {
        const auto idx = t.unravel(b);
        double k2 = 0.0;
        for (int a = 0; a < t.dim(); ++a) {
            const double k = t.wavenumber(a, idx[a]);
            k2 += k * k;
        }
        const Complex value = s.at(0, b) / k2;
        phi_hat.at(0, b) = value;
        for (int a = 0; a < t.dim(); ++a) {
            if (t.is_nyquist(a, idx[a])) continue;
            grad_hat.at(a, b) = Complex(0.0, t.wavenumber(a, idx[a])) * value;
        }
    }
    return {inverse(phi_hat), inverse(grad_hat)};
}

Field closure_u(const OffsetModel& model, const Field& w, const Field& rho,
                const std::optional<Potential>& phi) {
    if (model.newtonian() != phi.has_value()) {
        throw InvalidArgument(model.newtonian() ? "closure_u: nonlocal model needs a potential"
                                                : "closure_u: local model takes no potential");
    }
    Field u = w;
    u -= grad_p_field(model, rho);
    if (phi) u -= phi->grad_phi;
    return u;
}

} // namespace awr
