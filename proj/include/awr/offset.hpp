#pragma once

#include "awr/grid.hpp"

#include <optional>
#include <string>
#include <variant>

namespace awr {

/// p(rho) = rho^gamma, admissible on (0, inf).
struct PowerLaw {
    double gamma = 1.0;
};

/// p(rho) = a rho^alpha / (1 - rho)^beta with a > 0, alpha > 0, beta > 1.
/// Congestion density normalized to 1.
struct SingularRational {
    double a = 1.0;
    double alpha = 1.0;
    double beta = 2.0;
};

/// p(rho) = eps (1/rho - 1/rho_max)^(-beta), admissible on (0, rho_max).
struct SingularReciprocal {
    double eps = 1.0;
    double beta = 1.0;
    double rho_max = 1.0;
};

using LocalOffset = std::variant<PowerLaw, SingularRational, SingularReciprocal>;

/// Velocity-offset closure. The local part supplies p, p' and the mobility
/// rho p'(rho); when `newtonian()` is set the closure also carries the
/// Newtonian potential, -Lap(Phi) = rho - <rho>, as an extra gradient term.
class OffsetModel {
public:
    explicit OffsetModel(LocalOffset local, bool newtonian = false);

    static OffsetModel power_law(double gamma) { return OffsetModel(PowerLaw{gamma}); }
    static OffsetModel singular_rational(double a, double alpha, double beta) {
        return OffsetModel(SingularRational{a, alpha, beta});
    }
    static OffsetModel singular_reciprocal(double eps, double beta, double rho_max) {
        return OffsetModel(SingularReciprocal{eps, beta, rho_max});
    }
    static OffsetModel local_plus_newtonian(LocalOffset base) {
        return OffsetModel(std::move(base), true);
    }

    const LocalOffset& local() const { return local_; }
    bool newtonian() const { return newtonian_; }
    bool is_singular() const { return !std::holds_alternative<PowerLaw>(local_); }
    /// Upper end of the admissible density interval (infinity for PowerLaw).
    double rho_sup() const;
    std::string name() const;

    bool admissible(double rho) const { return rho > 0.0 && rho < rho_sup(); }
    /// Throws DomainViolation naming the variant and the violated bound.
    void require_admissible(double rho) const;
    /// Throws DomainViolation naming the first inadmissible node.
    void require_admissible(const Field& rho, const char* context) const;

    double p(double rho) const;
    double dp(double rho) const;
    double mobility(double rho) const { return rho * dp(rho); }

private:
    LocalOffset local_;
    bool newtonian_;
};

double p_of(const OffsetModel& model, double rho);
double dp_of(const OffsetModel& model, double rho);
double mobility(const OffsetModel& model, double rho);

/// Nodal mobility rho p'(rho).
Field mobility_field(const OffsetModel& model, const Field& rho);

/// Gradient of the pointwise offset p(rho), de-aliased before differentiation.
Field grad_p_field(const OffsetModel& model, const Field& rho);

struct Potential {
    Field phi;
    Field grad_phi;
};

/// Spectral solve of -Lap(Phi) = rho - <rho> with zero-mean Phi.
Potential solve_potential(const Field& rho);

/// u = w - grad p(rho), minus grad Phi for the Newtonian variant. `phi` must be
/// present exactly when the model is nonlocal.
Field closure_u(const OffsetModel& model, const Field& w, const Field& rho,
                const std::optional<Potential>& phi = std::nullopt);

} // namespace awr
