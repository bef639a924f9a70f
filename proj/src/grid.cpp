#include "awr/grid.hpp"

#include "awr/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace awr {

// ---------------------------------------------------------------------------
// Torus
// ---------------------------------------------------------------------------

Torus::Torus(int dim, std::array<int, 3> sizes, std::array<double, 3> lengths)
    : dim_(dim), sizes_(sizes), lengths_(lengths), nodes_(1) {
    if (dim < 1 || dim > 3) {
        throw InvalidArgument("torus dimension must be 1, 2 or 3, got " + std::to_string(dim));
    }
    for (int a = 0; a < 3; ++a) {
        if (a >= dim) {
            sizes_[a] = 1;
            lengths_[a] = 1.0;
            continue;
        }
        if (sizes_[a] < 8 || sizes_[a] % 2 != 0) {
            throw InvalidArgument("axis " + std::to_string(a) +
                                  ": point count must be even and >= 8, got " +
                                  std::to_string(sizes_[a]));
        }
        if (!(lengths_[a] > 0.0) || !std::isfinite(lengths_[a])) {
            throw InvalidArgument("axis " + std::to_string(a) + ": period must be positive");
        }
        nodes_ *= static_cast<std::size_t>(sizes_[a]);
    }
}

Torus Torus::uniform(int dim, int n, double length) {
    return Torus(dim, {n, n, n}, {length, length, length});
}

double Torus::min_spacing() const {
    double h = spacing(0);
    for (int a = 1; a < dim_; ++a) h = std::min(h, spacing(a));
    return h;
}

double Torus::volume() const {
    double v = 1.0;
    for (int a = 0; a < dim_; ++a) v *= lengths_[a];
    return v;
}

std::array<int, 3> Torus::unravel(std::size_t index) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = dim_ - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(index % sizes_[a]);
        index /= sizes_[a];
    }
    return idx;
}

std::size_t Torus::ravel(const std::array<int, 3>& idx) const {
    std::size_t index = 0;
    for (int a = 0; a < dim_; ++a) index = index * sizes_[a] + idx[a];
    return index;
}

Point Torus::node(std::size_t index) const {
    const auto idx = unravel(index);
    Point x{0.0, 0.0, 0.0};
    for (int a = 0; a < dim_; ++a) x[a] = idx[a] * spacing(a);
    return x;
}

int Torus::mode(int axis, int j) const {
    return 2 * j <= sizes_[axis] ? j : j - sizes_[axis];
}

double Torus::wavenumber(int axis, int j) const {
    return 2.0 * std::numbers::pi * mode(axis, j) / lengths_[axis];
}

bool Torus::operator==(const Torus& other) const {
    return dim_ == other.dim_ && sizes_ == other.sizes_ && lengths_ == other.lengths_;
}

// ---------------------------------------------------------------------------
// Field
// ---------------------------------------------------------------------------

Field::Field(const Torus& torus, int components)
    : torus_(torus), components_(components),
      values_(static_cast<std::size_t>(components) * torus.nodes(), 0.0) {
    if (components != 1 && components != torus.dim()) {
        throw InvalidArgument("field must have 1 or dim components");
    }
}

Field Field::constant(const Torus& torus, int components, double value) {
    Field f(torus, components);
    std::fill(f.values_.begin(), f.values_.end(), value);
    return f;
}

Field Field::sample(const Torus& torus, const std::function<double(const Point&)>& fn) {
    Field f(torus, 1);
    for (std::size_t i = 0; i < torus.nodes(); ++i) f.values_[i] = fn(torus.node(i));
    return f;
}

Field Field::sample_vector(const Torus& torus,
                           const std::function<double(const Point&, int)>& fn) {
    Field f(torus, torus.dim());
    for (int c = 0; c < torus.dim(); ++c) {
        for (std::size_t i = 0; i < torus.nodes(); ++i) f.at(c, i) = fn(torus.node(i), c);
    }
    return f;
}

Field Field::component_field(int c) const {
    Field f(torus_, 1);
    std::copy(component(c).begin(), component(c).end(), f.values_.begin());
    return f;
}

void Field::set_component(int c, const Field& scalar) {
    if (!scalar.is_scalar() || scalar.torus() != torus_) {
        throw InvalidArgument("set_component expects a scalar field on the same torus");
    }
    std::copy(scalar.values_.begin(), scalar.values_.end(), component(c).begin());
}

double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }
double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }

double Field::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool Field::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void Field::require_finite(const char* context) const {
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (std::isfinite(values_[k])) continue;
        const std::size_t node = k % nodes();
        const auto idx = torus_.unravel(node);
        std::ostringstream msg;
        msg << context << ": non-finite value " << values_[k] << " at component "
            << k / nodes() << ", node (" << idx[0];
        for (int a = 1; a < torus_.dim(); ++a) msg << ", " << idx[a];
        msg << ")";
        throw NonFiniteError(msg.str());
    }
}

void Field::check_compatible(const Field& other) const {
    if (other.torus_ != torus_ || other.components_ != components_) {
        throw InvalidArgument("field arithmetic on incompatible fields");
    }
}

Field& Field::operator+=(const Field& other) {
    check_compatible(other);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
    return *this;
}

Field& Field::operator-=(const Field& other) {
    check_compatible(other);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
    return *this;
}

Field& Field::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

Field& Field::axpy(double s, const Field& other) {
    check_compatible(other);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += s * other.values_[k];
    return *this;
}

// ---------------------------------------------------------------------------
// Spectrum
// ---------------------------------------------------------------------------

Spectrum::Spectrum(const Torus& torus, int components)
    : torus_(torus), components_(components),
      coeffs_(static_cast<std::size_t>(components) * torus.nodes(), Complex(0.0, 0.0)) {}

Complex Spectrum::coefficient(int component, const std::array<int, 3>& k) const {
    std::array<int, 3> bin{0, 0, 0};
    for (int a = 0; a < torus_.dim(); ++a) {
        const int n = torus_.size(a);
        bin[a] = ((k[a] % n) + n) % n;
    }
    return at(component, torus_.ravel(bin));
}

// ---------------------------------------------------------------------------
// FFT plumbing
// ---------------------------------------------------------------------------

namespace {

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(const Torus& torus, int sign) {
        std::array<int, 5> key{torus.dim(), torus.size(0), torus.size(1), torus.size(2), sign};
        std::lock_guard lock(mutex_);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<int> n(torus.dim());
        for (int a = 0; a < torus.dim(); ++a) n[a] = torus.size(a);
        auto* in = fftw_alloc_complex(torus.nodes());
        auto* out = fftw_alloc_complex(torus.nodes());
        fftw_plan plan = fftw_plan_dft(torus.dim(), n.data(), in, out, sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(in);
        fftw_free(out);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::array<int, 5>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

void execute(const Torus& torus, int sign, std::span<const Complex> in, std::span<Complex> out) {
    fftw_plan plan = plan_cache().get(torus, sign);
    // new-array execution never writes the input for out-of-place complex plans
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

/// Applies a per-bin multiplier m(bin) to every component of s.
template <class Fn>
Spectrum apply(const Spectrum& s, Fn&& multiplier) {
    Spectrum out(s.torus(), s.components());
    for (int c = 0; c < s.components(); ++c) {
        auto src = s.component(c);
        auto dst = out.component(c);
        for (std::size_t b = 0; b < s.nodes(); ++b) dst[b] = multiplier(b) * src[b];
    }
    return out;
}

} // namespace

Spectrum transform(const Field& f) {
    f.require_finite("transform");
    const Torus& t = f.torus();
    Spectrum s(t, f.components());
    std::vector<Complex> buffer(t.nodes());
    const double scale = 1.0 / static_cast<double>(t.nodes());
    for (int c = 0; c < f.components(); ++c) {
        auto src = f.component(c);
        std::transform(src.begin(), src.end(), buffer.begin(),
                       [](double v) { return Complex(v, 0.0); });
        auto dst = s.component(c);
        execute(t, FFTW_FORWARD, buffer, dst);
        for (auto& z : dst) z *= scale;
    }
    return s;
}

Field inverse(const Spectrum& s) {
    const Torus& t = s.torus();
    Field f(t, s.components());
    std::vector<Complex> buffer(t.nodes());
    for (int c = 0; c < s.components(); ++c) {
        execute(t, FFTW_BACKWARD, s.component(c), buffer);
        auto dst = f.component(c);
        std::transform(buffer.begin(), buffer.end(), dst.begin(),
                       [](const Complex& z) { return z.real(); });
    }
    return f;
}

// ---------------------------------------------------------------------------
// Differential operators
// ---------------------------------------------------------------------------

namespace {

/// i * k_axis per bin, zero on the Nyquist bin of that axis.
std::vector<Complex> derivative_symbol(const Torus& t, int axis) {
    std::vector<Complex> sym(t.nodes());
    for (std::size_t b = 0; b < t.nodes(); ++b) {
        const int j = t.unravel(b)[axis];
        sym[b] = t.is_nyquist(axis, j) ? Complex(0.0, 0.0) : Complex(0.0, t.wavenumber(axis, j));
    }
    return sym;
}

std::vector<double> laplacian_symbol(const Torus& t) {
    std::vector<double> sym(t.nodes());
    for (std::size_t b = 0; b < t.nodes(); ++b) {
        const auto idx = t.unravel(b);
        double k2 = 0.0;
        for (int a = 0; a < t.dim(); ++a) {
            const double k = t.wavenumber(a, idx[a]);
            k2 += k * k;
        }
        sym[b] = -k2;
    }
    return sym;
}

} // namespace

Field gradient(const Field& f) {
    if (!f.is_scalar()) throw InvalidArgument("gradient expects a scalar field");
    const Torus& t = f.torus();
    const Spectrum s = transform(f);
    Field g = Field::vector(t);
    for (int a = 0; a < t.dim(); ++a) {
        const auto sym = derivative_symbol(t, a);
        g.set_component(a, inverse(apply(s, [&](std::size_t b) { return sym[b]; })));
    }
    return g;
}

Field divergence(const Field& v) {
    const Torus& t = v.torus();
    if (v.components() != t.dim()) throw InvalidArgument("divergence expects a vector field");
    const Spectrum s = transform(v);
    Spectrum acc(t, 1);
    for (int a = 0; a < t.dim(); ++a) {
        const auto sym = derivative_symbol(t, a);
        auto src = s.component(a);
        auto dst = acc.component(0);
        for (std::size_t b = 0; b < t.nodes(); ++b) dst[b] += sym[b] * src[b];
    }
    return inverse(acc);
}

Field laplacian(const Field& f) {
    const auto sym = laplacian_symbol(f.torus());
    return inverse(apply(transform(f), [&](std::size_t b) { return Complex(sym[b], 0.0); }));
}

void dealias_in_place(Spectrum& s) {
    const Torus& t = s.torus();
    for (std::size_t b = 0; b < t.nodes(); ++b) {
        const auto idx = t.unravel(b);
        bool keep = true;
        for (int a = 0; a < t.dim(); ++a) {
            if (3 * std::abs(t.mode(a, idx[a])) > t.size(a)) keep = false;
        }
        if (keep) continue;
        for (int c = 0; c < s.components(); ++c) s.at(c, b) = Complex(0.0, 0.0);
    }
}

Field dealias(const Field& f) {
    Spectrum s = transform(f);
    dealias_in_place(s);
    return inverse(s);
}

double sobolev_norm(const Spectrum& s, int order) {
    if (order < 0 || order > 4) throw InvalidArgument("Sobolev order must lie in 0..4");
    const Torus& t = s.torus();
    const auto sym = laplacian_symbol(t);
    double sum = 0.0;
    for (int c = 0; c < s.components(); ++c) {
        auto coeffs = s.component(c);
        for (std::size_t b = 0; b < t.nodes(); ++b) {
            sum += std::pow(1.0 - sym[b], order) * std::norm(coeffs[b]);
        }
    }
    return std::sqrt(sum * t.volume());
}

double sobolev_norm(const Field& f, int order) { return sobolev_norm(transform(f), order); }

double mean(const Field& f, int component) {
    const Torus& t = f.torus();
    std::vector<Complex> buffer(t.nodes());
    auto src = f.component(component);
    std::transform(src.begin(), src.end(), buffer.begin(),
                   [](double v) { return Complex(v, 0.0); });
    std::vector<Complex> out(t.nodes());
    execute(t, FFTW_FORWARD, buffer, out);
    return out[0].real() / static_cast<double>(t.nodes());
}

double integral(const Field& f, int component) {
    return mean(f, component) * f.torus().volume();
}

Field multiply(const Field& scalar, const Field& f) {
    if (!scalar.is_scalar() || scalar.torus() != f.torus()) {
        throw InvalidArgument("multiply expects a scalar field on the same torus");
    }
    Field out = f;
    for (int c = 0; c < f.components(); ++c) {
        auto dst = out.component(c);
        for (std::size_t i = 0; i < f.nodes(); ++i) dst[i] *= scalar[i];
    }
    return out;
}

Field map(const Field& f, const std::function<double(double)>& fn) {
    Field out = f;
    for (double& v : out.values()) v = fn(v);
    return out;
}

} // namespace awr
