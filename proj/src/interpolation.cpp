#include "awr/interpolation.hpp"

#include "awr/error.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace awr {

namespace {

int degree_of(InterpMethod m) { return m == InterpMethod::CubicSpline ? 3 : 5; }

/// Symbol of the centered B-spline sampled at the integers.
double bspline_symbol(int degree, double theta) {
    if (degree == 3) return (4.0 + 2.0 * std::cos(theta)) / 6.0;
    return (66.0 + 52.0 * std::cos(theta) + 2.0 * std::cos(2.0 * theta)) / 120.0;
}

double wrap(double x, double length) {
    double r = std::fmod(x, length);
    if (r < 0.0) r += length;
    return r;
}

} // namespace

void bspline_weights(int degree, double t, double* w) {
    const double s = 1.0 - t;
    if (degree == 3) {
        auto b0 = [](double u) { return u * u * u / 6.0; };
        auto b1 = [](double u) { return (3.0 * u * u * u - 6.0 * u * u + 4.0) / 6.0; };
        w[0] = b0(s);
        w[1] = b1(t);
        w[2] = b1(s);
        w[3] = b0(t);
        return;
    }
    auto b0 = [](double u) { return u * u * u * u * u / 120.0; };
    auto b1 = [](double u) {
        const double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
        return (26.0 - 50.0 * u + 20.0 * u2 + 20.0 * u3 - 20.0 * u4 + 5.0 * u5) / 120.0;
    };
    auto b2 = [](double u) {
        const double u2 = u * u, u4 = u2 * u2, u5 = u4 * u;
        return (66.0 - 60.0 * u2 + 30.0 * u4 - 10.0 * u5) / 120.0;
    };
    w[0] = b0(s);
    w[1] = b1(t);
    w[2] = b2(t);
    w[3] = b2(s);
    w[4] = b1(s);
    w[5] = b0(t);
}

Interpolant::Interpolant(const Field& f, InterpMethod method) : method_(method), samples_(f) {
    f.require_finite("interpolant setup");
    const Torus& t = f.torus();
    const Spectrum s = transform(f);
    if (method == InterpMethod::Trigonometric) {
        spectrum_.assign(s.component(0).begin(), s.component(0).end());
        for (int c = 1; c < f.components(); ++c) {
            spectrum_.insert(spectrum_.end(), s.component(c).begin(), s.component(c).end());
        }
        return;
    }
    // B-spline coefficients solve a circulant system, diagonal in Fourier space.
    const int degree = degree_of(method);
    Spectrum scaled(t, f.components());
    for (std::size_t b = 0; b < t.nodes(); ++b) {
        const auto idx = t.unravel(b);
        double sym = 1.0;
        for (int a = 0; a < t.dim(); ++a) {
            sym *= bspline_symbol(degree, 2.0 * std::numbers::pi * idx[a] / t.size(a));
        }
        for (int c = 0; c < f.components(); ++c) scaled.at(c, b) = s.at(c, b) / sym;
    }
    coeffs_ = inverse(scaled).values();
}

double Interpolant::operator()(int component, const Point& x) const {
    const Torus& t = torus();
    // exact node hit returns the stored sample
    std::array<int, 3> node{0, 0, 0};
    bool on_node = true;
    for (int a = 0; a < t.dim() && on_node; ++a) {
        const double xw = wrap(x[a], t.length(a));
        const long i = std::lround(xw / t.spacing(a));
        if (static_cast<double>(i) * t.spacing(a) != xw) on_node = false;
        node[a] = static_cast<int>(i % t.size(a));
    }
    if (on_node) return samples_.at(component, t.ravel(node));
    return method_ == InterpMethod::Trigonometric ? eval_trig(component, x)
                                                  : eval_spline(component, x);
}

double Interpolant::eval_spline(int component, const Point& x) const {
    const Torus& t = torus();
    const int degree = degree_of(method_);
    const int width = degree + 1;
    const int shift = (degree - 1) / 2;
    std::array<std::array<double, 6>, 3> w{};
    std::array<std::array<int, 6>, 3> ix{};
    for (int a = 0; a < 3; ++a) {
        if (a >= t.dim()) {
            w[a].fill(0.0);
            w[a][0] = 1.0;
            ix[a].fill(0);
            continue;
        }
        const int n = t.size(a);
        const double u = wrap(x[a], t.length(a)) / t.spacing(a);
        double cell = std::floor(u);
        const double frac = u - cell;
        bspline_weights(degree, frac, w[a].data());
        const int base = static_cast<int>(cell) - shift;
        for (int j = 0; j < width; ++j) ix[a][j] = (((base + j) % n) + n) % n;
    }
    const double* coeffs = coeffs_.data() + component * t.nodes();
    const int w1 = t.dim() > 1 ? width : 1;
    const int w2 = t.dim() > 2 ? width : 1;
    const std::size_t n1 = t.size(1), n2 = t.size(2);
    double sum = 0.0;
    for (int j0 = 0; j0 < width; ++j0) {
        double s1 = 0.0;
        for (int j1 = 0; j1 < w1; ++j1) {
            double s2 = 0.0;
            const std::size_t row = (ix[0][j0] * n1 + ix[1][j1]) * n2;
            for (int j2 = 0; j2 < w2; ++j2) s2 += w[2][j2] * coeffs[row + ix[2][j2]];
            s1 += w[1][j1] * s2;
        }
        sum += w[0][j0] * s1;
    }
    return sum;
}

double Interpolant::eval_trig(int component, const Point& x) const {
    const Torus& t = torus();
    std::array<std::vector<Complex>, 3> phase;
    for (int a = 0; a < 3; ++a) {
        if (a >= t.dim()) {
            phase[a] = {Complex(1.0, 0.0)};
            continue;
        }
        phase[a].resize(t.size(a));
        for (int j = 0; j < t.size(a); ++j) {
            const double arg = t.wavenumber(a, j) * x[a];
            phase[a][j] = t.is_nyquist(a, j) ? Complex(std::cos(arg), 0.0)
                                             : Complex(std::cos(arg), std::sin(arg));
        }
    }
    const Complex* c = spectrum_.data() + component * t.nodes();
    Complex sum(0.0, 0.0);
    std::size_t b = 0;
    for (int j0 = 0; j0 < t.size(0); ++j0) {
        for (int j1 = 0; j1 < t.size(1); ++j1) {
            const Complex p01 = phase[0][j0] * phase[1][j1];
            for (int j2 = 0; j2 < t.size(2); ++j2, ++b) sum += c[b] * p01 * phase[2][j2];
        }
    }
    return sum.real();
}

std::vector<double> interpolate(const Field& f, std::span<const Point> points,
                                InterpMethod method) {
    if (!f.is_scalar()) throw InvalidArgument("interpolate expects a scalar field");
    const Interpolant interp(f, method);
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(interp(p));
    return out;
}

} // namespace awr
