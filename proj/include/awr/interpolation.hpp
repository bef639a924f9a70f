#pragma once

#include "awr/grid.hpp"

#include <span>
#include <vector>

namespace awr {

enum class InterpMethod {
    QuinticSpline,  ///< periodic quintic B-spline, O(h^6); the default
    CubicSpline,    ///< periodic cubic B-spline, O(h^4)
    Trigonometric,  ///< direct Fourier-series evaluation, exact on band-limited data
};

/// Off-lattice evaluation of a field. Setup costs one FFT per component; a
/// spline query then touches (degree+1)^dim coefficients. Points are wrapped
/// periodically, so any real coordinates are accepted.
class Interpolant {
public:
    explicit Interpolant(const Field& f, InterpMethod method = InterpMethod::QuinticSpline);

    const Torus& torus() const { return samples_.torus(); }
    int components() const { return samples_.components(); }
    InterpMethod method() const { return method_; }

    double operator()(int component, const Point& x) const;
    double operator()(const Point& x) const { return (*this)(0, x); }

private:
    double eval_spline(int component, const Point& x) const;
    double eval_trig(int component, const Point& x) const;

    InterpMethod method_;
    Field samples_;
    std::vector<double> coeffs_;   // spline coefficients, component-major
    std::vector<Complex> spectrum_; // trig mode only
};

std::vector<double> interpolate(const Field& f, std::span<const Point> points,
                                InterpMethod method = InterpMethod::QuinticSpline);

/// Weights of the uniform B-spline of the given degree (3 or 5) on the cell
/// [i, i+1) at fractional offset t; weight j multiplies coefficient
/// i + j - (degree-1)/2.
void bspline_weights(int degree, double t, double* weights);

} // namespace awr
