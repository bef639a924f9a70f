#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace awr {

using Point = std::array<double, 3>;
using Complex = std::complex<double>;

/// Periodic lattice on the d-torus, d in {1,2,3}.
///
/// Node i along axis a sits at x = i * h_a with h_a = L_a / N_a. Linear
/// node indices are row-major (axis 0 slowest). Every N_a must be even and
/// at least 8; every L_a must be positive.
class Torus {
public:
    Torus(int dim, std::array<int, 3> sizes, std::array<double, 3> lengths);

    /// Cube-shaped torus with N points and period L on every axis.
    static Torus uniform(int dim, int n, double length = 6.283185307179586);

    int dim() const { return dim_; }
    int size(int axis) const { return sizes_[axis]; }
    double length(int axis) const { return lengths_[axis]; }
    double spacing(int axis) const { return lengths_[axis] / sizes_[axis]; }
    double min_spacing() const;
    std::size_t nodes() const { return nodes_; }
    double volume() const;

    /// Multi-index of a linear node index; unused axes are 0.
    std::array<int, 3> unravel(std::size_t index) const;
    std::size_t ravel(const std::array<int, 3>& idx) const;
    Point node(std::size_t index) const;

    /// Physical wavenumber 2*pi*k/L of FFT bin j along an axis.
    double wavenumber(int axis, int j) const;
    /// Signed integer mode index of FFT bin j (the Nyquist bin reports +N/2).
    int mode(int axis, int j) const;
    bool is_nyquist(int axis, int j) const { return 2 * j == sizes_[axis]; }

    bool operator==(const Torus& other) const;
    bool operator!=(const Torus& other) const { return !(*this == other); }

private:
    int dim_;
    std::array<int, 3> sizes_;
    std::array<double, 3> lengths_;
    std::size_t nodes_;
};

/// Real lattice samples of a scalar (1 component) or vector (dim components)
/// function. Storage is component-major: all nodes of component 0, then
/// component 1, ...
class Field {
public:
    Field(const Torus& torus, int components);

    static Field scalar(const Torus& torus) { return Field(torus, 1); }
    static Field vector(const Torus& torus) { return Field(torus, torus.dim()); }
    static Field constant(const Torus& torus, int components, double value);
    static Field sample(const Torus& torus, const std::function<double(const Point&)>& fn);
    static Field sample_vector(const Torus& torus,
                               const std::function<double(const Point&, int)>& fn);

    const Torus& torus() const { return torus_; }
    int components() const { return components_; }
    bool is_scalar() const { return components_ == 1; }
    std::size_t nodes() const { return torus_.nodes(); }

    double& at(int component, std::size_t node) { return values_[component * nodes() + node]; }
    double at(int component, std::size_t node) const { return values_[component * nodes() + node]; }
    double& operator[](std::size_t node) { return values_[node]; }
    double operator[](std::size_t node) const { return values_[node]; }

    std::span<double> component(int c) { return {values_.data() + c * nodes(), nodes()}; }
    std::span<const double> component(int c) const {
        return {values_.data() + c * nodes(), nodes()};
    }
    Field component_field(int c) const;
    void set_component(int c, const Field& scalar);

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    double min() const;
    double max() const;
    /// Maximum absolute value over all components.
    double sup_norm() const;
    bool all_finite() const;
    /// Throws NonFiniteError naming the first offending node.
    void require_finite(const char* context) const;

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(double s);
    /// this += s * other
    Field& axpy(double s, const Field& other);

    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator*(double s, Field a) { return a *= s; }

private:
    void check_compatible(const Field& other) const;

    Torus torus_;
    int components_;
    std::vector<double> values_;
};

/// Normalized discrete Fourier coefficients c(k) = (1/N) sum_x f(x) e^{-i k.x},
/// one block per component, bins in FFTW order.
class Spectrum {
public:
    Spectrum(const Torus& torus, int components);

    const Torus& torus() const { return torus_; }
    int components() const { return components_; }
    std::size_t nodes() const { return torus_.nodes(); }

    Complex& at(int component, std::size_t bin) { return coeffs_[component * nodes() + bin]; }
    Complex at(int component, std::size_t bin) const { return coeffs_[component * nodes() + bin]; }
    std::span<Complex> component(int c) { return {coeffs_.data() + c * nodes(), nodes()}; }
    std::span<const Complex> component(int c) const {
        return {coeffs_.data() + c * nodes(), nodes()};
    }

    /// Coefficient at integer wave vector k (negative entries allowed).
    Complex coefficient(int component, const std::array<int, 3>& k) const;

private:
    Torus torus_;
    int components_;
    std::vector<Complex> coeffs_;
};

Spectrum transform(const Field& f);
Field inverse(const Spectrum& s);

/// Spectral gradient of a scalar field (Nyquist bins zeroed).
Field gradient(const Field& f);
/// Spectral divergence of a vector field.
Field divergence(const Field& v);
/// Spectral Laplacian, componentwise.
Field laplacian(const Field& f);

/// 2/3-rule truncation: zero every bin with |k_a| > N_a/3 on some axis.
Field dealias(const Field& f);
void dealias_in_place(Spectrum& s);

/// Discrete H^k norm: sqrt(vol * sum_k (1+|k|^2)^order |c(k)|^2), summed over
/// components.
double sobolev_norm(const Field& f, int order);
double sobolev_norm(const Spectrum& s, int order);

/// Lattice average of one component (the k = 0 coefficient).
double mean(const Field& f, int component = 0);
/// Lattice quadrature of one component over the torus.
double integral(const Field& f, int component = 0);

/// Pointwise product of two scalar fields, or scalar times each component of
/// a vector field.
Field multiply(const Field& scalar, const Field& f);
/// Pointwise map of a scalar field.
Field map(const Field& f, const std::function<double(double)>& fn);

} // namespace awr
