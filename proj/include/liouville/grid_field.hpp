#pragma once

// Periodic fields on the uniform circle grid theta_j = 2*pi*j/n and their
// Fourier-side representation. Conventions:
//   coeff(m) = (1/2pi) * integral u(theta) e^{-im theta} dtheta
//   synthesize: u(theta_j) = sum_m coeff(m) e^{im theta_j}
// Modes run over m in [-n/2, n/2 - 1] (FFTW bin order internally).

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "liouville/fft.hpp"

namespace liouville {

using complexd = std::complex<double>;

inline constexpr double pi = std::numbers::pi_v<double>;
inline constexpr double two_pi = 2.0 * std::numbers::pi_v<double>;

// Numerical failures that should surface as such (CLI exit code 3), as
// opposed to malformed configuration (std::invalid_argument, exit code 2).
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Spectral content beyond what the grid can carry.
struct aliasing_error : numeric_error {
    using numeric_error::numeric_error;
};

[[nodiscard]] inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

[[nodiscard]] inline int pow2_at_least(int n) {
    int p = 8;
    while (p < n) p <<= 1;
    return p;
}

[[nodiscard]] inline double wrap_angle(double t) {
    // Wrap to (-pi, pi].
    t = std::fmod(t, two_pi);
    if (t <= -pi) t += two_pi;
    if (t > pi) t -= two_pi;
    return t;
}

// ---------------------------------------------------------------------------
// GridField
// ---------------------------------------------------------------------------

struct GridField {
    std::vector<complexd> v;

    GridField() = default;

    explicit GridField(std::vector<complexd> samples) : v(std::move(samples)) {
        check_shape();
        check_finite();
    }

    [[nodiscard]] static GridField zeros(int n) {
        GridField f;
        f.v.assign(check_n(n), complexd(0.0, 0.0));
        return f;
    }

    [[nodiscard]] static GridField from_real(const std::vector<double>& samples) {
        GridField f;
        f.v.reserve(samples.size());
        for (double x : samples) f.v.emplace_back(x, 0.0);
        f.check_shape();
        f.check_finite();
        return f;
    }

    // f(theta) -> double or complex.
    template <class F>
    [[nodiscard]] static GridField from_function(int n, F&& f) {
        GridField g;
        g.v.resize(check_n(n));
        for (int j = 0; j < n; ++j) g.v[j] = complexd(f(two_pi * j / n));
        g.check_finite();
        return g;
    }

    [[nodiscard]] int n() const { return static_cast<int>(v.size()); }
    [[nodiscard]] double theta(int j) const { return two_pi * j / n(); }
    [[nodiscard]] double spacing() const { return two_pi / n(); }

    [[nodiscard]] double max_imag() const {
        double m = 0.0;
        for (const auto& z : v) m = std::max(m, std::abs(z.imag()));
        return m;
    }

    [[nodiscard]] bool is_real(double tol = 1e-13) const { return max_imag() <= tol; }

    [[nodiscard]] double sup_abs() const {
        double m = 0.0;
        for (const auto& z : v) m = std::max(m, std::abs(z));
        return m;
    }

    [[nodiscard]] std::vector<double> real_samples() const {
        std::vector<double> r(v.size());
        for (size_t j = 0; j < v.size(); ++j) r[j] = v[j].real();
        return r;
    }

    static int check_n(int n) {
        if (n < 8 || !is_pow2(n))
            throw std::invalid_argument("grid size must be a power of two >= 8, got " +
                                        std::to_string(n));
        return n;
    }

private:
    void check_shape() const { check_n(n()); }

    void check_finite() const {
        for (const auto& z : v)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > 1e300)
                throw std::invalid_argument("grid field sample not finite");
    }
};

// Periodic trapezoid rule; exact for trigonometric polynomials up to the grid.
[[nodiscard]] inline complexd integrate(const GridField& f) {
    complexd s(0.0, 0.0);
    for (const auto& z : f.v) s += z;
    return s * f.spacing();
}

[[nodiscard]] inline double integrate_real(const GridField& f) { return integrate(f).real(); }

[[nodiscard]] inline complexd mean(const GridField& f) { return integrate(f) / two_pi; }

// ---------------------------------------------------------------------------
// SpectralField
// ---------------------------------------------------------------------------

struct SpectralField {
    // FFTW bin order: c[k] is mode k for k < n/2 and mode k - n for k >= n/2.
    std::vector<complexd> c;

    SpectralField() = default;

    [[nodiscard]] static SpectralField zeros(int n) {
        SpectralField s;
        s.c.assign(GridField::check_n(n), complexd(0.0, 0.0));
        return s;
    }

    [[nodiscard]] int n() const { return static_cast<int>(c.size()); }
    [[nodiscard]] int mode_min() const { return -n() / 2; }
    [[nodiscard]] int mode_max() const { return n() / 2 - 1; }

    [[nodiscard]] int bin(int mode) const {
        if (mode < mode_min() || mode > mode_max())
            throw std::invalid_argument("mode out of range");
        return mode >= 0 ? mode : mode + n();
    }

    [[nodiscard]] complexd coeff(int mode) const { return c[bin(mode)]; }
    void set_coeff(int mode, complexd value) { c[bin(mode)] = value; }

    [[nodiscard]] double energy() const {
        double e = 0.0;
        for (const auto& z : c) e += std::norm(z);
        return e;
    }

    // Fraction of (mean-excluded) energy carried by modes with |m| > cutoff.
    [[nodiscard]] double tail_energy_fraction(int cutoff) const {
        double total = 0.0, tail = 0.0;
        for (int k = 0; k < n(); ++k) {
            const int m = (k < n() / 2) ? k : k - n();
            if (m == 0) continue;
            const double e = std::norm(c[k]);
            total += e;
            if (std::abs(m) > cutoff) tail += e;
        }
        return total > 0.0 ? tail / total : 0.0;
    }
};

[[nodiscard]] inline SpectralField analyze(const GridField& f) {
    SpectralField s;
    s.c = f.v;
    detail::dft_forward(s.c);
    const double inv = 1.0 / f.n();
    for (auto& z : s.c) z *= inv;
    return s;
}

[[nodiscard]] inline GridField synthesize(const SpectralField& s) {
    GridField f;
    f.v = s.c;
    detail::dft_backward(f.v);
    return f;
}

// Copy overlapping modes into a grid of size m (zero-pad or truncate).
[[nodiscard]] inline SpectralField resize_modes(const SpectralField& s, int m) {
    SpectralField out = SpectralField::zeros(m);
    const int keep = std::min(s.n(), m) / 2;
    for (int k = -keep; k < keep; ++k) out.set_coeff(k, s.coeff(k));
    return out;
}

[[nodiscard]] inline GridField resample(const GridField& f, int m) {
    if (m == f.n()) return f;
    return synthesize(resize_modes(analyze(f), m));
}

// Direct evaluation of the trigonometric interpolant at an arbitrary angle.
[[nodiscard]] inline complexd eval_at(const SpectralField& s, double theta) {
    const complexd w = std::polar(1.0, theta);
    const int half = s.n() / 2;
    // Positive modes by Horner in w, negative modes by Horner in conj(w).
    complexd pos(0.0, 0.0);
    for (int m = half - 1; m >= 1; --m) pos = (pos + s.coeff(m)) * w;
    complexd neg(0.0, 0.0);
    const complexd wc = std::conj(w);
    for (int m = half; m >= 1; --m) neg = (neg + s.coeff(-m)) * wc;
    return s.coeff(0) + pos + neg;
}

// ---------------------------------------------------------------------------
// Dealiased pointwise algebra (2x oversample, apply, truncate back)
// ---------------------------------------------------------------------------

[[nodiscard]] inline GridField product_dealiased(const GridField& a, const GridField& b) {
    if (a.n() != b.n()) throw std::invalid_argument("product of mismatched grids");
    const int n2 = 2 * a.n();
    GridField fa = resample(a, n2), fb = resample(b, n2);
    for (int j = 0; j < n2; ++j) fa.v[j] *= fb.v[j];
    return synthesize(resize_modes(analyze(fa), a.n()));
}

// func applied pointwise on the 2x grid, truncated back; use for e^lambda
// and similar nonlinear images feeding spectral operators.
template <class F>
[[nodiscard]] inline GridField nonlinear_dealiased(const GridField& a, F&& func) {
    const int n2 = 2 * a.n();
    GridField fa = resample(a, n2);
    for (auto& z : fa.v) z = complexd(func(z));
    return synthesize(resize_modes(analyze(fa), a.n()));
}

[[nodiscard]] inline GridField exp_dealiased(const GridField& a) {
    return nonlinear_dealiased(a, [](complexd z) { return std::exp(z); });
}

}  // namespace liouville
