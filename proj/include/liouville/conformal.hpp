#pragma once

// Conformal factor on the boundary circle and the disk immersion it
// generates. The chain is constructive:
//   rho = conjugate(lambda), g = holomorphic extension of lambda + i rho,
//   Phi' = e^{i theta0} e^{g},  Phi = power-series antiderivative, Phi(1) = 0.
// By construction |Phi'(e^{i theta})| = e^{lambda(theta)} and Phi' never
// vanishes, so Phi is an immersion of the closed disk.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "liouville/grid_field.hpp"
#include "liouville/moebius.hpp"
#include "liouville/spectral_ops.hpp"

namespace liouville {

// Real boundary factor lambda with its induced curve length cached.
struct ConformalFactor {
    GridField lambda;
    double length = 0.0;  // int e^lambda dtheta

    ConformalFactor() = default;
    explicit ConformalFactor(GridField l) : lambda(std::move(l)) {
        if (!lambda.is_real(1e-12))
            throw std::invalid_argument("conformal factor must be real");
        // Cheap sanity bound so exp below cannot overflow.
        if (lambda.sup_abs() > 500.0)
            throw std::invalid_argument("conformal factor out of representable range");
        GridField e = exp_field();
        length = integrate_real(e);
    }

    [[nodiscard]] int n() const { return lambda.n(); }

    [[nodiscard]] GridField exp_field() const {
        GridField e = lambda;
        for (auto& z : e.v) z = std::exp(z.real());
        return e;
    }

    [[nodiscard]] static ConformalFactor from_function(int n,
                                                       const std::function<double(double)>& f) {
        return ConformalFactor(GridField::from_function(n, f));
    }
};

// Curvature prescribed by a factor: kappa = (|m|-multiplier(lambda) + 1) e^{-lambda}.
[[nodiscard]] inline GridField curvature_from_factor(const ConformalFactor& cf,
                                                     AliasGuard guard = {}) {
    GridField hl = half_laplacian(cf.lambda, guard);
    GridField out = hl;
    for (int j = 0; j < out.n(); ++j)
        out.v[j] = (hl.v[j].real() + 1.0) * std::exp(-cf.lambda.v[j].real());
    return out;
}

struct ImmersionCertificate {
    double boundary_match = 0.0;   // sup | |Phi'(e^{i t})| - e^{lambda(t)} |
    double min_boundary_speed = 0.0;
    double closure_gap = 0.0;      // |Phi(1) - Phi(1)| through the series, == 0 by gauge
    int degree = 0;                // winding of the tangent d/dtheta Phi along the boundary
};

struct DiskImmersion {
    complexd base{0.0, 0.0};          // Phi(0)
    std::vector<complexd> b;          // Taylor coefficients of Phi'
    ConformalFactor factor;           // boundary factor it was built from
    double theta0 = 0.0;
    ImmersionCertificate cert;

    // Phi'(z), plain Horner.
    [[nodiscard]] complexd dmap(complexd z) const {
        complexd acc(0.0, 0.0);
        for (int k = static_cast<int>(b.size()) - 1; k >= 0; --k) acc = acc * z + b[k];
        return acc;
    }

    // Phi(z) = base + sum b_k z^{k+1} / (k+1).
    [[nodiscard]] complexd map(complexd z) const {
        complexd acc(0.0, 0.0);
        for (int k = static_cast<int>(b.size()) - 1; k >= 0; --k)
            acc = acc * z + b[k] / double(k + 1);
        return base + acc * z;
    }

    [[nodiscard]] complexd boundary(double theta) const { return map(std::polar(1.0, theta)); }

    [[nodiscard]] complexd boundary_tangent(double theta) const {
        const complexd z = std::polar(1.0, theta);
        return complexd(0.0, 1.0) * z * dmap(z);
    }

    [[nodiscard]] double boundary_speed(double theta) const {
        return std::abs(dmap(std::polar(1.0, theta)));
    }
};

// Build the immersion from its factor. The exponential of the holomorphic
// extension is computed on a doubled grid; coefficients of negative modes
// measure the truncation error and feed the certificate.
[[nodiscard]] inline DiskImmersion immersion_from_factor(const ConformalFactor& cf,
                                                         double theta0 = 0.0,
                                                         double cert_tol = 1e-10) {
    const int n = cf.n();
    const SpectralField ls = analyze(cf.lambda);
    check_resolution(ls, AliasGuard{}, "immersion_from_factor");

    // Boundary values of g = lambda + i conjugate(lambda) as a one-sided
    // series: coefficients c_0 = mean, c_m = 2 lambda_hat(m) for m >= 1.
    const int n2 = 2 * n;
    SpectralField gs = SpectralField::zeros(n2);
    gs.set_coeff(0, complexd(ls.coeff(0).real(), 0.0));
    for (int m = 1; m <= n / 2 - 1; ++m) gs.set_coeff(m, 2.0 * ls.coeff(m));

    // e^{g} sampled on the doubled grid; its analysis gives the Taylor
    // coefficients of Phi' directly (negative modes vanish analytically).
    GridField gb = synthesize(gs);
    for (auto& z : gb.v) z = std::exp(z) * std::polar(1.0, theta0);
    const SpectralField ps = analyze(gb);

    DiskImmersion im;
    im.factor = cf;
    im.theta0 = theta0;
    im.b.resize(n2 / 2);
    for (int m = 0; m < n2 / 2; ++m) im.b[m] = ps.coeff(m);
    while (im.b.size() > 1 && std::abs(im.b.back()) < 1e-17) im.b.pop_back();

    double neg_energy = 0.0;
    for (int m = 1; m <= n2 / 2; ++m) neg_energy += std::norm(ps.coeff(-m));

    // Gauge: Phi(1) = 0.
    complexd at_one(0.0, 0.0);
    for (size_t k = 0; k < im.b.size(); ++k) at_one += im.b[k] / double(k + 1);
    im.base = -at_one;

    // Certificates on a grid finer than the factor's own.
    double match = std::sqrt(neg_energy);
    double min_speed = std::numeric_limits<double>::infinity();
    std::vector<complexd> tangent(n2);
    const SpectralField lf = resize_modes(ls, n2);
    for (int j = 0; j < n2; ++j) {
        const double t = two_pi * j / n2;
        const double speed = im.boundary_speed(t);
        const double target = std::exp(eval_at(lf, t).real());
        match = std::max(match, std::abs(speed - target));
        min_speed = std::min(min_speed, speed);
        tangent[j] = im.boundary_tangent(t);
    }
    im.cert.boundary_match = match;
    im.cert.min_boundary_speed = min_speed;
    im.cert.closure_gap = std::abs(im.map(complexd(1.0, 0.0)));
    im.cert.degree = winding_number(tangent);

    if (!(match <= cert_tol))
        throw numeric_error("immersion certificate failed: boundary speed mismatch " +
                            std::to_string(match));
    if (!(min_speed > 0.0))
        throw numeric_error("immersion certificate failed: vanishing boundary speed");
    return im;
}

// Pull the factor back under precomposition with a disk automorphism:
// Phi -> Phi o M gives lambda'(t) = lambda(sigma(t)) + log |M'(e^{it})| with
// sigma the boundary angle of M. Output resolution escalates until the
// spectral tail passes the alias guard (or the cap is hit).
[[nodiscard]] inline ConformalFactor moebius_pullback(const ConformalFactor& cf,
                                                      const MoebiusMap& m,
                                                      int n_max = 1 << 17) {
    const SpectralField ls = analyze(cf.lambda);
    int n = cf.n();
    for (;;) {
        GridField out = GridField::from_function(n, [&](double t) {
            const double sigma = m.boundary_angle(t);
            return eval_at(ls, sigma).real() + m.boundary_log_stretch(t);
        });
        const SpectralField os = analyze(out);
        const double tail = os.tail_energy_fraction(n / 4);
        if (tail < 1e-16 || n >= n_max) {
            if (tail >= 1e-10)
                throw aliasing_error(
                    "moebius_pullback: factor unresolved at the size cap; "
                    "needs n > " + std::to_string(n_max));
            return ConformalFactor(out);
        }
        n *= 2;
    }
}

// Parameter recovery for factors of automorphism type. The mode-1
// coefficient of log |M'_a| is conj(a); the mean fixes the multiplicative
// normalization exp(-lambda_bar) (1 - |a|^2).
struct MoebiusFit {
    complexd a{0.0, 0.0};
    double c0 = 1.0;       // curvature scale in |m|-eq(lambda) = c0 e^lambda - 1
    double residual = 0.0; // sup distance to the fitted closed form
};

[[nodiscard]] inline MoebiusFit fit_moebius_factor(const GridField& lambda) {
    const SpectralField s = analyze(lambda);
    MoebiusFit fit;
    fit.a = std::conj(s.coeff(1));
    if (std::abs(fit.a) > 1.0 - 1e-12)
        throw numeric_error("fitted automorphism pole reaches the boundary");
    fit.c0 = (1.0 - std::norm(fit.a)) * std::exp(-s.coeff(0).real());
    const MoebiusMap map(fit.a, 0.0);
    double sup = 0.0;
    for (int j = 0; j < lambda.n(); ++j) {
        const double t = lambda.theta(j);
        const double model = map.boundary_log_stretch(t) - std::log(fit.c0);
        sup = std::max(sup, std::abs(lambda.v[j].real() - model));
    }
    fit.residual = sup;
    return fit;
}

// Map-level variant: for Phi = translation + rotation of M_a,
// Phi''(0) / (2 Phi'(0)) = conj(a).
[[nodiscard]] inline complexd fit_moebius_from_map(const DiskImmersion& im) {
    if (im.b.size() < 2 || std::abs(im.b[0]) == 0.0)
        throw std::invalid_argument("immersion too degenerate for a pole fit");
    return std::conj(im.b[1] / (2.0 * im.b[0]));
}

}  // namespace liouville
